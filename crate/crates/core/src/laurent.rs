//! Laurent polynomials in `z_1..z_d` (negative powers allowed) and one
//! ordinary variable (`λ` or `y`), stored as a sorted exponent map.
//!
//! Recovery from samples uses tensor grids of roots of unity: for a window
//! `[−A_j, A_j]` and a guard band `g`, axis `j` carries `N_j = 2(A_j + g) + 1`
//! points. The inverse DFT along every axis is exact for polynomials inside
//! the window; whatever lands in the guard band is reported as the
//! out-of-window residual.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::root_of_unity;

/// Relative magnitude below which recovered coefficients are dropped.
pub const PRUNE_REL: f64 = 1e-13;

/// Largest relative out-of-window residual accepted by [`recover`].
pub const RECOVERY_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: Vec<i32>,
    pub b: u32,
}

impl Monomial {
    pub fn new(z: Vec<i32>, b: u32) -> Self {
        Monomial { z, b }
    }

    /// `|a| + b`, negative `z` exponents counting negatively.
    pub fn total_degree(&self) -> i64 {
        self.z.iter().map(|&a| a as i64).sum::<i64>() + self.b as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scalar {
    Lambda,
    Y,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Lambda => f.write_str("lambda"),
            Scalar::Y => f.write_str("y"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    window: Vec<i32>,
    b_max: u32,
    scalar: Scalar,
    terms: BTreeMap<Monomial, Complex64>,
}

impl LaurentPoly {
    /// Zero polynomial with `z_j`-window `[−window[j], window[j]]` and scalar degree ≤ `b_max`.
    pub fn zero(window: Vec<i32>, b_max: u32, scalar: Scalar) -> Self {
        LaurentPoly {
            window,
            b_max,
            scalar,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64, scalar: Scalar) -> Self {
        let mut p = Self::zero(vec![0; nvars], 0, scalar);
        p.terms.insert(Monomial::new(vec![0; nvars], 0), c);
        p
    }

    /// `Σ_j (up_j z_j + down_j / z_j) + s·scalar + c`.
    pub fn linear(
        up: &[Complex64],
        down: &[Complex64],
        s: Complex64,
        c: Complex64,
        scalar: Scalar,
    ) -> Self {
        let d = up.len();
        assert_eq!(d, down.len());
        let mut p = Self::zero(vec![1; d], 1, scalar);
        let zero = Complex64::new(0.0, 0.0);
        let mut push = |m: Monomial, v: Complex64| {
            if v != zero {
                *p.terms.entry(m).or_insert(zero) += v;
            }
        };
        for j in 0..d {
            let mut e = vec![0; d];
            e[j] = 1;
            push(Monomial::new(e.clone(), 0), up[j]);
            e[j] = -1;
            push(Monomial::new(e, 0), down[j]);
        }
        push(Monomial::new(vec![0; d], 1), s);
        push(Monomial::new(vec![0; d], 0), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn b_max(&self) -> u32 {
        self.b_max
    }

    pub fn scalar(&self) -> Scalar {
        self.scalar
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    fn in_window(&self, m: &Monomial) -> bool {
        m.z.len() == self.window.len()
            && m.b <= self.b_max
            && m.z.iter().zip(&self.window).all(|(&a, &w)| a.abs() <= w)
    }

    /// Adds `c` to the coefficient of `m`.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) -> Result<()> {
        if !self.in_window(&m) {
            return Err(Error::OutsideWindow {
                exponents: m.z,
                power: m.b,
            });
        }
        *self.terms.entry(m).or_default() += c;
        Ok(())
    }

    pub fn eval(&self, z: &[Complex64], s: Complex64) -> Complex64 {
        assert_eq!(z.len(), self.nvars());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = *c * s.powu(m.b);
                for (zj, &a) in z.iter().zip(&m.z) {
                    t *= zj.powi(a);
                }
                t
            })
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise difference `max_m |a_m − b_m|`.
    pub fn max_abs_diff(&self, other: &LaurentPoly) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coeff(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// `max_abs_diff` divided by the larger coefficient sup-norm (1 if both vanish).
    pub fn relative_diff(&self, other: &LaurentPoly) -> f64 {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        let diff = self.max_abs_diff(other);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn pruned(&self, abs_tol: f64) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > abs_tol)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
            ..self.clone_empty()
        }
    }

    fn drop_exact_zeros(&mut self) {
        self.terms.retain(|_, c| *c != Complex64::default());
    }

    fn clone_empty(&self) -> LaurentPoly {
        LaurentPoly::zero(self.window.clone(), self.b_max, self.scalar)
    }

    fn filtered(&self, keep: impl Fn(&Monomial) -> bool) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
            ..self.clone_empty()
        }
    }

    /// Monomials with `a_1 + … + a_d + b = m`.
    pub fn total_degree_filter(&self, m: i64) -> LaurentPoly {
        self.filtered(|mono| mono.total_degree() == m)
    }

    /// Monomials whose `z`-exponents on `axes` sum to `m` (scalar power ignored).
    pub fn partial_degree_filter(&self, axes: &[usize], m: i64) -> LaurentPoly {
        self.filtered(|mono| axes.iter().map(|&j| mono.z[j] as i64).sum::<i64>() == m)
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars(), other.nvars());
        let window = self.window.iter().zip(&other.window).map(|(a, b)| a + b).collect();
        let mut out = LaurentPoly::zero(window, self.b_max + other.b_max, self.scalar);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let z = ma.z.iter().zip(&mb.z).map(|(a, b)| a + b).collect();
                *out.terms.entry(Monomial::new(z, ma.b + mb.b)).or_default() += ca * cb;
            }
        }
        out.drop_exact_zeros();
        out
    }

    fn merged_window(&self, other: &LaurentPoly) -> (Vec<i32>, u32) {
        assert_eq!(self.nvars(), other.nvars());
        let window = self.window.iter().zip(&other.window).map(|(a, b)| *a.max(b)).collect();
        (window, self.b_max.max(other.b_max))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &LaurentPoly, sign: Complex64) -> LaurentPoly {
        let (window, b_max) = self.merged_window(other);
        let mut out = LaurentPoly {
            window,
            b_max,
            scalar: self.scalar,
            terms: self.terms.clone(),
        };
        for (m, c) in &other.terms {
            *out.terms.entry(m.clone()).or_default() += sign * c;
        }
        out.drop_exact_zeros();
        out
    }

    pub fn scale(&self, s: Complex64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
            ..self.clone_empty()
        }
    }

    /// `z_j → z_j^{q_j}` (exponent `a_j → q_j a_j`).
    pub fn substitute_powers(&self, q: &[usize]) -> LaurentPoly {
        assert_eq!(q.len(), self.nvars());
        let window = self.window.iter().zip(q).map(|(&w, &qj)| w * qj as i32).collect();
        LaurentPoly {
            window,
            b_max: self.b_max,
            scalar: self.scalar,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let z = m.z.iter().zip(q).map(|(&a, &qj)| a * qj as i32).collect();
                    (Monomial::new(z, m.b), *c)
                })
                .collect(),
        }
    }

    /// Restricts to the variables on `axes`; fails if a dropped variable carries
    /// a nonzero exponent.
    pub fn select_vars(&self, axes: &[usize]) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(
            axes.iter().map(|&j| self.window[j]).collect(),
            self.b_max,
            self.scalar,
        );
        for (m, c) in &self.terms {
            let dropped = (0..self.nvars()).filter(|j| !axes.contains(j)).any(|j| m.z[j] != 0);
            if dropped {
                return Err(Error::DimensionMismatch(format!(
                    "monomial {:?}/{} depends on a dropped variable",
                    m.z, m.b
                )));
            }
            let z = axes.iter().map(|&j| m.z[j]).collect();
            out.terms.insert(Monomial::new(z, m.b), *c);
        }
        Ok(out)
    }

    pub fn with_scalar(mut self, scalar: Scalar) -> LaurentPoly {
        self.scalar = scalar;
        self
    }

    /// One line `a_1 … a_d b re im` per stored term, in key order, with
    /// 17 significant digits.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            for a in &m.z {
                let _ = write!(out, "{a} ");
            }
            let _ = writeln!(out, "{} {:.16e} {:.16e}", m.b, c.re, c.im);
        }
        out
    }

    /// Parses [`to_dump`](Self::to_dump) output. The window is the smallest
    /// one containing every parsed term.
    pub fn from_dump(text: &str, nvars: usize, scalar: Scalar) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(vec![0; nvars], 0, scalar);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            if toks.len() != nvars + 3 {
                return Err(bad(&format!("expected {} fields, got {}", nvars + 3, toks.len())));
            }
            let z = toks[..nvars]
                .iter()
                .map(|t| t.parse::<i32>().map_err(|_| bad("bad exponent")))
                .collect::<Result<Vec<_>>>()?;
            let b: u32 = toks[nvars].parse().map_err(|_| bad("bad scalar exponent"))?;
            let re: f64 = toks[nvars + 1].parse().map_err(|_| bad("bad real part"))?;
            let im: f64 = toks[nvars + 2].parse().map_err(|_| bad("bad imaginary part"))?;
            for (w, &a) in p.window.iter_mut().zip(&z) {
                *w = (*w).max(a.abs());
            }
            p.b_max = p.b_max.max(b);
            p.terms.insert(Monomial::new(z, b), Complex64::new(re, im));
        }
        Ok(p)
    }
}

/// Sampling grid for coefficient recovery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootGrid {
    window: Vec<i32>,
    guard: usize,
}

impl RootGrid {
    pub fn new(window: Vec<i32>, guard: usize) -> Self {
        RootGrid { window, guard }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.window
            .iter()
            .map(|&a| 2 * (a as usize + self.guard) + 1)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.sizes().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points in lexicographic order (last axis fastest).
    pub fn points(&self) -> Vec<Vec<Complex64>> {
        let sizes = self.sizes();
        let total: usize = sizes.iter().product();
        (0..total)
            .map(|mut flat| {
                let mut z = vec![Complex64::default(); sizes.len()];
                for (zj, &n) in z.iter_mut().zip(&sizes).rev() {
                    *zj = root_of_unity(n, (flat % n) as i64);
                    flat /= n;
                }
                z
            })
            .collect()
    }
}

/// Coefficients recovered on a grid, together with the out-of-window residual.
#[derive(Debug, Clone)]
pub struct Recovered {
    pub poly: LaurentPoly,
    /// Largest guard-band coefficient relative to the largest in-window one.
    pub residual: f64,
}

/// Recovers the Laurent polynomial whose scalar-coefficient vectors at each
/// grid point are returned by `sample` (length `b_max + 1`, constant term first).
pub fn interpolate<F>(
    window: &[i32],
    b_max: u32,
    guard: usize,
    scalar: Scalar,
    mut sample: F,
) -> Result<Recovered>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let grid = RootGrid::new(window.to_vec(), guard);
    let sizes = grid.sizes();
    let width = b_max as usize + 1;
    let mut data: Vec<Complex64> = Vec::with_capacity(grid.len() * width);
    for z in grid.points() {
        let coeffs = sample(&z)?;
        if coeffs.len() > width {
            return Err(Error::DimensionMismatch(format!(
                "sample returned {} coefficients, window allows {width}",
                coeffs.len()
            )));
        }
        data.extend_from_slice(&coeffs);
        data.resize(data.len() + width - coeffs.len(), Complex64::default());
    }

    // inverse DFT along each axis; output slot k holds exponent k − half
    let d = sizes.len();
    for axis in 0..d {
        let n = sizes[axis];
        let half = (n / 2) as i64;
        let inner: usize = sizes[axis + 1..].iter().product::<usize>() * width;
        let outer: usize = sizes[..axis].iter().product();
        let twiddle: Vec<Complex64> = (0..n * n)
            .map(|km| {
                let (k, m) = ((km / n) as i64, (km % n) as i64);
                root_of_unity(n, -(k - half) * m)
            })
            .collect();
        let norm = 1.0 / n as f64;
        let mut line = vec![Complex64::default(); n];
        for o in 0..outer {
            for i in 0..inner {
                let base = o * n * inner + i;
                for (m, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + m * inner];
                }
                for k in 0..n {
                    let row = &twiddle[k * n..(k + 1) * n];
                    let s: Complex64 = line.iter().zip(row).map(|(x, w)| x * w).sum();
                    data[base + k * inner] = s * norm;
                }
            }
        }
    }

    let mut poly = LaurentPoly::zero(window.to_vec(), b_max, scalar);
    let mut outside = 0.0f64;
    let cells: usize = sizes.iter().product();
    for cell in 0..cells {
        let mut rem = cell;
        let mut z = vec![0i32; d];
        for (a, &n) in z.iter_mut().zip(&sizes).rev() {
            *a = (rem % n) as i32 - (n / 2) as i32;
            rem /= n;
        }
        let inside = z.iter().zip(window).all(|(a, w)| a.abs() <= *w);
        for b in 0..width {
            let c = data[cell * width + b];
            if inside {
                poly.terms.insert(Monomial::new(z.clone(), b as u32), c);
            } else {
                outside = outside.max(c.norm());
            }
        }
    }
    let scale = poly.max_abs_coeff();
    let poly = poly.pruned(PRUNE_REL * scale);
    let residual = if scale > 0.0 { outside / scale } else { outside };
    Ok(Recovered { poly, residual })
}

/// [`interpolate`], failing when the out-of-window residual exceeds
/// [`RECOVERY_RESIDUAL_TOL`].
pub fn recover<F>(window: &[i32], b_max: u32, guard: usize, scalar: Scalar, sample: F) -> Result<LaurentPoly>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let rec = interpolate(window, b_max, guard, scalar, sample)?;
    if rec.residual > RECOVERY_RESIDUAL_TOL {
        return Err(Error::RecoveryResidual {
            residual: rec.residual,
            limit: RECOVERY_RESIDUAL_TOL,
        });
    }
    Ok(rec.poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lam() -> LaurentPoly {
        LaurentPoly::linear(&[c(0.0, 0.0)], &[c(0.0, 0.0)], c(1.0, 0.0), c(0.0, 0.0), Scalar::Lambda)
    }

    fn zvar() -> LaurentPoly {
        LaurentPoly::linear(&[c(1.0, 0.0)], &[c(0.0, 0.0)], c(0.0, 0.0), c(0.0, 0.0), Scalar::Lambda)
    }

    #[test]
    fn homogeneous_filter_keeps_everything() {
        // λ² − 2λz + z²
        let d = lam().sub(&zvar());
        let p = d.mul(&d);
        assert_eq!(p.len(), 3);
        assert_eq!(p.total_degree_filter(2), p);
        assert!(p.total_degree_filter(5).is_empty());
        assert_eq!(p.coeff(&Monomial::new(vec![1], 1)), c(-2.0, 0.0));
    }

    #[test]
    fn negative_exponents_count_negatively() {
        let p = LaurentPoly::linear(&[c(1.0, 0.0)], &[c(1.0, 0.0)], c(-1.0, 0.0), c(3.0, 0.0), Scalar::Lambda);
        assert_eq!(p.total_degree_filter(-1).len(), 1);
        assert_eq!(p.total_degree_filter(1).len(), 2);
        assert_eq!(p.total_degree_filter(0).len(), 1);
    }

    #[test]
    fn window_is_enforced() {
        let mut p = LaurentPoly::zero(vec![1, 1], 2, Scalar::Lambda);
        assert!(p.add_term(Monomial::new(vec![1, -1], 2), c(1.0, 0.0)).is_ok());
        assert!(p.add_term(Monomial::new(vec![2, 0], 0), c(1.0, 0.0)).is_err());
        assert!(p.add_term(Monomial::new(vec![0, 0], 3), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn substitution_scales_exponents() {
        let p = LaurentPoly::linear(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(0.5, 0.0), c(0.0, 0.0)], c(1.0, 0.0), c(0.0, 0.0), Scalar::Lambda);
        let s = p.substitute_powers(&[2, 3]);
        assert_eq!(s.coeff(&Monomial::new(vec![2, 0], 0)), c(1.0, 0.0));
        assert_eq!(s.coeff(&Monomial::new(vec![0, 3], 0)), c(2.0, 0.0));
        assert_eq!(s.coeff(&Monomial::new(vec![-2, 0], 0)), c(0.5, 0.0));
        let z = [c(0.3, 0.4), c(-1.1, 0.2)];
        let zq = [z[0].powu(2), z[1].powu(3)];
        assert!((s.eval(&z, c(0.7, 0.0)) - p.eval(&zq, c(0.7, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn interpolation_recovers_known_polynomial() {
        // (z1 + 1/z2 − λ)(z1 z2 + 2) with windows [2, 1]
        let a = LaurentPoly::linear(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)], c(-1.0, 0.0), c(0.0, 0.0), Scalar::Lambda);
        let mut b = LaurentPoly::zero(vec![1, 1], 0, Scalar::Lambda);
        b.add_term(Monomial::new(vec![1, 1], 0), c(1.0, 0.0)).unwrap();
        b.add_term(Monomial::new(vec![0, 0], 0), c(2.0, -1.0)).unwrap();
        let target = a.mul(&b);
        let rec = interpolate(&[2, 1], 1, 1, Scalar::Lambda, |z| {
            Ok((0..2)
                .map(|k| {
                    target
                        .terms()
                        .filter(|(m, _)| m.b == k)
                        .map(|(m, cf)| cf * z[0].powi(m.z[0]) * z[1].powi(m.z[1]))
                        .sum()
                })
                .collect())
        })
        .unwrap();
        assert!(rec.residual < 1e-14);
        assert!(rec.poly.max_abs_diff(&target) < 1e-14);
    }

    #[test]
    fn guard_band_detects_window_violation() {
        // z^2 sampled with a window of 1
        let rec = interpolate(&[1], 0, 1, Scalar::Lambda, |z| Ok(vec![z[0] * z[0]])).unwrap();
        assert!(rec.residual > 0.5);
        assert!(recover(&[1], 0, 1, Scalar::Lambda, |z| Ok(vec![z[0] * z[0]])).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let d = lam().sub(&zvar()).add(&LaurentPoly::linear(&[c(0.0, 0.0)], &[c(0.1, 0.7)], c(0.0, 0.0), c(1.0 / 3.0, -2e-17), Scalar::Lambda));
        let p = d.mul(&d).mul(&d);
        let text = p.to_dump();
        let back = LaurentPoly::from_dump(&text, 1, Scalar::Lambda).unwrap();
        assert_eq!(back.max_abs_diff(&p), 0.0);
        assert_eq!(back.to_dump(), text);
        assert!(text.lines().next().unwrap().starts_with("-3 0 "));
        assert!(LaurentPoly::from_dump("1 2 3", 1, Scalar::Lambda).is_err());
    }

    #[test]
    fn select_vars_requires_independence() {
        let p = LaurentPoly::linear(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0); 2], c(1.0, 0.0), c(0.0, 0.0), Scalar::Y);
        let q = p.select_vars(&[1]).unwrap();
        assert_eq!(q.nvars(), 1);
        assert_eq!(q.coeff(&Monomial::new(vec![1], 0)), c(1.0, 0.0));
        assert!(p.select_vars(&[0]).is_err());
    }
}
