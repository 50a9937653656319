//! Degree-layer identities of `𝒫̃_V`.
//!
//! With `ℓ_n = −λ + Σ_j ρ^j_{n_j} z_j` and `h = Π_n ℓ_n`:
//!
//! * the `|a| + b = Q − 1` layer equals `[V] Σ_n h / ℓ_n`;
//! * for real `V`, the `Q − 2` layer minus that of `Π_n t_n(z, [V] − λ)` equals
//!   `(h/2) Σ_{n≠n′} −|V^(n − n′)|² / (ℓ_n ℓ_{n′})`.
//!
//! Both right-hand sides are expanded with denominators cleared, so every
//! object stays a polynomial.

use num_complex::Complex64;
use rand::Rng;

use super::{recover_ptilde, TildeRoute};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Scalar};
use crate::lattice::{LatticeKind, LatticeSpec, MultiIndex};
use crate::potential::{dft, mean, same_spec, Potential};
use crate::rng;

fn require_hypercubic(spec: &LatticeSpec) -> Result<()> {
    if spec.kind() != LatticeKind::Hypercubic {
        return Err(Error::LatticeMismatch("identity is stated for the hypercubic lattice".into()));
    }
    Ok(())
}

fn phases(spec: &LatticeSpec, n: &MultiIndex) -> Vec<Complex64> {
    (0..spec.dim()).map(|j| spec.phase(j, n.coords()[j])).collect()
}

/// `ℓ_n = −λ + Σ_j ρ^j_{n_j} z_j`.
fn ell(spec: &LatticeSpec, n: &MultiIndex) -> LaurentPoly {
    let zero = vec![Complex64::default(); spec.dim()];
    LaurentPoly::linear(&phases(spec, n), &zero, Complex64::new(-1.0, 0.0), Complex64::default(), Scalar::Lambda)
}

/// `t_n(z, x − λ) = x − λ + Σ_j (ρ^j_{n_j} z_j + 1/(ρ^j_{n_j} z_j))`.
pub fn t_poly(spec: &LatticeSpec, n: &MultiIndex, x: Complex64) -> LaurentPoly {
    let up = phases(spec, n);
    let down: Vec<Complex64> = up.iter().map(|p| p.conj()).collect();
    LaurentPoly::linear(&up, &down, Complex64::new(-1.0, 0.0), x, Scalar::Lambda)
}

fn product(factors: &[LaurentPoly], nvars: usize) -> LaurentPoly {
    factors
        .iter()
        .fold(LaurentPoly::constant(nvars, Complex64::new(1.0, 0.0), Scalar::Lambda), |acc, f| acc.mul(f))
}

/// `h(z, λ) = Π_{n∈W} ℓ_n`.
pub fn h_poly(spec: &LatticeSpec) -> Result<LaurentPoly> {
    require_hypercubic(spec)?;
    let factors: Vec<LaurentPoly> = spec.fundamental_domain().iter().map(|n| ell(spec, n)).collect();
    Ok(product(&factors, spec.dim()))
}

/// Both sides of an expanded identity and their discrepancy.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    /// `max |lhs − rhs| / max(1, ‖lhs‖_∞, ‖rhs‖_∞)` over coefficients.
    pub residual: f64,
}

impl IdentityCheck {
    fn new(lhs: LaurentPoly, rhs: LaurentPoly) -> Self {
        let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff()).max(1.0);
        let residual = lhs.max_abs_diff(&rhs) / scale;
        IdentityCheck { lhs, rhs, residual }
    }
}

/// The `Q − 1` layer identity `h¹_V = [V] Σ_n h / ℓ_n`.
pub fn check_h1(v: &Potential) -> Result<IdentityCheck> {
    let spec = v.spec();
    require_hypercubic(spec)?;
    let q = spec.volume();
    let h1 = recover_ptilde(v, TildeRoute::Dual)?.total_degree_filter(q as i64 - 1);
    let factors: Vec<LaurentPoly> = spec.fundamental_domain().iter().map(|n| ell(spec, n)).collect();
    let one = LaurentPoly::constant(spec.dim(), Complex64::new(1.0, 0.0), Scalar::Lambda);
    // prefix[i] = Π_{m<i} ℓ_m, suffix[i] = Π_{m≥i} ℓ_m
    let mut prefix = vec![one.clone()];
    for f in &factors {
        let next = prefix.last().expect("non-empty").mul(f);
        prefix.push(next);
    }
    let mut suffix = vec![one; q + 1];
    for i in (0..q).rev() {
        suffix[i] = factors[i].mul(&suffix[i + 1]);
    }
    let sum = (0..q).fold(LaurentPoly::zero(vec![0; spec.dim()], 0, Scalar::Lambda), |acc, i| {
        acc.add(&prefix[i].mul(&suffix[i + 1]))
    });
    Ok(IdentityCheck::new(h1, sum.scale(mean(v))))
}

/// The `Q − 2` layer identity for real `V`.
pub fn check_h2_diff(v: &Potential) -> Result<IdentityCheck> {
    let spec = v.spec();
    require_hypercubic(spec)?;
    if !v.is_real() {
        return Err(Error::NotReal("the second-layer identity"));
    }
    let q = spec.volume();
    let layer = q as i64 - 2;
    let f = dft(v);
    let avg = mean(v);
    let w = spec.fundamental_domain();

    let h2 = recover_ptilde(v, TildeRoute::Dual)?.total_degree_filter(layer);
    let diag: Vec<LaurentPoly> = w.iter().map(|n| t_poly(spec, n, avg)).collect();
    let h2_bar = product(&diag, spec.dim()).total_degree_filter(layer);

    let factors: Vec<LaurentPoly> = w.iter().map(|n| ell(spec, n)).collect();
    let mut rhs = LaurentPoly::zero(vec![0; spec.dim()], 0, Scalar::Lambda);
    for (i, n) in w.iter().enumerate() {
        for (k, np) in w.iter().enumerate() {
            if i == k {
                continue;
            }
            let diff: Vec<i64> = n.coords().iter().zip(np.coords()).map(|(a, b)| a - b).collect();
            let weight = f.get(&diff).norm_sqr();
            if weight == 0.0 {
                continue;
            }
            let rest: Vec<LaurentPoly> = factors
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != i && m != k)
                .map(|(_, p)| p.clone())
                .collect();
            rhs = rhs.add(&product(&rest, spec.dim()).scale(Complex64::new(-0.5 * weight, 0.0)));
        }
    }
    Ok(IdentityCheck::new(h2.sub(&h2_bar), rhs))
}

/// Evaluates `Σ_{n,n′∈W} |V^(n − n′)|² / (ℓ_n ℓ_{n′})` for `V` and `Y` at
/// `samples` points (`z` on the unit torus, `λ = μ + i`) and returns the
/// largest absolute difference.
pub fn check_g55(v: &Potential, y: &Potential, samples: usize, seed: u64) -> Result<f64> {
    same_spec(v.spec(), y.spec())?;
    let spec = v.spec();
    if !v.is_real() || !y.is_real() {
        return Err(Error::NotReal("the resolvent identity"));
    }
    let (fv, fy) = (dft(v), dft(y));
    let w = spec.fundamental_domain();
    let d = spec.dim();
    let radius = 2.0 * d as f64 + v.sup_norm().max(y.sup_norm());
    let ph: Vec<Vec<Complex64>> = w.iter().map(|n| phases(spec, n)).collect();
    let diffs: Vec<Vec<usize>> = w
        .iter()
        .map(|n| {
            w.iter()
                .map(|np| {
                    let diff: Vec<i64> = n.coords().iter().zip(np.coords()).map(|(a, b)| a - b).collect();
                    spec.flatten_mod(&diff)
                })
                .collect()
        })
        .collect();
    let pv: Vec<f64> = fv.coefficients().iter().map(|c| c.norm_sqr()).collect();
    let py: Vec<f64> = fy.coefficients().iter().map(|c| c.norm_sqr()).collect();

    let mut r = rng::stream(seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let z: Vec<Complex64> = (0..d)
            .map(|_| Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let lambda = Complex64::new(r.random_range(-radius..=radius), 1.0);
        let inv_ell: Vec<Complex64> = ph
            .iter()
            .map(|p| {
                let s: Complex64 = p.iter().zip(&z).map(|(a, b)| a * b).sum();
                (s - lambda).inv()
            })
            .collect();
        let mut lhs = Complex64::default();
        let mut rhs = Complex64::default();
        for i in 0..w.len() {
            for k in 0..w.len() {
                let g = inv_ell[i] * inv_ell[k];
                lhs += g * pv[diffs[i][k]];
                rhs += g * py[diffs[i][k]];
            }
        }
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Monomial;
    use crate::potential::{random_potential, translate, PotentialMode};

    fn real(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn spec(q: &[usize]) -> LatticeSpec {
        LatticeSpec::hypercubic(q).unwrap()
    }

    #[test]
    fn h_for_two_sites() {
        let h = h_poly(&spec(&[2])).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.coeff(&Monomial::new(vec![0], 2)), real(1.0));
        assert_eq!(h.coeff(&Monomial::new(vec![2], 0)), real(-1.0));
        let h1 = h_poly(&spec(&[1])).unwrap();
        assert_eq!(h1.coeff(&Monomial::new(vec![1], 0)), real(1.0));
        assert_eq!(h1.coeff(&Monomial::new(vec![0], 1)), real(-1.0));
        assert_eq!(h1.len(), 2);
    }

    #[test]
    fn h_is_homogeneous() {
        for q in [vec![2, 3], vec![2, 2, 2], vec![3]] {
            let s = spec(&q);
            let h = h_poly(&s).unwrap();
            assert!(h.terms().all(|(m, _)| m.total_degree() == s.volume() as i64));
        }
    }

    #[test]
    fn h1_two_site_hand_values() {
        let v = Potential::from_real(spec(&[2]), &[0.7, 0.2]).unwrap();
        let chk = check_h1(&v).unwrap();
        assert!(chk.residual <= 1e-14);
        let expected = real(-(0.7 + 0.2));
        assert!((chk.lhs.coeff(&Monomial::new(vec![0], 1)) - expected).norm() < 1e-14);
        assert!((chk.rhs.coeff(&Monomial::new(vec![0], 1)) - expected).norm() < 1e-14);
    }

    #[test]
    fn h1_vanishes_for_zero_mean() {
        let s = spec(&[2, 3]);
        let v = random_potential(&s, 3, &PotentialMode::Complex).unwrap();
        let v = v.shifted(-mean(&v));
        let chk = check_h1(&v).unwrap();
        assert!(chk.lhs.max_abs_coeff() <= 1e-12);
        assert!(chk.rhs.max_abs_coeff() <= 1e-12);
    }

    #[test]
    fn h1_random_complex() {
        let v = random_potential(&spec(&[2, 3]), 4, &PotentialMode::Complex).unwrap();
        assert!(check_h1(&v).unwrap().residual <= 1e-10);
    }

    #[test]
    fn h2_two_site_hand_value() {
        let v = Potential::from_real(spec(&[2]), &[1.3, -0.6]).unwrap();
        let chk = check_h2_diff(&v).unwrap();
        let vhat1 = (1.3 - (-0.6)) / 2.0;
        let expected = real(-vhat1 * vhat1);
        let key = Monomial::new(vec![0], 0);
        assert!((chk.lhs.coeff(&key) - expected).norm() <= 1e-14);
        assert!((chk.rhs.coeff(&key) - expected).norm() <= 1e-14);
        assert!(chk.residual <= 1e-14);
    }

    #[test]
    fn h2_constant_potential() {
        let chk = check_h2_diff(&Potential::constant(spec(&[2, 2]), real(0.4))).unwrap();
        assert!(chk.lhs.max_abs_coeff() <= 1e-12);
        assert!(chk.rhs.is_empty());
    }

    #[test]
    fn h2_random_real() {
        let v = random_potential(&spec(&[2, 2]), 5, &PotentialMode::Real).unwrap();
        assert!(check_h2_diff(&v).unwrap().residual <= 1e-10);
        let c = random_potential(&spec(&[2, 2]), 5, &PotentialMode::Complex).unwrap();
        assert!(matches!(check_h2_diff(&c), Err(Error::NotReal(_))));
    }

    #[test]
    fn resolvent_cases() {
        let s = spec(&[2, 3]);
        let v = random_potential(&s, 8, &PotentialMode::Real).unwrap();
        assert_eq!(check_g55(&v, &v, 20, 1).unwrap(), 0.0);
        let y = translate(&v, &MultiIndex(vec![1, 2])).unwrap();
        assert!(check_g55(&v, &y, 50, 2).unwrap() <= 1e-9);
        let planted = random_potential(
            &s,
            8,
            &PotentialMode::Nonseparable { pattern: vec![1, 1], complex: false },
        )
        .unwrap();
        let base = random_potential(&s, 8, &PotentialMode::Separable { pattern: vec![1, 1], complex: false }).unwrap();
        assert!(check_g55(&base, &planted, 50, 3).unwrap() >= 1e-3);
    }

    #[test]
    fn triangular_is_rejected() {
        let t = LatticeSpec::triangular(2, 2).unwrap();
        assert!(h_poly(&t).is_err());
        assert!(check_h1(&Potential::zero(t)).is_err());
    }
}
