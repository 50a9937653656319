//! Periodic potentials on the fundamental domain and their discrete Fourier
//! transforms.
//!
//! `dft` uses `V^(l) = (1/Q) Σ_n V(n) exp(-2πi Σ_j l_j n_j / q_j)` and `idft`
//! the unnormalized inverse, both by direct `O(Q²)` summation. Coefficients
//! are extended to all of `Z^d` periodically.

mod random;
mod separable;

pub use random::{plant_cross_coefficient, random_potential, random_potential_from, PotentialMode};
pub use separable::{
    is_separable, join, split, SeparabilityPattern, SeparabilityVerdict, SeparableParts,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{root_of_unity, LatticeSpec, MultiIndex};

pub const DEFAULT_SEPARABILITY_TOL: f64 = 1e-9;

/// Complex values of a periodic potential on `W`, in canonical flat order.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    spec: LatticeSpec,
    values: Vec<Complex64>,
}

impl Potential {
    pub fn new(spec: LatticeSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.volume() {
            return Err(Error::DimensionMismatch(format!(
                "potential has {} values, lattice volume is {}",
                values.len(),
                spec.volume()
            )));
        }
        Ok(Potential { spec, values })
    }

    pub fn from_real(spec: LatticeSpec, values: &[f64]) -> Result<Self> {
        Self::new(spec, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(spec: LatticeSpec, c: Complex64) -> Self {
        let values = vec![c; spec.volume()];
        Potential { spec, values }
    }

    pub fn zero(spec: LatticeSpec) -> Self {
        Self::constant(spec, Complex64::new(0.0, 0.0))
    }

    /// `scale · δ_{n, 0}`.
    pub fn delta(spec: LatticeSpec, scale: Complex64) -> Self {
        let mut v = Self::zero(spec);
        v.values[0] = scale;
        v
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at an arbitrary lattice point (periodic extension).
    pub fn at(&self, n: &[i64]) -> Complex64 {
        self.values[self.spec.flatten_mod(n)]
    }

    /// True iff every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn shifted(&self, c: Complex64) -> Potential {
        Potential {
            spec: self.spec.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn add(&self, other: &Potential) -> Result<Potential> {
        same_spec(&self.spec, &other.spec)?;
        Ok(Potential {
            spec: self.spec.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

pub fn same_spec(a: &LatticeSpec, b: &LatticeSpec) -> Result<()> {
    if a != b {
        return Err(Error::LatticeMismatch(format!(
            "{:?}/{} vs {:?}/{}",
            a.periods(),
            a.kind(),
            b.periods(),
            b.kind()
        )));
    }
    Ok(())
}

/// Fourier coefficients `V^(l)`, `l ∈ W`, canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    spec: LatticeSpec,
    coefficients: Vec<Complex64>,
}

impl FourierTable {
    pub fn new(spec: LatticeSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != spec.volume() {
            return Err(Error::DimensionMismatch(format!(
                "table has {} coefficients, lattice volume is {}",
                coefficients.len(),
                spec.volume()
            )));
        }
        Ok(FourierTable { spec, coefficients })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `V^(l)` for any `l ∈ Z^d`.
    pub fn get(&self, l: &[i64]) -> Complex64 {
        self.coefficients[self.spec.flatten_mod(l)]
    }

    pub fn at(&self, l: &MultiIndex) -> Complex64 {
        self.get(l.coords())
    }

    pub fn sup_norm(&self) -> f64 {
        self.coefficients.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ_{l∈W} |V^(l)|²`.
    pub fn power_sum(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Numerator of `Σ_j l_j n_j / q_j` over the common denominator `Q`, mod `Q`.
fn pairing(spec: &LatticeSpec, l: &[i64], n: &[i64]) -> i64 {
    let q_total = spec.volume() as i64;
    let mut acc = 0i64;
    for ((&lj, &nj), &qj) in l.iter().zip(n).zip(spec.periods()) {
        let qj = qj as i64;
        acc += (lj * nj).rem_euclid(qj) * (q_total / qj);
    }
    acc.rem_euclid(q_total)
}

fn transform(spec: &LatticeSpec, input: &[Complex64], sign: i64, norm: f64) -> Vec<Complex64> {
    let q = spec.volume();
    let roots: Vec<Complex64> = (0..q as i64).map(|k| root_of_unity(q, sign * k)).collect();
    let domain = spec.fundamental_domain();
    domain
        .iter()
        .map(|l| {
            let sum: Complex64 = domain
                .iter()
                .zip(input)
                .map(|(n, v)| v * roots[pairing(spec, l.coords(), n.coords()) as usize])
                .sum();
            sum * norm
        })
        .collect()
}

pub fn dft(v: &Potential) -> FourierTable {
    let q = v.spec.volume() as f64;
    FourierTable {
        spec: v.spec.clone(),
        coefficients: transform(&v.spec, &v.values, -1, 1.0 / q),
    }
}

pub fn idft(f: &FourierTable) -> Potential {
    Potential {
        spec: f.spec.clone(),
        values: transform(&f.spec, &f.coefficients, 1, 1.0),
    }
}

/// `[V] = (1/Q) Σ_n V(n)`.
pub fn mean(v: &Potential) -> Complex64 {
    v.values.iter().sum::<Complex64>() / v.values.len() as f64
}

/// `result(n) = V(n + t)`.
pub fn translate(v: &Potential, t: &MultiIndex) -> Result<Potential> {
    if t.coords().len() != v.spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "translation has {} coordinates, lattice has {}",
            t.coords().len(),
            v.spec.dim()
        )));
    }
    let values = v
        .spec
        .fundamental_domain()
        .iter()
        .map(|n| {
            let shifted: Vec<i64> = n.coords().iter().zip(t.coords()).map(|(a, b)| a + b).collect();
            v.at(&shifted)
        })
        .collect();
    Ok(Potential { spec: v.spec.clone(), values })
}
