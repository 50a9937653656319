use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{join, Potential, SeparabilityPattern};
use crate::error::{Error, Result};
use crate::lattice::{root_of_unity, LatticeSpec};
use crate::rng::{self, Stream};

/// What `random_potential` draws. Values are uniform in `[-1, 1)` (each of
/// real and imaginary part for complex modes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum PotentialMode {
    Real,
    Complex,
    /// Drawn constant plus independently drawn zero-mean block components.
    Separable { pattern: Vec<usize>, complex: bool },
    /// A separable draw with one planted cross coefficient of magnitude in `[0.5, 1)`.
    Nonseparable { pattern: Vec<usize>, complex: bool },
}

/// Deterministic draw from stream `(seed, 0)`.
pub fn random_potential(spec: &LatticeSpec, seed: u64, mode: &PotentialMode) -> Result<Potential> {
    random_potential_from(&mut rng::stream(seed, 0), spec, mode)
}

fn draw(rng: &mut Stream, complex: bool) -> Complex64 {
    let re = rng::uniform(rng, -1.0, 1.0);
    let im = if complex { rng::uniform(rng, -1.0, 1.0) } else { 0.0 };
    Complex64::new(re, im)
}

fn draw_values(rng: &mut Stream, spec: &LatticeSpec, complex: bool) -> Potential {
    let values = (0..spec.volume()).map(|_| draw(rng, complex)).collect();
    Potential::new(spec.clone(), values).expect("length matches volume")
}

pub fn random_potential_from(
    rng: &mut Stream,
    spec: &LatticeSpec,
    mode: &PotentialMode,
) -> Result<Potential> {
    match mode {
        PotentialMode::Real => Ok(draw_values(rng, spec, false)),
        PotentialMode::Complex => Ok(draw_values(rng, spec, true)),
        PotentialMode::Separable { pattern, complex } => {
            let p = SeparabilityPattern::new(spec, pattern)?;
            draw_separable(rng, &p, *complex)
        }
        PotentialMode::Nonseparable { pattern, complex } => {
            let p = SeparabilityPattern::new(spec, pattern)?;
            let v = draw_separable(rng, &p, *complex)?;
            plant_cross_coefficient(rng, &v, &p)
        }
    }
}

fn draw_separable(rng: &mut Stream, p: &SeparabilityPattern, complex: bool) -> Result<Potential> {
    let c = draw(rng, complex);
    let components: Vec<Potential> = (0..p.block_count())
        .map(|j| {
            let comp = draw_values(rng, &p.block_spec(j), complex);
            let m = super::mean(&comp);
            comp.shifted(-m)
        })
        .collect();
    join(c, &components, p)
}

/// Adds `a·e^{2πi l·n/q}` at a drawn cross index `l` (plus its conjugate
/// partner for real potentials), so that `|V^(l)|` grows by `|a| ≥ 0.5`.
pub fn plant_cross_coefficient(
    rng: &mut Stream,
    v: &Potential,
    p: &SeparabilityPattern,
) -> Result<Potential> {
    let cross = p.cross_set();
    if cross.is_empty() {
        return Err(Error::InvalidPattern(format!(
            "cross set is empty for periods {:?} and blocks {:?}",
            p.spec().periods(),
            p.blocks()
        )));
    }
    let pick = rng::uniform(rng, 0.0, cross.len() as f64) as usize;
    let l = &cross[pick.min(cross.len() - 1)];
    let magnitude = rng::uniform(rng, 0.5, 1.0);
    let spec = v.spec();
    let real = v.is_real();
    let neg: Vec<i64> = l.coords().iter().map(|x| -x).collect();
    let self_conjugate = spec.reduce_mod(&neg.clone().into()) == *l;
    let a = if real && self_conjugate {
        let sign = if rng::uniform(rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        Complex64::new(sign * magnitude, 0.0)
    } else {
        Complex64::from_polar(magnitude, rng::uniform(rng, 0.0, TAU))
    };
    let q_total = spec.volume();
    let values = spec
        .fundamental_domain()
        .iter()
        .zip(v.values())
        .map(|(n, x)| {
            let k = wave_index(spec, l.coords(), n.coords());
            let wave = a * root_of_unity(q_total, k);
            if real && !self_conjugate {
                x + wave + wave.conj()
            } else if real {
                Complex64::new(x.re + wave.re, 0.0)
            } else {
                x + wave
            }
        })
        .collect();
    Potential::new(spec.clone(), values)
}

fn wave_index(spec: &LatticeSpec, l: &[i64], n: &[i64]) -> i64 {
    let q_total = spec.volume() as i64;
    l.iter()
        .zip(n)
        .zip(spec.periods())
        .map(|((&lj, &nj), &qj)| (lj * nj).rem_euclid(qj as i64) * (q_total / qj as i64))
        .sum::<i64>()
        .rem_euclid(q_total)
}
