//! Spectral invariants preserved by Floquet isospectrality of real
//! potentials: the mean, the total power `Σ_l |V^(l)|²` and the per-block
//! powers `Σ_{l∈W_j} |V^(l^{j¬})|²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::identities::check_g55;
use crate::error::Result;
use crate::potential::{dft, mean, same_spec, FourierTable, Potential, SeparabilityPattern};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSums {
    pub total: f64,
    /// One entry per block, empty when no pattern was given.
    pub blocks: Vec<f64>,
}

pub fn block_power_sums(f: &FourierTable, p: &SeparabilityPattern) -> Result<PowerSums> {
    if f.spec().periods() != p.spec().periods() {
        same_spec(f.spec(), p.spec())?;
    }
    let blocks = (0..p.block_count())
        .map(|j| {
            p.block_domain(j)
                .iter()
                .map(|l| f.at(&p.embed(j, l.coords())).norm_sqr())
                .sum()
        })
        .collect();
    Ok(PowerSums {
        total: f.power_sum(),
        blocks,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Invariants of a pair `(V, Y)` with their discrepancies. Residuals are
/// `|a − b| / max(1, |a|, |b|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub mean_v: Complex64,
    pub mean_y: Complex64,
    pub power_v: PowerSums,
    pub power_y: PowerSums,
    pub mean_residual: f64,
    pub total_residual: f64,
    /// Largest per-block residual (0 without a pattern).
    pub block_residual: f64,
    /// Largest resolvent-sum discrepancy, when evaluated.
    pub resolvent_residual: Option<f64>,
}

impl InvariantReport {
    pub fn agrees(&self, mean_tol: f64, power_tol: f64) -> bool {
        self.mean_residual <= mean_tol
            && self.total_residual <= power_tol
            && self.block_residual <= power_tol
    }
}

/// Computes the invariant pair; the resolvent sums are compared at
/// `resolvent_samples` points when both potentials are real and the count is nonzero.
pub fn invariant_report(
    v: &Potential,
    y: &Potential,
    p: Option<&SeparabilityPattern>,
    resolvent_samples: usize,
    seed: u64,
) -> Result<InvariantReport> {
    same_spec(v.spec(), y.spec())?;
    let (fv, fy) = (dft(v), dft(y));
    let (power_v, power_y) = match p {
        Some(p) => (block_power_sums(&fv, p)?, block_power_sums(&fy, p)?),
        None => (
            PowerSums { total: fv.power_sum(), blocks: vec![] },
            PowerSums { total: fy.power_sum(), blocks: vec![] },
        ),
    };
    let (mean_v, mean_y) = (mean(v), mean(y));
    let mean_residual = (mean_v - mean_y).norm() / mean_v.norm().max(mean_y.norm()).max(1.0);
    let total_residual = rel(power_v.total, power_y.total);
    let block_residual = power_v
        .blocks
        .iter()
        .zip(&power_y.blocks)
        .map(|(&a, &b)| rel(a, b))
        .fold(0.0, f64::max);
    let resolvent_residual = if resolvent_samples > 0 && v.is_real() && y.is_real() {
        Some(check_g55(v, y, resolvent_samples, seed)?)
    } else {
        None
    };
    Ok(InvariantReport {
        mean_v,
        mean_y,
        power_v,
        power_y,
        mean_residual,
        total_residual,
        block_residual,
        resolvent_residual,
    })
}
