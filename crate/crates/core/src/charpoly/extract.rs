//! Recovering the characteristic polynomial of one separable component.
//!
//! For `V = V_keep ⊕ V_rest` with zero means, substitute
//! `λ = y + Σ_{j∉keep} (z_j + 1/z_j)`. The dual matrix becomes a Kronecker
//! sum, and the terms of top total degree `Q − |W_keep|` in the `z_j`,
//! `j ∉ keep`, factor as
//!
//! `Π_{n∈W, ñ_rest≠0} Σ_{j∉keep} (ρ^j_{n_j} − 1) z_j · 𝒫̃_{V_keep}(z_keep, y)`.
//!
//! The first factor depends only on the lattice; dividing it out leaves the
//! component polynomial. With more than two blocks the complement of `keep`
//! is treated as one block, which is the same as extracting recursively.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::RecoveryOptions;
use crate::error::{Error, Result};
use crate::floquet::{charpoly_coeffs, dual_at};
use crate::laurent::{recover, LaurentPoly, Monomial, Scalar};
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::potential::{dft, join, split, Potential, SeparabilityPattern};

/// Relative residual allowed when dividing out the prefactor.
pub const EXTRACTION_TOL: f64 = 1e-8;

/// `Π_{n∈W: n_rest≠0} Σ_{j∈rest} (ρ^j_{n_j} − 1) z_j` over all `d` variables.
pub fn extraction_prefactor(spec: &LatticeSpec, rest: &[usize]) -> LaurentPoly {
    let d = spec.dim();
    let zero = vec![Complex64::default(); d];
    let mut acc = LaurentPoly::constant(d, Complex64::new(1.0, 0.0), Scalar::Y);
    for n in spec.fundamental_domain() {
        if rest.iter().all(|&j| n.coords()[j] == 0) {
            continue;
        }
        let mut up = zero.clone();
        for &j in rest {
            up[j] = spec.phase(j, n.coords()[j]) - 1.0;
        }
        acc = acc.mul(&LaurentPoly::linear(&up, &zero, Complex64::default(), Complex64::default(), Scalar::Y));
    }
    acc
}

/// `𝒫̃` of the zero-mean component `keep` (zero-based block index), as a
/// polynomial in that block's `z` variables and `y`.
pub fn extract_component_charpoly(
    v: &Potential,
    p: &SeparabilityPattern,
    keep: usize,
    tol: f64,
    opts: RecoveryOptions,
) -> Result<LaurentPoly> {
    let spec = v.spec();
    if spec.kind() != LatticeKind::Hypercubic {
        return Err(Error::LatticeMismatch("component extraction needs a hypercubic lattice".into()));
    }
    if keep >= p.block_count() {
        return Err(Error::InvalidPattern(format!(
            "block {keep} out of range for {} blocks",
            p.block_count()
        )));
    }
    let parts = split(v, p, tol)?;
    let centered = join(Complex64::default(), &parts.components, p)?;
    let f = dft(&centered);

    let d = spec.dim();
    let q = spec.volume();
    let kept: Vec<usize> = p.block_axes(keep).collect();
    let rest: Vec<usize> = (0..d).filter(|j| !kept.contains(j)).collect();
    let block_size = p.block_spec(keep).volume();

    let full = recover(&vec![q as i32; d], q as u32, opts.guard, Scalar::Y, |z| {
        let mut m = dual_at(&f, z)?.into_entries();
        let shift: Complex64 = rest.iter().map(|&j| z[j] + z[j].inv()).sum();
        for i in 0..q {
            m[(i, i)] -= shift;
        }
        Ok(charpoly_coeffs(&m))
    })?;

    let top = (q - block_size) as i64;
    let leading = full.partial_degree_filter(&rest, top);
    let prefactor = extraction_prefactor(spec, &rest);

    // rank-one least squares: leading[m, key] ≈ prefactor[m] · g[key]
    let pref: BTreeMap<Vec<i32>, Complex64> = prefactor
        .terms()
        .map(|(m, c)| (rest.iter().map(|&j| m.z[j]).collect(), *c))
        .collect();
    let pref_norm: f64 = pref.values().map(|c| c.norm_sqr()).sum();
    let mut grouped: BTreeMap<(Vec<i32>, u32), BTreeMap<Vec<i32>, Complex64>> = BTreeMap::new();
    for (m, c) in leading.terms() {
        let key = (kept.iter().map(|&j| m.z[j]).collect(), m.b);
        let outer = rest.iter().map(|&j| m.z[j]).collect();
        grouped.entry(key).or_default().insert(outer, *c);
    }
    let scale = leading.max_abs_coeff();
    if scale == 0.0 {
        return Err(Error::Extraction("leading layer vanishes".into()));
    }
    let mut residual = 0.0f64;
    let block_window = vec![block_size as i32; kept.len()];
    let mut out = LaurentPoly::zero(block_window, block_size as u32, Scalar::Y);
    for ((kz, b), row) in &grouped {
        let g: Complex64 = pref
            .iter()
            .map(|(m, pc)| pc.conj() * row.get(m).copied().unwrap_or_default())
            .sum::<Complex64>()
            / pref_norm;
        for (m, pc) in &pref {
            let have = row.get(m).copied().unwrap_or_default();
            residual = residual.max((have - pc * g).norm());
        }
        for (m, c) in row {
            if !pref.contains_key(m) {
                residual = residual.max(c.norm());
            }
        }
        if g.norm() > crate::laurent::PRUNE_REL * scale {
            out.add_term(Monomial::new(kz.clone(), *b), g)
                .map_err(|e| Error::Extraction(format!("component degree out of range: {e}")))?;
        }
    }
    let relative = residual / scale;
    if relative > EXTRACTION_TOL {
        return Err(Error::Extraction(format!(
            "quotient is not constant in the complementary variables (residual {relative:e})"
        )));
    }
    Ok(out)
}
