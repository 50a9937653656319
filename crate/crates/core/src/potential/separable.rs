//! Block separability `V(n) = V_1(ñ_1) + … + V_r(ñ_r)`.
//!
//! A potential is separable for a pattern `(d_1, …, d_r)` iff every Fourier
//! coefficient whose index has at least two nonzero blocks vanishes. Those
//! indices form the cross set `S`.

use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dft, idft, mean, FourierTable, Potential};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, MultiIndex};

/// Block sizes `(d_1, …, d_r)` attached to a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityPattern {
    spec: LatticeSpec,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
}

impl SeparabilityPattern {
    pub fn new(spec: &LatticeSpec, blocks: &[usize]) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::InvalidPattern(format!(
                "need at least two blocks, got {blocks:?}"
            )));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidPattern(format!("empty block in {blocks:?}")));
        }
        let total: usize = blocks.iter().sum();
        if total != spec.dim() {
            return Err(Error::InvalidPattern(format!(
                "blocks {blocks:?} sum to {total}, lattice dimension is {}",
                spec.dim()
            )));
        }
        let offsets = blocks
            .iter()
            .scan(0usize, |acc, &b| {
                let start = *acc;
                *acc += b;
                Some(start)
            })
            .collect();
        Ok(SeparabilityPattern {
            spec: spec.clone(),
            blocks: blocks.to_vec(),
            offsets,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Coordinate axes (zero-based) covered by block `j`.
    pub fn block_axes(&self, j: usize) -> Range<usize> {
        self.offsets[j]..self.offsets[j] + self.blocks[j]
    }

    /// Hypercubic lattice of block `j`.
    pub fn block_spec(&self, j: usize) -> LatticeSpec {
        let axes: Vec<usize> = self.block_axes(j).collect();
        self.spec.sub_lattice(&axes).expect("block axes are in range")
    }

    /// `W_j`, the fundamental domain of block `j`.
    pub fn block_domain(&self, j: usize) -> Vec<MultiIndex> {
        self.block_spec(j).fundamental_domain()
    }

    /// `ñ_j`, the coordinates of `n` belonging to block `j`.
    pub fn project(&self, n: &[i64], j: usize) -> Vec<i64> {
        n[self.block_axes(j)].to_vec()
    }

    /// `n^{j¬}`: block-local coordinates padded with zeros to dimension `d`.
    pub fn embed(&self, j: usize, local: &[i64]) -> MultiIndex {
        let mut full = vec![0i64; self.spec.dim()];
        full[self.block_axes(j)].copy_from_slice(local);
        MultiIndex(full)
    }

    /// Number of blocks of `l` that are nonzero modulo the periods.
    pub fn nonzero_blocks(&self, l: &[i64]) -> usize {
        (0..self.block_count())
            .filter(|&j| {
                self.block_axes(j)
                    .any(|a| l[a].rem_euclid(self.spec.periods()[a] as i64) != 0)
            })
            .count()
    }

    pub fn is_cross(&self, l: &[i64]) -> bool {
        self.nonzero_blocks(l) >= 2
    }

    /// The cross set `S ⊂ W` in canonical order.
    pub fn cross_set(&self) -> Vec<MultiIndex> {
        self.spec
            .fundamental_domain()
            .into_iter()
            .filter(|l| self.is_cross(l.coords()))
            .collect()
    }

    fn check_spec(&self, spec: &LatticeSpec) -> Result<()> {
        if spec.periods() != self.spec.periods() {
            return Err(Error::InvalidPattern(format!(
                "pattern built for periods {:?}, used with {:?}",
                self.spec.periods(),
                spec.periods()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// Largest `|V^(l)|` over the cross set.
    pub max_cross: f64,
    /// `max(1, max_l |V^(l)|)`.
    pub scale: f64,
    pub tol: f64,
    /// Cross index with the largest magnitude, reported when the test fails.
    pub witness: Option<MultiIndex>,
}

pub fn is_separable(
    f: &FourierTable,
    p: &SeparabilityPattern,
    tol: f64,
) -> Result<SeparabilityVerdict> {
    p.check_spec(f.spec())?;
    let scale = f.sup_norm().max(1.0);
    let mut worst: Option<(MultiIndex, f64)> = None;
    for l in p.cross_set() {
        let m = f.at(&l).norm();
        if worst.as_ref().is_none_or(|(_, w)| m > *w) {
            worst = Some((l, m));
        }
    }
    let max_cross = worst.as_ref().map_or(0.0, |(_, m)| *m);
    let separable = max_cross <= tol * scale;
    Ok(SeparabilityVerdict {
        separable,
        max_cross,
        scale,
        tol,
        witness: if separable { None } else { worst.map(|(l, _)| l) },
    })
}

/// `V = c + ⊕ V_j` with every component zero-mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableParts {
    pub constant: Complex64,
    pub components: Vec<Potential>,
}

pub fn split(v: &Potential, p: &SeparabilityPattern, tol: f64) -> Result<SeparableParts> {
    let f = dft(v);
    let verdict = is_separable(&f, p, tol)?;
    if !verdict.separable {
        return Err(Error::NotSeparable {
            witness: verdict.witness.map(|w| w.0).unwrap_or_default(),
            magnitude: verdict.max_cross,
        });
    }
    let components = (0..p.block_count())
        .map(|j| {
            let block = p.block_spec(j);
            let coeffs = block
                .fundamental_domain()
                .iter()
                .map(|l| {
                    if l.is_zero() {
                        Complex64::new(0.0, 0.0)
                    } else {
                        f.at(&p.embed(j, l.coords()))
                    }
                })
                .collect();
            FourierTable::new(block, coeffs).map(|t| idft(&t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparableParts {
        constant: mean(v),
        components,
    })
}

/// `V(n) = c + Σ_j V_j(ñ_j)`.
pub fn join(c: Complex64, components: &[Potential], p: &SeparabilityPattern) -> Result<Potential> {
    if components.len() != p.block_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} components for {} blocks",
            components.len(),
            p.block_count()
        )));
    }
    for (j, comp) in components.iter().enumerate() {
        if comp.spec().periods() != p.block_spec(j).periods() {
            return Err(Error::DimensionMismatch(format!(
                "component {} has periods {:?}, block expects {:?}",
                j + 1,
                comp.spec().periods(),
                p.block_spec(j).periods()
            )));
        }
    }
    let spec = p.spec().clone();
    let values = spec
        .fundamental_domain()
        .iter()
        .map(|n| {
            components
                .iter()
                .enumerate()
                .fold(c, |acc, (j, comp)| acc + comp.at(&p.project(n.coords(), j)))
        })
        .collect();
    Potential::new(spec, values)
}

impl SeparableParts {
    pub fn join(&self, p: &SeparabilityPattern) -> Result<Potential> {
        join(self.constant, &self.components, p)
    }
}
