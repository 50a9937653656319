//! Fundamental domain arithmetic for the period lattice
//! `q_1 Z ⊕ … ⊕ q_d Z` and the root-of-unity phases.
//!
//! The canonical flat order over `W = {0 ≤ n_j < q_j}` is lexicographic with
//! `n_1` most significant and `n_d` fastest-varying. Every matrix row, value
//! sequence and coefficient table in the crate uses this order.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Hypercubic,
    Triangular,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Hypercubic => f.write_str("hypercubic"),
            LatticeKind::Triangular => f.write_str("triangular"),
        }
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hypercubic" => Ok(LatticeKind::Hypercubic),
            "triangular" => Ok(LatticeKind::Triangular),
            other => Err(Error::Parse(format!("unknown lattice kind `{other}`"))),
        }
    }
}

/// A lattice index with arbitrary integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Dimension, periods and lattice kind. Owns `W`, `Q` and the phases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    periods: Vec<usize>,
    kind: LatticeKind,
}

impl LatticeSpec {
    pub fn new(periods: Vec<usize>, kind: LatticeKind) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::InvalidLattice("dimension must be positive".into()));
        }
        if let Some(j) = periods.iter().position(|&q| q == 0) {
            return Err(Error::InvalidLattice(format!("period q_{} is zero", j + 1)));
        }
        if kind == LatticeKind::Triangular && periods.len() != 2 {
            return Err(Error::InvalidLattice(format!(
                "triangular lattice requires d = 2, got d = {}",
                periods.len()
            )));
        }
        Ok(LatticeSpec { periods, kind })
    }

    pub fn hypercubic(periods: &[usize]) -> Result<Self> {
        Self::new(periods.to_vec(), LatticeKind::Hypercubic)
    }

    pub fn triangular(q1: usize, q2: usize) -> Result<Self> {
        Self::new(vec![q1, q2], LatticeKind::Triangular)
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// `Q = q_1 ⋯ q_d`, the number of sites in the fundamental domain.
    pub fn volume(&self) -> usize {
        self.periods.iter().product()
    }

    /// Hypercubic lattice on the selected coordinates (in the given order).
    pub fn sub_lattice(&self, axes: &[usize]) -> Result<LatticeSpec> {
        let periods = axes
            .iter()
            .map(|&j| {
                self.periods.get(j).copied().ok_or_else(|| {
                    Error::DimensionMismatch(format!("axis {j} out of range for d = {}", self.dim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LatticeSpec::new(periods, LatticeKind::Hypercubic)
    }

    /// All `Q` canonical indices in flat order.
    pub fn fundamental_domain(&self) -> Vec<MultiIndex> {
        (0..self.volume()).map(|i| self.unflatten(i)).collect()
    }

    pub fn is_canonical(&self, n: &MultiIndex) -> bool {
        n.0.len() == self.dim()
            && n.0.iter().zip(&self.periods).all(|(&c, &q)| c >= 0 && (c as usize) < q)
    }

    pub fn flatten(&self, n: &MultiIndex) -> Result<usize> {
        if !self.is_canonical(n) {
            return Err(Error::NonCanonicalIndex {
                index: n.0.clone(),
                periods: self.periods.clone(),
            });
        }
        Ok(self.flatten_unchecked(&n.0))
    }

    pub(crate) fn flatten_unchecked(&self, n: &[i64]) -> usize {
        n.iter()
            .zip(&self.periods)
            .fold(0usize, |acc, (&c, &q)| acc * q + c as usize)
    }

    /// Flat position of `reduce_mod(l)`.
    pub fn flatten_mod(&self, l: &[i64]) -> usize {
        l.iter()
            .zip(&self.periods)
            .fold(0usize, |acc, (&c, &q)| acc * q + c.rem_euclid(q as i64) as usize)
    }

    pub fn unflatten(&self, mut flat: usize) -> MultiIndex {
        let mut coords = vec![0i64; self.dim()];
        for (c, &q) in coords.iter_mut().zip(&self.periods).rev() {
            *c = (flat % q) as i64;
            flat /= q;
        }
        MultiIndex(coords)
    }

    pub fn reduce_mod(&self, l: &MultiIndex) -> MultiIndex {
        MultiIndex(
            l.0.iter()
                .zip(&self.periods)
                .map(|(&c, &q)| c.rem_euclid(q as i64))
                .collect(),
        )
    }

    /// `exp(2πi n_j / q_j)` for the zero-based axis `axis`.
    pub fn phase(&self, axis: usize, n_j: i64) -> Complex64 {
        root_of_unity(self.periods[axis], n_j)
    }
}

/// `exp(2πi n / q)`, with `n` reduced mod `q` before evaluation.
pub fn root_of_unity(q: usize, n: i64) -> Complex64 {
    let r = n.rem_euclid(q as i64);
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Exact values on the axes keep small cases (q = 2, 4) free of 1e-17 noise.
    if 2 * r == q as i64 {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == q as i64 {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * r == 3 * q as i64 {
        return Complex64::new(0.0, -1.0);
    }
    let theta = TAU * r as f64 / q as f64;
    Complex64::new(theta.cos(), theta.sin())
}
