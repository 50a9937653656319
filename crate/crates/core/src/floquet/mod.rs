//! Floquet matrices of `Δ + V` under `u(n + q_j e_j) = z_j u(n)`, their
//! Fourier-dual forms `A + B_V`, and isospectrality decisions.
//!
//! Matrices are dense `Q × Q` in canonical flat order. In the direct form a
//! hop `n → n + h` whose target leaves `W` is reduced back into `W` and picks
//! up `z_j^{s_j}`, where `s_j ∈ {−1, 0, +1}` counts the boundary crossings in
//! coordinate `j`. Hops landing on the same reduced site add up.

mod charpoly;
mod iso;

pub use self::charpoly::{charpoly_coeffs, eval_poly, faddeev_leverrier};
pub use self::iso::{
    bloch_eval, dual_equivalence_residual, fermi_isospectral_at, fermi_member,
    floquet_isospectral, p_window, ptilde_window, FermiReport, IsospectralityReport,
};

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::potential::{FourierTable, Potential};

/// Where the matrix was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form", content = "point")]
pub enum MatrixForm {
    /// `D_V(k)`.
    Quasimomentum(Vec<Complex64>),
    /// `𝒟_V(z)` with `z_j = e^{2πi k_j}`.
    Torus(Vec<Complex64>),
    /// `A + B_V` at the dual variable `z`.
    Dual(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetMatrix {
    spec: LatticeSpec,
    entries: DMatrix<Complex64>,
    form: MatrixForm,
}

impl FloquetMatrix {
    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn form(&self) -> &MatrixForm {
        &self.form
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `max |M − M*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * self.max_entry().max(1.0)
    }

    /// Coefficients of `det(M − λI)`, constant term first.
    pub fn charpoly(&self) -> Vec<Complex64> {
        charpoly_coeffs(&self.entries)
    }

    /// Sorted real eigenvalues; `None` unless the matrix is Hermitian to 1e−13.
    pub fn hermitian_eigenvalues(&self) -> Option<Vec<f64>> {
        if !self.is_hermitian(1e-13) {
            return None;
        }
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Some(ev)
    }
}

/// `z_j = exp(2πi k_j)` (complex `k` allowed).
pub fn torus_point(k: &[Complex64]) -> Vec<Complex64> {
    k.iter().map(|kj| (Complex64::new(0.0, TAU) * kj).exp()).collect()
}

const TRIANGULAR_HOPS: [[i64; 2]; 6] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]];

fn hops(spec: &LatticeSpec) -> Vec<Vec<i64>> {
    match spec.kind() {
        LatticeKind::Triangular => TRIANGULAR_HOPS.iter().map(|h| h.to_vec()).collect(),
        LatticeKind::Hypercubic => (0..spec.dim())
            .flat_map(|j| {
                [1i64, -1].into_iter().map(move |s| {
                    let mut h = vec![0i64; spec.dim()];
                    h[j] = s;
                    h
                })
            })
            .collect(),
    }
}

fn check_dim(spec: &LatticeSpec, point: &[Complex64]) -> Result<()> {
    if point.len() != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, lattice has {}",
            point.len(),
            spec.dim()
        )));
    }
    Ok(())
}

fn check_nonzero(z: &[Complex64]) -> Result<()> {
    match z.iter().position(|zj| zj.norm() == 0.0) {
        Some(j) => Err(Error::ZeroTorusCoordinate(j)),
        None => Ok(()),
    }
}

fn require_kind(spec: &LatticeSpec, kind: LatticeKind) -> Result<()> {
    if spec.kind() != kind {
        return Err(Error::LatticeMismatch(format!(
            "operation needs a {kind} lattice, got {}",
            spec.kind()
        )));
    }
    Ok(())
}

/// `𝒟_V(z)` for either lattice kind.
pub fn floquet_at(v: &Potential, z: &[Complex64]) -> Result<FloquetMatrix> {
    let spec = v.spec();
    check_dim(spec, z)?;
    check_nonzero(z)?;
    let q = spec.volume();
    let periods = spec.periods();
    let hops = hops(spec);
    let mut m = DMatrix::<Complex64>::zeros(q, q);
    for (row, n) in spec.fundamental_domain().iter().enumerate() {
        m[(row, row)] += v.values()[row];
        for h in &hops {
            let mut factor = Complex64::new(1.0, 0.0);
            let mut target = vec![0i64; n.coords().len()];
            for j in 0..target.len() {
                let raw = n.coords()[j] + h[j];
                let qj = periods[j] as i64;
                let crossings = raw.div_euclid(qj);
                target[j] = raw.rem_euclid(qj);
                if crossings != 0 {
                    factor *= z[j].powi(crossings as i32);
                }
            }
            m[(row, spec.flatten_unchecked(&target))] += factor;
        }
    }
    Ok(FloquetMatrix {
        spec: spec.clone(),
        entries: m,
        form: MatrixForm::Torus(z.to_vec()),
    })
}

/// `D_V(k)` on the hypercubic lattice.
pub fn build_dk(v: &Potential, k: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(v.spec(), LatticeKind::Hypercubic)?;
    check_dim(v.spec(), k)?;
    let mut m = floquet_at(v, &torus_point(k))?;
    m.form = MatrixForm::Quasimomentum(k.to_vec());
    Ok(m)
}

/// `𝒟_V(z)` on the hypercubic lattice.
pub fn build_dz(v: &Potential, z: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(v.spec(), LatticeKind::Hypercubic)?;
    floquet_at(v, z)
}

/// `D_{Tri,V}(k)`: six hops `(±1,0), (0,±1), ±(1,−1)`.
pub fn build_dk_tri(v: &Potential, k: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(v.spec(), LatticeKind::Triangular)?;
    check_dim(v.spec(), k)?;
    let mut m = floquet_at(v, &torus_point(k))?;
    m.form = MatrixForm::Quasimomentum(k.to_vec());
    Ok(m)
}

pub fn build_dz_tri(v: &Potential, z: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(v.spec(), LatticeKind::Triangular)?;
    floquet_at(v, z)
}

/// Diagonal of `A` (or `A_Tri`) at `z`, canonical order.
pub fn dual_diagonal(spec: &LatticeSpec, z: &[Complex64]) -> Result<Vec<Complex64>> {
    check_dim(spec, z)?;
    check_nonzero(z)?;
    Ok(spec
        .fundamental_domain()
        .iter()
        .map(|n| {
            let w: Vec<Complex64> = (0..spec.dim())
                .map(|j| spec.phase(j, n.coords()[j]) * z[j])
                .collect();
            let mut a: Complex64 = w.iter().map(|x| x + x.inv()).sum();
            if spec.kind() == LatticeKind::Triangular {
                let r = w[1] / w[0];
                a += r + r.inv();
            }
            a
        })
        .collect())
}

/// `A + B_V` for either lattice kind, `B_V(n; n′) = V^(n − n′)`.
pub fn dual_at(f: &FourierTable, z: &[Complex64]) -> Result<FloquetMatrix> {
    let spec = f.spec();
    let diag = dual_diagonal(spec, z)?;
    let w = spec.fundamental_domain();
    let q = w.len();
    let mut m = DMatrix::<Complex64>::zeros(q, q);
    for (i, n) in w.iter().enumerate() {
        for (j, np) in w.iter().enumerate() {
            let diff: Vec<i64> = n.coords().iter().zip(np.coords()).map(|(a, b)| a - b).collect();
            m[(i, j)] = f.get(&diff);
        }
        m[(i, i)] += diag[i];
    }
    Ok(FloquetMatrix {
        spec: spec.clone(),
        entries: m,
        form: MatrixForm::Dual(z.to_vec()),
    })
}

pub fn build_dual(f: &FourierTable, z: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(f.spec(), LatticeKind::Hypercubic)?;
    dual_at(f, z)
}

pub fn build_dual_tri(f: &FourierTable, z: &[Complex64]) -> Result<FloquetMatrix> {
    require_kind(f.spec(), LatticeKind::Triangular)?;
    dual_at(f, z)
}
