use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dual_at, floquet_at, eval_poly};
use crate::error::Result;
use crate::laurent::{interpolate, RootGrid, Scalar};
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::potential::{dft, same_spec, Potential};

/// Per-variable Laurent degree bound of `𝒫_V`: `Q/q_j` rows carry a `z_j^{±1}`
/// wrap factor; triangular diagonal hops add the other axis' rows.
pub fn p_window(spec: &LatticeSpec) -> Vec<i32> {
    let q = spec.volume();
    let rows: Vec<i32> = spec.periods().iter().map(|&qj| (q / qj) as i32).collect();
    match spec.kind() {
        LatticeKind::Hypercubic => rows,
        LatticeKind::Triangular => {
            let both = rows.iter().sum();
            vec![both; 2]
        }
    }
}

/// Degree bound of `𝒫̃_V` in each variable: every diagonal entry of `A`
/// has degree at most one in `z_j^{±1}`.
pub fn ptilde_window(spec: &LatticeSpec) -> Vec<i32> {
    vec![spec.volume() as i32; spec.dim()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralityReport {
    pub accepted: bool,
    /// `max |c_b^V(z) − c_b^Y(z)|` over the grid.
    pub max_discrepancy: f64,
    /// Largest coefficient magnitude encountered.
    pub scale: f64,
    pub relative_residual: f64,
    pub tol: f64,
    pub grid: Vec<usize>,
}

/// Decides `𝒫_V ≡ 𝒫_Y` by comparing `det(𝒟(z) − λI)` coefficients on the
/// root-of-unity grid with `N_j = 2·deg_j + 1`.
pub fn floquet_isospectral(v: &Potential, y: &Potential, tol: f64) -> Result<IsospectralityReport> {
    same_spec(v.spec(), y.spec())?;
    let grid = RootGrid::new(p_window(v.spec()), 0);
    let mut max_discrepancy = 0.0f64;
    let mut scale = 0.0f64;
    // sequential sweep in canonical grid order
    for z in grid.points() {
        let a = floquet_at(v, &z)?.charpoly();
        let b = floquet_at(y, &z)?.charpoly();
        for (x, w) in a.iter().zip(&b) {
            max_discrepancy = max_discrepancy.max((x - w).norm());
            scale = scale.max(x.norm()).max(w.norm());
        }
    }
    let relative_residual = if scale > 0.0 { max_discrepancy / scale } else { max_discrepancy };
    Ok(IsospectralityReport {
        accepted: max_discrepancy <= tol * scale,
        max_discrepancy,
        scale,
        relative_residual,
        tol,
        grid: grid.sizes(),
    })
}

/// Relative discrepancy between the λ-coefficients of `𝒟_V(z^q)` and `A + B_V` at `z`.
pub fn dual_equivalence_residual(v: &Potential, z: &[Complex64]) -> Result<f64> {
    let zq: Vec<Complex64> = z
        .iter()
        .zip(v.spec().periods())
        .map(|(zj, &qj)| zj.powu(qj as u32))
        .collect();
    let direct = floquet_at(v, &zq)?.charpoly();
    let dual = dual_at(&dft(v), z)?.charpoly();
    let scale = direct
        .iter()
        .chain(&dual)
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    let diff = direct
        .iter()
        .zip(&dual)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// `det(𝒟_V(z) − λI)`.
pub fn bloch_eval(v: &Potential, z: &[Complex64], lambda: Complex64) -> Result<Complex64> {
    Ok(eval_poly(&floquet_at(v, z)?.charpoly(), lambda))
}

/// `|det(𝒟_V(z) − λI)| ≤ tol·(1 + max entry)^Q`.
pub fn fermi_member(v: &Potential, z: &[Complex64], lambda: Complex64, tol: f64) -> Result<bool> {
    let m = floquet_at(v, z)?;
    let value = eval_poly(&m.charpoly(), lambda);
    let bound = tol * (1.0 + m.max_entry()).powi(v.spec().volume() as i32);
    Ok(value.norm() <= bound)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermiReport {
    pub accepted: bool,
    pub lambda: Complex64,
    pub max_discrepancy: f64,
    pub scale: f64,
    pub relative_residual: f64,
    pub tol: f64,
}

/// Compares the `z`-Laurent coefficients of `det(𝒟(z) − λ₀I)` for `V` and `Y`.
pub fn fermi_isospectral_at(
    v: &Potential,
    y: &Potential,
    lambda: Complex64,
    tol: f64,
) -> Result<FermiReport> {
    same_spec(v.spec(), y.spec())?;
    let window = p_window(v.spec());
    let slice = |p: &Potential| {
        interpolate(&window, 0, 0, Scalar::Lambda, |z| {
            Ok(vec![eval_poly(&floquet_at(p, z)?.charpoly(), lambda)])
        })
    };
    let a = slice(v)?.poly;
    let b = slice(y)?.poly;
    let scale = a.max_abs_coeff().max(b.max_abs_coeff());
    let max_discrepancy = a.max_abs_diff(&b);
    Ok(FermiReport {
        accepted: max_discrepancy <= tol * scale,
        lambda,
        max_discrepancy,
        scale,
        relative_residual: if scale > 0.0 { max_discrepancy / scale } else { max_discrepancy },
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::torus_point;
    use crate::lattice::MultiIndex;
    use crate::potential::{random_potential, translate, PotentialMode};
    use crate::rng;
    use rand::Rng;

    fn real(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn spec(q: &[usize]) -> LatticeSpec {
        LatticeSpec::hypercubic(q).unwrap()
    }

    fn torus_sample(r: &mut rng::Stream, d: usize) -> Vec<Complex64> {
        (0..d).map(|_| Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))).collect()
    }

    #[test]
    fn translated_pairs_are_accepted() {
        for q in [vec![2, 3], vec![3, 4], vec![2, 2, 2], vec![1, 2]] {
            let s = spec(&q);
            let v = random_potential(&s, 21, &PotentialMode::Real).unwrap();
            let t = MultiIndex(q.iter().map(|&x| x as i64 - 1).collect());
            let y = translate(&v, &t).unwrap();
            let rep = floquet_isospectral(&v, &y, 1e-9).unwrap();
            assert!(rep.accepted, "{q:?}: {rep:?}");
            assert_eq!(rep.grid, p_window(&s).iter().map(|&a| 2 * a as usize + 1).collect::<Vec<_>>());
        }
    }

    #[test]
    fn identical_potentials_have_zero_residual() {
        let v = random_potential(&spec(&[2, 3]), 1, &PotentialMode::Complex).unwrap();
        let rep = floquet_isospectral(&v, &v, 1e-9).unwrap();
        assert!(rep.accepted);
        assert_eq!(rep.max_discrepancy, 0.0);
    }

    #[test]
    fn planted_delta_is_rejected() {
        let s = spec(&[2, 3]);
        let v = random_potential(&s, 5, &PotentialMode::Real).unwrap();
        let y = v.add(&Potential::delta(s, real(1e-3))).unwrap();
        assert!(!floquet_isospectral(&v, &y, 1e-9).unwrap().accepted);
    }

    #[test]
    fn translation_matches_eigenvalues_at_real_k() {
        let s = spec(&[2, 3]);
        let v = random_potential(&s, 9, &PotentialMode::Real).unwrap();
        let y = translate(&v, &MultiIndex(vec![1, 2])).unwrap();
        let mut r = rng::stream(9, 3);
        for _ in 0..10 {
            let k = [real(r.random_range(0.0..1.0)), real(r.random_range(0.0..1.0))];
            let a = super::super::build_dk(&v, &k).unwrap().hermitian_eigenvalues().unwrap();
            let b = super::super::build_dk(&y, &k).unwrap().hermitian_eigenvalues().unwrap();
            for (x, w) in a.iter().zip(&b) {
                assert!((x - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_specs_fail() {
        let v = Potential::zero(spec(&[2, 3]));
        let y = Potential::zero(spec(&[3, 2]));
        assert!(floquet_isospectral(&v, &y, 1e-9).is_err());
        assert!(fermi_isospectral_at(&v, &y, real(0.0), 1e-9).is_err());
    }

    #[test]
    fn dual_equivalence() {
        let mut r = rng::stream(4, 0);
        for q in [vec![2, 3], vec![3, 4], vec![2, 2, 2]] {
            for complex in [false, true] {
                let mode = if complex { PotentialMode::Complex } else { PotentialMode::Real };
                let v = random_potential(&spec(&q), r.random(), &mode).unwrap();
                let z = torus_sample(&mut r, q.len());
                assert!(dual_equivalence_residual(&v, &z).unwrap() <= 1e-9);
            }
        }
        for (q1, q2) in [(2, 2), (2, 3)] {
            let v = random_potential(&LatticeSpec::triangular(q1, q2).unwrap(), r.random(), &PotentialMode::Complex)
                .unwrap();
            let z = torus_sample(&mut r, 2);
            assert!(dual_equivalence_residual(&v, &z).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn free_triangular_dual_eigenvalues() {
        // V = 0: eigenvalues of the dual form at z equal those of the direct form at z^q
        let s = LatticeSpec::triangular(2, 3).unwrap();
        let mut r = rng::stream(12, 0);
        for _ in 0..5 {
            let z = torus_sample(&mut r, 2);
            assert!(dual_equivalence_residual(&Potential::zero(s.clone()), &z).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn single_site_bloch_value() {
        let s = spec(&[1, 1, 1]);
        let v = Potential::constant(s, real(0.4));
        let z = [Complex64::new(0.3, 0.2), real(2.0), Complex64::new(-1.0, 0.5)];
        let lambda = Complex64::new(0.7, -0.1);
        let expected: Complex64 = z.iter().map(|x| x + x.inv()).sum::<Complex64>() + 0.4 - lambda;
        assert!((bloch_eval(&v, &z, lambda).unwrap() - expected).norm() < 1e-14);
        assert!(fermi_member(&v, &z, lambda + expected, 1e-12).unwrap());
        assert!(!fermi_member(&v, &z, lambda, 1e-12).unwrap());
    }

    #[test]
    fn two_site_fermi_membership() {
        let v = Potential::zero(spec(&[2]));
        assert!(bloch_eval(&v, &[real(1.0)], real(2.0)).unwrap().norm() < 1e-14);
        assert!(fermi_member(&v, &[real(1.0)], real(2.0), 1e-12).unwrap());
        let far = 10.0 + 0.0 + 2.0;
        assert!(!fermi_member(&v, &[real(1.0)], real(far), 1e-9).unwrap());
        let w = random_potential(&spec(&[2, 3]), 2, &PotentialMode::Real).unwrap();
        let far = 10.0 + w.sup_norm() + 4.0;
        let z = torus_point(&[real(0.1), real(0.7)]);
        assert!(!fermi_member(&w, &z, real(far), 1e-9).unwrap());
        assert!(bloch_eval(&w, &[real(0.0), real(1.0)], real(0.0)).is_err());
    }

    #[test]
    fn fermi_decisions() {
        let s = spec(&[2, 3]);
        let v = random_potential(&s, 31, &PotentialMode::Real).unwrap();
        assert!(fermi_isospectral_at(&v, &v, real(0.37), 1e-9).unwrap().accepted);
        let y = translate(&v, &MultiIndex(vec![1, 1])).unwrap();
        for lambda in [-1.5, 0.0, 0.37, 2.2] {
            assert!(fermi_isospectral_at(&v, &y, real(lambda), 1e-9).unwrap().accepted);
        }
        let bad = v.add(&Potential::delta(s, real(1e-3))).unwrap();
        assert!(!fermi_isospectral_at(&v, &bad, real(0.37), 1e-9).unwrap().accepted);
    }
}
