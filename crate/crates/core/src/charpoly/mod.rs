//! Laurent characteristic polynomials `𝒫_V(z, λ) = det(𝒟_V(z) − λI)` and
//! `𝒫̃_V(z, λ) = 𝒫_V(z_1^{q_1}, …, z_d^{q_d}, λ) = det(A + B_V − λI)`,
//! recovered exactly on root-of-unity grids.

mod extract;
mod identities;
mod invariants;

pub use self::extract::{extraction_prefactor, extract_component_charpoly};
pub use self::identities::{check_g55, check_h1, check_h2_diff, h_poly, t_poly, IdentityCheck};
pub use self::invariants::{block_power_sums, invariant_report, InvariantReport, PowerSums};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{dual_at, floquet_at, p_window, ptilde_window};
use crate::laurent::{recover, LaurentPoly, Scalar};
use crate::potential::{dft, Potential};

/// Relative agreement required between the two `𝒫̃` routes.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryOptions {
    /// Extra exponents sampled beyond each side of the degree window.
    pub guard: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { guard: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TildeRoute {
    /// `a_j → q_j a_j` applied to the recovered `𝒫_V`.
    Substitute,
    /// Direct recovery from `A + B_V` on a `2Q + 1` grid.
    #[default]
    Dual,
    /// Both, failing unless they agree to [`CROSS_CHECK_TOL`].
    CrossCheck,
}

/// `𝒫_V` for either lattice kind.
pub fn recover_p(v: &Potential) -> Result<LaurentPoly> {
    recover_p_with(v, RecoveryOptions::default())
}

pub fn recover_p_with(v: &Potential, opts: RecoveryOptions) -> Result<LaurentPoly> {
    let spec = v.spec();
    recover(&p_window(spec), spec.volume() as u32, opts.guard, Scalar::Lambda, |z| {
        Ok(floquet_at(v, z)?.charpoly())
    })
}

pub fn recover_ptilde(v: &Potential, route: TildeRoute) -> Result<LaurentPoly> {
    recover_ptilde_with(v, route, RecoveryOptions::default())
}

pub fn recover_ptilde_with(v: &Potential, route: TildeRoute, opts: RecoveryOptions) -> Result<LaurentPoly> {
    let substitute = || -> Result<LaurentPoly> {
        Ok(recover_p_with(v, opts)?.substitute_powers(v.spec().periods()))
    };
    let direct = || -> Result<LaurentPoly> {
        let f = dft(v);
        let spec = v.spec();
        recover(&ptilde_window(spec), spec.volume() as u32, opts.guard, Scalar::Lambda, |z| {
            Ok(dual_at(&f, z)?.charpoly())
        })
    };
    match route {
        TildeRoute::Substitute => substitute(),
        TildeRoute::Dual => direct(),
        TildeRoute::CrossCheck => {
            let (a, b) = (substitute()?, direct()?);
            let diff = a.relative_diff(&b);
            if diff > CROSS_CHECK_TOL {
                return Err(Error::CrossCheck(diff));
            }
            Ok(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{eval_poly, torus_point};
    use crate::laurent::Monomial;
    use crate::lattice::LatticeSpec;
    use crate::potential::{random_potential, PotentialMode};
    use crate::rng;
    use num_complex::Complex64;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: f64) -> Complex64 {
        c(v, 0.0)
    }

    fn spec(q: &[usize]) -> LatticeSpec {
        LatticeSpec::hypercubic(q).unwrap()
    }

    fn mono(z: &[i32], b: u32) -> Monomial {
        Monomial::new(z.to_vec(), b)
    }

    /// λ² − (v₀+v₁)λ + v₀v₁ − 2 − z − 1/z
    fn two_site_closed_form(v0: Complex64, v1: Complex64) -> LaurentPoly {
        let mut p = LaurentPoly::zero(vec![1], 2, Scalar::Lambda);
        p.add_term(mono(&[0], 2), real(1.0)).unwrap();
        p.add_term(mono(&[0], 1), -(v0 + v1)).unwrap();
        p.add_term(mono(&[0], 0), v0 * v1 - 2.0).unwrap();
        p.add_term(mono(&[1], 0), real(-1.0)).unwrap();
        p.add_term(mono(&[-1], 0), real(-1.0)).unwrap();
        p
    }

    #[test]
    fn two_site_recovery() {
        let v = Potential::from_real(spec(&[2]), &[0.25, -1.5]).unwrap();
        let p = recover_p(&v).unwrap();
        assert!(p.max_abs_diff(&two_site_closed_form(real(0.25), real(-1.5))) <= 1e-12);
    }

    #[test]
    fn single_site_free() {
        let p = recover_p(&Potential::zero(spec(&[1]))).unwrap();
        let mut expected = LaurentPoly::zero(vec![1], 1, Scalar::Lambda);
        expected.add_term(mono(&[0], 1), real(-1.0)).unwrap();
        expected.add_term(mono(&[1], 0), real(1.0)).unwrap();
        expected.add_term(mono(&[-1], 0), real(1.0)).unwrap();
        assert!(p.max_abs_diff(&expected) <= 1e-14);
    }

    #[test]
    fn recovered_polynomial_matches_determinants() {
        let mut r = rng::stream(77, 0);
        for q in [vec![2, 3], vec![2, 2, 2], vec![3, 4]] {
            let s = spec(&q);
            let v = random_potential(&s, 3, &PotentialMode::Complex).unwrap();
            let p = recover_p(&v).unwrap();
            for _ in 0..20 {
                let z: Vec<Complex64> = (0..q.len())
                    .map(|_| Complex64::from_polar(r.random_range(0.5..2.0), r.random_range(0.0..6.3)))
                    .collect();
                let lambda = c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
                let direct = eval_poly(&floquet_at(&v, &z).unwrap().charpoly(), lambda);
                let via = p.eval(&z, lambda);
                assert!((direct - via).norm() <= 1e-10 * direct.norm().max(1.0), "{q:?}");
            }
        }
    }

    #[test]
    fn tilde_two_site_closed_form() {
        let v = Potential::from_real(spec(&[2]), &[0.9, 0.1]).unwrap();
        let f = dft(&v);
        let (a, b) = (f.get(&[0]), f.get(&[1]));
        let mut expected = LaurentPoly::zero(vec![2], 2, Scalar::Lambda);
        expected.add_term(mono(&[0], 2), real(1.0)).unwrap();
        expected.add_term(mono(&[0], 1), -a * 2.0).unwrap();
        expected.add_term(mono(&[0], 0), a * a - b * b - 2.0).unwrap();
        expected.add_term(mono(&[2], 0), real(-1.0)).unwrap();
        expected.add_term(mono(&[-2], 0), real(-1.0)).unwrap();
        for route in [TildeRoute::Substitute, TildeRoute::Dual, TildeRoute::CrossCheck] {
            let p = recover_ptilde(&v, route).unwrap();
            assert!(p.max_abs_diff(&expected) <= 1e-12, "{route:?}");
        }
    }

    #[test]
    fn tilde_of_free_operator_is_diagonal_product() {
        let s = spec(&[2, 3]);
        let p = recover_ptilde(&Potential::zero(s.clone()), TildeRoute::CrossCheck).unwrap();
        let mut expected = LaurentPoly::constant(2, real(1.0), Scalar::Lambda);
        for n in s.fundamental_domain() {
            let up: Vec<Complex64> = (0..2).map(|j| s.phase(j, n.0[j])).collect();
            let down: Vec<Complex64> = up.iter().map(|x| x.conj()).collect();
            expected = expected.mul(&LaurentPoly::linear(&up, &down, real(-1.0), real(0.0), Scalar::Lambda));
        }
        assert!(p.relative_diff(&expected) <= 1e-12);
    }

    #[test]
    fn tilde_support_is_on_period_multiples() {
        for q in [vec![2, 3], vec![2, 2, 2]] {
            let s = spec(&q);
            let v = random_potential(&s, 6, &PotentialMode::Complex).unwrap();
            let p = recover_ptilde(&v, TildeRoute::Dual).unwrap();
            let scale = p.max_abs_coeff();
            for (m, coeff) in p.terms() {
                let off = m.z.iter().zip(&q).any(|(&a, &qj)| a.rem_euclid(qj as i32) != 0);
                if off {
                    assert!(coeff.norm() <= 1e-12 * scale, "{m:?} {coeff}");
                }
            }
        }
    }

    #[test]
    fn tilde_routes_agree_on_random_potentials() {
        for (i, q) in [vec![2, 3], vec![2, 2, 2], vec![3, 4]].into_iter().enumerate() {
            let v = random_potential(&spec(&q), i as u64, &PotentialMode::Complex).unwrap();
            recover_ptilde(&v, TildeRoute::CrossCheck).unwrap();
        }
        for (q1, q2) in [(2, 2), (2, 3)] {
            let s = LatticeSpec::triangular(q1, q2).unwrap();
            let v = random_potential(&s, 2, &PotentialMode::Real).unwrap();
            recover_ptilde(&v, TildeRoute::CrossCheck).unwrap();
        }
    }

    #[test]
    fn top_layer_is_potential_independent() {
        let s = spec(&[2, 3]);
        let q = s.volume() as i64;
        let v = random_potential(&s, 13, &PotentialMode::Complex).unwrap();
        let p = recover_ptilde(&v, TildeRoute::Dual).unwrap();
        let scale = p.max_abs_coeff();
        assert!(p.terms().all(|(m, c)| m.total_degree() <= q || c.norm() <= 1e-12 * scale));
        let top = p.total_degree_filter(q);
        let h = h_poly(&s).unwrap();
        assert!(top.max_abs_diff(&h) <= 1e-10 * scale);
    }

    #[test]
    fn triangular_recovery_matches_determinants() {
        let s = LatticeSpec::triangular(2, 3).unwrap();
        let v = random_potential(&s, 1, &PotentialMode::Real).unwrap();
        let p = recover_p(&v).unwrap();
        let k = [real(0.3), real(-0.2)];
        let z = torus_point(&k);
        let direct = eval_poly(&floquet_at(&v, &z).unwrap().charpoly(), real(0.5));
        assert!((p.eval(&z, real(0.5)) - direct).norm() <= 1e-10 * direct.norm().max(1.0));
    }
}
