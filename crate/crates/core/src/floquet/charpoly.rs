//! Characteristic polynomial `det(M − λI)` of a dense complex matrix.
//!
//! The matrix is first reduced to upper Hessenberg form by unitary
//! similarity, then the leading principal minors are expanded along their
//! last column:
//!
//! `p_k = (h_kk − λ) p_{k−1} + Σ_{i<k} (−1)^{k−i} h_ik (Π_{m=i+1..k} h_{m,m−1}) p_{i−1}`.

use nalgebra::{linalg::Hessenberg, DMatrix};
use num_complex::Complex64;

/// Coefficients `c_0..c_n` of `det(M − λI) = Σ_b c_b λ^b`; `c_n = (−1)^n`.
pub fn charpoly_coeffs(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let h = Hessenberg::new(m.clone()).h();
    hessenberg_charpoly(&h)
}

fn hessenberg_charpoly(h: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);
    // p[k] holds the coefficients of p_k, length k + 1.
    let mut p: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    p.push(vec![Complex64::new(1.0, 0.0)]);
    for k in 1..=n {
        let hkk = h[(k - 1, k - 1)];
        let prev = &p[k - 1];
        let mut next = vec![zero; k + 1];
        for (b, &c) in prev.iter().enumerate() {
            next[b] += hkk * c;
            next[b + 1] -= c;
        }
        let mut sub = Complex64::new(1.0, 0.0);
        for i in (1..k).rev() {
            // sub = Π_{m=i+1..k} h_{m,m−1} (one-based)
            sub *= h[(i, i - 1)];
            let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
            let factor = h[(i - 1, k - 1)] * sub * sign;
            if factor == zero {
                continue;
            }
            for (b, &c) in p[i - 1].iter().enumerate() {
                next[b] += factor * c;
            }
        }
        p.push(next);
    }
    p.pop().expect("n ≥ 1")
}

/// Faddeev–LeVerrier recursion, returned in the same convention as
/// [`charpoly_coeffs`]. Kept as an independent cross-check.
pub fn faddeev_leverrier(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut mk = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk;
        for i in 0..n {
            mk[(i, i)] += c[n - k + 1];
        }
        let am = m * &mk;
        c[n - k] = -am.trace() / k as f64;
    }
    // det(λI − M) → det(M − λI)
    if n % 2 == 1 {
        for x in &mut c {
            *x = -*x;
        }
    }
    c
}

/// Horner evaluation of `Σ_b c_b λ^b`.
pub fn eval_poly(coeffs: &[Complex64], lambda: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * lambda + c)
}
