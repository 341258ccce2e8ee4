//! Small dense helpers on top of nalgebra: Hermitian eigen-decomposition,
//! projection onto the PSD cone, the isometric real vectorization of Hermitian
//! matrices used by the constrained solver, and pairwise summation.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::C64;

/// Eigen-decomposition of a Hermitian matrix (the strict upper triangle is
/// re-derived from the lower one, so tiny asymmetries are ignored).
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let sym = hermitian_part(m);
    let eig = nalgebra::SymmetricEigen::new(sym);
    (eig.eigenvalues, eig.eigenvectors)
}

/// (M + Mᴴ) / 2.
pub fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn min_hermitian_eigenvalue(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let (values, _) = hermitian_eigen(m);
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Nearest positive-semidefinite matrix in Frobenius norm.
pub fn project_psd(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(m);
    let clipped = DMatrix::from_diagonal(&values.map(|v| C64::new(v.max(0.0), 0.0)));
    &vectors * clipped * vectors.adjoint()
}

/// Dimension of the real vectorization of an `n × n` Hermitian matrix.
pub const fn svec_len(n: usize) -> usize {
    n * n
}

/// Isometric real vectorization: diagonal entries, then √2·Re and √2·Im of
/// the strict upper triangle (row-major). ‖svec(M)‖₂ = ‖M‖_F.
pub fn svec(m: &DMatrix<C64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(svec_len(n));
    for i in 0..n {
        out.push(m[(i, i)].re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(core::f64::consts::SQRT_2 * m[(i, j)].re);
            out.push(core::f64::consts::SQRT_2 * m[(i, j)].im);
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], n: usize) -> DMatrix<C64> {
    debug_assert_eq!(v.len(), svec_len(n));
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(v[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = C64::new(v[k], v[k + 1]) * core::f64::consts::FRAC_1_SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Pairwise (cascade) summation. The result depends only on the order of
/// `items`, never on how they were produced.
pub fn pairwise_sum<T, F>(items: &[T], zero: T, add: &F) -> T
where
    T: Clone,
    F: Fn(&T, &T) -> T,
{
    match items.len() {
        0 => zero,
        1 => items[0].clone(),
        n => {
            let (left, right) = items.split_at(n / 2);
            add(&pairwise_sum(left, zero.clone(), add), &pairwise_sum(right, zero, add))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        hermitian_part(&a)
    }

    #[test]
    fn svec_is_isometric_and_invertible() {
        let m = random_hermitian(4, 7);
        let v = svec(&m);
        let norm_v = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm_v - m.norm()).abs() < 1e-14);
        assert!((smat(&v, 4) - m).norm() < 1e-14);
    }

    #[test]
    fn psd_projection_clips_negative_spectrum() {
        let m = random_hermitian(4, 3);
        let p = project_psd(&m);
        assert!(min_hermitian_eigenvalue(&p) > -1e-14);
        // idempotent
        assert!((project_psd(&p) - &p).norm() < 1e-12);
    }

    #[test]
    fn pairwise_sum_matches_naive_for_exact_values() {
        let values: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&values, 0.0, &|a, b| a + b), 5050.0);
        assert_eq!(pairwise_sum(&[] as &[f64], 0.0, &|a, b| a + b), 0.0);
    }
}
