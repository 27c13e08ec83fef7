//! Dense real matrix kernels: matrix exponential, continuous Lyapunov solver,
//! symmetric eigendecomposition, SPD factorization / inverse square root,
//! SVD and the spectral norm.
//!
//! Everything operates on `nalgebra::DMatrix<f64>`. All functions are pure;
//! results are plain values and safe to share across threads.

mod expm;
mod lyapunov;

pub use expm::mat_exp;
pub use lyapunov::solve_lyapunov;

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Default relative tolerance for PSD and singularity checks.
pub const DEFAULT_SPD_TOL: f64 = 1e-12;

/// Relative asymmetry accepted before an input is rejected as non-symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Iteration budget for the QR-type decompositions; generous for any
/// realistic input, finite so degenerate input errors instead of spinning.
pub(crate) fn iter_limit(n: usize) -> usize {
    100 * n + 1000
}

/// Symmetric eigendecomposition with eigenvalues sorted non-increasing and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Eigenvalues, non-increasing.
    pub eigenvalues: DVector<f64>,
    /// Eigenvectors as columns, same order as `eigenvalues`.
    pub vectors: DMatrix<f64>,
}

impl SymEig {
    /// Spectral norm of the decomposed matrix, `max |lambda_i|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()))
    }
}

pub(crate) fn require_square(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::dim(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn require_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("{what} contains NaN or Inf")));
    }
    Ok(())
}

/// `(M + M^T) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Reject matrices whose asymmetry exceeds `SYMMETRY_TOL` relative to the
/// Frobenius norm.
pub(crate) fn require_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    require_square(m, what)?;
    let scale = m.norm();
    if scale == 0.0 {
        return Ok(());
    }
    let asym = (m - m.transpose()).norm() / scale;
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix. The input is symmetrized as
/// `(S + S^T)/2` before decomposing; eigenvalues come back non-increasing.
pub fn sym_eig(s: &DMatrix<f64>) -> Result<SymEig> {
    require_symmetric(s, "sym_eig input")?;
    require_finite(s, "sym_eig input")?;
    let sym = symmetrize(s);
    let n = sym.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, iter_limit(n))
        .ok_or(Error::Convergence("symmetric eigenvalue"))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("finite eigenvalues")
    });
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SymEig {
        eigenvalues,
        vectors,
    })
}

/// Factor a symmetric PSD matrix as `L L^T = S` with `L` of size
/// `n x rank`, where the numerical rank counts eigenvalues above
/// `tol * ||S||_2`. Eigenvalues in `[-tol*||S||_2, tol*||S||_2]` are clamped
/// to zero (their columns are dropped); anything below the negative threshold
/// is a PSD violation.
pub fn spd_factor(s: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let eig = sym_eig(s)?;
    let n = s.nrows();
    let scale = eig.spectral_norm();
    let threshold = tol * scale;
    let min_eig = if n == 0 { 0.0 } else { eig.eigenvalues[n - 1] };
    if min_eig < -threshold {
        return Err(Error::NotPsd {
            min_eig,
            threshold: -threshold,
        });
    }
    let rank = eig.eigenvalues.iter().filter(|&&l| l > threshold).count();
    let mut l = DMatrix::zeros(n, rank);
    for j in 0..rank {
        let col = eig.vectors.column(j) * eig.eigenvalues[j].sqrt();
        l.set_column(j, &col);
    }
    Ok(l)
}

/// Symmetric inverse square root `M` of an SPD matrix, `M S M = I`.
/// Fails if any eigenvalue is at or below `tol * ||S||_2`.
pub fn spd_inv_sqrt(s: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let eig = sym_eig(s)?;
    let n = s.nrows();
    let scale = eig.spectral_norm();
    let threshold = tol * scale;
    let min_eig = if n == 0 { 0.0 } else { eig.eigenvalues[n - 1] };
    if n > 0 && (min_eig <= threshold || scale == 0.0) {
        return Err(Error::Singular { min_eig, threshold });
    }
    let mut scaled = eig.vectors.clone();
    for j in 0..n {
        let factor = 1.0 / eig.eigenvalues[j].sqrt();
        scaled.column_mut(j).scale_mut(factor);
    }
    Ok(symmetrize(&(scaled * eig.vectors.transpose())))
}

/// Thin SVD `M = U diag(sigma) V^T` with singular values non-increasing and
/// orthonormal columns in `U` and `V`.
pub fn svd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
    require_finite(m, "svd input")?;
    let mut dec = nalgebra::SVD::try_new(m.clone(), true, true, f64::EPSILON, iter_limit(m.nrows().max(m.ncols())))
        .ok_or(Error::Convergence("SVD"))?;
    dec.sort_by_singular_values();
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    Ok((u, dec.singular_values, v_t.transpose()))
}

/// Largest singular value of `M`.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values()
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{assert_close, random_spd, seeded_rng};
    use rand::Rng;

    #[test]
    fn sym_eig_identity() {
        let eig = sym_eig(&DMatrix::identity(3, 3)).unwrap();
        for &l in eig.eigenvalues.iter() {
            assert_close(l, 1.0, 1e-14);
        }
    }

    #[test]
    fn sym_eig_sorts_diagonal() {
        let eig = sym_eig(&DMatrix::from_diagonal(&DVector::from_vec(vec![
            3.0, 1.0, 2.0,
        ])))
        .unwrap();
        assert_close(eig.eigenvalues[0], 3.0, 1e-14);
        assert_close(eig.eigenvalues[1], 2.0, 1e-14);
        assert_close(eig.eigenvalues[2], 1.0, 1e-14);
    }

    #[test]
    fn sym_eig_2x2_hand_characteristic_polynomial() {
        // [[2,1],[1,2]]: det(S - l I) = (2-l)^2 - 1 => l = 3, 1.
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let eig = sym_eig(&s).unwrap();
        assert_close(eig.eigenvalues[0], 3.0, 1e-12);
        assert_close(eig.eigenvalues[1], 1.0, 1e-12);
        // reconstruction
        let rec = &eig.vectors
            * DMatrix::from_diagonal(&eig.eigenvalues)
            * eig.vectors.transpose();
        assert!((rec - &s).norm() <= 1e-10 * s.norm());
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 5.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn spd_factor_identity() {
        let l = spd_factor(&DMatrix::identity(4, 4), DEFAULT_SPD_TOL).unwrap();
        assert_eq!(l.ncols(), 4);
        assert!((l.clone() * l.transpose() - DMatrix::identity(4, 4)).norm() <= 1e-12);
    }

    #[test]
    fn spd_factor_diagonal() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let l = spd_factor(&s, DEFAULT_SPD_TOL).unwrap();
        assert!((l.clone() * l.transpose() - &s).norm() <= 1e-10 * s.norm());
    }

    #[test]
    fn spd_factor_reconstructs_full_matrix() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let l = spd_factor(&s, DEFAULT_SPD_TOL).unwrap();
        assert!((l.clone() * l.transpose() - &s).norm() <= 1e-10 * s.norm());
    }

    #[test]
    fn spd_factor_drops_rank() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-20]));
        let l = spd_factor(&s, DEFAULT_SPD_TOL).unwrap();
        assert_eq!(l.ncols(), 1);
    }

    #[test]
    fn spd_factor_rejects_indefinite() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(
            spd_factor(&s, DEFAULT_SPD_TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn spd_inv_sqrt_identity_and_diagonal() {
        let m = spd_inv_sqrt(&DMatrix::identity(3, 3), DEFAULT_SPD_TOL).unwrap();
        assert!((m - DMatrix::identity(3, 3)).norm() <= 1e-12);

        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 16.0]));
        let m = spd_inv_sqrt(&s, DEFAULT_SPD_TOL).unwrap();
        assert_close(m[(0, 0)], 0.5, 1e-12);
        assert_close(m[(1, 1)], 0.25, 1e-12);
    }

    #[test]
    fn spd_inv_sqrt_defining_identity() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let m = spd_inv_sqrt(&s, DEFAULT_SPD_TOL).unwrap();
        assert!((&m * &s * &m - DMatrix::identity(2, 2)).norm() <= 1e-8);
    }

    #[test]
    fn spd_inv_sqrt_rejects_singular() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]));
        assert!(matches!(
            spd_inv_sqrt(&s, DEFAULT_SPD_TOL),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn svd_examples() {
        let (_, s, _) = svd(&DMatrix::identity(2, 2)).unwrap();
        assert_close(s[0], 1.0, 1e-14);
        assert_close(s[1], 1.0, 1e-14);

        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -4.0]));
        let (_, s, _) = svd(&m).unwrap();
        assert_close(s[0], 4.0, 1e-12);
        assert_close(s[1], 3.0, 1e-12);

        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let (u, s, v) = svd(&m).unwrap();
        assert_close(s[0], 2.0, 1e-12);
        assert!(s[1].abs() <= 1e-14);
        let rec = &u * DMatrix::from_diagonal(&s) * v.transpose();
        assert!((rec - &m).norm() <= 1e-10 * m.norm().max(1.0));
    }

    #[test]
    fn spectral_norm_examples() {
        assert_close(spectral_norm(&DMatrix::identity(5, 5)), 1.0, 1e-14);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -7.0, 3.0]));
        assert_close(spectral_norm(&d), 7.0, 1e-12);
        let col = DMatrix::from_column_slice(2, 1, &[3.0, 4.0]);
        assert_close(spectral_norm(&col), 5.0, 1e-12);
    }

    #[test]
    fn spd_roundtrips_on_random_spd() {
        let mut rng = seeded_rng(7);
        for _ in 0..100 {
            let n = rng.random_range(1..=30usize);
            let s = random_spd(n, &mut rng);
            let scale = s.norm();
            let l = spd_factor(&s, DEFAULT_SPD_TOL).unwrap();
            assert!(
                (l.clone() * l.transpose() - &s).norm() <= 1e-10 * scale,
                "factor reconstruction failed at n={n}"
            );
            let m = spd_inv_sqrt(&s, DEFAULT_SPD_TOL).unwrap();
            assert!(
                (&m * &s * &m - DMatrix::identity(n, n)).norm() <= 1e-8,
                "inverse sqrt identity failed at n={n}"
            );
        }
    }
}
