//! Continuous Lyapunov solver `A X + X A^T + W = 0` via orthogonal reduction
//! of `A` to real Schur (quasi-triangular) form and block back-substitution.

use crate::error::{Error, Result};
use crate::linalg::{require_finite, require_square, require_symmetric, symmetrize};
use nalgebra::DMatrix;

/// Solve `A X + X A^T + W = 0` for symmetric `W`.
///
/// `A` must not have two eigenvalues summing to zero (a Hurwitz `A`
/// guarantees this); otherwise the offending eigenvalue sum is reported.
/// The returned solution is symmetrized and satisfies
/// `||A X + X A^T + W||_F <= 1e-10 * max(1, ||W||_F)`.
pub fn solve_lyapunov(a: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    require_square(a, "lyapunov A")?;
    require_finite(a, "lyapunov A")?;
    require_symmetric(w, "lyapunov W")?;
    require_finite(w, "lyapunov W")?;
    let n = a.nrows();
    if w.nrows() != n {
        return Err(Error::dim(format!(
            "lyapunov W is {}x{}, expected {n}x{n}",
            w.nrows(),
            w.ncols()
        )));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let w = symmetrize(w);

    let schur = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, crate::linalg::iter_limit(n))
        .ok_or(Error::Convergence("real Schur"))?;
    let (q, t) = schur.unpack();

    // T Y + Y T^T = C with C = -Q^T W Q, then X = Q Y Q^T.
    let c = -(q.transpose() * &w * &q);
    let y = solve_quasi_triangular(&t, &c)?;
    let x = symmetrize(&(&q * y * q.transpose()));

    let residual = (a * &x + &x * a.transpose() + &w).norm();
    let limit = 1e-10 * w.norm().max(1.0);
    if residual > limit {
        return Err(Error::SingularSylvesterBlock {
            sum: min_eigenvalue_pair_sum(&t),
        });
    }
    Ok(x)
}

/// Diagonal block layout of a quasi-upper-triangular matrix: `(start, size)`
/// with `size` 1 or 2.
fn diagonal_blocks(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut k = 0;
    while k < n {
        let two_by_two = k + 1 < n && {
            let sub = t[(k + 1, k)].abs();
            sub > f64::EPSILON * (t[(k, k)].abs() + t[(k + 1, k + 1)].abs())
        };
        if two_by_two {
            blocks.push((k, 2));
            k += 2;
        } else {
            blocks.push((k, 1));
            k += 1;
        }
    }
    blocks
}

/// Solve `T Y + Y T^T = C` for quasi-upper-triangular `T`, sweeping block
/// columns and rows from the bottom-right corner so every coupling term is
/// already known.
fn solve_quasi_triangular(t: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = t.nrows();
    let blocks = diagonal_blocks(t);
    let nb = blocks.len();
    let mut y = DMatrix::<f64>::zeros(n, n);

    for jb in (0..nb).rev() {
        let (pj, sj) = blocks[jb];
        for ib in (0..nb).rev() {
            let (pi, si) = blocks[ib];
            let mut rhs = c.view((pi, pj), (si, sj)).into_owned();
            // (T Y)_{ij} couplings with k > ib
            for kb in (ib + 1)..nb {
                let (pk, sk) = blocks[kb];
                rhs -= t.view((pi, pk), (si, sk)) * y.view((pk, pj), (sk, sj));
            }
            // (Y T^T)_{ij} couplings with l > jb; (T^T)_{lj} = T_{jl}^T
            for lb in (jb + 1)..nb {
                let (pl, sl) = blocks[lb];
                rhs -= y.view((pi, pl), (si, sl)) * t.view((pj, pl), (sj, sl)).transpose();
            }
            let tii = t.view((pi, pi), (si, si)).into_owned();
            let tjj = t.view((pj, pj), (sj, sj)).into_owned();
            let z = solve_small_sylvester(&tii, &tjj, &rhs)
                .ok_or_else(|| Error::SingularSylvesterBlock {
                    sum: min_eigenvalue_pair_sum(t),
                })?;
            y.view_mut((pi, pj), (si, sj)).copy_from(&z);
        }
    }
    Ok(y)
}

/// Solve `T1 Z + Z T2^T = R` for blocks of size at most 2 via the
/// Kronecker form `(I (x) T1 + T2 (x) I) vec(Z) = vec(R)`.
fn solve_small_sylvester(
    t1: &DMatrix<f64>,
    t2: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Option<DMatrix<f64>> {
    let p = t1.nrows();
    let q = t2.nrows();
    let k = p * q;
    let mut m = DMatrix::<f64>::zeros(k, k);
    // vec is column-stacked: unknown index (i, j) -> j*p + i.
    for j in 0..q {
        for i in 0..p {
            let row = j * p + i;
            for l in 0..p {
                m[(row, j * p + l)] += t1[(i, l)];
            }
            for l in 0..q {
                m[(row, l * p + i)] += t2[(j, l)];
            }
        }
    }
    let rhs = DMatrix::from_fn(k, 1, |row, _| r[(row % p, row / p)]);
    let sol = m.lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(DMatrix::from_fn(p, q, |i, j| sol[(j * p + i, 0)]))
}

/// Signed magnitude of the eigenvalue-pair sum of the Schur form closest to
/// zero, used to name the (near-)singular direction in error reports.
fn min_eigenvalue_pair_sum(t: &DMatrix<f64>) -> f64 {
    let eigs: Vec<(f64, f64)> = diagonal_blocks(t)
        .iter()
        .flat_map(|&(p, s)| {
            if s == 1 {
                vec![(t[(p, p)], 0.0)]
            } else {
                let a = t[(p, p)];
                let b = t[(p, p + 1)];
                let c = t[(p + 1, p)];
                let d = t[(p + 1, p + 1)];
                let re = (a + d) / 2.0;
                let disc = (a - d) * (a - d) / 4.0 + b * c;
                if disc < 0.0 {
                    let im = (-disc).sqrt();
                    vec![(re, im), (re, -im)]
                } else {
                    let root = disc.sqrt();
                    vec![(re + root, 0.0), (re - root, 0.0)]
                }
            }
        })
        .collect();
    let mut best_mag = f64::INFINITY;
    let mut best = f64::INFINITY;
    for &(re1, im1) in &eigs {
        for &(re2, im2) in &eigs {
            let re = re1 + re2;
            let mag = (re * re + (im1 + im2).powi(2)).sqrt();
            if mag < best_mag {
                best_mag = mag;
                best = if re < 0.0 { -mag } else { mag };
            }
        }
    }
    best
}
