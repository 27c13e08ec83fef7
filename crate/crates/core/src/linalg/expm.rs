//! Matrix exponential via scaling-and-squaring with the diagonal Padé(13)
//! approximant and 1-norm based scaling (Higham's method).

use crate::error::{Error, Result};
use crate::linalg::{require_finite, require_square};
use nalgebra::DMatrix;

/// Padé(13,13) numerator coefficients b_0..b_13.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Scaling threshold theta_13 for the Padé(13) approximant.
const THETA13: f64 = 5.371920351148152;

/// Compute `e^{A t}`. Exact identity for `t = 0`.
pub fn mat_exp(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    require_square(a, "mat_exp input")?;
    require_finite(a, "mat_exp input")?;
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("mat_exp time t={t}")));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    expm(a * t)
}

fn expm(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if n == 1 {
        return Ok(DMatrix::from_element(1, 1, m[(0, 0)].exp()));
    }
    let norm = one_norm(&m);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut f = pade13(&scaled)?;
    for _ in 0..squarings {
        f = &f * &f;
    }
    Ok(f)
}

fn pade13(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let w1 = &a6 * PADE13[13] + &a4 * PADE13[11] + &a2 * PADE13[9];
    let w2 = &w1 * &a6 + &a6 * PADE13[7] + &a4 * PADE13[5] + &a2 * PADE13[3] + &eye * PADE13[1];
    let u = a * w2;

    let v1 = &a6 * PADE13[12] + &a4 * PADE13[10] + &a2 * PADE13[8];
    let v = &v1 * &a6 + &a6 * PADE13[6] + &a4 * PADE13[4] + &a2 * PADE13[2] + &eye * PADE13[0];

    let denom = &v - &u;
    let numer = &v + &u;
    denom
        .lu()
        .solve(&numer)
        .ok_or(Error::Convergence("Pade denominator solve"))
}

/// Maximum absolute column sum.
fn one_norm(m: &DMatrix<f64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|v| v.abs()).sum();
        max = max.max(s);
    }
    max
}
