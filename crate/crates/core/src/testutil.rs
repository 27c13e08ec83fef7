//! Helpers and independent oracles for unit tests.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "expected {expected}, got {actual} (diff {})",
        (actual - expected).abs()
    );
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = random_matrix(n, n, rng);
    (&m + m.transpose()) * 0.5
}

/// SPD matrix `G G^T + eps I` with a guaranteed positive spectrum.
pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = random_matrix(n, n, rng);
    &g * g.transpose() + DMatrix::identity(n, n) * 0.1
}

/// Dense matrix shifted to spectral abscissa -0.5 (Hurwitz by construction).
pub fn random_stable_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = random_matrix(n, n, rng);
    let abscissa = m
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    &m - DMatrix::identity(n, n) * (abscissa + 0.5)
}

/// Term-by-term Taylor summation of `e^{A t}`; independent of the Pade path.
pub fn taylor_exp(a: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let at = a * t;
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..200 {
        term = &term * &at / (k as f64);
        sum += &term;
        if term.norm() < 1e-20 * sum.norm().max(1.0) {
            break;
        }
    }
    sum
}

/// Entrywise Lyapunov solution for diagonal `A`: `x_ij = -w_ij / (l_i + l_j)`.
pub fn diagonal_lyapunov_oracle(lambdas: &[f64], w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = lambdas.len();
    DMatrix::from_fn(n, n, |i, j| -w[(i, j)] / (lambdas[i] + lambdas[j]))
}

/// Composite Gauss-Legendre (7 nodes) quadrature of a scalar function,
/// used as an independent check of closed-form integrals.
pub fn gauss_legendre_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 7] = [
        -0.9491079123427585,
        -0.7415311855993945,
        -0.4058451513773972,
        0.0,
        0.4058451513773972,
        0.7415311855993945,
        0.9491079123427585,
    ];
    const WEIGHTS: [f64; 7] = [
        0.1294849661688697,
        0.2797053914892766,
        0.3818300505051189,
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892766,
        0.1294849661688697,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * h
}

/// Per-channel sum of a few random sinusoids; smooth deterministic input for
/// simulation tests.
pub fn random_smooth_signal(
    channels: usize,
    seed: u64,
) -> impl Fn(f64) -> DVector<f64> + Send + Sync + Clone {
    let mut rng = seeded_rng(0x5157_0000 + seed);
    let mut terms = Vec::new();
    for _ in 0..channels {
        let mut chan = Vec::new();
        for _ in 0..3 {
            let amp: f64 = rng.sample(StandardNormal);
            let freq = rng.random_range(0.2..2.5f64);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            chan.push((amp, freq, phase));
        }
        terms.push(chan);
    }
    move |t: f64| {
        DVector::from_iterator(
            channels,
            terms.iter().map(|chan| {
                chan.iter()
                    .map(|&(a, f, p)| a * (std::f64::consts::TAU * f * t + p).sin())
                    .sum()
            }),
        )
    }
}
