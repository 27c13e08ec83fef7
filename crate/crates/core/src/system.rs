//! LTI state-space models, stability validation, similarity transforms and
//! benchmark generators.

use crate::error::{Error, Result};
use crate::linalg::{require_finite, require_square, sym_eig};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Anything that exposes `(A, B, C)` matrices of `dot x = A x + B u`,
/// `y = C x`. Implemented by [`StateSpace`] (validated Hurwitz) and by
/// [`crate::balancing::ReducedModel`] (stability not required).
pub trait LtiModel {
    fn a(&self) -> &DMatrix<f64>;
    fn b(&self) -> &DMatrix<f64>;
    fn c(&self) -> &DMatrix<f64>;

    /// State dimension n.
    fn order(&self) -> usize {
        self.a().nrows()
    }
    /// Input dimension m.
    fn inputs(&self) -> usize {
        self.b().ncols()
    }
    /// Output dimension p.
    fn outputs(&self) -> usize {
        self.c().nrows()
    }
}

/// Asymptotically stable LTI system `(A, B, C)` with zero feedthrough and
/// zero initial state. Construction rejects non-Hurwitz `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    abscissa: f64,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>) -> Result<Self> {
        require_square(&a, "state matrix A")?;
        require_finite(&a, "state matrix A")?;
        require_finite(&b, "input matrix B")?;
        require_finite(&c, "output matrix C")?;
        let n = a.nrows();
        if n == 0 || b.ncols() == 0 || c.nrows() == 0 {
            return Err(Error::dim("system dimensions n, m, p must be >= 1"));
        }
        if b.nrows() != n {
            return Err(Error::dim(format!(
                "B has {} rows, expected n={n}",
                b.nrows()
            )));
        }
        if c.ncols() != n {
            return Err(Error::dim(format!(
                "C has {} columns, expected n={n}",
                c.ncols()
            )));
        }
        let abscissa = validate_hurwitz(&a)?;
        if abscissa >= 0.0 {
            return Err(Error::NotHurwitz { abscissa });
        }
        Ok(StateSpace { a, b, c, abscissa })
    }

    /// Max real part of the eigenvalues of `A`, always `< 0`.
    pub fn spectral_abscissa(&self) -> f64 {
        self.abscissa
    }
}

impl LtiModel for StateSpace {
    fn a(&self) -> &DMatrix<f64> {
        &self.a
    }
    fn b(&self) -> &DMatrix<f64> {
        &self.b
    }
    fn c(&self) -> &DMatrix<f64> {
        &self.c
    }
}

/// Spectral abscissa (max real part of eigenvalues) of a square matrix.
/// Symmetric matrices take the symmetric eigensolver; everything else goes
/// through the Schur-based complex eigenvalue path.
pub fn validate_hurwitz(a: &DMatrix<f64>) -> Result<f64> {
    require_square(a, "validate_hurwitz input")?;
    require_finite(a, "validate_hurwitz input")?;
    if a.is_empty() {
        return Err(Error::dim("validate_hurwitz: empty matrix"));
    }
    let scale = a.norm();
    if scale > 0.0 && (a - a.transpose()).norm() <= 1e-14 * scale {
        let eig = sym_eig(a)?;
        return Ok(eig.eigenvalues[0]);
    }
    Ok(a.complex_eigenvalues()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Invertible change of coordinates with its precomputed inverse.
#[derive(Debug, Clone)]
pub struct SimilarityTransform {
    s: DMatrix<f64>,
    s_inv: DMatrix<f64>,
}

impl SimilarityTransform {
    /// Pair `(S, S^{-1})`; rejected unless `||S S^{-1} - I||_F <= 1e-8 sqrt(n)`.
    pub fn new(s: DMatrix<f64>, s_inv: DMatrix<f64>) -> Result<Self> {
        require_square(&s, "transform S")?;
        require_finite(&s, "transform S")?;
        require_finite(&s_inv, "transform S_inv")?;
        let n = s.nrows();
        if s_inv.nrows() != n || s_inv.ncols() != n {
            return Err(Error::dim(format!(
                "S_inv is {}x{}, expected {n}x{n}",
                s_inv.nrows(),
                s_inv.ncols()
            )));
        }
        let defect = (&s * &s_inv - DMatrix::identity(n, n)).norm();
        let limit = 1e-8 * (n as f64).sqrt();
        if defect > limit {
            return Err(Error::dim(format!(
                "S * S_inv deviates from identity by {defect:.3e} (limit {limit:.3e})"
            )));
        }
        Ok(SimilarityTransform { s, s_inv })
    }

    /// Build from `S` alone, inverting by LU.
    pub fn from_matrix(s: DMatrix<f64>) -> Result<Self> {
        require_square(&s, "transform S")?;
        let s_inv = s
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::dim("transform S is singular"))?;
        SimilarityTransform::new(s, s_inv)
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn s_inv(&self) -> &DMatrix<f64> {
        &self.s_inv
    }

    pub fn order(&self) -> usize {
        self.s.nrows()
    }
}

/// Change of coordinates `(S A S^{-1}, S B, C S^{-1})`; the output map `y`
/// is unchanged.
pub fn apply_transform(sys: &StateSpace, t: &SimilarityTransform) -> Result<StateSpace> {
    if t.order() != sys.order() {
        return Err(Error::dim(format!(
            "transform order {} does not match system order {}",
            t.order(),
            sys.order()
        )));
    }
    StateSpace::new(
        t.s() * sys.a() * t.s_inv(),
        t.s() * sys.b(),
        sys.c() * t.s_inv(),
    )
}

/// Output selector for the heat rod generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RodOutput {
    /// Sample the temperature at one interior node (1-based).
    Node(usize),
    /// Spatial mean over all nodes, `C = [1/n, ..., 1/n]`.
    Mean,
}

/// Dirichlet heat rod on `(0, 1)`: centered finite differences on `n`
/// interior nodes, `A = diffusivity (n+1)^2 tridiag(1, -2, 1)`, point input
/// at `input_node` (1-based), output per [`RodOutput`].
pub fn heat_rod(
    n: usize,
    diffusivity: f64,
    input_node: usize,
    output: RodOutput,
) -> Result<StateSpace> {
    if n < 2 {
        return Err(Error::dim(format!("heat rod needs n >= 2, got {n}")));
    }
    if !(diffusivity > 0.0) {
        return Err(Error::dim(format!(
            "heat rod diffusivity must be positive, got {diffusivity}"
        )));
    }
    if input_node < 1 || input_node > n {
        return Err(Error::dim(format!(
            "input node {input_node} out of range 1..={n}"
        )));
    }
    let scale = diffusivity * ((n + 1) * (n + 1)) as f64;
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = -2.0 * scale;
        if i > 0 {
            a[(i, i - 1)] = scale;
        }
        if i + 1 < n {
            a[(i, i + 1)] = scale;
        }
    }
    let mut b = DMatrix::zeros(n, 1);
    b[(input_node - 1, 0)] = 1.0;
    let c = match output {
        RodOutput::Node(j) => {
            if j < 1 || j > n {
                return Err(Error::dim(format!("output node {j} out of range 1..={n}")));
            }
            let mut c = DMatrix::zeros(1, n);
            c[(0, j - 1)] = 1.0;
            c
        }
        RodOutput::Mean => DMatrix::from_element(1, n, 1.0 / n as f64),
    };
    StateSpace::new(a, b, c)
}

/// Default SISO heat rod used by the CLI and benchmarks: diffusivity 1,
/// input at the first node at or after `ceil(n/3)` coprime with `n+1`,
/// output sampled at the first node at or after `ceil(2n/3)` coprime with
/// `n+1`. Coprimality keeps every Laplacian mode reachable and observable,
/// so the time-limited Gramians stay positive definite.
pub fn heat_rod_default(n: usize) -> Result<StateSpace> {
    let (input, output) = heat_rod_default_nodes(n)?;
    heat_rod(n, 1.0, input, RodOutput::Node(output))
}

/// The `(input, output)` node pair chosen by [`heat_rod_default`].
pub fn heat_rod_default_nodes(n: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::dim(format!("heat rod needs n >= 2, got {n}")));
    }
    let coprime_at_or_after = |start: usize| -> usize {
        let mut j = start.clamp(1, n);
        while gcd(j, n + 1) != 1 {
            j += 1;
        }
        j.min(n)
    };
    let input = coprime_at_or_after(n.div_ceil(3));
    let output = coprime_at_or_after((2 * n).div_ceil(3));
    Ok((input, output))
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Margin by which [`random_stable`] shifts the spectral abscissa below zero.
pub const RANDOM_STABLE_MARGIN: f64 = 0.5;

/// Deterministic random stable system: `A = M - (alpha(M) + 0.5) I` with `M`
/// standard normal, then `B`, `C` standard normal, all drawn row-major from
/// a ChaCha8 stream seeded with `seed`.
pub fn random_stable(n: usize, m: usize, p: usize, seed: u64) -> Result<StateSpace> {
    if n == 0 || m == 0 || p == 0 {
        return Err(Error::dim("random_stable needs n, m, p >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| -> DMatrix<f64> {
        let mut out = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = rng.sample(StandardNormal);
            }
        }
        out
    };
    let m_raw = draw(n, n);
    let abscissa = validate_hurwitz(&m_raw)?;
    let a = &m_raw - DMatrix::identity(n, n) * (abscissa + RANDOM_STABLE_MARGIN);
    let b = draw(n, m);
    let c = draw(p, n);
    StateSpace::new(a, b, c)
}
