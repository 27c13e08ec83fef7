//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or size mismatch between operands.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A value that must be finite (or a finite matrix entry) was not.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// State matrix has an eigenvalue with non-negative real part.
    #[error("matrix is not Hurwitz: spectral abscissa {abscissa:.6e} >= 0")]
    NotHurwitz { abscissa: f64 },

    /// An iterative decomposition (Schur, eigen, SVD) failed to converge.
    #[error("{0} decomposition did not converge")]
    Convergence(&'static str),

    /// A Sylvester diagonal block is (near-)singular: some eigenvalue pair of
    /// the coefficient matrix sums to roughly zero.
    #[error(
        "lyapunov solver: eigenvalue pair of A sums to {sum:.6e}; \
         the equation has no well-conditioned solution"
    )]
    SingularSylvesterBlock { sum: f64 },

    /// Symmetric input expected but the asymmetry exceeds tolerance.
    #[error("matrix is not symmetric: relative asymmetry {asymmetry:.3e}")]
    NotSymmetric { asymmetry: f64 },

    /// Eigenvalue below the negative PSD tolerance.
    #[error(
        "matrix is not positive semidefinite: min eigenvalue {min_eig:.6e} \
         below threshold {threshold:.6e}"
    )]
    NotPsd { min_eig: f64, threshold: f64 },

    /// Matrix is numerically singular for an operation that needs an inverse.
    #[error(
        "matrix is numerically singular: min eigenvalue {min_eig:.6e} \
         at or below threshold {threshold:.6e}"
    )]
    Singular { min_eig: f64, threshold: f64 },

    /// A Gramian is rank deficient beyond tolerance, i.e. the system is not
    /// completely reachable/observable on the requested horizon.
    #[error(
        "{which} gramian has numerical rank {rank} of {n}: system is not \
         completely {property} on this horizon"
    )]
    RankDeficientGramian {
        which: &'static str,
        property: &'static str,
        rank: usize,
        n: usize,
    },

    /// Smallest singular value too small relative to the largest for a
    /// trustworthy balancing transform.
    #[error(
        "ill-conditioned balancing: sigma ratio {ratio:.3e} below {threshold:.3e}; \
         use the projection route for the reduced model"
    )]
    IllConditionedBalancing { ratio: f64, threshold: f64 },

    /// Balancing transform condition number beyond the refusal limit.
    #[error("balancing transform condition number {cond:.3e} exceeds {limit:.3e}")]
    IllConditionedTransform { cond: f64, limit: f64 },

    /// Requested reduced order outside `1..=n`.
    #[error("reduced order r={r} out of range 1..={n}")]
    OrderOutOfRange { r: usize, n: usize },

    /// Simulation/quadrature grid problem (odd node count, too few steps,
    /// mismatched grids).
    #[error("grid error: {0}")]
    Grid(String),

    /// Input signal problem (zero signal, wrong channel count, bad samples).
    #[error("signal error: {0}")]
    Signal(String),

    /// File could not be parsed; `detail` carries the offending key/line.
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
