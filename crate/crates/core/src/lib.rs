//! Time-limited balanced truncation (TLBT) for asymptotically stable LTI
//! systems, with the time-limited L2 output-error bound and a simulator for
//! verifying it empirically.

pub mod error;
pub mod linalg;
pub mod system;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use system::{LtiModel, SimilarityTransform, StateSpace};
