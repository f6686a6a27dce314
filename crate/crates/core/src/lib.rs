//! Face rings, partition complexes and Lefschetz-type checks for simplicial
//! complexes, computed exactly over prime fields.

pub mod acceptance;
pub mod duality;
pub mod exactlinalg;
pub mod facering;
pub mod koszul;
pub mod partition;
pub mod simplicial;
pub mod verdicts;

use thiserror::Error;

pub use exactlinalg::{FieldMatrix, PrimeField, DEFAULT_PRIME};
pub use simplicial::{Face, RelativeComplex, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SrError {
    #[error(transparent)]
    Linalg(#[from] exactlinalg::LinalgError),
    #[error("input error: {0}")]
    Input(String),
    #[error("quotient not finite-dimensional at degree cap {cap}")]
    NotFinite { cap: usize },
    #[error("not a manifold candidate: {0}")]
    NotManifold(String),
    #[error("not a duality candidate: {0}")]
    NotCandidate(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = SrError> = std::result::Result<T, E>;

pub(crate) fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
