//! Exact computations with mixed Hodge structures and nilpotent orbits.
//!
//! Everything is generic over [`Scalar`]; [`GaussRat`] gives exact Gaussian
//! rational arithmetic and `Complex64` the float backend used by float traces.

pub mod deligne;
pub mod error;
pub mod factorize;
pub mod filtered;
pub mod fixtures;
pub mod hodge;
pub mod instance;
pub mod linalg;
pub mod orbit;
pub mod random;
pub mod scalar;
pub mod sl2;
pub mod weightfilt;

pub use error::{MhxError, Result};
pub use num_complex::Complex64;
pub use scalar::{GaussRat, Scalar};

pub type QMatrix = linalg::Matrix<GaussRat>;
pub type QSubspace = linalg::Subspace<GaussRat>;
pub type QGrading = filtered::Grading<GaussRat>;
pub type QIncreasing = filtered::IncreasingFiltration<GaussRat>;
pub type QDecreasing = filtered::DecreasingFiltration<GaussRat>;
pub type FMatrix = linalg::Matrix<Complex64>;
