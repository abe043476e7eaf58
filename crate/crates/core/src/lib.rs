//! Finite-dimensional operator theory toolkit.

pub mod commutant;
pub mod cpmaps;
pub mod error;
pub mod gns;
pub mod groups;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod spectral;
pub mod stochastic;
pub mod unbounded;
pub mod wavelet;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Tolerance, C64};
pub use spectral::SpectralData;
