//! Exact computation of Fourier coefficients of exceptional theta lifts.

pub mod error;
pub mod f4;
pub mod g2;
mod gauss;
pub mod freudenthal;
pub mod jordan;
pub mod linalg;
pub mod octonion;
pub mod qseries;
pub mod quaternionic;
pub mod scalar;
pub mod shell;
pub mod siegel;

pub use error::{Error, Result};
pub use octonion::Octonion;
pub use scalar::Scalar;
