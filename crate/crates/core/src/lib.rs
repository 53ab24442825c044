//! Evans-Selberg potentials, Evans kernels, annulus Green kernels and
//! fundamental metrics on the punctured and twice-punctured plane, together
//! with the numerical checks of their defining properties.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the verification harness and
//! the CLI use.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod green;
pub mod kernel;
pub mod point;
pub mod richardson;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use point::CPoint;
pub use scalar::Real;

pub type Point = CPoint<f64>;
pub type Point32 = CPoint<f32>;
pub type Annulus = green::AnnulusSpec<f64>;
pub type Punctured = kernel::PuncturedParams<f64>;
pub type TwicePunctured = kernel::TwicePuncturedParams<f64>;
pub type Metric = kernel::MetricParams<f64>;
