//! Small self-contained numerical kernels: banded factorizations, Krylov
//! eigensolvers and quadrature rules.

pub mod arnoldi;
pub mod banded;
pub mod lanczos;
pub mod quadrature;
pub mod tridiag;

pub use banded::{BandedCholesky, ComplexBandedLu};
pub use quadrature::GaussLegendre;

/// Richardson extrapolation for a second-order method evaluated at `h` and `h/2`.
pub fn richardson2<T>(coarse: T, fine: T) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    fine * (4.0 / 3.0) - coarse * (1.0 / 3.0)
}
