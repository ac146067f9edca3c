//! Twist-induced resonance widths of embedded eigenvalues in straight
//! Dirichlet waveguides `R x omega` with a longitudinal potential.
//!
//! The pipeline has four layers:
//! - [`cross_section`]: transverse Dirichlet modes and the angular coupling matrices,
//! - [`longitudinal`]: the 1D operator `-d^2/dx^2 + V`, its bound states and resolvent boundary values,
//! - [`width`]: twist profiles, spectrum classification and the golden-rule coefficient,
//! - [`scaled_spectrum`]: a direct complex-scaled eigensolver used as an independent check.

pub mod cross_section;
pub mod error;
pub mod exec;
pub mod grid;
pub mod linalg;
pub mod longitudinal;
pub mod scaled_spectrum;
pub mod width;

pub use error::{Error, Result};
pub use exec::Execution;
