//! Resonances of the twisted tube computed directly: transverse-mode
//! expansion in `K` channels, exterior complex scaling along `x`, and a
//! shift-invert eigensolver for the complex-symmetric matrix.
//!
//! Inside `[-R, R]` the contour is real; beyond it the coordinate runs along
//! `+-(R + t e^{i theta})`. The potential and the twist must be analytic (in
//! practice constant or negligible) on the rays, so `R` defaults to enclose
//! the twist transition and the well. Eigenvalues off the rotated continua
//! do not depend on `theta`.

mod eigen;
mod scan;
mod system;

pub use eigen::{locate_resonance, spectrum_window, ComplexEigenpair};
pub use scan::{channel_sweep, epsilon_scan, fit_slope, theta_sweep, ScanFit, ScanRow, ScanTable, SweepRow};
pub use system::{assemble, ChannelSystem};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cross_section::{CouplingMatrices, TransverseModeSet};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::longitudinal::PotentialSpec;
use crate::width::TwistProfile;

/// Everything that defines the operator apart from `epsilon` and the discretization.
#[derive(Debug, Clone, Copy)]
pub struct ScaledProblem<'a> {
    pub modes: &'a TransverseModeSet,
    pub coupling: &'a CouplingMatrices,
    pub potential: &'a PotentialSpec,
    pub twist: &'a TwistProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaledOptions {
    /// Channel count `K`.
    pub channels: usize,
    /// `Im theta`; zero gives the plain Dirichlet box.
    pub theta: f64,
    /// Upper bound on `Im theta`.
    pub theta_max: f64,
    /// Largest interior mesh spacing.
    pub h_max: f64,
    /// Each level halves every spacing.
    pub level: u32,
    /// `R`; by default just beyond the twist transition and the well.
    pub scaling_radius: Option<f64>,
    /// Length of each scaled ray; by default the open channels decay by `1e-10` along it.
    pub exterior_length: Option<f64>,
    /// Residual `||(H - E) v|| / ||v||` required of an eigenpair.
    pub tolerance: f64,
    pub arnoldi_steps: usize,
    /// Radius of the tracking disk in the epsilon scan.
    pub track_radius: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for ScaledOptions {
    fn default() -> Self {
        Self {
            channels: 6,
            theta: 0.35,
            theta_max: 0.6,
            h_max: 0.02,
            level: 0,
            scaling_radius: None,
            exterior_length: None,
            tolerance: 1e-8,
            arnoldi_steps: 40,
            track_radius: 0.05,
            exec: Execution::default(),
        }
    }
}

impl ScaledOptions {
    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 {
            return Err(invalid("at least one channel is needed"));
        }
        if !(self.theta_max > 0.0 && self.theta_max < std::f64::consts::FRAC_PI_4) {
            return Err(invalid(format!("theta_max = {} must lie in (0, pi/4)", self.theta_max)));
        }
        if !(self.theta >= 0.0 && self.theta <= self.theta_max) {
            return Err(invalid(format!("Im theta = {} must lie in [0, {}]", self.theta, self.theta_max)));
        }
        if !(self.h_max > 0.0 && self.h_max <= 0.5) {
            return Err(invalid(format!("h_max = {} must lie in (0, 0.5]", self.h_max)));
        }
        if !(self.tolerance > 0.0) || !(self.track_radius > 0.0) || self.arnoldi_steps < 4 {
            return Err(invalid("tolerance and tracking radius must be positive, arnoldi_steps >= 4"));
        }
        if let Some(r) = self.scaling_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid("scaling radius must be positive"));
            }
        }
        if let Some(l) = self.exterior_length {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(invalid("exterior length must be nonnegative"));
            }
        }
        Ok(())
    }
}

/// `{E_k + t e^{-2 i Im theta} : t >= 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ray {
    pub origin: f64,
    /// Angle to the positive real axis, `-2 Im theta`.
    pub angle: f64,
}

impl Ray {
    pub fn point(&self, t: f64) -> Complex64 {
        self.origin + Complex64::from_polar(t, self.angle)
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        let d = z - self.origin;
        let dir = Complex64::from_polar(1.0, self.angle);
        let t = (d * dir.conj()).re.max(0.0);
        (d - dir * t).norm()
    }
}

pub fn essential_rays(theta: f64, thresholds: &[f64]) -> Vec<Ray> {
    thresholds.iter().map(|&e| Ray { origin: e, angle: -2.0 * theta }).collect()
}

/// Distance from `z` to the nearest ray.
pub fn ray_distance(rays: &[Ray], z: Complex64) -> f64 {
    rays.iter().map(|r| r.distance(z)).fold(f64::INFINITY, f64::min)
}
