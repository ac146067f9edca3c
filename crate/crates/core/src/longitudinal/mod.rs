//! The 1D operator `h = -d^2/dx^2 + V`: potentials, bound states and
//! boundary values of the resolvent.

mod delta;
pub(crate) mod mesh;
mod poschl_teller;
mod potential;
mod profile;
mod resolvent;

pub use delta::{delta_resolvent_kernel, DeltaKernel};
pub use poschl_teller::{depth_parameter, energies as poschl_teller_energies, PtEigenfunction};
pub use potential::{
    delta_limit_bound_state, discrete_bound_energies, poschl_teller_spectrum, validate_assumption_a, AssumptionReport,
    BoundProfile, BoundState, PotentialSpec,
};
pub use profile::{FnProfile, Gaussian, Profile};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Approach to the real axis: `lambda + i0` or `lambda - i0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolventEngine {
    /// Exterior complex scaling beyond the support of `v` and `V`.
    #[default]
    ExteriorScaling,
    /// Evaluation at `lambda +- i rho` on a box with transparent ends, extrapolated to `rho = 0`.
    Extrapolated,
    /// Closed-form kernels of the point interaction.
    DeltaKernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventOptions {
    pub engine: ResolventEngine,
    /// Exterior rotation angle (radians).
    pub theta: f64,
    /// Scaling radius in units of the decay length of `v`.
    pub radius_factor: f64,
    /// Minimum length of each rotated ray.
    pub exterior_length: f64,
    /// Upper bound on the real-axis spacing.
    pub h_max: f64,
    /// One Richardson step over a halved mesh.
    pub richardson: bool,
    pub rhos: [f64; 3],
    /// Spacing of the kernel quadrature.
    pub kernel_h: f64,
    /// Half-width of the window around `mu_j` where the pole is removed.
    pub deflation_window: f64,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            engine: ResolventEngine::ExteriorScaling,
            theta: 0.35,
            radius_factor: 24.0,
            exterior_length: 40.0,
            h_max: 0.01,
            richardson: true,
            rhos: [1e-2, 1e-3, 1e-4],
            kernel_h: 1e-3,
            deflation_window: 1e-6,
        }
    }
}

impl ResolventOptions {
    pub fn with_engine(engine: ResolventEngine) -> Self {
        Self { engine, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventBoundaryValue {
    pub lambda: f64,
    pub side: Side,
    /// `<v, (h - lambda -+ i0)^{-1} v>`; its imaginary part is `>= 0` on the `+` side.
    pub value: Complex64,
    pub reduced: bool,
}

/// Boundary value of the resolvent form at real `lambda` with default options.
pub fn resolvent_form(potential: &PotentialSpec, lambda: f64, side: Side, v: &dyn Profile, reduced: bool) -> Result<ResolventBoundaryValue> {
    resolvent_form_with(potential, lambda, side, v, reduced, &ResolventOptions::default())
}

/// As [`resolvent_form`]. With `reduced`, a `lambda` inside the deflation
/// window of a bound state is evaluated as the mean of the form over a small
/// circle around `lambda`: the pole inside integrates to zero and the mean of
/// the regular part is its value at the centre.
pub fn resolvent_form_with(
    potential: &PotentialSpec,
    lambda: f64,
    side: Side,
    v: &dyn Profile,
    reduced: bool,
    opts: &ResolventOptions,
) -> Result<ResolventBoundaryValue> {
    if !lambda.is_finite() {
        return Err(crate::error::invalid("lambda must be finite"));
    }
    potential.validate()?;
    let mus: Vec<f64> = potential.bound_states()?.into_iter().map(|b| b.mu).collect();
    let near = mus.iter().copied().find(|mu| (lambda - mu).abs() < opts.deflation_window);
    let value = match near {
        Some(mu) if !reduced => return Err(Error::ResolventPole { lambda, mu }),
        Some(mu) => {
            let gap = mus.iter().filter(|&&m| m != mu).map(|m| (m - mu).abs()).fold(f64::INFINITY, f64::min);
            let radius = 1e-2f64.min(0.25 * mu.abs()).min(0.25 * gap);
            let n = 8;
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let angle = std::f64::consts::PI * (2 * k + 1) as f64 / n as f64;
                let z = lambda + Complex64::from_polar(radius, angle);
                sum += resolvent::form(potential, z, None, v, opts)?;
            }
            sum / n as f64
        }
        None => resolvent::form(potential, Complex64::new(lambda, 0.0), Some(side), v, opts)?,
    };
    Ok(ResolventBoundaryValue { lambda, side, value, reduced })
}

/// `<v, (h - zeta)^{-1} v>` for `zeta` off the nonnegative real axis.
pub fn resolvent_form_at(potential: &PotentialSpec, zeta: Complex64, v: &dyn Profile, opts: &ResolventOptions) -> Result<Complex64> {
    resolvent::form(potential, zeta, None, v, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub nu: f64,
    pub value: Complex64,
    pub limit: Complex64,
    pub difference: f64,
}

/// `<v, (h_nu - zeta)^{-1} v>` against the point-interaction value for each `nu`.
pub fn resolvent_convergence_probe(nus: &[f64], zeta: Complex64, v: &dyn Profile, exec: Execution) -> Result<Vec<ProbeRow>> {
    let limit = resolvent_form_at(&PotentialSpec::DeltaLimit, zeta, v, &ResolventOptions::with_engine(ResolventEngine::DeltaKernel))?;
    exec.map(nus, |&nu| {
        let value = resolvent_form_at(&PotentialSpec::poschl_teller(nu)?, zeta, v, &ResolventOptions::default())?;
        Ok(ProbeRow { nu, value, limit, difference: (value - limit).norm() })
    })
    .into_iter()
    .collect()
}
