//! Twist profiles, the unperturbed spectrum and the golden-rule width.

mod classify;
mod coefficient;
mod twist;
mod vector;

pub use classify::{classify_spectrum, threshold_index, Classification, EmbeddedEigenvalue};
pub use coefficient::{limit_width_delta, width_coefficient, Channel, ClosedChannel, WidthOptions, WidthResult};
pub use twist::TwistProfile;
pub use vector::{coupling_vector, CouplingVector};

use serde::Serialize;

use crate::cross_section::{CouplingMatrices, TransverseModeSet};
use crate::error::{invalid, Result};
use crate::longitudinal::{PotentialSpec, ResolventEngine, ResolventOptions};

/// Width of the eigenvalue `E_n + mu_j` of `potential`, classified from scratch.
pub fn width_for_target(
    modes: &TransverseModeSet,
    coupling: &CouplingMatrices,
    potential: &PotentialSpec,
    twist: &TwistProfile,
    n: usize,
    j: usize,
    opts: &WidthOptions,
) -> Result<WidthResult> {
    let states = potential.bound_states()?;
    let state = states
        .iter()
        .find(|b| b.j == j)
        .ok_or_else(|| invalid(format!("the potential has no bound state j = {j} ({} available)", states.len())))?;
    modes.mode(n)?;
    let class = classify_spectrum(modes, &states);
    let target = class.find(n, j).copied().ok_or_else(|| invalid(format!("no eigenvalue for (n, j) = ({n}, {j})")))?;
    width_coefficient(&target, modes, coupling, state, twist, potential, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuRow {
    pub nu: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub a: f64,
    /// Same channels with the point interaction.
    pub limit: f64,
    pub distance: f64,
}

/// `a(nu)` for Poschl-Teller wells against the point-interaction value.
pub fn width_vs_nu(
    nus: &[f64],
    modes: &TransverseModeSet,
    coupling: &CouplingMatrices,
    twist: &TwistProfile,
    n: usize,
    j: usize,
    opts: &WidthOptions,
) -> Result<Vec<NuRow>> {
    if nus.is_empty() {
        return Err(invalid("empty nu list"));
    }
    let kernel = WidthOptions { resolvent: ResolventOptions { engine: ResolventEngine::DeltaKernel, ..opts.resolvent }, ..*opts };
    let limit = width_for_target(modes, coupling, &PotentialSpec::DeltaLimit, twist, n, j, &kernel)?.a;
    // The sweep parallelizes over nu; each width runs its channels sequentially.
    let inner = WidthOptions { exec: crate::exec::Execution::Sequential, ..*opts };
    opts.exec
        .map(nus, |&nu| {
            let w = width_for_target(modes, coupling, &PotentialSpec::poschl_teller(nu)?, twist, n, j, &inner)?;
            Ok(NuRow { nu, energy: w.energy, a: w.a, limit, distance: (w.a - limit).abs() })
        })
        .into_iter()
        .collect()
}
