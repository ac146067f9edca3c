use serde::Serialize;

use super::classify::{threshold_index, EmbeddedEigenvalue};
use super::vector::coupling_vector;
use super::TwistProfile;
use crate::cross_section::{CouplingMatrices, TransverseModeSet};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::linalg::GaussLegendre;
use crate::longitudinal::{resolvent_form_with, BoundState, PotentialSpec, ResolventOptions, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthOptions {
    pub resolvent: ResolventOptions,
    pub exec: Execution,
    /// Minimum distance of `E` from every threshold `E_k`.
    pub threshold_guard: f64,
}

impl Default for WidthOptions {
    fn default() -> Self {
        Self { resolvent: ResolventOptions::default(), exec: Execution::default(), threshold_guard: 1e-4 }
    }
}

/// One open decay channel `k <= k*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub k: usize,
    pub coupling_sq: f64,
    pub im_resolvent: f64,
    pub contribution: f64,
}

/// A closed channel `E_k > E`: no imaginary part, real part for reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedChannel {
    pub k: usize,
    pub coupling_sq: f64,
    pub re_resolvent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthResult {
    #[serde(rename = "E")]
    pub energy: f64,
    pub n: usize,
    pub j: usize,
    pub k_star: usize,
    /// `-Im E(epsilon) / epsilon^2` as `epsilon -> 0`.
    pub a: f64,
    /// `<phi_j, alpha'^2 phi_j> T2[n][n]`.
    #[serde(rename = "C0")]
    pub c0: f64,
    pub channels: Vec<Channel>,
    pub closed_channels: Vec<ClosedChannel>,
}

/// The golden-rule coefficient `a = sum_{k <= k*} T1[k][n]^2 Im<v_j, r(E - E_k + i0) v_j>`.
pub fn width_coefficient(
    target: &EmbeddedEigenvalue,
    modes: &TransverseModeSet,
    coupling: &CouplingMatrices,
    state: &BoundState,
    twist: &TwistProfile,
    potential: &PotentialSpec,
    opts: &WidthOptions,
) -> Result<WidthResult> {
    if !target.simple {
        return Err(Error::Degenerate { n: target.n, energy: target.energy });
    }
    let thresholds = modes.energies();
    if !target.embedded || target.energy < thresholds[0] {
        return Err(Error::NotEmbedded { energy: target.energy, threshold: thresholds[0] });
    }
    let count = coupling.size().min(thresholds.len());
    if target.n > count {
        return Err(invalid(format!("mode {} lies beyond the truncation K = {count}", target.n)));
    }
    let k_star = threshold_index(target.energy, &thresholds[..count]);
    if k_star == count {
        return Err(invalid(format!(
            "all {count} thresholds lie below E = {}; increase the number of modes",
            target.energy
        )));
    }
    for (k, &ek) in thresholds[..count].iter().enumerate() {
        let gap = (target.energy - ek).abs();
        if gap < opts.threshold_guard {
            return Err(Error::ThresholdCollision { k: k + 1, energy: target.energy, gap });
        }
    }
    let v = coupling_vector(twist, state)?;
    let n = target.n;
    let channel = |k: usize| -> Result<(usize, f64, f64)> {
        let coupling_sq = coupling.t1_at(k, n).powi(2);
        let lambda = target.energy - thresholds[k - 1];
        let open = k <= k_star;
        let form = resolvent_form_with(potential, lambda, Side::Plus, &v, !open, &opts.resolvent)?;
        Ok((k, coupling_sq, if open { form.value.im } else { form.value.re }))
    };
    let rows = opts.exec.map_range(count, |i| channel(i + 1)).into_iter().collect::<Result<Vec<_>>>()?;
    let mut channels = Vec::new();
    let mut closed_channels = Vec::new();
    for (k, coupling_sq, value) in rows {
        if k <= k_star {
            channels.push(Channel { k, coupling_sq, im_resolvent: value, contribution: coupling_sq * value });
        } else {
            closed_channels.push(ClosedChannel { k, coupling_sq, re_resolvent: value });
        }
    }
    let a = channels.iter().map(|c| c.contribution).sum();
    let c0 = rate_moment(twist, state) * coupling.t2_at(n, n);
    Ok(WidthResult { energy: target.energy, n, j: target.j, k_star, a, c0, channels, closed_channels })
}

/// `<phi, alpha'^2 phi>`.
fn rate_moment(twist: &TwistProfile, state: &BoundState) -> f64 {
    let gl = GaussLegendre::new(32);
    let r = 40.0 / state.decay_rate();
    let feature = state.feature_scale().min(twist.feature_scale()).min(r);
    let panels = ((r / feature) as usize).clamp(8, 200_000);
    // Panels are laid out symmetrically so that x = 0 is a panel edge.
    gl.integrate_composite(0.0, r, panels, |x| twist.rate(x).powi(2) * state.value(x).powi(2))
        + gl.integrate_composite(-r, 0.0, panels, |x| twist.rate(x).powi(2) * state.value(x).powi(2))
}

/// `|C_1|^2 sqrt(E_2 - E_1 - 1/4) / (E_2 - E_1)^2`, the point-interaction limit
/// of `a` for `E = E_2 - 1/4` and the linear twist.
pub fn limit_width_delta(e1: f64, e2: f64, c1: f64) -> Result<f64> {
    let gap = e2 - e1;
    if !(gap > 0.25) {
        return Err(invalid(format!("E_2 - E_1 = {gap} must exceed 1/4")));
    }
    Ok(c1 * c1 * (gap - 0.25).sqrt() / (gap * gap))
}
