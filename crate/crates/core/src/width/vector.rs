use super::TwistProfile;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::longitudinal::{BoundState, Profile};

/// `v_j = -(alpha' d_x + d_x alpha') phi_j = -2 alpha' phi_j' - alpha'' phi_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingVector {
    pub twist: TwistProfile,
    pub state: BoundState,
}

impl CouplingVector {
    pub fn to_grid(&self, x: Vec<f64>) -> Result<GridFunction> {
        GridFunction::from_fn(x, |t| self.eval(t))
    }
}

impl Profile for CouplingVector {
    fn eval(&self, x: f64) -> f64 {
        -2.0 * self.twist.rate(x) * self.state.derivative(x) - self.twist.accel(x) * self.state.value(x)
    }

    fn decay_length(&self) -> f64 {
        1.0 / self.state.decay_rate()
    }

    fn support(&self) -> Option<f64> {
        match self.twist {
            TwistProfile::Compact { x } => Some(2.0 * x),
            _ => None,
        }
    }

    fn feature_scale(&self) -> f64 {
        self.state.feature_scale().min(self.twist.feature_scale())
    }
}

pub fn coupling_vector(twist: &TwistProfile, state: &BoundState) -> Result<CouplingVector> {
    twist.validate()?;
    if let Some((lo, hi)) = twist.sampled_range() {
        // The table must cover the region where phi_j is not negligible.
        let peak = (0..=200).map(|i| state.value(lo + (hi - lo) * i as f64 / 200.0).abs()).fold(0.0, f64::max);
        if state.value(lo).abs().max(state.value(hi).abs()) > 1e-6 * peak.max(1e-300) {
            return Err(Error::GridMismatch);
        }
    }
    Ok(CouplingVector { twist: twist.clone(), state: state.clone() })
}
