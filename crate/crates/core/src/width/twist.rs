use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::GridFunction;

/// Twist angle profile `alpha`; the tube is rotated by `epsilon * alpha(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwistProfile {
    /// `alpha(x) = x`.
    Linear,
    /// `alpha' = 1` on `[-X, X]`, `0` outside `[-2X, 2X]`, joined by a quintic smoothstep.
    Compact { x: f64 },
    /// Tabulated `alpha'` and `alpha''`, held at their end values outside the table.
    Sampled { rate: GridFunction, accel: GridFunction },
}

fn smoothstep(u: f64) -> (f64, f64) {
    let u2 = u * u;
    (u2 * u * (10.0 - 15.0 * u + 6.0 * u2), 30.0 * u2 * (1.0 - u) * (1.0 - u))
}

impl TwistProfile {
    pub fn compact(x: f64) -> Result<Self> {
        let t = TwistProfile::Compact { x };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TwistProfile::Compact { x } if !(*x > 0.0 && x.is_finite()) => Err(invalid("compact twist needs X > 0")),
            TwistProfile::Sampled { rate, .. } if rate.values().iter().any(|&r| r < 0.0) => {
                Err(invalid("the twist rate must be nonnegative"))
            }
            _ => Ok(()),
        }
    }

    /// `alpha'(x)`.
    pub fn rate(&self, x: f64) -> f64 {
        match self {
            TwistProfile::Linear => 1.0,
            TwistProfile::Compact { x: big } => {
                let r = x.abs();
                if r <= *big {
                    1.0
                } else if r >= 2.0 * big {
                    0.0
                } else {
                    1.0 - smoothstep((r - big) / big).0
                }
            }
            TwistProfile::Sampled { rate, .. } => held(rate, x),
        }
    }

    /// `alpha''(x)`.
    pub fn accel(&self, x: f64) -> f64 {
        match self {
            TwistProfile::Linear => 0.0,
            TwistProfile::Compact { x: big } => {
                let r = x.abs();
                if r <= *big || r >= 2.0 * big {
                    0.0
                } else {
                    -x.signum() * smoothstep((r - big) / big).1 / big
                }
            }
            TwistProfile::Sampled { accel, .. } => {
                let (lo, hi) = accel.range();
                if x < lo || x > hi {
                    0.0
                } else {
                    accel.eval(x)
                }
            }
        }
    }

    /// `alpha(x)` with `alpha(0) = 0`.
    pub fn alpha(&self, x: f64) -> f64 {
        match self {
            TwistProfile::Linear => x,
            TwistProfile::Compact { x: big } => {
                let r = x.abs();
                let a = if r <= *big {
                    r
                } else {
                    let u = ((r - big) / big).min(1.0);
                    big + big * (u - u.powi(6) + 3.0 * u.powi(5) - 2.5 * u.powi(4))
                };
                x.signum() * a
            }
            TwistProfile::Sampled { rate, .. } => {
                // Trapezoid integral of the held rate from 0 to x.
                let n = 2000;
                let h = x / n as f64;
                (0..n).map(|i| 0.5 * h * (held(rate, i as f64 * h) + held(rate, (i + 1) as f64 * h))).sum()
            }
        }
    }

    /// Radius beyond which `alpha'` is constant.
    pub fn transition_radius(&self) -> f64 {
        match self {
            TwistProfile::Linear => 0.0,
            TwistProfile::Compact { x } => 2.0 * x,
            TwistProfile::Sampled { rate, .. } => {
                let (lo, hi) = rate.range();
                lo.abs().max(hi.abs())
            }
        }
    }

    /// Smallest length on which `alpha'` varies.
    pub fn feature_scale(&self) -> f64 {
        match self {
            TwistProfile::Linear => f64::INFINITY,
            TwistProfile::Compact { x } => 0.1 * x,
            TwistProfile::Sampled { rate, .. } => {
                rate.x().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) * 4.0
            }
        }
    }

    /// Table range for sampled profiles.
    pub fn sampled_range(&self) -> Option<(f64, f64)> {
        match self {
            TwistProfile::Sampled { rate, .. } => Some(rate.range()),
            _ => None,
        }
    }
}

fn held(g: &GridFunction, x: f64) -> f64 {
    let (lo, hi) = g.range();
    g.eval(x.clamp(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_profile_is_c2_and_consistent() {
        let t = TwistProfile::compact(3.0).unwrap();
        let h = 1e-6;
        for x in [-5.5, -4.1, -3.0 - 1e-9, 0.0, 3.5, 4.5, 5.99] {
            let d_alpha = (t.alpha(x + h) - t.alpha(x - h)) / (2.0 * h);
            assert!((d_alpha - t.rate(x)).abs() < 1e-8, "x = {x}");
            let d_rate = (t.rate(x + h) - t.rate(x - h)) / (2.0 * h);
            assert!((d_rate - t.accel(x)).abs() < 1e-6, "x = {x}");
        }
        assert_eq!(t.rate(6.0), 0.0);
        assert_eq!(t.rate(-3.0), 1.0);
        assert!((t.alpha(10.0) - 4.5).abs() < 1e-12);
        // alpha'' is continuous at both joints.
        for x in [3.0, 6.0] {
            assert!(t.accel(x + 1e-9).abs() < 1e-6 && t.accel(x - 1e-9).abs() < 1e-6);
        }
    }
}
