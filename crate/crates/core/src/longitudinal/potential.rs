use serde::{Deserialize, Serialize};

use super::poschl_teller::{self, PtEigenfunction};
use crate::error::{invalid, Result};
use crate::grid::GridFunction;
use crate::linalg::tridiag::SymTridiagonal;

/// Magnitude below which a Poschl-Teller tail is treated as zero.
const TAIL_CUTOFF: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Free,
    PoschlTeller { nu: f64 },
    /// Attractive point interaction `-delta(x)`, the `nu -> infinity` limit.
    DeltaLimit,
    /// Samples with a radius beyond which the potential is taken to vanish.
    Sampled { samples: GridFunction, decay_radius: f64 },
}

impl PotentialSpec {
    pub fn poschl_teller(nu: f64) -> Result<Self> {
        let p = PotentialSpec::PoschlTeller { nu };
        p.validate()?;
        Ok(p)
    }

    pub fn sampled(samples: GridFunction, decay_radius: f64) -> Result<Self> {
        let p = PotentialSpec::Sampled { samples, decay_radius };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::PoschlTeller { nu } if !(*nu > 0.0 && nu.is_finite()) => {
                Err(invalid(format!("Poschl-Teller nu must be positive, got {nu}")))
            }
            PotentialSpec::Sampled { decay_radius, .. } if !(*decay_radius > 0.0 && decay_radius.is_finite()) => {
                Err(invalid("sampled potential needs a positive decay radius"))
            }
            _ => Ok(()),
        }
    }

    /// Regular part of the potential (zero for the point interaction).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Free | PotentialSpec::DeltaLimit => 0.0,
            PotentialSpec::PoschlTeller { nu } => {
                let c = (nu * x).cosh();
                -nu / (2.0 * c * c)
            }
            PotentialSpec::Sampled { samples, decay_radius } => {
                if x.abs() > *decay_radius {
                    0.0
                } else {
                    samples.eval(x)
                }
            }
        }
    }

    /// Strength of the point interaction at the origin (`V += -g delta`).
    pub fn point_strength(&self) -> f64 {
        match self {
            PotentialSpec::DeltaLimit => 1.0,
            _ => 0.0,
        }
    }

    /// Radius outside which the potential is negligible.
    pub fn radius(&self) -> f64 {
        match self {
            PotentialSpec::Free | PotentialSpec::DeltaLimit => 0.0,
            PotentialSpec::PoschlTeller { nu } => (nu / (2.0 * TAIL_CUTOFF)).sqrt().acosh() / nu,
            PotentialSpec::Sampled { samples, decay_radius } => {
                let (lo, hi) = samples.range();
                decay_radius.min(lo.abs().max(hi.abs()))
            }
        }
    }

    /// Length scale a grid has to resolve near the well.
    pub fn feature_scale(&self) -> Option<f64> {
        match self {
            PotentialSpec::Free | PotentialSpec::DeltaLimit => None,
            PotentialSpec::PoschlTeller { nu } => Some(1.0 / nu),
            PotentialSpec::Sampled { samples, .. } => {
                Some(samples.x().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) * 4.0)
            }
        }
    }

    pub fn bound_states(&self) -> Result<Vec<BoundState>> {
        self.validate()?;
        Ok(match self {
            PotentialSpec::Free => Vec::new(),
            PotentialSpec::PoschlTeller { nu } => poschl_teller_spectrum(*nu),
            PotentialSpec::DeltaLimit => vec![delta_limit_bound_state()],
            PotentialSpec::Sampled { .. } => sampled_bound_states(self)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundProfile {
    PoschlTeller(PtEigenfunction),
    /// `sqrt(1/2) exp(-|x|/2)`.
    Delta,
    Grid(GridFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub j: usize,
    pub mu: f64,
    /// Decay exponent in units of `nu` (Poschl-Teller only).
    pub e: Option<f64>,
    pub profile: BoundProfile,
}

impl BoundState {
    pub fn value(&self, x: f64) -> f64 {
        match &self.profile {
            BoundProfile::PoschlTeller(f) => f.value(x),
            BoundProfile::Delta => std::f64::consts::FRAC_1_SQRT_2 * (-0.5 * x.abs()).exp(),
            BoundProfile::Grid(g) => g.eval(x),
        }
    }

    /// `phi'(x)`; at the kink of the point-interaction state the mean of the
    /// one-sided limits (zero) is returned.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.profile {
            BoundProfile::PoschlTeller(f) => f.derivative(x),
            BoundProfile::Delta => {
                if x == 0.0 {
                    0.0
                } else {
                    -0.5 * x.signum() * self.value(x)
                }
            }
            BoundProfile::Grid(g) => grid_slope(g, x),
        }
    }

    /// `sqrt(-mu)`, the exponential decay rate of the tail.
    pub fn decay_rate(&self) -> f64 {
        (-self.mu).sqrt()
    }

    /// Smallest length on which the state varies.
    pub fn feature_scale(&self) -> f64 {
        let decay = 1.0 / self.decay_rate();
        match &self.profile {
            BoundProfile::PoschlTeller(f) => decay.min(1.0 / f.nu),
            BoundProfile::Delta => decay,
            BoundProfile::Grid(g) => g.x().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) * 4.0,
        }
    }

    /// Kinks of `phi'` that a quadrature should place a node on.
    pub fn kinks(&self) -> Vec<f64> {
        match self.profile {
            BoundProfile::Delta => vec![0.0],
            _ => Vec::new(),
        }
    }
}

fn grid_slope(g: &GridFunction, x: f64) -> f64 {
    let xs = g.x();
    let (lo, hi) = g.range();
    if !(x > lo && x < hi) {
        return 0.0;
    }
    let i = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
    (g.values()[i] - g.values()[i - 1]) / (xs[i] - xs[i - 1])
}

pub fn poschl_teller_spectrum(nu: f64) -> Vec<BoundState> {
    poschl_teller::energies(nu)
        .into_iter()
        .enumerate()
        .map(|(i, mu)| {
            let f = PtEigenfunction::new(nu, i + 1);
            BoundState { j: i + 1, mu, e: Some(f.e), profile: BoundProfile::PoschlTeller(f) }
        })
        .collect()
}

pub fn delta_limit_bound_state() -> BoundState {
    BoundState { j: 1, mu: -0.25, e: None, profile: BoundProfile::Delta }
}

/// Negative eigenvalues of the three-point discretization of `-d^2/dx^2 + V`
/// on `[-half_width, half_width]` with Dirichlet ends and spacing `<= h`.
pub fn discrete_bound_energies(potential: &PotentialSpec, half_width: f64, h: f64) -> Vec<f64> {
    let (t, _) = discretize(potential, half_width, h);
    let count = t.count_below(0.0);
    (0..count).map(|k| t.eigenvalue(k, 1e-13)).collect()
}

fn discretize(potential: &PotentialSpec, half_width: f64, h: f64) -> (SymTridiagonal, Vec<f64>) {
    // Even interval count so that x = 0 is a node.
    let n = 2 * (half_width / h).ceil() as usize;
    let h = 2.0 * half_width / n as f64;
    let x: Vec<f64> = (1..n).map(|i| -half_width + i as f64 * h).collect();
    let mut diag: Vec<f64> = x.iter().map(|&xi| 2.0 / (h * h) + potential.eval(xi)).collect();
    let g = potential.point_strength();
    if g != 0.0 {
        diag[n / 2 - 1] -= g / h;
    }
    let off = vec![-1.0 / (h * h); x.len() - 1];
    (SymTridiagonal::new(diag, off), x)
}

fn sampled_bound_states(potential: &PotentialSpec) -> Result<Vec<BoundState>> {
    let r = potential.radius();
    let h = potential.feature_scale().unwrap_or(0.01).min(0.01) / 4.0;
    // A state bound at depth mu extends ~ 1/sqrt(-mu); the box grows until
    // every reported level is insensitive to it.
    let half = r + 60.0;
    let (t, x) = discretize(potential, half, h);
    let count = t.count_below(-1e-6);
    let hx = x[1] - x[0];
    (0..count)
        .map(|k| {
            let mu = t.eigenvalue(k, 1e-13);
            let mut v = t.eigenvector(mu);
            let norm = (v.iter().map(|a| a * a).sum::<f64>() * hx).sqrt();
            let sign = if v[v.len() / 2..].iter().rev().find(|a| a.abs() > 1e-8).copied().unwrap_or(1.0) < 0.0 {
                -1.0
            } else {
                1.0
            };
            v.iter_mut().for_each(|a| *a *= sign / norm);
            let mut xs = vec![-half];
            xs.extend_from_slice(&x);
            xs.push(half);
            let mut vs = vec![0.0];
            vs.extend(v);
            vs.push(0.0);
            Ok(BoundState { j: k + 1, mu, e: None, profile: BoundProfile::Grid(GridFunction::new(xs, vs)?) })
        })
        .collect()
}

/// Numeric verdicts on `int (1 + x^2)|V| < inf` and `int V <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub moment: f64,
    pub integral: f64,
    pub moment_finite: bool,
    pub sign_ok: bool,
    /// Closed-form `(moment, integral)` where known.
    pub exact: Option<(f64, f64)>,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.moment_finite && self.sign_ok
    }
}

pub fn validate_assumption_a(potential: &PotentialSpec) -> AssumptionReport {
    let (moment, integral, exact, tail_ok) = match potential {
        PotentialSpec::Free => (0.0, 0.0, Some((0.0, 0.0)), true),
        PotentialSpec::DeltaLimit => (1.0, -1.0, Some((1.0, -1.0)), true),
        PotentialSpec::PoschlTeller { nu } => {
            let r = potential.radius();
            let gl = crate::linalg::GaussLegendre::new(64);
            let panels = 1 + (r * nu) as usize;
            let m = gl.integrate_composite(-r, r, panels, |x| (1.0 + x * x) * potential.eval(x).abs());
            let i = gl.integrate_composite(-r, r, panels, |x| potential.eval(x));
            let pi2 = std::f64::consts::PI.powi(2);
            (m, i, Some((1.0 + pi2 / (12.0 * nu * nu), -1.0)), true)
        }
        PotentialSpec::Sampled { samples, decay_radius } => {
            let inside = |x: f64| x.abs() <= *decay_radius;
            let m = samples.integrate(|x, v| if inside(x) { (1.0 + x * x) * v.abs() } else { 0.0 });
            let i = samples.integrate(|x, v| if inside(x) { v } else { 0.0 });
            let peak = samples.max_abs();
            let edge = potential.eval(-*decay_radius).abs().max(potential.eval(*decay_radius).abs());
            (m, i, None, edge <= 1e-6 * peak.max(1e-300) || peak == 0.0)
        }
    };
    AssumptionReport {
        moment,
        integral,
        moment_finite: moment.is_finite() && tail_ok,
        sign_ok: integral <= 1e-12,
        exact,
    }
}
