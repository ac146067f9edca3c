use std::ops::Range;

use num_complex::Complex64;

use super::{ScaledOptions, ScaledProblem};
use crate::error::{invalid, Result};
use crate::linalg::banded::ComplexBanded;
use crate::linalg::ComplexBandedLu;
use crate::longitudinal::mesh::{graded_nodes, scaled_contour};
use crate::longitudinal::PotentialSpec;

/// Largest exterior ray; beyond this the open channel is too close to its threshold.
const MAX_EXTERIOR: f64 = 2000.0;

/// The complex-scaled operator truncated to `K` channels on a P1 mesh of the
/// exterior-scaled contour, in the standard form `W^{-1/2} A W^{-1/2}` with
/// the lumped mass `W`. Unknowns are node-major: `(node, channel)` maps to
/// `node * K + channel`.
#[derive(Debug, Clone)]
pub struct ChannelSystem {
    pub epsilon: f64,
    /// `Im theta`.
    pub theta: f64,
    pub channels: usize,
    /// `E_1..E_K`.
    pub thresholds: Vec<f64>,
    /// Interior unknown nodes on the contour; Dirichlet ends excluded.
    pub nodes: Vec<Complex64>,
    /// Index range of the real (unscaled) nodes in `nodes`.
    pub real_range: Range<usize>,
    weights: Vec<Complex64>,
    matrix: ComplexBanded,
}

impl ChannelSystem {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn index(&self, node: usize, channel: usize) -> usize {
        node * self.channels + channel
    }

    /// Entry between `(node p, channel a)` and `(node q, channel b)`, channels 0-based.
    pub fn entry(&self, p: usize, a: usize, q: usize, b: usize) -> Complex64 {
        self.matrix.get(self.index(p, a), self.index(q, b))
    }

    /// Largest `|H_ij - H_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let bw = 2 * self.channels - 1;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..(i + bw + 1).min(n) {
                worst = worst.max((self.matrix.get(i, j) - self.matrix.get(j, i)).norm());
            }
        }
        worst
    }

    /// Largest entry coupling different channels.
    pub fn coupling_norm(&self) -> f64 {
        let k = self.channels;
        let bw = 2 * k - 1;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i.saturating_sub(bw)..(i + bw + 1).min(n) {
                if i % k != j % k {
                    worst = worst.max(self.matrix.get(i, j).norm());
                }
            }
        }
        worst
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(x)
    }

    pub(crate) fn factor_shifted(&self, shift: Complex64) -> Result<ComplexBandedLu> {
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            m.add(i, i, -shift);
        }
        m.factor()
    }

    /// `||(H - lambda) v|| / ||v||`.
    pub fn residual(&self, lambda: Complex64, v: &[Complex64]) -> f64 {
        let hv = self.apply(v);
        let r: f64 = hv.iter().zip(v).map(|(h, x)| (h - lambda * x).norm_sqr()).sum();
        let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        (r / nv).sqrt()
    }

    /// Channel `k` (1-based) of a standard-form vector as nodal values
    /// `u(z_i)`, undoing the mass scaling.
    pub fn channel_values(&self, v: &[Complex64], k: usize) -> Vec<Complex64> {
        (0..self.nodes.len()).map(|i| v[self.index(i, k - 1)] / self.weights[i].sqrt()).collect()
    }

    /// Standard-form vector with `f` sampled on the real nodes of channel `k` (1-based).
    pub fn embed(&self, k: usize, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for i in self.real_range.clone() {
            v[self.index(i, k - 1)] = self.weights[i].sqrt() * f(self.nodes[i].re);
        }
        v
    }
}

/// `V(z)` continued off the real axis. Only the Poschl-Teller well is
/// evaluated at complex points; the other kinds vanish on the scaled rays.
fn potential_at(potential: &PotentialSpec, z: Complex64) -> Complex64 {
    match potential {
        PotentialSpec::PoschlTeller { nu } if z.im != 0.0 => {
            // sech^2 w = 4 e^{-2w} / (1 + e^{-2w})^2 with Re w >= 0.
            let w = if z.re < 0.0 { -z * nu } else { z * nu };
            let q = (-2.0 * w).exp();
            -0.5 * nu * 4.0 * q / ((1.0 + q) * (1.0 + q))
        }
        _ if z.im != 0.0 => Complex64::new(0.0, 0.0),
        _ => Complex64::new(potential.eval(z.re), 0.0),
    }
}

pub(crate) struct Layout {
    pub radius: f64,
    pub h_far: f64,
    pub h_center: f64,
    pub width: f64,
    pub exterior: f64,
    pub h_exterior: f64,
}

pub(crate) fn layout(problem: &ScaledProblem, energy: f64, opts: &ScaledOptions) -> Result<Layout> {
    let thresholds = &problem.modes.energies()[..opts.channels];
    let open: Vec<f64> = thresholds.iter().filter(|&&e| e < energy).map(|&e| (energy - e).sqrt()).collect();
    let k_max = open.iter().copied().fold(0.0, f64::max);
    let k_min = open.iter().copied().fold(f64::INFINITY, f64::min);
    let h_far = if k_max > 0.0 { opts.h_max.min(0.1 / k_max) } else { opts.h_max };
    let feature = problem
        .potential
        .feature_scale()
        .unwrap_or(f64::INFINITY)
        .min(problem.twist.feature_scale())
        .min(1.0);
    let h_center = h_far.min(feature / 20.0);
    let natural = problem.twist.transition_radius().max(problem.potential.radius()).max(1.0) + 1.0;
    let radius = opts.scaling_radius.unwrap_or(natural);
    if radius < problem.twist.transition_radius() || radius < problem.potential.radius() {
        return Err(invalid(format!(
            "scaling radius {radius} must enclose the twist transition and the potential (need {natural})"
        )));
    }
    let width = 10.0 * feature.min(radius / 10.0);
    let sin = opts.theta.sin();
    let exterior = match opts.exterior_length {
        Some(l) => l,
        None if opts.theta == 0.0 => 0.0,
        None if k_min.is_finite() => (23.0 / (k_min * sin)).max(20.0),
        None => 20.0,
    };
    if exterior > MAX_EXTERIOR {
        return Err(invalid(format!(
            "exterior ray of length {exterior:.0} needed at Im theta = {}; the energy is too close to a threshold",
            opts.theta
        )));
    }
    let scale = 0.5f64.powi(opts.level as i32);
    Ok(Layout { radius, h_far, h_center, width, exterior, h_exterior: h_far * scale })
}

/// Assemble the scaled operator for twist strength `epsilon`; the mesh
/// resolves the open channels at `energy`.
pub fn assemble(problem: &ScaledProblem, epsilon: f64, energy: f64, opts: &ScaledOptions) -> Result<ChannelSystem> {
    opts.validate()?;
    problem.potential.validate()?;
    problem.twist.validate()?;
    let k = opts.channels;
    if k > problem.modes.len() || k > problem.coupling.size() {
        return Err(invalid(format!(
            "K = {k} channels requested but only {} modes are available",
            problem.modes.len().min(problem.coupling.size())
        )));
    }
    let lay = layout(problem, energy, opts)?;
    let real = graded_nodes(lay.radius, lay.h_far, lay.h_center, lay.width, opts.level);
    let (contour, real_range) = if lay.exterior > 0.0 {
        scaled_contour(&real, opts.theta, lay.exterior, lay.h_exterior)
    } else {
        let z: Vec<Complex64> = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let n = z.len();
        (z, 0..n)
    };
    let m = contour.len();
    if m < 4 {
        return Err(invalid("mesh has too few nodes"));
    }
    // Unknown node i sits at contour[i + 1].
    let nodes: Vec<Complex64> = contour[1..m - 1].to_vec();
    let real_range = real_range.start.saturating_sub(1)..(real_range.end - 1).min(nodes.len());
    let nn = nodes.len();
    let steps: Vec<Complex64> = contour.windows(2).map(|w| w[1] - w[0]).collect();
    let weights: Vec<Complex64> = (0..nn).map(|i| 0.5 * (steps[i] + steps[i + 1])).collect();

    let thresholds = problem.modes.energies()[..k].to_vec();
    let t1 = &problem.coupling.t1;
    let t2 = &problem.coupling.t2;
    let twist = problem.twist;
    // Twist rate along the contour: held constant on the rays.
    let rate = |z: Complex64| -> f64 {
        if z.im == 0.0 {
            twist.rate(z.re)
        } else if z.re < 0.0 {
            twist.rate(-lay.radius)
        } else {
            twist.rate(lay.radius)
        }
    };

    let bw = 2 * k - 1;
    let mut a = ComplexBanded::zeros(nn * k, bw, bw);
    let zero_index = nodes.iter().position(|z| *z == Complex64::new(0.0, 0.0));
    for i in 0..nn {
        let w = weights[i];
        let z = nodes[i];
        let v = potential_at(problem.potential, z);
        let r2 = rate(z).powi(2);
        for ca in 0..k {
            let row = i * k + ca;
            a.add(row, row, w * (thresholds[ca] + v));
            for cb in 0..k {
                let s = 0.5 * (t2[(ca, cb)] + t2[(cb, ca)]);
                if s != 0.0 && epsilon != 0.0 {
                    a.add(row, i * k + cb, -w * epsilon * epsilon * r2 * s);
                }
            }
        }
    }
    if let Some(i0) = zero_index {
        let g = problem.potential.point_strength();
        for ca in 0..k {
            a.add(i0 * k + ca, i0 * k + ca, Complex64::new(-g, 0.0));
        }
    }
    // Element e joins contour nodes e and e + 1, i.e. unknowns e - 1 and e.
    for (e, &h) in steps.iter().enumerate() {
        let p = e.checked_sub(1);
        let q = if e < nn { Some(e) } else { None };
        let stiff = 1.0 / h;
        for ca in 0..k {
            if let Some(p) = p {
                a.add(p * k + ca, p * k + ca, stiff);
            }
            if let Some(q) = q {
                a.add(q * k + ca, q * k + ca, stiff);
            }
            if let (Some(p), Some(q)) = (p, q) {
                a.add(p * k + ca, q * k + ca, -stiff);
                a.add(q * k + ca, p * k + ca, -stiff);
            }
        }
        // First-order twist term: the bilinear form of alpha' d_x + d_x alpha'
        // is exactly antisymmetric on P1 elements, +-mean(alpha') between
        // neighbouring nodes.
        if epsilon == 0.0 {
            continue;
        }
        let mid = 0.5 * (contour[e] + contour[e + 1]);
        let alpha_e = rate(mid);
        if alpha_e == 0.0 {
            continue;
        }
        if let (Some(p), Some(q)) = (p, q) {
            for ca in 0..k {
                for cb in 0..k {
                    let c = epsilon * t1[(ca, cb)] * alpha_e;
                    if c != 0.0 {
                        a.add(p * k + ca, q * k + cb, Complex64::new(c, 0.0));
                        a.add(q * k + ca, p * k + cb, Complex64::new(-c, 0.0));
                    }
                }
            }
        }
    }
    // Symmetric scaling to the standard form.
    let inv_sqrt: Vec<Complex64> = weights.iter().map(|w| 1.0 / w.sqrt()).collect();
    let mut h = ComplexBanded::zeros(nn * k, bw, bw);
    for row in 0..nn * k {
        for col in row.saturating_sub(bw)..(row + bw + 1).min(nn * k) {
            let v = a.get(row, col);
            if v != Complex64::new(0.0, 0.0) {
                h.add(row, col, v * (inv_sqrt[row / k] * inv_sqrt[col / k]));
            }
        }
    }
    Ok(ChannelSystem { epsilon, theta: opts.theta, channels: k, thresholds, nodes, real_range, weights, matrix: h })
}
