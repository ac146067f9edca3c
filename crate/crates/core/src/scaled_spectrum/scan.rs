use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{default_start, locate_from};
use super::{assemble, ComplexEigenpair, ScaledOptions, ScaledProblem};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub epsilon: f64,
    #[serde(rename = "re_E")]
    pub re_e: f64,
    #[serde(rename = "im_E")]
    pub im_e: f64,
    pub residual: f64,
}

/// Fits of `Im E` against `epsilon^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanFit {
    /// `-sum eps^2 Im E / sum eps^4`.
    pub a_fit: f64,
    /// Standard error of `a_fit` from the fit residuals.
    pub std_error: f64,
    /// Intercept and slope of `-Im E / eps^2 = a + c |eps|`.
    pub a_linear: f64,
    pub cubic: f64,
    /// `|cubic| max |eps|`, the size of the next-order contamination of `a_fit`.
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub n: usize,
    pub j: usize,
    /// `E_n + mu_j`.
    pub unperturbed: f64,
    pub theta: f64,
    pub channels: usize,
    pub rows: Vec<ScanRow>,
    pub fit: ScanFit,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
    }
}

pub fn fit_slope(rows: &[ScanRow]) -> Result<ScanFit> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.epsilon != 0.0).map(|r| (r.epsilon.abs(), r.im_e)).collect();
    if pts.is_empty() {
        return Err(invalid("the fit needs at least one nonzero epsilon"));
    }
    let s4: f64 = pts.iter().map(|(e, _)| e.powi(4)).sum();
    let a_fit = -pts.iter().map(|(e, y)| e * e * y).sum::<f64>() / s4;
    let std_error = if pts.len() > 1 {
        let rss: f64 = pts.iter().map(|(e, y)| (y + a_fit * e * e).powi(2)).sum();
        (rss / (pts.len() - 1) as f64 / s4).sqrt()
    } else {
        0.0
    };
    // Straight line through -Im E / eps^2 against |eps|.
    let m = pts.len() as f64;
    let ys: Vec<f64> = pts.iter().map(|(e, y)| -y / (e * e)).collect();
    let mean_e = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_e).powi(2)).sum();
    let cubic = if sxx > 0.0 {
        pts.iter().zip(&ys).map(|(p, y)| (p.0 - mean_e) * (y - mean_y)).sum::<f64>() / sxx
    } else {
        0.0
    };
    let a_linear = mean_y - cubic * mean_e;
    let remainder = cubic.abs() * pts.iter().map(|p| p.0).fold(0.0, f64::max);
    Ok(ScanFit { a_fit, std_error, a_linear, cubic, remainder })
}

fn target_of(problem: &ScaledProblem, n: usize, j: usize) -> Result<(f64, crate::longitudinal::BoundState)> {
    let mode = problem.modes.mode(n)?;
    let state = problem
        .potential
        .bound_states()?
        .into_iter()
        .find(|b| b.j == j)
        .ok_or_else(|| invalid(format!("the potential has no bound state j = {j}")))?;
    Ok((mode.energy + state.mu, state))
}

/// Resonance `E(epsilon)` grown out of `E_n + mu_j`, tracked from `epsilon = 0`
/// through increasing `|epsilon|`; each solve starts from the previous
/// eigenvector and an `epsilon^2` extrapolation of the eigenvalue.
pub fn epsilon_scan(problem: &ScaledProblem, n: usize, j: usize, epsilons: &[f64], opts: &ScaledOptions) -> Result<ScanTable> {
    if epsilons.is_empty() {
        return Err(invalid("empty epsilon list"));
    }
    if epsilons.iter().any(|e| !e.is_finite()) {
        return Err(invalid("epsilon values must be finite"));
    }
    if n > opts.channels {
        return Err(invalid(format!("target mode n = {n} lies outside the K = {} channels", opts.channels)));
    }
    let (e0, state) = target_of(problem, n, j)?;
    let base = assemble(problem, 0.0, e0, opts)?;
    let mut start = base.embed(n, |x| state.value(x));
    start.iter_mut().zip(default_start(base.dim())).for_each(|(s, d)| *s += 1e-6 * d);
    let anchor = locate_from(&base, Complex64::new(e0, 0.0), opts.track_radius, Some(&start), opts)?;

    let mut order: Vec<usize> = (0..epsilons.len()).collect();
    order.sort_by(|&a, &b| epsilons[a].abs().total_cmp(&epsilons[b].abs()));
    let mut rows = vec![None; epsilons.len()];
    let (mut prev_eps, mut prev) = (0.0, anchor.clone());
    for i in order {
        let eps = epsilons[i];
        let pair = if eps == 0.0 {
            anchor.clone()
        } else {
            let predicted = if prev_eps == 0.0 {
                prev.value
            } else {
                anchor.value + (prev.value - anchor.value) * (eps / prev_eps).powi(2)
            };
            let system = assemble(problem, eps, e0, opts)?;
            let pair: ComplexEigenpair = match locate_from(&system, predicted, opts.track_radius, Some(&prev.vector), opts) {
                Ok(p) => p,
                Err(Error::NoEigenvalue { .. }) => return Err(Error::ResonanceLost { epsilon: eps }),
                Err(e) => return Err(e),
            };
            prev_eps = eps;
            prev = pair.clone();
            pair
        };
        rows[i] = Some(ScanRow { epsilon: eps, re_e: pair.value.re, im_e: pair.value.im, residual: pair.residual });
    }
    let rows: Vec<ScanRow> = rows.into_iter().map(|r| r.expect("every row solved")).collect();
    let fit = if rows.iter().any(|r| r.epsilon != 0.0) {
        fit_slope(&rows)?
    } else {
        ScanFit { a_fit: 0.0, std_error: 0.0, a_linear: 0.0, cubic: 0.0, remainder: 0.0 }
    };
    Ok(ScanTable { n, j, unperturbed: e0, theta: opts.theta, channels: opts.channels, rows, fit })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    #[serde(rename = "re_E")]
    pub re_e: f64,
    #[serde(rename = "im_E")]
    pub im_e: f64,
    pub residual: f64,
}

/// The resonance at fixed `epsilon` for several `Im theta`, each solved independently.
pub fn theta_sweep(
    problem: &ScaledProblem,
    n: usize,
    j: usize,
    epsilon: f64,
    thetas: &[f64],
    opts: &ScaledOptions,
) -> Result<Vec<SweepRow>> {
    let inner = ScaledOptions { exec: Execution::Sequential, ..*opts };
    opts.exec
        .map(thetas, |&theta| {
            let o = ScaledOptions { theta, ..inner };
            let scan = epsilon_scan(problem, n, j, &[epsilon], &o)?;
            let r = scan.rows[0];
            Ok(SweepRow { theta, re_e: r.re_e, im_e: r.im_e, residual: r.residual })
        })
        .into_iter()
        .collect()
}

/// Epsilon scans for several channel counts `K`.
pub fn channel_sweep(
    problem: &ScaledProblem,
    n: usize,
    j: usize,
    epsilons: &[f64],
    counts: &[usize],
    opts: &ScaledOptions,
) -> Result<Vec<ScanTable>> {
    let inner = ScaledOptions { exec: Execution::Sequential, ..*opts };
    opts.exec
        .map(counts, |&channels| epsilon_scan(problem, n, j, epsilons, &ScaledOptions { channels, ..inner }))
        .into_iter()
        .collect()
}
