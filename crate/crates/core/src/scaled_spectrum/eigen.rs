use num_complex::Complex64;
use serde::Serialize;

use super::{ChannelSystem, ScaledOptions};
use crate::error::{Error, Result};
use crate::linalg::arnoldi::ritz_values;
use crate::linalg::ComplexBandedLu;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexEigenpair {
    pub value: Complex64,
    /// Standard-form vector, unit Euclidean norm, node-major.
    #[serde(skip)]
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// Fixed pseudo-random start so that repeated runs are bit-identical.
pub(crate) fn default_start(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let t = i as f64;
            Complex64::new((0.618_034 * t).sin() + 0.5, (0.414_214 * t).cos() * 0.25)
        })
        .collect()
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let big = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if big.norm() > 0.0 { big.conj() / big.norm() } else { Complex64::new(1.0, 0.0) };
    v.iter_mut().for_each(|x| *x *= phase / n);
}

fn factor_near(system: &ChannelSystem, shift: Complex64, scale: f64) -> Result<ComplexBandedLu> {
    match system.factor_shifted(shift) {
        Err(Error::Singular(_)) => system.factor_shifted(shift + Complex64::new(scale * 1e-7, scale * 1e-7)),
        r => r,
    }
}

/// Ritz values of the shift-invert operator around `center`, nearest first.
pub fn spectrum_window(system: &ChannelSystem, center: Complex64, count: usize, opts: &ScaledOptions) -> Result<Vec<Complex64>> {
    let lu = factor_near(system, center, 1.0)?;
    let steps = opts.arnoldi_steps.max(2 * count);
    let ritz = ritz_values(|x| lu.solve(x), &default_start(system.dim()), steps);
    let mut values: Vec<Complex64> = ritz.iter().filter(|r| r.norm() > 0.0).map(|r| center + 1.0 / r).collect();
    values.sort_by(|a, b| (a - center).norm().total_cmp(&(b - center).norm()));
    values.truncate(count);
    Ok(values)
}

/// The eigenpair inside the disk of `radius` around `target`.
pub fn locate_resonance(system: &ChannelSystem, target: Complex64, radius: f64, opts: &ScaledOptions) -> Result<ComplexEigenpair> {
    locate_from(system, target, radius, None, opts)
}

pub(crate) fn locate_from(
    system: &ChannelSystem,
    target: Complex64,
    radius: f64,
    start: Option<&[Complex64]>,
    opts: &ScaledOptions,
) -> Result<ComplexEigenpair> {
    let fallback;
    let start = match start {
        Some(s) => s,
        None => {
            fallback = default_start(system.dim());
            &fallback
        }
    };
    let lu = factor_near(system, target, radius)?;
    let ritz = ritz_values(|x| lu.solve(x), start, opts.arnoldi_steps);
    let guess = ritz
        .iter()
        .filter(|r| r.norm() > 0.0)
        .map(|r| target + 1.0 / r)
        .filter(|l| (l - target).norm() <= radius)
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .ok_or(Error::NoEigenvalue { target, radius })?;

    // Inverse iteration at the Ritz value, then Rayleigh quotient iteration
    // with the bilinear quotient that suits complex-symmetric matrices.
    let lu = factor_near(system, guess, radius)?;
    let mut v = start.to_vec();
    for _ in 0..3 {
        v = lu.solve(&v);
        normalize(&mut v);
    }
    let mut best: Option<ComplexEigenpair> = None;
    for _ in 0..30 {
        let hv = system.apply(&v);
        let vv: Complex64 = v.iter().map(|x| x * x).sum();
        let rho = if vv.norm() > 1e-8 {
            v.iter().zip(&hv).map(|(x, y)| x * y).sum::<Complex64>() / vv
        } else {
            v.iter().zip(&hv).map(|(x, y)| x.conj() * y).sum::<Complex64>()
        };
        let residual = system.residual(rho, &v);
        if best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(ComplexEigenpair { value: rho, vector: v.clone(), residual });
        }
        if residual <= opts.tolerance {
            break;
        }
        v = factor_near(system, rho, radius)?.solve(&v);
        normalize(&mut v);
    }
    let pair = best.expect("at least one iteration");
    if (pair.value - target).norm() > radius {
        return Err(Error::NoEigenvalue { target, radius });
    }
    if pair.residual > opts.tolerance {
        return Err(Error::NoConvergence(format!(
            "residual {:.3e} at E = {} exceeds {:.1e}",
            pair.residual, pair.value, opts.tolerance
        )));
    }
    Ok(pair)
}
