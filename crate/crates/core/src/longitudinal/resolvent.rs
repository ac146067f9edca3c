//! Boundary values `<v, (h - lambda -+ i0)^{-1} v>` of the 1D resolvent.

use num_complex::Complex64;

use super::delta::delta_resolvent_kernel;
use super::mesh::{graded_nodes, scaled_contour};
use super::profile::{extent, Profile};
use super::{PotentialSpec, ResolventEngine, ResolventOptions, Side};
use crate::error::{invalid, Error, Result};
use crate::linalg::banded::ComplexBanded;

/// Geometry shared by the engines for one evaluation.
struct Layout {
    radius: f64,
    h_far: f64,
    h_center: f64,
    width: f64,
}

fn layout(potential: &PotentialSpec, zeta: Complex64, v: &dyn Profile, opts: &ResolventOptions) -> Result<Layout> {
    let decay = v.decay_length();
    if v.support().is_none() && !(decay > 0.0 && decay.is_finite()) {
        return Err(Error::NonDecaying { at: f64::INFINITY, tail: f64::NAN });
    }
    let radius = extent(v, opts.radius_factor).max(potential.radius()).max(1.0);
    let peak = (0..=400).map(|i| v.eval(radius * (i as f64 / 200.0 - 1.0)).abs()).fold(0.0, f64::max);
    for at in [-radius, radius] {
        let tail = v.eval(at).abs();
        if tail > 1e-6 * peak {
            return Err(Error::NonDecaying { at, tail });
        }
    }
    let h_far = opts.h_max.min(0.1 / zeta.norm().sqrt().max(1e-300));
    let feature = potential.feature_scale().unwrap_or(f64::INFINITY).min(v.feature_scale());
    let h_center = h_far.min(feature / 20.0);
    Ok(Layout { radius, h_far, h_center, width: 10.0 * feature.min(radius / 10.0) })
}

/// One-sided nodal loads `sum_e (l_e / 2) v(x_i from inside e)`.
fn loads(nodes: &[f64], v: &dyn Profile) -> Vec<f64> {
    let n = nodes.len();
    let mut b = vec![0.0; n];
    for e in 0..n - 1 {
        let (a, c) = (nodes[e], nodes[e + 1]);
        let l = c - a;
        let eps = 1e-9 * l;
        b[e] += 0.5 * l * v.eval(a + eps);
        b[e + 1] += 0.5 * l * v.eval(c - eps);
    }
    b
}

/// Exterior-complex-scaling engine at mesh `level`.
fn ecs_level(potential: &PotentialSpec, zeta: Complex64, theta: f64, v: &dyn Profile, lay: &Layout, opts: &ResolventOptions, level: u32) -> Result<Complex64> {
    let nodes = graded_nodes(lay.radius, lay.h_far, lay.h_center, lay.width, level);
    let k = zeta.norm().sqrt().max(1e-12);
    let length = opts.exterior_length.max(25.0 / (k * theta.abs().sin()));
    let h_ext = lay.h_far.max(length / 20_000.0) / (1u32 << level) as f64;
    let (z, real) = scaled_contour(&nodes, theta, length, h_ext);
    let load = loads(&nodes, v);
    let m = z.len();
    // Unknowns are the interior contour nodes 1..m-1.
    let n = m - 2;
    let mut a = ComplexBanded::zeros(n, 1, 1);
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for e in 0..m - 1 {
        let l = z[e + 1] - z[e];
        let stiff = 1.0 / l;
        let mass = l * 0.5;
        for (p, node) in [(0usize, e), (1, e + 1)] {
            if node == 0 || node == m - 1 {
                continue;
            }
            let r = node - 1;
            a.add(r, r, stiff - zeta * mass);
            let other = if p == 0 { e + 1 } else { e };
            if other != 0 && other != m - 1 {
                a.add(r, other - 1, -stiff);
            }
        }
    }
    let zero = real.start + nodes.len() / 2;
    for (i, &x) in nodes.iter().enumerate() {
        let node = real.start + i;
        let r = node - 1;
        let mass = 0.5 * (z[node + 1] - z[node - 1]);
        a.add(r, r, mass * potential.eval(x));
        b[r] = Complex64::new(load[i], 0.0);
    }
    let g = potential.point_strength();
    if g != 0.0 {
        a.add(zero - 1, zero - 1, Complex64::new(-g, 0.0));
    }
    let lu = a.factor()?;
    let u = lu.solve(&b);
    Ok(b.iter().zip(&u).map(|(bi, ui)| bi * ui).sum())
}

/// Real box with the exact discrete outgoing condition at both ends.
fn dtn_level(potential: &PotentialSpec, zeta: Complex64, v: &dyn Profile, lay: &Layout, level: u32) -> Result<Complex64> {
    let nodes = graded_nodes(lay.radius, lay.h_far, lay.h_center, lay.width, level);
    let n = nodes.len();
    let load = loads(&nodes, v);
    let mut a = ComplexBanded::zeros(n, 1, 1);
    for e in 0..n - 1 {
        let l = nodes[e + 1] - nodes[e];
        let (stiff, mass) = (1.0 / l, 0.5 * l);
        for (r, c) in [(e, e + 1), (e + 1, e)] {
            a.add(r, r, Complex64::new(stiff, 0.0) - zeta * mass);
            a.add(r, c, Complex64::new(-stiff, 0.0));
        }
    }
    for (i, &x) in nodes.iter().enumerate() {
        let mass = 0.5 * (nodes[(i + 1).min(n - 1)] - nodes[i.saturating_sub(1)]);
        a.add(i, i, Complex64::new(mass * potential.eval(x), 0.0));
    }
    let g = potential.point_strength();
    if g != 0.0 {
        a.add(n / 2, n / 2, Complex64::new(-g, 0.0));
    }
    for (end, l) in [(0, nodes[1] - nodes[0]), (n - 1, nodes[n - 1] - nodes[n - 2])] {
        // u_{j+1} = q u_j on the continued lattice, q + 1/q = 2 - zeta l^2, |q| < 1.
        let c = 2.0 - zeta * l * l;
        let disc = (c * c - 4.0).sqrt();
        let (q1, q2) = ((c + disc) * 0.5, (c - disc) * 0.5);
        let q = if q1.norm() < q2.norm() { q1 } else { q2 };
        a.add(end, end, (1.0 - q) / l - zeta * (0.5 * l));
    }
    let b: Vec<Complex64> = load.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let u = a.factor()?.solve(&b);
    Ok(b.iter().zip(&u).map(|(bi, ui)| bi * ui).sum())
}

fn richardson(opts: &ResolventOptions, f: impl Fn(u32) -> Result<Complex64>) -> Result<Complex64> {
    let coarse = f(0)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    let fine = f(1)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// `<v, (h - zeta)^{-1} v>`; for real `zeta` the side selects the boundary value.
pub(crate) fn form(potential: &PotentialSpec, zeta: Complex64, side: Option<Side>, v: &dyn Profile, opts: &ResolventOptions) -> Result<Complex64> {
    let upper = match side {
        Some(Side::Plus) => true,
        Some(Side::Minus) => false,
        None if zeta.im != 0.0 => zeta.im > 0.0,
        None if zeta.re < 0.0 => true,
        None => return Err(Error::BranchCut(zeta)),
    };
    let lay = layout(potential, zeta, v, opts)?;
    match opts.engine {
        ResolventEngine::ExteriorScaling => {
            let theta = if upper { opts.theta } else { -opts.theta };
            richardson(opts, |lvl| ecs_level(potential, zeta, theta, v, &lay, opts, lvl))
        }
        ResolventEngine::Extrapolated => {
            if zeta.im != 0.0 {
                return richardson(opts, |lvl| dtn_level(potential, zeta, v, &lay, lvl));
            }
            let sign = if upper { 1.0 } else { -1.0 };
            let rhos = opts.rhos;
            let vals = rhos
                .iter()
                .map(|&rho| {
                    let z = Complex64::new(zeta.re, sign * rho);
                    richardson(opts, |lvl| dtn_level(potential, z, v, &lay, lvl))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(lagrange_at_zero(&rhos, &vals))
        }
        ResolventEngine::DeltaKernel => {
            if *potential != PotentialSpec::DeltaLimit {
                return Err(invalid("the kernel engine only applies to the point interaction"));
            }
            let kernel = delta_resolvent_kernel(zeta, side.or(Some(if upper { Side::Plus } else { Side::Minus })))?;
            let (k0, k1) = kernel.forms(&|x| v.eval(x), lay.radius, opts.kernel_h);
            // (h - zeta)^{-1} = -(zeta - h)^{-1}.
            Ok(-(k0 + k1))
        }
    }
}

fn lagrange_at_zero(x: &[f64; 3], y: &[Complex64]) -> Complex64 {
    (0..3)
        .map(|i| {
            let w: f64 = (0..3).filter(|&j| j != i).map(|j| x[j] / (x[j] - x[i])).product();
            y[i] * w
        })
        .sum()
}
