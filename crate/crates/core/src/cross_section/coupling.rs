use nalgebra::DMatrix;

use super::{closed_form::ClosedForm, ModeProfile, Shape, TransverseModeSet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::GridFunction2d;
use crate::linalg::GaussLegendre;

/// `t1[(n, k)] = <chi_n, d_tau chi_k>` and `t2[(n, k)] = <chi_n, d_tau^2 chi_k>`,
/// zero-based. `t1` is stored antisymmetrized; `asymmetry` is the largest
/// `|T1[n][k] + T1[k][n]|` before that step.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrices {
    pub t1: DMatrix<f64>,
    pub t2: DMatrix<f64>,
    pub asymmetry: f64,
}

impl CouplingMatrices {
    pub fn size(&self) -> usize {
        self.t1.nrows()
    }

    /// `T1[n][k]` with 1-based indices.
    pub fn t1_at(&self, n: usize, k: usize) -> f64 {
        self.t1[(n - 1, k - 1)]
    }

    pub fn t2_at(&self, n: usize, k: usize) -> f64 {
        self.t2[(n - 1, k - 1)]
    }

    pub fn t1_rows(&self) -> Vec<Vec<f64>> {
        self.t1.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn t2_rows(&self) -> Vec<Vec<f64>> {
        self.t2.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    /// `|T2[n][n] + sum_k T1[k][n]^2|`, the truncation defect of the
    /// completeness identity for column `n` (1-based).
    pub fn completeness_defect(&self, n: usize) -> f64 {
        let s: f64 = (0..self.size()).map(|k| self.t1[(k, n - 1)].powi(2)).sum();
        (self.t2[(n - 1, n - 1)] + s).abs()
    }
}

pub fn coupling_matrices(modes: &TransverseModeSet) -> Result<CouplingMatrices> {
    coupling_matrices_with(modes, Execution::default())
}

pub fn coupling_matrices_with(modes: &TransverseModeSet, exec: Execution) -> Result<CouplingMatrices> {
    let k = modes.len();
    let [oy, oz] = modes.spec.axis_offset;
    // Per mode: values and angular derivatives at the quadrature nodes.
    let (weights, columns): (Vec<f64>, Vec<(Vec<f64>, Vec<f64>)>) = match &modes.modes[0].profile {
        ModeProfile::ClosedForm(_) => {
            let forms: Vec<&ClosedForm> = modes
                .modes
                .iter()
                .map(|m| match &m.profile {
                    ModeProfile::ClosedForm(c) => Ok(c),
                    ModeProfile::Grid(_) => Err(Error::GridMismatch),
                })
                .collect::<Result<_>>()?;
            let rule = closed_rule(&modes.spec.shape, &forms);
            let cols = exec.map(&forms, |c| {
                rule.iter()
                    .map(|&(y, z, _)| {
                        let (gy, gz) = c.gradient(y, z);
                        (c.value(y, z), (y - oy) * gz - (z - oz) * gy)
                    })
                    .unzip()
            });
            (rule.iter().map(|p| p.2).collect(), cols)
        }
        ModeProfile::Grid(first) => {
            let grids: Vec<&GridFunction2d> = modes
                .modes
                .iter()
                .map(|m| match &m.profile {
                    ModeProfile::Grid(g) if g.grid == first.grid => Ok(g),
                    _ => Err(Error::GridMismatch),
                })
                .collect::<Result<_>>()?;
            let cols = exec.map(&grids, |g| (g.values.clone(), discrete_angular(g, [oy, oz]).values));
            (vec![first.grid.cell_area(); first.grid.len()], cols)
        }
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { weights.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum() };
    let entries = exec.map_range(k * k, |idx| {
        let (n, m) = (idx / k, idx % k);
        (dot(&columns[n].0, &columns[m].1), -dot(&columns[n].1, &columns[m].1))
    });
    let raw = DMatrix::from_fn(k, k, |n, m| entries[n * k + m].0);
    let t2 = DMatrix::from_fn(k, k, |n, m| entries[n * k + m].1);
    let asymmetry = (0..k)
        .flat_map(|n| (0..k).map(move |m| (n, m)))
        .map(|(n, m)| (raw[(n, m)] + raw[(m, n)]).abs())
        .fold(0.0, f64::max);
    let t1 = (&raw - raw.transpose()) * 0.5;
    Ok(CouplingMatrices { t1, t2, asymmetry })
}

/// Central-difference `d_tau` on the full lattice, zero outside it. The
/// operator is exactly skew-adjoint for the lattice inner product.
pub(crate) fn discrete_angular(f: &GridFunction2d, offset: [f64; 2]) -> GridFunction2d {
    let g = f.grid;
    let mut out = GridFunction2d::zeros(g);
    let at = |i: isize, j: isize| {
        if i < 0 || j < 0 || i > g.ny as isize || j > g.nz as isize {
            0.0
        } else {
            f.at(i as usize, j as usize)
        }
    };
    for i in 0..=g.ny {
        for j in 0..=g.nz {
            let (y, z) = g.point(i, j);
            let (ii, jj) = (i as isize, j as isize);
            let dz = (at(ii, jj + 1) - at(ii, jj - 1)) / (2.0 * g.hz);
            let dy = (at(ii + 1, jj) - at(ii - 1, jj)) / (2.0 * g.hy);
            out.values[g.index(i, j)] = (y - offset[0]) * dz - (z - offset[1]) * dy;
        }
    }
    out
}

/// Tensor Gauss-Legendre on the rectangle; Gauss-Legendre in `r` times the
/// periodic trapezoid in angle on the disk.
fn closed_rule(shape: &Shape, forms: &[&ClosedForm]) -> Vec<(f64, f64, f64)> {
    let gl = GaussLegendre::new(64);
    let composite = |a: f64, b: f64, panels: usize| -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        (0..panels).flat_map(|p| gl.on(a + p as f64 * h, a + (p + 1) as f64 * h).collect::<Vec<_>>()).collect()
    };
    match *shape {
        Shape::Rectangle { a, b } => {
            let (pmax, qmax) = forms.iter().fold((1, 1), |(pm, qm), c| match c {
                ClosedForm::Rectangle { p, q, .. } => (pm.max(*p), qm.max(*q)),
                _ => (pm, qm),
            });
            let ys = composite(0.0, a, 1 + pmax / 16);
            let zs = composite(0.0, b, 1 + qmax / 16);
            ys.iter().flat_map(|&(y, wy)| zs.iter().map(move |&(z, wz)| (y, z, wy * wz))).collect()
        }
        Shape::Disk { radius } => {
            let (mmax, kmax) = forms.iter().fold((0usize, 0.0f64), |(mm, km), c| match c {
                ClosedForm::Disk { m, k, .. } => (mm.max(*m), km.max(*k)),
                _ => (mm, km),
            });
            let rs = composite(0.0, radius, 1 + (kmax * radius / 16.0) as usize);
            let nt = 4 * mmax + 64;
            let ht = std::f64::consts::TAU / nt as f64;
            rs.iter()
                .flat_map(|&(r, wr)| {
                    (0..nt).map(move |t| {
                        let th = t as f64 * ht;
                        (r * th.cos(), r * th.sin(), wr * r * ht)
                    })
                })
                .collect()
        }
        Shape::Polygon { .. } => unreachable!("polygons have no closed form"),
    }
}
