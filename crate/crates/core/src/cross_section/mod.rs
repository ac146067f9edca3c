//! Dirichlet modes of the cross-section, the angular derivative
//! `d_tau = y d_z - z d_y` and the coupling matrices built from them.

mod bessel;
mod closed_form;
mod coupling;
mod numeric;
mod shape;
mod surface;

pub use bessel::{bessel_j, bessel_zeros};
pub use closed_form::{Angular, ClosedForm};
pub use coupling::{coupling_matrices, coupling_matrices_with, CouplingMatrices};
pub use shape::{CrossSectionSpec, Shape, MIN_GRID_N};
pub use surface::twisted_surface_points;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::GridFunction2d;

/// Relative gap below which consecutive eigenvalues count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeMethod {
    /// Closed form for rectangles and disks, finite differences otherwise.
    #[default]
    Auto,
    ClosedForm,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeProfile {
    ClosedForm(ClosedForm),
    Grid(GridFunction2d),
}

/// Marks how the sign of an eigenfunction was fixed: the last lattice sample
/// (lexicographic in `(i, j)`) exceeding `1e-6` of the maximum is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConvention {
    pub anchor: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransverseMode {
    /// 1-based position in the nondecreasing ordering.
    pub index: usize,
    pub energy: f64,
    pub profile: ModeProfile,
    pub sign: SignConvention,
    /// Eigensolver residual (zero for closed forms).
    pub residual: f64,
}

impl TransverseMode {
    /// Samples on the lattice of `spec`; closed forms are evaluated pointwise.
    pub fn sample(&self, spec: &CrossSectionSpec) -> GridFunction2d {
        match &self.profile {
            ModeProfile::Grid(g) => g.clone(),
            ModeProfile::ClosedForm(c) => sample_closed(spec, |y, z| c.value(y, z)),
        }
    }
}

fn sample_closed(spec: &CrossSectionSpec, f: impl Fn(f64, f64) -> f64) -> GridFunction2d {
    let grid = spec.grid();
    let mut out = GridFunction2d::zeros(grid);
    for i in 0..=grid.ny {
        for j in 0..=grid.nz {
            let (y, z) = grid.point(i, j);
            if spec.contains(y, z) {
                out.values[grid.index(i, j)] = f(y, z);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransverseModeSet {
    pub spec: CrossSectionSpec,
    pub method: ModeMethod,
    pub modes: Vec<TransverseMode>,
    /// `degenerate[i]` is set when mode `i + 1` shares its eigenvalue with a neighbour.
    pub degenerate: Vec<bool>,
}

impl TransverseModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.energy).collect()
    }

    /// Mode by its 1-based index.
    pub fn mode(&self, n: usize) -> Result<&TransverseMode> {
        n.checked_sub(1)
            .and_then(|i| self.modes.get(i))
            .ok_or_else(|| invalid(format!("mode {n} not available ({} computed)", self.modes.len())))
    }

    pub fn is_simple(&self, n: usize) -> bool {
        n >= 1 && n <= self.degenerate.len() && !self.degenerate[n - 1]
    }

    /// `d_tau chi_n` on the lattice, with coordinates measured from the axis offset.
    pub fn angular_derivative(&self, n: usize) -> Result<GridFunction2d> {
        let [oy, oz] = self.spec.axis_offset;
        Ok(match &self.mode(n)?.profile {
            ModeProfile::ClosedForm(c) => sample_closed(&self.spec, |y, z| {
                let (gy, gz) = c.gradient(y, z);
                (y - oy) * gz - (z - oz) * gy
            }),
            ModeProfile::Grid(g) => coupling::discrete_angular(g, [oy, oz]),
        })
    }
}

/// Lowest `count` Dirichlet modes, closed form where available.
pub fn solve_transverse_modes(spec: &CrossSectionSpec, count: usize) -> Result<TransverseModeSet> {
    solve_transverse_modes_with(spec, count, ModeMethod::Auto)
}

pub fn solve_transverse_modes_with(spec: &CrossSectionSpec, count: usize, method: ModeMethod) -> Result<TransverseModeSet> {
    spec.validate()?;
    if count == 0 {
        return Err(invalid("at least one mode must be requested"));
    }
    let closed_available = matches!(spec.shape, Shape::Rectangle { .. } | Shape::Disk { .. });
    let method = match method {
        ModeMethod::Auto if closed_available => ModeMethod::ClosedForm,
        ModeMethod::Auto => ModeMethod::FiniteDifference,
        ModeMethod::ClosedForm if !closed_available => {
            return Err(invalid("no closed form for polygonal cross-sections"));
        }
        m => m,
    };
    let mut modes: Vec<TransverseMode> = match method {
        ModeMethod::ClosedForm => {
            let forms = match spec.shape {
                Shape::Rectangle { a, b } => closed_form::rectangle_modes(a, b, count),
                Shape::Disk { radius } => closed_form::disk_modes(radius, count),
                Shape::Polygon { .. } => unreachable!(),
            };
            forms
                .into_iter()
                .enumerate()
                .map(|(i, mut c)| {
                    let (anchor, positive) = sign_anchor(&sample_closed(spec, |y, z| c.value(y, z)));
                    if !positive {
                        c.flip();
                    }
                    TransverseMode {
                        index: i + 1,
                        energy: c.energy(),
                        profile: ModeProfile::ClosedForm(c),
                        sign: SignConvention { anchor },
                        residual: 0.0,
                    }
                })
                .collect()
        }
        _ => numeric::solve(spec, count)?
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                let mut values = m.values;
                let (anchor, positive) = sign_anchor(&values);
                if !positive {
                    values.values.iter_mut().for_each(|v| *v = -*v);
                }
                TransverseMode {
                    index: i + 1,
                    energy: m.energy,
                    profile: ModeProfile::Grid(values),
                    sign: SignConvention { anchor },
                    residual: m.residual,
                }
            })
            .collect(),
    };
    debug_assert!(modes.iter().all(|m| m.energy.is_finite()));
    modes.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (i, m) in modes.iter_mut().enumerate() {
        m.index = i + 1;
    }
    let degenerate = degeneracy_flags(&modes.iter().map(|m| m.energy).collect::<Vec<_>>());
    Ok(TransverseModeSet { spec: spec.clone(), method, modes, degenerate })
}

fn degeneracy_flags(e: &[f64]) -> Vec<bool> {
    let tol = DEGENERACY_GAP * e[0].abs();
    (0..e.len())
        .map(|i| (i > 0 && e[i] - e[i - 1] < tol) || (i + 1 < e.len() && e[i + 1] - e[i] < tol))
        .collect()
}

/// Returns the anchor node and whether the sample there is already positive.
fn sign_anchor(f: &GridFunction2d) -> ((usize, usize), bool) {
    let cutoff = 1e-6 * f.max_abs();
    let g = f.grid;
    for i in (0..=g.ny).rev() {
        for j in (0..=g.nz).rev() {
            let v = f.at(i, j);
            if v.abs() > cutoff {
                return ((i, j), v > 0.0);
            }
        }
    }
    ((0, 0), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_flags_degenerate_pair() {
        let spec = CrossSectionSpec::rectangle(PI, PI, 32).unwrap();
        let set = solve_transverse_modes(&spec, 4).unwrap();
        assert_eq!(set.degenerate, vec![false, true, true, false]);
    }

    #[test]
    fn closed_form_sign_anchor_positive() {
        let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 32).unwrap();
        let set = solve_transverse_modes(&spec, 3).unwrap();
        for m in &set.modes {
            let s = m.sample(&spec);
            assert!(s.at(m.sign.anchor.0, m.sign.anchor.1) > 0.0);
        }
    }
}
