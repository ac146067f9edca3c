//! Five-point finite-difference Dirichlet eigensolver on the lattice of the
//! bounding box, restricted to nodes strictly inside the domain.

use super::shape::CrossSectionSpec;
use crate::error::{Error, Result};
use crate::grid::{Grid2d, GridFunction2d};
use crate::linalg::lanczos::{largest_eigenpairs, LanczosOptions};
use crate::linalg::BandedCholesky;

pub(crate) struct FdMode {
    pub energy: f64,
    pub values: GridFunction2d,
    pub residual: f64,
}

pub(crate) fn interior_nodes(spec: &CrossSectionSpec, grid: &Grid2d) -> Vec<Option<usize>> {
    let mut label = vec![None; grid.len()];
    let mut next = 0;
    for i in 1..grid.ny {
        for j in 1..grid.nz {
            let (y, z) = grid.point(i, j);
            if spec.contains(y, z) {
                label[grid.index(i, j)] = Some(next);
                next += 1;
            }
        }
    }
    label
}

pub(crate) fn solve(spec: &CrossSectionSpec, count: usize) -> Result<Vec<FdMode>> {
    let grid = spec.grid();
    let label = interior_nodes(spec, &grid);
    let nodes: Vec<(usize, usize)> = (0..=grid.ny)
        .flat_map(|i| (0..=grid.nz).map(move |j| (i, j)))
        .filter(|&(i, j)| label[grid.index(i, j)].is_some())
        .collect();
    let n = nodes.len();
    if n < 10 * count {
        return Err(Error::MeshTooCoarse { interior: n, count });
    }
    let (cy, cz) = (1.0 / (grid.hy * grid.hy), 1.0 / (grid.hz * grid.hz));
    let neighbor = |i: usize, j: usize| label[grid.index(i, j)];
    let bw = nodes
        .iter()
        .enumerate()
        .filter_map(|(r, &(i, j))| neighbor(i - 1, j).map(|c| r - c))
        .max()
        .unwrap_or(1)
        .max(1);
    let mut a = BandedCholesky::zeros(n, bw);
    for (r, &(i, j)) in nodes.iter().enumerate() {
        a.add(r, r, 2.0 * (cy + cz));
        if let Some(c) = neighbor(i - 1, j) {
            a.add(r, c, -cy);
        }
        if let Some(c) = neighbor(i, j - 1) {
            a.add(r, c, -cz);
        }
    }
    let chol = a.factor()?;
    let opts = LanczosOptions { tol: 1e-10, max_steps: (60 + 10 * count).min(n), max_runs: 2 * count + 4 };
    let pairs = largest_eigenpairs(n, count, |x| chol.solve(x), &opts)?;
    let h2 = grid.cell_area().sqrt();
    Ok(pairs
        .into_iter()
        .map(|p| {
            let mut values = GridFunction2d::zeros(grid);
            for (r, &(i, j)) in nodes.iter().enumerate() {
                values.values[grid.index(i, j)] = p.vector[r] / h2;
            }
            FdMode { energy: 1.0 / p.value, values, residual: p.residual }
        })
        .collect())
}
