//! Sampled real functions on the line and on rectangular 2D grids.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Samples of a real function at strictly increasing abscissae. Evaluation
/// interpolates linearly and returns zero outside the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    x: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(invalid("abscissae and values differ in length"));
        }
        if x.len() < 2 {
            return Err(invalid("a grid function needs at least two samples"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("abscissae must be strictly increasing"));
        }
        if x.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite sample"));
        }
        Ok(Self { x, values })
    }

    pub fn from_fn(x: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = x.iter().map(|&t| f(t)).collect();
        Self::new(x, values)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return 0.0;
        }
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            p if p >= self.x.len() => self.x.len() - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let s = (t - x0) / (x1 - x0);
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }

    /// Centered finite-difference derivative at the sample points.
    pub fn derivative(&self) -> GridFunction {
        let n = self.x.len();
        let d = (0..n)
            .map(|i| {
                let (a, b) = match i {
                    0 => (0, 1),
                    i if i == n - 1 => (n - 2, n - 1),
                    i => (i - 1, i + 1),
                };
                (self.values[b] - self.values[a]) / (self.x[b] - self.x[a])
            })
            .collect();
        GridFunction { x: self.x.clone(), values: d }
    }

    /// Trapezoid integral of `f(x, value)` over the samples.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.x
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (f(x[0], v[0]) + f(x[1], v[1])))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Parse two-column CSV (`x,<name>` header) with strictly increasing x.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
        let mut x = Vec::new();
        let mut v = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("row {}: expected 2 columns, got {}", line + 1, rec.len())));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)));
            x.push(parse(&rec[0])?);
            v.push(parse(&rec[1])?);
        }
        Self::new(x, v)
    }

    pub fn to_csv(&self, value_name: &str) -> String {
        let mut out = format!("x,{value_name}\n");
        for (x, v) in self.x.iter().zip(&self.values) {
            out.push_str(&format!("{x:.17e},{v:.17e}\n"));
        }
        out
    }
}

/// Uniform node lattice `(y0 + i*hy, z0 + j*hz)`, `0 <= i <= ny`, `0 <= j <= nz`.
/// Values are stored row-major in `i`, which is also the lexicographic order
/// used for sign conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2d {
    pub y0: f64,
    pub z0: f64,
    pub hy: f64,
    pub hz: f64,
    pub ny: usize,
    pub nz: usize,
}

impl Grid2d {
    pub fn len(&self) -> usize {
        (self.ny + 1) * (self.nz + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.nz + 1) + j
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.y0 + i as f64 * self.hy, self.z0 + j as f64 * self.hz)
    }

    pub fn cell_area(&self) -> f64 {
        self.hy * self.hz
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2d {
    pub grid: Grid2d,
    pub values: Vec<f64>,
}

impl GridFunction2d {
    pub fn zeros(grid: Grid2d) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Grid inner product; boundary samples are zero for Dirichlet data so the
    /// tensor trapezoid rule reduces to a plain weighted sum.
    pub fn inner(&self, other: &GridFunction2d) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * self.grid.cell_area())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_increasing() {
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(GridFunction::from_csv("x,V\n1,0\n0.5,1\n").is_err());
    }

    #[test]
    fn interpolates_and_vanishes_outside() {
        let g = GridFunction::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(2.5), 0.0);
        assert_eq!(g.eval(-1.0), 0.0);
        assert!((g.integrate(|_, v| v) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let g = GridFunction::from_fn(vec![-1.0, 0.0, 0.25, 3.0], |x| (-x * x).exp()).unwrap();
        let back = GridFunction::from_csv(&g.to_csv("V")).unwrap();
        assert_eq!(g, back);
    }
}
