use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::Grid2d;

pub const MIN_GRID_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    /// `[0, a] x [0, b]`; the default rotation axis passes through the corner.
    Rectangle { a: f64, b: f64 },
    /// Disk of radius `radius` centred at the origin.
    Disk { radius: f64 },
    /// Simple polygon given by its vertices in order.
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Cross-section of the waveguide together with the resolution of the
/// finite-difference path and the point where the twist axis meets the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSpec {
    pub shape: Shape,
    pub grid_n: usize,
    #[serde(default)]
    pub axis_offset: [f64; 2],
}

impl CrossSectionSpec {
    pub fn new(shape: Shape, grid_n: usize) -> Result<Self> {
        let spec = Self { shape, grid_n, axis_offset: [0.0, 0.0] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rectangle(a: f64, b: f64, grid_n: usize) -> Result<Self> {
        Self::new(Shape::Rectangle { a, b }, grid_n)
    }

    pub fn disk(radius: f64, grid_n: usize) -> Result<Self> {
        Self::new(Shape::Disk { radius }, grid_n)
    }

    pub fn polygon(vertices: Vec<[f64; 2]>, grid_n: usize) -> Result<Self> {
        Self::new(Shape::Polygon { vertices }, grid_n)
    }

    pub fn with_axis_offset(mut self, offset: [f64; 2]) -> Result<Self> {
        if offset.iter().any(|v| !v.is_finite()) {
            return Err(invalid("axis offset must be finite"));
        }
        self.axis_offset = offset;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_n < MIN_GRID_N {
            return Err(invalid(format!("grid_n = {} is below the minimum {MIN_GRID_N}", self.grid_n)));
        }
        match &self.shape {
            Shape::Rectangle { a, b } => {
                if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(invalid("rectangle sides must be positive"));
                }
            }
            Shape::Disk { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("disk radius must be positive"));
                }
            }
            Shape::Polygon { vertices } => validate_polygon(vertices)?,
        }
        Ok(())
    }

    /// Bounding box `(ymin, ymax, zmin, zmax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match &self.shape {
            Shape::Rectangle { a, b } => (0.0, *a, 0.0, *b),
            Shape::Disk { radius } => (-radius, *radius, -radius, *radius),
            Shape::Polygon { vertices } => vertices.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
                |(y0, y1, z0, z1), v| (y0.min(v[0]), y1.max(v[0]), z0.min(v[1]), z1.max(v[1])),
            ),
        }
    }

    /// Strict interior test.
    pub fn contains(&self, y: f64, z: f64) -> bool {
        match &self.shape {
            Shape::Rectangle { a, b } => y > 0.0 && y < *a && z > 0.0 && z < *b,
            Shape::Disk { radius } => y * y + z * z < radius * radius * (1.0 - 1e-12),
            Shape::Polygon { vertices } => point_in_polygon(vertices, y, z) && !on_boundary(vertices, y, z),
        }
    }

    /// The finite-difference lattice: `grid_n` intervals per axis over the bounding box.
    pub fn grid(&self) -> Grid2d {
        let (y0, y1, z0, z1) = self.bounding_box();
        Grid2d {
            y0,
            z0,
            hy: (y1 - y0) / self.grid_n as f64,
            hz: (z1 - z0) / self.grid_n as f64,
            ny: self.grid_n,
            nz: self.grid_n,
        }
    }

    /// `samples` points along the boundary, closed curve traversed once.
    pub fn boundary_points(&self, samples: usize) -> Vec<[f64; 2]> {
        let samples = samples.max(4);
        match &self.shape {
            Shape::Rectangle { a, b } => {
                polyline_samples(&[[0.0, 0.0], [*a, 0.0], [*a, *b], [0.0, *b]], samples)
            }
            Shape::Disk { radius } => (0..samples)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / samples as f64;
                    [radius * t.cos(), radius * t.sin()]
                })
                .collect(),
            Shape::Polygon { vertices } => polyline_samples(vertices, samples),
        }
    }
}

fn polyline_samples(vertices: &[[f64; 2]], samples: usize) -> Vec<[f64; 2]> {
    let n = vertices.len();
    let lens: Vec<f64> = (0..n)
        .map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
        })
        .collect();
    let total: f64 = lens.iter().sum();
    (0..samples)
        .map(|k| {
            let mut s = total * k as f64 / samples as f64;
            let mut i = 0;
            while i + 1 < n && s > lens[i] {
                s -= lens[i];
                i += 1;
            }
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            let t = if lens[i] > 0.0 { s / lens[i] } else { 0.0 };
            [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
        })
        .collect()
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidPolygon("fewer than three vertices".into()));
    }
    if v.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPolygon("non-finite vertex".into()));
    }
    let n = v.len();
    let area: f64 = (0..n).map(|i| v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1]).sum::<f64>() * 0.5;
    if area.abs() < 1e-14 {
        return Err(Error::InvalidPolygon("zero area".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            // Adjacent edges share a vertex and are allowed to touch there.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::InvalidPolygon(format!("edges {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

fn on_segment(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2, d3, d4) = (orient(c, d, a), orient(c, d, b), orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn point_in_polygon(v: &[[f64; 2]], y: f64, z: f64) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (yi, zi) = (v[i][0], v[i][1]);
        let (yj, zj) = (v[j][0], v[j][1]);
        if (zi > z) != (zj > z) && y < (yj - yi) * (z - zi) / (zj - zi) + yi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn on_boundary(v: &[[f64; 2]], y: f64, z: f64) -> bool {
    let n = v.len();
    (0..n).any(|i| {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let scale = ((q[0] - p[0]).abs() + (q[1] - p[1]).abs()).max(1.0);
        orient(p, q, [y, z]).abs() <= 1e-12 * scale * scale && on_segment(p, q, [y, z])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(CrossSectionSpec::rectangle(0.0, 1.0, 32).is_err());
        assert!(CrossSectionSpec::rectangle(1.0, 1.0, 8).is_err());
        assert!(CrossSectionSpec::disk(-1.0, 32).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(CrossSectionSpec::polygon(bowtie, 32), Err(Error::InvalidPolygon(_))));
    }

    #[test]
    fn polygon_interior() {
        let tri = CrossSectionSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]], 32).unwrap();
        assert!(tri.contains(0.5, 0.5));
        assert!(!tri.contains(1.5, 1.5));
        assert!(!tri.contains(1.0, 0.0));
    }
}
