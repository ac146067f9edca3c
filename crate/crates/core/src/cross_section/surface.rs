use super::CrossSectionSpec;

/// Points of the twisted tube surface: the boundary of the cross-section,
/// rotated about the axis by `epsilon * alpha(x)` at each of `nx` stations
/// in `[x0, x1]`, with `ns` boundary samples per station. Returns `(x, y, z)`.
pub fn twisted_surface_points(
    spec: &CrossSectionSpec,
    epsilon: f64,
    alpha: impl Fn(f64) -> f64,
    x_range: (f64, f64),
    nx: usize,
    ns: usize,
) -> Vec<[f64; 3]> {
    let boundary = spec.boundary_points(ns);
    let [oy, oz] = spec.axis_offset;
    let nx = nx.max(1);
    let mut out = Vec::with_capacity(nx * boundary.len());
    for i in 0..nx {
        let x = if nx == 1 { x_range.0 } else { x_range.0 + (x_range.1 - x_range.0) * i as f64 / (nx - 1) as f64 };
        let (s, c) = (epsilon * alpha(x)).sin_cos();
        for &[y, z] in &boundary {
            let (dy, dz) = (y - oy, z - oz);
            out.push([x, oy + dy * c + dz * s, oz + dz * c - dy * s]);
        }
    }
    out
}
