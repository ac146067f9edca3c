//! Nodes for the 1D discretizations: a real interior graded towards the
//! origin, optionally continued along rotated exterior rays.

use num_complex::Complex64;

/// Nodes on `[-radius, radius]` symmetric about 0 (which is a node), with
/// local spacing interpolating from `h_center` near the origin to `h_far`
/// beyond `|x| ~ width`. The node density is
/// `1/h(x) = 1/h_far + (1/h_center - 1/h_far) sech^2(x/width)`,
/// whose integral `s(x)` is inverted at equally spaced `s`. Level `l` halves
/// the spacing `l` times and nests the nodes of coarser levels.
pub(crate) fn graded_nodes(radius: f64, h_far: f64, h_center: f64, width: f64, level: u32) -> Vec<f64> {
    let bump = (1.0 / h_center - 1.0 / h_far).max(0.0);
    let s = |x: f64| x / h_far + bump * width * (x / width).tanh();
    let ds = |x: f64| 1.0 / h_far + bump / (x / width).cosh().powi(2);
    let total = s(radius);
    let n = (total.ceil() as usize).max(2) << level;
    let mut half = Vec::with_capacity(n + 1);
    half.push(0.0);
    let mut x = 0.0;
    for i in 1..n {
        let target = total * i as f64 / n as f64;
        // s is increasing and concave on x > 0; Newton from the previous node converges monotonically.
        for _ in 0..100 {
            let dx = (s(x) - target) / ds(x);
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1e-300) {
                break;
            }
        }
        x = x.clamp(0.0, radius);
        half.push(x);
    }
    half.push(radius);
    let mut nodes: Vec<f64> = half[1..].iter().rev().map(|x| -x).collect();
    nodes.push(0.0);
    nodes.extend_from_slice(&half[1..]);
    nodes
}

/// Complex contour: real `nodes` followed on each side by a uniform ray
/// `+-(X + t e^{i theta})`, `0 < t <= length`. Returns the contour points and the
/// index range of the real nodes.
pub(crate) fn scaled_contour(nodes: &[f64], theta: f64, length: f64, h: f64) -> (Vec<Complex64>, std::ops::Range<usize>) {
    let m = (length / h).ceil() as usize;
    let h = length / m as f64;
    let rot = Complex64::from_polar(1.0, theta);
    let (left, right) = (nodes[0], nodes[nodes.len() - 1]);
    let mut z: Vec<Complex64> = (1..=m).rev().map(|t| left - rot * (t as f64 * h)).collect();
    let start = z.len();
    z.extend(nodes.iter().map(|&x| Complex64::new(x, 0.0)));
    let end = z.len();
    z.extend((1..=m).map(|t| right + rot * (t as f64 * h)));
    (z, start..end)
}
