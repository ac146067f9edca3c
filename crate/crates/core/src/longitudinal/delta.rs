//! Resolvent kernels of `h = -d^2/dx^2 - delta(x)`.
//!
//! For `zeta = k^2`, `Im k > 0`, the kernel of `(zeta - h)^{-1}` is `K0 + K1` with
//! `K0 = e^{ik|x-x'|} / (2ik)` and `K1 = e^{ik(|x|+|x'|)} / (2k(2k - i))`.

use num_complex::Complex64;

use super::Side;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKernel {
    pub k: Complex64,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kernel pair at `zeta`; a real nonnegative `zeta` needs a side to pick the branch.
pub fn delta_resolvent_kernel(zeta: Complex64, side: Option<Side>) -> Result<DeltaKernel> {
    if zeta.im == 0.0 && zeta.re >= 0.0 {
        let s = zeta.re.sqrt();
        return match side {
            Some(Side::Plus) => Ok(DeltaKernel { k: Complex64::new(s, 0.0) }),
            Some(Side::Minus) => Ok(DeltaKernel { k: Complex64::new(-s, 0.0) }),
            None => Err(Error::BranchCut(zeta)),
        };
    }
    let mut k = zeta.sqrt();
    if k.im < 0.0 {
        k = -k;
    }
    Ok(DeltaKernel { k })
}

impl DeltaKernel {
    pub fn k0(&self, x: f64, y: f64) -> Complex64 {
        (I * self.k * (x - y).abs()).exp() / (2.0 * I * self.k)
    }

    pub fn k1(&self, x: f64, y: f64) -> Complex64 {
        (I * self.k * (x.abs() + y.abs())).exp() / (2.0 * self.k * (2.0 * self.k - I))
    }

    /// `(<v, K0 v>, <v, K1 v>)` (bilinear, `v` real) by the trapezoid rule on
    /// `[-radius, radius]` with spacing `h`, split at the origin, followed by
    /// one Richardson step.
    pub fn forms(&self, v: &dyn Fn(f64) -> f64, radius: f64, h: f64) -> (Complex64, Complex64) {
        let coarse = self.forms_at(v, radius, h);
        let fine = self.forms_at(v, radius, h / 2.0);
        (
            (fine.0 * 4.0 - coarse.0) / 3.0,
            (fine.1 * 4.0 - coarse.1) / 3.0,
        )
    }

    fn forms_at(&self, v: &dyn Fn(f64) -> f64, radius: f64, h: f64) -> (Complex64, Complex64) {
        let n = (radius / h).ceil() as usize;
        let h = radius / n as f64;
        // Nodes on each half-line, with 0- and 0+ kept apart so that a jump of
        // v at the origin is integrated from both sides.
        let eps = 1e-9 * h;
        let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(2 * n + 2);
        for i in (0..=n).rev() {
            let x = -(i as f64) * h;
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            nodes.push((x, w * v(if i == 0 { -eps } else { x })));
        }
        for i in 0..=n {
            let x = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 * h } else { h };
            nodes.push((x, w * v(if i == 0 { eps } else { x })));
        }
        // sum_{i,j} a_i a_j e^{ik|x_i - x_j|} = 2 sum_i a_i F_i - sum_i a_i^2,
        // F_i = sum_{j <= i} a_j e^{ik(x_i - x_j)}.
        let mut f = Complex64::new(0.0, 0.0);
        let mut prev = nodes[0].0;
        let mut s = Complex64::new(0.0, 0.0);
        let mut diag = 0.0;
        let mut one = Complex64::new(0.0, 0.0);
        for &(x, a) in &nodes {
            f = f * (I * self.k * (x - prev)).exp() + a;
            prev = x;
            s += 2.0 * a * f;
            diag += a * a;
            one += a * (I * self.k * x.abs()).exp();
        }
        let k0 = (s - diag) / (2.0 * I * self.k);
        let k1 = one * one / (2.0 * self.k * (2.0 * self.k - I));
        (k0, k1)
    }
}
