//! Integer-order Bessel functions of the first kind and their positive zeros.

use std::f64::consts::PI;

/// `J_m(x)` from Bessel's integral, summed with the periodic trapezoid rule
/// (spectrally accurate once the node count exceeds `|x| + m` comfortably).
pub fn bessel_j(m: usize, x: f64) -> f64 {
    let n = 64 + 2 * (x.abs().ceil() as usize + m);
    let h = 2.0 * PI / n as f64;
    let s: f64 = (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (m as f64 * t - x * t.sin()).cos()
        })
        .sum();
    s / n as f64
}

pub fn bessel_j_prime(m: usize, x: f64) -> f64 {
    if m == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
    }
}

/// The first `count` positive zeros of `J_m`.
pub fn bessel_zeros(m: usize, count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    let step = 0.05;
    // J_m has no zeros in (0, m]; start just above.
    let mut a = (m as f64).max(step);
    let mut fa = bessel_j(m, a);
    while zeros.len() < count {
        let b = a + step;
        let fb = bessel_j(m, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(bisect(m, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    zeros
}

fn bisect(m: usize, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j(m, mid);
        if fm == 0.0 || hi - lo < 1e-15 * mid {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}
