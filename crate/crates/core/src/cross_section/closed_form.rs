//! Separable Dirichlet modes of the rectangle `[0,a]x[0,b]` and of the disk.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, bessel_j_prime, bessel_zeros};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angular {
    Cos,
    Sin,
}

/// Analytic eigenfunction; `amplitude` carries normalization and sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `amplitude * sin(p pi y / a) sin(q pi z / b)`.
    Rectangle { p: usize, q: usize, a: f64, b: f64, amplitude: f64 },
    /// `amplitude * J_m(k r) cos(m t)` or `sin(m t)`, `k = j_{m,l} / R`.
    Disk { m: usize, l: usize, angular: Angular, k: f64, radius: f64, amplitude: f64 },
}

impl ClosedForm {
    pub fn energy(&self) -> f64 {
        match self {
            ClosedForm::Rectangle { p, q, a, b, .. } => {
                (*p as f64 * PI / a).powi(2) + (*q as f64 * PI / b).powi(2)
            }
            ClosedForm::Disk { k, .. } => k * k,
        }
    }

    pub fn value(&self, y: f64, z: f64) -> f64 {
        match *self {
            ClosedForm::Rectangle { p, q, a, b, amplitude } => {
                amplitude * (p as f64 * PI * y / a).sin() * (q as f64 * PI * z / b).sin()
            }
            ClosedForm::Disk { m, angular, k, radius, amplitude, .. } => {
                let r = y.hypot(z);
                if r >= radius {
                    return 0.0;
                }
                let t = z.atan2(y);
                amplitude * bessel_j(m, k * r) * angular_factor(angular, m, t)
            }
        }
    }

    /// `(d/dy, d/dz)` of the eigenfunction.
    pub fn gradient(&self, y: f64, z: f64) -> (f64, f64) {
        match *self {
            ClosedForm::Rectangle { p, q, a, b, amplitude } => {
                let (pp, qq) = (p as f64 * PI / a, q as f64 * PI / b);
                (
                    amplitude * pp * (pp * y).cos() * (qq * z).sin(),
                    amplitude * qq * (pp * y).sin() * (qq * z).cos(),
                )
            }
            ClosedForm::Disk { m, angular, k, radius, amplitude, .. } => {
                let r = y.hypot(z);
                if r >= radius {
                    return (0.0, 0.0);
                }
                let t = z.atan2(y);
                let (c, s) = (t.cos(), t.sin());
                let dr = amplitude * k * bessel_j_prime(m, k * r) * angular_factor(angular, m, t);
                // (1/r) d/dt, finite at r = 0 because J_m(kr)/r is.
                let jr = if r > 1e-300 {
                    bessel_j(m, k * r) / r
                } else if m == 1 {
                    0.5 * k
                } else {
                    0.0
                };
                let dt_over_r = amplitude * jr * m as f64 * angular_slope(angular, m, t);
                (c * dr - s * dt_over_r, s * dr + c * dt_over_r)
            }
        }
    }

    pub(crate) fn flip(&mut self) {
        match self {
            ClosedForm::Rectangle { amplitude, .. } | ClosedForm::Disk { amplitude, .. } => *amplitude = -*amplitude,
        }
    }
}

fn angular_factor(kind: Angular, m: usize, t: f64) -> f64 {
    match kind {
        Angular::Cos => (m as f64 * t).cos(),
        Angular::Sin => (m as f64 * t).sin(),
    }
}

fn angular_slope(kind: Angular, m: usize, t: f64) -> f64 {
    match kind {
        Angular::Cos => -(m as f64 * t).sin(),
        Angular::Sin => (m as f64 * t).cos(),
    }
}

/// Lowest `count` rectangle modes, ordered by `(E, p, q)`.
pub fn rectangle_modes(a: f64, b: f64, count: usize) -> Vec<ClosedForm> {
    let amplitude = 2.0 / (a * b).sqrt();
    let mut modes: Vec<ClosedForm> = (1..=count + 1)
        .flat_map(|p| (1..=count + 1).map(move |q| ClosedForm::Rectangle { p, q, a, b, amplitude }))
        .collect();
    modes.sort_by(|x, y| {
        let key = |m: &ClosedForm| match m {
            ClosedForm::Rectangle { p, q, .. } => (*p, *q),
            _ => unreachable!(),
        };
        x.energy().total_cmp(&y.energy()).then(key(x).cmp(&key(y)))
    });
    modes.truncate(count);
    modes
}

/// Lowest `count` disk modes, ordered by `(E, m, cos before sin)`.
pub fn disk_modes(radius: f64, count: usize) -> Vec<ClosedForm> {
    let mut modes = Vec::new();
    for m in 0..=count {
        for (l, j) in bessel_zeros(m, count).into_iter().enumerate() {
            let k = j / radius;
            let jn = bessel_j(m + 1, j);
            if m == 0 {
                let amplitude = 1.0 / (PI.sqrt() * radius * jn.abs());
                modes.push(ClosedForm::Disk { m, l: l + 1, angular: Angular::Cos, k, radius, amplitude });
            } else {
                let amplitude = (2.0 / PI).sqrt() / (radius * jn.abs());
                for angular in [Angular::Cos, Angular::Sin] {
                    modes.push(ClosedForm::Disk { m, l: l + 1, angular, k, radius, amplitude });
                }
            }
        }
    }
    let key = |c: &ClosedForm| match c {
        ClosedForm::Disk { m, angular, .. } => (*m, *angular == Angular::Sin),
        _ => unreachable!(),
    };
    modes.sort_by(|x, y| x.energy().total_cmp(&y.energy()).then(key(x).cmp(&key(y))));
    modes.truncate(count);
    modes
}
