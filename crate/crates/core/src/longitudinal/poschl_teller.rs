//! Exact bound states of `V(x) = -nu / (2 cosh^2(nu x))`.

use crate::linalg::GaussLegendre;

/// `t` with `t (t + 1) = 1 / (2 nu)`.
pub fn depth_parameter(nu: f64) -> f64 {
    0.5 * (-1.0 + (1.0 + 2.0 / nu).sqrt())
}

/// `mu_j = -(nu^2 / 4) (-(2j - 1) + sqrt(1 + 2/nu))^2` for `1 <= j < t + 1`.
pub fn energies(nu: f64) -> Vec<f64> {
    let t = depth_parameter(nu);
    let s = (1.0 + 2.0 / nu).sqrt();
    (1..)
        .take_while(|&j| (j as f64) < t + 1.0)
        .map(|j| -0.25 * nu * nu * (s - (2 * j - 1) as f64).powi(2))
        .collect()
}

/// Normalized eigenfunction `sech^e(nu x) P(w)`, `w = (1 - tanh(nu x)) / 2`,
/// where `P` is the terminating hypergeometric series `F(1 - j, e + t + 1; e + 1; w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PtEigenfunction {
    pub nu: f64,
    pub e: f64,
    coeffs: Vec<f64>,
    norm: f64,
}

impl PtEigenfunction {
    pub fn new(nu: f64, j: usize) -> Self {
        let t = depth_parameter(nu);
        let e = t - (j as f64 - 1.0);
        let (a, b, c) = (1.0 - j as f64, e + t + 1.0, e + 1.0);
        let mut coeffs = vec![1.0];
        for m in 0..j.saturating_sub(1) {
            let m = m as f64;
            let prev = *coeffs.last().unwrap();
            coeffs.push(prev * (a + m) * (b + m) / ((c + m) * (m + 1.0)));
        }
        let mut f = Self { nu, e, coeffs, norm: 1.0 };
        f.norm = f.raw_norm().recip();
        f
    }

    fn series(&self, w: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for c in self.coeffs.iter().rev() {
            dp = dp * w + p;
            p = p * w + c;
        }
        (p, dp)
    }

    fn raw(&self, x: f64) -> (f64, f64) {
        let u = self.nu * x;
        let th = u.tanh();
        // log sech(u), stable where cosh overflows; tiny e keeps sech^e O(1) far out.
        let log_sech = std::f64::consts::LN_2 - u.abs() - (-2.0 * u.abs()).exp().ln_1p();
        let sech = log_sech.exp();
        let w = 0.5 * (1.0 - th);
        let (p, dp) = self.series(w);
        let s = (self.e * log_sech).exp();
        let value = s * p;
        let deriv = s * (-self.e * self.nu * th * p - 0.5 * self.nu * sech * sech * dp);
        (value, deriv)
    }

    fn raw_norm(&self) -> f64 {
        // x = sinh(u) / nu turns the exp(-e nu |x|) tail into a double exponential.
        let gl = GaussLegendre::new(64);
        let umax = (60.0 / self.e.max(1e-3)).asinh() + 1.0;
        let panels = 48;
        let s = gl.integrate_composite(-umax, umax, panels, |u| {
            let x = u.sinh() / self.nu;
            self.raw(x).0.powi(2) * u.cosh() / self.nu
        });
        s.sqrt()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.norm * self.raw(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.norm * self.raw(x).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_ground_states() {
        assert!((energies(1.0)[0] + 0.25 * (3f64.sqrt() - 1.0).powi(2)).abs() < 1e-15);
        assert!((energies(10.0)[0] + 0.227_744_2).abs() < 1e-7);
        assert_eq!(energies(1.0).len(), 1);
    }

    #[test]
    fn shallow_wells_have_several_states() {
        // t(t+1) = 1/(2 nu) = 10 gives t ~ 2.7, so j = 1, 2, 3.
        let nu = 0.05;
        assert_eq!(energies(nu).len(), 3);
        for j in 1..=3 {
            let f = PtEigenfunction::new(nu, j);
            let h = 1e-5;
            let x = 3.7;
            let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
            assert!((fd - f.derivative(x)).abs() < 1e-8);
        }
    }
}
