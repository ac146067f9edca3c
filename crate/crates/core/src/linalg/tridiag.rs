//! Real symmetric tridiagonal eigenproblems via Sturm-sequence bisection.

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling i and i+1.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let prev = if q == 0.0 { f64::EPSILON * (self.off[i - 1].abs() + 1.0) } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (0-based) by bisection to absolute `tol`.
    pub fn eigenvalue(&self, k: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        while hi - lo > tol.max(f64::EPSILON * hi.abs().max(lo.abs())) {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an accurate eigenvalue estimate by inverse iteration,
    /// normalized to unit Euclidean norm.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let scale = self.bounds().1.abs().max(1.0);
        let shift = lambda + 1e-13 * scale;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.7).sin()).collect();
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }

    /// Solve (T - shift) y = b with the Thomas algorithm.
    pub fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let tiny = 1e-300;
        let mut denom = self.diag[0] - shift;
        if denom.abs() < tiny {
            denom = tiny;
        }
        if n > 1 {
            c[0] = self.off[0] / denom;
        }
        d[0] = b[0] / denom;
        for i in 1..n {
            let mut den = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if den.abs() < tiny {
                den = tiny;
            }
            if i + 1 < n {
                c[i] = self.off[i] / den;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / den;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        for k in 0..5 {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k, 1e-14) - exact).abs() < 1e-12);
        }
        let v = t.eigenvector(t.eigenvalue(0, 1e-14));
        let exact: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::PI * (i + 1) as f64 / (n + 1) as f64).sin())
            .collect();
        let en = exact.iter().map(|x| x * x).sum::<f64>().sqrt();
        let dot: f64 = v.iter().zip(&exact).map(|(a, b)| a * b / en).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-10);
    }
}
