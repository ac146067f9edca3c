//! Banded direct solvers.
//!
//! `ComplexBandedLu` is an LU factorization with partial pivoting for general
//! (non-Hermitian) complex band matrices; `BandedCholesky` handles real SPD
//! band matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex band matrix with `kl` sub- and `ku` super-diagonals, assembled by
/// entry and then factored in place.
#[derive(Debug, Clone)]
pub struct ComplexBanded {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    // Row i stores columns [i - kl, i + kl + ku]; the extra kl slots hold
    // fill-in created by row interchanges.
    data: Vec<Complex64>,
}

impl ComplexBanded {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![Complex64::new(0.0, 0.0); n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i},{j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.kl < i || j > i + self.ku {
            return Complex64::new(0.0, 0.0);
        }
        self.data[self.slot(i, j)]
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                *yi += self.data[self.slot(i, j)] * x[j];
            }
        }
        y
    }

    /// Factor with partial pivoting, consuming the matrix.
    pub fn factor(mut self) -> Result<ComplexBandedLu> {
        let n = self.n;
        let kl = self.kl;
        let reach = kl + self.ku;
        let mut pivots = vec![0usize; n];
        let mut lower = vec![Complex64::new(0.0, 0.0); n * kl.max(1)];
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].norm();
            for r in k + 1..=last_row {
                let v = self.data[self.slot(r, k)].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= scale * 1e-300 {
                return Err(Error::Singular(k));
            }
            pivots[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for r in k + 1..=last_row {
                let sr = self.slot(r, k);
                let m = self.data[sr] / pivot;
                self.data[sr] = Complex64::new(0.0, 0.0);
                lower[k * kl + (r - k - 1)] = m;
                if m == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = self.data[self.slot(k, j)];
                    let s = self.slot(r, j);
                    self.data[s] -= m * u;
                }
            }
        }
        Ok(ComplexBandedLu { upper: self, lower, pivots })
    }
}

#[derive(Debug, Clone)]
pub struct ComplexBandedLu {
    upper: ComplexBanded,
    lower: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl ComplexBandedLu {
    pub fn dim(&self) -> usize {
        self.upper.n
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [Complex64]) {
        let u = &self.upper;
        let n = u.n;
        let kl = u.kl;
        let reach = kl + u.ku;
        assert_eq!(x.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            let last_row = (k + kl).min(n - 1);
            for r in k + 1..=last_row {
                x[r] -= self.lower[k * kl + (r - k - 1)] * xk;
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=last_col {
                s -= u.data[u.slot(k, j)] * x[j];
            }
            x[k] = s / u.data[u.slot(k, k)];
        }
    }
}

/// Real symmetric positive definite band matrix (lower half stored) with an
/// in-place Cholesky factorization.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    // Row i stores columns [i - bw, i].
    data: Vec<f64>,
}

impl BandedCholesky {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Add to the symmetric pair (i, j), (j, i); only the lower entry is stored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn factor(mut self) -> Result<Self> {
        let bw = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let ri = self.slot(i, lo);
                let rj = self.slot(j, lo);
                let len = j - lo;
                let dot: f64 = self.data[ri..ri + len]
                    .iter()
                    .zip(&self.data[rj..rj + len])
                    .map(|(a, b)| a * b)
                    .sum();
                let s = self.data[self.slot(i, j)] - dot;
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::Singular(i));
                    }
                    let sl = self.slot(i, i);
                    self.data[sl] = s.sqrt();
                } else {
                    let d = self.data[self.slot(j, j)];
                    let sl = self.slot(i, j);
                    self.data[sl] = s / d;
                }
            }
        }
        Ok(self)
    }

    /// Solve with a factor produced by [`BandedCholesky::factor`].
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let bw = self.bw;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = y[i];
            for k in lo..i {
                s -= self.data[self.slot(i, k)] * y[k];
            }
            y[i] = s / self.data[self.slot(i, i)];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = y[i];
            for k in i + 1..=hi {
                s -= self.data[self.slot(k, i)] * y[k];
            }
            y[i] = s / self.data[self.slot(i, i)];
        }
        y
    }
}
