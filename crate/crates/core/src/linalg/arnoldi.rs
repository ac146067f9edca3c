//! Shift-invert Arnoldi for complex non-Hermitian pencils.

use nalgebra::DMatrix;
use num_complex::Complex64;

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Ritz values of `op` from an `m`-step Arnoldi factorization started at `start`.
pub fn ritz_values<F>(op: F, start: &[Complex64], m: usize) -> Vec<Complex64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = start.len();
    let m = m.min(n).max(1);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
    let nrm = cnorm(start);
    basis.push(start.iter().map(|x| x / nrm).collect());
    let mut h = DMatrix::<Complex64>::zeros(m, m);
    let mut size = m;
    for j in 0..m {
        let mut w = op(&basis[j]);
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = cdot(q, &w);
                h[(i, j)] += c;
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let b = cnorm(&w);
        if j + 1 == m {
            break;
        }
        if b < 1e-13 * h[(j, j)].norm().max(1e-300) {
            size = j + 1;
            break;
        }
        h[(j + 1, j)] = Complex64::new(b, 0.0);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let h = h.view((0, 0), (size, size)).into_owned();
    h.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}
