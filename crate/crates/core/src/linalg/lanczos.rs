//! Lanczos iteration with full reorthogonalization and locking, used in
//! shift-invert mode: the operator passed in is `A^{-1}` and the largest
//! Ritz values correspond to the smallest eigenvalues of `A`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative Ritz residual `|beta * s_last| / |theta|` required for convergence.
    pub tol: f64,
    pub max_steps: usize,
    pub max_runs: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_steps: 300, max_runs: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Relative residual estimate at convergence.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            axpy(w, -c, q);
        }
    }
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    // Deterministic, non-symmetric pseudo-random start.
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

struct RunOutcome {
    pairs: Vec<EigenPair>,
}

fn lanczos_run<F>(n: usize, need: usize, op: &F, locked: &[Vec<f64>], seed: usize, opts: &LanczosOptions) -> Result<RunOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut q = start_vector(n, seed);
    orthogonalize(&mut q, locked);
    let norm = dot(&q, &q).sqrt();
    if norm == 0.0 {
        return Ok(RunOutcome { pairs: Vec::new() });
    }
    q.iter_mut().for_each(|v| *v /= norm);

    let max_steps = opts.max_steps.min(n.saturating_sub(locked.len())).max(1);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    loop {
        let j = basis.len() - 1;
        let mut w = op(&basis[j]);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        axpy(&mut w, -a, &basis[j]);
        if j > 0 {
            axpy(&mut w, -beta[j - 1], &basis[j - 1]);
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();

        let m = alpha.len();
        let exhausted = b <= 1e-14 * a.abs().max(1e-300) || m >= max_steps;
        if m >= need && (m % 4 == 0 || exhausted) {
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
            let top = &order[..need.min(m)];
            let residual = |i: usize| (b * eig.eigenvectors[(m - 1, i)]).abs() / eig.eigenvalues[i].abs();
            let converged = top.iter().all(|&i| residual(i) <= opts.tol);
            if converged || exhausted {
                if !converged {
                    return Err(Error::NoConvergence(format!(
                        "Lanczos stalled after {m} steps (worst residual {:e})",
                        top.iter().map(|&i| residual(i)).fold(0.0, f64::max)
                    )));
                }
                let pairs = top
                    .iter()
                    .map(|&i| {
                        let mut x = vec![0.0; n];
                        for (k, qk) in basis.iter().enumerate() {
                            axpy(&mut x, eig.eigenvectors[(k, i)], qk);
                        }
                        let nx = dot(&x, &x).sqrt();
                        x.iter_mut().for_each(|v| *v /= nx);
                        EigenPair { value: eig.eigenvalues[i], vector: x, residual: residual(i) }
                    })
                    .collect();
                return Ok(RunOutcome { pairs });
            }
        }
        if exhausted {
            return Err(Error::NoConvergence(format!("Krylov space exhausted after {m} steps")));
        }
        beta.push(b);
        w.iter_mut().for_each(|v| *v /= b);
        basis.push(w);
    }
}

/// The `count` largest eigenvalues of a symmetric operator given by its action.
///
/// Repeated eigenvalues are recovered by locking: after the first run,
/// further runs search the orthogonal complement of everything found so far
/// until they stop producing values that belong in the top `count`.
pub fn largest_eigenpairs<F>(n: usize, count: usize, op: F, opts: &LanczosOptions) -> Result<Vec<EigenPair>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if count == 0 || count > n {
        return Err(Error::InvalidInput(format!("cannot compute {count} eigenpairs of a {n}-dimensional operator")));
    }
    let mut found: Vec<EigenPair> = Vec::new();
    for run in 0..opts.max_runs {
        let need = if run == 0 { count } else { 1 };
        if found.len() >= n {
            break;
        }
        let locked: Vec<Vec<f64>> = found.iter().map(|p| p.vector.clone()).collect();
        let outcome = lanczos_run(n, need, &op, &locked, run, opts)?;
        let threshold = if found.len() >= count {
            let mut vals: Vec<f64> = found.iter().map(|p| p.value).collect();
            vals.sort_by(|a, b| b.total_cmp(a));
            vals[count - 1]
        } else {
            f64::NEG_INFINITY
        };
        let before = found.len();
        for p in outcome.pairs {
            if run == 0 || p.value > threshold * (1.0 + 1e-9) || found.len() < count {
                found.push(p);
            }
        }
        if run > 0 && found.len() == before {
            found.sort_by(|a, b| b.value.total_cmp(&a.value));
            found.truncate(count);
            return Ok(found);
        }
    }
    Err(Error::NoConvergence("locked Lanczos did not settle".into()))
}
