use serde::Serialize;

use crate::cross_section::TransverseModeSet;
use crate::longitudinal::BoundState;

/// A point `E = E_n + mu_j` of the unperturbed discrete spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddedEigenvalue {
    pub n: usize,
    pub j: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub embedded: bool,
    pub simple: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    /// Discrete eigenvalues below `E_1`.
    pub below: Vec<EmbeddedEigenvalue>,
    /// Eigenvalues embedded in `[E_1, inf)`.
    pub embedded: Vec<EmbeddedEigenvalue>,
}

impl Classification {
    pub fn find(&self, n: usize, j: usize) -> Option<&EmbeddedEigenvalue> {
        self.below.iter().chain(&self.embedded).find(|e| e.n == n && e.j == j)
    }
}

/// All pairs `(n, j)`, split at the bottom `E_1` of the essential spectrum and
/// sorted by energy. Bound states of a 1D Schrodinger operator are simple, so
/// simplicity follows the transverse mode; coincidences between different
/// pairs are flagged too.
pub fn classify_spectrum(modes: &TransverseModeSet, bound_states: &[BoundState]) -> Classification {
    let e1 = modes.modes[0].energy;
    let mut all: Vec<EmbeddedEigenvalue> = modes
        .modes
        .iter()
        .flat_map(|m| {
            bound_states.iter().map(move |b| EmbeddedEigenvalue {
                n: m.index,
                j: b.j,
                energy: m.energy + b.mu,
                embedded: m.energy + b.mu >= e1,
                simple: modes.is_simple(m.index),
            })
        })
        .collect();
    all.sort_by(|a, b| a.energy.total_cmp(&b.energy).then((a.n, a.j).cmp(&(b.n, b.j))));
    let tol = crate::cross_section::DEGENERACY_GAP * e1.abs();
    let flags: Vec<bool> = (0..all.len())
        .map(|i| {
            (i > 0 && all[i].energy - all[i - 1].energy < tol) || (i + 1 < all.len() && all[i + 1].energy - all[i].energy < tol)
        })
        .collect();
    for (e, clash) in all.iter_mut().zip(flags) {
        e.simple &= !clash;
    }
    let (embedded, below) = all.into_iter().partition(|e| e.embedded);
    Classification { below, embedded }
}

/// `k* = max{k : E_k < E}` (1-based), `0` when no threshold lies below `E`.
pub fn threshold_index(energy: f64, thresholds: &[f64]) -> usize {
    thresholds.partition_point(|&t| t < energy)
}
