//! Brute-force two-mode density matrices on a truncated number basis
//! `|j, k⟩`, `0 ≤ j, k < cutoff`, used to cross-check the Gaussian formulas.
//!
//! States are kept in spectral form: a list of blocks, each a set of basis
//! indices with the eigenpairs of the state restricted to them. Undisplaced
//! two-mode-squeezed states are block diagonal in `n₁ − n₂`, which keeps the
//! common cases cheap; anything else is a single block.

mod build;
mod discord;
mod metrics;
mod ops;

pub use build::{build_fock_state, fock_state, fock_state_local, fock_state_within, suggest_cutoff, FockRecipe};
pub use discord::{oracle_trace_discord, TraceDiscord};
pub use metrics::{
    oracle_affinity, oracle_fidelity, oracle_helstrom, oracle_q_t, oracle_trace_distance,
};

use faer::{c64, Mat};
use nalgebra::{Matrix4, Vector4};

use crate::error::Result;
use crate::gaussian::{Convention, GaussianState};

/// Eigenvalues below this are dropped before fractional powers.
pub const EIGEN_FLOOR: f64 = 1e-30;
/// Largest accepted lost probability mass.
pub const TAIL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub(crate) struct Block {
    /// Basis indices `j · cutoff + k`, ascending.
    pub support: Vec<usize>,
    pub vals: Vec<f64>,
    /// `support.len() × vals.len()`, orthonormal columns.
    pub vecs: Mat<c64>,
}

/// A truncated two-mode density matrix.
#[derive(Debug, Clone)]
pub struct FockOperator {
    cutoff: usize,
    pub(crate) blocks: Vec<Block>,
    tail_mass: f64,
}

impl FockOperator {
    pub(crate) fn new(cutoff: usize, blocks: Vec<Block>) -> Self {
        let trace: f64 = blocks.iter().flat_map(|b| b.vals.iter()).sum();
        FockOperator {
            cutoff,
            blocks,
            tail_mass: (1.0 - trace).max(0.0),
        }
    }

    /// Photon-number cutoff per mode.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Dimension of the two-mode space, `cutoff²`.
    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    /// Probability mass lost to truncation, `1 − tr ρ`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.vals.iter()).sum()
    }

    /// Nonzero eigenvalues (above the floor), descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.vals.iter().copied()).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Dense `cutoff² × cutoff²` matrix.
    pub fn matrix(&self) -> Mat<c64> {
        let d = self.dim();
        let mut m = Mat::<c64>::zeros(d, d);
        for b in &self.blocks {
            for (c, &lam) in b.vals.iter().enumerate() {
                for (i, &gi) in b.support.iter().enumerate() {
                    let ui = b.vecs[(i, c)] * lam;
                    for (j, &gj) in b.support.iter().enumerate() {
                        m[(gi, gj)] += ui * b.vecs[(j, c)].conj();
                    }
                }
            }
        }
        m
    }

    /// `e^{−iφ a₁†a₁} ρ e^{iφ a₁†a₁}`, exact on the truncated space.
    pub fn phase_shifted(&self, phi: f64) -> FockOperator {
        let cutoff = self.cutoff;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut vecs = b.vecs.clone();
                for (i, &g) in b.support.iter().enumerate() {
                    let ph = c64::from_polar(1.0, -phi * (g / cutoff) as f64);
                    for c in 0..vecs.ncols() {
                        vecs[(i, c)] *= ph;
                    }
                }
                Block {
                    support: b.support.clone(),
                    vals: b.vals.clone(),
                    vecs,
                }
            })
            .collect();
        FockOperator {
            cutoff,
            blocks,
            tail_mass: self.tail_mass,
        }
    }

    /// First and second moments of the quadratures `x = a + a†`,
    /// `p = −i(a − a†)` (vacuum variance 1), normalized by the trace.
    pub fn moments(&self) -> (Vector4<f64>, Matrix4<f64>) {
        let c = self.cutoff;
        let d = self.dim();
        // L = [a₁, a₁†, a₂, a₂†]; E[m][n] = tr ρ L_m L_n, M[m] = tr ρ L_m
        let mut e = [[c64::new(0.0, 0.0); 4]; 4];
        let mut mean = [c64::new(0.0, 0.0); 4];
        let apply = |op: usize, v: &[c64]| -> Vec<c64> {
            let mut out = vec![c64::new(0.0, 0.0); d];
            for j in 0..c {
                for k in 0..c {
                    let src = v[j * c + k];
                    if src == c64::new(0.0, 0.0) {
                        continue;
                    }
                    // a|n⟩ = √n |n−1⟩, a†|n⟩ = √(n+1) |n+1⟩ (dropped at the edge)
                    let (jj, kk, f) = match op {
                        0 if j > 0 => (j - 1, k, (j as f64).sqrt()),
                        1 if j + 1 < c => (j + 1, k, ((j + 1) as f64).sqrt()),
                        2 if k > 0 => (j, k - 1, (k as f64).sqrt()),
                        3 if k + 1 < c => (j, k + 1, ((k + 1) as f64).sqrt()),
                        _ => continue,
                    };
                    out[jj * c + kk] += src * f;
                }
            }
            out
        };
        let dot = |x: &[c64], y: &[c64]| -> c64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
        let dagger = [1usize, 0, 3, 2];
        for b in &self.blocks {
            for (col, &lam) in b.vals.iter().enumerate() {
                let mut v = vec![c64::new(0.0, 0.0); d];
                for (i, &g) in b.support.iter().enumerate() {
                    v[g] = b.vecs[(i, col)];
                }
                let lv: Vec<Vec<c64>> = (0..4).map(|op| apply(op, &v)).collect();
                let norm = dot(&v, &v);
                for m in 0..4 {
                    mean[m] += dot(&v, &lv[m]) * lam;
                    for n in 0..4 {
                        // ⟨v| L_m L_n |v⟩ = ⟨L_m† v | L_n v⟩; a a† = a†a + 1 avoids
                        // the level dropped at the cutoff
                        let val = if m % 2 == 0 && n == m + 1 {
                            dot(&lv[m], &lv[m]) + norm
                        } else {
                            dot(&lv[dagger[m]], &lv[n])
                        };
                        e[m][n] += val * lam;
                    }
                }
            }
        }
        let tr = self.trace();
        let i = c64::new(0.0, 1.0);
        let one = c64::new(1.0, 0.0);
        let zero = c64::new(0.0, 0.0);
        let coeffs: [[c64; 4]; 4] = [
            [one, one, zero, zero],
            [-i, i, zero, zero],
            [zero, zero, one, one],
            [zero, zero, -i, i],
        ];
        let mut disp = Vector4::zeros();
        for u in 0..4 {
            let m: c64 = (0..4).map(|k| coeffs[u][k] * mean[k]).sum::<c64>() / tr;
            disp[u] = m.re;
        }
        let mut cov = Matrix4::zeros();
        for u in 0..4 {
            for v in 0..4 {
                let mut s = c64::new(0.0, 0.0);
                for m in 0..4 {
                    for n in 0..4 {
                        s += coeffs[u][m] * coeffs[v][n] * e[m][n];
                    }
                }
                cov[(u, v)] = (s / tr).re - disp[u] * disp[v];
            }
        }
        (disp, (cov + cov.transpose()) * 0.5)
    }

    /// Gaussian state with the same first and second moments.
    pub fn to_gaussian(&self) -> Result<GaussianState> {
        let (d, c) = self.moments();
        GaussianState::new(d, c, Convention::VacuumOne)
    }
}
