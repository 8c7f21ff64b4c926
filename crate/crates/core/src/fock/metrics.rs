//! Exact distinguishability measures between two truncated density
//! matrices, each renormalized to unit trace.

use faer::{c64, Mat, Side};

use super::{Block, FockOperator};
use crate::error::{domain, Error, Result};

/// Blocks of two states restricted to a common invariant coordinate
/// subspace.
struct Group {
    dim: usize,
    u1: Mat<c64>,
    l1: Vec<f64>,
    u2: Mat<c64>,
    l2: Vec<f64>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits the pair into groups of basis indices such that both states are
/// block diagonal with respect to them.
fn groups(a: &FockOperator, b: &FockOperator) -> Result<Vec<Group>> {
    if a.cutoff() != b.cutoff() {
        return Err(Error::Contract(format!(
            "cutoff mismatch: {} vs {}",
            a.cutoff(),
            b.cutoff()
        )));
    }
    let d = a.dim();
    let mut parent: Vec<usize> = (0..d).collect();
    for blk in a.blocks.iter().chain(b.blocks.iter()) {
        for w in blk.support.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    // group id per root, in order of first appearance
    let mut gid = vec![usize::MAX; d];
    let mut members: Vec<(Vec<&Block>, Vec<&Block>)> = Vec::new();
    let mut assign = |blk: &Block, parent: &mut Vec<usize>| -> usize {
        let root = find(parent, blk.support[0]);
        if gid[root] == usize::MAX {
            gid[root] = members.len();
            members.push((Vec::new(), Vec::new()));
        }
        gid[root]
    };
    let mut which_a = Vec::new();
    for blk in &a.blocks {
        which_a.push(assign(blk, &mut parent));
    }
    let mut which_b = Vec::new();
    for blk in &b.blocks {
        which_b.push(assign(blk, &mut parent));
    }
    for (blk, &g) in a.blocks.iter().zip(&which_a) {
        members[g].0.push(blk);
    }
    for (blk, &g) in b.blocks.iter().zip(&which_b) {
        members[g].1.push(blk);
    }

    // compare the renormalized truncated states
    let (t1, t2) = (a.trace(), b.trace());
    if !(t1 > 0.0 && t2 > 0.0) {
        return domain("state has zero trace");
    }
    let mut out = Vec::with_capacity(members.len());
    for (ma, mb) in members {
        let mut support: Vec<usize> = ma.iter().chain(mb.iter()).flat_map(|b| b.support.iter().copied()).collect();
        support.sort_unstable();
        support.dedup();
        let pos = |g: usize| support.binary_search(&g).expect("support index");
        let embed = |blocks: &[&Block]| -> (Mat<c64>, Vec<f64>) {
            let k: usize = blocks.iter().map(|b| b.vals.len()).sum();
            let mut u = Mat::<c64>::zeros(support.len(), k);
            let mut vals = Vec::with_capacity(k);
            let mut col = 0;
            for b in blocks {
                let rows: Vec<usize> = b.support.iter().map(|&g| pos(g)).collect();
                for c in 0..b.vals.len() {
                    for (i, &r) in rows.iter().enumerate() {
                        u[(r, col)] = b.vecs[(i, c)];
                    }
                    vals.push(b.vals[c]);
                    col += 1;
                }
            }
            (u, vals)
        };
        let (u1, mut l1) = embed(&ma);
        let (u2, mut l2) = embed(&mb);
        l1.iter_mut().for_each(|l| *l /= t1);
        l2.iter_mut().for_each(|l| *l /= t2);
        out.push(Group {
            dim: support.len(),
            u1,
            l1,
            u2,
            l2,
        });
    }
    Ok(out)
}

/// Gram eigenvalues below this are treated as linear dependence.
const GRAM_FLOOR: f64 = 1e-12;

fn evd_err<E: std::fmt::Debug>(e: E) -> Error {
    Error::Numeric(format!("eigendecomposition failed: {e:?}"))
}

/// Uhlmann fidelity `(tr √(√ρ₁ ρ₂ √ρ₁))²`.
pub fn oracle_fidelity(a: &FockOperator, b: &FockOperator) -> Result<f64> {
    let mut root_sum = 0.0;
    for g in groups(a, b)? {
        if g.l1.is_empty() || g.l2.is_empty() {
            continue;
        }
        // ‖√ρ₁ √ρ₂‖₁ = ‖Λ₁^{1/2} X Λ₂^{1/2}‖₁ with X = U₁†U₂; its squared
        // singular values are the eigenvalues of Y Y†
        let x = g.u1.adjoint() * &g.u2;
        let y = Mat::<c64>::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * (g.l1[i] * g.l2[j]).sqrt());
        let yy = &y * y.adjoint();
        let ev = yy.self_adjoint_eigenvalues(Side::Lower).map_err(evd_err)?;
        root_sum += ev.iter().map(|&e| e.max(0.0).sqrt()).sum::<f64>();
    }
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// `tr ρ₁ᵗ ρ₂¹⁻ᵗ` for `0 < t < 1`.
pub fn oracle_q_t(a: &FockOperator, b: &FockOperator, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    let mut q = 0.0;
    for g in groups(a, b)? {
        if g.l1.is_empty() || g.l2.is_empty() {
            continue;
        }
        let x = g.u1.adjoint() * &g.u2;
        let p1: Vec<f64> = g.l1.iter().map(|l| l.powf(t)).collect();
        let p2: Vec<f64> = g.l2.iter().map(|l| l.powf(1.0 - t)).collect();
        for j in 0..x.ncols() {
            for i in 0..x.nrows() {
                q += p1[i] * p2[j] * x[(i, j)].norm_sqr();
            }
        }
    }
    Ok(q.clamp(0.0, 1.0))
}

/// Bhattacharyya coefficient `tr √ρ₁ √ρ₂`.
pub fn oracle_affinity(a: &FockOperator, b: &FockOperator) -> Result<f64> {
    oracle_q_t(a, b, 0.5)
}

/// Trace distance `tr |ρ₁ − ρ₂|`, in `[0, 2]`.
pub fn oracle_trace_distance(a: &FockOperator, b: &FockOperator) -> Result<f64> {
    let mut total = 0.0;
    for g in groups(a, b)? {
        let (k1, k2) = (g.l1.len(), g.l2.len());
        if k1 == 0 || k2 == 0 {
            total += g.l1.iter().sum::<f64>() + g.l2.iter().sum::<f64>();
            continue;
        }
        let ev = if k1 + k2 >= g.dim {
            // dense difference on the group's subspace
            let scaled = |u: &Mat<c64>, l: &[f64], sign: f64| {
                Mat::<c64>::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)] * (sign * l[j]))
            };
            let diff = &scaled(&g.u1, &g.l1, 1.0) * g.u1.adjoint() + &scaled(&g.u2, &g.l2, -1.0) * g.u2.adjoint();
            diff.self_adjoint_eigenvalues(Side::Lower).map_err(evd_err)?
        } else {
            // ρ₁ − ρ₂ lives in the span of W = [U₁ U₂]; take an orthonormal
            // basis Q = W V S^{-1/2} from the Gram matrix and diagonalize there
            let k = k1 + k2;
            let x = g.u1.adjoint() * &g.u2;
            let gram = Mat::<c64>::from_fn(k, k, |i, j| match (i < k1, j < k1) {
                (true, true) | (false, false) => {
                    if i == j {
                        c64::new(1.0, 0.0)
                    } else {
                        c64::new(0.0, 0.0)
                    }
                }
                (true, false) => x[(i, j - k1)],
                (false, true) => x[(j, i - k1)].conj(),
            });
            let evd = gram.self_adjoint_eigen(Side::Lower).map_err(evd_err)?;
            let u = evd.U();
            let s: Vec<f64> = evd.S().column_vector().iter().map(|z| z.re).collect();
            let keep: Vec<usize> = (0..k).filter(|&m| s[m] > GRAM_FLOOR).collect();
            // coordinates of U₁ and U₂ columns in the Q basis: S^{-1/2} V† G
            let coords = Mat::<c64>::from_fn(keep.len(), k, |i, j| {
                let m = keep[i];
                u[(j, m)].conj() * s[m].sqrt()
            });
            let lam: Vec<f64> = g.l1.iter().copied().chain(g.l2.iter().map(|l| -l)).collect();
            let scaled = Mat::<c64>::from_fn(keep.len(), k, |i, j| coords[(i, j)] * lam[j]);
            let h = &scaled * coords.adjoint();
            h.self_adjoint_eigenvalues(Side::Lower).map_err(evd_err)?
        };
        total += ev.iter().map(|e| e.abs()).sum::<f64>();
    }
    Ok(total.clamp(0.0, 2.0))
}

/// Minimum error probability `½ − d_Tr/4` for two equiprobable states.
pub fn oracle_helstrom(a: &FockOperator, b: &FockOperator) -> Result<f64> {
    Ok(0.5 - 0.25 * oracle_trace_distance(a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distinguishability::{affinity, helstrom_bounds, pure_perr, q_t, uhlmann_fidelity};
    use crate::fock::fock_state;
    use crate::gaussian::{phase_shift, Family, StateParams};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    fn pair(p: &StateParams, fam: Family, cutoff: usize) -> (FockOperator, FockOperator) {
        let a = fock_state(p, fam, cutoff).unwrap();
        let b = a.phase_shifted(FRAC_PI_2);
        (a, b)
    }

    #[test]
    fn identical_states() {
        let p = StateParams::new().with_r(0.4).with_thermal(0.5, 0.2);
        let a = fock_state(&p, Family::Sts, 24).unwrap();
        assert!((oracle_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-10);
        assert!((oracle_affinity(&a, &a).unwrap() - 1.0).abs() < 1e-10);
        let d = oracle_trace_distance(&a, &a).unwrap();
        assert!(d < 1e-10, "{d:e}");
        assert!((oracle_helstrom(&a, &a).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn coherent_pair() {
        let p = StateParams::new().with_alpha(Complex64::new(1.0, 0.0));
        let (a, b) = pair(&p, Family::CoherentThermal, 30);
        assert!((oracle_fidelity(&a, &b).unwrap() - (-2f64).exp()).abs() < 1e-6);
        assert!((oracle_affinity(&a, &b).unwrap() - (-2f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn plateau_affinity() {
        let p = StateParams::new().with_ns(1.0).with_thermal(1.0, 1.0);
        let (a, b) = pair(&p, Family::Sts, 88);
        assert!((oracle_affinity(&a, &b).unwrap() - 0.2).abs() < 1e-5);
        for t in [0.1, 0.3] {
            let d = oracle_q_t(&a, &b, t).unwrap() - oracle_q_t(&a, &b, 1.0 - t).unwrap();
            assert!(d.abs() < 1e-8);
        }
    }

    #[test]
    fn agrees_with_gaussian_formulas() {
        let p = StateParams::new().with_r(0.5).with_thermal(1.0, 0.0);
        let (a, b) = pair(&p, Family::Sts, 40);
        let g = Family::Sts.build(&p).unwrap();
        let h = g.apply_local(&phase_shift(FRAC_PI_2));
        assert!((oracle_fidelity(&a, &b).unwrap() - uhlmann_fidelity(&g, &h).unwrap()).abs() < 1e-6);
        assert!((oracle_affinity(&a, &b).unwrap() - affinity(&g, &h).unwrap()).abs() < 1e-6);
        assert!((oracle_q_t(&a, &b, 0.3).unwrap() - q_t(&g, &h, 0.3).unwrap()).abs() < 1e-6);
        let rep = helstrom_bounds(&g, &h, 1).unwrap();
        let pe = oracle_helstrom(&a, &b).unwrap();
        assert!(rep.lbp <= pe && pe <= rep.ubp, "{} {pe} {}", rep.lbp, rep.ubp);
    }

    #[test]
    fn pure_squeezed_vacuum_helstrom() {
        let p = StateParams::new().with_r(0.5);
        let (a, b) = pair(&p, Family::Sts, 30);
        let g = Family::Sts.build(&p).unwrap();
        let h = g.apply_local(&phase_shift(FRAC_PI_2));
        let exact = pure_perr(&g, &h).unwrap();
        assert!((oracle_helstrom(&a, &b).unwrap() - exact).abs() < 1e-6);
        assert!((exact - 0.180439).abs() < 1e-6);
    }

    #[test]
    fn displaced_pairs_use_the_dense_path() {
        let p = StateParams::new().with_r(0.3).with_thermal(0.3, 0.1).with_alpha(Complex64::new(0.6, 0.2));
        let (a, b) = pair(&p, Family::Sdts, 28);
        let g = Family::Sdts.build(&p).unwrap();
        let h = g.apply_local(&phase_shift(FRAC_PI_2));
        assert!((oracle_fidelity(&a, &b).unwrap() - uhlmann_fidelity(&g, &h).unwrap()).abs() < 1e-6);
        assert!((oracle_affinity(&a, &b).unwrap() - affinity(&g, &h).unwrap()).abs() < 1e-6);
        let dense = {
            let diff = a.matrix() - b.matrix();
            let ev = diff.self_adjoint_eigenvalues(Side::Lower).unwrap();
            ev.iter().map(|e| e.abs()).sum::<f64>()
        };
        assert!((oracle_trace_distance(&a, &b).unwrap() - dense).abs() < 1e-9);
    }

    #[test]
    fn cutoff_mismatch() {
        let p = StateParams::new();
        let a = fock_state(&p, Family::Sts, 8).unwrap();
        let b = fock_state(&p, Family::Sts, 10).unwrap();
        assert!(matches!(oracle_fidelity(&a, &b), Err(Error::Contract(_))));
    }
}
