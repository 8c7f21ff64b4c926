//! Construction of family states on the truncated basis.
//!
//! Every family is written as `D(α₁) ⊗ D(α₂) · S₂(r) · (ρ_th(m₁) ⊗ ρ_th(m₂))
//! · S₂(r)† · D†`, optionally followed by a local unitary on mode 1. The
//! unitary families map directly; the two families that add thermal noise
//! after squeezing are rewritten with the equivalent thermal occupations and
//! squeezing of their standard-form covariance.

use faer::{c64, Mat};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ops::{displacement, euler_local, sector_propagator};
use super::{Block, FockOperator, EIGEN_FLOOR, TAIL_TOLERANCE};
use crate::error::{domain, Error, Result};
use crate::gaussian::{Family, GaussianState, StateParams};

/// Thermal weights below this are skipped.
const WEIGHT_FLOOR: f64 = 1e-36;
/// Tail probability used by [`suggest_cutoff`].
const SUGGEST_TAIL: f64 = 1e-8;
/// Smallest accepted cutoff.
pub const MIN_CUTOFF: usize = 8;

/// Thermal occupations, two-mode squeezing and displacement of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockRecipe {
    pub m1: f64,
    pub m2: f64,
    pub r: f64,
    pub alpha: [Complex64; 2],
}

impl FockRecipe {
    pub fn new(params: &StateParams, family: Family) -> Result<FockRecipe> {
        let zero = Complex64::new(0.0, 0.0);
        let p = params;
        Ok(match family {
            Family::Sts => FockRecipe {
                m1: p.n_th1,
                m2: p.n_th2,
                r: p.r,
                alpha: [zero, zero],
            },
            Family::CoherentThermal => FockRecipe {
                m1: p.n_th1,
                m2: p.n_th2,
                r: 0.0,
                alpha: [p.alpha, zero],
            },
            // S₂(r) D₁(α) = D₁(α cosh r) D₂(α* sinh r) S₂(r)
            Family::Sdts => FockRecipe {
                m1: p.n_th1,
                m2: p.n_th2,
                r: p.r,
                alpha: [p.alpha * p.r.cosh(), p.alpha.conj() * p.r.sinh()],
            },
            Family::Tss | Family::Stsds => Self::from_state(&family.build(p)?)?,
        })
    }

    /// Squeezed thermal representation of a state whose covariance is in
    /// standard form with `c₁ = −c₂`:
    /// `a ± b = 2(1 + m₁ + m₂) cosh 2r ± 2(m₁ − m₂)`, `c = (1 + m₁ + m₂) sinh 2r`.
    pub fn from_state(state: &GaussianState) -> Result<FockRecipe> {
        let one = state.to_convention(crate::gaussian::Convention::VacuumOne);
        let centered = GaussianState::new(nalgebra::Vector4::zeros(), *one.cov(), one.convention())?;
        let (a, b, c) = centered
            .standard_form_entries(1e-9)
            .ok_or_else(|| Error::Domain("state is not in standard form".into()))?;
        let mean = 0.5 * (a + b);
        let big = (mean * mean - c * c).max(0.0).sqrt();
        let r = 0.5 * (c / mean).atanh();
        let half_diff = 0.5 * (a - b);
        let clamp = |m: f64| if m < 0.0 && m > -1e-9 { 0.0 } else { m };
        let m1 = clamp(0.5 * (big - 1.0 + half_diff));
        let m2 = clamp(0.5 * (big - 1.0 - half_diff));
        if m1 < 0.0 || m2 < 0.0 {
            return domain(format!("no thermal representation (m1 = {m1}, m2 = {m2})"));
        }
        let d = one.disp();
        Ok(FockRecipe {
            m1,
            m2,
            r,
            alpha: [
                Complex64::new(d[0], d[1]) * 0.5,
                Complex64::new(d[2], d[3]) * 0.5,
            ],
        })
    }

    /// Extra levels kept beyond the cutoff while applying the unitaries.
    fn padding(&self, local_xi: Option<f64>) -> usize {
        let amax = self.alpha[0].norm().max(self.alpha[1].norm());
        let mut pad = 16.0 + 24.0 * self.r.abs() + 8.0 * amax + 2.0 * amax * amax;
        if let Some(xi) = local_xi {
            pad += 24.0 * xi.ln().abs();
        }
        pad.ceil() as usize
    }
}

fn thermal_weights(m: f64, p: usize) -> Vec<f64> {
    if m <= 0.0 {
        let mut w = vec![0.0; p];
        w[0] = 1.0;
        return w;
    }
    let q = m / (1.0 + m);
    (0..p).map(|n| (1.0 - q) * q.powi(n as i32)).collect()
}

fn to_faer(m: &DMatrix<Complex64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Spectral blocks of `B B†` for a factor `B` over `support`, from the
/// singular values of `B` so that small eigenvalues keep their relative
/// accuracy.
fn spectral_block(support: Vec<usize>, factor: &Mat<c64>) -> Result<Option<Block>> {
    let s = factor.nrows();
    if s == 0 || factor.ncols() == 0 {
        return Ok(None);
    }
    let svd = factor
        .thin_svd()
        .map_err(|e| Error::Numeric(format!("singular value decomposition failed: {e:?}")))?;
    let u = svd.U();
    let lam: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re * z.re).collect();
    let keep: Vec<usize> = (0..lam.len()).filter(|&i| lam[i] > EIGEN_FLOOR).collect();
    if keep.is_empty() {
        return Ok(None);
    }
    Ok(Some(Block {
        support,
        vals: keep.iter().map(|&i| lam[i]).collect(),
        vecs: Mat::from_fn(s, keep.len(), |r, c| u[(r, keep[c])]),
    }))
}

/// Cached pieces of a state construction that do not depend on the local
/// unitary applied afterwards.
pub(crate) struct Builder {
    cutoff: usize,
    padded: usize,
    recipe: FockRecipe,
    /// Per sector `d = n₁ − n₂`: the evolved thermal kets `√w · S₂|j, k⟩`
    /// as columns in the sector basis.
    sectors: Vec<(i64, DMatrix<f64>)>,
    displace: [DMatrix<Complex64>; 2],
    /// Thermal weights of each mode on the padded basis.
    weights: [Vec<f64>; 2],
    /// States losing more than this to truncation are rejected before the
    /// decomposition.
    tail_limit: Option<f64>,
}

impl Builder {
    pub(crate) fn new(recipe: FockRecipe, cutoff: usize, local_xi_max: Option<f64>) -> Result<Builder> {
        if cutoff < MIN_CUTOFF {
            return domain(format!("cutoff must be at least {MIN_CUTOFF}, got {cutoff}"));
        }
        if !(recipe.m1 >= 0.0 && recipe.m2 >= 0.0 && recipe.r.is_finite()) {
            return domain(format!("invalid state recipe {recipe:?}"));
        }
        let p = cutoff + recipe.padding(local_xi_max);
        let w1 = thermal_weights(recipe.m1, p);
        let w2 = thermal_weights(recipe.m2, p);
        let mut sectors = Vec::new();
        for d in -(p as i64 - 1)..=(p as i64 - 1) {
            let ad = d.unsigned_abs() as usize;
            let n = p - ad;
            let idx = |m: usize| if d >= 0 { (ad + m, m) } else { (m, ad + m) };
            let kets: Vec<(usize, f64)> = (0..n)
                .map(|m| {
                    let (j, k) = idx(m);
                    (m, w1[j] * w2[k])
                })
                .filter(|&(_, w)| w >= WEIGHT_FLOOR)
                .collect();
            if kets.is_empty() {
                continue;
            }
            // without displacement or local unitary only the sector's
            // low block survives the truncation
            if recipe.alpha == [Complex64::new(0.0, 0.0); 2] && local_xi_max.is_none() && ad >= cutoff {
                continue;
            }
            let prop = sector_propagator(recipe.r, ad, n);
            let mut v = DMatrix::zeros(n, kets.len());
            for (c, &(m0, w)) in kets.iter().enumerate() {
                v.set_column(c, &(prop.column(m0) * w.sqrt()));
            }
            sectors.push((d, v));
        }
        let displace = [displacement(recipe.alpha[0], p), displacement(recipe.alpha[1], p)];
        Ok(Builder {
            cutoff,
            padded: p,
            recipe,
            sectors,
            displace,
            weights: [w1, w2],
            tail_limit: None,
        })
    }

    pub(crate) fn with_tail_limit(mut self, limit: f64) -> Builder {
        self.tail_limit = Some(limit);
        self
    }

    fn check_limit(&self, trace: f64) -> Result<()> {
        let tail = (1.0 - trace).max(0.0);
        match self.tail_limit {
            Some(limit) if tail > limit => Err(Error::Truncation {
                tail_mass: tail,
                cutoff: self.cutoff,
                suggested_cutoff: self.cutoff + 8,
            }),
            _ => Ok(()),
        }
    }

    /// Builds the state, optionally followed by `euler_local(θ, ξ)` on mode 1.
    pub(crate) fn build(&self, local: Option<(f64, f64)>) -> Result<FockOperator> {
        let c = self.cutoff;
        let zero = Complex64::new(0.0, 0.0);
        if self.recipe.alpha == [zero; 2] && local.is_none() {
            return self.build_sectored();
        }
        let p = self.padded;
        let mut m1 = self.displace[0].clone();
        if let Some((theta, xi)) = local {
            if !(xi > 0.0) {
                return domain(format!("xi must be positive, got {xi}"));
            }
            m1 = euler_local(theta, xi, p) * m1;
        }
        let m1 = to_faer(&m1.rows(0, c).into_owned());
        if self.recipe.r == 0.0 && self.recipe.alpha[1] == zero {
            return self.build_product(&m1);
        }
        let m2 = to_faer(&self.displace[1].rows(0, c).into_owned());

        let total: usize = self.sectors.iter().map(|(_, v)| v.ncols()).sum();
        let mut factor = Mat::<c64>::zeros(c * c, total);
        let mut col = 0;
        for (d, v) in &self.sectors {
            let ad = d.unsigned_abs() as usize;
            let n = v.nrows();
            let idx = |m: usize| if *d >= 0 { (ad + m, m) } else { (m, ad + m) };
            // column m of the Khatri–Rao product maps |j_m, k_m⟩ to the
            // truncated two-mode space
            let kr = Mat::<c64>::from_fn(c * c, n, |row, m| {
                let (jm, km) = idx(m);
                m1[(row / c, jm)] * m2[(row % c, km)]
            });
            let vf = Mat::<c64>::from_fn(n, v.ncols(), |i, j| c64::new(v[(i, j)], 0.0));
            let kets = &kr * &vf;
            for j in 0..kets.ncols() {
                for i in 0..c * c {
                    factor[(i, col)] = kets[(i, j)];
                }
                col += 1;
            }
        }
        self.check_limit(factor.squared_norm_l2())?;
        let support: Vec<usize> = (0..c * c).collect();
        let blocks = spectral_block(support, &factor)?.into_iter().collect();
        Ok(FockOperator::new(c, blocks))
    }

    /// Uncorrelated modes with mode 2 thermal: `ρ₁ ⊗ Σ w_k |k⟩⟨k|`, one block
    /// per mode-2 number state.
    fn build_product(&self, m1: &Mat<c64>) -> Result<FockOperator> {
        let c = self.cutoff;
        let w1 = &self.weights[0];
        let kets: Vec<usize> = (0..self.padded).filter(|&j| w1[j] >= WEIGHT_FLOOR).collect();
        let factor = Mat::<c64>::from_fn(c, kets.len(), |i, n| m1[(i, kets[n])] * w1[kets[n]].sqrt());
        let w2 = &self.weights[1][..c];
        self.check_limit(factor.squared_norm_l2() * w2.iter().sum::<f64>())?;
        let Some(single) = spectral_block((0..c).collect(), &factor)? else {
            return Ok(FockOperator::new(c, Vec::new()));
        };
        let mut blocks = Vec::new();
        for (k, &w) in w2.iter().enumerate() {
            let keep: Vec<usize> = (0..single.vals.len()).filter(|&a| single.vals[a] * w > EIGEN_FLOOR).collect();
            if keep.is_empty() {
                continue;
            }
            blocks.push(Block {
                support: (0..c).map(|j| j * c + k).collect(),
                vals: keep.iter().map(|&a| single.vals[a] * w).collect(),
                vecs: Mat::from_fn(c, keep.len(), |i, n| single.vecs[(i, keep[n])]),
            });
        }
        Ok(FockOperator::new(c, blocks))
    }

    fn build_sectored(&self) -> Result<FockOperator> {
        let c = self.cutoff;
        let mut blocks = Vec::new();
        for (d, v) in &self.sectors {
            let ad = d.unsigned_abs() as usize;
            if ad >= c {
                continue;
            }
            let rows = c - ad;
            let support: Vec<usize> = (0..rows)
                .map(|m| if *d >= 0 { (ad + m) * c + m } else { m * c + ad + m })
                .collect();
            let factor = Mat::<c64>::from_fn(rows, v.ncols(), |i, j| c64::new(v[(i, j)], 0.0));
            if let Some(b) = spectral_block(support, &factor)? {
                blocks.push(b);
            }
        }
        Ok(FockOperator::new(c, blocks))
    }
}

/// Smallest multiple of 8 (at least [`MIN_CUTOFF`]) at which a geometric
/// photon distribution with the state's largest mode occupation leaves less
/// than `1e-8` beyond the cutoff.
pub fn suggest_cutoff(state: &GaussianState) -> usize {
    let nbar = state.mode_photons(0).max(state.mode_photons(1));
    if !(nbar > 0.0) {
        return MIN_CUTOFF;
    }
    let q = nbar / (nbar + 1.0);
    let c = (SUGGEST_TAIL.ln() / q.ln()).ceil().max(MIN_CUTOFF as f64) as usize;
    c.div_ceil(8) * 8
}

/// Builds a family state without checking the truncation tail.
pub fn build_fock_state(params: &StateParams, family: Family, cutoff: usize) -> Result<FockOperator> {
    Builder::new(FockRecipe::new(params, family)?, cutoff, None)?.build(None)
}

/// Density matrix of a family state, failing with [`Error::Truncation`] when
/// more than `max_tail` of the probability lies beyond the cutoff. Dense
/// states are rejected before they are decomposed.
pub fn fock_state_within(params: &StateParams, family: Family, cutoff: usize, max_tail: f64) -> Result<FockOperator> {
    let builder = Builder::new(FockRecipe::new(params, family)?, cutoff, None)?.with_tail_limit(max_tail);
    let suggest = |op_cutoff: usize| {
        family
            .build(params)
            .map(|s| suggest_cutoff(&s))
            .unwrap_or(op_cutoff * 2)
            .max(op_cutoff + 8)
    };
    match builder.build(None) {
        Ok(op) if op.tail_mass() > max_tail => Err(Error::Truncation {
            tail_mass: op.tail_mass(),
            cutoff,
            suggested_cutoff: suggest(cutoff),
        }),
        Ok(op) => Ok(op),
        Err(Error::Truncation { tail_mass, .. }) => Err(Error::Truncation {
            tail_mass,
            cutoff,
            suggested_cutoff: suggest(cutoff),
        }),
        Err(e) => Err(e),
    }
}

pub(crate) fn check_tail_state(op: FockOperator, state: &GaussianState) -> Result<FockOperator> {
    if op.tail_mass() > TAIL_TOLERANCE {
        return Err(Error::Truncation {
            tail_mass: op.tail_mass(),
            cutoff: op.cutoff(),
            suggested_cutoff: suggest_cutoff(state).max(op.cutoff() + 8),
        });
    }
    Ok(op)
}

/// Density matrix of a family state at the given cutoff.
///
/// Fails with [`Error::Truncation`] when more than `1e-6` of the probability
/// lies beyond the cutoff.
pub fn fock_state(params: &StateParams, family: Family, cutoff: usize) -> Result<FockOperator> {
    fock_state_within(params, family, cutoff, TAIL_TOLERANCE)
}

/// Family state followed by `euler_traceless(θ, ξ)` on mode 1.
pub fn fock_state_local(
    params: &StateParams,
    family: Family,
    cutoff: usize,
    theta: f64,
    xi: f64,
) -> Result<FockOperator> {
    let op = Builder::new(FockRecipe::new(params, family)?, cutoff, Some(xi))?.build(Some((theta, xi)))?;
    let state = family.build(params)?;
    check_tail_state(op, &state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::phase_shift;
    use std::f64::consts::FRAC_PI_2;

    fn params(r: f64, n1: f64, n2: f64, alpha: f64) -> StateParams {
        StateParams::new()
            .with_r(r)
            .with_thermal(n1, n2)
            .with_alpha(Complex64::new(alpha, 0.3 * alpha))
    }

    #[test]
    fn vacuum_is_a_single_projector() {
        let op = fock_state(&StateParams::new(), Family::Sts, 8).unwrap();
        let ev = op.eigenvalues();
        assert_eq!(ev.len(), 1);
        assert!((ev[0] - 1.0).abs() < 1e-14);
        let m = op.matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tmsv_diagonal_weights() {
        let r = 0.5f64;
        let op = fock_state(&params(r, 0.0, 0.0, 0.0), Family::Sts, 20).unwrap();
        let m = op.matrix();
        for j in 0..10 {
            let expected = r.tanh().powi(2 * j as i32) / r.cosh().powi(2);
            assert!((m[(j * 21, j * 21)].re - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn moments_match_covariances() {
        // moments carry the truncation error weighted by photon number, so
        // raise the cutoff until the lost mass is negligible
        for fam in Family::ALL {
            for &(r, n1, n2, a) in &[(0.5, 1.0, 0.0, 0.0), (0.4, 0.5, 0.2, 0.6), (0.3, 0.3, 0.0, 1.0)] {
                let p = params(r, n1, n2, a).with_r_prime(0.2);
                let g = fam.build(&p).unwrap();
                let Some(op) = (40..=64)
                    .step_by(8)
                    .map(|c| build_fock_state(&p, fam, c).unwrap())
                    .find(|op| op.tail_mass() < 1e-11)
                else {
                    panic!("{fam:?} {r} {n1} {n2} {a}: no cutoff reached the tail target");
                };
                let (d, c) = op.moments();
                let dc = (c - g.cov()).amax();
                let dd = (d - g.disp()).amax();
                assert!(dc < 1e-8 && dd < 1e-8, "{fam:?} {r} {n1} {n2} {a}: {dc:e} {dd:e}");
            }
        }
    }

    #[test]
    fn phase_shift_moves_the_covariance() {
        let p = params(0.6, 0.5, 0.0, 0.8);
        let op = fock_state(&p, Family::Sdts, 64).unwrap().phase_shifted(FRAC_PI_2);
        let g = Family::Sdts.build(&p).unwrap().apply_local(&phase_shift(FRAC_PI_2));
        let (d, c) = op.moments();
        assert!((c - g.cov()).amax() < 1e-8 && (d - g.disp()).amax() < 1e-8);
    }

    #[test]
    fn local_unitary_matches_symplectic() {
        let p = params(0.4, 0.3, 0.0, 0.0);
        let op = fock_state_local(&p, Family::Sts, 56, 0.7, 1.6).unwrap();
        let g = Family::Sts
            .build(&p)
            .unwrap()
            .apply_local(&crate::gaussian::euler_traceless(0.7, 1.6).unwrap());
        let (d, c) = op.moments();
        assert!((c - g.cov()).amax() < 1e-8 && d.amax() < 1e-10);
    }

    #[test]
    fn truncation_is_reported() {
        let p = params(1.0, 2.0, 2.0, 0.0);
        match fock_state(&p, Family::Sts, 16) {
            Err(Error::Truncation { suggested_cutoff, cutoff, tail_mass }) => {
                assert_eq!(cutoff, 16);
                assert!(tail_mass > 1e-6 && suggested_cutoff > 16 && suggested_cutoff % 8 == 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(fock_state(&p, Family::Sts, 4).is_err());
    }

    #[test]
    fn trace_normalization() {
        for fam in Family::ALL {
            let p = params(0.5, 0.5, 0.5, 0.5).with_r_prime(0.1);
            let op = fock_state(&p, fam, 40).unwrap();
            assert!(op.trace() >= 1.0 - 1e-6 && op.trace() <= 1.0 + 1e-10, "{fam:?}");
        }
    }
}
