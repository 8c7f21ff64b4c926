//! `Q_t = tr ρ₁ᵗ ρ₂¹⁻ᵗ` for Gaussian states and the quantum Chernoff bound.

use nalgebra::{Matrix2, Matrix4, Vector4};

use super::fidelity::fidelity_invariants;
use crate::error::{domain, Error, Result};
use crate::gaussian::{williamson, Convention, GaussianState, SympTransform};
use crate::optimize::golden_section;

/// Endpoints of the Chernoff search interval.
pub const T_MIN: f64 = 1e-6;
pub const T_MAX: f64 = 1.0 - 1e-6;
/// Absolute tolerance on the Chernoff minimizer.
pub const T_TOL: f64 = 1e-12;

/// Symplectic eigenvalues closer than this to the vacuum value are treated
/// as pure modes.
const PURE_MODE_TOL: f64 = 1e-12;

/// `G_p(x) = 2ᵖ / ((x+1)ᵖ − (x−1)ᵖ)` for a symplectic eigenvalue `x ≥ 1`.
pub fn g_p(p: f64, x: f64) -> f64 {
    if x - 1.0 < PURE_MODE_TOL {
        return 1.0;
    }
    2f64.powf(p) / ((x + 1.0).powf(p) - (x - 1.0).powf(p))
}

/// `Λ_p(x) = ((x+1)ᵖ + (x−1)ᵖ) / ((x+1)ᵖ − (x−1)ᵖ)`.
pub fn lambda_p(p: f64, x: f64) -> f64 {
    if x - 1.0 < PURE_MODE_TOL {
        return 1.0;
    }
    let (u, v) = ((x + 1.0).powf(p), (x - 1.0).powf(p));
    (u + v) / (u - v)
}

/// Every intermediate quantity of the fidelity and `Q_t` formulas for one
/// pair of states and one `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffAux {
    pub delta_big: f64,
    pub gamma_big: f64,
    pub lambda_big: f64,
    /// `Πₖ G_t(αₖ) · Πₖ G_{1−t}(βₖ)`
    pub g_p: f64,
    /// `[Λ_t(α₁), Λ_t(α₂), Λ_{1−t}(β₁), Λ_{1−t}(β₂)]`
    pub lambda_p: [f64; 4],
    pub v1: Matrix4<f64>,
    pub v2: Matrix4<f64>,
    /// `Q̄_t`, the displacement-free part of `Q_t`.
    pub q_bar: f64,
    /// `Q_t` including the displacement factor.
    pub q_t: f64,
}

/// Normal-mode data of one state in `VacuumOne` units.
#[derive(Debug, Clone)]
pub(crate) struct NormalModes {
    s: Matrix4<f64>,
    nu: [f64; 2],
    disp: Vector4<f64>,
}

impl NormalModes {
    /// Normal modes of `M σ Mᵀ` for a symplectic `M` given in `VacuumOne` units.
    pub(crate) fn transformed(&self, m: &Matrix4<f64>) -> NormalModes {
        NormalModes {
            s: m * self.s,
            nu: self.nu,
            disp: m * self.disp,
        }
    }
}

pub(crate) fn normal_modes(state: &GaussianState) -> Result<NormalModes> {
    let one = state.to_convention(Convention::VacuumOne);
    let (s, nu) = williamson(&one)?;
    Ok(NormalModes {
        s: s.to_two_mode(),
        nu,
        disp: *one.disp(),
    })
}

fn v_matrix(m: &NormalModes, p: f64) -> (Matrix4<f64>, [f64; 2]) {
    let l = [lambda_p(p, m.nu[0]), lambda_p(p, m.nu[1])];
    let d = Matrix4::from_diagonal(&Vector4::new(l[0], l[0], l[1], l[1]));
    let v = m.s * d * m.s.transpose();
    ((v + v.transpose()) * 0.5, l)
}

fn q_t_from_modes(m1: &NormalModes, m2: &NormalModes, t: f64) -> Result<(f64, Matrix4<f64>, Matrix4<f64>, [f64; 4], f64, f64)> {
    let (v1, l1) = v_matrix(m1, t);
    let (v2, l2) = v_matrix(m2, 1.0 - t);
    let sum = v1 + v2;
    let det = sum.determinant();
    if !(det > 0.0) {
        return Err(Error::Numeric(format!(
            "V1(t) + V2(1-t) is singular at t = {t} (det = {det:.3e})"
        )));
    }
    let g = g_p(t, m1.nu[0]) * g_p(t, m1.nu[1]) * g_p(1.0 - t, m2.nu[0]) * g_p(1.0 - t, m2.nu[1]);
    let q_bar = 4.0 * g / det.sqrt();
    let inv = sum
        .try_inverse()
        .ok_or_else(|| Error::Numeric("V1(t) + V2(1-t) is not invertible".into()))?;
    let d = m1.disp - m2.disp;
    let exponent = -0.5 * (d.transpose() * inv * d)[(0, 0)];
    Ok((q_bar * exponent.exp(), v1, v2, [l1[0], l1[1], l2[0], l2[1]], g, q_bar))
}

/// `Q_t` from precomputed normal modes.
pub(crate) fn q_t_modes(m1: &NormalModes, m2: &NormalModes, t: f64) -> Result<f64> {
    Ok(q_t_from_modes(m1, m2, t)?.0.clamp(0.0, 1.0))
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    Ok(())
}

/// `Q_t = tr ρ₁ᵗ ρ₂¹⁻ᵗ` for `0 < t < 1`.
pub fn q_t(s1: &GaussianState, s2: &GaussianState, t: f64) -> Result<f64> {
    check_t(t)?;
    let (m1, m2) = (normal_modes(s1)?, normal_modes(s2)?);
    Ok(q_t_from_modes(&m1, &m2, t)?.0.clamp(0.0, 1.0))
}

/// All auxiliary quantities at a given `t`.
pub fn chernoff_aux(s1: &GaussianState, s2: &GaussianState, t: f64) -> Result<ChernoffAux> {
    check_t(t)?;
    let (m1, m2) = (normal_modes(s1)?, normal_modes(s2)?);
    let (q, v1, v2, lambda_p, g_p, q_bar) = q_t_from_modes(&m1, &m2, t)?;
    let inv = fidelity_invariants(s1, s2);
    Ok(ChernoffAux {
        delta_big: inv.delta,
        gamma_big: inv.gamma,
        lambda_big: inv.lambda,
        g_p,
        lambda_p,
        v1,
        v2,
        q_bar,
        q_t: q,
    })
}

/// Quantum Bhattacharyya coefficient `tr √ρ₁ √ρ₂ = Q_{1/2}`.
pub fn affinity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    q_t(s1, s2, 0.5)
}

/// If `s2 = (S ⊕ 𝟙) s1 (S ⊕ 𝟙)ᵀ` with `s1` undisplaced in standard form
/// (`c1 = -c2 ≠ 0`) and `S` traceless symplectic, returns `S`.
///
/// For such pairs `Q_t` is symmetric under `t ↔ 1 − t`, so its minimum sits
/// at `t = 1/2`.
pub fn traceless_relation(s1: &GaussianState, s2: &GaussianState) -> Option<Matrix2<f64>> {
    const TOL: f64 = 1e-10;
    let (a, _b, c) = s1.standard_form_entries(TOL)?;
    if s2.is_displaced() || c.abs() <= TOL * a {
        return None;
    }
    let two = s2.to_convention(Convention::VacuumOne);
    let c1_inv = Matrix2::new(1.0 / c, 0.0, 0.0, -1.0 / c);
    let s = two.cross_block() * c1_inv;
    let scale = s.amax().max(1.0);
    if (s.determinant() - 1.0).abs() > TOL * scale * scale || s.trace().abs() > TOL * scale {
        return None;
    }
    let st = SympTransform::local(s).ok()?;
    let one = s1.to_convention(Convention::VacuumOne);
    let mapped = one.apply_local(&st);
    let err = (mapped.cov() - two.cov()).amax();
    (err <= TOL * two.cov().amax().max(1.0)).then_some(s)
}

/// Single-copy Chernoff data: `inf_t Q_t` and its minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffMin {
    pub q_min: f64,
    pub t_star: f64,
    /// `true` when the symmetric shortcut `t = 1/2` was used.
    pub symmetric: bool,
}

/// Minimizes `Q_t` over `t ∈ [T_MIN, T_MAX]`.
pub fn chernoff_min(s1: &GaussianState, s2: &GaussianState) -> Result<ChernoffMin> {
    let (m1, m2) = (normal_modes(s1)?, normal_modes(s2)?);
    let symmetric = traceless_relation(s1, s2).is_some() || traceless_relation(s2, s1).is_some();
    if symmetric {
        let q = q_t_from_modes(&m1, &m2, 0.5)?.0;
        return Ok(ChernoffMin {
            q_min: q.clamp(0.0, 1.0),
            t_star: 0.5,
            symmetric,
        });
    }
    let mut failure: Option<Error> = None;
    let (t_star, q_min) = golden_section(
        |t| match q_t_from_modes(&m1, &m2, t) {
            Ok(v) => v.0,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        T_MIN,
        T_MAX,
        T_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ChernoffMin {
        q_min: q_min.clamp(0.0, 1.0),
        t_star,
        symmetric,
    })
}

/// Quantum Chernoff bound `½ (inf_t Q_t)ⁿ` for `copies` copies, together
/// with the minimizing `t`.
pub fn qcb(s1: &GaussianState, s2: &GaussianState, copies: u32) -> Result<(f64, f64)> {
    if copies == 0 {
        return domain("copies must be at least 1");
    }
    let m = chernoff_min(s1, s2)?;
    Ok((0.5 * m.q_min.powi(copies as i32), m.t_star))
}
