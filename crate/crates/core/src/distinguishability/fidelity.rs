use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::gaussian::{omega2, Convention, GaussianState};

/// Determinant invariants entering the two-mode fidelity formula
/// (all with covariances in `VacuumHalf` units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityInvariants {
    /// `det(σ₁ + σ₂)`
    pub delta: f64,
    /// `2⁴ det(Ωσ₁Ωσ₂ − 𝟙/4)`
    pub gamma: f64,
    /// `2⁴ det(σ₁ + iΩ/2) det(σ₂ + iΩ/2)`
    pub lambda: f64,
}

pub(crate) fn fidelity_invariants(s1: &GaussianState, s2: &GaussianState) -> FidelityInvariants {
    let h1 = s1.to_convention(Convention::VacuumHalf);
    let h2 = s2.to_convention(Convention::VacuumHalf);
    let omega = omega2();
    let delta = (h1.cov() + h2.cov()).determinant();
    let gamma = 16.0 * (omega * h1.cov() * omega * h2.cov() - Matrix4::identity() * 0.25).determinant();
    // det(σ + iΩ/2) = Π (νₖ² − 1/4)
    let herm_det = |s: &GaussianState| {
        s.symplectic_spectrum()
            .iter()
            .map(|nu| (nu * nu - 0.25).max(0.0))
            .product::<f64>()
    };
    let lambda = 16.0 * herm_det(&h1) * herm_det(&h2);
    FidelityInvariants {
        delta,
        gamma: gamma.max(0.0),
        lambda,
    }
}

/// Uhlmann fidelity `(tr √(√ρ₁ ρ₂ √ρ₁))²` of two two-mode Gaussian states.
pub fn uhlmann_fidelity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    s1.require_physical()?;
    s2.require_physical()?;
    fidelity_unchecked(s1, s2)
}

/// [`uhlmann_fidelity`] without the physicality checks, for states known to
/// be physical by construction (symplectic images of a checked state).
pub(crate) fn fidelity_unchecked(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    let h1 = s1.to_convention(Convention::VacuumHalf);
    let h2 = s2.to_convention(Convention::VacuumHalf);
    let inv = fidelity_invariants(&h1, &h2);
    if !(inv.delta > 0.0) {
        return Err(Error::Numeric(format!(
            "singular covariance sum (det = {:.3e})",
            inv.delta
        )));
    }
    let sum = h1.cov() + h2.cov();
    let sum_inv = sum
        .try_inverse()
        .ok_or_else(|| Error::Numeric("singular covariance sum".into()))?;
    let delta_u = h1.disp() - h2.disp();
    let exponent = -0.5 * (delta_u.transpose() * sum_inv * delta_u)[(0, 0)];

    let s = inv.gamma.sqrt() + inv.lambda.sqrt();
    // [s − √(s² − Δ)]⁻¹ rationalized to avoid cancellation near F = 1
    let root = (s * s - inv.delta).max(0.0).sqrt();
    let prefactor = (s + root) / inv.delta;
    Ok((prefactor * exponent.exp()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_coherent_thermal, make_sts, make_tss, phase_shift};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn self_fidelity_is_one() {
        for s in [
            make_sts(0.7, 1.0, 0.2).unwrap(),
            make_tss(0.4, 0.0, 3.0).unwrap(),
            make_coherent_thermal(Complex64::new(1.0, 0.5), 2.0, 0.0).unwrap(),
            GaussianState::vacuum(Convention::VacuumOne),
        ] {
            assert!((uhlmann_fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_thermal_quarter_turn() {
        let f = phase_shift(FRAC_PI_2);
        for &(alpha, n1) in &[(1.0, 0.0), (0.7, 1.5), (1.3, 0.25)] {
            let s = make_coherent_thermal(Complex64::new(alpha, 0.0), n1, 0.4).unwrap();
            let fid = uhlmann_fidelity(&s, &s.apply_local(&f)).unwrap();
            let expected = (-2.0 * alpha * alpha / (1.0 + 2.0 * n1)).exp();
            assert!((fid - expected).abs() < 1e-12, "{fid} vs {expected}");
        }
        let s = make_coherent_thermal(Complex64::new(1.0, 0.0), 0.0, 0.0).unwrap();
        let fid = uhlmann_fidelity(&s, &s.apply_local(&f)).unwrap();
        assert!((fid - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn tmsv_quarter_turn() {
        let s = make_sts(0.5, 0.0, 0.0).unwrap();
        let fid = uhlmann_fidelity(&s, &s.apply_local(&phase_shift(FRAC_PI_2))).unwrap();
        let expected = 2.0 / (1.0 + 1f64.cosh().powi(2));
        assert!((fid - expected).abs() < 1e-12);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = make_sts(0.4, 1.0, 0.3).unwrap();
        let b = make_tss(0.7, 0.2, 0.9).unwrap();
        let fab = uhlmann_fidelity(&a, &b).unwrap();
        let fba = uhlmann_fidelity(&b, &a).unwrap();
        assert!((fab - fba).abs() < 1e-12);
        assert!(fab > 0.0 && fab < 1.0);
    }
}
