//! Real symplectic matrices on one or two modes.
//!
//! Quadratures are ordered `(x1, p1, x2, p2)` and the symplectic form is the
//! block-diagonal `Ω = J ⊕ J` with `J = [[0, 1], [-1, 0]]`.

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::error::{domain, Error, Result};

const SYMPLECTIC_TOL: f64 = 1e-12;

/// Single-mode symplectic form `J`.
pub fn omega1() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Two-mode symplectic form `J ⊕ J`.
pub fn omega2() -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    m[(2, 3)] = 1.0;
    m[(3, 2)] = -1.0;
    m
}

/// Rotation `F_φ = [[cos φ, sin φ], [-sin φ, cos φ]]`.
pub fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Parameters of the Euler decomposition `R(φ) · diag(ξ, 1/ξ) · R(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerAngles {
    pub theta: f64,
    pub xi: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SympMatrix {
    /// Acts on mode A only.
    Local(Matrix2<f64>),
    TwoMode(Matrix4<f64>),
}

/// A symplectic matrix with its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SympTransform {
    mat: SympMatrix,
    traceless: bool,
    euler: Option<EulerAngles>,
}

impl SympTransform {
    /// Wraps a 2×2 matrix acting on mode A, checking `Sᵀ J S = J`.
    pub fn local(mat: Matrix2<f64>) -> Result<Self> {
        let defect = (mat.transpose() * omega1() * mat - omega1()).amax();
        if defect > SYMPLECTIC_TOL * mat.amax().max(1.0).powi(2) {
            return Err(Error::Contract(format!(
                "local matrix is not symplectic (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            traceless: mat.trace().abs() <= SYMPLECTIC_TOL * mat.amax().max(1.0),
            mat: SympMatrix::Local(mat),
            euler: None,
        })
    }

    /// Wraps a 4×4 matrix, checking `Sᵀ Ω S = Ω`.
    pub fn two_mode(mat: Matrix4<f64>) -> Result<Self> {
        let defect = (mat.transpose() * omega2() * mat - omega2()).amax();
        if defect > 1e-10 * mat.amax().max(1.0).powi(2) {
            return Err(Error::Contract(format!(
                "two-mode matrix is not symplectic (defect {defect:.3e})"
            )));
        }
        let block = mat.fixed_view::<2, 2>(0, 0);
        Ok(Self {
            traceless: block.trace().abs() <= SYMPLECTIC_TOL * mat.amax().max(1.0),
            mat: SympMatrix::TwoMode(mat),
            euler: None,
        })
    }

    pub fn matrix(&self) -> &SympMatrix {
        &self.mat
    }

    /// The transform as a 4×4 matrix (`S ⊕ 𝟙` for local transforms).
    pub fn to_two_mode(&self) -> Matrix4<f64> {
        match &self.mat {
            SympMatrix::Local(s) => {
                let mut m = Matrix4::identity();
                m.fixed_view_mut::<2, 2>(0, 0).copy_from(s);
                m
            }
            SympMatrix::TwoMode(m) => *m,
        }
    }

    pub fn local_matrix(&self) -> Option<&Matrix2<f64>> {
        match &self.mat {
            SympMatrix::Local(s) => Some(s),
            SympMatrix::TwoMode(_) => None,
        }
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    pub fn euler(&self) -> Option<EulerAngles> {
        self.euler
    }

    pub fn inverse(&self) -> Self {
        // S⁻¹ = -Ω Sᵀ Ω for symplectic S
        let mat = match &self.mat {
            SympMatrix::Local(s) => SympMatrix::Local(-omega1() * s.transpose() * omega1()),
            SympMatrix::TwoMode(s) => SympMatrix::TwoMode(-omega2() * s.transpose() * omega2()),
        };
        Self {
            mat,
            traceless: self.traceless,
            euler: None,
        }
    }

    /// Matrix product `self · other`; both must act on the same space.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        match (&self.mat, &other.mat) {
            (SympMatrix::Local(a), SympMatrix::Local(b)) => Self::local(a * b),
            _ => Self::two_mode(self.to_two_mode() * other.to_two_mode()),
        }
    }
}

/// Traceless single-mode transform `R(π/2 − θ) · diag(ξ, 1/ξ) · R(θ)`.
///
/// Every traceless element of Sp(2, ℝ) has this form, and each one is its
/// own negative inverse.
pub fn euler_traceless(theta: f64, xi: f64) -> Result<SympTransform> {
    if !(xi > 0.0) || !xi.is_finite() {
        return domain(format!("squeeze factor xi must be positive, got {xi}"));
    }
    let phi = std::f64::consts::FRAC_PI_2 - theta;
    let mat = rotation(phi) * Matrix2::new(xi, 0.0, 0.0, 1.0 / xi) * rotation(theta);
    let mut s = SympTransform::local(mat)?;
    // the trace vanishes analytically; rounding is the only source of error
    s.traceless = true;
    s.euler = Some(EulerAngles { theta, xi, phi });
    Ok(s)
}

/// Single-mode phase shift `F_φ` on mode A.
pub fn phase_shift(phi: f64) -> SympTransform {
    let mat = rotation(phi);
    SympTransform {
        traceless: mat.trace().abs() <= SYMPLECTIC_TOL,
        mat: SympMatrix::Local(mat),
        euler: Some(EulerAngles {
            theta: phi,
            xi: 1.0,
            phi: 0.0,
        }),
    }
}

/// Two-mode squeezer `S(r) = exp(r(a₁†a₂† − a₁a₂))` acting on quadratures.
pub fn two_mode_squeeze(r: f64) -> Matrix4<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn euler_identity_angles_give_quarter_turn() {
        let s = euler_traceless(0.0, 1.0).unwrap();
        let m = s.local_matrix().unwrap();
        assert!((m - Matrix2::new(0.0, 1.0, -1.0, 0.0)).amax() < 1e-15);
        assert!(s.is_traceless());
    }

    #[test]
    fn euler_rejects_nonpositive_xi() {
        assert!(matches!(euler_traceless(0.3, 0.0), Err(Error::Domain(_))));
        assert!(matches!(euler_traceless(0.3, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_shift_quarter_turn_is_traceless_and_squares_to_minus_one() {
        assert!((phase_shift(0.0).local_matrix().unwrap() - Matrix2::identity()).amax() < 1e-15);
        let f = phase_shift(FRAC_PI_2);
        assert!(f.is_traceless());
        let e = euler_traceless(0.0, 1.0).unwrap();
        assert!((f.local_matrix().unwrap() - e.local_matrix().unwrap()).amax() < 1e-15);
        let ff = f.compose(&f).unwrap();
        assert!((ff.local_matrix().unwrap() + Matrix2::identity()).amax() < 1e-15);
    }

    #[test]
    fn non_symplectic_is_rejected() {
        assert!(matches!(
            SympTransform::local(Matrix2::new(2.0, 0.0, 0.0, 2.0)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn two_mode_squeeze_is_symplectic() {
        assert!(SympTransform::two_mode(two_mode_squeeze(0.7)).is_ok());
    }

    #[test]
    fn inverse_undoes() {
        let s = euler_traceless(0.4, 2.5).unwrap();
        let p = s.compose(&s.inverse()).unwrap();
        assert!((p.local_matrix().unwrap() - Matrix2::identity()).amax() < 1e-12);
    }
}
