//! Two-mode Gaussian states, state families and symplectic algebra.

mod families;
mod symplectic;
mod williamson;

pub use families::{
    make_coherent_thermal, make_sdts, make_sts, make_stsds, make_tss, Family, StateParams,
};
pub use symplectic::{
    euler_traceless, omega1, omega2, phase_shift, rotation, two_mode_squeeze, EulerAngles,
    SympMatrix, SympTransform,
};
pub use williamson::williamson;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Scaling convention of the covariance matrix.
///
/// `VacuumHalf` uses quadratures `x = (a + a†)/√2` so the vacuum covariance
/// is `𝟙/2`; `VacuumOne` uses `x = a + a†` so the vacuum covariance is `𝟙`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    VacuumHalf,
    VacuumOne,
}

impl Convention {
    /// Vacuum variance `ν_vac` of a single quadrature.
    pub fn vacuum(self) -> f64 {
        match self {
            Convention::VacuumHalf => 0.5,
            Convention::VacuumOne => 1.0,
        }
    }

    /// Mean quadratures `(⟨x⟩, ⟨p⟩)` of a coherent amplitude.
    pub fn coherent_mean(self, alpha: Complex64) -> (f64, f64) {
        let k = 2.0 * self.vacuum().sqrt();
        (k * alpha.re, k * alpha.im)
    }
}

const SYMMETRY_TOL: f64 = 1e-12;
pub(crate) const PHYSICAL_TOL: f64 = 1e-9;

/// Displacement vector, covariance matrix and the convention they are
/// expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    disp: Vector4<f64>,
    cov: Matrix4<f64>,
    convention: Convention,
}

impl GaussianState {
    /// Builds a state; `cov` must be symmetric. Physicality is not checked
    /// here, see [`GaussianState::is_physical`].
    pub fn new(disp: Vector4<f64>, cov: Matrix4<f64>, convention: Convention) -> Result<Self> {
        let scale = cov.amax().max(1.0);
        let asym = (cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Contract(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        if !cov.iter().chain(disp.iter()).all(|x| x.is_finite()) {
            return Err(Error::Contract("non-finite entries in state".into()));
        }
        // symmetrize exactly so downstream eigen-solvers see a symmetric input
        let cov = (cov + cov.transpose()) * 0.5;
        Ok(Self {
            disp,
            cov,
            convention,
        })
    }

    pub fn vacuum(convention: Convention) -> Self {
        Self {
            disp: Vector4::zeros(),
            cov: Matrix4::identity() * convention.vacuum(),
            convention,
        }
    }

    /// Undisplaced standard form `[[a𝟙, diag(c1, c2)], [diag(c1, c2), b𝟙]]`
    /// in `VacuumOne` units.
    pub fn standard_form(a: f64, b: f64, c1: f64, c2: f64) -> Result<Self> {
        let cov = Matrix4::new(
            a, 0.0, c1, 0.0, //
            0.0, a, 0.0, c2, //
            c1, 0.0, b, 0.0, //
            0.0, c2, 0.0, b,
        );
        Self::new(Vector4::zeros(), cov, Convention::VacuumOne)
    }

    pub fn disp(&self) -> &Vector4<f64> {
        &self.disp
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Re-expresses the state in another convention. Covariances scale by
    /// the ratio of vacuum variances, displacements by its square root.
    pub fn to_convention(&self, target: Convention) -> Self {
        if target == self.convention {
            return self.clone();
        }
        let ratio = target.vacuum() / self.convention.vacuum();
        Self {
            disp: self.disp * ratio.sqrt(),
            cov: self.cov * ratio,
            convention: target,
        }
    }

    /// Local covariance block of mode A or B (`mode` 0 or 1).
    pub fn local_block(&self, mode: usize) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned()
    }

    /// Cross-correlation block `C` between mode A and mode B.
    pub fn cross_block(&self) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn is_displaced(&self) -> bool {
        self.disp.amax() > 0.0
    }

    /// Symplectic eigenvalues `(ν₊, ν₋)`, in the state's convention.
    ///
    /// Taken from `A = σ^{1/2} Ω σ^{1/2}`: `AᵀA` has spectrum `ν₊², ν₊², ν₋², ν₋²`; this stays accurate when `ν₊ ≈ ν₋` (where the invariant
    /// formula `ν±² = (Δ ± √(Δ² − 4 det σ))/2` loses half its digits).
    pub fn symplectic_spectrum(&self) -> [f64; 2] {
        let eig = self.cov.symmetric_eigen();
        let k = eig.eigenvectors
            * Matrix4::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()))
            * eig.eigenvectors.transpose();
        let a = k * omega2() * k;
        // AᵀA has the doubly degenerate spectrum ν₊², ν₋²
        let ata = a.transpose() * a;
        let mut ev: Vec<f64> = ((ata + ata.transpose()) * 0.5).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let plus = (0.5 * (ev[2] + ev[3])).max(0.0).sqrt();
        let minus = (0.5 * (ev[0] + ev[1])).max(0.0).sqrt();
        [plus, minus]
    }

    /// Robertson–Schrödinger uncertainty relation `σ + (i ν_vac) Ω ⪰ 0`,
    /// tested on the smallest symplectic eigenvalue.
    pub fn is_physical(&self) -> bool {
        let eig = self.cov.symmetric_eigenvalues();
        if eig.min() <= 0.0 {
            return false;
        }
        let vac = self.convention.vacuum();
        // relative slack: rounding in the invariants grows with the entries
        let slack = PHYSICAL_TOL * self.cov.amax().max(1.0);
        self.symplectic_spectrum()[1] >= vac - slack
    }

    pub(crate) fn require_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            domain(format!(
                "unphysical state: symplectic spectrum {:?} below vacuum {}",
                self.symplectic_spectrum(),
                self.convention.vacuum()
            ))
        }
    }

    /// Mean total photon number `⟨a₁†a₁ + a₂†a₂⟩`.
    pub fn total_photons(&self) -> Result<f64> {
        self.require_physical()?;
        let s = self.to_convention(Convention::VacuumOne);
        Ok((s.cov.trace() + s.disp.norm_squared()) / 4.0 - 1.0)
    }

    /// Mean photon number of a single mode (`mode` 0 or 1).
    pub fn mode_photons(&self, mode: usize) -> f64 {
        let s = self.to_convention(Convention::VacuumOne);
        let i = 2 * mode;
        (s.cov[(i, i)] + s.cov[(i + 1, i + 1)] + s.disp[i].powi(2) + s.disp[i + 1].powi(2)) / 4.0
            - 0.5
    }

    /// Purity `μ = 1/√(16 det σ)` with `σ` in `VacuumHalf` units.
    pub fn purity(&self) -> Result<f64> {
        self.require_physical()?;
        let s = self.to_convention(Convention::VacuumHalf);
        Ok(1.0 / (16.0 * s.cov.determinant()).sqrt())
    }

    /// Applies a symplectic map: `σ → S σ Sᵀ`, `d → S d`.
    pub fn transform(&self, s: &Matrix4<f64>) -> Self {
        let cov = s * self.cov * s.transpose();
        Self {
            disp: s * self.disp,
            cov: (cov + cov.transpose()) * 0.5,
            convention: self.convention,
        }
    }

    /// Applies `S ⊕ 𝟙` for a local transform on mode A (or any two-mode
    /// transform as given).
    pub fn apply_local(&self, s: &SympTransform) -> Self {
        self.transform(&s.to_two_mode())
    }

    /// Adds `2 nᵢ` thermal photons to the diagonal of mode `i` (in
    /// `VacuumOne` units); the additive classical-noise channel.
    pub fn add_thermal_noise(&self, n1: f64, n2: f64) -> Result<Self> {
        if n1 < 0.0 || n2 < 0.0 {
            return domain("thermal photon numbers must be non-negative");
        }
        let k = 2.0 * self.convention.vacuum();
        let mut cov = self.cov;
        cov[(0, 0)] += k * n1;
        cov[(1, 1)] += k * n1;
        cov[(2, 2)] += k * n2;
        cov[(3, 3)] += k * n2;
        Ok(Self { cov, ..self.clone() })
    }

    /// `true` if the covariance is in undisplaced standard form with
    /// `c1 = -c2` (the class covered by the closed forms and by the
    /// symmetric-Chernoff theorem).
    pub fn standard_form_entries(&self, tol: f64) -> Option<(f64, f64, f64)> {
        if self.is_displaced() {
            return None;
        }
        let s = self.to_convention(Convention::VacuumOne);
        let m = &s.cov;
        let (a, b, c) = (m[(0, 0)], m[(2, 2)], m[(0, 2)]);
        let expected = Matrix4::new(
            a, 0.0, c, 0.0, //
            0.0, a, 0.0, -c, //
            c, 0.0, b, 0.0, //
            0.0, -c, 0.0, b,
        );
        ((m - expected).amax() <= tol * m.amax().max(1.0)).then_some((a, b, c))
    }
}
