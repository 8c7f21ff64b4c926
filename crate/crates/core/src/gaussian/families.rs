use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{two_mode_squeeze, Convention, GaussianState};
use crate::error::{domain, Result};

/// Physical parameters shared by the state families.
///
/// `r` and `n_s` describe the same squeezing (`n_s = sinh² r`); the
/// setters keep them in sync.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StateParams {
    pub r: f64,
    pub n_th1: f64,
    pub n_th2: f64,
    pub n_s: f64,
    pub alpha: Complex64,
    pub r_prime: f64,
}

impl StateParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self.n_s = r.sinh().powi(2);
        self
    }

    /// Sets the squeezed photon number and the matching `r ≥ 0`.
    pub fn with_ns(mut self, n_s: f64) -> Self {
        self.n_s = n_s;
        self.r = n_s.max(0.0).sqrt().asinh();
        self
    }

    pub fn with_thermal(mut self, n1: f64, n2: f64) -> Self {
        self.n_th1 = n1;
        self.n_th2 = n2;
        self
    }

    pub fn with_alpha(mut self, alpha: Complex64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_r_prime(mut self, r_prime: f64) -> Self {
        self.r_prime = r_prime;
        self
    }
}

/// The state families used throughout: squeezed thermal (STS), thermal
/// squeezed (TSS), coherent thermal, squeezed displaced thermal (SDTS) and
/// squeezed thermal squeezed displaced (STSDS).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Sts,
    Tss,
    CoherentThermal,
    Sdts,
    Stsds,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sts,
        Family::Tss,
        Family::CoherentThermal,
        Family::Sdts,
        Family::Stsds,
    ];

    pub fn build(self, p: &StateParams) -> Result<GaussianState> {
        match self {
            Family::Sts => make_sts(p.r, p.n_th1, p.n_th2),
            Family::Tss => make_tss(p.n_s, p.n_th1, p.n_th2),
            Family::CoherentThermal => make_coherent_thermal(p.alpha, p.n_th1, p.n_th2),
            Family::Sdts => make_sdts(p.r, p.alpha, p.n_th1, p.n_th2),
            Family::Stsds => make_stsds(p.r, p.n_th1, p.n_th2, p.r_prime, p.alpha),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Sts => "sts",
            Family::Tss => "tss",
            Family::CoherentThermal => "coh-th",
            Family::Sdts => "sdts",
            Family::Stsds => "stsds",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sts" => Ok(Family::Sts),
            "tss" => Ok(Family::Tss),
            "coh-th" | "coherent-thermal" | "coh_th" => Ok(Family::CoherentThermal),
            "sdts" => Ok(Family::Sdts),
            "stsds" => Ok(Family::Stsds),
            other => Err(format!("unknown state family `{other}`")),
        }
    }
}

fn check_thermal(n1: f64, n2: f64) -> Result<()> {
    if !(n1 >= 0.0 && n2 >= 0.0) {
        return domain(format!(
            "thermal photon numbers must be non-negative, got ({n1}, {n2})"
        ));
    }
    Ok(())
}

fn thermal_cov(n1: f64, n2: f64) -> Matrix4<f64> {
    let (a, b) = (1.0 + 2.0 * n1, 1.0 + 2.0 * n2);
    Matrix4::from_diagonal(&Vector4::new(a, a, b, b))
}

fn coherent_disp(alpha: Complex64) -> Vector4<f64> {
    let (x, p) = Convention::VacuumOne.coherent_mean(alpha);
    Vector4::new(x, p, 0.0, 0.0)
}

/// Squeezed thermal state `S(r) ρ_th(n1, n2) S(r)†`.
pub fn make_sts(r: f64, n1: f64, n2: f64) -> Result<GaussianState> {
    check_thermal(n1, n2)?;
    let (ch, sh) = (r.cosh(), r.sinh());
    let a = (2.0 * r).cosh() + 2.0 * n1 * ch * ch + 2.0 * n2 * sh * sh;
    let b = (2.0 * r).cosh() + 2.0 * n2 * ch * ch + 2.0 * n1 * sh * sh;
    let c = (1.0 + n1 + n2) * (2.0 * r).sinh();
    GaussianState::standard_form(a, b, c, -c)
}

/// Thermal squeezed state: a two-mode squeezed vacuum with `n_s` squeezed
/// photons, then thermalized with `n1`, `n2` photons.
pub fn make_tss(n_s: f64, n1: f64, n2: f64) -> Result<GaussianState> {
    check_thermal(n1, n2)?;
    if !(n_s >= 0.0) {
        return domain(format!("squeezed photon number must be non-negative, got {n_s}"));
    }
    let c = 2.0 * (n_s * (n_s + 1.0)).sqrt();
    GaussianState::standard_form(2.0 * n_s + 1.0 + 2.0 * n1, 2.0 * n_s + 1.0 + 2.0 * n2, c, -c)
}

/// Thermal state with mode A displaced by the coherent amplitude `alpha`.
pub fn make_coherent_thermal(alpha: Complex64, n1: f64, n2: f64) -> Result<GaussianState> {
    check_thermal(n1, n2)?;
    GaussianState::new(coherent_disp(alpha), thermal_cov(n1, n2), Convention::VacuumOne)
}

/// `S(r) D(α) ρ_th(n1, n2) D(α)† S(r)†`.
pub fn make_sdts(r: f64, alpha: Complex64, n1: f64, n2: f64) -> Result<GaussianState> {
    make_coherent_thermal(alpha, n1, n2).map(|s| s.transform(&two_mode_squeeze(r)))
}

/// `S(r) Φ_{n1,n2}[S(r′) D(α) |00⟩⟨00| D(α)† S(r′)†] S(r)†` where `Φ` adds
/// thermal photons to the diagonal of the covariance matrix.
pub fn make_stsds(r: f64, n1: f64, n2: f64, r_prime: f64, alpha: Complex64) -> Result<GaussianState> {
    check_thermal(n1, n2)?;
    let inner = GaussianState::new(coherent_disp(alpha), Matrix4::identity(), Convention::VacuumOne)?
        .transform(&two_mode_squeeze(r_prime));
    Ok(inner.add_thermal_noise(n1, n2)?.transform(&two_mode_squeeze(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(s: &GaussianState) -> (f64, f64, f64) {
        s.standard_form_entries(1e-12).expect("standard form")
    }

    #[test]
    fn sts_values() {
        let (a, b, c) = entries(&make_sts(0.5, 0.0, 0.0).unwrap());
        assert!((a - 1f64.cosh()).abs() < 1e-12 && (b - a).abs() < 1e-15);
        assert!((c - 1f64.sinh()).abs() < 1e-12);
        assert!((a - 1.543081).abs() < 1e-6 && (c - 1.175201).abs() < 1e-6);
        assert!((a * b - c * c - 1.0).abs() < 1e-12);

        let (a, b, c) = entries(&make_sts(0.5, 1.0, 0.0).unwrap());
        assert!((a - 4.086161).abs() < 1e-6);
        assert!((b - 2.086161).abs() < 1e-6);
        assert!((c - 2.350402).abs() < 1e-6);
        assert!((a * b - c * c - 3.0).abs() < 1e-10);
    }

    #[test]
    fn sts_without_squeezing_is_thermal() {
        let s = make_sts(0.0, 1.5, 0.25).unwrap();
        assert_eq!(*s.cov(), thermal_cov(1.5, 0.25));
    }

    #[test]
    fn tss_values_and_limits() {
        let (a, b, c) = entries(&make_tss(0.1, 1.0, 1.0).unwrap());
        assert!((a - 3.2).abs() < 1e-12 && (b - 3.2).abs() < 1e-12);
        assert!((c - 0.663325).abs() < 1e-6);

        let r = 0.8_f64;
        let tss = make_tss(r.sinh().powi(2), 0.0, 0.0).unwrap();
        let sts = make_sts(r, 0.0, 0.0).unwrap();
        assert!((tss.cov() - sts.cov()).amax() < 1e-12);

        let (_, _, c) = entries(&make_tss(0.0, 0.3, 0.7).unwrap());
        assert_eq!(c, 0.0);
    }

    #[test]
    fn negative_inputs_are_domain_errors() {
        assert!(make_sts(0.3, -0.1, 0.0).is_err());
        assert!(make_tss(-0.1, 0.0, 0.0).is_err());
        assert!(make_tss(0.1, 0.0, -1.0).is_err());
        assert!(make_coherent_thermal(Complex64::new(1.0, 0.0), 0.0, -2.0).is_err());
        assert!(make_stsds(0.1, -1.0, 0.0, 0.0, Complex64::default()).is_err());
    }

    #[test]
    fn coherent_thermal() {
        let s = make_coherent_thermal(Complex64::new(1.0, 0.0), 0.0, 0.0).unwrap();
        assert_eq!(*s.cov(), Matrix4::identity());
        let half = s.to_convention(Convention::VacuumHalf);
        assert!((half.disp()[0] - 1.414214).abs() < 1e-6);
        assert_eq!(half.disp()[1], 0.0);

        let s = make_coherent_thermal(Complex64::default(), 2.0, 0.0).unwrap();
        assert_eq!(s.cov()[(0, 0)], 5.0);
        assert!(!s.is_displaced());

        let s = make_coherent_thermal(Complex64::new(1.0, 0.0), 1.0, 0.0).unwrap();
        assert!((s.total_photons().unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sdts_limits_and_photons() {
        let alpha = Complex64::new(0.6, 0.3);
        let a = make_sdts(0.4, Complex64::default(), 0.5, 1.0).unwrap();
        let b = make_sts(0.4, 0.5, 1.0).unwrap();
        assert!((a.cov() - b.cov()).amax() < 1e-12);

        let a = make_sdts(0.0, alpha, 0.5, 1.0).unwrap();
        let b = make_coherent_thermal(alpha, 0.5, 1.0).unwrap();
        assert!((a.cov() - b.cov()).amax() < 1e-15 && (a.disp() - b.disp()).amax() < 1e-15);

        for &(r, n1, n2) in &[(0.3, 0.0, 0.0), (0.9, 1.2, 0.4), (0.5, 3.0, 0.0)] {
            let s = make_sdts(r, alpha, n1, n2).unwrap();
            let ns = r.sinh().powi(2);
            let a2 = alpha.norm_sqr();
            let expected = (n1 + n2) * (1.0 + 2.0 * ns) + 2.0 * ns * (1.0 + a2) + a2;
            assert!((s.total_photons().unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn stsds_limits_and_photons() {
        let s = make_stsds(0.6, 0.8, 0.8, 0.0, Complex64::default()).unwrap();
        assert!((s.cov() - make_sts(0.6, 0.8, 0.8).unwrap().cov()).amax() < 1e-12);

        let rp = 0.45_f64;
        let s = make_stsds(0.0, 0.8, 0.8, rp, Complex64::default()).unwrap();
        let t = make_tss(rp.sinh().powi(2), 0.8, 0.8).unwrap();
        assert!((s.cov() - t.cov()).amax() < 1e-12);

        // photon count of the defining composition: thermal photons are
        // amplified by the outer squeezer only
        let alpha = Complex64::new(0.5, -0.4);
        for &(r, n1, n2, rp) in &[(0.3, 0.5, 1.0, 0.2), (0.0, 1.0, 1.0, 0.7), (0.8, 2.0, 0.0, 0.0)] {
            let s = make_stsds(r, n1, n2, rp, alpha).unwrap();
            let expected =
                (n1 + n2) * (2.0 * r).cosh() + (1.0 + alpha.norm_sqr()) * (2.0 * (r + rp)).cosh() - 1.0;
            assert!((s.total_photons().unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn total_photons_and_purity() {
        let s = make_sts(0.5, 1.0, 0.0).unwrap();
        assert!((s.total_photons().unwrap() - 2.086161).abs() < 1e-6);
        assert!((make_sts(0.7, 1.0, 0.0).unwrap().purity().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((make_tss(0.5, 1.0, 1.0).unwrap().purity().unwrap() - 1.0 / 13.0).abs() < 1e-12);
        for fam in Family::ALL {
            let p = StateParams::new().with_r(0.6).with_alpha(Complex64::new(0.3, 0.1)).with_r_prime(0.2);
            assert!((fam.build(&p).unwrap().purity().unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn params_keep_ns_in_sync() {
        let p = StateParams::new().with_r(0.8);
        assert!((p.n_s - 0.8f64.sinh().powi(2)).abs() < 1e-12);
        let q = StateParams::new().with_ns(p.n_s);
        assert!((q.r - 0.8).abs() < 1e-12);
    }
}
