//! Noise thresholds, copy counts and the oracle validation sweep.

use std::f64::consts::FRAC_PI_2;

use log::info;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{RunConfig, Table};
use crate::distinguishability::{
    affinity, closed_qcb_asym, copies_needed, helstrom_bounds, pure_perr, q_t, uhlmann_fidelity, Side,
};
use crate::error::{domain, Error, Result};
use crate::fock::{fock_state_within, oracle_affinity, oracle_fidelity, oracle_helstrom, oracle_q_t, TAIL_TOLERANCE};
use crate::gaussian::{make_sts, phase_shift, Convention, Family, GaussianState, StateParams};
use crate::optimize::bisect;

/// Bracket for the threshold search on `nth1`.
pub const THRESHOLD_MAX: f64 = 1000.0;
/// Largest accepted Gaussian–oracle deviation.
pub const VALIDATE_TOL: f64 = 1e-5;
/// Numerical slack on `lbp ≤ P_err ≤ ubp` when checking oracle values.
pub const SANDWICH_SLACK: f64 = 1e-6;
/// `t` at which `Q_t` is compared.
pub const VALIDATE_T: f64 = 0.3;

fn quarter(state: &GaussianState) -> GaussianState {
    state.apply_local(&phase_shift(FRAC_PI_2))
}

/// Smallest `nth1` at which the Chernoff bound of `STS(r, nth1, n2)` under
/// quarter-turn coding drops to the exact error probability of the two-mode
/// squeezed vacuum with the same `r`.
pub fn run_threshold(r: f64, n2: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("squeezing must be positive, got {r}"));
    }
    let vac = make_sts(r, 0.0, 0.0)?;
    let target = pure_perr(&vac, &quarter(&vac))?;
    let objective = |n1: f64| -> f64 {
        let entries = make_sts(r, n1, n2).ok().and_then(|s| s.standard_form_entries(1e-12));
        match entries.map(|(a, b, c)| closed_qcb_asym(a, b, c)) {
            Some(Ok(q)) => q - target,
            _ => f64::NAN,
        }
    };
    let (lo, hi) = (objective(0.0), objective(THRESHOLD_MAX));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Numeric("threshold objective is not finite on the bracket".into()));
    }
    bisect(objective, 0.0, THRESHOLD_MAX, 1e-6, 1e-9)
}

/// Copies needed to bring the error probability bound to `target`: the
/// Chernoff upper bound for squeezed thermal states (worst case), the
/// fidelity lower bound for thermal squeezed states (best case).
pub fn run_copies(family: Family, n_s: f64, n_th: f64, target: f64) -> Result<u32> {
    let params = StateParams::new().with_ns(n_s).with_thermal(n_th, n_th);
    let side = match family {
        Family::Sts => Side::Upper,
        Family::Tss => Side::Lower,
        other => {
            return Err(Error::Usage(format!(
                "copy counts are defined for sts and tss, not {}",
                other.name()
            )))
        }
    };
    let state = family.build(&params)?;
    let rep = helstrom_bounds(&state, &quarter(&state), 1)?;
    copies_needed(&rep, target, side)
}

/// Parameter box and cutoff of a validation sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateOptions {
    pub families: Vec<Family>,
    pub r: Vec<f64>,
    pub nth1: Vec<f64>,
    pub nth2: Vec<f64>,
    /// Real coherent amplitudes, used by the displaced families only.
    pub alpha: Vec<f64>,
    pub r_prime: f64,
    pub cutoff: usize,
    /// Points whose truncated state misses more probability than this are
    /// reported as truncated and not compared.
    pub tail_tolerance: f64,
    /// Test hook: relabel the Gaussian covariance with the wrong vacuum
    /// convention before comparing.
    pub convention_fault: bool,
}

impl ValidateOptions {
    pub fn from_config(config: &RunConfig) -> Result<ValidateOptions> {
        config.check_grid_names(&["r", "nth1", "nth2", "alpha"])?;
        let cutoff = config.cutoff.unwrap_or(40);
        Ok(ValidateOptions {
            families: match config.family {
                Some(f) => vec![f],
                None => Family::ALL.to_vec(),
            },
            r: config.grid_or("r", 0.0, 1.0, 3).values(),
            nth1: config.grid_or("nth1", 0.0, 2.0, 3).values(),
            nth2: config.grid_or("nth2", 0.0, 2.0, 3).values(),
            alpha: config.grid_or("alpha", 0.0, 1.5, 3).values(),
            r_prime: config.get_or("rprime", 0.1),
            cutoff,
            tail_tolerance: config.get_or("tail", TAIL_TOLERANCE),
            convention_fault: config.get_or("convention_fault", 0.0) != 0.0,
        })
    }

    fn points(&self) -> Vec<(Family, StateParams)> {
        let mut out = Vec::new();
        for &fam in &self.families {
            let rs: &[f64] = if fam == Family::CoherentThermal { &[0.0] } else { &self.r };
            let displaced = matches!(fam, Family::CoherentThermal | Family::Sdts | Family::Stsds);
            let alphas: &[f64] = if displaced { &self.alpha } else { &[0.0] };
            for &r in rs {
                for &n1 in &self.nth1 {
                    for &n2 in &self.nth2 {
                        for &a in alphas {
                            let p = StateParams::new()
                                .with_r(r)
                                .with_thermal(n1, n2)
                                .with_alpha(Complex64::new(a, 0.0))
                                .with_r_prime(if fam == Family::Stsds { self.r_prime } else { 0.0 });
                            out.push((fam, p));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Compared,
    Truncated,
    Failed,
}

/// Gaussian and oracle values at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub family: Family,
    pub params: StateParams,
    pub status: PointStatus,
    pub message: Option<String>,
    /// `1 − tr ρ` of the truncated state.
    pub tail_mass: f64,
    pub dev_fidelity: f64,
    pub dev_affinity: f64,
    pub dev_q_t: f64,
    pub lbp: f64,
    pub helstrom: f64,
    pub ubp: f64,
    pub sandwich_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub cutoff: usize,
    pub points: Vec<PointResult>,
    pub max_dev_fidelity: f64,
    pub max_dev_affinity: f64,
    pub max_dev_q_t: f64,
    pub sandwich_violations: usize,
    pub truncated: usize,
    pub failed: usize,
}

impl ValidationReport {
    pub fn compared(&self) -> usize {
        self.points.iter().filter(|p| p.status == PointStatus::Compared).count()
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_dev_fidelity.max(self.max_dev_affinity).max(self.max_dev_q_t)
    }

    /// All deviations within [`VALIDATE_TOL`], no sandwich violation and no
    /// failed point.
    pub fn passed(&self) -> bool {
        self.max_deviation() <= VALIDATE_TOL && self.sandwich_violations == 0 && self.failed == 0
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&[
            "family", "r", "nth1", "nth2", "alpha", "status", "tail_mass", "dev_fidelity", "dev_affinity", "dev_q_t", "lbp",
            "helstrom", "ubp", "sandwich_ok",
        ]);
        t.notes.push(format!(
            "family codes: {}",
            Family::ALL
                .iter()
                .enumerate()
                .map(|(i, f)| format!("{i}={}", f.name()))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        t.notes.push("status codes: 0=compared 1=truncated 2=failed".into());
        for p in &self.points {
            let fam = Family::ALL.iter().position(|f| *f == p.family).unwrap_or(0) as f64;
            let status = match p.status {
                PointStatus::Compared => 0.0,
                PointStatus::Truncated => 1.0,
                PointStatus::Failed => 2.0,
            };
            t.rows.push(vec![
                fam,
                p.params.r,
                p.params.n_th1,
                p.params.n_th2,
                p.params.alpha.re,
                status,
                p.tail_mass,
                p.dev_fidelity,
                p.dev_affinity,
                p.dev_q_t,
                p.lbp,
                p.helstrom,
                p.ubp,
                if p.sandwich_ok { 1.0 } else { 0.0 },
            ]);
        }
        t.notes.push(format!(
            "compared {} truncated {} failed {}; max deviation fidelity {:.3e} affinity {:.3e} q_t {:.3e}; sandwich violations {}; {}",
            self.compared(),
            self.truncated,
            self.failed,
            self.max_dev_fidelity,
            self.max_dev_affinity,
            self.max_dev_q_t,
            self.sandwich_violations,
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        t
    }
}

fn validate_point(fam: Family, params: StateParams, opts: &ValidateOptions) -> PointResult {
    let mut out = PointResult {
        family: fam,
        params,
        status: PointStatus::Failed,
        message: None,
        tail_mass: f64::NAN,
        dev_fidelity: f64::NAN,
        dev_affinity: f64::NAN,
        dev_q_t: f64::NAN,
        lbp: f64::NAN,
        helstrom: f64::NAN,
        ubp: f64::NAN,
        sandwich_ok: false,
    };
    let mut run = || -> Result<bool> {
        let rho = match fock_state_within(&params, fam, opts.cutoff, opts.tail_tolerance) {
            Err(Error::Truncation { tail_mass, .. }) => {
                out.tail_mass = tail_mass;
                return Ok(false);
            }
            other => other?,
        };
        out.tail_mass = rho.tail_mass();
        let rho2 = rho.phase_shifted(FRAC_PI_2);
        let mut g = fam.build(&params)?;
        if opts.convention_fault {
            g = GaussianState::new(*g.disp(), *g.cov(), Convention::VacuumHalf)?;
        }
        let g2 = quarter(&g);
        out.dev_fidelity = (uhlmann_fidelity(&g, &g2)? - oracle_fidelity(&rho, &rho2)?).abs();
        out.dev_affinity = (affinity(&g, &g2)? - oracle_affinity(&rho, &rho2)?).abs();
        out.dev_q_t = (q_t(&g, &g2, VALIDATE_T)? - oracle_q_t(&rho, &rho2, VALIDATE_T)?).abs();
        let rep = helstrom_bounds(&g, &g2, 1)?;
        out.lbp = rep.lbp;
        out.ubp = rep.ubp;
        out.helstrom = oracle_helstrom(&rho, &rho2)?;
        out.sandwich_ok = rep.lbp - SANDWICH_SLACK <= out.helstrom && out.helstrom <= rep.ubp + SANDWICH_SLACK;
        Ok(true)
    };
    match run() {
        Ok(true) => out.status = PointStatus::Compared,
        Ok(false) => {
            info!("{} {params:?}: tail mass {:.3e} at cutoff {}", fam.name(), out.tail_mass, opts.cutoff);
            out.status = PointStatus::Truncated;
        }
        Err(e) => out.message = Some(e.to_string()),
    }
    out
}

/// Compares every Gaussian metric with its truncated-Fock counterpart over
/// the box. Points whose truncation loses more than the tail tolerance are
/// reported as truncated and left out of the maxima.
pub fn run_validate(opts: &ValidateOptions) -> Result<ValidationReport> {
    if opts.cutoff < 8 {
        return Err(Error::Usage(format!("cutoff must be at least 8, got {}", opts.cutoff)));
    }
    let points: Vec<PointResult> = opts
        .points()
        .into_par_iter()
        .map(|(fam, p)| validate_point(fam, p, opts))
        .collect();
    let compared = || points.iter().filter(|p| p.status == PointStatus::Compared);
    let max = |f: fn(&PointResult) -> f64| compared().map(f).fold(0.0, f64::max);
    Ok(ValidationReport {
        cutoff: opts.cutoff,
        max_dev_fidelity: max(|p| p.dev_fidelity),
        max_dev_affinity: max(|p| p.dev_affinity),
        max_dev_q_t: max(|p| p.dev_q_t),
        sandwich_violations: compared().filter(|p| !p.sandwich_ok).count(),
        truncated: points.iter().filter(|p| p.status == PointStatus::Truncated).count(),
        failed: points.iter().filter(|p| p.status == PointStatus::Failed).count(),
        points,
    })
}
