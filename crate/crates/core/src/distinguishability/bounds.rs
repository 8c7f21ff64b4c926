//! Helstrom error-probability bounds for single and multiple copies.

use serde::Serialize;

use super::{chernoff_min, uhlmann_fidelity};
use crate::error::{domain, Result};
use crate::gaussian::GaussianState;

/// Purity tolerance for [`pure_perr`].
const PURE_TOL: f64 = 1e-8;
/// Slack subtracted before rounding copy counts up.
const CEIL_SLACK: f64 = 1e-9;

/// Fidelity, affinity and the error bounds for `copies` copies of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub fidelity: f64,
    pub affinity: f64,
    pub t_star: f64,
    pub qcb: f64,
    pub lbp: f64,
    pub ubp: f64,
    pub copies: u32,
    /// Single-copy `inf_t Q_t`.
    pub q_min: f64,
}

impl MetricReport {
    /// Same pair, different number of copies.
    pub fn with_copies(&self, copies: u32) -> Result<MetricReport> {
        if copies == 0 {
            return domain("copies must be at least 1");
        }
        let qcb = 0.5 * self.q_min.powi(copies as i32);
        Ok(MetricReport {
            qcb,
            ubp: qcb,
            lbp: lower_bound(self.fidelity, copies),
            copies,
            ..*self
        })
    }
}

/// `(1 − √(1 − Fⁿ)) / 2`
pub fn lower_bound(fidelity: f64, copies: u32) -> f64 {
    let fnn = fidelity.powi(copies as i32).clamp(0.0, 1.0);
    // written as F^n / (2(1 + √(1 − F^n))) to keep precision when F^n is small
    0.5 * fnn / (1.0 + (1.0 - fnn).sqrt())
}

/// Lower and upper bounds on the minimum error probability of
/// discriminating `copies` copies of `s1` from `s2`.
pub fn helstrom_bounds(s1: &GaussianState, s2: &GaussianState, copies: u32) -> Result<MetricReport> {
    if copies == 0 {
        return domain("copies must be at least 1");
    }
    let fidelity = uhlmann_fidelity(s1, s2)?;
    let m = chernoff_min(s1, s2)?;
    let affinity = if m.t_star == 0.5 {
        m.q_min
    } else {
        super::affinity(s1, s2)?
    };
    let single = MetricReport {
        fidelity,
        affinity,
        t_star: m.t_star,
        qcb: 0.5 * m.q_min,
        lbp: lower_bound(fidelity, 1),
        ubp: 0.5 * m.q_min,
        copies: 1,
        q_min: m.q_min,
    };
    single.with_copies(copies)
}

/// Exact minimum error probability `½ − ½√(1 − F)` for two pure states.
pub fn pure_perr(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    for (i, s) in [s1, s2].into_iter().enumerate() {
        let p = s.purity()?;
        if (p - 1.0).abs() > PURE_TOL {
            return domain(format!("state {} is not pure (purity {p})", i + 1));
        }
    }
    let f = uhlmann_fidelity(s1, s2)?;
    Ok(0.5 - 0.5 * (1.0 - f).max(0.0).sqrt())
}

/// Which bound must reach the target error probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Worst case: the Chernoff upper bound.
    Upper,
    /// Best case: the fidelity lower bound.
    Lower,
}

impl std::str::FromStr for Side {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Side> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            _ => domain(format!("unknown side '{s}' (expected upper or lower)")),
        }
    }
}

/// Real-valued copy count at which the chosen bound equals `target`.
pub fn copies_exact(report: &MetricReport, target: f64, side: Side) -> Result<f64> {
    if !(target > 0.0 && target <= 0.5) {
        return domain(format!("target must lie in (0, 1/2], got {target}"));
    }
    let (num, base) = match side {
        Side::Upper => ((2.0 * target).ln(), report.q_min),
        Side::Lower => ((1.0 - (1.0 - 2.0 * target).powi(2)).ln(), report.fidelity),
    };
    if num == 0.0 {
        return Ok(0.0);
    }
    if !(base < 1.0) {
        return domain("states are indistinguishable under this bound; the target is unreachable");
    }
    if base <= 0.0 {
        return Ok(0.0);
    }
    Ok(num / base.ln())
}

/// Least number of copies for which the chosen bound is at most `target`.
pub fn copies_needed(report: &MetricReport, target: f64, side: Side) -> Result<u32> {
    let n = copies_exact(report, target, side)?;
    let n = (n - CEIL_SLACK).ceil().max(1.0);
    if n > u32::MAX as f64 {
        return domain(format!("required copy count {n:e} is out of range"));
    }
    Ok(n as u32)
}
