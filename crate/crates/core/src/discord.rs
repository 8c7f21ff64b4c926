//! Gaussian discords of response: the smallest distance between a state and
//! its image under a traceless local symplectic on mode A.

use log::warn;
use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::distinguishability::{fidelity_unchecked, normal_modes, q_t_modes, NormalModes};
use crate::error::{domain, Error, Result};
use crate::gaussian::{euler_traceless, GaussianState};
use crate::optimize::{golden_section, nelder_mead};

/// θ grid size over `[0, π)`.
pub const THETA_POINTS: usize = 64;
/// ξ grid size, log-spaced over `[2^-XI_LOG2_SPAN, 2^XI_LOG2_SPAN]`.
pub const XI_POINTS: usize = 33;
pub const XI_LOG2_SPAN: f64 = 4.0;
/// Tolerance on `|ξ* − 1|` in [`verify_pi_half_extremal`].
pub const XI_EXTREMAL_TOL: f64 = 1e-6;
/// Cross-correlation threshold of [`is_classical_quantum`].
pub const CLASSICAL_TOL: f64 = 1e-10;

/// Distance used for the discord of response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `d² = 2 − 2 tr √ρ √σ`
    Hellinger,
    /// `d² = 2 − 2 √F`
    Bures,
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Metric> {
        match s.to_ascii_lowercase().as_str() {
            "hellinger" | "hell" => Ok(Metric::Hellinger),
            "bures" | "bu" => Ok(Metric::Bures),
            _ => domain(format!("unknown metric '{s}' (expected hellinger or bures)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult {
    pub value: f64,
    pub argmin_theta: f64,
    pub argmin_xi: f64,
    pub metric: Metric,
    /// Lower bound on the worst-case error probability, filled from the
    /// Bures discord (NaN when only the Hellinger discord was computed).
    pub perr_max_lower: f64,
    /// Upper bound on the worst-case error probability, filled from the
    /// Hellinger discord (NaN when only the Bures discord was computed).
    pub perr_max_upper: f64,
}

/// `½ (1 − D_Hell)`
pub fn perr_upper_from_hellinger(d_hell: f64) -> f64 {
    0.5 * (1.0 - d_hell)
}

/// `½ (1 − √(1 − (1 − D_Bu)²))`
pub fn perr_lower_from_bures(d_bures: f64) -> f64 {
    let f = (1.0 - d_bures).powi(2);
    0.5 * (1.0 - (1.0 - f).max(0.0).sqrt())
}

/// Worst-case error probability `½ − ½ √D_Tr` from a trace discord of
/// response supplied by an external computation.
pub fn perr_from_trace_discord(d_trace: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&d_trace) {
        return domain(format!("trace discord must lie in [0, 1], got {d_trace}"));
    }
    Ok(0.5 - 0.5 * d_trace.min(1.0).sqrt())
}

/// Objective `d²/2` as a function of `(θ, ln ξ)`.
struct Objective<'a> {
    state: &'a GaussianState,
    metric: Metric,
    modes: Option<NormalModes>,
}

impl<'a> Objective<'a> {
    fn new(state: &'a GaussianState, metric: Metric) -> Result<Self> {
        let modes = match metric {
            Metric::Hellinger => Some(normal_modes(state)?),
            Metric::Bures => None,
        };
        Ok(Objective { state, metric, modes })
    }

    fn eval(&self, theta: f64, ln_xi: f64) -> Result<f64> {
        let f = euler_traceless(theta, ln_xi.exp())?;
        match (&self.modes, self.metric) {
            (Some(m), Metric::Hellinger) => {
                let image = m.transformed(&f.to_two_mode());
                Ok(1.0 - q_t_modes(m, &image, 0.5)?)
            }
            _ => {
                let image = self.state.apply_local(&f);
                Ok(1.0 - fidelity_unchecked(self.state, &image)?.sqrt())
            }
        }
    }
}

/// Outcome of the (θ, ξ) minimization.
#[derive(Debug, Clone, Copy)]
struct Minimum {
    value: f64,
    theta: f64,
    xi: f64,
}

fn grid_minimum(obj: &Objective, log2_span: f64) -> Result<(Minimum, usize)> {
    let mut best = Minimum {
        value: f64::INFINITY,
        theta: 0.0,
        xi: 1.0,
    };
    let mut best_j = 0;
    // ties keep the smallest θ, then the smallest ξ
    for i in 0..THETA_POINTS {
        let theta = std::f64::consts::PI * i as f64 / THETA_POINTS as f64;
        for j in 0..XI_POINTS {
            let log2 = -log2_span + 2.0 * log2_span * j as f64 / (XI_POINTS - 1) as f64;
            let ln_xi = log2 * std::f64::consts::LN_2;
            let v = obj.eval(theta, ln_xi)?;
            if v < best.value {
                best = Minimum {
                    value: v,
                    theta,
                    xi: ln_xi.exp(),
                };
                best_j = j;
            }
        }
    }
    Ok((best, best_j))
}

fn minimize(state: &GaussianState, metric: Metric) -> Result<Minimum> {
    state.require_physical()?;
    let obj = Objective::new(state, metric)?;
    let mut span = XI_LOG2_SPAN;
    let (mut start, j) = grid_minimum(&obj, span)?;
    if j == 0 || j == XI_POINTS - 1 {
        warn!("discord minimum on the squeezing boundary 2^±{span}; widening the grid once");
        span *= 2.0;
        start = grid_minimum(&obj, span)?.0;
    }

    let mut failure: Option<Error> = None;
    let ln_span = span * std::f64::consts::LN_2;
    let mut f = |p: [f64; 2]| match obj.eval(p[0], p[1].clamp(-ln_span, ln_span)) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::INFINITY
        }
    };
    let step_theta = std::f64::consts::PI / THETA_POINTS as f64;
    let step_ln = 2.0 * span * std::f64::consts::LN_2 / (XI_POINTS - 1) as f64;
    let res = nelder_mead(&mut f, [start.theta, start.xi.ln()], [step_theta, step_ln], 1e-13, 1e-9, 2000);
    let mut best = if res.fx <= start.value {
        Minimum {
            value: res.fx,
            theta: res.x[0],
            xi: res.x[1].clamp(-ln_span, ln_span).exp(),
        }
    } else {
        start
    };
    // the objective is flat in θ near ξ = 1, so polish ξ alone
    let center = best.xi.ln();
    let (ln_xi, v) = golden_section(|l| f([best.theta, l]), center - step_ln, center + step_ln, 1e-12);
    if v <= best.value {
        best.value = v;
        best.xi = ln_xi.exp();
    }
    if let Some(e) = failure {
        return Err(e);
    }
    best.theta = best.theta.rem_euclid(std::f64::consts::PI);
    best.value = best.value.clamp(0.0, 1.0);
    Ok(best)
}

/// Gaussian discord of response of `state` with the given metric.
///
/// Only the bound belonging to `metric` is populated; the other is NaN. Use
/// [`perr_max_bounds`] for both.
pub fn discord_response(state: &GaussianState, metric: Metric) -> Result<DiscordResult> {
    let m = minimize(state, metric)?;
    let (lower, upper) = match metric {
        Metric::Hellinger => (f64::NAN, perr_upper_from_hellinger(m.value)),
        Metric::Bures => (perr_lower_from_bures(m.value), f64::NAN),
    };
    Ok(DiscordResult {
        value: m.value,
        argmin_theta: m.theta,
        argmin_xi: m.xi,
        metric,
        perr_max_lower: lower,
        perr_max_upper: upper,
    })
}

/// Lower and upper bounds on the worst-case error probability over all
/// traceless local codings.
pub fn perr_max_bounds(state: &GaussianState) -> Result<(f64, f64)> {
    let hell = discord_response(state, Metric::Hellinger)?;
    let bures = discord_response(state, Metric::Bures)?;
    Ok((bures.perr_max_lower, hell.perr_max_upper))
}

/// `A^{-1/2}` scaled so that `S A Sᵀ = √det A · 𝟙`.
fn normalizer(a: &Matrix2<f64>) -> Matrix2<f64> {
    let eig = a.symmetric_eigen();
    let inv_sqrt = eig.eigenvectors
        * Matrix2::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    inv_sqrt * a.determinant().sqrt().sqrt()
}

/// Whether some traceless local symplectic leaves the state invariant: the
/// cross-correlation block vanishes after reduction to standard form and
/// mode A carries no displacement.
pub fn is_classical_quantum(state: &GaussianState) -> bool {
    let a = state.local_block(0);
    let b = state.local_block(1);
    let c = normalizer(&a) * state.cross_block() * normalizer(&b).transpose();
    let scale = state.cov().amax().max(1.0);
    let disp_a = state.disp()[0].abs().max(state.disp()[1].abs());
    c.amax() < CLASSICAL_TOL * scale && disp_a < CLASSICAL_TOL * scale.sqrt()
}

/// Runs the Hellinger minimization and reports whether the minimizer is
/// the quarter-turn phase shift (`ξ = 1`), together with `(θ*, ξ*)`.
pub fn verify_pi_half_extremal(state: &GaussianState) -> Result<(bool, (f64, f64))> {
    let m = minimize(state, Metric::Hellinger)?;
    Ok(((m.xi - 1.0).abs() <= XI_EXTREMAL_TOL, (m.theta, m.xi)))
}

/// Objective `d²/2` at one coding, exposed for grid consistency checks.
pub fn response_distance(state: &GaussianState, metric: Metric, theta: f64, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return domain(format!("xi must be positive, got {xi}"));
    }
    Objective::new(state, metric)?.eval(theta, xi.ln())
}

/// Two-mode matrix of the coding `euler_traceless(θ, ξ) ⊕ 𝟙`.
pub fn coding_matrix(theta: f64, xi: f64) -> Result<Matrix4<f64>> {
    Ok(euler_traceless(theta, xi)?.to_two_mode())
}
