//! Trace-distance discord of response on the truncated basis.

use std::f64::consts::PI;

use super::build::{check_tail_state, Builder};
use super::{oracle_trace_distance, FockRecipe};
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::optimize::nelder_mead;

/// θ grid over `[0, π)`.
const THETA_POINTS: usize = 16;
/// ξ grid, log-spaced over `[1/XI_MAX, XI_MAX]`.
const XI_POINTS: usize = 9;
const XI_MAX: f64 = 4.0;

/// Minimized `(1/4) d_Tr²` and the implied worst-case error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDiscord {
    pub value: f64,
    /// `1/2 − √value / 2`.
    pub perr_max: f64,
    pub theta: f64,
    pub xi: f64,
}

/// Minimizes `(1/4) d_Tr(ρ, U ρ U†)²` over `U = euler_traceless(θ, ξ)` on mode
/// 1. The state must be locally equivalent to a squeezed thermal state in
/// standard form (any displacement is kept).
pub fn oracle_trace_discord(state: &GaussianState, cutoff: usize) -> Result<TraceDiscord> {
    let recipe = FockRecipe::from_state(state)?;
    let builder = Builder::new(recipe, cutoff, Some(XI_MAX))?;
    let rho = check_tail_state(builder.build(None)?, state)?;

    let ln_max = XI_MAX.ln();
    let mut failure: Option<Error> = None;
    let mut f = |x: [f64; 2]| -> f64 {
        let l = x[1].clamp(-ln_max, ln_max);
        let res = builder
            .build(Some((x[0], l.exp())))
            .and_then(|moved| oracle_trace_distance(&rho, &moved));
        match res {
            Ok(d) => 0.25 * d * d,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let step_theta = PI / THETA_POINTS as f64;
    let step_ln = 2.0 * ln_max / (XI_POINTS - 1) as f64;
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..THETA_POINTS {
        for j in 0..XI_POINTS {
            let x = [i as f64 * step_theta, -ln_max + j as f64 * step_ln];
            let v = f(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    let res = nelder_mead(&mut f, best.0, [0.5 * step_theta, 0.5 * step_ln], 1e-12, 1e-7, 400);
    if res.fx < best.1 {
        best = (res.x, res.fx);
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let value = best.1.clamp(0.0, 1.0);
    Ok(TraceDiscord {
        value,
        perr_max: 0.5 - 0.5 * value.sqrt(),
        theta: best.0[0].rem_euclid(PI),
        xi: best.0[1].clamp(-ln_max, ln_max).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discord::perr_from_trace_discord;
    use crate::gaussian::{Family, StateParams};

    fn sts(r: f64, n1: f64) -> GaussianState {
        Family::Sts.build(&StateParams::new().with_r(r).with_thermal(n1, 0.0)).unwrap()
    }

    #[test]
    fn thermal_state_has_none() {
        let s = Family::Sts.build(&StateParams::new().with_thermal(0.5, 0.3)).unwrap();
        let d = oracle_trace_discord(&s, 16).unwrap();
        assert!(d.value < 1e-12, "{d:?}");
        assert!((d.perr_max - 0.5).abs() < 1e-6);
    }

    #[test]
    fn pure_tmsv() {
        let d = oracle_trace_discord(&sts(0.5, 0.0), 24).unwrap();
        assert!((d.value - 0.408476).abs() < 1e-5, "{d:?}");
        assert!((d.perr_max - perr_from_trace_discord(d.value).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn grows_with_local_noise() {
        let v: Vec<f64> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&n| oracle_trace_discord(&sts(0.5, n), 32).unwrap().value)
            .collect();
        assert!(v[0] < v[1] && v[1] < v[2], "{v:?}");
    }
}
