//! Per-state sweeps: covariance data, pair metrics and discords.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::{grid_points, RunConfig, Table, STATE_PARAMS};
use crate::discord::{discord_response, Metric};
use crate::distinguishability::{helstrom_bounds, pure_perr};
use crate::error::{Error, Result};
use crate::gaussian::{euler_traceless, phase_shift, Convention, Family, GaussianState};

fn family(config: &RunConfig) -> Result<Family> {
    config
        .family
        .ok_or_else(|| Error::Usage("missing --family".into()))
}

/// Evaluates `f` at every grid point in parallel, keeping grid order, and
/// prefixes each row with the swept values.
fn sweep<F>(config: &RunConfig, columns: &[&str], f: F) -> Result<Table>
where
    F: Fn(&GaussianState, &BTreeMap<String, f64>) -> Result<Vec<f64>> + Sync,
{
    config.check_grid_names(&STATE_PARAMS)?;
    let fam = family(config)?;
    let names: Vec<&str> = config.grids.iter().map(|g| g.name.as_str()).collect();
    let mut header = names.clone();
    header.extend_from_slice(columns);
    let points = grid_points(&config.grids);
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|pt| {
            let state = fam.build(&config.params(pt))?;
            let mut row: Vec<f64> = names.iter().map(|n| pt[*n]).collect();
            row.extend(f(&state, pt)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&header);
    table.rows = rows;
    Ok(table)
}

/// Covariance entries (vacuum variance 1), displacement, purity, photon
/// number and symplectic eigenvalues of a family state.
pub fn run_state(config: &RunConfig) -> Result<Table> {
    let mut cols: Vec<String> = vec![
        "physical".into(),
        "purity".into(),
        "n_total".into(),
        "nu_minus".into(),
        "nu_plus".into(),
    ];
    cols.extend((0..4).map(|i| format!("disp_{i}")));
    for i in 0..4 {
        for j in i..4 {
            cols.push(format!("cov_{i}{j}"));
        }
    }
    let cols: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
    sweep(config, &cols, |state, _| {
        let s = state.to_convention(Convention::VacuumOne);
        let [nu_minus, nu_plus] = s.symplectic_spectrum();
        let mut row = vec![
            if s.is_physical() { 1.0 } else { 0.0 },
            s.purity()?,
            s.total_photons()?,
            nu_minus,
            nu_plus,
        ];
        row.extend(s.disp().iter());
        for i in 0..4 {
            for j in i..4 {
                row.push(s.cov()[(i, j)]);
            }
        }
        Ok(row)
    })
}

/// Fidelity, affinity, Chernoff bound and error bounds between a state and
/// its image under the coding on mode 1: the phase shift `phi` (default a
/// quarter turn) or `euler_traceless(theta, xi)` when both are given.
pub fn run_metric(config: &RunConfig) -> Result<Table> {
    let coding = match (config.get("theta"), config.get("xi")) {
        (Some(theta), Some(xi)) => euler_traceless(theta, xi)?,
        (None, None) => phase_shift(config.get_or("phi", FRAC_PI_2)),
        _ => return Err(Error::Usage("--theta and --xi must be given together".into())),
    };
    let copies = config.get_or("copies", 1.0);
    if !(copies >= 1.0 && copies.fract() == 0.0 && copies <= u32::MAX as f64) {
        return Err(Error::Usage(format!("--copies must be a positive integer, got {copies}")));
    }
    let cols = ["fidelity", "affinity", "t_star", "qcb", "lbp", "ubp", "pure_perr"];
    sweep(config, &cols, |state, _| {
        let moved = state.apply_local(&coding);
        let rep = helstrom_bounds(state, &moved, copies as u32)?;
        let exact = if copies == 1.0 {
            pure_perr(state, &moved).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        Ok(vec![rep.fidelity, rep.affinity, rep.t_star, rep.qcb, rep.lbp, rep.ubp, exact])
    })
}

/// Hellinger and Bures discords of response with their minimizers and the
/// implied bounds on the worst-case error probability. With `--metric` only
/// that discord is computed and the other columns are NaN.
pub fn run_discord(config: &RunConfig) -> Result<Table> {
    let cols = [
        "d_hellinger",
        "theta_hellinger",
        "xi_hellinger",
        "d_bures",
        "theta_bures",
        "xi_bures",
        "perr_max_lower",
        "perr_max_upper",
    ];
    let wanted = |m: Metric| config.metric.is_none_or(|c| c == m);
    sweep(config, &cols, |state, _| {
        let nan3 = [f64::NAN; 3];
        let (h, upper) = if wanted(Metric::Hellinger) {
            let d = discord_response(state, Metric::Hellinger)?;
            ([d.value, d.argmin_theta, d.argmin_xi], d.perr_max_upper)
        } else {
            (nan3, f64::NAN)
        };
        let (b, lower) = if wanted(Metric::Bures) {
            let d = discord_response(state, Metric::Bures)?;
            ([d.value, d.argmin_theta, d.argmin_xi], d.perr_max_lower)
        } else {
            (nan3, f64::NAN)
        };
        let mut row = h.to_vec();
        row.extend(b);
        row.extend([lower, upper]);
        Ok(row)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{GridSpec, Subcommand};

    #[test]
    fn state_rows_are_physical() {
        let cfg = RunConfig {
            family: Some(Family::Sts),
            ..RunConfig::new(Subcommand::State).with("r", 0.5)
        }
        .with_grid(GridSpec::new("nth1", 0.0, 2.0, 5).unwrap());
        let t = run_state(&cfg).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.columns[0], "nth1");
        assert!(t.column("physical").unwrap().iter().all(|&p| p == 1.0));
        let a = t.column("cov_00").unwrap();
        assert!((a[0] - 1f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn metric_rows() {
        let cfg = RunConfig {
            family: Some(Family::Sts),
            ..RunConfig::new(Subcommand::Metric).with("ns", 1.0)
        }
        .with_grid(GridSpec::new("nth", 0.0, 2.0, 3).unwrap());
        let t = run_metric(&cfg).unwrap();
        for q in t.column("qcb").unwrap() {
            assert!((q - 0.1).abs() < 1e-9);
        }
        let pe = t.column("pure_perr").unwrap();
        assert!(pe[0].is_finite() && pe[1].is_nan());
    }

    #[test]
    fn missing_family_is_a_usage_error() {
        let cfg = RunConfig::new(Subcommand::State);
        assert!(matches!(run_state(&cfg), Err(Error::Usage(_))));
        let cfg = RunConfig {
            family: Some(Family::Sts),
            ..RunConfig::new(Subcommand::State)
        }
        .with_grid(GridSpec::new("copies", 1.0, 2.0, 2).unwrap());
        assert!(matches!(run_state(&cfg), Err(Error::Usage(_))));
    }

    #[test]
    fn single_metric_discord() {
        let cfg = RunConfig {
            family: Some(Family::Sts),
            metric: Some(Metric::Hellinger),
            ..RunConfig::new(Subcommand::Discord).with("ns", 1.0).with("nth", 1.0)
        };
        let t = run_discord(&cfg).unwrap();
        assert!((t.rows[0][0] - 0.8).abs() < 1e-6);
        assert!(t.rows[0][3].is_nan());
    }
}
