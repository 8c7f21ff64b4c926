//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qreading::discord::{discord_response, verify_pi_half_extremal, Metric};
use qreading::distinguishability::{
    chernoff_min, closed_qcb_asym, closed_qcb_sym, fid_derivs, helstrom_bounds, q_t, qcb_derivs, qcb_noise_deriv,
};
use qreading::experiments::{
    run_copies, run_figure, run_threshold, run_validate, GridSpec, RunConfig, Subcommand, ValidateOptions,
};
use qreading::gaussian::{euler_traceless, make_sts, make_tss, phase_shift, Family, GaussianState};
use qreading::optimize::golden_section;
use qreading::Result;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn quarter(s: &GaussianState) -> GaussianState {
    s.apply_local(&phase_shift(FRAC_PI_2))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn plateau() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for n in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let s = make_sts(1f64.asinh(), n, n)?;
        worst = worst.max((helstrom_bounds(&s, &quarter(&s), 1)?.qcb - 0.1).abs());
        let (a, _, c) = s.standard_form_entries(1e-12).expect("standard form");
        worst_closed = worst_closed.max((closed_qcb_sym(a, c)? - 0.1).abs());
    }
    verdict(
        worst <= 1e-9 && worst_closed <= 1e-9,
        format!("max |QCB - 0.1| = {worst:.2e} (Gaussian), {worst_closed:.2e} (closed form)"),
    )
}

fn thresholds() -> Result<Verdict> {
    let a = run_threshold(0.5, 0.0)?;
    let b = run_threshold(1.0, 0.0)?;
    verdict(
        (a - 3.6).abs() <= 0.05 && (b - 2.6).abs() <= 0.05,
        format!("nth1* = {a:.4} at r = 0.5, {b:.4} at r = 1"),
    )
}

fn copies() -> Result<Verdict> {
    let sts = run_copies(Family::Sts, 0.1, 1.0, 0.125)?;
    let tss = run_copies(Family::Tss, 0.1, 1.0, 0.125)?;
    verdict(
        sts == 7 && (tss == 20 || tss == 21),
        format!("STS upper bound needs {sts} copies, TSS lower bound {tss}"),
    )
}

fn figure1(grid: GridSpec, nth1: Option<f64>) -> Result<qreading::experiments::Table> {
    let mut cfg = RunConfig::new(Subcommand::Figure).with_grid(grid);
    if let Some(n) = nth1 {
        cfg = cfg.with("nth1", n);
    }
    cfg.figure_id = Some(1);
    run_figure(&cfg)
}

fn figure1_orderings() -> Result<Verdict> {
    let t = figure1(GridSpec::new("n_t", 0.0, 10.0, 101)?, None)?;
    let (coh, sq) = (t.column("perr_coh").unwrap(), t.column("perr_sq_vac").unwrap());
    let coherent_wins = (1..coh.len()).all(|i| coh[i] < sq[i]);
    let window = |nth1: f64| -> Result<usize> {
        let t = figure1(GridSpec::new("n_t", 0.0, 60.0, 601)?, Some(nth1))?;
        let (q, l) = (t.column("qcb_sq_th").unwrap(), t.column("lbp_coh_th").unwrap());
        Ok((1..q.len()).filter(|&i| q[i] < l[i]).count())
    };
    let (w5, w8) = (window(5.0)?, window(8.0)?);
    verdict(
        coherent_wins && w5 > 0 && w8 > w5,
        format!("coherent < squeezed vacuum on (0, 10]: {coherent_wins}; advantage window {w5} points at nth1 = 5, {w8} at nth1 = 8"),
    )
}

fn theorem_one() -> Result<Verdict> {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst_sym: f64 = 0.0;
    let mut worst_arg: f64 = 0.0;
    for i in 0..200 {
        let s = if i % 2 == 0 {
            make_sts(rng.random_range(0.05..1.5), rng.random_range(0.0..4.0), rng.random_range(0.0..4.0))?
        } else {
            make_tss(rng.random_range(0.05..3.0), rng.random_range(0.0..4.0), rng.random_range(0.0..4.0))?
        };
        let u = euler_traceless(rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.25f64..4.0))?;
        let moved = s.apply_local(&u);
        for k in 0..21 {
            let t = (0.5 + k as f64) / 21.0;
            worst_sym = worst_sym.max((q_t(&s, &moved, t)? - q_t(&s, &moved, 1.0 - t)?).abs());
        }
        let lib = chernoff_min(&s, &moved)?.t_star;
        // direct search, no symmetry shortcut; on a flat Q_t any point is a
        // minimizer and 1/2 is one of them
        let (t_direct, q_direct) = golden_section(|t| q_t(&s, &moved, t).unwrap_or(f64::INFINITY), 0.01, 0.99, 1e-10);
        let q_half = q_t(&s, &moved, 0.5)?;
        let direct_err = if q_half - q_direct <= 1e-14 * q_half {
            0.0
        } else {
            (t_direct - 0.5).abs()
        };
        worst_arg = worst_arg.max((lib - 0.5).abs()).max(direct_err);
    }
    verdict(
        worst_sym <= 1e-8 && worst_arg <= 1e-6,
        format!("200 pairs: max |Q_t - Q_(1-t)| = {worst_sym:.2e}, max |t* - 1/2| = {worst_arg:.2e}"),
    )
}

fn pi_half_extremal() -> Result<Verdict> {
    let grid = [0.0, 0.5, 1.0, 2.0, 4.0];
    let mut failures = Vec::new();
    let mut count = 0;
    for r in [0.25f64, 0.5, 1.0] {
        for &n1 in &grid {
            for &n2 in &grid {
                for (name, s) in [("sts", make_sts(r, n1, n2)?), ("tss", make_tss(r.sinh().powi(2), n1, n2)?)] {
                    count += 1;
                    let (ok, (theta, xi)) = verify_pi_half_extremal(&s)?;
                    if !ok {
                        failures.push(format!("{name}({r}, {n1}, {n2}) -> theta {theta:.4}, xi {xi:.6}"));
                    }
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("{} of {count} states minimized at xi = 1 {}", count - failures.len(), failures.join("; ")),
    )
}

fn derivatives() -> Result<Verdict> {
    const H: f64 = 1e-5;
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut signs_ok = true;
    for _ in 0..100 {
        let s = make_sts(rng.random_range(0.05..1.5), 0.0, 0.0)?;
        let n = rng.random_range(0.05..4.0);
        let s = s.add_thermal_noise(n, n)?;
        let (a, _, c) = s.standard_form_entries(1e-12).expect("standard form");
        let (qa, qc) = qcb_derivs(a, c)?;
        let (fa, fc) = fid_derivs(a, c)?;
        let fd = |f: &dyn Fn(f64, f64) -> Result<f64>, da: f64, dc: f64| -> Result<f64> {
            Ok((f(a + da, c + dc)? - f(a - da, c - dc)?) / (2.0 * H))
        };
        let qs = |a, c| closed_qcb_sym(a, c);
        let fs = |a, c| qreading::distinguishability::closed_fid_sym(a, c);
        worst = worst
            .max(rel(qa, fd(&qs, H, 0.0)?))
            .max(rel(qc, fd(&qs, 0.0, H)?))
            .max(rel(fa, fd(&fs, H, 0.0)?))
            .max(rel(fc, fd(&fs, 0.0, H)?));
        signs_ok &= qa >= 0.0 && qc <= 0.0 && fa >= 0.0 && fc <= 0.0;

        let r: f64 = rng.random_range(0.05..1.5);
        let n2: f64 = rng.random_range(0.0..4.0);
        let mut n1: f64 = rng.random_range(0.05..4.0);
        if (n1 - n2).abs() < 0.05 {
            n1 += 0.1;
        }
        let q = |n1: f64| -> Result<f64> {
            let (a, b, c) = make_sts(r, n1, n2)?.standard_form_entries(1e-12).expect("standard form");
            closed_qcb_asym(a, b, c)
        };
        let d = qcb_noise_deriv(r, n1, n2)?;
        worst = worst.max(rel(d, (q(n1 + H)? - q(n1 - H)?) / (2.0 * H)));
        signs_ok &= d.signum() == (n2 - n1).signum();
    }
    verdict(
        worst <= 1e-6 && signs_ok,
        format!("100 points: max relative error {worst:.2e}; sign properties hold: {signs_ok}"),
    )
}

fn asymptotic_vanishing() -> Result<Verdict> {
    let q = |n1: f64| -> Result<f64> {
        let (a, b, c) = make_sts(0.5, n1, 1.0)?.standard_form_entries(1e-12).expect("standard form");
        closed_qcb_asym(a, b, c)
    };
    let steps = 400;
    let ratio = (1000.0f64 / 2.0).powf(1.0 / steps as f64);
    let values: Vec<f64> = (0..=steps)
        .map(|i| q(if i == steps { 1000.0 } else { 2.0 * ratio.powi(i) }))
        .collect::<Result<_>>()?;
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let last = *values.last().unwrap();
    verdict(
        decreasing && last < 0.005,
        format!("strictly decreasing on [2, 1000]: {decreasing}; QCB(1000) = {last:.3e}"),
    )
}

fn oracle_equivalence() -> Result<Verdict> {
    let opts = ValidateOptions::from_config(&RunConfig::new(Subcommand::Validate))?;
    let rep = run_validate(&opts)?;
    verdict(
        rep.passed() && rep.compared() > 0,
        format!(
            "cutoff {}: {} points compared, {} truncated, {} failed; max deviation fidelity {:.2e}, affinity {:.2e}, Q_0.3 {:.2e}; {} sandwich violations",
            rep.cutoff,
            rep.compared(),
            rep.truncated,
            rep.failed,
            rep.max_dev_fidelity,
            rep.max_dev_affinity,
            rep.max_dev_q_t,
            rep.sandwich_violations
        ),
    )
}

fn discord_monotonicity() -> Result<Verdict> {
    let series = |states: &[GaussianState], m: Metric| -> Result<Vec<f64>> {
        states.iter().map(|s| discord_response(s, m).map(|d| d.value)).collect()
    };
    let grid: Vec<f64> = (0..=8).map(|n| n as f64).collect();
    let sts: Vec<GaussianState> = grid.iter().map(|&n| make_sts(0.8, n, 0.0)).collect::<Result<_>>()?;
    let tss: Vec<GaussianState> = grid.iter().map(|&n| make_tss(1.0, n, n)).collect::<Result<_>>()?;
    let mut parts = Vec::new();
    let mut pass = true;
    for m in [Metric::Hellinger, Metric::Bures] {
        let up = series(&sts, m)?;
        let down = series(&tss, m)?;
        let inc = up.windows(2).all(|w| w[1] >= w[0]);
        let dec = down.windows(2).all(|w| w[1] <= w[0]);
        pass &= inc && dec;
        parts.push(format!(
            "{m:?}: STS {:.4} -> {:.4} non-decreasing {inc}, TSS {:.4} -> {:.4} non-increasing {dec}",
            up[0], up[8], down[0], down[8]
        ));
    }
    verdict(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Verdict>); 10] = [
        ("constant Chernoff plateau", plateau),
        ("noise thresholds", thresholds),
        ("copy counts", copies),
        ("figure 1 orderings", figure1_orderings),
        ("symmetry of Q_t under traceless codings", theorem_one),
        ("quarter-turn extremality", pi_half_extremal),
        ("derivative formulas", derivatives),
        ("asymptotic vanishing", asymptotic_vanishing),
        ("oracle equivalence", oracle_equivalence),
        ("discord monotonicity", discord_monotonicity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
