//! Data tables behind the nine figures. Each figure has default grids and
//! fixed parameters that flags may override.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{grid_points, GridSpec, RunConfig, Table};
use crate::distinguishability::{closed_qcb_asym, helstrom_bounds, pure_perr, MetricReport};
use crate::error::{Error, Result};
use crate::gaussian::{
    make_coherent_thermal, make_sts, make_stsds, make_tss, phase_shift, GaussianState,
};

/// Bounds for a state against its quarter-turn image.
fn report(state: &GaussianState, copies: u32) -> Result<MetricReport> {
    helstrom_bounds(state, &state.apply_local(&phase_shift(FRAC_PI_2)), copies)
}

fn exact_perr(state: &GaussianState) -> Result<f64> {
    pure_perr(state, &state.apply_local(&phase_shift(FRAC_PI_2)))
}

/// Squeezing `r ≥ 0` with `cosh 2r = x`, or `None` when `x < 1`.
fn r_from_cosh2(x: f64) -> Option<f64> {
    // tolerate rounding at the feasibility edge
    if x < 1.0 - 1e-12 {
        None
    } else {
        Some(0.5 * x.max(1.0).acosh())
    }
}

/// Two-mode squeezed vacuum with `n_t` photons in total.
fn tmsv(n_t: f64) -> Result<GaussianState> {
    make_sts((0.5 * n_t).sqrt().asinh(), 0.0, 0.0)
}

/// Squeezed thermal state with `n_t` photons in total at the given thermal
/// occupations.
fn sts_at(n_t: f64, n1: f64, n2: f64) -> Result<Option<(f64, GaussianState)>> {
    match r_from_cosh2((n_t + 1.0) / (1.0 + n1 + n2)) {
        Some(r) => Ok(Some((r, make_sts(r, n1, n2)?))),
        None => Ok(None),
    }
}

/// Coherent thermal state with the same photon number as the squeezed
/// thermal state above: `|α|² = n_t − n1 − n2`.
fn coh_th_at(n_t: f64, n1: f64, n2: f64) -> Result<Option<GaussianState>> {
    let a2 = n_t - n1 - n2;
    if a2 < -1e-12 {
        return Ok(None);
    }
    make_coherent_thermal(Complex64::new(a2.max(0.0).sqrt(), 0.0), n1, n2).map(Some)
}

struct Layout {
    grids: Vec<GridSpec>,
    columns: Vec<&'static str>,
}

type RowFn = dyn Fn(&RunConfig, &BTreeMap<String, f64>) -> Result<Vec<f64>> + Sync;

fn build(config: &RunConfig, layout: Layout, row: &RowFn) -> Result<Table> {
    let allowed: Vec<&str> = layout.grids.iter().map(|g| g.name.as_str()).collect();
    config.check_grid_names(&allowed)?;
    let grids: Vec<GridSpec> = layout
        .grids
        .iter()
        .map(|g| config.grid_or(&g.name, g.min, g.max, g.steps))
        .collect();
    let rows = grid_points(&grids)
        .par_iter()
        .map(|pt| {
            let mut r: Vec<f64> = grids.iter().map(|g| pt[&g.name]).collect();
            r.extend(row(config, pt)?);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header: Vec<&str> = grids.iter().map(|g| g.name.as_str()).collect();
    header.extend(layout.columns.iter().copied());
    let mut table = Table::new(&header);
    table.rows = rows;
    Ok(table)
}

fn grid(name: &str, min: f64, max: f64, steps: usize) -> GridSpec {
    GridSpec {
        name: name.to_string(),
        min,
        max,
        steps,
    }
}

const NAN: f64 = f64::NAN;

/// Data for figure `config.figure_id` (1 to 9).
pub fn run_figure(config: &RunConfig) -> Result<Table> {
    let id = config
        .figure_id
        .ok_or_else(|| Error::Usage("missing figure id".into()))?;
    match id {
        1 => figure1(config),
        2 => figure2(config),
        3 => figure3(config),
        4 => figure4(config),
        5 => figure5(config),
        6 => figure6(config),
        7 => figure78(config, 0.5),
        8 => figure78(config, 1.0),
        9 => figure9(config),
        _ => Err(Error::Usage(format!("figure id must be 1 to 9, got {id}"))),
    }
}

/// Noise-free error probabilities at equal photon number (squeezed vacuum,
/// coherent, squeezed displaced vacuum with half the photons in the
/// displacement) and, at thermal occupations `nth1`, `nth2` (default 5, 0),
/// the squeezed thermal Chernoff bound against the coherent thermal lower
/// bound.
fn figure1(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("n_t", 0.0, 60.0, 601)],
        columns: vec![
            "perr_sq_vac",
            "perr_coh",
            "perr_sq_coh",
            "qcb_sq_vac",
            "qcb_sq_th",
            "lbp_coh_th",
        ],
    };
    build(config, layout, &|cfg, pt| {
        let n_t = pt["n_t"];
        let (n1, n2) = (cfg.get_or("nth1", 5.0), cfg.get_or("nth2", 0.0));
        let vac = tmsv(n_t)?;
        let coh = make_coherent_thermal(Complex64::new(n_t.sqrt(), 0.0), 0.0, 0.0)?;
        // |β|² = n_t/2 and n_t = |β|² cosh 2r′ + cosh 2r′ − 1
        let beta2 = 0.5 * n_t;
        let rp = r_from_cosh2((n_t + 1.0) / (1.0 + beta2)).unwrap_or(0.0);
        let sq_coh = make_stsds(0.0, 0.0, 0.0, rp, Complex64::new(beta2.sqrt(), 0.0))?;
        let qcb_th = match sts_at(n_t, n1, n2)? {
            Some((_, s)) => report(&s, 1)?.qcb,
            None => NAN,
        };
        let lbp_coh = match coh_th_at(n_t, n1, n2)? {
            Some(s) => report(&s, 1)?.lbp,
            None => NAN,
        };
        Ok(vec![
            exact_perr(&vac)?,
            exact_perr(&coh)?,
            exact_perr(&sq_coh)?,
            report(&vac, 1)?.qcb,
            qcb_th,
            lbp_coh,
        ])
    })
}

/// `QCB^{sq-th} − LBP^{coh-th}` over photon number and `nth1` at fixed
/// `nth2` (default 0), with the purity of the squeezed thermal state.
fn figure2(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("n_t", 0.0, 60.0, 121), grid("nth1", 0.0, 10.0, 41)],
        columns: vec!["purity", "r", "qcb_sq_th", "lbp_coh_th", "difference"],
    };
    build(config, layout, &|cfg, pt| {
        let (n_t, n1) = (pt["n_t"], pt["nth1"]);
        let n2 = cfg.get_or("nth2", 0.0);
        let purity = 1.0 / ((1.0 + 2.0 * n1) * (1.0 + 2.0 * n2));
        let (Some((r, sts)), Some(coh)) = (sts_at(n_t, n1, n2)?, coh_th_at(n_t, n1, n2)?) else {
            return Ok(vec![purity, NAN, NAN, NAN, NAN]);
        };
        let q = report(&sts, 1)?.qcb;
        let l = report(&coh, 1)?.lbp;
        Ok(vec![purity, r, q, l, q - l])
    })
}

/// Symmetric squeezed thermal against thermal squeezed states at equal
/// photon number and thermal noise `nth` (default 0.2), undisplaced and with
/// `|α|² = (n_t − 2 nth)/2`. Upper bounds of the displaced pairs are the
/// Bhattacharyya bound `affinity/2`.
fn figure3(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("n_t", 0.0, 20.0, 201)],
        columns: vec![
            "sts_qcb", "sts_lbp", "tss_qcb", "tss_lbp", "dsts_ubp", "dsts_lbp", "dtss_ubp", "dtss_lbp",
        ],
    };
    build(config, layout, &|cfg, pt| {
        let n_t = pt["n_t"];
        let n = cfg.get_or("nth", 0.2);
        let x = n_t - 2.0 * n;
        if x < -1e-12 {
            return Ok(vec![NAN; 8]);
        }
        let x = x.max(0.0);
        let sts = report(&sts_at(n_t, n, n)?.map(|p| p.1).expect("feasible"), 1)?;
        let tss = report(&make_tss(0.5 * x, n, n)?, 1)?;
        let alpha = Complex64::new((0.5 * x).sqrt(), 0.0);
        let a2 = 0.5 * x;
        let r = r_from_cosh2((n_t + 1.0) / (2.0 * n + 1.0 + a2)).unwrap_or(0.0);
        let rp = r_from_cosh2((n_t + 1.0 - 2.0 * n) / (1.0 + a2)).unwrap_or(0.0);
        let dsts = report(&make_stsds(r, n, n, 0.0, alpha)?, 1)?;
        let dtss = report(&make_stsds(0.0, n, n, rp, alpha)?, 1)?;
        Ok(vec![
            sts.qcb,
            sts.lbp,
            tss.qcb,
            tss.lbp,
            0.5 * dsts.affinity,
            dsts.lbp,
            0.5 * dtss.affinity,
            dtss.lbp,
        ])
    })
}

/// Chernoff bound and fidelity lower bound against symmetric thermal noise
/// at `ns` squeezed photons (default 1).
fn figure4(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("nth", 0.0, 10.0, 101)],
        columns: vec!["qcb_tss", "lbp_tss", "qcb_sts", "lbp_sts"],
    };
    build(config, layout, &|cfg, pt| {
        let n = pt["nth"];
        let ns = cfg.get_or("ns", 1.0);
        let tss = report(&make_tss(ns, n, n)?, 1)?;
        let sts = report(&make_sts(ns.sqrt().asinh(), n, n)?, 1)?;
        Ok(vec![tss.qcb, tss.lbp, sts.qcb, sts.lbp])
    })
}

/// Chernoff bound of non-symmetric squeezed thermal states against `nth1`
/// at fixed `r` (default 0.5) and `nth2` (default 1), by the general
/// Gaussian route and by the closed form `(ab − c²)/(2ab − c²)`. The two
/// coincide only at `nth1 = nth2`; away from it the closed form lies above.
fn figure5(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("nth1", 0.0, 10.0, 101)],
        columns: vec!["qcb", "qcb_closed", "lbp"],
    };
    build(config, layout, &|cfg, pt| {
        let n1 = pt["nth1"];
        let (r, n2) = (cfg.get_or("r", 0.5), cfg.get_or("nth2", 1.0));
        let s = make_sts(r, n1, n2)?;
        let (a, b, c) = s.standard_form_entries(1e-12).expect("standard form");
        let rep = report(&s, 1)?;
        Ok(vec![rep.qcb, closed_qcb_asym(a, b, c)?, rep.lbp])
    })
}

/// Squeezed vacuum error probability against the squeezed thermal lower
/// bound (`nth1` default 1, `nth2` default 0) at equal photon number; both
/// squeezings grow with `n_t`.
fn figure6(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("n_t", 1.0, 30.0, 146)],
        columns: vec!["r_tmsv", "r_sts", "perr_sq_vac", "lbp_sq_th"],
    };
    build(config, layout, &|cfg, pt| {
        let n_t = pt["n_t"];
        let (n1, n2) = (cfg.get_or("nth1", 1.0), cfg.get_or("nth2", 0.0));
        let r_v = (0.5 * n_t).sqrt().asinh();
        let perr = exact_perr(&tmsv(n_t)?)?;
        match sts_at(n_t, n1, n2)? {
            Some((r, s)) => Ok(vec![r_v, r, perr, report(&s, 1)?.lbp]),
            None => Ok(vec![r_v, NAN, perr, NAN]),
        }
    })
}

/// At fixed squeezing (0.5 for figure 7, 1 for figure 8, or `--r`) and
/// `nth2` (default 0): squeezed thermal bounds against `nth1`, the squeezed
/// vacuum error probability at the same photon number and at the same
/// squeezing. `qcb_closed` is the closed non-symmetric form.
fn figure78(config: &RunConfig, default_r: f64) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("nth1", 0.0, 10.0, 101)],
        columns: vec!["n_t", "perr_sq_vac", "perr_sq_vac_same_r", "qcb_sq_th", "qcb_closed", "lbp_sq_th"],
    };
    build(config, layout, &move |cfg, pt| {
        let n1 = pt["nth1"];
        let (r, n2) = (cfg.get_or("r", default_r), cfg.get_or("nth2", 0.0));
        let s = make_sts(r, n1, n2)?;
        let n_t = s.total_photons()?;
        let rep = report(&s, 1)?;
        let (a, b, c) = s.standard_form_entries(1e-12).expect("standard form");
        Ok(vec![
            n_t,
            exact_perr(&tmsv(n_t)?)?,
            exact_perr(&make_sts(r, 0.0, 0.0)?)?,
            rep.qcb,
            closed_qcb_asym(a, b, c)?,
            rep.lbp,
        ])
    })
}

/// Bounds against the number of copies for squeezed thermal and thermal
/// squeezed states at `ns` (default 0.1) and symmetric `nth` (default 1).
fn figure9(config: &RunConfig) -> Result<Table> {
    let layout = Layout {
        grids: vec![grid("copies", 1.0, 40.0, 40)],
        columns: vec!["qcb_tss", "lbp_tss", "qcb_sts", "lbp_sts"],
    };
    let ns = config.get_or("ns", 0.1);
    let n = config.get_or("nth", 1.0);
    let tss = report(&make_tss(ns, n, n)?, 1)?;
    let sts = report(&make_sts(ns.sqrt().asinh(), n, n)?, 1)?;
    build(config, layout, &move |_, pt| {
        let k = pt["copies"];
        if !(k >= 1.0 && (k - k.round()).abs() < 1e-9) {
            return Err(Error::Usage(format!("copies must be positive integers, got {k}")));
        }
        let k = k.round() as u32;
        let (t, s) = (tss.with_copies(k)?, sts.with_copies(k)?);
        Ok(vec![t.qcb, t.lbp, s.qcb, s.lbp])
    })
}
