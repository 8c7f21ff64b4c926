//! `qreading`: figure data, noise thresholds, copy counts and oracle
//! validation as CSV or JSON.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use log::LevelFilter;

use qreading::discord::Metric;
use qreading::experiments::{
    run_copies, run_discord, run_figure, run_metric, run_state, run_threshold, run_validate, Format, GridSpec,
    RunConfig, Subcommand, Table, ValidateOptions,
};
use qreading::gaussian::Family;
use qreading::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qreading", version, about = "Gaussian quantum reading: bounds, discords and figure data")]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand, Debug)]
enum Command {
    /// Covariance matrix, purity and photon number of a family state.
    State(Params),
    /// Fidelity, Chernoff bound and error bounds under local coding.
    Metric(Params),
    /// Hellinger and Bures discords of response.
    Discord(Params),
    /// Data behind one of the nine figures.
    Figure {
        /// Figure number, 1 to 9.
        id: u8,
        #[command(flatten)]
        params: Params,
    },
    /// Thermal noise on mode 1 above which the squeezed thermal Chernoff
    /// bound beats the squeezed vacuum with the same squeezing.
    Threshold(Params),
    /// Copies needed to reach a target error probability.
    Copies(Params),
    /// Compare every Gaussian metric with the truncated Fock oracle.
    Validate {
        #[command(flatten)]
        params: Params,
        /// Comma-separated families to sweep (default all; empty for none).
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<String>>,
        /// Largest lost probability mass for a compared point.
        #[arg(long)]
        tail: Option<f64>,
        /// Relabel the Gaussian covariance with the wrong vacuum convention.
        #[arg(long, hide = true)]
        convention_fault: bool,
    },
}

#[derive(Args, Debug, Default)]
struct Params {
    /// Two-mode squeezing.
    #[arg(long)]
    r: Option<f64>,
    /// Thermal photons on mode 1.
    #[arg(long)]
    nth1: Option<f64>,
    /// Thermal photons on mode 2.
    #[arg(long)]
    nth2: Option<f64>,
    /// Thermal photons on both modes.
    #[arg(long)]
    nth: Option<f64>,
    /// Squeezing photons, `sinh² r`.
    #[arg(long)]
    ns: Option<f64>,
    /// Real part of the coherent amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Imaginary part of the coherent amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Squeezing applied after the thermal noise.
    #[arg(long)]
    rprime: Option<f64>,
    /// Phase-shift coding angle.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Rotation angle of a general local coding.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Single-mode squeezing factor of a general local coding.
    #[arg(long)]
    xi: Option<f64>,
    /// Number of copies.
    #[arg(long)]
    copies: Option<f64>,
    /// Target error probability.
    #[arg(long)]
    target: Option<f64>,
    /// State family: sts, tss, coh-th, sdts or stsds.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Restrict the discord to one metric: hellinger or bures.
    #[arg(long, value_parser = parse_metric)]
    metric: Option<Metric>,
    /// Swept parameter, `name:min:max:steps` (repeatable).
    #[arg(long, value_parser = parse_grid)]
    grid: Vec<GridSpec>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<String>,
    /// csv or json.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Photon-number cutoff per mode for the Fock oracle.
    #[arg(long)]
    cutoff: Option<usize>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Params {
    fn config(&self, subcommand: Subcommand) -> RunConfig {
        let mut cfg = RunConfig::new(subcommand);
        let named = [
            ("r", self.r),
            ("nth1", self.nth1),
            ("nth2", self.nth2),
            ("nth", self.nth),
            ("ns", self.ns),
            ("alpha", self.alpha),
            ("alpha_im", self.alpha_im),
            ("rprime", self.rprime),
            ("phi", self.phi),
            ("theta", self.theta),
            ("xi", self.xi),
            ("copies", self.copies),
            ("target", self.target),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                cfg = cfg.with(name, v);
            }
        }
        for g in &self.grid {
            cfg = cfg.with_grid(g.clone());
        }
        cfg.family = self.family;
        cfg.metric = self.metric;
        cfg.output = self.out.clone();
        cfg.format = self.format;
        cfg.cutoff = self.cutoff;
        cfg
    }
}

/// A finished run: the table to print and whether it counts as a failure.
struct Outcome {
    config: RunConfig,
    table: Table,
    failed: bool,
}

fn scalar_table(columns: &[&str], row: Vec<f64>) -> Table {
    let mut t = Table::new(columns);
    t.rows.push(row);
    t
}

fn run(command: Command) -> qreading::Result<Outcome> {
    let done = |config: RunConfig, table: Table| Outcome {
        config,
        table,
        failed: false,
    };
    match command {
        Command::State(p) => {
            let cfg = p.config(Subcommand::State);
            let t = run_state(&cfg)?;
            Ok(done(cfg, t))
        }
        Command::Metric(p) => {
            let cfg = p.config(Subcommand::Metric);
            let t = run_metric(&cfg)?;
            Ok(done(cfg, t))
        }
        Command::Discord(p) => {
            let cfg = p.config(Subcommand::Discord);
            let t = run_discord(&cfg)?;
            Ok(done(cfg, t))
        }
        Command::Figure { id, params } => {
            let mut cfg = params.config(Subcommand::Figure);
            cfg.figure_id = Some(id);
            let t = run_figure(&cfg)?;
            Ok(done(cfg, t))
        }
        Command::Threshold(p) => {
            let cfg = p.config(Subcommand::Threshold);
            let r = cfg.require("r")?;
            let n2 = cfg.get_or("nth2", 0.0);
            let n1 = run_threshold(r, n2)?;
            Ok(done(cfg, scalar_table(&["r", "nth2", "nth1_threshold"], vec![r, n2, n1])))
        }
        Command::Copies(p) => {
            let cfg = p.config(Subcommand::Copies);
            let family = cfg.family.ok_or_else(|| Error::Usage("missing --family".into()))?;
            let ns = cfg.require("ns")?;
            let nth = cfg.require("nth")?;
            let target = cfg.get_or("target", 0.125);
            let n = run_copies(family, ns, nth, target)?;
            let mut t = scalar_table(&["ns", "nth", "target", "copies"], vec![ns, nth, target, n as f64]);
            t.notes.push(format!("family: {}", family.name()));
            Ok(done(cfg, t))
        }
        Command::Validate {
            params,
            families,
            tail,
            convention_fault,
        } => {
            let mut cfg = params.config(Subcommand::Validate);
            if let Some(tail) = tail {
                cfg = cfg.with("tail", tail);
            }
            if convention_fault {
                cfg = cfg.with("convention_fault", 1.0);
            }
            let mut opts = ValidateOptions::from_config(&cfg)?;
            if let Some(names) = families {
                opts.families = names
                    .iter()
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<Family>().map_err(Error::Usage))
                    .collect::<qreading::Result<_>>()?;
            }
            let report = run_validate(&opts)?;
            for p in &report.points {
                if let Some(msg) = &p.message {
                    log::error!("{} {:?}: {msg}", p.family.name(), p.params);
                }
            }
            let failed = !report.passed();
            Ok(Outcome {
                config: cfg,
                table: report.to_table(),
                failed,
            })
        }
    }
}

fn emit(outcome: &Outcome) -> std::io::Result<()> {
    let text = outcome.table.render(&outcome.config);
    match &outcome.config.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    match run(cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_FAILURE);
            }
            if outcome.failed {
                eprintln!("error: validation failed");
                return ExitCode::from(EXIT_FAILURE);
            }
            ExitCode::SUCCESS
        }
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
