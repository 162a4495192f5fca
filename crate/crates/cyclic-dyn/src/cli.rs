//! The `cyclic-dyn` command-line interface.
//!
//! Subcommands: `simulate` (seeded experiments, JSON/CSV), `theory` (exact
//! limiting fractions), `catalan` (exact counts), `cone` (cone volumes,
//! exact and Monte Carlo), `vr` (Rips core of one sampled system), and
//! `report` (theory-vs-observation z-scores for a saved experiment).
//!
//! Exit codes: 0 success, 2 usage error (bad flags or flag values), 1
//! runtime error (I/O, malformed input files, internal failures). Output
//! documents carry `"schema": "cyclic-dyn/1"`, the seed, and the RNG
//! derivation string; the same invocation produces byte-identical output.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::catalan::{
    catalan, catalan_bounded, catalan_prime, predicted_level_fraction,
    predicted_periodic_fraction, predicted_swift_fraction,
};
use crate::circle::{build_map, sample_uniform, Scale};
use crate::cone::{build_cone, ConeEstimate, ConeFamily};
use crate::dynamics::orbit_report;
use crate::error::Error;
use crate::montecarlo::{
    aggregate, compare_with_theory, run_experiment, trial_rng, Aggregate, ExperimentConfig,
    TheoryReport, TrialResult, RNG_SPEC,
};
use crate::vr::{classify_homotopy, dismantle_to_core, expected_sphere_dimension, HomotopyType};

/// Schema tag written into (and required from) every JSON document.
pub const SCHEMA: &str = "cyclic-dyn/1";

#[derive(Parser)]
#[command(
    name = "cyclic-dyn",
    version,
    about = "Simulation and exact combinatorics for the circle map f_r"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded random-sample experiments and write JSON or CSV
    Simulate(SimulateArgs),
    /// Print the exact limiting level/swiftness/periodic fractions
    Theory(TheoryArgs),
    /// Print one exact combinatorial count
    Catalan(CatalanArgs),
    /// Integrate a constraint cone exactly and/or by Monte Carlo
    Cone(ConeArgs),
    /// Sample one system and analyze its Vietoris-Rips core
    Vr(VrArgs),
    /// Compare a saved experiment file against the exact theory
    Report(ReportArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Points per sample
    #[arg(long)]
    n: usize,
    /// Scale: `P/Q` or `fixed:0.DIGITS` (truncated to 2^-64 ticks)
    #[arg(long)]
    r: String,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Deepest level reported as its own column/statistic
    #[arg(long, default_value_t = 64)]
    i_max: usize,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Args)]
struct TheoryArgs {
    /// Scale: `P/Q` or `fixed:0.DIGITS`
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 8)]
    i_max: usize,
}

#[derive(Args)]
struct CatalanArgs {
    /// C = Catalan, Cb = height-bounded, Cp = bounded with h extra up-steps
    #[arg(long, value_enum)]
    family: CatalanFamily,
    #[arg(long)]
    i: usize,
    /// Height bound (required for Cb and Cp)
    #[arg(long)]
    h: Option<usize>,
}

#[derive(Args)]
struct ConeArgs {
    #[arg(long, value_enum)]
    family: ConeFamilyArg,
    #[arg(long)]
    i: usize,
    /// Denominator parameter (required for Kq and S)
    #[arg(long)]
    q: Option<u64>,
    /// Monte Carlo sample count; omitting it implies --exact
    #[arg(long)]
    samples: Option<u64>,
    /// Compute the exact rational volume
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VrArgs {
    #[arg(long)]
    n: usize,
    /// Scale below 1/2: `P/Q` or `fixed:0.DIGITS`
    #[arg(long)]
    r: String,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    /// Experiment JSON produced by `simulate`
    #[arg(long = "in")]
    input: PathBuf,
    /// Deepest level/swiftness row in the table
    #[arg(long, default_value_t = 6)]
    i_show: usize,
    /// Also write the comparison as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CatalanFamily {
    #[value(name = "C")]
    C,
    #[value(name = "Cb")]
    Cb,
    #[value(name = "Cp")]
    Cp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConeFamilyArg {
    #[value(name = "K")]
    K,
    #[value(name = "Kq")]
    Kq,
    #[value(name = "S")]
    S,
}

/// A command failure: exit code plus a one-line diagnostic.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(e: impl Display) -> Failure {
        Failure {
            code: 2,
            msg: e.to_string(),
        }
    }

    fn runtime(e: impl Display) -> Failure {
        Failure {
            code: 1,
            msg: e.to_string(),
        }
    }
}

/// Parses argv, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, out),
        Command::Theory(args) => cmd_theory(args, out),
        Command::Catalan(args) => cmd_catalan(args, out),
        Command::Cone(args) => cmd_cone(args, out),
        Command::Vr(args) => cmd_vr(args, out),
        Command::Report(args) => cmd_report(args, out),
    }
}

/// Parses `P/Q` or `fixed:0.DIGITS` (decimal truncated to ticks; the exact
/// tick count is what every output echoes).
pub fn parse_scale(s: &str) -> crate::Result<Scale> {
    if let Some(rest) = s.strip_prefix("fixed:") {
        let (int, frac) = rest
            .split_once('.')
            .ok_or_else(|| Error::InvalidScale(format!("fixed scale needs a decimal point: {s}")))?;
        if !(int.is_empty() || int == "0") {
            return Err(Error::InvalidScale(format!(
                "fixed scale must be below 1: {s}"
            )));
        }
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidScale(format!(
                "fixed scale needs decimal digits: {s}"
            )));
        }
        let digits: BigUint = frac.parse().expect("checked digits");
        let num = (digits << 64u32) / BigUint::from(10u32).pow(frac.len() as u32);
        Scale::fixed(num.to_u64().expect("fraction below 1 fits in 64 bits"))
    } else if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::InvalidScale(format!("bad numerator in {s}")))?;
        let q: u64 = q
            .parse()
            .map_err(|_| Error::InvalidScale(format!("bad denominator in {s}")))?;
        Scale::rational(p, q)
    } else {
        Err(Error::InvalidScale(format!(
            "scale must be P/Q or fixed:0.DIGITS, got {s}"
        )))
    }
}

/// One experiment as serialized by `simulate --format json`.
#[derive(Serialize, Deserialize)]
pub struct ExperimentDoc {
    pub schema: String,
    pub command: String,
    pub rng: String,
    /// Human-readable echo of the exact scale (`p/q` or `num/2^64`).
    pub scale_display: String,
    pub config: ExperimentConfig,
    pub aggregate: Aggregate,
    #[serde(default)]
    pub rows: Vec<TrialResult>,
}

fn cmd_simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let scale = parse_scale(&args.r).map_err(Failure::usage)?;
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    if args.i_max > 4096 {
        return Err(Failure::usage("--i-max above 4096 is not supported"));
    }
    let config = ExperimentConfig {
        n: args.n,
        scale,
        trials: args.trials,
        seed: args.seed,
        i_max: args.i_max,
        // Swiftness types exist only at rational scales; tally them there.
        swift: scale.as_rational().is_some(),
    };
    let rows = run_experiment(&config).map_err(Failure::runtime)?;
    let agg = aggregate(&config, &rows);
    let text = match args.format.unwrap_or(OutFormat::Json) {
        OutFormat::Json => {
            let doc = ExperimentDoc {
                schema: SCHEMA.into(),
                command: "simulate".into(),
                rng: RNG_SPEC.into(),
                scale_display: scale.to_string(),
                config,
                aggregate: agg,
                rows,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(Failure::runtime)?;
            s.push('\n');
            s
        }
        OutFormat::Csv => csv_string(&config, &rows)?,
    };
    match args.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::runtime),
        None => out.write_all(text.as_bytes()).map_err(Failure::runtime),
    }
}

fn csv_string(config: &ExperimentConfig, rows: &[TrialResult]) -> Result<String, Failure> {
    let mut s = String::from("trial,per");
    for i in 0..=config.i_max {
        s.push_str(&format!(",lev_{i}"));
    }
    s.push_str(",orbit_count,ell,w,wf_num,wf_den\n");
    for row in rows {
        if row.levels.len() > config.i_max + 1 {
            return Err(Failure::runtime(format!(
                "trial {} reached level {}; rerun with --i-max at least {}",
                row.trial,
                row.levels.len() - 1,
                row.levels.len() - 1
            )));
        }
        s.push_str(&format!("{},{}", row.trial, row.per));
        for i in 0..=config.i_max {
            s.push_str(&format!(",{}", row.levels.get(i).copied().unwrap_or(0)));
        }
        s.push_str(&format!(
            ",{},{},{},{},{}\n",
            row.orbit_count, row.ell, row.w, row.w, row.ell
        ));
    }
    Ok(s)
}

fn cmd_theory(args: TheoryArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let scale = parse_scale(&args.r).map_err(Failure::usage)?;
    let go = || -> crate::Result<String> {
        let mut s = String::new();
        match scale.as_rational() {
            Some((p, q)) => {
                s.push_str(&format!("scale: {scale} (rational, p={p} q={q})\n"));
                s.push_str(&format!(
                    "periodic fraction: {}\n",
                    predicted_periodic_fraction(scale)
                ));
                s.push_str(&format!(
                    "{:>4}  {:<24}{:<24}\n",
                    "i", "level_fraction", "swift_fraction"
                ));
                for i in 0..=args.i_max {
                    let lev = predicted_level_fraction(i, scale);
                    let swi = predicted_swift_fraction(i, p, q)?;
                    s.push_str(&format!("{i:>4}  {:<24}{:<24}\n", lev.to_string(), swi.to_string()));
                }
            }
            None => {
                s.push_str(&format!("scale: {scale} (fixed)\n"));
                s.push_str(&format!(
                    "periodic fraction: {}\n",
                    predicted_periodic_fraction(scale)
                ));
                s.push_str("swift fractions need a rational scale; column omitted\n");
                s.push_str(&format!("{:>4}  {:<24}\n", "i", "level_fraction"));
                for i in 0..=args.i_max {
                    let lev = predicted_level_fraction(i, scale);
                    s.push_str(&format!("{i:>4}  {:<24}\n", lev.to_string()));
                }
            }
        }
        Ok(s)
    };
    let text = go().map_err(Failure::usage)?;
    out.write_all(text.as_bytes()).map_err(Failure::runtime)
}

fn cmd_catalan(args: CatalanArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let value = match args.family {
        CatalanFamily::C => catalan(args.i),
        CatalanFamily::Cb => {
            let h = args
                .h
                .ok_or_else(|| Failure::usage("--h is required for family Cb"))?;
            catalan_bounded(args.i, h)
        }
        CatalanFamily::Cp => {
            let h = args
                .h
                .ok_or_else(|| Failure::usage("--h is required for family Cp"))?;
            catalan_prime(args.i, h)
        }
    };
    writeln!(out, "{value}").map_err(Failure::runtime)
}

#[derive(Serialize, Deserialize)]
struct Fraction {
    num: u64,
    den: u64,
}

#[derive(Serialize, Deserialize)]
struct ConeDoc {
    schema: String,
    family: String,
    i: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    half: usize,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Fraction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc: Option<ConeEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn cmd_cone(args: ConeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let family = match args.family {
        ConeFamilyArg::K => ConeFamily::K,
        ConeFamilyArg::Kq => ConeFamily::Kq,
        ConeFamilyArg::S => ConeFamily::S,
    };
    let cone = build_cone(family, args.i, args.q).map_err(Failure::usage)?;
    let want_exact = args.exact || args.samples.is_none();
    let exact = if want_exact {
        let v = cone.exact_integral().map_err(Failure::usage)?;
        Some(Fraction {
            num: v.numer().to_u64().expect("small exact numerator"),
            den: v.denom().to_u64().expect("small exact denominator"),
        })
    } else {
        None
    };
    let mc = match args.samples {
        Some(0) => return Err(Failure::usage("--samples must be at least 1")),
        Some(m) => Some(cone.mc_integral(m, args.seed)),
        None => None,
    };
    let doc = ConeDoc {
        schema: SCHEMA.into(),
        family: family.to_string(),
        i: args.i,
        q: args.q,
        half: cone.half,
        dim: cone.dim(),
        exact,
        seed: mc.is_some().then_some(args.seed),
        mc,
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(Failure::runtime)?;
    s.push('\n');
    out.write_all(s.as_bytes()).map_err(Failure::runtime)
}

#[derive(Serialize, Deserialize)]
struct VrDoc {
    schema: String,
    command: String,
    rng: String,
    seed: u64,
    n: usize,
    /// Display form of the exact scale.
    r: String,
    scale: Scale,
    core_size: usize,
    rounds: usize,
    ell: u64,
    w: u64,
    orb: u64,
    homotopy: HomotopyType,
    homotopy_display: String,
    expected_limit_dim: u64,
}

fn cmd_vr(args: VrArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let scale = parse_scale(&args.r).map_err(Failure::usage)?;
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    // The sample is exactly trial 0 of `simulate` with the same seed.
    let mut rng = trial_rng(args.seed, 0);
    let points = sample_uniform(args.n, &mut rng);
    let expected_limit_dim = expected_sphere_dimension(scale).map_err(Failure::usage)?;
    let core = dismantle_to_core(&points, scale).map_err(Failure::usage)?;
    let report = orbit_report(&build_map(points, scale)).map_err(Failure::runtime)?;
    let homotopy = classify_homotopy(report.length, report.winding, report.orbit_count);
    let doc = VrDoc {
        schema: SCHEMA.into(),
        command: "vr".into(),
        rng: RNG_SPEC.into(),
        seed: args.seed,
        n: args.n,
        r: scale.to_string(),
        scale,
        core_size: core.core.len(),
        rounds: core.rounds,
        ell: report.length,
        w: report.winding,
        orb: report.orbit_count,
        homotopy,
        homotopy_display: homotopy.to_string(),
        expected_limit_dim,
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(Failure::runtime)?;
    s.push('\n');
    out.write_all(s.as_bytes()).map_err(Failure::runtime)
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema: &'a str,
    command: &'a str,
    source: String,
    n: usize,
    trials: u64,
    scale_display: String,
    report: &'a TheoryReport,
}

fn cmd_report(args: ReportArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.input).map_err(Failure::runtime)?;
    let doc = load_experiment(&text).map_err(Failure::runtime)?;
    let report = compare_with_theory(doc.config.scale, &doc.aggregate, args.i_show)
        .map_err(Failure::runtime)?;
    let mut s = String::new();
    s.push_str(&format!(
        "experiment: n={} trials={} scale={} seed={}\n",
        doc.config.n, doc.config.trials, doc.scale_display, doc.config.seed
    ));
    if doc.config.scale.as_rational().is_none() {
        s.push_str("swiftness rows inapplicable at a fixed scale\n");
    }
    s.push_str(&format!(
        "{:<12}{:>14}{:>14}{:>12}{:>9}  {}\n",
        "stat", "observed", "predicted", "se", "z", "status"
    ));
    for row in &report.rows {
        s.push_str(&format!(
            "{:<12}{:>14.8}{:>14.8}{:>12.2e}{:>9.2}  {}\n",
            row.stat.to_string(),
            row.observed,
            row.predicted,
            row.se,
            row.z,
            if row.flagged { "FLAG" } else { "ok" }
        ));
    }
    out.write_all(s.as_bytes()).map_err(Failure::runtime)?;
    if let Some(path) = args.out {
        let doc = ReportDoc {
            schema: SCHEMA,
            command: "report",
            source: args.input.display().to_string(),
            n: doc.config.n,
            trials: doc.config.trials,
            scale_display: doc.scale_display.clone(),
            report: &report,
        };
        let mut s = serde_json::to_string_pretty(&doc).map_err(Failure::runtime)?;
        s.push('\n');
        std::fs::write(path, s).map_err(Failure::runtime)?;
    }
    Ok(())
}

/// Parses and validates an experiment document: schema tag, per-row
/// conservation, and agreement between the stored aggregate and the rows.
pub fn load_experiment(text: &str) -> crate::Result<ExperimentDoc> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::SchemaMismatch(format!("not a JSON document: {e}")))?;
    match value.get("schema").and_then(|v| v.as_str()) {
        Some(SCHEMA) => {}
        Some(other) => {
            return Err(Error::SchemaMismatch(format!(
                "schema {other:?}, expected {SCHEMA:?}"
            )))
        }
        None => {
            return Err(Error::SchemaMismatch(
                "missing \"schema\" field".into(),
            ))
        }
    }
    let doc: ExperimentDoc = serde_json::from_value(value)
        .map_err(|e| Error::SchemaMismatch(format!("malformed experiment: {e}")))?;
    for row in &doc.rows {
        if row.per + row.levels.iter().sum::<u64>() != doc.config.n as u64 {
            return Err(Error::SchemaMismatch(format!(
                "trial {}: per + levels do not sum to n",
                row.trial
            )));
        }
        if row.swift.as_ref().is_some_and(|t| {
            t.counts.iter().sum::<u64>() + t.untyped != row.per
        }) {
            return Err(Error::SchemaMismatch(format!(
                "trial {}: swiftness tally does not sum to per",
                row.trial
            )));
        }
    }
    if !doc.rows.is_empty() {
        if doc.rows.len() as u64 != doc.config.trials {
            return Err(Error::SchemaMismatch(format!(
                "{} rows for {} configured trials",
                doc.rows.len(),
                doc.config.trials
            )));
        }
        if aggregate(&doc.config, &doc.rows) != doc.aggregate {
            return Err(Error::SchemaMismatch(
                "stored aggregate does not match the trial rows".into(),
            ));
        }
    }
    Ok(doc)
}
