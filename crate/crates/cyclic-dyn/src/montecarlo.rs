//! Monte Carlo experiments: repeated uniform samples of the circle system,
//! exact per-trial statistics, and comparisons against the limit theory.
//!
//! Reproducibility contract: trial `t` of an experiment with seed `s` uses
//! `ChaCha8Rng::seed_from_u64(mix_seed(s, t))`, independent of how trials
//! are scheduled across threads. Aggregation sums exact integer counts, so
//! results are byte-identical across runs and worker counts.

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalan::{
    predicted_level_fraction, predicted_periodic_fraction, predicted_swift_fraction, to_f64,
    ExactRational,
};
use crate::circle::{sample_uniform, build_map, Scale};
use crate::dynamics::{orbit_report_with, periodic_and_levels, swiftness_types_with};
use crate::error::{Error, Result};

/// Identifier of the pseudo-random scheme, recorded in experiment output.
pub const RNG_SPEC: &str = "chacha8(seed_from_u64(splitmix64(seed + (trial+1)*0x9E3779B97F4A7C15)))";

/// Derives the per-trial seed: a splitmix64 step of `seed` offset by the
/// trial index (offset by one so trial 0 does not collapse to `seed`).
pub fn mix_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add((trial.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator used for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, trial))
}

/// Parameters of one experiment.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Sample size per trial.
    pub n: usize,
    pub scale: Scale,
    pub trials: u64,
    pub seed: u64,
    /// Deepest level index reported individually (levels are still exact
    /// and complete inside each trial).
    pub i_max: usize,
    /// Also tally swiftness types (rational scales only).
    pub swift: bool,
}

impl ExperimentConfig {
    pub fn new(n: usize, scale: Scale, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            scale,
            trials,
            seed,
            i_max: 64,
            swift: false,
        }
    }
}

/// Swiftness-type counts of one trial.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SwiftTally {
    /// `counts[i]` = periodic points of type `i`, `i = 0..=i_max`.
    pub counts: Vec<u64>,
    pub untyped: u64,
}

/// Exact outcome of one trial.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    /// Number of periodic points.
    pub per: u64,
    /// Full level histogram (`levels[i]` = points at level `i`); together
    /// with `per` this partitions the sample.
    pub levels: Vec<u64>,
    pub orbit_count: u64,
    /// Common cycle length.
    pub ell: u64,
    /// Common winding number; the winding fraction is `w / ell`.
    pub w: u64,
    pub swift: Option<SwiftTally>,
}

/// Runs a single trial (public so callers can stream very large experiments).
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialResult> {
    if config.n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = trial_rng(config.seed, trial);
    let points = sample_uniform(config.n, &mut rng);
    let sys = build_map(points, config.scale);
    let la = periodic_and_levels(&sys);
    let report = orbit_report_with(&sys, &la)?;
    let swift = if config.swift {
        let sr = swiftness_types_with(&sys, &la, config.i_max)?;
        Some(SwiftTally {
            counts: sr.type_counts,
            untyped: sr.untyped,
        })
    } else {
        None
    };
    let result = TrialResult {
        trial,
        per: report.periodic_count(),
        levels: la.histogram.counts,
        orbit_count: report.orbit_count,
        ell: report.length,
        w: report.winding,
        swift,
    };
    if result.per + result.levels.iter().sum::<u64>() != config.n as u64 {
        return Err(Error::InternalInvariant(
            "periodic + level counts do not partition the sample".into(),
        ));
    }
    Ok(result)
}

/// Runs all trials in parallel; any trial error aborts the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect()
}

/// Mean / sample standard deviation / standard error of a per-trial
/// fraction.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
}

/// Builds a summary of `x / n` from exact integer moments of `x`.
fn summarize(sum: u128, sumsq: u128, trials: u64, n: usize) -> Summary {
    let t = trials as f64;
    let mean = sum as f64 / (t * n as f64);
    if trials < 2 {
        return Summary {
            mean,
            sd: 0.0,
            se: 0.0,
        };
    }
    // trials * sumsq - sum^2 is the exact centered second moment scaled by
    // trials; it is nonnegative by Cauchy-Schwarz.
    let num = trials as u128 * sumsq - sum * sum;
    let var_x = num as f64 / (trials as f64 * (trials as f64 - 1.0));
    let sd = var_x.sqrt() / n as f64;
    Summary {
        mean,
        sd,
        se: sd / t.sqrt(),
    }
}

/// Experiment-level statistics, all fractions of `n`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: u64,
    pub n: usize,
    pub per_fraction: Summary,
    /// `level_fractions[i]` summarizes `lev_i / n`, `i = 0..=i_max`.
    pub level_fractions: Vec<Summary>,
    pub swift_fractions: Option<Vec<Summary>>,
    pub swift_total_fraction: Option<Summary>,
    /// Fraction of trials whose periodic set is a single orbit.
    pub single_orbit_freq: f64,
}

/// Aggregates trial rows with exact integer accumulators.
pub fn aggregate(config: &ExperimentConfig, rows: &[TrialResult]) -> Aggregate {
    let trials = rows.len() as u64;
    let n = config.n;
    let mut per = (0u128, 0u128);
    let mut lev = vec![(0u128, 0u128); config.i_max + 1];
    let mut swi = vec![(0u128, 0u128); config.i_max + 1];
    let mut swi_tot = (0u128, 0u128);
    let mut has_swift = !rows.is_empty();
    let mut single = 0u64;
    for row in rows {
        let acc = |slot: &mut (u128, u128), x: u64| {
            slot.0 += x as u128;
            slot.1 += (x as u128) * (x as u128);
        };
        acc(&mut per, row.per);
        for (i, slot) in lev.iter_mut().enumerate() {
            acc(slot, row.levels.get(i).copied().unwrap_or(0));
        }
        match &row.swift {
            Some(tally) => {
                for (i, slot) in swi.iter_mut().enumerate() {
                    acc(slot, tally.counts.get(i).copied().unwrap_or(0));
                }
                acc(&mut swi_tot, tally.counts.iter().sum());
            }
            None => has_swift = false,
        }
        if row.orbit_count == 1 {
            single += 1;
        }
    }
    Aggregate {
        trials,
        n,
        per_fraction: summarize(per.0, per.1, trials, n),
        level_fractions: lev
            .iter()
            .map(|&(s, sq)| summarize(s, sq, trials, n))
            .collect(),
        swift_fractions: has_swift.then(|| {
            swi.iter()
                .map(|&(s, sq)| summarize(s, sq, trials, n))
                .collect()
        }),
        swift_total_fraction: has_swift.then(|| summarize(swi_tot.0, swi_tot.1, trials, n)),
        single_orbit_freq: if trials == 0 {
            0.0
        } else {
            single as f64 / trials as f64
        },
    }
}

/// Which statistic a theory-comparison row refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatSelect {
    Per,
    Level(usize),
    Swift(usize),
    SwiftTotal,
}

impl std::fmt::Display for StatSelect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StatSelect::Per => write!(f, "per"),
            StatSelect::Level(i) => write!(f, "lev_{i}"),
            StatSelect::Swift(i) => write!(f, "swi_{i}"),
            StatSelect::SwiftTotal => write!(f, "swi_total"),
        }
    }
}

/// One observed-vs-predicted comparison.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct TheoryRow {
    pub stat: StatSelect,
    pub observed: f64,
    pub predicted: f64,
    pub se: f64,
    /// `(observed - predicted) / se`; 0 when both error and deviation
    /// vanish.
    pub z: f64,
    /// `|z| > 4`.
    pub flagged: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TheoryReport {
    pub rows: Vec<TheoryRow>,
}

fn theory_row(stat: StatSelect, s: Summary, predicted: &ExactRational) -> TheoryRow {
    let predicted = to_f64(predicted);
    let dev = s.mean - predicted;
    let z = if s.se > 0.0 {
        dev / s.se
    } else if dev == 0.0 {
        0.0
    } else {
        f64::INFINITY * dev.signum()
    };
    TheoryRow {
        stat,
        observed: s.mean,
        predicted,
        se: s.se,
        z,
        flagged: z.abs() > 4.0,
    }
}

/// Compares aggregate fractions with their predicted limits, for levels (and
/// swiftness types, when tallied) up to `i_show`.
pub fn compare_with_theory(
    scale: Scale,
    agg: &Aggregate,
    i_show: usize,
) -> Result<TheoryReport> {
    let mut rows = Vec::new();
    rows.push(theory_row(
        StatSelect::Per,
        agg.per_fraction,
        &predicted_periodic_fraction(scale),
    ));
    for (i, &s) in agg.level_fractions.iter().enumerate().take(i_show + 1) {
        rows.push(theory_row(
            StatSelect::Level(i),
            s,
            &predicted_level_fraction(i, scale),
        ));
    }
    if let (Some(swi), Some(tot)) = (&agg.swift_fractions, agg.swift_total_fraction) {
        let (p, q) = agg_rational(scale)?;
        for (i, &s) in swi.iter().enumerate().take(i_show + 1) {
            rows.push(theory_row(
                StatSelect::Swift(i),
                s,
                &predicted_swift_fraction(i, p, q)?,
            ));
        }
        rows.push(theory_row(
            StatSelect::SwiftTotal,
            tot,
            &ExactRational::new(BigInt::from(1), BigInt::from(q)),
        ));
    }
    Ok(TheoryReport { rows })
}

fn agg_rational(scale: Scale) -> Result<(u64, u64)> {
    scale.as_rational().ok_or(Error::NotRational)
}

/// The threshold `2 ln n / n`, rounded down a few ulps so that exact
/// comparisons against it never pass on floating-point round-off alone.
pub fn wf_bound_threshold(n: usize) -> f64 {
    assert!(n >= 3, "threshold needs n >= 3");
    let t = 2.0 * (n as f64).ln() / n as f64;
    f64::from_bits(t.to_bits() - 4)
}

/// Whether `wf >= r - 2 ln n / n`, decided by exact rational comparison
/// against the (dyadic) threshold.
pub fn wf_bound_holds(n: usize, scale: Scale, wf: (u64, u64)) -> bool {
    let t = Ratio::<BigInt>::from_float(wf_bound_threshold(n)).expect("threshold is finite");
    let r = match scale {
        Scale::Rational { p, q } => Ratio::new(BigInt::from(p), BigInt::from(q)),
        Scale::Fixed { num } => Ratio::new(BigInt::from(num), BigInt::from(1u128 << 64)),
    };
    let wf = Ratio::new(BigInt::from(wf.0), BigInt::from(wf.1));
    r - wf <= t
}

/// Fraction of trials satisfying the winding-fraction lower bound.
pub fn wf_bound_fraction(n: usize, scale: Scale, rows: &[TrialResult]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let hold = rows
        .iter()
        .filter(|row| wf_bound_holds(n, scale, (row.w, row.ell)))
        .count();
    hold as f64 / rows.len() as f64
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope needs at least two points");
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub median_per: f64,
}

/// Growth of the periodic-set size across sample sizes.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    pub points: Vec<GrowthPoint>,
    /// Log-log slope of `median_per` against `n`.
    pub slope: f64,
}

/// Medians of `per` over `trials` samples at each `n`, plus the log-log
/// growth exponent. Each `n` gets its own derived seed so grids are
/// reproducible point by point.
pub fn growth_exponent(
    scale: Scale,
    ns: &[usize],
    trials: u64,
    seed: u64,
) -> Result<GrowthReport> {
    assert!(ns.len() >= 2, "growth experiment needs at least two sizes");
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let config = ExperimentConfig {
            swift: false,
            ..ExperimentConfig::new(n, scale, trials, mix_seed(seed, n as u64))
        };
        let rows = run_experiment(&config)?;
        let mut pers: Vec<u64> = rows.iter().map(|row| row.per).collect();
        pers.sort_unstable();
        let m = pers.len();
        let median = if m % 2 == 1 {
            pers[m / 2] as f64
        } else {
            (pers[m / 2 - 1] + pers[m / 2]) as f64 / 2.0
        };
        points.push(GrowthPoint {
            n,
            median_per: median,
        });
    }
    let slope = loglog_slope(
        &points
            .iter()
            .map(|p| (p.n as f64, p.median_per))
            .collect::<Vec<_>>(),
    );
    Ok(GrowthReport { points, slope })
}
