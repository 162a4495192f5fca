//! Exact geometry on the unit-circumference circle at 64-bit tick resolution.
//!
//! A point is a `u64` tick; the circle position is `tick / 2^64`. Clockwise
//! means increasing tick (wrapping). Every comparison in this module is an
//! exact integer test — no floating point enters any decision.

use std::fmt;
use std::io::{BufRead, Write};

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};

/// A point of the circle, at resolution 2^-64 of the circumference.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CirclePoint {
    pub tick: u64,
}

impl CirclePoint {
    pub fn new(tick: u64) -> Self {
        CirclePoint { tick }
    }
}

/// Clockwise distance from `x` to `y` in ticks; `0 <= cw_dist < 2^64`.
///
/// `cw_dist(x, y) + cw_dist(y, x)` is `2^64` (i.e. wraps to 0) when `x != y`.
pub fn cw_dist(x: CirclePoint, y: CirclePoint) -> u64 {
    y.tick.wrapping_sub(x.tick)
}

/// The arc-length scale `r` of the system, `0 < r <= 1`.
///
/// `Rational { p, q }` is `r = p/q` in lowest terms; `Fixed { num }` is the
/// dyadic value `r = num / 2^64` (the tick grid itself), used to stand in for
/// irrational scales.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scale {
    Rational { p: u64, q: u64 },
    Fixed { num: u64 },
}

impl Scale {
    /// `r = p/q`, reduced to lowest terms. Requires `1 <= p <= q`.
    pub fn rational(p: u64, q: u64) -> Result<Scale> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidScale("p and q must be positive".into()));
        }
        if p > q {
            return Err(Error::InvalidScale(format!("p/q = {p}/{q} exceeds 1")));
        }
        let g = p.gcd(&q);
        Ok(Scale::Rational { p: p / g, q: q / g })
    }

    /// `r = num / 2^64`. Requires `num >= 1`.
    pub fn fixed(num: u64) -> Result<Scale> {
        if num == 0 {
            return Err(Error::InvalidScale("fixed scale must be positive".into()));
        }
        Ok(Scale::Fixed { num })
    }

    /// Truncates a float in `(0, 1)` to the tick grid.
    ///
    /// Convenience for irrational scales in demos and tests; the CLI parses
    /// decimal strings exactly instead.
    pub fn fixed_from_f64(r: f64) -> Result<Scale> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidScale(format!("{r} outside (0, 1)")));
        }
        let num = (r * 18446744073709551616.0).floor() as u64;
        Scale::fixed(num.max(1))
    }

    pub fn as_rational(self) -> Option<(u64, u64)> {
        match self {
            Scale::Rational { p, q } => Some((p, q)),
            Scale::Fixed { .. } => None,
        }
    }

    /// Exact test `d/2^64 < r` for a tick distance `d`.
    pub fn gt_ticks(self, d: u64) -> bool {
        match self {
            // p == q means r = 1: every distance is below a full turn.
            Scale::Rational { p, q } if p == q => true,
            Scale::Rational { p, q } => (d as u128) * (q as u128) < (p as u128) << 64,
            Scale::Fixed { num } => d < num,
        }
    }

    /// Exact test `r < 1/2`.
    pub fn below_half(self) -> bool {
        match self {
            Scale::Rational { p, q } => 2 * (p as u128) < q as u128,
            Scale::Fixed { num } => num < 1 << 63,
        }
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64(self) -> f64 {
        match self {
            Scale::Rational { p, q } => p as f64 / q as f64,
            Scale::Fixed { num } => num as f64 / 18446744073709551616.0,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Rational { p, q } => write!(f, "{p}/{q}"),
            Scale::Fixed { num } => write!(f, "{num}/2^64"),
        }
    }
}

/// Exact membership of `y` in the half-open clockwise arc `[x, x + r)`.
pub fn arc_contains(x: CirclePoint, r: Scale, y: CirclePoint) -> bool {
    r.gt_ticks(cw_dist(x, y))
}

/// A finite subset of the circle: distinct ticks, sorted ascending
/// (i.e. in clockwise order starting from position 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SampleSet {
    ticks: Vec<u64>,
}

impl SampleSet {
    /// Sorts the ticks; rejects duplicates and empty input.
    pub fn new(mut ticks: Vec<u64>) -> Result<SampleSet> {
        if ticks.is_empty() {
            return Err(Error::EmptySample);
        }
        ticks.sort_unstable();
        if ticks.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        Ok(SampleSet { ticks })
    }

    pub(crate) fn from_sorted_unchecked(ticks: Vec<u64>) -> SampleSet {
        debug_assert!(!ticks.is_empty());
        debug_assert!(ticks.windows(2).all(|w| w[0] < w[1]));
        SampleSet { ticks }
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty sets
    }

    pub fn tick(&self, i: usize) -> u64 {
        self.ticks[i]
    }

    pub fn point(&self, i: usize) -> CirclePoint {
        CirclePoint::new(self.ticks[i])
    }

    pub fn ticks(&self) -> &[u64] {
        &self.ticks
    }

    /// Index of the first point with tick `>= m`, wrapping to index 0 past
    /// the largest tick.
    pub fn rank_at_or_after(&self, m: u64) -> usize {
        let i = self.ticks.partition_point(|&t| t < m);
        if i == self.ticks.len() {
            0
        } else {
            i
        }
    }

    /// Writes one decimal tick per line.
    pub fn write_ticks<W: Write>(&self, mut w: W) -> Result<()> {
        for t in &self.ticks {
            writeln!(w, "{t}")?;
        }
        Ok(())
    }

    /// Reads newline-delimited decimal ticks (blank lines ignored).
    pub fn read_ticks<R: BufRead>(r: R) -> Result<SampleSet> {
        let mut ticks = Vec::new();
        for line in r.lines() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            let t: u64 = s
                .parse()
                .map_err(|e| Error::SchemaMismatch(format!("bad tick {s:?}: {e}")))?;
            ticks.push(t);
        }
        SampleSet::new(ticks)
    }

    /// JSON document `{"ticks": ["...", ...]}`; ticks are strings so that
    /// consumers limited to f64 numbers cannot silently lose precision.
    pub fn to_json_string(&self) -> String {
        let doc = TicksDoc {
            ticks: self.ticks.iter().map(|t| t.to_string()).collect(),
        };
        serde_json::to_string(&doc).expect("serializing tick strings cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<SampleSet> {
        let doc: TicksDoc = serde_json::from_str(s)?;
        let mut ticks = Vec::with_capacity(doc.ticks.len());
        for t in &doc.ticks {
            ticks.push(
                t.parse()
                    .map_err(|e| Error::SchemaMismatch(format!("bad tick {t:?}: {e}")))?,
            );
        }
        SampleSet::new(ticks)
    }
}

#[derive(Serialize, Deserialize)]
struct TicksDoc {
    ticks: Vec<String>,
}

/// Draws `n` distinct uniform ticks; colliding draws are redrawn.
pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SampleSet {
    assert!(n >= 1, "sample size must be positive");
    let mut ticks: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    loop {
        ticks.sort_unstable();
        let mut clean = true;
        for i in 1..ticks.len() {
            if ticks[i] == ticks[i - 1] {
                ticks[i] = rng.gen();
                clean = false;
            }
        }
        if clean {
            return SampleSet::from_sorted_unchecked(ticks);
        }
    }
}

/// Builds the dynamical system `f_r` on `points`: `succ[i]` is the furthest
/// point of the sample inside the arc `[x_i, x_i + r)`.
///
/// Single two-pointer sweep, O(n): the furthest-in-arc index is weakly
/// monotone in `i` because `f_r` preserves weak cyclic order.
pub fn build_map(points: SampleSet, scale: Scale) -> DynSystem {
    let succ = successor_table(&points, scale);
    DynSystem::from_parts(points, scale, succ)
}

fn successor_table(points: &SampleSet, r: Scale) -> Vec<usize> {
    let n = points.len();
    let mut succ = vec![0usize; n];
    // j is the unwrapped index of the current furthest-in-arc point.
    let mut j = 0usize;
    for i in 0..n {
        if j < i {
            j = i;
        }
        while j - i < n - 1 && arc_contains(points.point(i), r, points.point((j + 1) % n)) {
            j += 1;
        }
        succ[i] = j % n;
    }
    succ
}
