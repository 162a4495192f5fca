//! The dynamical system `f_r` on a finite circle sample and its exact
//! analysis: periodic set and level decomposition, orbit length/winding,
//! swift points, preimage arcs, and gap sequences.
//!
//! Everything here is exact integer arithmetic. Where the scale is `p/q`,
//! comparisons against fractional positions are carried out in `q`-scaled
//! ticks (u128), so no rounding ever occurs.

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::circle::{cw_dist, CirclePoint, SampleSet, Scale};
use crate::error::{Error, Result};

/// A finite cyclic dynamical system: sample points, a scale, and the
/// successor table of `f_r`.
#[derive(Clone, Debug)]
pub struct DynSystem {
    points: SampleSet,
    scale: Scale,
    succ: Vec<usize>,
}

impl DynSystem {
    pub(crate) fn from_parts(points: SampleSet, scale: Scale, succ: Vec<usize>) -> DynSystem {
        debug_assert_eq!(points.len(), succ.len());
        DynSystem {
            points,
            scale,
            succ,
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn points(&self) -> &SampleSet {
        &self.points
    }

    pub fn succ(&self) -> &[usize] {
        &self.succ
    }

    pub fn point(&self, i: usize) -> CirclePoint {
        self.points.point(i)
    }

    /// One application of `f_r`, by index.
    pub fn step(&self, i: usize) -> usize {
        self.succ[i]
    }

    /// Tick length of the step `x_i -> f_r(x_i)`.
    pub fn step_ticks(&self, i: usize) -> u64 {
        cw_dist(self.point(i), self.point(self.succ[i]))
    }

    /// `f_r^k`, by walking (O(k)).
    pub fn iterate(&self, i: usize, k: usize) -> usize {
        let mut cur = i;
        for _ in 0..k {
            cur = self.succ[cur];
        }
        cur
    }

    /// Clockwise neighbor (next index, wrapping).
    pub fn next_index(&self, i: usize) -> usize {
        if i + 1 == self.n() {
            0
        } else {
            i + 1
        }
    }

    /// Counterclockwise neighbor (previous index, wrapping).
    pub fn prev_index(&self, i: usize) -> usize {
        if i == 0 {
            self.n() - 1
        } else {
            i - 1
        }
    }
}

/// The regular system `Reg_n^k`: `n` evenly spaced points with
/// `r = (k + 1/2)/n`, so that `f_r` advances every point by exactly `k`
/// positions (asserted after construction).
pub fn make_regular(n: usize, k: usize) -> DynSystem {
    assert!(n >= 1 && k < n, "make_regular requires 0 <= k < n");
    let ticks: Vec<u64> = (0..n)
        .map(|j| (((j as u128) << 64) / n as u128) as u64)
        .collect();
    // r = (k*2^64 + 2^63) / (n*2^64), reduced. The numerator is 2^63*(2k+1),
    // so the reduced denominator is at most 2n and both parts fit in u64.
    let num: u128 = (2 * k as u128 + 1) << 63;
    let den: u128 = (n as u128) << 64;
    let g = num.gcd(&den);
    let scale = Scale::rational((num / g) as u64, (den / g) as u64)
        .expect("regular scale is valid by construction");
    let sys = crate::circle::build_map(SampleSet::from_sorted_unchecked(ticks), scale);
    for j in 0..n {
        assert_eq!(
            sys.succ[j],
            (j + k) % n,
            "Reg_{n}^{k} successor table is off at index {j}"
        );
    }
    sys
}

/// Per-level sizes of the decomposition `lev_i = |f^i(X)| - |f^(i+1)(X)|`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LevelHistogram {
    /// `counts[i]` is the number of points at level `i`; the vector stops at
    /// the deepest occupied level.
    pub counts: Vec<u64>,
}

impl LevelHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_level(&self) -> Option<usize> {
        if self.counts.is_empty() {
            None
        } else {
            Some(self.counts.len() - 1)
        }
    }
}

/// Full level decomposition of a system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelAnalysis {
    /// Level of each point; `None` for periodic points.
    pub level_of: Vec<Option<u32>>,
    pub histogram: LevelHistogram,
    /// Sorted indices of the periodic points.
    pub periodic: Vec<usize>,
}

/// Peels the sample by image depth: level-`i` points are those in
/// `f^i(X) \ f^(i+1)(X)`; survivors are the periodic points.
///
/// Wave-based in-degree peeling, O(n): a point's last preimage disappears in
/// the wave equal to its longest inverse chain, which is exactly its level.
pub fn periodic_and_levels(sys: &DynSystem) -> LevelAnalysis {
    let n = sys.n();
    let mut indeg = vec![0u32; n];
    for &s in &sys.succ {
        indeg[s] += 1;
    }
    let mut level_of: Vec<Option<u32>> = vec![None; n];
    let mut wave: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut counts = Vec::new();
    let mut lvl = 0u32;
    while !wave.is_empty() {
        counts.push(wave.len() as u64);
        let mut next = Vec::new();
        for &v in &wave {
            level_of[v] = Some(lvl);
            let s = sys.succ[v];
            indeg[s] -= 1;
            if indeg[s] == 0 {
                next.push(s);
            }
        }
        wave = next;
        lvl += 1;
    }
    let periodic: Vec<usize> = (0..n).filter(|&v| level_of[v].is_none()).collect();
    debug_assert_eq!(periodic.len() as u64 + counts.iter().sum::<u64>(), n as u64);
    LevelAnalysis {
        level_of,
        histogram: LevelHistogram { counts },
        periodic,
    }
}

/// Orbit structure of the periodic set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitReport {
    /// Common cycle length `ell`.
    pub length: u64,
    /// Common winding number `w`: each cycle wraps the circle exactly `w` times.
    pub winding: u64,
    pub orbit_count: u64,
    pub periodic_indices: Vec<usize>,
}

impl OrbitReport {
    /// Winding fraction `w/ell` as an exact pair (already in lowest terms).
    pub fn wf(&self) -> (u64, u64) {
        (self.winding, self.length)
    }

    pub fn periodic_count(&self) -> u64 {
        self.periodic_indices.len() as u64
    }
}

impl Serialize for OrbitReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wf {
            num: u64,
            den: u64,
        }
        let mut st = s.serialize_struct("OrbitReport", 5)?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("winding", &self.winding)?;
        st.serialize_field("orbit_count", &self.orbit_count)?;
        st.serialize_field(
            "wf",
            &Wf {
                num: self.winding,
                den: self.length,
            },
        )?;
        st.serialize_field("periodic_indices", &self.periodic_indices)?;
        st.end()
    }
}

/// Walks every cycle and checks the structural invariants: all cycles share
/// `(ell, w)`, `gcd(ell, w) = 1`, and `w/ell < r` exactly.
pub fn orbit_report(sys: &DynSystem) -> Result<OrbitReport> {
    let la = periodic_and_levels(sys);
    orbit_report_with(sys, &la)
}

/// As [`orbit_report`], reusing an existing level analysis.
pub fn orbit_report_with(sys: &DynSystem, la: &LevelAnalysis) -> Result<OrbitReport> {
    if la.periodic.is_empty() {
        return Err(Error::InternalInvariant(
            "functional graph has no cycle".into(),
        ));
    }
    let mut seen = vec![false; sys.n()];
    let mut shape: Option<(u64, u64)> = None;
    let mut orbit_count = 0u64;
    for &start in &la.periodic {
        if seen[start] {
            continue;
        }
        orbit_count += 1;
        let mut len = 0u64;
        let mut ticks: u128 = 0;
        let mut cur = start;
        loop {
            seen[cur] = true;
            ticks += sys.step_ticks(cur) as u128;
            cur = sys.step(cur);
            len += 1;
            if cur == start {
                break;
            }
        }
        if ticks % (1u128 << 64) != 0 {
            return Err(Error::InternalInvariant(
                "cycle tick sum is not a whole number of turns".into(),
            ));
        }
        let w = (ticks >> 64) as u64;
        match shape {
            None => shape = Some((len, w)),
            Some(s) if s != (len, w) => {
                return Err(Error::InternalInvariant(format!(
                    "orbits disagree: ({},{}) vs ({len},{w})",
                    s.0, s.1
                )));
            }
            _ => {}
        }
    }
    let (length, winding) = shape.expect("at least one orbit");
    if length > 1 && winding >= length {
        return Err(Error::InternalInvariant(format!(
            "winding {winding} not below length {length}"
        )));
    }
    if winding > 0 && winding.gcd(&length) != 1 {
        return Err(Error::InternalInvariant(format!(
            "winding fraction {winding}/{length} is not reduced"
        )));
    }
    let wf_below_r = match sys.scale() {
        Scale::Rational { p, q } => (winding as u128) * (q as u128) < (p as u128) * (length as u128),
        Scale::Fixed { num } => ((winding as u128) << 64) < (num as u128) * (length as u128),
    };
    if !wf_below_r {
        return Err(Error::InternalInvariant(format!(
            "winding fraction {winding}/{length} not below r = {}",
            sys.scale()
        )));
    }
    if orbit_count * length != la.periodic.len() as u64 {
        return Err(Error::InternalInvariant(
            "orbit count times length differs from periodic count".into(),
        ));
    }
    Ok(OrbitReport {
        length,
        winding,
        orbit_count,
        periodic_indices: la.periodic.clone(),
    })
}

/// Index of the first sample point strictly clockwise after the (possibly
/// fractional) position `tick(t) - r`.
///
/// For `r = p/q` the boundary position in q-scaled ticks is
/// `B = (t*q - p*2^64) mod (q*2^64)`; the first admissible tick is
/// `floor(B/q) + 1`. All intermediate values stay below 2^128.
fn first_index_after_shift(points: &SampleSet, scale: Scale, t: u64) -> usize {
    let m = match scale {
        Scale::Fixed { num } => t.wrapping_sub(num).wrapping_add(1),
        Scale::Rational { p, q } => {
            let modulus = (q as u128) << 64;
            let tq = (t as u128) * (q as u128);
            let psh = (p as u128) << 64;
            let b = if tq >= psh {
                tq - psh
            } else {
                tq + (modulus - psh)
            };
            let floor = b / (q as u128);
            if floor + 1 == 1u128 << 64 {
                0
            } else {
                (floor + 1) as u64
            }
        }
    };
    points.rank_at_or_after(m)
}

/// A half-open arc of sample indices `[start, start + len)` in cyclic index
/// order. `len == 0` is the empty set, `len == n` the whole sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexArc {
    pub start: usize,
    pub len: usize,
}

impl IndexArc {
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self, n: usize) -> bool {
        self.len == n
    }

    /// Index just past the arc (the "first point after" bound).
    pub fn end(&self, n: usize) -> usize {
        (self.start + self.len) % n
    }

    pub fn contains(&self, idx: usize, n: usize) -> bool {
        (idx + n - self.start) % n < self.len
    }

    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |k| (start + k) % n)
    }
}

/// The iterated preimage `f_r^{-i}(x0)` as a contiguous arc of indices.
///
/// Backward recursion on the arc bounds: each step pulls both bounds back by
/// `r` and snaps them to the first sample point strictly after the shifted
/// position. If the two bounds collide the preimage is either empty or the
/// whole sample; the two cases are distinguished exactly by checking whether
/// the collision point maps onto `x0` after `j` steps (and each case then
/// persists for all deeper `i`).
pub fn preimage_interval(sys: &DynSystem, x0: usize, i: usize) -> IndexArc {
    let n = sys.n();
    if n == 1 {
        // f is the identity on a single point.
        return IndexArc { start: x0, len: 1 };
    }
    let mut a = x0;
    let mut b = sys.next_index(x0);
    for j in 1..=i {
        let na = first_index_after_shift(sys.points(), sys.scale(), sys.point(a).tick);
        let nb = first_index_after_shift(sys.points(), sys.scale(), sys.point(b).tick);
        if na == nb {
            return if sys.iterate(na, j) == x0 {
                IndexArc { start: na, len: n }
            } else {
                IndexArc { start: na, len: 0 }
            };
        }
        a = na;
        b = nb;
    }
    IndexArc {
        start: a,
        len: (b + n - a) % n,
    }
}

/// The gap sequences `z_1..z_{depth+1}`, `w_1..w_{depth+1}` of the preimage
/// recursion seeded at `x0`, in subticks (ticks scaled by `denom`, which is
/// `q` for a rational scale and 1 for a fixed scale).
///
/// Subtick scaling keeps the values exact: for `r = p/q` the recursion
/// boundaries sit at multiples of `1/(q*2^64)`, not of `1/2^64`. A value of
/// `denom * 2^64` means a full turn.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapSequence {
    pub z: Vec<u128>,
    pub w: Vec<u128>,
    pub denom: u64,
}

impl GapSequence {
    /// Subticks in a full circle.
    pub fn full_turn(&self) -> u128 {
        (self.denom as u128) << 64
    }
}

/// Computes the gap sequences of the backward recursion: `z_1 = d(x0, y0)`
/// and, for `j >= 1`, `w_j = d(x_{j-1} - r, x_j)`, `z_{j+1} = d(y_{j-1} - r, y_j)`,
/// where `y0` is the clockwise neighbor of `x0` and `x_j`, `y_j` are the
/// snapped preimage bounds.
pub fn gap_sequence(sys: &DynSystem, x0: usize, depth: usize) -> GapSequence {
    let (denom, rsub) = match sys.scale() {
        Scale::Rational { p, q } => (q, (p as u128) << 64),
        Scale::Fixed { num } => (1u64, num as u128),
    };
    let modulus = (denom as u128) << 64;
    // Subtick gap from position (prev - r) to the point `next`; gaps are in
    // (0, modulus], a full turn standing in for the wrapped zero.
    let gap = |prev: u64, next: u64| -> u128 {
        let a = (prev as u128) * (denom as u128);
        let b = (next as u128) * (denom as u128);
        let d0 = if b >= a { b - a } else { b + (modulus - a) };
        let d1 = if d0 >= modulus - rsub {
            d0 - (modulus - rsub)
        } else {
            d0 + rsub
        };
        if d1 == 0 {
            modulus
        } else {
            d1
        }
    };
    let n = sys.n();
    let y0 = sys.next_index(x0);
    let z1 = if n == 1 {
        modulus
    } else {
        (cw_dist(sys.point(x0), sys.point(y0)) as u128) * (denom as u128)
    };
    let mut z = vec![z1];
    let mut w = Vec::new();
    let (mut xj, mut yj) = (x0, y0);
    for j in 1..=depth + 1 {
        let nx = first_index_after_shift(sys.points(), sys.scale(), sys.point(xj).tick);
        w.push(gap(sys.point(xj).tick, sys.point(nx).tick));
        xj = nx;
        if j <= depth {
            let ny = first_index_after_shift(sys.points(), sys.scale(), sys.point(yj).tick);
            z.push(gap(sys.point(yj).tick, sys.point(ny).tick));
            yj = ny;
        }
    }
    GapSequence { z, w, denom }
}

/// Level of the seed point from prefix-sum comparisons: the level is the
/// first `i` with `w_1 + ... + w_{i+1} > z_1 + ... + z_{i+1}`; if no prefix
/// fails within the recorded depth the point is periodic or deeper.
pub fn level_from_gaps(g: &GapSequence) -> Option<usize> {
    let mut zs: u128 = 0;
    let mut ws: u128 = 0;
    for k in 0..g.w.len().min(g.z.len()) {
        zs += g.z[k];
        ws += g.w[k];
        if ws > zs {
            return Some(k);
        }
    }
    None
}

/// Literal test of the `(q, i)`-swift property for the point at index `x`:
/// the `q`-step closed walk from `x` winds exactly `p` times, and `x` is the
/// first sample point clockwise after the arc `f^{-i}(f^{q+i}(x))`.
///
/// An empty (or degenerate whole-sample) preimage arc means `x` is not
/// `(q, i)`-swift. Requires a rational scale.
pub fn is_swift(sys: &DynSystem, x: usize, i: usize) -> Result<bool> {
    let (p, q) = sys.scale().as_rational().ok_or(Error::NotRational)?;
    let n = sys.n();
    let mut acc: u128 = 0;
    let mut cur = x;
    for _ in 0..q {
        acc += sys.step_ticks(cur) as u128;
        cur = sys.step(cur);
    }
    if acc + cw_dist(sys.point(cur), sys.point(x)) as u128 != (p as u128) << 64 {
        return Ok(false);
    }
    let z = sys.iterate(cur, i);
    let arc = preimage_interval(sys, z, i);
    if arc.is_empty() || arc.is_full(n) {
        return Ok(false);
    }
    Ok(arc.end(n) == x)
}

/// Swiftness-type tally over the periodic points.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SwiftReport {
    pub i_max: usize,
    /// `type_counts[i]` = periodic points of swiftness type `i`.
    pub type_counts: Vec<u64>,
    /// Periodic points that received no type for any `i <= i_max`.
    pub untyped: u64,
    /// Indices of the `q`-swift points (the `i = 0` witnesses).
    pub q_swift: Vec<usize>,
}

impl SwiftReport {
    pub fn typed(&self) -> u64 {
        self.type_counts.iter().sum()
    }
}

/// Assigns swiftness types: a periodic point `z` has type `i` (smallest `i`,
/// ascending scan) if `z = f^{q+i}(x)` for some `(q, i)`-swift `x`.
pub fn swiftness_types(sys: &DynSystem, i_max: usize) -> Result<SwiftReport> {
    let la = periodic_and_levels(sys);
    swiftness_types_with(sys, &la, i_max)
}

/// As [`swiftness_types`], reusing an existing level analysis.
///
/// Instead of recomputing a preimage arc per `(x, i)` pair, this uses the
/// merge-time reformulation: for a witness `y` passing the winding condition
/// with `z0 = f^q(y)`, the valid `i` form the interval from the merge time of
/// `(prev(y), z0)` up to (exclusive) the merge time of `(y, z0)` under
/// simultaneous iteration. [`is_swift`] stays the literal reference; the two
/// routes are cross-checked in tests.
pub fn swiftness_types_with(
    sys: &DynSystem,
    la: &LevelAnalysis,
    i_max: usize,
) -> Result<SwiftReport> {
    let (p, q) = sys.scale().as_rational().ok_or(Error::NotRational)?;
    let n = sys.n();
    let target_winding = (p as u128) << 64;
    struct Event {
        target: usize,
        hi: usize,
    }
    let mut starts: Vec<Vec<Event>> = Vec::new();
    starts.resize_with(i_max + 1, Vec::new);
    let mut q_swift = Vec::new();
    for y in 0..n {
        let mut acc: u128 = 0;
        let mut cur = y;
        for _ in 0..q {
            acc += sys.step_ticks(cur) as u128;
            cur = sys.step(cur);
        }
        if acc + cw_dist(sys.point(cur), sys.point(y)) as u128 != target_winding {
            continue;
        }
        let z0 = cur;
        if z0 == y {
            // y lies in every preimage arc of its own forward images.
            continue;
        }
        // lo: first i at which prev(y) enters the preimage arc; the common
        // iterate is the type target f^{q+lo}(y).
        let mut u = sys.prev_index(y);
        let mut v = z0;
        let mut found = None;
        for i in 0..=i_max {
            if u == v {
                found = Some((i, u));
                break;
            }
            u = sys.step(u);
            v = sys.step(v);
        }
        let Some((lo, target)) = found else { continue };
        // hi: last i at which y itself is still outside the arc.
        let mut a = sys.step(y);
        let mut b = sys.step(z0);
        let mut hi = i_max;
        for h in 1..=i_max {
            if a == b {
                hi = h - 1;
                break;
            }
            a = sys.step(a);
            b = sys.step(b);
        }
        if lo > hi {
            continue;
        }
        if lo == 0 {
            q_swift.push(y);
        }
        starts[lo].push(Event { target, hi });
    }
    let mut type_of: Vec<Option<u32>> = vec![None; n];
    let mut counts = vec![0u64; i_max + 1];
    let mut active: Vec<Event> = Vec::new();
    for i in 0..=i_max {
        active.append(&mut starts[i]);
        let mut keep = Vec::with_capacity(active.len());
        for mut ev in active.drain(..) {
            // Only periodic points are typed.
            if type_of[ev.target].is_none() && la.level_of[ev.target].is_none() {
                type_of[ev.target] = Some(i as u32);
                counts[i] += 1;
            }
            if ev.hi > i {
                ev.target = sys.step(ev.target);
                keep.push(ev);
            }
        }
        active = keep;
    }
    let typed: u64 = counts.iter().sum();
    let per = la.periodic.len() as u64;
    debug_assert!(typed <= per);
    Ok(SwiftReport {
        i_max,
        type_counts: counts,
        untyped: per - typed,
        q_swift,
    })
}
