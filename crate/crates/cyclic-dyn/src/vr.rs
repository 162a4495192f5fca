//! Vietoris–Rips structure of circle samples at scales below 1/2.
//!
//! The proximity graph joins two points when either clockwise distance
//! between them is below `r` (the same half-open comparison as the
//! dynamics). Peeling a sample to its image set is a dismantling of this
//! graph — every peeled vertex is dominated when it is removed — so the
//! Rips complex of the periodic core has the homotopy type of the full
//! complex. The core's type is read off its cycle structure by
//! [`classify_homotopy`].

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::circle::{arc_contains, build_map, cw_dist, SampleSet, Scale};
use crate::dynamics::DynSystem;
use crate::error::{Error, Result};

/// Undirected proximity graph at scale `r < 1/2`; each closed neighborhood
/// is a contiguous cyclic run of sample indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProximityGraph {
    n: usize,
    /// Start index of the closed-neighborhood run of each vertex.
    lo: Vec<usize>,
    /// Run length (at most `n`); the run always contains the vertex itself.
    len: Vec<usize>,
}

/// Builds the proximity graph. Scales of 1/2 or more are rejected: there
/// the neighborhood runs overlap themselves and the Rips analysis below
/// does not apply.
pub fn proximity_graph(points: &SampleSet, scale: Scale) -> Result<ProximityGraph> {
    if !scale.below_half() {
        return Err(Error::ScaleTooLarge);
    }
    let n = points.len();
    let pt = |i: isize| points.point(i.rem_euclid(n as isize) as usize);
    // Forward reach: furthest unwrapped index hi >= i with cw distance < r.
    let mut hi_un = vec![0usize; n];
    let mut j = 0usize;
    for i in 0..n {
        if j < i {
            j = i;
        }
        while j - i < n - 1 && arc_contains(points.point(i), scale, pt(j as isize + 1)) {
            j += 1;
        }
        hi_un[i] = j;
    }
    // Backward reach: earliest unwrapped index lo <= i whose cw distance to
    // i is < r. Run starts are weakly increasing, so one descending scan for
    // i = 0 and a sliding lower pointer afterwards suffice.
    let mut lo_un = vec![0isize; n];
    let mut j: isize = 0;
    while j > 1 - n as isize && scale.gt_ticks(cw_dist(pt(j - 1), points.point(0))) {
        j -= 1;
    }
    lo_un[0] = j;
    for i in 1..n {
        let cap = i as isize - (n as isize - 1);
        if j < cap {
            j = cap;
        }
        while j < i as isize && !scale.gt_ticks(cw_dist(pt(j), points.point(i))) {
            j += 1;
        }
        lo_un[i] = j;
    }
    let mut lo = vec![0usize; n];
    let mut len = vec![0usize; n];
    for i in 0..n {
        let span = hi_un[i] as isize - lo_un[i] + 1;
        len[i] = span.min(n as isize) as usize;
        lo[i] = lo_un[i].rem_euclid(n as isize) as usize;
    }
    Ok(ProximityGraph { n, lo, len })
}

impl ProximityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Closed neighborhood of `v` as `(start, len)` of a cyclic index run.
    pub fn neighborhood_run(&self, v: usize) -> (usize, usize) {
        (self.lo[v], self.len[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.len[v] - 1
    }

    fn in_run(&self, v: usize, x: usize) -> bool {
        (x + self.n - self.lo[v]) % self.n < self.len[v]
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.in_run(a, b)
    }

    /// Whether `N[v]` is contained in `N[u]` (run containment).
    pub fn dominates(&self, u: usize, v: usize) -> bool {
        if self.len[u] == self.n {
            return true;
        }
        if self.len[v] > self.len[u] {
            return false;
        }
        (self.lo[v] + self.n - self.lo[u]) % self.n + self.len[v] <= self.len[u]
    }

    /// Some vertex dominating `v`, if any. A dominator is necessarily a
    /// neighbor, so only the run of `v` is scanned.
    pub fn is_dominated(&self, v: usize) -> Option<usize> {
        (0..self.len[v])
            .map(|off| (self.lo[v] + off) % self.n)
            .find(|&u| u != v && self.dominates(u, v))
    }
}

/// Outcome of peeling a sample to its periodic core.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoreResult {
    pub core: SampleSet,
    /// Peeling rounds performed (0 when every point is already periodic).
    pub rounds: usize,
    pub removed_per_round: Vec<usize>,
}

/// Dismantles the proximity graph by repeatedly deleting all points outside
/// the image of the map. The map of an image set is the restriction of the
/// original map, so the survivors are exactly the periodic points of the
/// original system; each deleted vertex is dominated (by the image point
/// covering it) at the moment of deletion, so every round is a homotopy
/// equivalence of Rips complexes.
pub fn dismantle_to_core(points: &SampleSet, scale: Scale) -> Result<CoreResult> {
    if !scale.below_half() {
        return Err(Error::ScaleTooLarge);
    }
    let mut alive = points.clone();
    let mut rounds = 0usize;
    let mut removed_per_round = Vec::new();
    loop {
        let sys = build_map(alive.clone(), scale);
        let survivors = image_ticks(&sys);
        if survivors.len() == alive.len() {
            return Ok(CoreResult {
                core: alive,
                rounds,
                removed_per_round,
            });
        }
        removed_per_round.push(alive.len() - survivors.len());
        rounds += 1;
        alive = SampleSet::from_sorted_unchecked(survivors);
    }
}

fn image_ticks(sys: &DynSystem) -> Vec<u64> {
    let n = sys.n();
    let mut in_image = vec![false; n];
    for i in 0..n {
        in_image[sys.step(i)] = true;
    }
    (0..n)
        .filter(|&i| in_image[i])
        .map(|i| sys.point(i).tick)
        .collect()
}

/// Reference dismantler: removes one dominated vertex at a time until none
/// remains, reaching a minimal graph. (The peeled core is not always
/// minimal — a wedge-type core still folds down to a point — but minimal
/// cores are unique in size, which tests exploit.)
pub fn dismantle_greedy(points: &SampleSet, scale: Scale) -> Result<SampleSet> {
    if !scale.below_half() {
        return Err(Error::ScaleTooLarge);
    }
    let mut ticks = points.ticks().to_vec();
    loop {
        let set = SampleSet::from_sorted_unchecked(ticks.clone());
        let g = proximity_graph(&set, scale)?;
        match (0..g.n()).find(|&v| g.is_dominated(v).is_some()) {
            Some(v) => {
                ticks.remove(v);
            }
            None => return Ok(set),
        }
    }
}

/// Homotopy type of the Rips complex of a periodic core.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomotopyType {
    OddSphere { dim: u64 },
    WedgeOfEvenSpheres { copies: u64, dim: u64 },
}

impl std::fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            HomotopyType::OddSphere { dim } => write!(f, "S^{dim}"),
            HomotopyType::WedgeOfEvenSpheres { copies: 0, .. } => write!(f, "point"),
            HomotopyType::WedgeOfEvenSpheres { copies: 1, dim } => write!(f, "S^{dim}"),
            HomotopyType::WedgeOfEvenSpheres { copies, dim } => {
                write!(f, "wedge of {copies} copies of S^{dim}")
            }
        }
    }
}

/// Homotopy type of the Rips complex of a core with `orbit_count` cycles of
/// length `ell` and winding `w` (requires winding fraction below 1/2).
///
/// At the boundary fractions `w' / (2w' + 1)` the complex is a wedge of
/// even spheres, one fewer than the orbit count; strictly between
/// boundaries it is a single odd sphere, independent of the orbit count.
pub fn classify_homotopy(ell: u64, w: u64, orbit_count: u64) -> HomotopyType {
    assert!(orbit_count >= 1, "a core has at least one orbit");
    assert!(ell >= 1);
    let (l, w) = if w == 0 {
        (1, 0)
    } else {
        let g = gcd(ell, w);
        (ell / g, w / g)
    };
    assert!(2 * w < l, "winding fraction must be below 1/2");
    if l == 2 * w + 1 {
        HomotopyType::WedgeOfEvenSpheres {
            copies: orbit_count - 1,
            dim: 2 * w,
        }
    } else {
        HomotopyType::OddSphere {
            dim: 2 * (w / (l - 2 * w)) + 1,
        }
    }
}

/// Sphere dimension of the Rips complex in the large-sample limit, where
/// the winding fraction approaches `r` from below: `2 * ceil(r/(1-2r)) - 1`.
pub fn expected_sphere_dimension(scale: Scale) -> Result<u64> {
    if !scale.below_half() {
        return Err(Error::ScaleTooLarge);
    }
    let (num, den): (u128, u128) = match scale {
        Scale::Rational { p, q } => (p as u128, q as u128),
        Scale::Fixed { num } => (num as u128, 1u128 << 64),
    };
    let d = den - 2 * num;
    let ceil = (num + d - 1) / d;
    Ok((2 * ceil - 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::sample_uniform;
    use crate::dynamics::{make_regular, orbit_report, periodic_and_levels};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fr(x: f64) -> u64 {
        (x * 18446744073709551616.0) as u64
    }

    fn test_scales() -> Vec<Scale> {
        vec![
            Scale::rational(1, 3).unwrap(),
            Scale::rational(2, 5).unwrap(),
            Scale::rational(49, 100).unwrap(),
            Scale::fixed(fr(0.25)).unwrap(),
            Scale::fixed(1).unwrap(),
            Scale::fixed(fr(0.5) - 1).unwrap(),
        ]
    }

    fn brute_edge(points: &SampleSet, scale: Scale, a: usize, b: usize) -> bool {
        a != b
            && (arc_contains(points.point(a), scale, points.point(b))
                || arc_contains(points.point(b), scale, points.point(a)))
    }

    #[test]
    fn graph_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [1usize, 2, 3, 5, 8, 40, 150] {
            let points = sample_uniform(n, &mut rng);
            for scale in test_scales() {
                let g = proximity_graph(&points, scale).unwrap();
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(
                            g.contains_edge(a, b),
                            brute_edge(&points, scale, a, b),
                            "n={n} scale={scale} edge ({a},{b})"
                        );
                        assert_eq!(g.contains_edge(a, b), g.contains_edge(b, a));
                    }
                    let brute_deg = (0..n).filter(|&b| brute_edge(&points, scale, a, b)).count();
                    assert_eq!(g.degree(a), brute_deg);
                }
            }
        }
    }

    #[test]
    fn clustered_points_graph() {
        // All points inside one tiny arc: complete graph for any usable r.
        let points = SampleSet::new(vec![fr(0.40), fr(0.401), fr(0.402), fr(0.409)]).unwrap();
        let g = proximity_graph(&points, Scale::rational(1, 3).unwrap()).unwrap();
        for v in 0..4 {
            assert_eq!(g.degree(v), 3);
            assert!(g.is_dominated(v).is_some());
        }
    }

    #[test]
    fn rejects_scales_of_half_or_more() {
        let points = SampleSet::new(vec![0, 1 << 62, 1 << 63]).unwrap();
        for scale in [
            Scale::rational(1, 2).unwrap(),
            Scale::rational(3, 5).unwrap(),
            Scale::rational(1, 1).unwrap(),
            Scale::fixed(1 << 63).unwrap(),
        ] {
            assert!(matches!(
                proximity_graph(&points, scale),
                Err(Error::ScaleTooLarge)
            ));
            assert!(matches!(
                dismantle_to_core(&points, scale),
                Err(Error::ScaleTooLarge)
            ));
            assert!(matches!(
                expected_sphere_dimension(scale),
                Err(Error::ScaleTooLarge)
            ));
        }
    }

    #[test]
    fn core_is_periodic_set_and_peels_dominated_vertices_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let scales = [
            Scale::rational(1, 3).unwrap(),
            Scale::rational(2, 5).unwrap(),
            Scale::rational(3, 10).unwrap(),
            Scale::fixed(fr(0.29)).unwrap(),
        ];
        for n in [5usize, 30, 120, 300] {
            let points = sample_uniform(n, &mut rng);
            for scale in scales {
                let result = dismantle_to_core(&points, scale).unwrap();
                // Route check: survivors are the original periodic points.
                let sys = build_map(points.clone(), scale);
                let la = periodic_and_levels(&sys);
                let periodic_ticks: Vec<u64> = la
                    .periodic
                    .iter()
                    .map(|&i| sys.point(i).tick)
                    .collect();
                assert_eq!(result.core.ticks(), &periodic_ticks[..]);
                assert_eq!(
                    result.removed_per_round.iter().sum::<usize>(),
                    n - result.core.len()
                );
                // Homotopy check: each peeled vertex is dominated when cut.
                let mut alive = points.clone();
                loop {
                    let sys = build_map(alive.clone(), scale);
                    let survivors = image_ticks(&sys);
                    if survivors.len() == alive.len() {
                        break;
                    }
                    let g = proximity_graph(&alive, scale).unwrap();
                    let mut in_image = vec![false; alive.len()];
                    for i in 0..alive.len() {
                        in_image[sys.step(i)] = true;
                    }
                    for v in 0..alive.len() {
                        if !in_image[v] {
                            assert!(
                                g.is_dominated(v).is_some(),
                                "peeled vertex {v} not dominated (n={n}, scale={scale})"
                            );
                        }
                    }
                    alive = SampleSet::from_sorted_unchecked(survivors);
                }
            }
        }
    }

    #[test]
    fn greedy_core_is_minimal_and_no_larger() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [4usize, 12, 40, 60] {
            let points = sample_uniform(n, &mut rng);
            for scale in [
                Scale::rational(1, 3).unwrap(),
                Scale::fixed(fr(0.23)).unwrap(),
            ] {
                let peel = dismantle_to_core(&points, scale).unwrap();
                let greedy = dismantle_greedy(&points, scale).unwrap();
                let g = proximity_graph(&greedy, scale).unwrap();
                assert!((0..g.n()).all(|v| g.is_dominated(v).is_none()));
                assert!(greedy.len() <= peel.core.len());
                // Minimal cores have a unique size however you get there.
                let gp = proximity_graph(&peel.core, scale).unwrap();
                if (0..gp.n()).all(|v| gp.is_dominated(v).is_none()) {
                    assert_eq!(greedy.len(), peel.core.len());
                } else {
                    let refold = dismantle_greedy(&peel.core, scale).unwrap();
                    assert_eq!(refold.len(), greedy.len());
                }
            }
        }
    }

    #[test]
    fn boundary_triangle_folds_to_point() {
        // Three points pairwise within r = 2/5: a complete graph. All three
        // are periodic (one 3-cycle, winding 1), so the peel keeps them,
        // and ell = 2w + 1 classifies the complex as a point.
        let points = SampleSet::new(vec![fr(0.0) + 1, fr(0.34), fr(0.67)]).unwrap();
        let scale = Scale::rational(2, 5).unwrap();
        let result = dismantle_to_core(&points, scale).unwrap();
        assert_eq!(result.core.len(), 3);
        assert_eq!(result.rounds, 0);
        let report = orbit_report(&build_map(points.clone(), scale)).unwrap();
        assert_eq!((report.length, report.winding, report.orbit_count), (3, 1, 1));
        let ht = classify_homotopy(3, 1, 1);
        assert_eq!(
            ht,
            HomotopyType::WedgeOfEvenSpheres { copies: 0, dim: 2 }
        );
        assert_eq!(ht.to_string(), "point");
        assert_eq!(dismantle_greedy(&points, scale).unwrap().len(), 1);
    }

    #[test]
    fn regular_hexagon_is_a_two_sphere() {
        let sys = make_regular(6, 2);
        let report = orbit_report(&sys).unwrap();
        assert_eq!((report.length, report.winding, report.orbit_count), (3, 1, 2));
        let core = dismantle_to_core(sys.points(), sys.scale()).unwrap();
        assert_eq!(core.core.len(), 6);
        let ht = classify_homotopy(report.length, report.winding, report.orbit_count);
        assert_eq!(
            ht,
            HomotopyType::WedgeOfEvenSpheres { copies: 1, dim: 2 }
        );
        assert_eq!(ht.to_string(), "S^2");
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_homotopy(10, 3, 1),
            HomotopyType::OddSphere { dim: 1 }
        );
        assert_eq!(
            classify_homotopy(8, 3, 1),
            HomotopyType::OddSphere { dim: 3 }
        );
        assert_eq!(
            classify_homotopy(7, 2, 1),
            HomotopyType::OddSphere { dim: 1 }
        );
        // Unreduced input reduces first: 6/2 cycles at winding 2 are 3/1.
        assert_eq!(
            classify_homotopy(6, 2, 2),
            HomotopyType::WedgeOfEvenSpheres { copies: 1, dim: 2 }
        );
        // Fixed points: a wedge of 0-spheres, i.e. orbit_count points.
        assert_eq!(
            classify_homotopy(1, 0, 3),
            HomotopyType::WedgeOfEvenSpheres { copies: 2, dim: 0 }
        );
        assert_eq!(classify_homotopy(1, 0, 1).to_string(), "point");
        assert_eq!(
            classify_homotopy(1, 0, 3).to_string(),
            "wedge of 2 copies of S^0"
        );
    }

    #[test]
    fn expected_dimension_examples() {
        let dim = |p, q| expected_sphere_dimension(Scale::rational(p, q).unwrap()).unwrap();
        assert_eq!(dim(3, 10), 1);
        assert_eq!(dim(1, 3), 1);
        assert_eq!(dim(2, 5), 3);
        assert_eq!(dim(5, 11), 9);
        assert_eq!(dim(1, 100), 1);
        let fx = |x: f64| {
            expected_sphere_dimension(Scale::fixed(fr(x)).unwrap()).unwrap()
        };
        assert_eq!(fx(0.2), 1);
        assert_eq!(fx(0.45), 9);
    }

    #[test]
    fn single_point_core() {
        let points = SampleSet::new(vec![12345]).unwrap();
        let scale = Scale::rational(1, 3).unwrap();
        let g = proximity_graph(&points, scale).unwrap();
        assert_eq!(g.degree(0), 0);
        assert!(g.is_dominated(0).is_none());
        let core = dismantle_to_core(&points, scale).unwrap();
        assert_eq!(core.core.len(), 1);
        assert_eq!(core.rounds, 0);
    }

    #[test]
    fn homotopy_type_serde_shape() {
        let s = serde_json::to_string(&HomotopyType::OddSphere { dim: 3 }).unwrap();
        assert_eq!(s, r#"{"kind":"odd_sphere","dim":3}"#);
        let w = serde_json::to_string(&HomotopyType::WedgeOfEvenSpheres { copies: 2, dim: 4 })
            .unwrap();
        assert_eq!(
            w,
            r#"{"kind":"wedge_of_even_spheres","copies":2,"dim":4}"#
        );
        let back: HomotopyType = serde_json::from_str(&w).unwrap();
        assert_eq!(
            back,
            HomotopyType::WedgeOfEvenSpheres { copies: 2, dim: 4 }
        );
    }
}
