//! Acceptance suite: one named test per acceptance criterion, each ending in
//! a single PASS line (visible with `--nocapture`; the per-test ok/FAILED
//! line carries the same verdict either way).

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclic_dyn::catalan::{
    catalan, catalan_bounded, catalan_prime, gf_quarter, predicted_level_fraction,
    predicted_swift_fraction, to_f64, ExactRational, GfFamily,
};
use cyclic_dyn::circle::{arc_contains, build_map, cw_dist, sample_uniform, SampleSet, Scale};
use cyclic_dyn::cli::parse_scale;
use cyclic_dyn::cone::{build_cone, ConeFamily};
use cyclic_dyn::dynamics::{make_regular, orbit_report, periodic_and_levels, DynSystem};
use cyclic_dyn::montecarlo::{
    aggregate, growth_exponent, run_experiment, trial_rng, wf_bound_fraction, ExperimentConfig,
    Summary,
};
use cyclic_dyn::vr::{classify_homotopy, dismantle_to_core, HomotopyType};

fn rational(p: u64, q: u64) -> Scale {
    Scale::rational(p, q).unwrap()
}

fn frac(num: BigInt, log2_den: usize) -> ExactRational {
    ExactRational::new(num, BigInt::one() << log2_den)
}

/// |observed - predicted| as a multiple of the standard error.
fn sigma(s: Summary, predicted: f64) -> f64 {
    (s.mean - predicted).abs() / s.se
}

#[test]
fn criterion_01_exact_cone_integrals_match_catalan() {
    for i in 0..=6usize {
        let k = build_cone(ConeFamily::K, i, None).unwrap();
        assert_eq!(
            k.exact_integral().unwrap(),
            frac(catalan(i), 2 * i + 1),
            "K_{i}"
        );
        for q in 2u64..=6 {
            let h = q as usize - 2;
            let kq = build_cone(ConeFamily::Kq, i, Some(q)).unwrap();
            assert_eq!(
                kq.exact_integral().unwrap(),
                frac(catalan_bounded(i, h), 2 * i + 1),
                "K_{i}({q})"
            );
            let s = build_cone(ConeFamily::S, i, Some(q)).unwrap();
            assert_eq!(
                s.exact_integral().unwrap(),
                frac(catalan_prime(i, h), 2 * i + q as usize - 1),
                "S_{i}({q})"
            );
        }
    }
    println!("criterion 1 PASS: exact cone integrals equal Catalan formulas for i <= 6, q in 2..=6");
}

/// Enumerates every nonnegative ±1 path of length 2i returning to 0, bucketed
/// by maximum height: hist[m] = paths with max height exactly m.
fn dyck_height_histogram(i: usize) -> Vec<u64> {
    fn walk(left: usize, height: usize, maxh: usize, hist: &mut [u64]) {
        if left == 0 {
            if height == 0 {
                hist[maxh] += 1;
            }
            return;
        }
        // Up-step, pruned: the remaining steps must suffice to return to 0.
        if height + 1 <= left - 1 {
            walk(left - 1, height + 1, maxh.max(height + 1), hist);
        }
        if height > 0 {
            walk(left - 1, height - 1, maxh, hist);
        }
    }
    let mut hist = vec![0u64; i + 1];
    if i == 0 {
        hist[0] = 1;
    } else {
        walk(2 * i, 0, 0, &mut hist);
    }
    hist
}

/// Counts walks 0 -> h of length 2i + h confined to [0, h] by explicit
/// meet-in-the-middle enumeration of step sequences (no recurrences).
fn prime_count_by_enumeration(i: usize, h: usize) -> u64 {
    fn ends(start: usize, len: usize, h: usize, out: &mut [u64]) {
        if len == 0 {
            out[start] += 1;
            return;
        }
        if start < h {
            ends(start + 1, len - 1, h, out);
        }
        if start > 0 {
            ends(start - 1, len - 1, h, out);
        }
    }
    let total = 2 * i + h;
    let half = total / 2;
    let mut from_zero = vec![0u64; h + 1];
    ends(0, half, h, &mut from_zero);
    // A suffix y -> h reversed is a walk h -> y with the same confinement.
    let mut from_top = vec![0u64; h + 1];
    ends(h, total - half, h, &mut from_top);
    (0..=h).map(|y| from_zero[y] * from_top[y]).sum()
}

#[test]
fn criterion_02_combinatorics_vs_enumeration_and_gf() {
    for i in 0..=10usize {
        let hist = dyck_height_histogram(i);
        let total: u64 = hist.iter().sum();
        assert_eq!(BigInt::from(total), catalan(i), "C_{i}");
        for h in 0..=6usize {
            let bounded: u64 = hist.iter().take(h.min(i) + 1).sum();
            assert_eq!(BigInt::from(bounded), catalan_bounded(i, h), "C_({i},{h})");
            assert_eq!(
                BigInt::from(prime_count_by_enumeration(i, h)),
                catalan_prime(i, h),
                "C'_({i},{h})"
            );
        }
    }
    assert_eq!(
        gf_quarter(GfFamily::Plain, 0),
        ExactRational::from_integer(BigInt::from(2))
    );
    for h in 0..=64usize {
        let h64 = h as u64;
        assert_eq!(
            gf_quarter(GfFamily::Bounded, h),
            ExactRational::new(BigInt::from(2 * (h64 + 1)), BigInt::from(h64 + 2)),
            "C_h(1/4) at h={h}"
        );
        assert_eq!(
            gf_quarter(GfFamily::Prime, h),
            ExactRational::new(BigInt::one() << (h + 1), BigInt::from(h64 + 2)),
            "C'_h(1/4) at h={h}"
        );
    }
    println!("criterion 2 PASS: DP counts equal step-sequence enumeration (i <= 10, h <= 6); generating-function values exact for h <= 64");
}

#[test]
fn criterion_03_periodic_fraction_rational() {
    for (p, q) in [(1u64, 3u64), (5, 23)] {
        let config = ExperimentConfig::new(20_000, rational(p, q), 200, 0xACC3 + q);
        let rows = run_experiment(&config).unwrap();
        let agg = aggregate(&config, &rows);
        let predicted = 1.0 / q as f64;
        let dev = (agg.per_fraction.mean - predicted).abs();
        assert!(
            dev <= 0.02,
            "r={p}/{q}: per/n = {} vs {predicted} (|dev| = {dev})",
            agg.per_fraction.mean
        );
        let z = sigma(agg.per_fraction, predicted);
        assert!(z < 4.0, "r={p}/{q}: z = {z}");
    }
    println!("criterion 3 PASS: mean per/n at r=1/3 and r=5/23 within 0.02 and 4 se of 1/q (n=20000, 200 trials)");
}

#[test]
fn criterion_04_level_fractions() {
    // Fixed scale: lev_i/n -> C_i / 2^(2i+1).
    let scale = parse_scale("fixed:0.6180339887").unwrap();
    let spec_values = [(1u64, 2u64), (1, 8), (1, 16), (5, 128)];
    for (i, (num, den)) in spec_values.iter().enumerate() {
        assert_eq!(
            predicted_level_fraction(i, scale),
            ExactRational::new(BigInt::from(*num), BigInt::from(*den))
        );
    }
    let config = ExperimentConfig::new(20_000, scale, 200, 0xACC4);
    let rows = run_experiment(&config).unwrap();
    let agg = aggregate(&config, &rows);
    for (i, (num, den)) in spec_values.iter().enumerate() {
        let predicted = *num as f64 / *den as f64;
        let z = sigma(agg.level_fractions[i], predicted);
        assert!(z <= 4.0, "fixed scale lev_{i}: z = {z}");
    }
    // Rational 2/5: lev_i/n -> C_(i,3) / 2^(2i+1) for i = 0..5.
    let scale = rational(2, 5);
    let config = ExperimentConfig::new(20_000, scale, 200, 0xACC5);
    let rows = run_experiment(&config).unwrap();
    let agg = aggregate(&config, &rows);
    for i in 0..=5usize {
        let predicted = to_f64(&predicted_level_fraction(i, scale));
        assert_eq!(
            predicted_level_fraction(i, scale),
            frac(catalan_bounded(i, 3), 2 * i + 1)
        );
        let z = sigma(agg.level_fractions[i], predicted);
        assert!(z <= 4.0, "r=2/5 lev_{i}: z = {z}");
    }
    println!("criterion 4 PASS: level fractions within 4 se of Catalan predictions (fixed golden-ratio scale i<=3, r=2/5 i<=5)");
}

#[test]
fn criterion_05_single_orbit_aas_and_swift_certificate() {
    let scale = rational(1, 3);
    let mut config = ExperimentConfig::new(10_000, scale, 200, 0xACC6);
    config.swift = true;
    let rows = run_experiment(&config).unwrap();
    let single = rows.iter().filter(|r| r.orbit_count == 1).count();
    assert!(
        single >= 198,
        "single orbit in only {single}/200 trials at n=10^4"
    );
    for row in &rows {
        if row.orbit_count == 1 {
            assert_eq!(row.ell, 3 * row.w + 1, "ell*p - w*q = 1 in trial {}", row.trial);
        }
        let tally = row.swift.as_ref().unwrap();
        if tally.counts.first().copied().unwrap_or(0) > 0 {
            // A type-0 swift point certifies ell*p - w*q = 1 (here p=1, q=3).
            assert_eq!(row.ell, row.w * 3 + 1, "trial {}", row.trial);
        }
    }
    // Single-orbit frequency rises with n.
    let small = ExperimentConfig::new(100, scale, 200, 0xACC7);
    let small_rows = run_experiment(&small).unwrap();
    let small_freq =
        small_rows.iter().filter(|r| r.orbit_count == 1).count() as f64 / 200.0;
    assert!(single as f64 / 200.0 >= small_freq - 0.05);
    println!("criterion 5 PASS: single orbit in >= 99% of trials at n=10^4 (r=1/3); ell - 3w = 1 in every single-orbit and every q-swift trial");
}

#[test]
fn criterion_06_swiftness_fractions_at_one_half() {
    let mut config = ExperimentConfig::new(10_000, rational(1, 2), 200, 0xACC8);
    config.swift = true;
    let rows = run_experiment(&config).unwrap();
    let agg = aggregate(&config, &rows);
    let swi = agg.swift_fractions.as_ref().unwrap();
    let z0 = sigma(swi[0], 0.5);
    assert!(z0 <= 4.0, "swi_0/n: z = {z0}");
    let zt = sigma(agg.swift_total_fraction.unwrap(), 0.5);
    assert!(zt <= 4.0, "sum swi_i/n: z = {zt}");
    println!("criterion 6 PASS: swi_0/n and total swift fraction within 4 se of 1/2 (r=1/2, n=10^4, 200 trials)");
}

#[test]
fn criterion_07_one_half_rigidity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);
    let scale = rational(1, 2);
    for _ in 0..100 {
        // Draw 256 distinct ticks with no antipodal pair.
        let ticks: Vec<u64> = loop {
            let set = sample_uniform(256, &mut rng);
            let lookup: HashSet<u64> = set.ticks().iter().copied().collect();
            if set
                .ticks()
                .iter()
                .all(|&t| !lookup.contains(&(t ^ (1u64 << 63))))
            {
                break set.ticks().to_vec();
            }
        };
        let sys = build_map(SampleSet::new(ticks).unwrap(), scale);
        let la = periodic_and_levels(&sys);
        assert!(
            la.histogram.counts.len() <= 1,
            "level above 0 at r=1/2 without antipodal pairs"
        );
    }
    println!("criterion 7 PASS: 100 antipodal-free samples at r=1/2 have every point periodic or at level 0");
}

#[test]
fn criterion_08_winding_fraction_lower_bound() {
    let config = ExperimentConfig::new(1000, rational(1, 3), 1000, 0xACCA);
    let rows = run_experiment(&config).unwrap();
    let frac_holding = wf_bound_fraction(1000, config.scale, &rows);
    assert!(
        frac_holding >= 0.99,
        "wf >= r - 2 ln n / n held in only {frac_holding} of trials"
    );
    println!(
        "criterion 8 PASS: wf lower bound held in {:.1}% of 1000 trials (n=1000, r=1/3)",
        frac_holding * 100.0
    );
}

#[test]
fn criterion_09_growth_for_irrational_like_scale() {
    let scale = Scale::fixed_from_f64(std::f64::consts::SQRT_2 - 1.0).unwrap();
    let report = growth_exponent(scale, &[1_000, 10_000, 100_000], 50, 0xACCB).unwrap();
    for pair in report.points.windows(2) {
        let a = pair[0].median_per / pair[0].n as f64;
        let b = pair[1].median_per / pair[1].n as f64;
        assert!(b < a, "median per/n not decreasing: {a} then {b}");
    }
    let medians: Vec<f64> = report.points.iter().map(|p| p.median_per).collect();
    // The pinned window [0.3, 0.7] is an empirical calibration around the
    // one-sided asymptotic per = Omega(n^(1/2 - eps)). Honest measurement on
    // this grid lands near 0.8 for every seed tried: the periodic count
    // climbs a staircase of continued-fraction plateaus of sqrt(2)-1, and
    // between n = 10^3 and 10^5 the plateau denominators grow faster than
    // sqrt(n). The per/n decrease above is the part the theory guarantees;
    // this window is left as specified and currently fails.
    assert!(
        report.slope >= 0.3 && report.slope <= 0.7,
        "criterion 9 FAIL: log-log slope {:.3} outside pinned window [0.3, 0.7] \
         (median per = {medians:?} at n = 10^3, 10^4, 10^5; per/n does decrease as required)",
        report.slope
    );
    println!(
        "criterion 9 PASS: median per grows with log-log slope {:.3} and per/n decreases (r = sqrt(2)-1)",
        report.slope
    );
}

#[test]
fn criterion_10_vr_core_and_homotopy() {
    // Core equals the periodic set in every trial; mean core size near n/3.
    let scale = rational(1, 3);
    let n = 1000usize;
    let mut sizes = Vec::with_capacity(100);
    for t in 0..100u64 {
        let mut rng = trial_rng(0xACCC, t);
        let points = sample_uniform(n, &mut rng);
        let core = dismantle_to_core(&points, scale).unwrap();
        let sys = build_map(points, scale);
        let la = periodic_and_levels(&sys);
        let periodic_ticks: Vec<u64> =
            la.periodic.iter().map(|&i| sys.point(i).tick).collect();
        assert_eq!(core.core.ticks(), &periodic_ticks[..], "trial {t}");
        sizes.push(core.core.len() as f64);
    }
    let mean = sizes.iter().sum::<f64>() / 100.0;
    let var = sizes.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / 99.0;
    let se = (var / 100.0).sqrt();
    let dev = (mean - n as f64 / 3.0).abs();
    assert!(
        dev <= 4.0 * se,
        "mean core size {mean} vs {} (se {se})",
        n as f64 / 3.0
    );
    // Classified homotopy type at r = 3/10 is S^1 in >= 99% of trials.
    let scale = rational(3, 10);
    let mut circles = 0;
    for t in 0..100u64 {
        let mut rng = trial_rng(0xACCD, t);
        let points = sample_uniform(n, &mut rng);
        let report = orbit_report(&build_map(points, scale)).unwrap();
        let ht = classify_homotopy(report.length, report.winding, report.orbit_count);
        if ht == (HomotopyType::OddSphere { dim: 1 }) {
            circles += 1;
        }
    }
    assert!(circles >= 99, "S^1 in only {circles}/100 trials at r=3/10");
    println!("criterion 10 PASS: VR core = periodic set in 100/100 trials, mean core size within 4 se of n/3, S^1 in >= 99% at r=3/10");
}

fn naive_successor(points: &SampleSet, scale: Scale) -> Vec<usize> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let mut best = i;
            let mut best_d = 0u64;
            for j in 0..n {
                let d = cw_dist(points.point(i), points.point(j));
                if arc_contains(points.point(i), scale, points.point(j)) && d >= best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

fn naive_periodic(sys: &DynSystem) -> Vec<usize> {
    let n = sys.n();
    let mut periodic = vec![false; n];
    for start in 0..n {
        // After n steps the walk is inside its cycle; walk the cycle.
        let mut x = start;
        for _ in 0..n {
            x = sys.step(x);
        }
        let entry = x;
        loop {
            periodic[x] = true;
            x = sys.step(x);
            if x == entry {
                break;
            }
        }
    }
    (0..n).filter(|&i| periodic[i]).collect()
}

#[test]
fn criterion_11_brute_force_equivalence_and_regular_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let scales = [
        rational(1, 2),
        rational(1, 3),
        rational(2, 5),
        rational(5, 23),
        rational(1, 1),
        Scale::fixed(1).unwrap(),
        Scale::fixed_from_f64(0.618).unwrap(),
        Scale::fixed_from_f64(0.999).unwrap(),
    ];
    for trial in 0..200 {
        let n = 1 + (rng.next_u64() % 100) as usize;
        let points = sample_uniform(n, &mut rng);
        let scale = scales[(rng.next_u64() % scales.len() as u64) as usize];
        let sys = build_map(points.clone(), scale);
        assert_eq!(
            sys.succ(),
            &naive_successor(&points, scale)[..],
            "trial {trial}: successor table"
        );
        let la = periodic_and_levels(&sys);
        assert_eq!(la.periodic, naive_periodic(&sys), "trial {trial}: periodic set");
    }
    for n in 1..=12usize {
        for k in 0..n {
            let sys = make_regular(n, k);
            let report = orbit_report(&sys).unwrap();
            let d = num_integer::gcd(n, k) as u64;
            assert_eq!(report.orbit_count, d, "Reg_{n}^{k} orbits");
            assert_eq!(report.length, n as u64 / d, "Reg_{n}^{k} cycle length");
            assert_eq!(report.winding, k as u64 / d, "Reg_{n}^{k} winding");
            assert_eq!(report.periodic_count(), n as u64);
        }
    }
    println!("criterion 11 PASS: build_map and periodic sets equal brute force on 200 systems; Reg_n^k structure exact for n <= 12");
}

#[test]
fn swift_predictions_cross_check() {
    // Companion check tying criteria 1 and 6 together: the swiftness
    // fractions used in theory comparisons are exactly the cone volumes.
    for q in 2u64..=6 {
        for i in 0..=4usize {
            let cone = build_cone(ConeFamily::S, i, Some(q)).unwrap();
            assert_eq!(
                cone.exact_integral().unwrap(),
                predicted_swift_fraction(i, 1, q).unwrap()
            );
        }
    }
    println!("companion PASS: predicted swiftness fractions equal exact cone volumes");
}
