//! Vietoris-Rips analysis of one random sample: dismantle the proximity
//! graph to its core (always exactly the periodic set of the circle map) and
//! classify the homotopy type of the complex.

use cyclic_dyn::circle::{build_map, sample_uniform, Scale};
use cyclic_dyn::dynamics::{orbit_report, periodic_and_levels};
use cyclic_dyn::montecarlo::trial_rng;
use cyclic_dyn::vr::{classify_homotopy, dismantle_to_core, expected_sphere_dimension};

fn main() {
    for (label, scale) in [
        ("1/3", Scale::rational(1, 3).unwrap()),
        ("2/5", Scale::rational(2, 5).unwrap()),
        ("9/20", Scale::rational(9, 20).unwrap()),
        ("fixed:0.41421356", Scale::fixed_from_f64(std::f64::consts::SQRT_2 - 1.0).unwrap()),
    ] {
        let mut rng = trial_rng(2024, 0);
        let points = sample_uniform(600, &mut rng);
        let core = dismantle_to_core(&points, scale).expect("scale below 1/2");

        let sys = build_map(points, scale);
        let la = periodic_and_levels(&sys);
        assert_eq!(core.core.len(), la.periodic.len(), "core = periodic set");

        let report = orbit_report(&sys).expect("orbit structure");
        let ht = classify_homotopy(report.length, report.winding, report.orbit_count);
        println!("scale {label}: n = 600");
        let head: Vec<usize> = core.removed_per_round.iter().copied().take(6).collect();
        println!(
            "  core size {} after {} rounds (removed {:?}{})",
            core.core.len(),
            core.rounds,
            head,
            if core.rounds > 6 { ", ..." } else { "" }
        );
        println!(
            "  ell = {}, w = {}, orbits = {} -> homotopy type {}",
            report.length, report.winding, report.orbit_count, ht
        );
        println!(
            "  limiting type for this scale: S^{}\n",
            expected_sphere_dimension(scale).expect("scale below 1/2")
        );
    }
}
