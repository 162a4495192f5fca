//! Swiftness types at a rational scale: swi_i/n converges to the exact cone
//! volume of S_i(q), and any trial containing a type-0 point certifies the
//! winding identity ell*p - w*q = 1.

use cyclic_dyn::catalan::{predicted_swift_fraction, to_f64};
use cyclic_dyn::circle::Scale;
use cyclic_dyn::montecarlo::{aggregate, run_experiment, ExperimentConfig};

fn main() {
    let (p, q) = (1u64, 2u64);
    let scale = Scale::rational(p, q).unwrap();
    let mut config = ExperimentConfig::new(8000, scale, 80, 23);
    config.swift = true;
    let rows = run_experiment(&config).expect("experiment");
    let agg = aggregate(&config, &rows);

    println!("scale {p}/{q}, n = {}, {} trials", config.n, config.trials);
    println!("{:>4} {:>12} {:>14} {:>8}", "i", "swi_i/n", "predicted", "z");
    let swi = agg.swift_fractions.as_ref().expect("rational scale");
    for i in 0..=4 {
        let exact = predicted_swift_fraction(i, p, q).expect("q >= 2");
        let predicted = to_f64(&exact);
        let s = swi[i];
        let z = if s.se > 0.0 { (s.mean - predicted) / s.se } else { 0.0 };
        println!(
            "{:>4} {:>12.6} {:>9} = {:<7.5} {:>6.2}",
            i,
            s.mean,
            exact.to_string(),
            predicted,
            z
        );
    }
    let total = agg.swift_total_fraction.expect("rational scale");
    println!("\ntotal swift fraction {:.6} (limit 1/2 at any p/q)", total.mean);

    let mut certified = 0u64;
    for row in &rows {
        let tally = row.swift.as_ref().expect("tallied");
        if tally.counts.first().copied().unwrap_or(0) > 0 {
            assert_eq!(row.ell * p, row.w * q + 1, "type-0 point certifies the identity");
            certified += 1;
        }
    }
    println!("winding identity ell*p - w*q = 1 certified in {certified}/{} trials", rows.len());
}
