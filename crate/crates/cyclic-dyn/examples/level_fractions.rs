//! Level populations: lev_i/n converges to C_i / 2^(2i+1) for irrational-like
//! scales and to the height-bounded analogue C_(i,q-2) / 2^(2i+1) for p/q.

use cyclic_dyn::catalan::{predicted_level_fraction, to_f64};
use cyclic_dyn::circle::Scale;
use cyclic_dyn::montecarlo::{aggregate, run_experiment, ExperimentConfig};

fn show(label: &str, scale: Scale) {
    let config = ExperimentConfig::new(10_000, scale, 60, 11);
    let rows = run_experiment(&config).expect("experiment");
    let agg = aggregate(&config, &rows);
    println!("scale {label}");
    println!("{:>4} {:>12} {:>14} {:>12}", "i", "observed", "predicted", "z");
    for i in 0..=6 {
        let exact = predicted_level_fraction(i, scale);
        let predicted = to_f64(&exact);
        let s = agg.level_fractions[i];
        let z = if s.se > 0.0 { (s.mean - predicted) / s.se } else { 0.0 };
        println!(
            "{:>4} {:>12.6} {:>9} = {:<9.6} {:>8.2}",
            i,
            s.mean,
            exact.to_string(),
            predicted,
            z
        );
    }
    println!();
}

fn main() {
    show("1/3", Scale::rational(1, 3).unwrap());
    show("2/5", Scale::rational(2, 5).unwrap());
    show(
        "fixed:0.618034 (golden)",
        Scale::fixed_from_f64(0.618_033_988_749_894_9).unwrap(),
    );
}
