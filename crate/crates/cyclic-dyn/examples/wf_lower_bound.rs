//! The winding fraction sits in [r - 2 ln n / n, r) asymptotically almost
//! surely. The check is exact: the threshold is rounded down in binary and
//! compared against w/ell as a rational, so a pass is never a float artifact.

use cyclic_dyn::circle::Scale;
use cyclic_dyn::montecarlo::{
    run_experiment, wf_bound_fraction, wf_bound_threshold, ExperimentConfig,
};

fn main() {
    let scale = Scale::rational(1, 3).unwrap();
    println!("scale 1/3, 400 trials per n");
    println!("{:>8} {:>14} {:>12}", "n", "2 ln n / n", "bound holds");
    for n in [100usize, 300, 1000, 3000, 10000] {
        let config = ExperimentConfig::new(n, scale, 400, 31);
        let rows = run_experiment(&config).expect("experiment");
        let frac = wf_bound_fraction(n, scale, &rows);
        println!("{:>8} {:>14.6e} {:>11.1}%", n, wf_bound_threshold(n), 100.0 * frac);
    }
}
