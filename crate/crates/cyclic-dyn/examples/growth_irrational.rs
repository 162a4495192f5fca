//! Growth of the periodic count for an irrational-like scale. The count
//! climbs a staircase of continued-fraction plateaus: per/n falls toward 0
//! while per itself grows polynomially, markedly faster than sqrt(n) on
//! moderate grids.

use cyclic_dyn::circle::Scale;
use cyclic_dyn::montecarlo::growth_exponent;

fn main() {
    let scale = Scale::fixed_from_f64(std::f64::consts::SQRT_2 - 1.0).unwrap();
    let report = growth_exponent(scale, &[1_000, 3_000, 10_000, 30_000, 100_000], 30, 5)
        .expect("growth experiment");
    println!("scale = sqrt(2) - 1 (fixed-point), 30 trials per n");
    println!("{:>8} {:>12} {:>10}", "n", "median per", "per/n");
    for p in &report.points {
        println!("{:>8} {:>12} {:>10.5}", p.n, p.median_per, p.median_per / p.n as f64);
    }
    println!("\nlog-log slope of median per: {:.3}", report.slope);
    println!("(the asymptotic lower bound is n^(1/2 - eps); the local slope");
    println!(" depends on which denominators the staircase crosses)");
}
