//! Structure of the regular systems Reg_n^k: n equally spaced points with
//! scale chosen so every point jumps exactly k slots. The orbit count is
//! gcd(n, k) and every point is periodic.

use cyclic_dyn::{make_regular, orbit_report};

fn main() {
    println!("{:>4} {:>4} {:>8} {:>8} {:>9} {:>12}", "n", "k", "orbits", "length", "winding", "wf");
    for n in [6usize, 9, 12, 15] {
        for k in 1..n {
            let sys = make_regular(n, k);
            let report = orbit_report(&sys).expect("regular systems are uniform");
            let (num, den) = report.wf();
            println!(
                "{:>4} {:>4} {:>8} {:>8} {:>9} {:>9}/{}",
                n, k, report.orbit_count, report.length, report.winding, num, den
            );
            assert_eq!(report.periodic_count(), n as u64);
        }
        println!();
    }
}
