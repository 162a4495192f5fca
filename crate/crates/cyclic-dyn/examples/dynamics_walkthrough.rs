//! A small end-to-end tour: sample points, build the map, follow one orbit,
//! peel levels, and read off the periodic structure.

use cyclic_dyn::{build_map, orbit_report, periodic_and_levels, sample_uniform, Scale};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let points = sample_uniform(24, &mut rng);
    let scale = Scale::rational(1, 3).unwrap();
    let sys = build_map(points, scale);

    println!("n = {}, scale = {}", sys.n(), sys.scale());
    println!("\nticks and successors (tick / 2^64 is the position in [0,1)):");
    for i in 0..sys.n() {
        println!(
            "  x_{i:<2} = {:<22} -> x_{:<2} (step {:.4} of the circle)",
            format!("{:.6}", sys.point(i).tick as f64 / 2f64.powi(64)),
            sys.step(i),
            sys.step_ticks(i) as f64 / 2f64.powi(64),
        );
    }

    let la = periodic_and_levels(&sys);
    println!("\nlevels (distance from the eventual image):");
    println!("  periodic: {:?}", la.periodic);
    for (i, count) in la.histogram.counts.iter().enumerate() {
        println!("  level {i}: {count} points");
    }

    let report = orbit_report(&sys).expect("nonempty sample");
    let (num, den) = report.wf();
    println!(
        "\n{} orbit(s) of length {}, winding {} -> winding fraction {num}/{den}",
        report.orbit_count, report.length, report.winding
    );

    let mut x = 0;
    print!("\norbit of x_0: 0");
    for _ in 0..12 {
        x = sys.step(x);
        print!(" -> {x}");
    }
    println!(" ...");
}
