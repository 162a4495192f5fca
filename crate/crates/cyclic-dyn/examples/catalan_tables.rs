//! Tables of the three Catalan-style counting families and their generating
//! functions evaluated at 1/4, which give the total level mass.

use cyclic_dyn::catalan::{
    bounded_growth_rate, catalan, catalan_bounded, catalan_prime, gf_quarter, GfFamily,
};

fn main() {
    println!("plain Catalan numbers C_i:");
    for i in 0..=12 {
        print!(" {}", catalan(i));
    }
    println!("\n");

    println!("height-bounded counts C_(i,h) (rows i = 0..8, columns h = 1..5):");
    for i in 0..=8 {
        print!("{i:>3}:");
        for h in 1..=5 {
            print!(" {:>8}", catalan_bounded(i, h).to_string());
        }
        println!();
    }
    println!();

    println!("prime counts C'_(i,h) (rows i = 0..8, columns h = 1..5):");
    for i in 0..=8 {
        print!("{i:>3}:");
        for h in 1..=5 {
            print!(" {:>8}", catalan_prime(i, h).to_string());
        }
        println!();
    }
    println!();

    println!("generating functions at x = 1/4 (half of each is the total mass):");
    println!("  C(1/4)    = {}", gf_quarter(GfFamily::Plain, 0));
    for h in 1..=6 {
        println!(
            "  C_{h}(1/4)  = {:<8} C'_{h}(1/4) = {:<10} growth 4 cos^2(pi/{}) = {:.6}",
            gf_quarter(GfFamily::Bounded, h).to_string(),
            gf_quarter(GfFamily::Prime, h).to_string(),
            h + 2,
            bounded_growth_rate(h)
        );
    }
}
