//! Exact volumes of the constraint cones behind the level and swiftness
//! limits, cross-checked by Monte Carlo on exponential gap vectors.

use cyclic_dyn::cone::{build_cone, ConeFamily};

fn main() {
    println!(
        "{:<9} {:>5} {:>14} {:>12} {:>12} {:>10}",
        "cone", "dim", "exact", "float", "mc", "sigma"
    );
    let cones = [
        (ConeFamily::K, 0, None),
        (ConeFamily::K, 1, None),
        (ConeFamily::K, 3, None),
        (ConeFamily::Kq, 2, Some(3)),
        (ConeFamily::Kq, 3, Some(4)),
        (ConeFamily::S, 0, Some(2)),
        (ConeFamily::S, 1, Some(3)),
        (ConeFamily::S, 2, Some(5)),
    ];
    for (family, i, q) in cones {
        let cone = build_cone(family, i, q).expect("valid parameters");
        let label = match q {
            Some(q) => format!("{family}_{i}({q})"),
            None => format!("{family}_{i}"),
        };
        let exact = cone.exact_integral().expect("within the exact cap");
        let float = cyclic_dyn::catalan::to_f64(&exact);
        let mc = cone.mc_integral(400_000, 99);
        let sigma = if mc.std_error > 0.0 {
            (mc.estimate - float).abs() / mc.std_error
        } else {
            0.0
        };
        println!(
            "{:<9} {:>5} {:>14} {:>12.8} {:>12.8} {:>10.2}",
            label,
            cone.dim(),
            exact.to_string(),
            float,
            mc.estimate,
            sigma
        );
    }
}
