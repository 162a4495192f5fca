//! Simulation and exact combinatorics for the cyclic dynamical system `f_r`
//! on finite subsets of the circle.
//!
//! A sample `X` is a finite set of points on the unit-circumference circle,
//! stored at 64-bit tick resolution (one tick = 2^-64 of the circle). For a
//! scale `r`, the map `f_r` sends `x` to the clockwise-furthest point of `X`
//! inside the half-open arc `[x, x + r)`. Every orbit of `f_r` is eventually
//! periodic; all cycles share one length `ell` and winding number `w`, and
//! the winding fraction `w/ell` approaches `r` as samples grow.
//!
//! The crate provides:
//!
//! * [`circle`] — exact tick geometry, scales, sample sets, map construction;
//! * [`dynamics`] — periodic set and level decomposition, orbit reports,
//!   swift points, preimage arcs and gap sequences;
//! * [`catalan`] — exact Catalan-style counts and the limiting fractions they
//!   predict for level, swiftness, and periodic-point statistics;
//! * [`cone`] — the polyhedral cones whose exponential-measure volumes give
//!   those predictions, with exact and Monte Carlo integration;
//! * [`montecarlo`] — seeded, reproducible experiments over random samples
//!   plus theory comparison with z-scores;
//! * [`vr`] — Vietoris–Rips proximity graphs at scale `r < 1/2`, dismantling
//!   to the periodic core, and homotopy-type classification;
//! * [`cli`] — the `cyclic-dyn` command-line interface.
//!
//! Start with the runnable demos under `examples/`, e.g.
//! `cargo run --example periodic_fraction`.

pub mod catalan;
pub mod circle;
pub mod cli;
pub mod cone;
pub mod dynamics;
mod error;
pub mod montecarlo;
pub mod vr;

pub use circle::{arc_contains, build_map, cw_dist, sample_uniform, CirclePoint, SampleSet, Scale};
pub use dynamics::{
    gap_sequence, is_swift, make_regular, orbit_report, periodic_and_levels, preimage_interval,
    swiftness_types, DynSystem, GapSequence, IndexArc, LevelAnalysis, LevelHistogram, OrbitReport,
    SwiftReport,
};
pub use error::{Error, Result};
