//! Classification flags across system families, plus a small run of the
//! seeded verification suites.
//!
//! ```bash
//! cargo run -p wstar --example classify_and_suites
//! ```

use wstar::dynamics::classify;
use wstar::report::Tolerances;
use wstar::sampler::{gibbs_m2, random_system, weyl_system, Profile};
use wstar::suites;

fn main() {
    println!("{:<28} {:>7} {:>8} {:>8} {:>8}", "system", "ergodic", "tracial", "identity", "dim A^a");
    for (name, sys) in [
        ("Weyl Z2xZ2 on M2", weyl_system(2, None)),
        ("Gibbs modular flow on M2", gibbs_m2()),
        ("random classical (seed 3)", random_system(3, Profile::Classical)),
        ("random identity (seed 4)", random_system(4, Profile::Identity)),
    ] {
        let cls = classify(&sys, None).unwrap();
        println!(
            "{:<28} {:>7} {:>8} {:>8} {:>8}",
            name, cls.ergodic, cls.state_tracial, cls.identity, cls.fixed_point_dim
        );
    }

    // Short runs of the seeded suites (the full acceptance suite runs via
    // `cargo test -p wstar --test acceptance` or `wstar suite --profile acceptance`).
    let tols = Tolerances::default();
    println!();
    for rep in [
        suites::criterion_gibbs(&tols),
        suites::criterion_joining_suite(0, 10, &tols),
        suites::criterion_fixed_points(0, 10, &tols),
        suites::criterion_ergodic_tracial(0, 20, &tols),
    ] {
        print!("{}", rep.render_table());
    }
}
