//! Joint eigenoperator decompositions for abelian actions: the operators u
//! with α_g(u) = χ(g)·u, which generate the compact subsystem.
//!
//! ```bash
//! cargo run -p wstar --example eigenoperators
//! ```

use wstar::dynamics::eigen_decomposition;
use wstar::sampler::{gibbs_m2, weyl_system};

fn main() {
    // Gibbs modular dynamics on M2 (Z-action): the matrix units are
    // eigenoperators with phases 0, 0, -ln 2, +ln 2.
    let gibbs = gibbs_m2();
    let gns = gibbs.state().gns();
    let ops = eigen_decomposition(&gibbs, &gns).unwrap();
    println!("Gibbs system eigenoperators ({} of them):", ops.len());
    for (k, op) in ops.iter().enumerate() {
        println!(
            "  op {k}: phase {:+.6} (character {:+.4} {:+.4}i)",
            op.phases[0],
            op.character(0).re,
            op.character(0).im
        );
    }
    println!("  (phases are multiples of ln 2 = {:.6})", 2.0f64.ln());

    // Weyl Z2 x Z2 on M2: the Pauli basis carries the four characters.
    let weyl = weyl_system(2, None);
    let gns = weyl.state().gns();
    let ops = eigen_decomposition(&weyl, &gns).unwrap();
    println!("\nWeyl system eigenoperators with Z2 x Z2 characters:");
    for (k, op) in ops.iter().enumerate() {
        println!(
            "  op {k}: chi(Ad X) = {:+.0}, chi(Ad Z) = {:+.0}",
            op.character(0).re,
            op.character(1).re
        );
    }

    // Products of eigenoperators carry the product character (or vanish).
    let u = &ops[1];
    let v = &ops[2];
    let prod = &u.matrix * &v.matrix;
    let chi = u.character(0) * v.character(0);
    println!(
        "\nproduct of ops 1 and 2: character of the product action {:+.0} (nonzero product: {})",
        chi.re,
        prod.norm() > 1e-8
    );
}
