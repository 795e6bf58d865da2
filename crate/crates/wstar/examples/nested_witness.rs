//! Distinct joinings from nested subsystems: when F is strictly contained
//! in a second common modular subsystem R, the joinings over R and over F
//! differ on R ⊙ R̃: the witness behind the non-disjointness direction of
//! the relative-ergodicity characterization.
//!
//! ```bash
//! cargo run -p wstar --example nested_witness
//! ```

use wstar::disjointness::nested_witness;
use wstar::dynamics::fixed_point_algebra;
use wstar::joinings::SubsystemEmbedding;
use wstar::sampler::{gibbs_m2, trivial_embedding};

fn main() {
    // A = B = the Gibbs system; R = A^alpha (diagonal), F = C.
    let a = gibbs_m2();
    let fixed = fixed_point_algebra(&a).unwrap();
    let r_sys = fixed.system.clone();
    println!(
        "A = Gibbs system on M2, R = A^alpha with dim {}, F = C",
        r_sys.algebra().dim()
    );

    let r_in_a = SubsystemEmbedding::inclusion(r_sys.clone(), a.clone()).unwrap();
    let r_in_b = SubsystemEmbedding::inclusion(r_sys.clone(), a).unwrap();
    let f_in_r = trivial_embedding(&r_sys);

    let witness = nested_witness(&f_in_r, &r_in_a, &r_in_b).unwrap();

    let rep_r = witness.ctx_f.verify(&witness.over_r);
    let rep_f = witness.ctx_f.verify(&witness.over_f);
    println!(
        "joining over R: max constraint violation in J_lambda = {:.3e}",
        rep_r.max_violation()
    );
    println!(
        "joining over F: max constraint violation in J_lambda = {:.3e}",
        rep_f.max_violation()
    );
    println!(
        "max difference of the restrictions to R x R~: {:.3e}",
        witness.restriction_difference
    );
    println!("\nboth are joinings over F, yet they differ: A is not disjoint");
    println!("from its fixed-point subsystem over the trivial F, which is the");
    println!("failure of ergodicity relative to F.");
}
