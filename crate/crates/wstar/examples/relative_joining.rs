//! Relatively independent joinings: gluing two systems along a common
//! modular subsystem through their conditional expectations.
//!
//! ```bash
//! cargo run -p wstar --example relative_joining
//! ```

use wstar::joinings::{JoiningContext, SubsystemEmbedding};
use wstar::oracle::classical_relative_joining;
use wstar::sampler::{gibbs_m2, random_classical_fixture, trivial_embedding};
use wstar::suites::classical_fixture_oracle_difference;
use wstar::dynamics::fixed_point_algebra;

fn main() {
    // Over the trivial subsystem the joining is the product coupling.
    let a = gibbs_m2();
    let ctx = JoiningContext::new(trivial_embedding(&a), trivial_embedding(&a)).unwrap();
    let w = ctx.relative_joining();
    let product = ctx.product_coupling();
    println!(
        "F = C: max |relative joining - product| = {:.3e}",
        w.max_coordinate_difference(&product)
    );

    // Over the diagonal fixed points the joining correlates the two copies.
    let fixed = fixed_point_algebra(&a).unwrap();
    let emb = SubsystemEmbedding::inclusion(fixed.system.clone(), a.clone()).unwrap();
    let ctx = JoiningContext::new(emb.clone(), emb).unwrap();
    let w = ctx.relative_joining();
    let report = ctx.verify(&w);
    println!("\nF = A^alpha (diagonal):");
    println!("  positivity min eig:   {:+.3e}", report.positivity_min_eig);
    println!("  marginals residual:   {:.3e}", report.marginal_left_residual.max(report.marginal_right_residual));
    println!("  invariance residual:  {:.3e}", report.invariance_residual);
    println!("  restriction residual: {:.3e}", report.restriction_residual);
    let product = ctx.product_coupling();
    println!(
        "  distance from product: {:.3e} (genuinely correlated)",
        w.max_coordinate_difference(&product)
    );

    // On commutative systems the construction reproduces the classical
    // relatively independent joining computed by direct fiber summation.
    println!("\nclassical cross-check on random commutative fixtures:");
    for seed in 0..3 {
        let fixture = random_classical_fixture(seed);
        let diff = classical_fixture_oracle_difference(&fixture);
        let oracle = classical_relative_joining(
            &fixture.p,
            &fixture.q,
            &fixture.fiber_a,
            &fixture.fiber_b,
            &fixture.r,
        );
        println!(
            "  seed {seed}: {} x {} points over {} fibers, max |joining - oracle| = {diff:.3e}",
            oracle.len(),
            oracle[0].len(),
            fixture.r.len()
        );
    }
}
