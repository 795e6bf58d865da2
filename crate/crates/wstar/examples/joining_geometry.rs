//! The Hilbert-space characterization of relatively independent joinings:
//! ω = μ⊙_λν̃ exactly when (H_μ ⊖ H_λ) ⊥ (H_ν̃ ⊖ H_λ) inside H_ω.
//!
//! ```bash
//! cargo run -p wstar --example joining_geometry
//! ```

use wstar::disjointness::ConstraintSystem;
use wstar::joinings::{joining_geometry, JoiningContext};
use wstar::sampler::{gibbs_m2, trivial_embedding};

fn main() {
    let a = gibbs_m2();
    let ctx = JoiningContext::new(trivial_embedding(&a), trivial_embedding(&a)).unwrap();

    // The canonical joining: orthogonality holds and the verdict matches
    // direct functional equality.
    let w = ctx.relative_joining();
    let geo = joining_geometry(&ctx, &w, 1e-8).unwrap();
    println!("canonical joining:");
    println!("  H_lambda~ = H_lambda residual: {:.3e}", geo.subspace_match_residual);
    println!(
        "  orthogonality residuals: {:.3e}, {:.3e}, {:.3e}",
        geo.orthogonality_residuals[0],
        geo.orthogonality_residuals[1],
        geo.orthogonality_residuals[2]
    );
    println!(
        "  orthogonal: {}, equals canonical: {}, verdicts agree: {}",
        geo.verdict_orthogonal,
        geo.verdict_functional,
        geo.verdicts_agree()
    );

    // A different joining (found by the feasibility probe) breaks the
    // orthogonality, and the verdict tracks the functional difference.
    let cs = ConstraintSystem::build(&ctx).unwrap();
    let probe = cs.probe(&ctx, 1, 5000);
    println!(
        "\nprobe joining at distance {:.3e} from canonical:",
        probe.distance_from_canonical
    );
    let geo = joining_geometry(&ctx, &probe.found, 1e-8).unwrap();
    println!(
        "  orthogonality residuals: {:.3e}, {:.3e}, {:.3e}",
        geo.orthogonality_residuals[0],
        geo.orthogonality_residuals[1],
        geo.orthogonality_residuals[2]
    );
    println!(
        "  orthogonal: {}, equals canonical: {}, verdicts agree: {}",
        geo.verdict_orthogonal,
        geo.verdict_functional,
        geo.verdicts_agree()
    );
    println!(
        "  U_g P_omega = P_omega V~_g residual: {:.3e}",
        geo.intertwine_residual
    );
}
