//! The commutant system: B̃ = π_ν(B)′ with the state ν̃(b) = ⟨Ω, bΩ⟩ and the
//! dynamics β̃_g(b) = V_g b V_g† carried over from B.
//!
//! ```bash
//! cargo run -p wstar --example commutant_system
//! ```

use wstar::joinings::CommutantSystem;
use wstar::linalg::CVector;
use wstar::sampler::{gibbs_m2, trace_state, full_algebra};
use wstar::dynamics::{GroupAction, GroupSpec, WStarSystem};

fn main() {
    // Tracial M2: the commutant is the algebra of right multiplications,
    // again a copy of M2 with the tracial state.
    let sys = WStarSystem::new(
        trace_state(full_algebra(2)),
        GroupAction::identity_action(GroupSpec::Integer, 4),
    )
    .unwrap();
    let ctx = CommutantSystem::new(sys).unwrap();
    println!(
        "tracial M2: dim B~ = {}, nu~ tracial: {}",
        ctx.algebra().dim(),
        ctx.system().state().is_tracial(1e-9)
    );

    // The Gibbs system: the commutant carries nontrivial dynamics.
    let gibbs = gibbs_m2();
    let ctx = CommutantSystem::new(gibbs.clone()).unwrap();
    println!(
        "\nGibbs system: dim B = {}, dim B~ = {}",
        gibbs.algebra().dim(),
        ctx.algebra().dim()
    );
    println!(
        "beta~ identity: {} (the modular dynamics acts on the commutant too)",
        ctx.system().action().is_identity()
    );

    // The canonical anti-isomorphism j(b) = J pi(b)* J maps B onto B~ and
    // matches the state values: nu~(j(pi(b))) = nu(b).
    let alg = gibbs.algebra();
    for (label, unit) in [("e11", (0, 0)), ("e22", (1, 1))] {
        let mut m = wstar::linalg::CMatrix::zeros(2, 2);
        m[unit] = wstar::linalg::cr(1.0);
        let image = ctx.j_pi(&alg.coords(&m));
        let coords: CVector = ctx.algebra().coords(&image);
        let value = ctx.system().state().value_coords(&coords);
        println!("nu~(j(pi({label}))) = {:.6} {:+.3e}i", value.re, value.im);
    }
    println!("  (matches the Gibbs weights 1/3 and 2/3)");
}
