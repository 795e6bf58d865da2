//! Fixed-point subsystems and the fixed-space identity H^U = span γ(A^α).
//!
//! ```bash
//! cargo run -p wstar --example fixed_points
//! ```

use wstar::dynamics::{
    classify, fixed_point_algebra, fixed_space_check, superop_from_unitary, unitary_rep,
    GroupAction, GroupSpec, WStarSystem,
};
use wstar::linalg::{c, cr, CMatrix, CVector};
use wstar::sampler::{full_algebra, trace_state, weyl_system};

fn main() {
    // The Weyl action of Z2 x Z2 on M2 by Ad(X) and Ad(Z) is ergodic: only
    // scalars commute with both generators.
    let weyl = weyl_system(2, None);
    let fixed = fixed_point_algebra(&weyl).unwrap();
    println!("Weyl system on M2: dim A^alpha = {}", fixed.algebra.dim());

    let gns = weyl.state().gns();
    let rep = unitary_rep(&weyl, &gns);
    let (ok, resid) = fixed_space_check(&weyl, &gns, &rep, &fixed);
    println!("fixed space of U equals span gamma(A^alpha): {ok} (residual {resid:.3e})");

    let cls = classify(&weyl, None).unwrap();
    println!(
        "ergodic: {}, tracial state: {}, trivial: {}",
        cls.ergodic, cls.state_tracial, cls.trivial
    );

    // A phase rotation Ad(diag(1, e^{i})) on M2 fixes exactly the diagonal.
    let m2 = full_algebra(2);
    let u = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), c(0.0, 1.0).exp()]));
    let theta = superop_from_unitary(&m2, &u).unwrap();
    let sys = WStarSystem::new(
        trace_state(m2),
        GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap(),
    )
    .unwrap();
    let fixed = fixed_point_algebra(&sys).unwrap();
    println!(
        "\nphase rotation on M2: dim A^alpha = {} (the diagonal algebra)",
        fixed.algebra.dim()
    );
    let gns = sys.state().gns();
    let rep = unitary_rep(&sys, &gns);
    let (ok, resid) = fixed_space_check(&sys, &gns, &rep, &fixed);
    println!("fixed space identity: {ok} (residual {resid:.3e})");

    // The fixed-point subsystem is itself a system (identity action,
    // restricted state) with its embedding recorded.
    println!(
        "subsystem: dim {}, identity action: {}",
        fixed.system.algebra().dim(),
        fixed.system.action().is_identity()
    );
}
