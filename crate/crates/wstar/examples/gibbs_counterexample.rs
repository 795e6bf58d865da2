//! The Gibbs-state counterexample: a system driven by its own modular flow
//! whose compact subsystem is everything while its fixed points are not,
//! so A^K ≠ A^α even though the dynamics is modular.
//!
//! ```bash
//! cargo run -p wstar --example gibbs_counterexample
//! ```

use wstar::dynamics::{classify, compact_subalgebra, fixed_point_algebra};
use wstar::sampler::{diagonal_algebra, gibbs_m2};

fn main() {
    let sys = gibbs_m2();
    println!(
        "system: M2 with rho = diag(1/3, 2/3), alpha = Ad(rho^i) as a Z-action"
    );

    let fixed = fixed_point_algebra(&sys).unwrap();
    let diag = diagonal_algebra(2);
    let (is_diag, resid) = fixed.algebra.span_equal(&diag);
    println!(
        "A^alpha: dim {}, the diagonal algebra: {is_diag} (residual {resid:.3e})",
        fixed.algebra.dim()
    );

    let gns = sys.state().gns();
    let compact = compact_subalgebra(&sys, &gns).unwrap();
    let (is_all, resid) = compact.algebra.span_equal(sys.algebra());
    println!(
        "A^K:     dim {}, all of M2: {is_all} (residual {resid:.3e})",
        compact.algebra.dim()
    );

    println!("\nso A^K = A strictly contains A^alpha: the compact and fixed");
    println!("subsystems of a modular flow differ once the state is not a trace.");

    let cls = classify(&sys, Some(&diag)).unwrap();
    println!("\nclassification:");
    println!("  ergodic:                      {}", cls.ergodic);
    println!("  relatively ergodic wrt diag:  {:?}", cls.relatively_ergodic);
    println!("  compact:                      {} ({})", cls.compact, cls.compact_note);
    println!("  state tracial:                {}", cls.state_tracial);
}
