//! State-preserving conditional expectations and the Takesaki obstruction:
//! the projection exists exactly when the target subalgebra is invariant
//! under the modular flow of the state.
//!
//! ```bash
//! cargo run -p wstar --example conditional_expectation
//! ```

use wstar::algebra::MatrixAlgebra;
use wstar::gns::{conditional_expectation, is_modular_invariant, FaithfulState};
use wstar::linalg::{c, cr, CMatrix, CVector};
use wstar::sampler::{diagonal_algebra, full_algebra};

fn main() {
    let m2 = full_algebra(2);
    let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0 / 3.0), cr(2.0 / 3.0)]));
    let state = FaithfulState::new(m2.clone(), rho).unwrap();
    let gns = state.gns();

    // The diagonal subalgebra commutes with rho, so it is modular-invariant
    // and the conditional expectation exists: it zeroes the off-diagonals.
    let diag = diagonal_algebra(2);
    let (ok, resid) = is_modular_invariant(&state, &gns, &diag).unwrap();
    println!("diagonal subalgebra modular-invariant: {ok} (residual {resid:.3e})");

    let ce = conditional_expectation(&state, &gns, &diag).unwrap();
    let a = CMatrix::from_row_slice(2, 2, &[cr(0.3), c(0.2, -0.1), c(0.1, 0.1), cr(-0.4)]);
    let da = m2.expand(&ce.apply(&m2.coords(&a)));
    println!("D[[0.3, 0.2-0.1i], [0.1+0.1i, -0.4]]:");
    for i in 0..2 {
        println!(
            "  [{:+.4} {:+.4}i, {:+.4} {:+.4}i]",
            da[(i, 0)].re,
            da[(i, 0)].im,
            da[(i, 1)].re,
            da[(i, 1)].im
        );
    }
    println!("  (diagonal kept, off-diagonal killed)");

    // State preservation: mu(D(a)) = mu(a).
    let lhs = state.value(&da);
    let rhs = state.value(&a);
    println!("mu(D(a)) = {:.6}, mu(a) = {:.6}", lhs.re, rhs.re);

    // span{1, X} rotates under the modular flow: no conditional expectation.
    let x = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    let span_x = MatrixAlgebra::generate(2, &[x]).unwrap();
    match conditional_expectation(&state, &gns, &span_x) {
        Err(err) => println!("\nspan{{1, X}}: {err}"),
        Ok(_) => println!("\nunexpected: span{{1, X}} admitted an expectation"),
    }
}
