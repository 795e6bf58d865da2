//! GNS construction and Tomita-Takesaki modular data for a faithful state.
//!
//! Builds the state ω(a) = Tr(ρa) with ρ = diag(1/3, 2/3) on M₂, runs the
//! GNS construction, and inspects the modular operator, conjugation, and
//! flow.
//!
//! ```bash
//! cargo run -p wstar --example gns_modular
//! ```

use wstar::gns::FaithfulState;
use wstar::linalg::{cr, eigh, CMatrix, CVector};
use wstar::sampler::full_algebra;

fn main() {
    let m2 = full_algebra(2);
    let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0 / 3.0), cr(2.0 / 3.0)]));
    let state = FaithfulState::new(m2.clone(), rho).expect("faithful state");
    let gns = state.gns();

    println!("algebra dim {}, GNS dim {}", m2.dim(), gns.dim_h());
    println!(
        "Gram min eigenvalue (faithfulness margin): {:.3e}",
        state.gram_min_eig()
    );

    let spectrum = eigh(gns.delta()).values;
    println!("modular operator spectrum: {spectrum:.6?}");
    println!("  (the eigenvalue ratios of rho: 1/2, 1, 1, 2)");

    let checks = gns.verify(&state);
    println!("polar identity S = J Delta^(1/2): residual {:.3e}", checks.polar_residual);
    println!("J^2 = 1:                          residual {:.3e}", checks.j_squared_residual);
    println!("J Delta J = Delta^(-1):           residual {:.3e}", checks.jdj_residual);
    println!("J pi(A) J commutes with pi(A):    residual {:.3e}", checks.tomita_residual);

    // The modular flow rotates the off-diagonal matrix unit by e^{-it ln 2}.
    let e12 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
    let coords = m2.coords(&e12);
    println!("\nmodular flow on the matrix unit e12:");
    for t in [0.5, 1.0, 2.0] {
        let moved = gns.modular_flow_superop(t) * &coords;
        let phase = moved[1] / coords[1];
        println!(
            "  t = {t}: phase {:.6} {:+.6}i (expected angle {:+.6})",
            phase.re,
            phase.im,
            -t * 2.0f64.ln()
        );
    }

    // A tracial state has trivial modular data.
    let trace = FaithfulState::new(m2.clone(), CMatrix::identity(2, 2) / cr(2.0)).unwrap();
    let trace_gns = trace.gns();
    let spectrum = eigh(trace_gns.delta()).values;
    println!("\ntracial state modular spectrum: {spectrum:.6?} (all ones)");
}
