//! Finite-dimensional W*-dynamical systems: matrix *-algebras carrying
//! faithful states and group actions, with the constructions that connect
//! them: GNS representations and Tomita-Takesaki modular data, commutant
//! systems, state-preserving conditional expectations, relatively
//! independent joinings over common modular subsystems, fixed-point and
//! compact subsystems, and a convex-feasibility probe for disjointness.
//!
//! # Layout
//!
//! - [`algebra`]: *-subalgebras of M_n(ℂ) with trace-orthonormal bases;
//!   generation from generators, commutants, tensor products, containment.
//! - [`gns`]: faithful states, the GNS construction, the modular operator
//!   Δ, conjugation J, modular flow, and conditional expectations.
//! - [`dynamics`]: group actions as superoperators, unitary
//!   implementations, fixed-point algebras, eigenoperators, compact
//!   subsystems, and classification flags.
//! - [`joinings`]: commutant systems B̃, subsystem embeddings, the diagonal
//!   state Δ_λ, the relatively independent joining μ⊙_λν̃, verification,
//!   and the Hilbert-space orthogonality characterization.
//! - [`disjointness`]: the joining set as affine constraints plus a PSD
//!   cone, Dykstra projection probes, and the nested-subsystem witness
//!   pair.
//! - [`sampler`], [`oracle`], [`suites`]: seeded fixtures, independent
//!   classical reference formulas, and the verification suites.
//! - [`workspace`], [`report`], [`cli`]: the JSON file format, structured
//!   check reports, and the batch command-line front end.
//!
//! # Quick start
//!
//! ```
//! use wstar::joinings::JoiningContext;
//! use wstar::sampler::{gibbs_m2, trivial_embedding};
//!
//! // The Gibbs system on M₂ joined with itself over the trivial subsystem.
//! let sys = gibbs_m2();
//! let ctx = JoiningContext::new(trivial_embedding(&sys), trivial_embedding(&sys)).unwrap();
//! let joining = ctx.relative_joining();
//! let report = ctx.verify(&joining);
//! assert!(report.is_joining_over_f(1e-8));
//! ```
//!
//! The `examples/` directory walks through each capability; the
//! `acceptance` test target and `wstar suite --profile acceptance` run the
//! full verification battery.

pub mod algebra;
pub mod cli;
pub mod disjointness;
pub mod dynamics;
pub mod error;
pub mod gns;
pub mod joinings;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod sampler;
pub mod suites;
pub mod workspace;

pub use algebra::MatrixAlgebra;
pub use dynamics::{GroupAction, GroupSpec, WStarSystem};
pub use error::{Result, WStarError};
pub use gns::{ConditionalExpectation, FaithfulState, GnsData};
pub use joinings::{
    CommutantSystem, EtaData, JoiningContext, JoiningFunctional, SubsystemEmbedding,
};

#[cfg(test)]
mod concurrency_contract {
    //! Everything is immutable after construction and safe to share
    //! read-only across threads.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_sync() {
        assert_send_sync::<crate::MatrixAlgebra>();
        assert_send_sync::<crate::FaithfulState>();
        assert_send_sync::<crate::GnsData>();
        assert_send_sync::<crate::WStarSystem>();
        assert_send_sync::<crate::SubsystemEmbedding>();
        assert_send_sync::<crate::CommutantSystem>();
        assert_send_sync::<crate::JoiningContext>();
        assert_send_sync::<crate::JoiningFunctional>();
        assert_send_sync::<crate::disjointness::ConstraintSystem>();
    }
}
