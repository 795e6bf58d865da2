//! Group actions by *-automorphisms, their unitary implementations on the
//! GNS space, fixed-point and eigenoperator subsystems, and system
//! classification.

use std::sync::Arc;

use crate::algebra::MatrixAlgebra;
use crate::error::{Result, WStarError};
use crate::gns::{FaithfulState, GnsData};
use crate::linalg::{
    cr, identity, joint_eigenspaces_of_unitaries, mgs_columns, mutual_containment, nullspace,
    CMatrix, CVector, RANK_CUTOFF,
};

/// Eigenvalue cluster threshold for joint diagonalization.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-8;

/// The acting group. Finite kinds enumerate their elements; the action
/// stores one superoperator per generator (per element for generic tables).
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpec {
    /// ℤ, generated by a single automorphism.
    Integer,
    /// ℤ_k, one generator of order k.
    FiniteCyclic(usize),
    /// ℤ_{k₁} × ... × ℤ_{k_m}, one generator per factor.
    FiniteProduct(Vec<usize>),
    /// Arbitrary finite group through its multiplication table; element 0 is
    /// the identity and the action carries one map per element.
    FiniteGeneric { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn generator_count(&self) -> usize {
        match self {
            GroupSpec::Integer | GroupSpec::FiniteCyclic(_) => 1,
            GroupSpec::FiniteProduct(orders) => orders.len(),
            GroupSpec::FiniteGeneric { table } => table.len(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Integer | GroupSpec::FiniteCyclic(_) | GroupSpec::FiniteProduct(_) => true,
            GroupSpec::FiniteGeneric { table } => {
                let m = table.len();
                (0..m).all(|i| (0..m).all(|j| table[i][j] == table[j][i]))
            }
        }
    }

    /// Validates the group data itself (orders positive, table a group).
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Integer => Ok(()),
            GroupSpec::FiniteCyclic(k) => {
                if *k == 0 {
                    return Err(WStarError::InvalidAction("cyclic order must be positive".into()));
                }
                Ok(())
            }
            GroupSpec::FiniteProduct(orders) => {
                if orders.is_empty() || orders.contains(&0) {
                    return Err(WStarError::InvalidAction(
                        "finite product needs positive cyclic orders".into(),
                    ));
                }
                Ok(())
            }
            GroupSpec::FiniteGeneric { table } => {
                let m = table.len();
                if m == 0 || table.iter().any(|row| row.len() != m) {
                    return Err(WStarError::InvalidAction(
                        "multiplication table must be square and nonempty".into(),
                    ));
                }
                if table.iter().flatten().any(|&x| x >= m) {
                    return Err(WStarError::InvalidAction("table entry out of range".into()));
                }
                for i in 0..m {
                    if table[0][i] != i || table[i][0] != i {
                        return Err(WStarError::InvalidAction(
                            "element 0 must be the identity".into(),
                        ));
                    }
                    if !(0..m).any(|j| table[i][j] == 0) {
                        return Err(WStarError::InvalidAction(format!(
                            "element {i} has no inverse"
                        )));
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            if table[table[i][j]][k] != table[i][table[j][k]] {
                                return Err(WStarError::InvalidAction(
                                    "multiplication table is not associative".into(),
                                ));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// A group acting by *-automorphisms, stored as superoperators on algebra
/// coordinates (one per generator).
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: GroupSpec,
    generators: Vec<CMatrix>,
}

impl GroupAction {
    pub fn new(group: GroupSpec, generators: Vec<CMatrix>) -> Result<Self> {
        group.validate()?;
        if generators.len() != group.generator_count() {
            return Err(WStarError::InvalidAction(format!(
                "group expects {} generator maps, got {}",
                group.generator_count(),
                generators.len()
            )));
        }
        Ok(Self { group, generators })
    }

    /// The identity action of the given group on a d-dimensional algebra.
    pub fn identity_action(group: GroupSpec, dim: usize) -> Self {
        let count = group.generator_count();
        Self {
            group,
            generators: vec![identity(dim); count],
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn is_identity(&self) -> bool {
        let d = self.generators.first().map(|g| g.nrows()).unwrap_or(0);
        self.generators
            .iter()
            .all(|g| (g - identity(d)).camax() < 1e-10)
    }
}

/// Builds the superoperator of Ad(u): a ↦ u a u† on the algebra's
/// coordinates, requiring that conjugation maps the algebra into itself.
pub fn superop_from_unitary(algebra: &MatrixAlgebra, u: &CMatrix) -> Result<CMatrix> {
    let n = algebra.ambient_dim();
    if u.shape() != (n, n) {
        return Err(WStarError::DimensionMismatch {
            context: "action unitary".into(),
            expected: n,
            got: u.nrows(),
        });
    }
    if (u * u.adjoint() - identity(n)).camax() > 1e-9 {
        return Err(WStarError::InvalidAction("matrix is not unitary".into()));
    }
    let d = algebra.dim();
    let mut theta = CMatrix::zeros(d, d);
    for j in 0..d {
        let moved = u * &algebra.basis()[j] * u.adjoint();
        let (coords, resid) = algebra.coords_checked(&moved);
        if resid > RANK_CUTOFF {
            return Err(WStarError::InvalidAction(format!(
                "Ad(u) does not preserve the algebra: residual {resid:.3e}"
            )));
        }
        theta.set_column(j, &coords);
    }
    Ok(theta)
}

/// A W*-dynamical system (A, μ, α) at finite dimension.
#[derive(Debug, Clone)]
pub struct WStarSystem {
    state: FaithfulState,
    action: GroupAction,
}

impl WStarSystem {
    /// Validates that every generator is a state-preserving *-automorphism
    /// and that the group relations hold.
    pub fn new(state: FaithfulState, action: GroupAction) -> Result<Self> {
        let alg = state.algebra().clone();
        let d = alg.dim();
        for (k, theta) in action.generators().iter().enumerate() {
            if theta.shape() != (d, d) {
                return Err(WStarError::InvalidAction(format!(
                    "generator {k}: superoperator is {}x{}, algebra dim {d}",
                    theta.nrows(),
                    theta.ncols()
                )));
            }
            let checks = automorphism_residuals(&alg, &state, theta);
            if checks.unital > 1e-9 || checks.star > 1e-9 || checks.multiplicative > 1e-9 {
                return Err(WStarError::InvalidAction(format!(
                    "generator {k} is not a *-automorphism: unital {:.3e}, star {:.3e}, \
                     multiplicative {:.3e}",
                    checks.unital, checks.star, checks.multiplicative
                )));
            }
            if checks.invertibility < 0.5 {
                return Err(WStarError::InvalidAction(format!(
                    "generator {k} is not invertible (min singular value {:.3e})",
                    checks.invertibility
                )));
            }
            if checks.state_invariance > 1e-10 {
                return Err(WStarError::InvalidAction(format!(
                    "generator {k} does not preserve the state: residual {:.3e}",
                    checks.state_invariance
                )));
            }
        }
        let sys = Self { state, action };
        let rel = sys.relation_residual();
        if rel > 1e-9 {
            return Err(WStarError::InvalidAction(format!(
                "group relations fail: residual {rel:.3e}"
            )));
        }
        Ok(sys)
    }

    pub fn state(&self) -> &FaithfulState {
        &self.state
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn algebra(&self) -> &Arc<MatrixAlgebra> {
        self.state.algebra()
    }

    pub fn is_trivial(&self) -> bool {
        self.algebra().dim() == 1
    }

    /// Residual of the group relations on the generator superoperators.
    pub fn relation_residual(&self) -> f64 {
        let gens = self.action.generators();
        match self.action.group() {
            GroupSpec::Integer => 0.0,
            GroupSpec::FiniteCyclic(k) => {
                let d = gens[0].nrows();
                (power(&gens[0], *k) - identity(d)).camax()
            }
            GroupSpec::FiniteProduct(orders) => {
                let d = gens[0].nrows();
                let mut worst = 0.0f64;
                for (g, &k) in gens.iter().zip(orders) {
                    worst = worst.max((power(g, k) - identity(d)).camax());
                }
                for i in 0..gens.len() {
                    for j in (i + 1)..gens.len() {
                        worst = worst.max((&gens[i] * &gens[j] - &gens[j] * &gens[i]).camax());
                    }
                }
                worst
            }
            GroupSpec::FiniteGeneric { table } => {
                let mut worst = 0.0f64;
                for i in 0..table.len() {
                    for j in 0..table.len() {
                        let prod = &gens[i] * &gens[j];
                        worst = worst.max((prod - &gens[table[i][j]]).camax());
                    }
                }
                worst
            }
        }
    }
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Residuals of the *-automorphism and state-invariance conditions for one
/// superoperator.
#[derive(Debug, Clone, Copy)]
pub struct AutomorphismChecks {
    pub unital: f64,
    pub star: f64,
    pub multiplicative: f64,
    /// Smallest singular value (1 for a GNS-unitary superoperator).
    pub invertibility: f64,
    pub state_invariance: f64,
}

pub fn automorphism_residuals(
    alg: &MatrixAlgebra,
    state: &FaithfulState,
    theta: &CMatrix,
) -> AutomorphismChecks {
    let d = alg.dim();
    let unital = (theta * alg.identity_coords() - alg.identity_coords()).norm();

    // α(a†) = α(a)†  ⟺  Θ K conj = K conj Θ  ⟺  Θ K = K conj(Θ).
    let star = (theta * alg.adjoint_mat() - alg.adjoint_mat() * theta.map(|z| z.conj())).camax();

    let mut multiplicative = 0.0f64;
    let moved: Vec<CMatrix> = (0..d)
        .map(|j| {
            let col = CVector::from_column_slice(theta.column(j).as_slice());
            alg.expand(&col)
        })
        .collect();
    for i in 0..d {
        for j in 0..d {
            let prod_then_move = alg.expand(&(theta * alg.prod_coords(i, j)));
            let move_then_prod = &moved[i] * &moved[j];
            multiplicative = multiplicative.max((prod_then_move - move_then_prod).camax());
        }
    }

    let svd = theta.clone().svd(false, false);
    let invertibility = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);

    let state_invariance = (theta.transpose() * state.mu_vec() - state.mu_vec()).norm();

    AutomorphismChecks {
        unital,
        star,
        multiplicative,
        invertibility,
        state_invariance,
    }
}

/// The unitary representation U_g γ(a) = γ(α_g(a)) on the GNS space.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    mats: Vec<CMatrix>,
}

impl UnitaryRep {
    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn generator(&self, k: usize) -> &CMatrix {
        &self.mats[k]
    }

    /// Residuals of the defining invariants.
    pub fn verify(&self, sys: &WStarSystem, gns: &GnsData) -> UnitaryRepChecks {
        let d = gns.dim_h();
        let mut unitarity = 0.0f64;
        let mut omega_fixed = 0.0f64;
        let mut intertwine = 0.0f64;
        let mut j_commute = 0.0f64;
        for (u, theta) in self.mats.iter().zip(sys.action().generators()) {
            unitarity = unitarity.max((u.adjoint() * u - identity(d)).camax());
            omega_fixed = omega_fixed.max((u * gns.omega() - gns.omega()).norm());
            for i in 0..sys.algebra().dim() {
                let mut e = CVector::zeros(sys.algebra().dim());
                e[i] = cr(1.0);
                let lhs = u * gns.pi_basis(i) * u.adjoint();
                let rhs = gns.pi(&(theta * &e));
                intertwine = intertwine.max((lhs - rhs).camax());
            }
            // U J = J U for antilinear J means U j_mat = j_mat conj(U).
            j_commute =
                j_commute.max((u * gns.j_mat() - gns.j_mat() * u.map(|z| z.conj())).camax());
        }
        UnitaryRepChecks {
            unitarity,
            omega_fixed,
            intertwine,
            j_commute,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UnitaryRepChecks {
    pub unitarity: f64,
    pub omega_fixed: f64,
    pub intertwine: f64,
    pub j_commute: f64,
}

impl UnitaryRepChecks {
    pub fn max_residual(&self) -> f64 {
        self.unitarity
            .max(self.omega_fixed)
            .max(self.intertwine)
            .max(self.j_commute)
    }
}

/// U_g = Γ Θ_g Γ⁻¹ per generator.
pub fn unitary_rep(sys: &WStarSystem, gns: &GnsData) -> UnitaryRep {
    let mats = sys
        .action()
        .generators()
        .iter()
        .map(|theta| gns.gamma_mat() * theta * gns.gamma_inv_mat())
        .collect();
    UnitaryRep { mats }
}

/// A subsystem cut out of a host system, with its embedding coordinates.
#[derive(Debug, Clone)]
pub struct Subsystem {
    /// The subalgebra inside the host's ambient matrices.
    pub algebra: Arc<MatrixAlgebra>,
    /// The subsystem as a system in its own right (restricted state/action).
    pub system: WStarSystem,
    /// Host-algebra coordinates of the subalgebra basis (d_host × d_sub).
    pub host_coords: CMatrix,
}

/// The fixed point algebra A^α = {a : α_g(a) = a}, returned with the
/// identity-system structure restricted from the host.
pub fn fixed_point_algebra(sys: &WStarSystem) -> Result<Subsystem> {
    let alg = sys.algebra();
    let d = alg.dim();
    let gens = sys.action().generators();
    let mut stacked = CMatrix::zeros(d * gens.len(), d);
    for (k, theta) in gens.iter().enumerate() {
        stacked
            .view_mut((k * d, 0), (d, d))
            .copy_from(&(theta - identity(d)));
    }
    let fixed_coords = nullspace(&stacked, RANK_CUTOFF);
    let fixed_mats: Vec<CMatrix> = (0..fixed_coords.ncols())
        .map(|j| alg.expand(&CVector::from_column_slice(fixed_coords.column(j).as_slice())))
        .collect();
    let sub_alg = Arc::new(MatrixAlgebra::generate(alg.ambient_dim(), &fixed_mats)?);
    let state = FaithfulState::new(sub_alg.clone(), sys.state().density().clone())?;
    let action = GroupAction::identity_action(sys.action().group().clone(), sub_alg.dim());
    let system = WStarSystem::new(state, action)?;
    let host_coords = alg.subalgebra_coords(&sub_alg)?;
    Ok(Subsystem {
        algebra: sub_alg,
        system,
        host_coords,
    })
}

/// Checks H^U = span γ(A^α): dimensions match and the two subspaces contain
/// each other up to the reported residual.
pub fn fixed_space_check(
    _sys: &WStarSystem,
    gns: &GnsData,
    rep: &UnitaryRep,
    fixed: &Subsystem,
) -> (bool, f64) {
    let d = gns.dim_h();
    let mats = rep.mats();
    let mut stacked = CMatrix::zeros(d * mats.len(), d);
    for (k, u) in mats.iter().enumerate() {
        stacked
            .view_mut((k * d, 0), (d, d))
            .copy_from(&(u - identity(d)));
    }
    let h_fixed = nullspace(&stacked, RANK_CUTOFF);

    let gamma_cols: Vec<CVector> = (0..fixed.host_coords.ncols())
        .map(|j| {
            gns.gamma_of(&CVector::from_column_slice(
                fixed.host_coords.column(j).as_slice(),
            ))
        })
        .collect();
    let gamma_span = mgs_columns(&gamma_cols, RANK_CUTOFF);

    if h_fixed.ncols() != gamma_span.ncols() {
        return (false, f64::INFINITY);
    }
    let resid = mutual_containment(&h_fixed, &gamma_span);
    (resid < 1e-9, resid)
}

/// A nonzero algebra element with α_g(op) = χ(g)·op for every generator.
#[derive(Debug, Clone)]
pub struct EigenOperator {
    /// Algebra coordinates, unit GNS norm.
    pub coords: CVector,
    /// The element as an ambient matrix.
    pub matrix: CMatrix,
    /// One phase per generator, in (−π, π]; χ(g_k) = exp(i·phase_k).
    pub phases: Vec<f64>,
}

impl EigenOperator {
    pub fn character(&self, k: usize) -> num_complex::Complex64 {
        crate::linalg::c(0.0, self.phases[k]).exp()
    }
}

/// Joint eigenoperator decomposition for an abelian action: a GNS-orthonormal
/// family spanning the whole algebra. The superoperators are unitary for the
/// GNS inner product and commute, so sequential eigenspace refinement of
/// their Hermitian parts diagonalizes them simultaneously.
pub fn eigen_decomposition(sys: &WStarSystem, gns: &GnsData) -> Result<Vec<EigenOperator>> {
    if !sys.action().group().is_abelian() {
        return Err(WStarError::NonAbelianGroup(
            "eigenoperator decomposition mirrors the paper's abelian hypothesis".into(),
        ));
    }
    let rep = unitary_rep(sys, gns);
    let blocks = joint_eigenspaces_of_unitaries(rep.mats(), EIGEN_CLUSTER_TOL);
    let alg = sys.algebra();
    let mut out = Vec::with_capacity(alg.dim());
    for block in blocks {
        for jcol in 0..block.ncols() {
            let x = CVector::from_column_slice(block.column(jcol).as_slice());
            let phases: Vec<f64> = rep
                .mats()
                .iter()
                .map(|u| {
                    let lambda = x.dotc(&(u * &x));
                    lambda.arg()
                })
                .collect();
            let coords = gns.coords_of(&x);
            let matrix = alg.expand(&coords);
            out.push(EigenOperator {
                coords,
                matrix,
                phases,
            });
        }
    }
    Ok(out)
}

/// The compact subsystem A^K: the algebra generated by all eigenoperators,
/// computed from scratch. At finite dimension this always spans the full
/// algebra, which callers can verify with [`MatrixAlgebra::span_equal`].
pub fn compact_subalgebra(sys: &WStarSystem, gns: &GnsData) -> Result<Subsystem> {
    let eigenops = eigen_decomposition(sys, gns)?;
    let mats: Vec<CMatrix> = eigenops.iter().map(|e| e.matrix.clone()).collect();
    let alg = sys.algebra();
    let sub_alg = Arc::new(MatrixAlgebra::generate(alg.ambient_dim(), &mats)?);
    let state = FaithfulState::new(sub_alg.clone(), sys.state().density().clone())?;
    let d = sub_alg.dim();
    let z = alg.subalgebra_coords(&sub_alg)?;
    // Restrict each generator to the subalgebra coordinates.
    let mut gens = Vec::new();
    for theta in sys.action().generators() {
        let mut restricted = CMatrix::zeros(d, d);
        for j in 0..d {
            let moved = theta * CVector::from_column_slice(z.column(j).as_slice());
            restricted.set_column(j, &(z.adjoint() * moved));
        }
        gens.push(restricted);
    }
    let action = GroupAction::new(sys.action().group().clone(), gens)?;
    let system = WStarSystem::new(state, action)?;
    Ok(Subsystem {
        algebra: sub_alg,
        system,
        host_coords: z,
    })
}

/// Classification flags for a system; `compact` is always true at finite
/// dimension and carries the justification instead of a vacuous orbit test.
#[derive(Debug, Clone)]
pub struct Classification {
    pub ergodic: bool,
    pub relatively_ergodic: Option<bool>,
    pub compact: bool,
    pub compact_note: String,
    pub weakly_mixing: bool,
    pub identity: bool,
    pub trivial: bool,
    pub state_tracial: bool,
    pub fixed_point_dim: usize,
}

/// Classifies a system; when `sub` is given, also decides ergodicity
/// relative to it (A^α ⊆ sub).
pub fn classify(sys: &WStarSystem, sub: Option<&MatrixAlgebra>) -> Result<Classification> {
    let fixed = fixed_point_algebra(sys)?;
    let fixed_dim = fixed.algebra.dim();
    let relatively_ergodic = match sub {
        None => None,
        Some(s) => {
            let (contained, resid) = sys.algebra().contains(s)?;
            if !contained {
                return Err(WStarError::ContainmentFailed { residual: resid });
            }
            let (rel, _) = s.contains(&fixed.algebra)?;
            Some(rel)
        }
    };
    Ok(Classification {
        ergodic: fixed_dim == 1,
        relatively_ergodic,
        compact: true,
        compact_note: "every orbit is totally bounded at finite dimension; the orbit test is \
                       vacuous here"
            .into(),
        weakly_mixing: sys.algebra().dim() == 1,
        identity: sys.action().is_identity(),
        trivial: sys.is_trivial(),
        state_tracial: sys.state().is_tracial(1e-9),
        fixed_point_dim: fixed_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gns::is_modular_invariant;
    use crate::linalg::c;

    fn pauli(which: char) -> CMatrix {
        match which {
            'x' => CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
            'y' => CMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]),
            'z' => CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]),
            _ => unreachable!(),
        }
    }

    fn m2() -> Arc<MatrixAlgebra> {
        Arc::new(MatrixAlgebra::generate(2, &[pauli('x'), pauli('z')]).unwrap())
    }

    fn trace_state(alg: Arc<MatrixAlgebra>) -> FaithfulState {
        let n = alg.ambient_dim();
        FaithfulState::new(alg, identity(n) / cr(n as f64)).unwrap()
    }

    /// Weyl action of ℤ₂×ℤ₂ on M₂ via Ad(X), Ad(Z) with the tracial state.
    fn weyl_m2() -> WStarSystem {
        let alg = m2();
        let gx = superop_from_unitary(&alg, &pauli('x')).unwrap();
        let gz = superop_from_unitary(&alg, &pauli('z')).unwrap();
        let action = GroupAction::new(GroupSpec::FiniteProduct(vec![2, 2]), vec![gx, gz]).unwrap();
        WStarSystem::new(trace_state(alg), action).unwrap()
    }

    /// The Gibbs fixture: ρ ∝ diag(1,2) on M₂ with α = Ad(ρ^{i}) as a
    /// ℤ-action (the modular flow sampled at t = 1).
    fn gibbs_m2() -> WStarSystem {
        let alg = m2();
        let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0 / 3.0), cr(2.0 / 3.0)]));
        let state = FaithfulState::new(alg.clone(), rho).unwrap();
        let gns = state.gns();
        let theta = gns.modular_flow_superop(1.0);
        let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
        WStarSystem::new(state, action).unwrap()
    }

    fn shift_diag4() -> WStarSystem {
        let e = |i: usize| {
            let mut m = CMatrix::zeros(4, 4);
            m[(i, i)] = cr(1.0);
            m
        };
        let alg =
            Arc::new(MatrixAlgebra::generate(4, &[e(0), e(1), e(2), e(3)]).unwrap());
        let state = trace_state(alg.clone());
        let mut p = CMatrix::zeros(4, 4);
        for i in 0..4 {
            p[((i + 1) % 4, i)] = cr(1.0);
        }
        let theta = superop_from_unitary(&alg, &p).unwrap();
        let action = GroupAction::new(GroupSpec::FiniteCyclic(4), vec![theta]).unwrap();
        WStarSystem::new(state, action).unwrap()
    }

    #[test]
    fn unitary_rep_identity_action() {
        let alg = m2();
        let state = trace_state(alg.clone());
        let sys = WStarSystem::new(
            state,
            GroupAction::identity_action(GroupSpec::Integer, alg.dim()),
        )
        .unwrap();
        let gns = sys.state().gns();
        let rep = unitary_rep(&sys, &gns);
        assert!((rep.generator(0) - identity(4)).camax() < 1e-12);
        assert!(rep.verify(&sys, &gns).max_residual() < 1e-9);
    }

    #[test]
    fn unitary_rep_ad_z_signs_on_paulis() {
        let alg = m2();
        let gz = superop_from_unitary(&alg, &pauli('z')).unwrap();
        let action = GroupAction::new(GroupSpec::FiniteCyclic(2), vec![gz]).unwrap();
        let sys = WStarSystem::new(trace_state(alg.clone()), action).unwrap();
        let gns = sys.state().gns();
        let rep = unitary_rep(&sys, &gns);
        let u = rep.generator(0);

        let check = |m: &CMatrix, sign: f64| {
            let g = gns.gamma_of(&alg.coords(m));
            assert!((u * &g - g.map(|z| z * cr(sign))).norm() < 1e-10);
        };
        check(&identity(2), 1.0);
        check(&pauli('z'), 1.0);
        check(&pauli('x'), -1.0);
        check(&pauli('y'), -1.0);
        assert!(rep.verify(&sys, &gns).max_residual() < 1e-9);
    }

    #[test]
    fn unitary_rep_cyclic_shift_permutes_gamma_vectors() {
        let sys = shift_diag4();
        let gns = sys.state().gns();
        let rep = unitary_rep(&sys, &gns);
        let u = rep.generator(0);
        let alg = sys.algebra();
        for i in 0..4 {
            let mut ei = CMatrix::zeros(4, 4);
            ei[(i, i)] = cr(1.0);
            let mut enext = CMatrix::zeros(4, 4);
            enext[((i + 1) % 4, (i + 1) % 4)] = cr(1.0);
            let lhs = u * gns.gamma_of(&alg.coords(&ei));
            let rhs = gns.gamma_of(&alg.coords(&enext));
            assert!((lhs - rhs).norm() < 1e-10);
        }
        assert!(rep.verify(&sys, &gns).max_residual() < 1e-9);
    }

    #[test]
    fn fixed_points_of_identity_action_are_everything() {
        let alg = m2();
        let sys = WStarSystem::new(
            trace_state(alg.clone()),
            GroupAction::identity_action(GroupSpec::Integer, alg.dim()),
        )
        .unwrap();
        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(fixed.algebra.dim(), 4);
    }

    #[test]
    fn weyl_action_is_ergodic() {
        let sys = weyl_m2();
        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(fixed.algebra.dim(), 1);
        let gns = sys.state().gns();
        let rep = unitary_rep(&sys, &gns);
        let (ok, resid) = fixed_space_check(&sys, &gns, &rep, &fixed);
        assert!(ok, "residual {resid}");

        let cls = classify(&sys, None).unwrap();
        assert!(cls.ergodic);
        assert!(cls.state_tracial);
        assert!(!cls.trivial);
    }

    #[test]
    fn phase_rotation_fixes_diagonal() {
        // Ad(diag(1, e^{iθ})) with θ an irrational multiple of π fixes
        // exactly the diagonal algebra.
        let alg = m2();
        let theta_angle = 1.0f64; // 1 radian: irrational multiple of π
        let u = CMatrix::from_diagonal(&CVector::from_vec(vec![
            cr(1.0),
            c(0.0, theta_angle).exp(),
        ]));
        let theta = superop_from_unitary(&alg, &u).unwrap();
        let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
        let sys = WStarSystem::new(trace_state(alg), action).unwrap();
        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(fixed.algebra.dim(), 2);
        let diag = MatrixAlgebra::generate(2, &[pauli('z')]).unwrap();
        let (ok, _) = fixed.algebra.span_equal(&diag);
        assert!(ok);
    }

    #[test]
    fn fixed_space_check_on_examples() {
        // Identity system: both spaces are the whole GNS space.
        let alg = m2();
        let sys_id = WStarSystem::new(
            trace_state(alg.clone()),
            GroupAction::identity_action(GroupSpec::Integer, alg.dim()),
        )
        .unwrap();
        let gns = sys_id.state().gns();
        let rep = unitary_rep(&sys_id, &gns);
        let fixed = fixed_point_algebra(&sys_id).unwrap();
        let (ok, _) = fixed_space_check(&sys_id, &gns, &rep, &fixed);
        assert!(ok);

        // Cyclic shift on ℂ⁴: both spaces are one-dimensional.
        let sys = shift_diag4();
        let gns = sys.state().gns();
        let rep = unitary_rep(&sys, &gns);
        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(fixed.algebra.dim(), 1);
        let (ok, resid) = fixed_space_check(&sys, &gns, &rep, &fixed);
        assert!(ok, "residual {resid}");
    }

    #[test]
    fn gibbs_eigenoperators_and_phases() {
        let sys = gibbs_m2();
        let gns = sys.state().gns();
        let ops = eigen_decomposition(&sys, &gns).unwrap();
        assert_eq!(ops.len(), 4);
        let ln2 = 2.0f64.ln();
        let mut phases: Vec<f64> = ops.iter().map(|o| o.phases[0]).collect();
        phases.sort_by(f64::total_cmp);
        let expect = [-ln2, 0.0, 0.0, ln2];
        for (got, want) in phases.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "phases {phases:?}");
        }
    }

    #[test]
    fn weyl_eigenoperators_are_pauli_with_four_characters() {
        let sys = weyl_m2();
        let gns = sys.state().gns();
        let ops = eigen_decomposition(&sys, &gns).unwrap();
        assert_eq!(ops.len(), 4);
        let mut chars: Vec<(i32, i32)> = ops
            .iter()
            .map(|o| {
                (
                    o.character(0).re.round() as i32,
                    o.character(1).re.round() as i32,
                )
            })
            .collect();
        chars.sort();
        assert_eq!(chars, vec![(-1, -1), (-1, 1), (1, -1), (1, 1)]);
        // Each eigenoperator is proportional to a Pauli matrix.
        for op in &ops {
            let m = &op.matrix;
            let overlaps: Vec<f64> = [identity(2), pauli('x'), pauli('y'), pauli('z')]
                .iter()
                .map(|p| crate::algebra::trace_ip(p, m).norm())
                .collect();
            let big = overlaps.iter().filter(|&&x| x > 1e-8).count();
            assert_eq!(big, 1, "overlaps {overlaps:?}");
        }
    }

    #[test]
    fn identity_action_characters_trivial() {
        let alg = m2();
        let sys = WStarSystem::new(
            trace_state(alg.clone()),
            GroupAction::identity_action(GroupSpec::Integer, alg.dim()),
        )
        .unwrap();
        let gns = sys.state().gns();
        let ops = eigen_decomposition(&sys, &gns).unwrap();
        assert_eq!(ops.len(), 4);
        for op in &ops {
            assert!(op.phases[0].abs() < 1e-10);
        }
    }

    #[test]
    fn cyclic_shift_characters_are_fourth_roots() {
        // The Z4 shift: U has eigenvalues {1, i, -1, -i}. Its Hermitian part
        // has a doubly degenerate zero eigenvalue, so the refinement needs
        // the skew part to separate +-i.
        let sys = shift_diag4();
        let gns = sys.state().gns();
        let ops = eigen_decomposition(&sys, &gns).unwrap();
        assert_eq!(ops.len(), 4);
        let mut phases: Vec<f64> = ops.iter().map(|o| o.phases[0]).collect();
        phases.sort_by(f64::total_cmp);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let expect = [-half_pi, 0.0, half_pi, 2.0 * half_pi];
        for (got, want) in phases.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "phases {phases:?}");
        }
        // Characters respect the group relation: chi^4 = 1.
        for op in &ops {
            let chi4 = op.character(0).powu(4);
            assert!((chi4 - cr(1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn classify_rejects_non_contained_sub() {
        let units: Vec<CMatrix> = (0..2)
            .map(|i| {
                let mut m = CMatrix::zeros(2, 2);
                m[(i, i)] = cr(1.0);
                m
            })
            .collect();
        let diag = Arc::new(MatrixAlgebra::generate(2, &units).unwrap());
        let sys = WStarSystem::new(
            trace_state(diag),
            GroupAction::identity_action(GroupSpec::Integer, 2),
        )
        .unwrap();
        let err = classify(&sys, Some(&m2())).unwrap_err();
        assert!(matches!(err, WStarError::ContainmentFailed { .. }));
    }

    #[test]
    fn eigenoperator_products_multiply_characters() {
        let sys = gibbs_m2();
        let gns = sys.state().gns();
        let alg = sys.algebra();
        let ops = eigen_decomposition(&sys, &gns).unwrap();
        let theta = &sys.action().generators()[0];
        for u in &ops {
            for v in &ops {
                let prod = &u.matrix * &v.matrix;
                let (coords, _) = alg.coords_checked(&prod);
                let norm = gns.gamma_of(&coords).norm();
                if norm < 1e-8 {
                    continue;
                }
                let chi = u.character(0) * v.character(0);
                let moved = alg.expand(&(theta * &coords));
                assert!((moved - prod * chi).camax() < 1e-8);
            }
        }
    }

    #[test]
    fn compact_subalgebra_spans_everything_but_fixed_points_may_not() {
        // The Gibbs example: A^K = M₂ strictly larger than A^α = diagonal.
        let sys = gibbs_m2();
        let gns = sys.state().gns();
        let compact = compact_subalgebra(&sys, &gns).unwrap();
        assert_eq!(compact.algebra.dim(), 4);
        let (ok, _) = compact.algebra.span_equal(sys.algebra());
        assert!(ok);

        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(fixed.algebra.dim(), 2);

        // A^K is modular invariant.
        let (minv, r) = is_modular_invariant(sys.state(), &gns, &compact.algebra).unwrap();
        assert!(minv, "residual {r}");
    }

    #[test]
    fn identity_system_compact_equals_fixed_equals_all() {
        let alg = m2();
        let sys = WStarSystem::new(
            trace_state(alg.clone()),
            GroupAction::identity_action(GroupSpec::Integer, alg.dim()),
        )
        .unwrap();
        let gns = sys.state().gns();
        let compact = compact_subalgebra(&sys, &gns).unwrap();
        let fixed = fixed_point_algebra(&sys).unwrap();
        assert_eq!(compact.algebra.dim(), 4);
        assert_eq!(fixed.algebra.dim(), 4);
        let (ok, _) = compact.algebra.span_equal(&fixed.algebra);
        assert!(ok);
    }

    #[test]
    fn classify_gibbs_and_trivial() {
        let sys = gibbs_m2();
        let diag = MatrixAlgebra::generate(2, &[pauli('z')]).unwrap();
        let cls = classify(&sys, Some(&diag)).unwrap();
        assert!(!cls.ergodic);
        assert_eq!(cls.fixed_point_dim, 2);
        assert_eq!(cls.relatively_ergodic, Some(true));
        assert!(!cls.state_tracial);
        assert!(cls.compact);

        let scal = Arc::new(MatrixAlgebra::generate(2, &[]).unwrap());
        let triv = WStarSystem::new(
            trace_state(scal.clone()),
            GroupAction::identity_action(GroupSpec::Integer, 1),
        )
        .unwrap();
        let cls = classify(&triv, None).unwrap();
        assert!(cls.ergodic && cls.weakly_mixing && cls.identity && cls.trivial);
        assert!(cls.state_tracial);
    }

    #[test]
    fn action_superops_are_gns_unitary() {
        for sys in [weyl_m2(), gibbs_m2(), shift_diag4()] {
            let gns = sys.state().gns();
            let rep = unitary_rep(&sys, &gns);
            let checks = rep.verify(&sys, &gns);
            assert!(checks.max_residual() < 1e-9, "{checks:?}");
        }
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let alg = m2();
        let state = trace_state(alg.clone());
        // A non-automorphism superoperator (scaling).
        let bad = identity(4) * cr(2.0);
        let action = GroupAction::new(GroupSpec::Integer, vec![bad]).unwrap();
        assert!(matches!(
            WStarSystem::new(state.clone(), action),
            Err(WStarError::InvalidAction(_))
        ));

        // A state that the action fails to preserve: Gibbs state, Ad(X).
        let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0 / 3.0), cr(2.0 / 3.0)]));
        let gibbs = FaithfulState::new(alg.clone(), rho).unwrap();
        let gx = superop_from_unitary(&alg, &pauli('x')).unwrap();
        let action = GroupAction::new(GroupSpec::FiniteCyclic(2), vec![gx]).unwrap();
        assert!(matches!(
            WStarSystem::new(gibbs, action),
            Err(WStarError::InvalidAction(_))
        ));
    }

    #[test]
    fn non_abelian_group_rejected_for_eigen_ops() {
        // S₃ multiplication table; identity action so every map is valid.
        // Elements: 0=e, 1=(12), 2=(13), 3=(23), 4=(123), 5=(132).
        let table = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 0, 4, 5, 2, 3],
            vec![2, 5, 0, 4, 3, 1],
            vec![3, 4, 5, 0, 1, 2],
            vec![4, 3, 1, 2, 5, 0],
            vec![5, 2, 3, 1, 0, 4],
        ];
        let group = GroupSpec::FiniteGeneric { table };
        group.validate().unwrap();
        assert!(!group.is_abelian());
        let alg = m2();
        let sys = WStarSystem::new(
            trace_state(alg.clone()),
            GroupAction::identity_action(group, alg.dim()),
        )
        .unwrap();
        let gns = sys.state().gns();
        assert!(matches!(
            eigen_decomposition(&sys, &gns),
            Err(WStarError::NonAbelianGroup(_))
        ));
    }

    #[test]
    fn fixed_points_modular_invariant_and_span_gamma() {
        for sys in [weyl_m2(), gibbs_m2(), shift_diag4()] {
            let gns = sys.state().gns();
            let fixed = fixed_point_algebra(&sys).unwrap();
            let (ok, r) = is_modular_invariant(sys.state(), &gns, &fixed.algebra).unwrap();
            assert!(ok, "residual {r}");
            let rep = unitary_rep(&sys, &gns);
            let (ok, r) = fixed_space_check(&sys, &gns, &rep, &fixed);
            assert!(ok, "residual {r}");
        }
    }
}
