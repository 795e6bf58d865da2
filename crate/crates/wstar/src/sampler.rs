//! Seeded random systems, random triples with a common modular subsystem,
//! and classical fixtures. Everything is deterministic for a fixed seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::MatrixAlgebra;
use crate::dynamics::{superop_from_unitary, GroupAction, GroupSpec, WStarSystem};
use crate::error::{Result, WStarError};
use crate::gns::FaithfulState;
use crate::joinings::SubsystemEmbedding;
use crate::linalg::{c, cr, identity, kron, CMatrix, CVector};

/// Families of random systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// A mixed bag: conjugation actions, permutations, Weyl systems, modular
    /// flows, and small tensor products.
    Generic,
    /// Known-ergodic families: conjugated Weyl systems and transitive
    /// permutations on diagonal algebras.
    Ergodic,
    /// Commutative systems: diagonal algebras, permutation dynamics, random
    /// invariant measures.
    Classical,
    /// Dynamics given by the modular flow of a random faithful state.
    GibbsLike,
    /// Identity dynamics on a random algebra.
    Identity,
}

impl std::str::FromStr for Profile {
    type Err = WStarError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Profile::Generic),
            "ergodic" => Ok(Profile::Ergodic),
            "classical" => Ok(Profile::Classical),
            "gibbs-like" | "gibbs_like" => Ok(Profile::GibbsLike),
            "identity" => Ok(Profile::Identity),
            other => Err(WStarError::Parse(format!("unknown profile {other:?}"))),
        }
    }
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        )
    })
}

/// ρ = WW†/Tr(WW†) with Gaussian W.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let w = gaussian_matrix(rng, n, n);
    let mut rho = &w * w.adjoint();
    let tr = rho.trace().re;
    rho /= cr(tr);
    rho
}

/// A random state that is faithful on the algebra with margin: the Gram
/// minimum eigenvalue must clear 1e-6, re-sampling otherwise.
pub fn random_faithful_state(rng: &mut ChaCha8Rng, alg: &Arc<MatrixAlgebra>) -> FaithfulState {
    loop {
        let rho = random_density(rng, alg.ambient_dim());
        if let Ok(state) = FaithfulState::new(alg.clone(), rho) {
            if state.gram_min_eig() > 1e-6 {
                return state;
            }
        }
    }
}

/// Haar-ish random unitary via QR of a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    qr.q()
}

fn diag_units(n: usize) -> Vec<CMatrix> {
    (0..n)
        .map(|i| {
            let mut m = CMatrix::zeros(n, n);
            m[(i, i)] = cr(1.0);
            m
        })
        .collect()
}

/// Full diagonal algebra in M_n.
pub fn diagonal_algebra(n: usize) -> Arc<MatrixAlgebra> {
    Arc::new(MatrixAlgebra::generate(n, &diag_units(n)).expect("diagonal algebra"))
}

/// Full matrix algebra M_n.
pub fn full_algebra(n: usize) -> Arc<MatrixAlgebra> {
    // Shift and clock generate M_n.
    let gens = vec![shift_unitary(n), clock_unitary(n)];
    Arc::new(MatrixAlgebra::generate(n, &gens).expect("full algebra"))
}

/// The cyclic shift unitary e_i ↦ e_{i+1 mod n}.
pub fn shift_unitary(n: usize) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for i in 0..n {
        p[((i + 1) % n, i)] = cr(1.0);
    }
    p
}

/// The clock unitary diag(1, ω, ..., ω^{n−1}).
pub fn clock_unitary(n: usize) -> CMatrix {
    let omega = 2.0 * std::f64::consts::PI / n as f64;
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(0.0, omega * i as f64).exp()
        } else {
            cr(0.0)
        }
    })
}

/// The tracial state on an algebra.
pub fn trace_state(alg: Arc<MatrixAlgebra>) -> FaithfulState {
    let n = alg.ambient_dim();
    FaithfulState::new(alg, identity(n) / cr(n as f64)).expect("trace state")
}

/// The Gibbs fixture on M₂: ρ ∝ diag(1, 2) (h = diag(0, ln 2)), with the
/// dynamics given by its own modular flow sampled at t = 1 as a ℤ-action.
pub fn gibbs_m2() -> WStarSystem {
    let alg = full_algebra(2);
    let rho = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0 / 3.0), cr(2.0 / 3.0)]));
    let state = FaithfulState::new(alg, rho).expect("gibbs state");
    let gns = state.gns();
    let theta = gns.modular_flow_superop(1.0);
    let action = GroupAction::new(GroupSpec::Integer, vec![theta]).expect("gibbs action");
    WStarSystem::new(state, action).expect("gibbs system")
}

/// The Weyl system: ℤ_k×ℤ_k acting on M_k by Ad(clock), Ad(shift) with the
/// tracial state, optionally conjugated by a unitary.
pub fn weyl_system(k: usize, conjugate_by: Option<&CMatrix>) -> WStarSystem {
    let (clock, shift) = match conjugate_by {
        None => (clock_unitary(k), shift_unitary(k)),
        Some(u) => (
            u * clock_unitary(k) * u.adjoint(),
            u * shift_unitary(k) * u.adjoint(),
        ),
    };
    let alg = Arc::new(MatrixAlgebra::generate(k, &[clock.clone(), shift.clone()]).unwrap());
    let state = trace_state(alg.clone());
    let g1 = superop_from_unitary(&alg, &clock).unwrap();
    let g2 = superop_from_unitary(&alg, &shift).unwrap();
    let action = GroupAction::new(GroupSpec::FiniteProduct(vec![k, k]), vec![g1, g2]).unwrap();
    WStarSystem::new(state, action).unwrap()
}

/// Permutation superoperator on the diagonal algebra of M_n.
fn permutation_matrix(perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let mut p = CMatrix::zeros(n, n);
    for (i, &pi) in perm.iter().enumerate() {
        p[(pi, i)] = cr(1.0);
    }
    p
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

fn random_cycle(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    // A transitive permutation: conjugate the standard n-cycle.
    let relabel = random_permutation(rng, n);
    let mut perm = vec![0usize; n];
    for i in 0..n {
        let pos = relabel.iter().position(|&x| x == i).unwrap();
        perm[i] = relabel[(pos + 1) % n];
    }
    perm
}

fn orbits_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            orbit.push(cur);
            cur = perm[cur];
        }
        orbits.push(orbit);
    }
    orbits
}

/// A random permutation-invariant faithful measure: constant on orbits.
fn orbit_invariant_measure(rng: &mut ChaCha8Rng, perm: &[usize]) -> Vec<f64> {
    let orbits = orbits_of(perm);
    let mut weights = vec![0.0; perm.len()];
    let mut total = 0.0;
    let mut per_orbit = Vec::new();
    for orbit in &orbits {
        let w: f64 = 0.2 + rng.random::<f64>();
        per_orbit.push(w);
        total += w * orbit.len() as f64;
    }
    for (orbit, w) in orbits.iter().zip(per_orbit) {
        for &x in orbit {
            weights[x] = w / total;
        }
    }
    weights
}

fn diag_state(alg: Arc<MatrixAlgebra>, weights: &[f64]) -> FaithfulState {
    let rho = CMatrix::from_diagonal(&CVector::from_iterator(
        weights.len(),
        weights.iter().map(|&x| cr(x)),
    ));
    FaithfulState::new(alg, rho).expect("diagonal state")
}

/// A classical system: the diagonal algebra of M_n with a permutation
/// ℤ-action and an invariant faithful measure.
pub fn classical_system(perm: &[usize], weights: &[f64]) -> WStarSystem {
    let n = perm.len();
    let alg = diagonal_algebra(n);
    let state = diag_state(alg.clone(), weights);
    let theta = superop_from_unitary(&alg, &permutation_matrix(perm)).unwrap();
    let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
    WStarSystem::new(state, action).unwrap()
}

/// Ad(u) for a unitary u that commutes with the state's density matrix:
/// u = V·diag(phases)·V† in the eigenbasis of ρ.
fn density_commuting_unitary(rng: &mut ChaCha8Rng, rho: &CMatrix) -> CMatrix {
    let e = crate::linalg::eigh(rho);
    let phases = CMatrix::from_fn(rho.nrows(), rho.nrows(), |i, j| {
        if i == j {
            c(0.0, rng.random::<f64>() * std::f64::consts::TAU).exp()
        } else {
            cr(0.0)
        }
    });
    &e.vectors * phases * e.vectors.adjoint()
}

/// Deterministic random system per (seed, profile).
pub fn random_system(seed: u64, profile: Profile) -> WStarSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    match profile {
        Profile::Identity => {
            let alg = random_small_algebra(&mut rng);
            let state = random_faithful_state(&mut rng, &alg);
            let action = GroupAction::identity_action(GroupSpec::Integer, alg.dim());
            WStarSystem::new(state, action).unwrap()
        }
        Profile::Ergodic => {
            if rng.random::<bool>() {
                let k = rng.random_range(2..=3usize);
                let u = random_unitary(&mut rng, k);
                weyl_system(k, Some(&u))
            } else {
                let m = rng.random_range(2..=5usize);
                let perm = random_cycle(&mut rng, m);
                let weights = vec![1.0 / m as f64; m];
                classical_system(&perm, &weights)
            }
        }
        Profile::Classical => {
            let m = rng.random_range(2..=5usize);
            let perm = random_permutation(&mut rng, m);
            let weights = orbit_invariant_measure(&mut rng, &perm);
            classical_system(&perm, &weights)
        }
        Profile::GibbsLike => {
            let k = rng.random_range(2..=3usize);
            let alg = full_algebra(k);
            let state = random_faithful_state(&mut rng, &alg);
            let gns = state.gns();
            let theta = gns.modular_flow_superop(1.0);
            let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
            WStarSystem::new(state, action).unwrap()
        }
        Profile::Generic => match rng.random_range(0..5u8) {
            0 => random_system(rng.random(), Profile::Identity),
            1 => random_system(rng.random(), Profile::Ergodic),
            2 => random_system(rng.random(), Profile::Classical),
            3 => random_system(rng.random(), Profile::GibbsLike),
            _ => {
                // Ad(u) with u commuting with a random state on M_k.
                let k = rng.random_range(2..=3usize);
                let alg = full_algebra(k);
                let state = random_faithful_state(&mut rng, &alg);
                let u = density_commuting_unitary(&mut rng, state.density());
                let theta = superop_from_unitary(&alg, &u).unwrap();
                let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
                WStarSystem::new(state, action).unwrap()
            }
        },
    }
}

fn random_small_algebra(rng: &mut ChaCha8Rng) -> Arc<MatrixAlgebra> {
    match rng.random_range(0..3u8) {
        0 => diagonal_algebra(rng.random_range(2..=4usize)),
        1 => full_algebra(2),
        _ => Arc::new(MatrixAlgebra::generate(2, &[]).unwrap()),
    }
}

/// A triple (A, B, F) with F a common modular subsystem, returned through
/// the two embeddings. Built as tensor extensions A = F ⊗ E with product
/// states and product dynamics, so modularity of ζ(F) = F⊗1 holds by
/// construction and is still verified numerically.
#[derive(Debug)]
pub struct TripleFixture {
    pub emb_a: SubsystemEmbedding,
    pub emb_b: SubsystemEmbedding,
}

/// One of the factor dynamics used in random triples: trivial, a
/// density-commuting conjugation, or the modular flow at a random time.
fn random_factor_action(
    rng: &mut ChaCha8Rng,
    alg: &Arc<MatrixAlgebra>,
    state: &FaithfulState,
) -> CMatrix {
    match rng.random_range(0..3u8) {
        0 => identity(alg.dim()),
        1 => {
            let u = density_commuting_unitary(rng, state.density());
            superop_from_unitary(alg, &u).unwrap()
        }
        _ => {
            let t = rng.random::<f64>() * 2.0 - 1.0;
            state.gns().modular_flow_superop(t)
        }
    }
}

fn random_f_part(rng: &mut ChaCha8Rng) -> (WStarSystem, bool) {
    match rng.random_range(0..3u8) {
        0 => {
            // Trivial F = ℂ.
            let alg = Arc::new(MatrixAlgebra::generate(1, &[]).unwrap());
            let state = FaithfulState::new(alg.clone(), identity(1)).unwrap();
            let action = GroupAction::identity_action(GroupSpec::Integer, 1);
            (WStarSystem::new(state, action).unwrap(), true)
        }
        1 => {
            let alg = diagonal_algebra(2);
            let state = random_diag_faithful(rng, 2, alg.clone());
            let action = GroupAction::identity_action(GroupSpec::Integer, alg.dim());
            (WStarSystem::new(state, action).unwrap(), false)
        }
        _ => {
            let alg = full_algebra(2);
            let state = random_faithful_state(rng, &alg);
            let theta = random_factor_action(rng, &alg, &state);
            let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
            (WStarSystem::new(state, action).unwrap(), false)
        }
    }
}

fn random_diag_faithful(rng: &mut ChaCha8Rng, n: usize, alg: Arc<MatrixAlgebra>) -> FaithfulState {
    let mut w: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    diag_state(alg, &w)
}

/// Extends F to host = F ⊗ E (or host = F when `extend` is false) and
/// returns the embedding ζ(f) = f ⊗ 1.
fn extend_system(
    rng: &mut ChaCha8Rng,
    f_sys: &WStarSystem,
    extend: bool,
) -> Result<SubsystemEmbedding> {
    if !extend {
        return SubsystemEmbedding::inclusion(f_sys.clone(), f_sys.clone());
    }
    // Keep product dimensions at desk scale: a full M₂ factor only extends
    // subsystems of dimension ≤ 2.
    let allow_full = f_sys.algebra().dim() <= 2;
    let (e_alg, e_state) = if allow_full && rng.random::<bool>() {
        let alg = full_algebra(2);
        let state = random_faithful_state(rng, &alg);
        (alg, state)
    } else {
        let alg = diagonal_algebra(2);
        let state = random_diag_faithful(rng, 2, alg.clone());
        (alg, state)
    };
    let e_theta = random_factor_action(rng, &e_alg, &e_state);

    let host_alg = Arc::new(f_sys.algebra().tensor(&e_alg));
    let host_density = kron(f_sys.state().density(), e_state.density());
    let host_state = FaithfulState::new(host_alg.clone(), host_density)?;
    let f_theta = &f_sys.action().generators()[0];
    let host_theta = kron(f_theta, &e_theta);
    let host_action = GroupAction::new(GroupSpec::Integer, vec![host_theta])?;
    let host = WStarSystem::new(host_state, host_action)?;

    // ζ(f) = f ⊗ 1 on coordinates: the tensor basis is ordered f_i ⊗ e_j.
    let df = f_sys.algebra().dim();
    let de = e_alg.dim();
    let id_e = e_alg.identity_coords();
    let mut zmap = CMatrix::zeros(df * de, df);
    for i in 0..df {
        for j in 0..de {
            zmap[(i * de + j, i)] = id_e[j];
        }
    }
    SubsystemEmbedding::new(f_sys.clone(), host, zmap)
}

/// A random system whose group is ℤ with a single generator, so that any
/// two draws act through the same group (needed to pair systems in a
/// joining). Covers identity, classical, gibbs-like, and conjugation
/// dynamics.
pub fn random_z_system(seed: u64) -> WStarSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xd6e8feb86659fd93).wrapping_add(5));
    match rng.random_range(0..4u8) {
        0 => random_system(rng.random(), Profile::Identity),
        1 => random_system(rng.random(), Profile::Classical),
        2 => random_system(rng.random(), Profile::GibbsLike),
        _ => {
            let k = rng.random_range(2..=3usize);
            let alg = full_algebra(k);
            let state = random_faithful_state(&mut rng, &alg);
            let u = density_commuting_unitary(&mut rng, state.density());
            let theta = superop_from_unitary(&alg, &u).unwrap();
            let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
            WStarSystem::new(state, action).unwrap()
        }
    }
}

/// The trivial subsystem F = ℂ embedded in a host system.
pub fn trivial_embedding(host: &WStarSystem) -> SubsystemEmbedding {
    let scal = Arc::new(MatrixAlgebra::generate(1, &[]).expect("scalars"));
    let state = FaithfulState::new(scal, identity(1)).expect("trivial state");
    let group = host.action().group().clone();
    let f = WStarSystem::new(state, GroupAction::identity_action(group, 1))
        .expect("trivial system");
    SubsystemEmbedding::new(
        f,
        host.clone(),
        CMatrix::from_column_slice(
            host.algebra().dim(),
            1,
            host.algebra().identity_coords().as_slice(),
        ),
    )
    .expect("trivial embedding")
}

/// Deterministic random (A, B, F) triple with a common modular subsystem.
pub fn random_modular_triple(seed: u64) -> TripleFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x517cc1b727220a95).wrapping_add(3));
    let (f_sys, f_trivial) = random_f_part(&mut rng);
    // Extend at least one side when F is trivial so the pair is not empty.
    let extend_a = rng.random::<bool>() || f_trivial;
    let extend_b = rng.random::<bool>() || f_trivial;
    let emb_a = extend_system(&mut rng, &f_sys, extend_a).expect("A-side extension");
    let emb_b = extend_system(&mut rng, &f_sys, extend_b).expect("B-side extension");
    TripleFixture { emb_a, emb_b }
}

/// A classical pair of systems over a common classical factor, with the raw
/// measure-theoretic data kept for oracle comparisons.
#[derive(Debug)]
pub struct ClassicalFixture {
    pub emb_a: SubsystemEmbedding,
    pub emb_b: SubsystemEmbedding,
    /// Factor label of each point of X.
    pub fiber_a: Vec<usize>,
    /// Factor label of each point of Y.
    pub fiber_b: Vec<usize>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
}

/// Builds a random classical fixture: a base permutation on Z with an
/// invariant measure r, and fiber extensions X → Z, Y → Z with invariant
/// lifts. The permutations act within transported fiber labels.
pub fn random_classical_fixture(seed: u64) -> ClassicalFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(7));
    let z_count = rng.random_range(1..=3usize);
    let perm_z = random_permutation(&mut rng, z_count);
    let r = orbit_invariant_measure(&mut rng, &perm_z);

    let build_side = |rng: &mut ChaCha8Rng| -> (Vec<usize>, Vec<f64>, Vec<usize>) {
        let orbits = orbits_of(&perm_z);
        // Fiber sizes constant per orbit; conditional measures transported.
        let mut fiber_size = vec![0usize; z_count];
        let mut conditional: Vec<Vec<f64>> = vec![Vec::new(); z_count];
        for orbit in &orbits {
            let size = rng.random_range(1..=2usize);
            let mut cond: Vec<f64> = (0..size).map(|_| 0.2 + rng.random::<f64>()).collect();
            let total: f64 = cond.iter().sum();
            for x in &mut cond {
                *x /= total;
            }
            for &z in orbit {
                fiber_size[z] = size;
                conditional[z] = cond.clone();
            }
        }
        // Points (z, i) enumerated z-major.
        let mut offset = vec![0usize; z_count];
        let mut total_points = 0;
        for z in 0..z_count {
            offset[z] = total_points;
            total_points += fiber_size[z];
        }
        let mut fiber = vec![0usize; total_points];
        let mut measure = vec![0.0; total_points];
        for z in 0..z_count {
            for i in 0..fiber_size[z] {
                fiber[offset[z] + i] = z;
                measure[offset[z] + i] = r[z] * conditional[z][i];
            }
        }
        // Lifted permutation: (z, i) ↦ (perm_z(z), i).
        let mut perm = vec![0usize; total_points];
        for z in 0..z_count {
            for i in 0..fiber_size[z] {
                perm[offset[z] + i] = offset[perm_z[z]] + i;
            }
        }
        (fiber, measure, perm)
    };

    let (fiber_a, p, perm_a) = build_side(&mut rng);
    let (fiber_b, q, perm_b) = build_side(&mut rng);

    let a_sys = classical_system(&perm_a, &p);
    let b_sys = classical_system(&perm_b, &q);
    let f_sys = classical_system(&perm_z, &r);

    let make_embedding = |host: &WStarSystem, fiber: &[usize]| -> SubsystemEmbedding {
        let n = fiber.len();
        let falg = f_sys.algebra();
        let halg = host.algebra();
        let mut zmap = CMatrix::zeros(halg.dim(), falg.dim());
        for (jcol, fb) in falg.basis().iter().enumerate() {
            // ζ of a diagonal matrix lifts each z-entry to its fiber.
            let mut lifted = CMatrix::zeros(n, n);
            for (x, &z) in fiber.iter().enumerate() {
                lifted[(x, x)] = fb[(z, z)];
            }
            zmap.set_column(jcol, &halg.coords(&lifted));
        }
        SubsystemEmbedding::new(f_sys.clone(), host.clone(), zmap).expect("classical embedding")
    };

    let emb_a = make_embedding(&a_sys, &fiber_a);
    let emb_b = make_embedding(&b_sys, &fiber_b);

    ClassicalFixture {
        emb_a,
        emb_b,
        fiber_a,
        fiber_b,
        p,
        q,
        r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::classify;

    #[test]
    fn random_systems_are_deterministic() {
        for profile in [
            Profile::Generic,
            Profile::Ergodic,
            Profile::Classical,
            Profile::GibbsLike,
            Profile::Identity,
        ] {
            let a = random_system(7, profile);
            let b = random_system(7, profile);
            assert_eq!(a.algebra().dim(), b.algebra().dim());
            assert!((a.state().density() - b.state().density()).camax() < 1e-15);
            for (x, y) in a
                .action()
                .generators()
                .iter()
                .zip(b.action().generators())
            {
                assert!((x - y).camax() < 1e-15);
            }
        }
    }

    #[test]
    fn ergodic_profile_is_ergodic() {
        for seed in 0..10 {
            let sys = random_system(seed, Profile::Ergodic);
            let cls = classify(&sys, None).unwrap();
            assert!(cls.ergodic, "seed {seed} not ergodic");
        }
    }

    #[test]
    fn identity_profile_is_identity() {
        for seed in 0..5 {
            let sys = random_system(seed, Profile::Identity);
            assert!(sys.action().is_identity());
        }
    }

    #[test]
    fn triples_have_common_modular_subsystem() {
        for seed in 0..10 {
            let t = random_modular_triple(seed);
            assert!(t.emb_a.is_modular(), "seed {seed}");
            assert!(t.emb_b.is_modular(), "seed {seed}");
            let (same, resid) = t
                .emb_a
                .sub()
                .algebra()
                .span_equal(t.emb_b.sub().algebra());
            assert!(same, "seed {seed}: {resid}");
        }
    }

    #[test]
    fn classical_fixture_measures_are_consistent() {
        for seed in 0..10 {
            let f = random_classical_fixture(seed);
            let p_total: f64 = f.p.iter().sum();
            let q_total: f64 = f.q.iter().sum();
            assert!((p_total - 1.0).abs() < 1e-12);
            assert!((q_total - 1.0).abs() < 1e-12);
            // Pushforward of p along the fiber map equals r.
            for z in 0..f.r.len() {
                let push: f64 = f
                    .p
                    .iter()
                    .zip(&f.fiber_a)
                    .filter(|(_, &fz)| fz == z)
                    .map(|(x, _)| x)
                    .sum();
                assert!((push - f.r[z]).abs() < 1e-12, "seed {seed}, z {z}");
            }
        }
    }

    #[test]
    fn gibbs_fixture_matches_structure() {
        let sys = gibbs_m2();
        let cls = classify(&sys, None).unwrap();
        assert!(!cls.ergodic);
        assert_eq!(cls.fixed_point_dim, 2);
        assert!(!cls.state_tracial);
    }

    #[test]
    fn weyl_fixture_is_conjugation_invariant_ergodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let u = random_unitary(&mut rng, 3);
        let sys = weyl_system(3, Some(&u));
        assert_eq!(sys.algebra().dim(), 9);
        let cls = classify(&sys, None).unwrap();
        assert!(cls.ergodic);
        assert!(cls.state_tracial);
    }
}
