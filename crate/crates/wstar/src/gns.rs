//! Faithful states, the GNS construction, and Tomita-Takesaki modular data.
//!
//! For a faithful state μ on a matrix algebra with trace-orthonormal basis
//! {bᵢ}, the GNS space is realized as ℂ^d with γ(a) = G^{1/2}·coords(a),
//! where G is the Gram matrix Gᵢⱼ = μ(bᵢ†bⱼ). The closure S of aΩ ↦ a†Ω is
//! antilinear and is stored as a complex matrix together with the convention
//! "conjugate the input coordinates first"; the modular operator Δ = S*S, the
//! conjugation J, and the generator h = log Δ all come from Hermitian
//! eigendecompositions of that data.

use std::sync::Arc;

use crate::algebra::MatrixAlgebra;
use crate::error::{Result, WStarError};
use crate::linalg::{
    cr, eigh, hermitize, identity, inv_sqrt_pd, log_pd, mgs_columns, power_it, sqrt_psd,
    subspace_residual, CMatrix, CVector, RANK_CUTOFF,
};

/// Eigenvalue floor protecting log Δ.
pub const EIG_FLOOR: f64 = 1e-12;
/// Minimum Gram eigenvalue certifying faithfulness.
pub const FAITHFUL_MIN_EIG: f64 = 1e-10;
/// Residual threshold for modular invariance of a subalgebra.
pub const MODULAR_INVARIANCE_TOL: f64 = 1e-8;

/// A state ω(a) = Tr(ρ·a) that is faithful on its algebra.
#[derive(Debug, Clone)]
pub struct FaithfulState {
    algebra: Arc<MatrixAlgebra>,
    density: CMatrix,
    mu_vec: CVector,
    gram: CMatrix,
    gram_min_eig: f64,
}

impl FaithfulState {
    pub fn new(algebra: Arc<MatrixAlgebra>, density: CMatrix) -> Result<Self> {
        let n = algebra.ambient_dim();
        if density.shape() != (n, n) {
            return Err(WStarError::DimensionMismatch {
                context: "state density".into(),
                expected: n,
                got: density.nrows(),
            });
        }
        let ident = identity(n);
        let trace = (&density * &ident).trace();
        if (trace - cr(1.0)).norm() > 1e-12 {
            return Err(WStarError::NotNormalized {
                trace: trace.re,
                tol: 1e-12,
            });
        }
        let d = algebra.dim();
        let mu_vec = CVector::from_iterator(
            d,
            algebra.basis().iter().map(|b| (&density * b).trace()),
        );
        let mut gram = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let prod = algebra.basis()[i].adjoint() * &algebra.basis()[j];
                gram[(i, j)] = (&density * prod).trace();
            }
        }
        let gram = hermitize(&gram);
        let min = eigh(&gram).values[0];
        if min < FAITHFUL_MIN_EIG {
            return Err(WStarError::NotFaithful { min_eig: min });
        }
        Ok(Self {
            algebra,
            density,
            mu_vec,
            gram,
            gram_min_eig: min,
        })
    }

    pub fn algebra(&self) -> &Arc<MatrixAlgebra> {
        &self.algebra
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn gram_min_eig(&self) -> f64 {
        self.gram_min_eig
    }

    /// μ(a) for an ambient matrix.
    pub fn value(&self, a: &CMatrix) -> num_complex::Complex64 {
        (&self.density * a).trace()
    }

    /// μ(a) for a given in algebra coordinates.
    pub fn value_coords(&self, coords: &CVector) -> num_complex::Complex64 {
        self.mu_vec.dot(coords)
    }

    /// Row vector of μ over the basis.
    pub fn mu_vec(&self) -> &CVector {
        &self.mu_vec
    }

    /// max |μ(bᵢbⱼ) − μ(bⱼbᵢ)| over basis pairs.
    pub fn traciality_residual(&self) -> f64 {
        let basis = self.algebra.basis();
        let mut worst = 0.0f64;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let ab = self.value(&(&basis[i] * &basis[j]));
                let ba = self.value(&(&basis[j] * &basis[i]));
                worst = worst.max((ab - ba).norm());
            }
        }
        worst
    }

    pub fn is_tracial(&self, tol: f64) -> bool {
        self.traciality_residual() < tol
    }

    /// Runs the GNS construction for this state.
    pub fn gns(&self) -> GnsData {
        GnsData::new(self)
    }
}

/// Concrete GNS triple with Tomita-Takesaki modular objects.
///
/// Antilinear maps (S, J) are stored as a complex matrix applied to the
/// complex conjugate of the input vector.
#[derive(Debug, Clone)]
pub struct GnsData {
    dim_h: usize,
    /// Γ = G^{1/2}: algebra coordinates → GNS coordinates.
    gamma: CMatrix,
    gamma_inv: CMatrix,
    /// Ω = γ(1).
    omega: CVector,
    /// π(bᵢ) for every basis element.
    pi_mats: Vec<CMatrix>,
    /// S x = s_mat · conj(x).
    s_mat: CMatrix,
    /// Modular operator Δ = S*S.
    delta: CMatrix,
    /// J x = j_mat · conj(x).
    j_mat: CMatrix,
    /// h = log Δ.
    h_mod: CMatrix,
}

impl GnsData {
    pub fn new(state: &FaithfulState) -> Self {
        let alg = state.algebra();
        let d = alg.dim();
        let gram = state.gram();
        let gamma = sqrt_psd(gram);
        let gamma_inv = inv_sqrt_pd(gram);
        let omega = &gamma * alg.identity_coords();
        let pi_mats: Vec<CMatrix> = alg
            .basis()
            .iter()
            .map(|b| &gamma * alg.mult_superop(b) * &gamma_inv)
            .collect();
        // S: γ(a) ↦ γ(a†). With K the adjoint matrix on coordinates,
        // S x = Γ K conj(Γ⁻¹) conj(x).
        let s_mat = &gamma * alg.adjoint_mat() * gamma_inv.map(|z| z.conj());
        // Δ = S*S; for antilinear S x = A conj(x) the adjoint is S* y = Aᵀ conj(y),
        // so Δ = Aᵀ conj(A).
        let delta = hermitize(&(s_mat.transpose() * s_mat.map(|z| z.conj())));
        // In the polar decomposition S = J Δ^{1/2}, J is the polar unitary
        // factor of the matrix of S: with S = UΣVᴴ one has AᴴA = conj(Δ) and
        // J = UVᴴ, which stays exactly unitary even when Δ is
        // ill-conditioned near the faithfulness floor.
        let svd = s_mat.clone().svd(true, true);
        let j_mat = svd.u.as_ref().expect("svd u") * svd.v_t.as_ref().expect("svd v_t");
        let h_mod = log_pd(&delta, EIG_FLOOR);
        Self {
            dim_h: d,
            gamma,
            gamma_inv,
            omega,
            pi_mats,
            s_mat,
            delta,
            j_mat,
            h_mod,
        }
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn omega(&self) -> &CVector {
        &self.omega
    }

    pub fn gamma_mat(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn gamma_inv_mat(&self) -> &CMatrix {
        &self.gamma_inv
    }

    pub fn delta(&self) -> &CMatrix {
        &self.delta
    }

    pub fn j_mat(&self) -> &CMatrix {
        &self.j_mat
    }

    pub fn s_mat(&self) -> &CMatrix {
        &self.s_mat
    }

    pub fn h_mod(&self) -> &CMatrix {
        &self.h_mod
    }

    /// γ(a) from algebra coordinates.
    pub fn gamma_of(&self, coords: &CVector) -> CVector {
        &self.gamma * coords
    }

    /// Algebra coordinates from a GNS vector.
    pub fn coords_of(&self, x: &CVector) -> CVector {
        &self.gamma_inv * x
    }

    /// π(a) from algebra coordinates.
    pub fn pi(&self, coords: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_h, self.dim_h);
        for (i, p) in self.pi_mats.iter().enumerate() {
            out += p * coords[i];
        }
        out
    }

    /// π(bᵢ) for the i-th basis element.
    pub fn pi_basis(&self, i: usize) -> &CMatrix {
        &self.pi_mats[i]
    }

    pub fn apply_s(&self, x: &CVector) -> CVector {
        &self.s_mat * x.map(|z| z.conj())
    }

    pub fn apply_j(&self, x: &CVector) -> CVector {
        &self.j_mat * x.map(|z| z.conj())
    }

    /// j(m) = J m† J, a linear anti-isomorphism onto the commutant;
    /// as matrices j(m) = j_mat · mᵀ · conj(j_mat).
    pub fn j_conjugate_op(&self, m: &CMatrix) -> CMatrix {
        &self.j_mat * m.transpose() * self.j_mat.map(|z| z.conj())
    }

    /// Δ^{it} on the GNS space.
    pub fn delta_power_it(&self, t: f64) -> CMatrix {
        power_it(&self.delta, t, EIG_FLOOR)
    }

    /// Superoperator of σ_t on algebra coordinates: Γ⁻¹ Δ^{it} Γ.
    pub fn modular_flow_superop(&self, t: f64) -> CMatrix {
        &self.gamma_inv * self.delta_power_it(t) * &self.gamma
    }

    /// Generator of the modular flow on algebra coordinates: Γ⁻¹ h Γ.
    /// A subspace of coordinates is σ-invariant for all t iff it is
    /// invariant under this one matrix.
    pub fn modular_generator_superop(&self) -> CMatrix {
        &self.gamma_inv * &self.h_mod * &self.gamma
    }

    /// Residuals for all GnsData invariants against the defining state.
    pub fn verify(&self, state: &FaithfulState) -> GnsChecks {
        let alg = state.algebra();
        let d = self.dim_h;

        let gram_residual = (self.gamma.adjoint() * &self.gamma - state.gram()).camax();

        let mut hom_residual = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let prod = self.pi(&alg.prod_coords(i, j));
                hom_residual = hom_residual.max((self.pi_basis(i) * self.pi_basis(j) - prod).camax());
            }
        }
        let mut star_residual = 0.0f64;
        for i in 0..d {
            let mut e = CVector::zeros(d);
            e[i] = cr(1.0);
            let adj = self.pi(&alg.adjoint_coords(&e));
            star_residual = star_residual.max((self.pi_basis(i).adjoint() - adj).camax());
        }
        let unital_residual = (self.pi(alg.identity_coords()) - identity(d)).camax();

        // Cyclicity: {π(bᵢ)Ω} spans iff Γ has full rank; report its smallest
        // singular value (= sqrt of the Gram floor).
        let cyclic_min_sv = eigh(state.gram()).values[0].max(0.0).sqrt();

        let polar_residual =
            (&self.s_mat - &self.j_mat * sqrt_psd(&self.delta).map(|z| z.conj())).camax();

        let j_squared_residual = (&self.j_mat * self.j_mat.map(|z| z.conj()) - identity(d)).camax();

        // JΔJ = Δ⁻¹, reported relative to ‖Δ⁻¹‖ so that conditioning near
        // the faithfulness floor does not pollute the scale.
        let jdj = &self.j_mat * self.delta.map(|z| z.conj()) * self.j_mat.map(|z| z.conj());
        let delta_inv = crate::linalg::hermitian_fn(&self.delta, |x| cr(1.0 / x.max(EIG_FLOOR)));
        let jdj_residual = (jdj - &delta_inv).camax() / delta_inv.camax().max(1.0);

        let mut tomita_residual = 0.0f64;
        for i in 0..d {
            let jpij = self.j_conjugate_op(self.pi_basis(i));
            for j in 0..d {
                let comm = &jpij * self.pi_basis(j) - self.pi_basis(j) * &jpij;
                tomita_residual = tomita_residual.max(comm.camax());
            }
        }

        let omega_fixed_residual = (self.apply_j(&self.omega) - &self.omega)
            .norm()
            .max((&self.delta * &self.omega - &self.omega).norm());

        GnsChecks {
            gram_residual,
            hom_residual,
            star_residual,
            unital_residual,
            cyclic_min_sv,
            polar_residual,
            j_squared_residual,
            jdj_residual,
            tomita_residual,
            omega_fixed_residual,
        }
    }
}

/// Residuals of the GNS invariants; see [`GnsData::verify`].
#[derive(Debug, Clone, Copy)]
pub struct GnsChecks {
    /// ⟨γ(a),γ(b)⟩ vs μ(a†b) on basis pairs.
    pub gram_residual: f64,
    /// π(ab) vs π(a)π(b).
    pub hom_residual: f64,
    /// π(a†) vs π(a)†.
    pub star_residual: f64,
    /// π(1) vs identity.
    pub unital_residual: f64,
    /// Smallest singular value of Γ (cyclicity margin).
    pub cyclic_min_sv: f64,
    /// S vs JΔ^{1/2}.
    pub polar_residual: f64,
    /// J² vs identity (as antilinear maps).
    pub j_squared_residual: f64,
    /// JΔJ vs Δ⁻¹.
    pub jdj_residual: f64,
    /// Commutation of Jπ(A)J with π(A).
    pub tomita_residual: f64,
    /// JΩ = Ω and ΔΩ = Ω.
    pub omega_fixed_residual: f64,
}

impl GnsChecks {
    pub fn max_residual(&self) -> f64 {
        self.gram_residual
            .max(self.hom_residual)
            .max(self.star_residual)
            .max(self.unital_residual)
            .max(self.polar_residual)
            .max(self.j_squared_residual)
            .max(self.jdj_residual)
            .max(self.tomita_residual)
            .max(self.omega_fixed_residual)
    }
}

/// Whether `sub` is invariant under the modular group of `state`, decided
/// through the generator (exact at finite dimension). Returns the residual
/// of the generator's action against the subalgebra span.
pub fn is_modular_invariant(
    state: &FaithfulState,
    gns: &GnsData,
    sub: &MatrixAlgebra,
) -> Result<(bool, f64)> {
    let z = state.algebra().subalgebra_coords(sub)?;
    let gen = gns.modular_generator_superop();
    let mut worst = 0.0f64;
    for j in 0..z.ncols() {
        let col = CVector::from_column_slice(z.column(j).as_slice());
        let image = &gen * &col;
        worst = worst.max(subspace_residual(&z, &image));
    }
    Ok((worst < MODULAR_INVARIANCE_TOL, worst))
}

/// Checks J H_F = H_F for H_F = span γ(sub). Guaranteed whenever `sub` is
/// modular-invariant.
pub fn modular_conjugation_subspace_check(
    state: &FaithfulState,
    gns: &GnsData,
    sub: &MatrixAlgebra,
) -> Result<(bool, f64)> {
    let z = state.algebra().subalgebra_coords(sub)?;
    let cols: Vec<CVector> = (0..z.ncols())
        .map(|j| gns.gamma_of(&CVector::from_column_slice(z.column(j).as_slice())))
        .collect();
    let q = mgs_columns(&cols, RANK_CUTOFF);
    let mut worst = 0.0f64;
    for v in &cols {
        let jv = gns.apply_j(v);
        worst = worst.max(subspace_residual(&q, &jv));
    }
    Ok((worst < 1e-9, worst))
}

/// The state-preserving conditional expectation onto a modular-invariant
/// subalgebra: the ⟨·,·⟩_μ-orthogonal projection of the algebra onto the
/// subalgebra in GNS coordinates (Takesaki).
#[derive(Debug, Clone)]
pub struct ConditionalExpectation {
    /// Map on host algebra coordinates.
    map: CMatrix,
    /// Host coordinates of the target's basis (d_host × d_sub, orthonormal columns).
    sub_coords: CMatrix,
    target: MatrixAlgebra,
}

impl ConditionalExpectation {
    pub fn map(&self) -> &CMatrix {
        &self.map
    }

    pub fn sub_coords(&self) -> &CMatrix {
        &self.sub_coords
    }

    pub fn target(&self) -> &MatrixAlgebra {
        &self.target
    }

    /// D(a) in host coordinates.
    pub fn apply(&self, coords: &CVector) -> CVector {
        &self.map * coords
    }

    /// D(a) expressed in the target algebra's own coordinates.
    pub fn apply_to_sub_coords(&self, coords: &CVector) -> CVector {
        self.sub_coords.adjoint() * (&self.map * coords)
    }
}

/// Builds the conditional expectation of `state.algebra()` onto `sub`,
/// failing with the Takesaki obstruction when `sub` is not modular-invariant.
pub fn conditional_expectation(
    state: &FaithfulState,
    gns: &GnsData,
    sub: &MatrixAlgebra,
) -> Result<ConditionalExpectation> {
    let (invariant, residual) = is_modular_invariant(state, gns, sub)?;
    if !invariant {
        return Err(WStarError::NotModularInvariant { residual });
    }
    let z = state.algebra().subalgebra_coords(sub)?;
    let cols: Vec<CVector> = (0..z.ncols())
        .map(|j| gns.gamma_of(&CVector::from_column_slice(z.column(j).as_slice())))
        .collect();
    let q = mgs_columns(&cols, RANK_CUTOFF);
    let proj = &q * q.adjoint();
    let map = gns.gamma_inv_mat() * proj * gns.gamma_mat();
    Ok(ConditionalExpectation {
        map,
        sub_coords: z,
        target: sub.clone(),
    })
}
