//! Commutant systems, subsystem embeddings, and relatively independent
//! joinings over a common modular subsystem.
//!
//! Joinings of A and B are formed against the commutant B̃ = π_ν(B)′, which
//! carries the state ν̃(b) = ⟨Ω_ν, bΩ_ν⟩ and dynamics β̃_g(b) = V_g b V_g†.
//! The joining functional lives on the product basis of A ⊗ B̃ and its
//! positivity is certified by a Gram matrix.

use std::sync::Arc;

use crate::algebra::MatrixAlgebra;
use crate::dynamics::{superop_from_unitary, unitary_rep, GroupAction, UnitaryRep, WStarSystem};
use crate::error::{Result, WStarError};
use crate::gns::{conditional_expectation, is_modular_invariant, FaithfulState, GnsData};
use crate::linalg::{
    cr, eigh, hermitize, identity, mgs_columns, mutual_containment, solve_lsq, CMatrix, CVector,
    RANK_CUTOFF,
};

/// Null-space cutoff for the GNS construction of a (generally non-faithful)
/// joining functional.
pub const OMEGA_NULL_CUTOFF: f64 = 1e-10;

/// An injective unital *-homomorphism ζ: F → A compatible with states and
/// dynamics: F realized as a subsystem of A.
#[derive(Debug, Clone)]
pub struct SubsystemEmbedding {
    sub: WStarSystem,
    host: WStarSystem,
    /// d_host × d_sub matrix on basis coordinates.
    map: CMatrix,
    /// ζ(F) as an algebra in the host's ambient matrices.
    image: Arc<MatrixAlgebra>,
    modular: bool,
    modular_residual: f64,
}

impl SubsystemEmbedding {
    pub fn new(sub: WStarSystem, host: WStarSystem, map: CMatrix) -> Result<Self> {
        let df = sub.algebra().dim();
        let da = host.algebra().dim();
        if map.shape() != (da, df) {
            return Err(WStarError::InvalidEmbedding(format!(
                "map is {}x{}, expected {da}x{df}",
                map.nrows(),
                map.ncols()
            )));
        }
        let falg = sub.algebra();
        let halg = host.algebra();

        let unital = (&map * falg.identity_coords() - halg.identity_coords()).norm();
        if unital > 1e-10 {
            return Err(WStarError::InvalidEmbedding(format!(
                "not unital: residual {unital:.3e}"
            )));
        }
        // ζ(f†) = ζ(f)†  ⟺  Z·K_F = K_A·conj(Z).
        let star = (&map * falg.adjoint_mat() - halg.adjoint_mat() * map.map(|z| z.conj())).camax();
        if star > 1e-9 {
            return Err(WStarError::InvalidEmbedding(format!(
                "not *-preserving: residual {star:.3e}"
            )));
        }
        let images: Vec<CMatrix> = (0..df)
            .map(|j| halg.expand(&CVector::from_column_slice(map.column(j).as_slice())))
            .collect();
        let mut mult = 0.0f64;
        for i in 0..df {
            for j in 0..df {
                let lhs = halg.expand(&(&map * falg.prod_coords(i, j)));
                let rhs = &images[i] * &images[j];
                mult = mult.max((lhs - rhs).camax());
            }
        }
        if mult > 1e-9 {
            return Err(WStarError::InvalidEmbedding(format!(
                "not multiplicative: residual {mult:.3e}"
            )));
        }
        let min_sv = map
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_sv < RANK_CUTOFF {
            return Err(WStarError::InvalidEmbedding(format!(
                "not injective: min singular value {min_sv:.3e}"
            )));
        }
        // μ∘ζ = λ.
        let mut state_resid = 0.0f64;
        for j in 0..df {
            let mut e = CVector::zeros(df);
            e[j] = cr(1.0);
            let diff = host.state().value_coords(&(&map * &e)) - sub.state().value_coords(&e);
            state_resid = state_resid.max(diff.norm());
        }
        if state_resid > 1e-10 {
            return Err(WStarError::InvalidEmbedding(format!(
                "state incompatible: residual {state_resid:.3e}"
            )));
        }
        // α_g∘ζ = ζ∘φ_g.
        if host.action().generators().len() != sub.action().generators().len() {
            return Err(WStarError::InvalidEmbedding(
                "generator counts differ between host and subsystem".into(),
            ));
        }
        let mut equivariance = 0.0f64;
        for (ta, tf) in host
            .action()
            .generators()
            .iter()
            .zip(sub.action().generators())
        {
            equivariance = equivariance.max((ta * &map - &map * tf).camax());
        }
        if equivariance > 1e-9 {
            return Err(WStarError::InvalidEmbedding(format!(
                "not equivariant: residual {equivariance:.3e}"
            )));
        }

        let image = Arc::new(MatrixAlgebra::generate(halg.ambient_dim(), &images)?);
        let host_gns = host.state().gns();
        let (modular, modular_residual) = is_modular_invariant(host.state(), &host_gns, &image)?;

        Ok(Self {
            sub,
            host,
            map,
            image,
            modular,
            modular_residual,
        })
    }

    /// The inclusion embedding for a subsystem whose algebra already lives in
    /// the host's ambient matrices.
    pub fn inclusion(sub: WStarSystem, host: WStarSystem) -> Result<Self> {
        let map = host.algebra().subalgebra_coords(sub.algebra())?;
        Self::new(sub, host, map)
    }

    /// Composition: an embedding F → R followed by R → A gives F → A.
    pub fn compose(outer: &SubsystemEmbedding, inner: &SubsystemEmbedding) -> Result<Self> {
        let map = &outer.map * &inner.map;
        Self::new(inner.sub.clone(), outer.host.clone(), map)
    }

    pub fn sub(&self) -> &WStarSystem {
        &self.sub
    }

    pub fn host(&self) -> &WStarSystem {
        &self.host
    }

    pub fn map(&self) -> &CMatrix {
        &self.map
    }

    pub fn image(&self) -> &Arc<MatrixAlgebra> {
        &self.image
    }

    pub fn is_modular(&self) -> bool {
        self.modular
    }

    pub fn modular_residual(&self) -> f64 {
        self.modular_residual
    }
}

/// The commutant system B̃ of a system B, realized inside the matrices on
/// the GNS space H_ν.
#[derive(Debug, Clone)]
pub struct CommutantSystem {
    base: WStarSystem,
    base_gns: GnsData,
    /// (B̃, ν̃, β̃) as a system in its own right (ambient M_{dim H_ν}).
    system: WStarSystem,
    /// The unitary representation V of β, which also implements β̃.
    rep: UnitaryRep,
    /// π_ν(B) as a matrix algebra on H_ν.
    pi_image: Arc<MatrixAlgebra>,
}

impl CommutantSystem {
    pub fn new(base: WStarSystem) -> Result<Self> {
        let base_gns = base.state().gns();
        let d = base_gns.dim_h();
        let pi_mats: Vec<CMatrix> = (0..base.algebra().dim())
            .map(|i| base_gns.pi_basis(i).clone())
            .collect();
        let pi_image = Arc::new(MatrixAlgebra::generate(d, &pi_mats)?);
        let tilde_alg = Arc::new(pi_image.commutant());

        // Tomita cross-check: Jπ(B)J = B̃ as spans.
        let j_images: Vec<CMatrix> = pi_mats.iter().map(|m| base_gns.j_conjugate_op(m)).collect();
        let j_alg = MatrixAlgebra::generate(d, &j_images)?;
        let (tomita_ok, tomita_resid) = tilde_alg.span_equal(&j_alg);
        if !tomita_ok {
            return Err(WStarError::Internal(format!(
                "Jπ(B)J does not equal the commutant: residual {tomita_resid:.3e}"
            )));
        }

        let omega = base_gns.omega();
        let density = omega * omega.adjoint();
        let state_tilde = FaithfulState::new(tilde_alg.clone(), density)?;

        let rep = unitary_rep(&base, &base_gns);
        let gens: Vec<CMatrix> = rep
            .mats()
            .iter()
            .map(|v| superop_from_unitary(&tilde_alg, v))
            .collect::<Result<_>>()?;
        let action = GroupAction::new(base.action().group().clone(), gens)?;
        let system = WStarSystem::new(state_tilde, action)?;

        Ok(Self {
            base,
            base_gns,
            system,
            rep,
            pi_image,
        })
    }

    pub fn base(&self) -> &WStarSystem {
        &self.base
    }

    pub fn base_gns(&self) -> &GnsData {
        &self.base_gns
    }

    pub fn system(&self) -> &WStarSystem {
        &self.system
    }

    pub fn algebra(&self) -> &Arc<MatrixAlgebra> {
        self.system.algebra()
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn pi_image(&self) -> &Arc<MatrixAlgebra> {
        &self.pi_image
    }

    /// j_ν(π_ν(b)) for b given in base-algebra coordinates: the canonical
    /// anti-isomorphism from B onto B̃.
    pub fn j_pi(&self, coords: &CVector) -> CMatrix {
        self.base_gns.j_conjugate_op(&self.base_gns.pi(coords))
    }
}

/// The data attached to a common subsystem on the B side: the subspace
/// H_η = span γ_ν(η(F)), the unitary u_η: H_λ → H_η, the homomorphism
/// κ_η: F̃ → B(H_λ), and the diagonal state Δ_λ on F ⊗ F̃.
#[derive(Debug, Clone)]
pub struct EtaData {
    /// Orthonormal basis of H_η inside H_ν (dim H_ν × d_F).
    pub h_eta: CMatrix,
    /// u_η in the H_λ → H_η bases (d_F × d_F, unitary).
    pub u_eta: CMatrix,
    /// κ_η(f̃_l) on H_λ per F̃ basis element.
    pub kappa_mats: Vec<CMatrix>,
    /// F̃ = j_ν π_ν η(F) as a subsystem of B̃ (state λ̃, action φ̃),
    /// embedded by inclusion.
    pub f_tilde: SubsystemEmbedding,
    /// Δ_λ(fᵢ ⊗ f̃ⱼ) on the F × F̃ bases.
    pub delta_lambda: CMatrix,
    /// Residuals established during construction.
    pub checks: EtaChecks,
}

#[derive(Debug, Clone, Copy)]
pub struct EtaChecks {
    /// u_η unitarity.
    pub u_unitary: f64,
    /// u_η† π_η(a) u_η = π_λ(a).
    pub intertwine: f64,
    /// u_η Ω_λ = Ω_ν (in H_η coordinates).
    pub cyclic_match: f64,
    /// b H_η ⊆ H_η for b ∈ F̃.
    pub h_eta_invariance: f64,
    /// κ_η(F̃) commutes with π_λ(F).
    pub kappa_commutes: f64,
}

impl EtaChecks {
    pub fn max_residual(&self) -> f64 {
        self.u_unitary
            .max(self.intertwine)
            .max(self.cyclic_match)
            .max(self.h_eta_invariance)
            .max(self.kappa_commutes)
    }
}

impl EtaData {
    /// Builds the η-side data for a modular embedding η: F → B, given the
    /// commutant context of B and the GNS data of (F, λ).
    pub fn attach(
        into_b: &SubsystemEmbedding,
        ctx_b: &CommutantSystem,
        gns_f: &GnsData,
    ) -> Result<Self> {
        if !into_b.is_modular() {
            return Err(WStarError::NotModularInvariant {
                residual: into_b.modular_residual(),
            });
        }
        let gns_nu = ctx_b.base_gns();
        let falg = into_b.sub().algebra().clone();
        let df = falg.dim();
        let e_map = into_b.map();

        // H_η = span γ_ν(η(F)).
        let cols: Vec<CVector> = (0..df)
            .map(|j| gns_nu.gamma_of(&CVector::from_column_slice(e_map.column(j).as_slice())))
            .collect();
        let q = mgs_columns(&cols, RANK_CUTOFF);
        if q.ncols() != df {
            return Err(WStarError::InvalidEmbedding(format!(
                "γ_ν(η(F)) has rank {} < dim F = {df}",
                q.ncols()
            )));
        }

        // u_η γ_λ(a) = γ_ν(η(a)), expressed in the orthonormal bases.
        let mut gamma_eta = CMatrix::zeros(gns_nu.dim_h(), df);
        for (j, col) in cols.iter().enumerate() {
            gamma_eta.set_column(j, col);
        }
        let u_eta = q.adjoint() * gamma_eta * gns_f.gamma_inv_mat();
        let u_unitary = (u_eta.adjoint() * &u_eta - identity(df)).camax();

        let mut intertwine = 0.0f64;
        for i in 0..df {
            let mut e = CVector::zeros(df);
            e[i] = cr(1.0);
            let pi_eta = q.adjoint() * gns_nu.pi(&(e_map * &e)) * &q;
            let lhs = u_eta.adjoint() * pi_eta * &u_eta;
            intertwine = intertwine.max((lhs - gns_f.pi(&e)).camax());
        }
        let cyclic_match = (&u_eta * gns_f.omega() - q.adjoint() * gns_nu.omega()).norm();

        // F̃ = j_ν π_ν η(F), with state λ̃ = ν̃|_F̃ and action φ̃ = β̃|_F̃.
        let ft_images: Vec<CMatrix> = (0..df)
            .map(|j| ctx_b.j_pi(&CVector::from_column_slice(e_map.column(j).as_slice())))
            .collect();
        let ft_alg = Arc::new(MatrixAlgebra::generate(gns_nu.dim_h(), &ft_images)?);
        let (inside, resid) = ctx_b.algebra().contains(&ft_alg)?;
        if !inside {
            return Err(WStarError::Internal(format!(
                "F̃ escapes the commutant: residual {resid:.3e}"
            )));
        }
        let ft_state = FaithfulState::new(ft_alg.clone(), ctx_b.system().state().density().clone())?;
        let z_ft = ctx_b.algebra().subalgebra_coords(&ft_alg)?;
        let mut ft_gens = Vec::new();
        for theta in ctx_b.system().action().generators() {
            let mut restricted = CMatrix::zeros(ft_alg.dim(), ft_alg.dim());
            for j in 0..ft_alg.dim() {
                let moved = theta * CVector::from_column_slice(z_ft.column(j).as_slice());
                restricted.set_column(j, &(z_ft.adjoint() * moved));
            }
            ft_gens.push(restricted);
        }
        let ft_action = GroupAction::new(ctx_b.system().action().group().clone(), ft_gens)?;
        let ft_system = WStarSystem::new(ft_state, ft_action)?;
        let f_tilde = SubsystemEmbedding::inclusion(ft_system, ctx_b.system().clone())?;

        // κ_η(b) = u_η† (b|_{H_η}) u_η; b H_η ⊆ H_η holds by Lemma 2.4.
        let mut h_eta_invariance = 0.0f64;
        let mut kappa_mats = Vec::with_capacity(ft_alg.dim());
        let proj_out = identity(gns_nu.dim_h()) - &q * q.adjoint();
        for b in ft_alg.basis() {
            h_eta_invariance = h_eta_invariance.max((&proj_out * b * &q).camax());
            kappa_mats.push(u_eta.adjoint() * (q.adjoint() * b * &q) * &u_eta);
        }

        let mut kappa_commutes = 0.0f64;
        for i in 0..df {
            let mut e = CVector::zeros(df);
            e[i] = cr(1.0);
            let pi_f = gns_f.pi(&e);
            for k in &kappa_mats {
                kappa_commutes = kappa_commutes.max((&pi_f * k - k * &pi_f).camax());
            }
        }

        // Δ_λ(fᵢ ⊗ f̃ⱼ) = ⟨Ω_λ, π_λ(fᵢ) κ_η(f̃ⱼ) Ω_λ⟩.
        let omega_l = gns_f.omega();
        let mut delta_lambda = CMatrix::zeros(df, ft_alg.dim());
        for i in 0..df {
            let mut e = CVector::zeros(df);
            e[i] = cr(1.0);
            let pi_f = gns_f.pi(&e);
            for (j, k) in kappa_mats.iter().enumerate() {
                delta_lambda[(i, j)] = omega_l.dotc(&(&pi_f * (k * omega_l)));
            }
        }

        Ok(Self {
            h_eta: q,
            u_eta,
            kappa_mats,
            f_tilde,
            delta_lambda,
            checks: EtaChecks {
                u_unitary,
                intertwine,
                cyclic_match,
                h_eta_invariance,
                kappa_commutes,
            },
        })
    }

    /// δ∘(π_λ ⊙ κ_η) applied to an element of F ⊙ F̃ given by its coefficient
    /// matrix on the product basis.
    pub fn delta_hom(&self, gns_f: &GnsData, coeffs: &CMatrix) -> CMatrix {
        let df = coeffs.nrows();
        let d = self.u_eta.nrows();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..df {
            let mut e = CVector::zeros(df);
            e[i] = cr(1.0);
            let pi_f = gns_f.pi(&e);
            for (j, k) in self.kappa_mats.iter().enumerate() {
                if coeffs[(i, j)].norm() > 0.0 {
                    out += &pi_f * k * coeffs[(i, j)];
                }
            }
        }
        out
    }
}

/// A linear functional on A ⊙ B̃ stored by its values on the product basis.
#[derive(Debug, Clone)]
pub struct JoiningFunctional {
    pub left: Arc<MatrixAlgebra>,
    pub right: Arc<MatrixAlgebra>,
    /// values[(i, j)] = ω(aᵢ ⊗ b̃ⱼ).
    pub values: CMatrix,
}

impl JoiningFunctional {
    pub fn new(left: Arc<MatrixAlgebra>, right: Arc<MatrixAlgebra>, values: CMatrix) -> Self {
        Self {
            left,
            right,
            values,
        }
    }

    /// ω(x ⊗ y) for elements given by coordinates (bilinear extension).
    pub fn evaluate(&self, x: &CVector, y: &CVector) -> num_complex::Complex64 {
        (x.transpose() * &self.values * y)[(0, 0)]
    }

    /// The Gram matrix [ω((aᵢ⊗b̃ⱼ)†(aₖ⊗b̃ₗ))] on the product basis, with the
    /// row-major product index p = i·d_B̃ + j.
    pub fn gram(&self) -> CMatrix {
        let da = self.left.dim();
        let db = self.right.dim();
        // Coordinates of aᵢ†aₖ and b̃ⱼ†b̃ₗ.
        let mut adj_prod_a = vec![CVector::zeros(da); da * da];
        for i in 0..da {
            let ai_adj = self.left.basis()[i].adjoint();
            for k in 0..da {
                adj_prod_a[i * da + k] = self.left.coords(&(&ai_adj * &self.left.basis()[k]));
            }
        }
        let mut adj_prod_b = vec![CVector::zeros(db); db * db];
        for j in 0..db {
            let bj_adj = self.right.basis()[j].adjoint();
            for l in 0..db {
                adj_prod_b[j * db + l] = self.right.coords(&(&bj_adj * &self.right.basis()[l]));
            }
        }
        let dd = da * db;
        let mut gram = CMatrix::zeros(dd, dd);
        for i in 0..da {
            for k in 0..da {
                // Row vector t = coords(aᵢ†aₖ)ᵀ · V.
                let t = adj_prod_a[i * da + k].transpose() * &self.values;
                for j in 0..db {
                    for l in 0..db {
                        gram[(i * db + j, k * db + l)] = (&t * &adj_prod_b[j * db + l])[(0, 0)];
                    }
                }
            }
        }
        gram
    }

    /// Smallest eigenvalue of the (hermitized) Gram matrix.
    pub fn positivity_min_eig(&self) -> f64 {
        eigh(&self.gram()).values[0]
    }

    /// ω(1 ⊗ 1).
    pub fn normalization(&self) -> num_complex::Complex64 {
        self.evaluate(self.left.identity_coords(), self.right.identity_coords())
    }

    /// Largest coordinate difference against another functional on the same
    /// product basis.
    pub fn max_coordinate_difference(&self, other: &JoiningFunctional) -> f64 {
        (&self.values - &other.values).camax()
    }
}

/// Everything needed to build and verify joinings of A and B̃ over a common
/// modular subsystem F.
#[derive(Debug)]
pub struct JoiningContext {
    pub a: WStarSystem,
    pub f: WStarSystem,
    pub emb_a: SubsystemEmbedding,
    pub emb_b: SubsystemEmbedding,
    pub gns_a: GnsData,
    pub gns_f: GnsData,
    pub commutant: CommutantSystem,
    /// GNS data of (B̃, ν̃), used for D̃ and for the geometry.
    pub gns_bt: GnsData,
    pub eta: EtaData,
    /// a ↦ ζ⁻¹(D(a)): host coordinates → F coordinates.
    pub d_map: CMatrix,
    /// b̃ ↦ D̃(b̃) in F̃ coordinates.
    pub d_tilde_map: CMatrix,
}

impl JoiningContext {
    /// Assembles the construction for systems A and B with common modular
    /// subsystem F given by the two embeddings. Fails with the Takesaki
    /// obstruction when an embedding is not modular.
    pub fn new(emb_a: SubsystemEmbedding, emb_b: SubsystemEmbedding) -> Result<Self> {
        let fa = emb_a.sub();
        let fb = emb_b.sub();
        let (same, resid) = fa.algebra().span_equal(fb.algebra());
        if !same
            || (fa.state().density() - fb.state().density()).camax() > 1e-10
            || fa.action().generators().len() != fb.action().generators().len()
        {
            return Err(WStarError::InvalidEmbedding(format!(
                "the two embeddings do not share the same subsystem F (span residual {resid:.3e})"
            )));
        }
        if !emb_a.is_modular() {
            return Err(WStarError::NotModularInvariant {
                residual: emb_a.modular_residual(),
            });
        }
        if !emb_b.is_modular() {
            return Err(WStarError::NotModularInvariant {
                residual: emb_b.modular_residual(),
            });
        }
        let a = emb_a.host().clone();
        let f = fa.clone();
        let gns_a = a.state().gns();
        let gns_f = f.state().gns();
        let commutant = CommutantSystem::new(emb_b.host().clone())?;
        let gns_bt = commutant.system().state().gns();
        let eta = EtaData::attach(&emb_b, &commutant, &gns_f)?;

        // D: A → ζ(F) followed by ζ⁻¹.
        let ce_a = conditional_expectation(a.state(), &gns_a, emb_a.image())?;
        let d_map = pullback_map(emb_a.map(), ce_a.map());

        // D̃: B̃ → F̃ (an inclusion, so the pullback is the coordinate matrix).
        let ce_bt = conditional_expectation(
            commutant.system().state(),
            &gns_bt,
            eta.f_tilde.image(),
        )?;
        let d_tilde_map = pullback_map(eta.f_tilde.map(), ce_bt.map());

        Ok(Self {
            a,
            f,
            emb_a,
            emb_b,
            gns_a,
            gns_f,
            commutant,
            gns_bt,
            eta,
            d_map,
            d_tilde_map,
        })
    }

    pub fn b_tilde(&self) -> &Arc<MatrixAlgebra> {
        self.commutant.algebra()
    }

    /// The diagonal state Δ_λ as a functional on F ⊗ F̃.
    pub fn diagonal_state(&self) -> JoiningFunctional {
        JoiningFunctional::new(
            self.f.algebra().clone(),
            self.eta.f_tilde.sub().algebra().clone(),
            self.eta.delta_lambda.clone(),
        )
    }

    /// The relatively independent joining μ⊙_λν̃ = Δ_λ∘(D ⊙ D̃).
    pub fn relative_joining(&self) -> JoiningFunctional {
        let values = self.d_map.transpose() * &self.eta.delta_lambda * &self.d_tilde_map;
        JoiningFunctional::new(self.a.algebra().clone(), self.b_tilde().clone(), values)
    }

    /// The product coupling μ ⊗ ν̃.
    pub fn product_coupling(&self) -> JoiningFunctional {
        let mu = self.a.state().mu_vec().clone();
        let nu = self.commutant.system().state().mu_vec().clone();
        let values = CMatrix::from_fn(mu.len(), nu.len(), |i, j| mu[i] * nu[j]);
        JoiningFunctional::new(self.a.algebra().clone(), self.b_tilde().clone(), values)
    }

    /// Per-condition residual report for a functional on A ⊗ B̃.
    pub fn verify(&self, w: &JoiningFunctional) -> JoiningReport {
        let da = self.a.algebra().dim();
        let db = self.b_tilde().dim();
        let positivity_min_eig = w.positivity_min_eig();
        let normalization_residual = (w.normalization() - cr(1.0)).norm();

        let id_b = self.b_tilde().identity_coords();
        let id_a = self.a.algebra().identity_coords();
        let mut marginal_left_residual = 0.0f64;
        for i in 0..da {
            let mut e = CVector::zeros(da);
            e[i] = cr(1.0);
            let got = w.evaluate(&e, id_b);
            let want = self.a.state().value_coords(&e);
            marginal_left_residual = marginal_left_residual.max((got - want).norm());
        }
        let mut marginal_right_residual = 0.0f64;
        for j in 0..db {
            let mut e = CVector::zeros(db);
            e[j] = cr(1.0);
            let got = w.evaluate(id_a, &e);
            let want = self.commutant.system().state().value_coords(&e);
            marginal_right_residual = marginal_right_residual.max((got - want).norm());
        }

        let mut invariance_residual = 0.0f64;
        for (ta, tb) in self
            .a
            .action()
            .generators()
            .iter()
            .zip(self.commutant.system().action().generators())
        {
            let moved = ta.transpose() * &w.values * tb;
            invariance_residual = invariance_residual.max((moved - &w.values).camax());
        }

        // ω|_{F⊙F̃} = Δ_λ on the embedded bases.
        let za = self.emb_a.map();
        let zb = self.eta.f_tilde.map();
        let restricted = za.transpose() * &w.values * zb;
        let restriction_residual = (restricted - &self.eta.delta_lambda).camax();

        JoiningReport {
            positivity_min_eig,
            normalization_residual,
            marginal_left_residual,
            marginal_right_residual,
            invariance_residual,
            restriction_residual,
        }
    }
}

/// Solves ζ(x) = y in the least-squares sense to express conditional
/// expectation outputs in subsystem coordinates: returns Z⁺·M.
fn pullback_map(z: &CMatrix, m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(z.ncols(), m.ncols());
    for j in 0..m.ncols() {
        let col = CVector::from_column_slice(m.column(j).as_slice());
        out.set_column(j, &solve_lsq(z, &col));
    }
    out
}

/// Residuals of the coupling/joining conditions for one functional.
#[derive(Debug, Clone, Copy)]
pub struct JoiningReport {
    pub positivity_min_eig: f64,
    pub normalization_residual: f64,
    pub marginal_left_residual: f64,
    pub marginal_right_residual: f64,
    /// Max over generators of ‖ω∘(α_g ⊙ β̃_g) − ω‖.
    pub invariance_residual: f64,
    /// ‖ω|_{F⊙F̃} − Δ_λ‖ on the embedded product basis.
    pub restriction_residual: f64,
}

impl JoiningReport {
    /// Coupling conditions: positivity, normalization, both marginals.
    pub fn is_coupling(&self, tol: f64) -> bool {
        self.positivity_min_eig > -tol
            && self.normalization_residual < tol
            && self.marginal_left_residual < tol
            && self.marginal_right_residual < tol
    }

    /// Full joining-over-F conditions.
    pub fn is_joining_over_f(&self, tol: f64) -> bool {
        self.is_coupling(tol) && self.invariance_residual < tol && self.restriction_residual < tol
    }

    pub fn max_violation(&self) -> f64 {
        (-self.positivity_min_eig)
            .max(self.normalization_residual)
            .max(self.marginal_left_residual)
            .max(self.marginal_right_residual)
            .max(self.invariance_residual)
            .max(self.restriction_residual)
    }
}

/// The Hilbert-space geometry of a coupling ω: the GNS space H_ω, the two
/// isometric imbeddings, the common subspace H_λ, and the orthogonality
/// verdicts that characterize ω = μ⊙_λν̃.
#[derive(Debug)]
pub struct JoiningGeometry {
    /// γ_ω on product coordinates (rank × D).
    pub gamma_omega: CMatrix,
    pub omega_vec: CVector,
    /// Isometry H_μ → H_ω.
    pub iso_left: CMatrix,
    /// Isometry H_ν̃ → H_ω.
    pub iso_right: CMatrix,
    /// Orthonormal basis of H_λ inside H_ω.
    pub h_lambda: CMatrix,
    /// Conditional expectation operator H_ν̃ → H_μ.
    pub p_omega: CMatrix,
    /// Residual of H_λ̃ = H_λ inside H_ω.
    pub subspace_match_residual: f64,
    /// The three orthogonality residuals:
    /// (H_μ⊖H_λ) ⊥ (H_ν̃⊖H_λ), (H_μ⊖H_λ) ⊥ H_ν̃, H_μ ⊥ (H_ν̃⊖H_λ).
    pub orthogonality_residuals: [f64; 3],
    /// max over generators of ‖U_g P_ω − P_ω Ṽ_g‖.
    pub intertwine_residual: f64,
    /// Isometry and representation-intertwining residuals of the imbeddings.
    pub iso_residual: f64,
    pub verdict_orthogonal: bool,
    /// ‖ω − μ⊙_λν̃‖ on coordinates.
    pub functional_match_residual: f64,
    pub verdict_functional: bool,
}

impl JoiningGeometry {
    /// Whether the orthogonality verdict agrees with direct functional
    /// equality, as the equivalence asserts.
    pub fn verdicts_agree(&self) -> bool {
        self.verdict_orthogonal == self.verdict_functional
    }

    /// P: the projection of H_μ onto H_λ, in H_μ coordinates. On GNS
    /// vectors it implements the conditional expectation:
    /// P γ_μ(a) = γ_μ(ζ(D(a))).
    pub fn p_left(&self) -> CMatrix {
        self.iso_left.adjoint() * (&self.h_lambda * self.h_lambda.adjoint()) * &self.iso_left
    }

    /// P̃: the projection of H_ν̃ onto H_λ, in H_ν̃ coordinates.
    pub fn p_right(&self) -> CMatrix {
        self.iso_right.adjoint() * (&self.h_lambda * self.h_lambda.adjoint()) * &self.iso_right
    }
}

/// Builds the GNS space of ω on A ⊗ B̃ and evaluates the orthogonality
/// characterization. Requires ω to pass the coupling checks and to restrict
/// to Δ_λ on F ⊙ F̃.
pub fn joining_geometry(
    ctx: &JoiningContext,
    w: &JoiningFunctional,
    tol: f64,
) -> Result<JoiningGeometry> {
    let report = ctx.verify(w);
    if !report.is_coupling(tol) {
        return Err(WStarError::Precondition(format!(
            "functional is not a coupling: max violation {:.3e}",
            report.max_violation()
        )));
    }
    if report.restriction_residual > tol {
        return Err(WStarError::Precondition(format!(
            "ω|_(F⊙F̃) ≠ Δ_λ: residual {:.3e}",
            report.restriction_residual
        )));
    }

    let da = ctx.a.algebra().dim();
    let db = ctx.b_tilde().dim();
    let dd = da * db;

    let gram = hermitize(&w.gram());
    let e = eigh(&gram);
    let kept: Vec<usize> = (0..dd).filter(|&i| e.values[i] > OMEGA_NULL_CUTOFF).collect();
    let rank = kept.len();
    let mut gamma_omega = CMatrix::zeros(rank, dd);
    let mut gamma_pinv = CMatrix::zeros(dd, rank);
    for (r, &i) in kept.iter().enumerate() {
        let s = e.values[i].sqrt();
        let col = e.vectors.column(i);
        for p in 0..dd {
            gamma_omega[(r, p)] = col[p].conj() * cr(s);
            gamma_pinv[(p, r)] = col[p] / cr(s);
        }
    }

    // Product coordinates of a⊗1 and 1⊗b.
    let id_a = ctx.a.algebra().identity_coords().clone();
    let id_b = ctx.b_tilde().identity_coords().clone();
    let embed_left = |c: &CVector| -> CVector {
        let mut out = CVector::zeros(dd);
        for i in 0..da {
            for j in 0..db {
                out[i * db + j] = c[i] * id_b[j];
            }
        }
        out
    };
    let embed_right = |c: &CVector| -> CVector {
        let mut out = CVector::zeros(dd);
        for i in 0..da {
            for j in 0..db {
                out[i * db + j] = id_a[i] * c[j];
            }
        }
        out
    };

    let mut el = CMatrix::zeros(dd, da);
    for i in 0..da {
        let mut e_i = CVector::zeros(da);
        e_i[i] = cr(1.0);
        el.set_column(i, &embed_left(&e_i));
    }
    let mut er = CMatrix::zeros(dd, db);
    for j in 0..db {
        let mut e_j = CVector::zeros(db);
        e_j[j] = cr(1.0);
        er.set_column(j, &embed_right(&e_j));
    }

    // Isometries γ_μ(a) ↦ γ_ω(a⊗1) and γ_ν̃(b) ↦ γ_ω(1⊗b).
    let iso_left = &gamma_omega * &el * ctx.gns_a.gamma_inv_mat();
    let iso_right = &gamma_omega * &er * ctx.gns_bt.gamma_inv_mat();
    let mut iso_residual = (iso_left.adjoint() * &iso_left - identity(da)).camax();
    iso_residual = iso_residual.max((iso_right.adjoint() * &iso_right - identity(db)).camax());

    // Representation intertwining on basis elements: π_ω(a⊗1)·V_L = V_L·π_μ(a).
    for i in 0..da {
        let mut e_i = CVector::zeros(da);
        e_i[i] = cr(1.0);
        let mult = kron_mult_left(ctx, &e_i, db);
        let pi_omega = &gamma_omega * &mult * &gamma_pinv;
        let lhs = &pi_omega * &iso_left;
        let rhs = &iso_left * ctx.gns_a.pi_basis(i);
        iso_residual = iso_residual.max((lhs - rhs).camax());
    }

    let omega_vec = &gamma_omega * embed_left(&id_a);

    // H_λ inside H_ω, from both sides.
    let za = ctx.emb_a.map();
    let zb = ctx.eta.f_tilde.map();
    let lam_left: Vec<CVector> = (0..za.ncols())
        .map(|j| {
            &gamma_omega * embed_left(&CVector::from_column_slice(za.column(j).as_slice()))
        })
        .collect();
    let lam_right: Vec<CVector> = (0..zb.ncols())
        .map(|j| {
            &gamma_omega * embed_right(&CVector::from_column_slice(zb.column(j).as_slice()))
        })
        .collect();
    let h_lambda = mgs_columns(&lam_left, RANK_CUTOFF);
    let h_lambda_tilde = mgs_columns(&lam_right, RANK_CUTOFF);
    let subspace_match_residual = mutual_containment(&h_lambda, &h_lambda_tilde);

    // Orthogonality checks between the two marginal subspaces modulo H_λ.
    let complement = |iso: &CMatrix| -> CMatrix {
        let cols: Vec<CVector> = (0..iso.ncols())
            .map(|j| {
                let v = CVector::from_column_slice(iso.column(j).as_slice());
                let p = &h_lambda * (h_lambda.adjoint() * &v);
                v - p
            })
            .collect();
        mgs_columns(&cols, RANK_CUTOFF)
    };
    let m_perp = complement(&iso_left);
    let n_perp = complement(&iso_right);
    let r1 = (m_perp.adjoint() * &n_perp).camax();
    let r2 = (m_perp.adjoint() * &iso_right).camax();
    let r3 = (iso_left.adjoint() * &n_perp).camax();

    // P_ω: H_ν̃ → H_μ with ⟨x, P_ω y⟩ = ⟨x, y⟩_ω.
    let p_omega = iso_left.adjoint() * &iso_right;
    let u_rep = unitary_rep(&ctx.a, &ctx.gns_a);
    let v_rep = unitary_rep(ctx.commutant.system(), &ctx.gns_bt);
    let mut intertwine_residual = 0.0f64;
    for (u, v) in u_rep.mats().iter().zip(v_rep.mats()) {
        intertwine_residual = intertwine_residual.max((u * &p_omega - &p_omega * v).camax());
    }

    let canonical = ctx.relative_joining();
    let functional_match_residual = w.max_coordinate_difference(&canonical);

    Ok(JoiningGeometry {
        gamma_omega,
        omega_vec,
        iso_left,
        iso_right,
        h_lambda,
        p_omega,
        subspace_match_residual,
        orthogonality_residuals: [r1, r2, r3],
        intertwine_residual,
        iso_residual,
        verdict_orthogonal: r1 < tol,
        functional_match_residual,
        verdict_functional: functional_match_residual < tol,
    })
}

/// Left-multiplication superoperator of a⊗1 on product coordinates.
fn kron_mult_left(ctx: &JoiningContext, a_coords: &CVector, db: usize) -> CMatrix {
    let a_mat = ctx.a.algebra().expand(a_coords);
    let ma = ctx.a.algebra().mult_superop(&a_mat);
    crate::linalg::kron(&ma, &identity(db))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GroupSpec;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
    }

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
    }

    fn m2() -> Arc<MatrixAlgebra> {
        Arc::new(MatrixAlgebra::generate(2, &[pauli_x(), pauli_z()]).unwrap())
    }

    fn diag_alg(n: usize) -> Arc<MatrixAlgebra> {
        let units: Vec<CMatrix> = (0..n)
            .map(|i| {
                let mut m = CMatrix::zeros(n, n);
                m[(i, i)] = cr(1.0);
                m
            })
            .collect();
        Arc::new(MatrixAlgebra::generate(n, &units).unwrap())
    }

    fn diag_density(p: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(p.len(), p.iter().map(|&x| cr(x))))
    }

    fn trace_state(alg: Arc<MatrixAlgebra>) -> FaithfulState {
        let n = alg.ambient_dim();
        FaithfulState::new(alg, identity(n) / cr(n as f64)).unwrap()
    }

    fn identity_system(state: FaithfulState) -> WStarSystem {
        let d = state.algebra().dim();
        WStarSystem::new(state, GroupAction::identity_action(GroupSpec::Integer, d)).unwrap()
    }

    fn gibbs_m2() -> WStarSystem {
        let alg = m2();
        let state = FaithfulState::new(alg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let gns = state.gns();
        let theta = gns.modular_flow_superop(1.0);
        let action = GroupAction::new(GroupSpec::Integer, vec![theta]).unwrap();
        WStarSystem::new(state, action).unwrap()
    }

    /// Common trivial subsystem F = ℂ embedded in any system.
    fn trivial_embedding(host: &WStarSystem) -> SubsystemEmbedding {
        let f = trivial_system_in_ambient(host);
        SubsystemEmbedding::new(
            f,
            host.clone(),
            CMatrix::from_column_slice(
                host.algebra().dim(),
                1,
                host.algebra().identity_coords().as_slice(),
            ),
        )
        .unwrap()
    }

    fn trivial_system_in_ambient(host: &WStarSystem) -> WStarSystem {
        let scal = Arc::new(MatrixAlgebra::generate(1, &[]).unwrap());
        let state = FaithfulState::new(scal, identity(1)).unwrap();
        let group = host.action().group().clone();
        WStarSystem::new(state, GroupAction::identity_action(group, 1)).unwrap()
    }

    #[test]
    fn commutant_system_of_full_m2_is_tracial_m2() {
        let sys = identity_system(trace_state(m2()));
        let ctx = CommutantSystem::new(sys).unwrap();
        assert_eq!(ctx.algebra().dim(), 4);
        assert!(ctx.system().state().is_tracial(1e-9));
        assert!(ctx.system().action().is_identity());
    }

    #[test]
    fn commutant_system_of_abelian_keeps_state_values() {
        let alg = diag_alg(2);
        let state = FaithfulState::new(alg, diag_density(&[0.3, 0.7])).unwrap();
        let sys = identity_system(state);
        let ctx = CommutantSystem::new(sys.clone()).unwrap();
        assert_eq!(ctx.algebra().dim(), 2);
        // Under the j-identification, ν̃(j(π(e_i))) = ν(e_i) on matrix units.
        for (i, want) in [0.3, 0.7].iter().enumerate() {
            let mut unit = CMatrix::zeros(2, 2);
            unit[(i, i)] = cr(1.0);
            let image = ctx.j_pi(&sys.algebra().coords(&unit));
            let coords = ctx.algebra().coords(&image);
            let got = ctx.system().state().value_coords(&coords);
            assert!((got - cr(*want)).norm() < 1e-10, "i={i}, got {got}");
        }
    }

    #[test]
    fn gibbs_commutant_carries_dynamics() {
        let ctx = CommutantSystem::new(gibbs_m2()).unwrap();
        assert_eq!(ctx.algebra().dim(), 4);
        // β̃ is nontrivial but preserves ν̃ (validated by construction).
        assert!(!ctx.system().action().is_identity());
    }

    #[test]
    fn eta_data_for_full_subsystem() {
        // F = B with η = id: H_η = H_ν and κ_η is a conjugated copy of B̃.
        let sys = identity_system(trace_state(m2()));
        let emb = SubsystemEmbedding::inclusion(sys.clone(), sys.clone()).unwrap();
        assert!(emb.is_modular());
        let ctx_b = CommutantSystem::new(sys.clone()).unwrap();
        let gns_f = sys.state().gns();
        let eta = EtaData::attach(&emb, &ctx_b, &gns_f).unwrap();
        assert_eq!(eta.h_eta.ncols(), 4);
        assert!(eta.checks.max_residual() < 1e-9, "{:?}", eta.checks);
    }

    #[test]
    fn eta_data_trivial_subsystem() {
        let sys = gibbs_m2();
        let emb = trivial_embedding(&sys);
        let ctx_b = CommutantSystem::new(sys).unwrap();
        let gns_f = emb.sub().state().gns();
        let eta = EtaData::attach(&emb, &ctx_b, &gns_f).unwrap();
        assert_eq!(eta.h_eta.ncols(), 1);
        assert_eq!(eta.delta_lambda.shape(), (1, 1));
        assert!((eta.delta_lambda[(0, 0)] - cr(1.0)).norm() < 1e-10);
    }

    #[test]
    fn diagonal_state_weighted_classical_measure() {
        // F = diagonal of M₂ with λ = (1/3, 2/3): on matrix units,
        // Δ_λ(eᵢ ⊗ ẽⱼ) = δᵢⱼ λᵢ.
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg.clone(), diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        assert!(emb.is_modular());
        let ctx_b = CommutantSystem::new(host).unwrap();
        let gns_f = f_sys.state().gns();
        let eta = EtaData::attach(&emb, &ctx_b, &gns_f).unwrap();
        assert!(eta.checks.max_residual() < 1e-9, "{:?}", eta.checks);

        let falg = f_sys.algebra();
        let ft_alg = eta.f_tilde.sub().algebra();
        for i in 0..2 {
            let mut ei = CMatrix::zeros(2, 2);
            ei[(i, i)] = cr(1.0);
            let ci = falg.coords(&ei);
            for j in 0..2 {
                // ẽⱼ = j_ν π_ν of the j-th matrix unit of F, via the embedding.
                let mut ej = CVector::zeros(2);
                ej[j] = cr(1.0);
                let ft_mat = ctx_b.j_pi(&(emb.map() * falg.coords(&{
                    let mut m = CMatrix::zeros(2, 2);
                    m[(j, j)] = cr(1.0);
                    m
                })));
                let _ = ej;
                let cj = ft_alg.coords(&ft_mat);
                let value = (ci.transpose() * &eta.delta_lambda * cj)[(0, 0)];
                let want = if i == j {
                    cr([1.0 / 3.0, 2.0 / 3.0][i])
                } else {
                    cr(0.0)
                };
                assert!((value - want).norm() < 1e-10, "i={i}, j={j}, got {value}");
            }
        }
    }

    #[test]
    fn diagonal_state_uniform_classical_measure() {
        // Classical uniform case: Δ_λ(eᵢ⊗ẽⱼ) = δᵢⱼ/n.
        let n = 3;
        let alg = diag_alg(n);
        let host = identity_system(trace_state(alg.clone()));
        let emb = SubsystemEmbedding::inclusion(host.clone(), host.clone()).unwrap();
        let ctx_b = CommutantSystem::new(host.clone()).unwrap();
        let gns_f = host.state().gns();
        let eta = EtaData::attach(&emb, &ctx_b, &gns_f).unwrap();
        let falg = host.algebra();
        let ft_alg = eta.f_tilde.sub().algebra();
        for i in 0..n {
            let mut ei = CMatrix::zeros(n, n);
            ei[(i, i)] = cr(1.0);
            for j in 0..n {
                let mut ej = CMatrix::zeros(n, n);
                ej[(j, j)] = cr(1.0);
                let ft_mat = ctx_b.j_pi(&(emb.map() * falg.coords(&ej)));
                let value = (falg.coords(&ei).transpose()
                    * &eta.delta_lambda
                    * ft_alg.coords(&ft_mat))[(0, 0)];
                let want = if i == j { cr(1.0 / n as f64) } else { cr(0.0) };
                assert!((value - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn relative_joining_over_trivial_f_is_product() {
        let host = gibbs_m2();
        let emb_a = trivial_embedding(&host);
        let emb_b = trivial_embedding(&host);
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();
        let w = ctx.relative_joining();
        let product = ctx.product_coupling();
        assert!(w.max_coordinate_difference(&product) < 1e-10);
        let report = ctx.verify(&w);
        assert!(report.is_joining_over_f(1e-8), "{report:?}");
    }

    #[test]
    fn relative_joining_over_self_is_diagonal_state() {
        // A = B = F with identity embeddings: D = id and the joining is Δ_λ.
        let sys = gibbs_m2();
        let emb_a = SubsystemEmbedding::inclusion(sys.clone(), sys.clone()).unwrap();
        let emb_b = SubsystemEmbedding::inclusion(sys.clone(), sys.clone()).unwrap();
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();
        let w = ctx.relative_joining();
        // Both conditional expectations are the identity; the A-side basis is
        // shared while the B̃ side differs from the F̃ basis by the unitary
        // change of coordinates Z̃, so ω·Z̃ recovers Δ_λ exactly.
        assert!((ctx.d_map.clone() - identity(4)).camax() < 1e-10);
        let z_tilde = ctx.eta.f_tilde.map();
        assert!((&w.values * z_tilde - &ctx.eta.delta_lambda).camax() < 1e-9);
        let report = ctx.verify(&w);
        assert!(report.is_joining_over_f(1e-8), "{report:?}");
    }

    #[test]
    fn relative_joining_over_diagonal_of_gibbs() {
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_a = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let emb_b = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();
        let w = ctx.relative_joining();
        let report = ctx.verify(&w);
        assert!(report.is_joining_over_f(1e-8), "{report:?}");
        // Not the product: the diagonal correlations survive.
        let product = ctx.product_coupling();
        assert!(w.max_coordinate_difference(&product) > 1e-3);
    }

    #[test]
    fn perturbed_functional_fails_verification() {
        let host = gibbs_m2();
        let ctx = JoiningContext::new(trivial_embedding(&host), trivial_embedding(&host)).unwrap();
        let mut w = ctx.relative_joining();
        let scale = 1e-3;
        w.values[(1, 2)] += cr(scale);
        let report = ctx.verify(&w);
        assert!(!report.is_joining_over_f(1e-8));
        assert!(report.max_violation() >= scale / 2.0);
    }

    #[test]
    fn takesaki_obstruction_blocks_non_modular_f() {
        // span{I, X} inside (M₂, Gibbs state, identity action) is a valid
        // subsystem but not modular-invariant, so no conditional expectation
        // (and no joining construction) exists.
        let alg = m2();
        let host_state = FaithfulState::new(alg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let host = identity_system(host_state);
        let xalg = Arc::new(MatrixAlgebra::generate(2, &[pauli_x()]).unwrap());
        let xstate = FaithfulState::new(xalg, identity(2) / cr(2.0)).unwrap();
        let f_sys = identity_system(xstate);
        let emb = SubsystemEmbedding::inclusion(f_sys, host).unwrap();
        assert!(!emb.is_modular());
        let err = JoiningContext::new(emb.clone(), emb).unwrap_err();
        assert!(matches!(err, WStarError::NotModularInvariant { .. }));
    }

    #[test]
    fn geometry_of_canonical_joining_is_orthogonal() {
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_a = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let emb_b = SubsystemEmbedding::inclusion(f_sys, host).unwrap();
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();
        let w = ctx.relative_joining();
        let geo = joining_geometry(&ctx, &w, 1e-8).unwrap();
        assert!(geo.iso_residual < 1e-8, "iso residual {}", geo.iso_residual);
        assert!(
            geo.subspace_match_residual < 1e-8,
            "H_λ̃ = H_λ residual {}",
            geo.subspace_match_residual
        );
        assert!(geo.verdict_orthogonal, "{:?}", geo.orthogonality_residuals);
        assert!(geo.verdict_functional);
        assert!(geo.verdicts_agree());
        assert!(geo.intertwine_residual < 1e-8);
        // The three orthogonality conditions are equivalent: they must agree.
        let verdicts: Vec<bool> = geo
            .orthogonality_residuals
            .iter()
            .map(|&r| r < 1e-8)
            .collect();
        assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{verdicts:?}");
    }

    #[test]
    fn delta_hom_reproduces_diagonal_state() {
        // Δ_λ(c) = ⟨Ω_λ, δ∘(π_λ⊙κ_η)(c) Ω_λ⟩ on every product basis pair.
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_b = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let ctx_b = CommutantSystem::new(host).unwrap();
        let gns_f = f_sys.state().gns();
        let eta = EtaData::attach(&emb_b, &ctx_b, &gns_f).unwrap();
        let omega = gns_f.omega();
        let (df, dft) = eta.delta_lambda.shape();
        for i in 0..df {
            for j in 0..dft {
                let mut coeffs = CMatrix::zeros(df, dft);
                coeffs[(i, j)] = cr(1.0);
                let op = eta.delta_hom(&gns_f, &coeffs);
                let value = omega.dotc(&(op * omega));
                assert!((value - eta.delta_lambda[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn h_lambda_projection_implements_conditional_expectation() {
        // P γ_μ(a) = γ_μ(ζ(D(a))) inside H_μ.
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb = SubsystemEmbedding::inclusion(f_sys, host).unwrap();
        let ctx = JoiningContext::new(emb.clone(), emb).unwrap();
        let w = ctx.relative_joining();
        let geo = joining_geometry(&ctx, &w, 1e-8).unwrap();
        let p = geo.p_left();
        let da = ctx.a.algebra().dim();
        for i in 0..da {
            let mut e = CVector::zeros(da);
            e[i] = cr(1.0);
            let lhs = &p * ctx.gns_a.gamma_of(&e);
            let d_coords = ctx.emb_a.map() * (&ctx.d_map * &e);
            let rhs = ctx.gns_a.gamma_of(&d_coords);
            assert!((lhs - rhs).norm() < 1e-9, "basis element {i}");
        }
        // P̃ is likewise idempotent and Hermitian.
        let pt = geo.p_right();
        assert!((&pt * &pt - &pt).camax() < 1e-9);
        assert!((&pt - pt.adjoint()).camax() < 1e-9);
    }

    #[test]
    fn geometry_trivial_f_product_case() {
        let host = gibbs_m2();
        let ctx = JoiningContext::new(trivial_embedding(&host), trivial_embedding(&host)).unwrap();
        let w = ctx.product_coupling();
        let geo = joining_geometry(&ctx, &w, 1e-8).unwrap();
        // H_λ = ℂΩ and the mean-zero parts are orthogonal for the product.
        assert_eq!(geo.h_lambda.ncols(), 1);
        assert!(geo.verdict_orthogonal);
        assert!(geo.verdict_functional);
    }

    #[test]
    fn geometry_rejects_wrong_restriction() {
        // Under F = diagonal, the product coupling does not restrict to Δ_λ.
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_a = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let emb_b = SubsystemEmbedding::inclusion(f_sys, host).unwrap();
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();
        let w = ctx.product_coupling();
        let err = joining_geometry(&ctx, &w, 1e-8).unwrap_err();
        assert!(matches!(err, WStarError::Precondition(_)));
    }

    #[test]
    fn proof_identities_on_gibbs_over_diagonal() {
        // D∘α_g = φ_g∘D, u_η*V_g|_{H_η}u_η = W_g, κ_η(φ̃_g(b)) = W_g κ_η(b) W_g*.
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_a = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let emb_b = SubsystemEmbedding::inclusion(f_sys, host).unwrap();
        let ctx = JoiningContext::new(emb_a, emb_b).unwrap();

        for (ta, tf) in ctx
            .a
            .action()
            .generators()
            .iter()
            .zip(ctx.f.action().generators())
        {
            let lhs = &ctx.d_map * ta;
            let rhs = tf * &ctx.d_map;
            assert!((lhs - rhs).camax() < 1e-9);
        }

        let w_rep = unitary_rep(&ctx.f, &ctx.gns_f);
        let v_rep = ctx.commutant.rep();
        let q = &ctx.eta.h_eta;
        for (wg, vg) in w_rep.mats().iter().zip(v_rep.mats()) {
            let v_restr = q.adjoint() * vg * q;
            let lhs = ctx.eta.u_eta.adjoint() * v_restr * &ctx.eta.u_eta;
            assert!((lhs - wg).camax() < 1e-9);
        }

        let ft = &ctx.eta.f_tilde;
        for (gen_idx, wg) in w_rep.mats().iter().enumerate() {
            let phi_tilde = &ft.sub().action().generators()[gen_idx];
            for (l, kappa) in ctx.eta.kappa_mats.iter().enumerate() {
                let mut e = CVector::zeros(ft.sub().algebra().dim());
                e[l] = cr(1.0);
                let moved = phi_tilde * &e;
                // κ_η(φ̃(f̃_l)) assembled from the κ matrices.
                let mut kappa_moved = CMatrix::zeros(kappa.nrows(), kappa.ncols());
                for (m, km) in ctx.eta.kappa_mats.iter().enumerate() {
                    kappa_moved += km * moved[m];
                }
                let conjugated = wg * kappa * wg.adjoint();
                assert!((kappa_moved - conjugated).camax() < 1e-9);
            }
        }
    }

    #[test]
    fn proof_identities_on_random_triples() {
        // D∘α_g = φ_g∘D, u_η*V_g|_{H_η}u_η = W_g, and the κ conjugation law,
        // across seeded random triples.
        for seed in 0..10u64 {
            let t = crate::sampler::random_modular_triple(seed);
            let ctx = JoiningContext::new(t.emb_a, t.emb_b).unwrap();

            for (ta, tf) in ctx
                .a
                .action()
                .generators()
                .iter()
                .zip(ctx.f.action().generators())
            {
                assert!(
                    (&ctx.d_map * ta - tf * &ctx.d_map).camax() < 1e-9,
                    "seed {seed}: D fails equivariance"
                );
            }

            let w_rep = unitary_rep(&ctx.f, &ctx.gns_f);
            let q = &ctx.eta.h_eta;
            for (wg, vg) in w_rep.mats().iter().zip(ctx.commutant.rep().mats()) {
                let v_restr = q.adjoint() * vg * q;
                let lhs = ctx.eta.u_eta.adjoint() * v_restr * &ctx.eta.u_eta;
                assert!((lhs - wg).camax() < 1e-9, "seed {seed}: u_eta intertwining");
            }

            let ft = &ctx.eta.f_tilde;
            for (gen_idx, wg) in w_rep.mats().iter().enumerate() {
                let phi_tilde = &ft.sub().action().generators()[gen_idx];
                for (l, kappa) in ctx.eta.kappa_mats.iter().enumerate() {
                    let mut e = CVector::zeros(ft.sub().algebra().dim());
                    e[l] = cr(1.0);
                    let moved = phi_tilde * &e;
                    let mut kappa_moved = CMatrix::zeros(kappa.nrows(), kappa.ncols());
                    for (m, km) in ctx.eta.kappa_mats.iter().enumerate() {
                        kappa_moved += km * moved[m];
                    }
                    let conjugated = wg * kappa * wg.adjoint();
                    assert!(
                        (kappa_moved - conjugated).camax() < 1e-9,
                        "seed {seed}: kappa conjugation law"
                    );
                }
            }
        }
    }

    #[test]
    fn f_tilde_is_modular_in_b_tilde() {
        let host = gibbs_m2();
        let dalg = diag_alg(2);
        let fstate = FaithfulState::new(dalg, diag_density(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
        let f_sys = identity_system(fstate);
        let emb_b = SubsystemEmbedding::inclusion(f_sys.clone(), host.clone()).unwrap();
        let ctx_b = CommutantSystem::new(host).unwrap();
        let gns_f = f_sys.state().gns();
        let eta = EtaData::attach(&emb_b, &ctx_b, &gns_f).unwrap();
        assert!(eta.f_tilde.is_modular());
    }
}
