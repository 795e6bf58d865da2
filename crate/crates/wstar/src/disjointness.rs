//! The joining set J_λ(A, B̃) as a convex feasibility region, probed for
//! elements other than the relatively independent joining.
//!
//! Coordinates are the functional's values on the product basis, split into
//! real and imaginary parts. Normalization, marginals, invariance,
//! hermiticity, and the restriction to Δ_λ are affine; positivity is the PSD
//! cone of the Gram matrix. The probe runs Dykstra alternating projections
//! between the affine set and the cone, starting from a seeded perturbation
//! of the canonical joining inside the affine set: distances that collapse
//! back to the canonical point are evidence (not proof) of disjointness,
//! while a surviving distance exhibits a second joining.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, WStarError};
use crate::joinings::{JoiningContext, JoiningFunctional};
use crate::linalg::{cr, hermitize, project_psd, smat, svec, CMatrix, CVector};

type RMatrix = DMatrix<f64>;
type RVector = DVector<f64>;

/// Dykstra stopping threshold on successive iterates.
pub const DYKSTRA_STOP: f64 = 1e-10;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 5000;
/// Relative scale of the seeded affine-feasible perturbation.
pub const PERTURBATION_SCALE: f64 = 1e-2;

/// J_λ(A, B̃) as affine constraints plus the PSD cone of the Gram map.
pub struct ConstraintSystem {
    d_left: usize,
    d_right: usize,
    /// Full affine system A·x = b on x = (Re v, Im v).
    a_mat: RMatrix,
    b_vec: RVector,
    /// Orthonormal null-space basis of the affine system.
    null_basis: RMatrix,
    /// Linear map x ↦ svec(Gram(v(x))).
    psi: RMatrix,
    /// Canonical coordinates (the relatively independent joining).
    x_canonical: RVector,
    /// Affine projector data in svec space: s ↦ s0 + Q(Qᵀ(s − s0)).
    s0: RVector,
    q_range: RMatrix,
    /// Recovery map: x = x_canonical + R·(s − s0).
    recover: RMatrix,
    /// Rank of the affine system after reduction.
    pub reduced_rank: usize,
    /// Number of affine rows before reduction.
    pub raw_rows: usize,
    /// Residual of the canonical point in the affine system.
    pub canonical_affine_residual: f64,
    /// Smallest Gram eigenvalue at the canonical point.
    pub canonical_min_eig: f64,
}

impl ConstraintSystem {
    /// Assembles the constraint system for a joining context. The canonical
    /// joining must be feasible; anything else is an upstream bug.
    pub fn build(ctx: &JoiningContext) -> Result<Self> {
        Self::build_inner(ctx, true)
    }

    /// Same system without the restriction-to-Δ_λ rows (the plain joining
    /// set J(A, B̃)); used to compare constraint sets when F = ℂ.
    pub fn build_without_restriction(ctx: &JoiningContext) -> Result<Self> {
        Self::build_inner(ctx, false)
    }

    fn build_inner(ctx: &JoiningContext, with_restriction: bool) -> Result<Self> {
        let da = ctx.a.algebra().dim();
        let db = ctx.b_tilde().dim();
        let dd = da * db;
        let nx = 2 * dd;

        let mut rows: Vec<RVector> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();

        let push_complex_row = |l: &CMatrix, tau: num_complex::Complex64,
                                    rows: &mut Vec<RVector>,
                                    rhs: &mut Vec<f64>| {
            let mut re_row = RVector::zeros(nx);
            let mut im_row = RVector::zeros(nx);
            for p in 0..dd {
                let (i, j) = (p / db, p % db);
                let c = l[(i, j)];
                // Re(L·v) and Im(L·v) over x = (Re v, Im v).
                re_row[p] = c.re;
                re_row[dd + p] = -c.im;
                im_row[p] = c.im;
                im_row[dd + p] = c.re;
            }
            rows.push(re_row);
            rhs.push(tau.re);
            rows.push(im_row);
            rhs.push(tau.im);
        };

        let id_a = ctx.a.algebra().identity_coords().clone();
        let id_b = ctx.b_tilde().identity_coords().clone();

        // ω(1⊗1) = 1.
        let norm_row = CMatrix::from_fn(da, db, |i, j| id_a[i] * id_b[j]);
        push_complex_row(&norm_row, cr(1.0), &mut rows, &mut rhs);

        // ω(aᵢ⊗1) = μ(aᵢ).
        for i in 0..da {
            let l = CMatrix::from_fn(da, db, |k, j| if k == i { id_b[j] } else { cr(0.0) });
            let mut e = CVector::zeros(da);
            e[i] = cr(1.0);
            push_complex_row(&l, ctx.a.state().value_coords(&e), &mut rows, &mut rhs);
        }
        // ω(1⊗b̃ⱼ) = ν̃(b̃ⱼ).
        for j in 0..db {
            let l = CMatrix::from_fn(da, db, |i, m| if m == j { id_a[i] } else { cr(0.0) });
            let mut e = CVector::zeros(db);
            e[j] = cr(1.0);
            push_complex_row(
                &l,
                ctx.commutant.system().state().value_coords(&e),
                &mut rows,
                &mut rhs,
            );
        }

        // ω∘(α_g ⊙ β̃_g) = ω, one row per product-basis element and generator.
        for (ta, tb) in ctx
            .a
            .action()
            .generators()
            .iter()
            .zip(ctx.commutant.system().action().generators())
        {
            for i in 0..da {
                for j in 0..db {
                    let mut l = CMatrix::from_fn(da, db, |k, m| ta[(k, i)] * tb[(m, j)]);
                    l[(i, j)] -= cr(1.0);
                    push_complex_row(&l, cr(0.0), &mut rows, &mut rhs);
                }
            }
        }

        // ω|_{F⊙F̃} = Δ_λ.
        if with_restriction {
            let za = ctx.emb_a.map();
            let zb = ctx.eta.f_tilde.map();
            for fi in 0..za.ncols() {
                for fj in 0..zb.ncols() {
                    let l = CMatrix::from_fn(da, db, |k, m| za[(k, fi)] * zb[(m, fj)]);
                    push_complex_row(&l, ctx.eta.delta_lambda[(fi, fj)], &mut rows, &mut rhs);
                }
            }
        }

        // Hermiticity ω(c†) = conj(ω(c)), real-affine rows.
        let adj_a: Vec<CVector> = (0..da)
            .map(|i| {
                let mut e = CVector::zeros(da);
                e[i] = cr(1.0);
                ctx.a.algebra().adjoint_coords(&e)
            })
            .collect();
        let adj_b: Vec<CVector> = (0..db)
            .map(|j| {
                let mut e = CVector::zeros(db);
                e[j] = cr(1.0);
                ctx.b_tilde().adjoint_coords(&e)
            })
            .collect();
        for i in 0..da {
            for j in 0..db {
                let mut re_row = RVector::zeros(nx);
                let mut im_row = RVector::zeros(nx);
                for k in 0..da {
                    for m in 0..db {
                        let c = adj_a[i][k] * adj_b[j][m];
                        let p = k * db + m;
                        re_row[p] += c.re;
                        re_row[dd + p] += -c.im;
                        im_row[p] += c.im;
                        im_row[dd + p] += c.re;
                    }
                }
                let p0 = i * db + j;
                // ω((aᵢ⊗b̃ⱼ)†) − conj(v_{ij}) = 0.
                re_row[p0] -= 1.0;
                im_row[dd + p0] += 1.0;
                rows.push(re_row);
                rhs.push(0.0);
                rows.push(im_row);
                rhs.push(0.0);
            }
        }

        let raw_rows = rows.len();
        let mut a_full = RMatrix::zeros(raw_rows, nx);
        for (r, row) in rows.iter().enumerate() {
            a_full.set_row(r, &row.transpose());
        }
        let b_full = RVector::from_vec(rhs);

        let canonical = ctx.relative_joining();
        let x_canonical = values_to_x(&canonical.values);
        let canonical_affine_residual = (&a_full * &x_canonical - &b_full).amax();
        if canonical_affine_residual > 1e-9 {
            return Err(WStarError::Internal(format!(
                "canonical joining violates its own constraints: residual {canonical_affine_residual:.3e}"
            )));
        }
        let canonical_min_eig = canonical.positivity_min_eig();
        if canonical_min_eig < -1e-9 {
            return Err(WStarError::Internal(format!(
                "canonical joining is not positive: min eig {canonical_min_eig:.3e}"
            )));
        }

        // Rank reduction and null space.
        let svd = a_full.clone().svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let thr = 1e-10 * smax.max(1.0);
        let rank = svd.singular_values.iter().filter(|&&s| s > thr).count();
        let v_t = svd.v_t.as_ref().expect("svd v_t");
        let mut null_basis = RMatrix::zeros(nx, nx - rank.min(nx));
        let mut null_count = 0;
        for r in rank..v_t.nrows() {
            null_basis.set_column(null_count, &v_t.row(r).transpose());
            null_count += 1;
        }
        // Rows of v_t beyond its row count (wide systems) are implicit nulls.
        if v_t.nrows() < nx {
            let q = complete_orthonormal(v_t);
            for col in 0..q.ncols() {
                null_basis.set_column(null_count, &q.column(col).into_owned());
                null_count += 1;
            }
        }
        let null_basis = null_basis.columns(0, null_count).into_owned();

        // Gram map Ψ in svec coordinates.
        let s_len = dd * dd;
        let mut psi = RMatrix::zeros(s_len, nx);
        for k in 0..nx {
            let mut x = RVector::zeros(nx);
            x[k] = 1.0;
            let values = x_to_values(&x, da, db);
            let w = JoiningFunctional::new(
                ctx.a.algebra().clone(),
                ctx.b_tilde().clone(),
                values,
            );
            let g = hermitize(&w.gram());
            psi.set_column(k, &RVector::from_vec(svec(&g)));
        }

        let s0 = &psi * &x_canonical;
        let m_mat = &psi * &null_basis;
        // Orthonormal basis of the affine directions in svec space, plus the
        // recovery pseudo-inverse back to x.
        let (q_range, recover) = if null_count == 0 {
            (RMatrix::zeros(s_len, 0), RMatrix::zeros(nx, s_len))
        } else {
            let svd_m = m_mat.clone().svd(true, true);
            let mmax = svd_m.singular_values.iter().cloned().fold(0.0f64, f64::max);
            let mthr = 1e-12 * mmax.max(1.0);
            let mrank = svd_m.singular_values.iter().filter(|&&s| s > mthr).count();
            let u = svd_m.u.as_ref().expect("svd u");
            let vt = svd_m.v_t.as_ref().expect("svd v_t");
            let q = u.columns(0, mrank).into_owned();
            let mut pinv = RMatrix::zeros(null_count, s_len);
            for r in 0..mrank {
                let row = u.column(r).transpose() / svd_m.singular_values[r];
                let vcol = vt.row(r).transpose();
                pinv += vcol * row;
            }
            (q, &null_basis * pinv)
        };

        Ok(Self {
            d_left: da,
            d_right: db,
            a_mat: a_full,
            b_vec: b_full,
            null_basis,
            psi,
            x_canonical,
            s0,
            q_range,
            recover,
            reduced_rank: rank,
            raw_rows,
            canonical_affine_residual,
            canonical_min_eig,
        })
    }

    pub fn coordinate_count(&self) -> usize {
        self.d_left * self.d_right
    }

    /// Dimension of the affine solution set.
    pub fn null_dimension(&self) -> usize {
        self.null_basis.ncols()
    }

    /// Affine residual ‖Ax − b‖∞ of an arbitrary values matrix.
    pub fn affine_residual(&self, values: &CMatrix) -> f64 {
        let x = values_to_x(values);
        (&self.a_mat * x - &self.b_vec).amax()
    }

    /// Whether every solution of this affine system also solves `other`:
    /// the canonical point transfers and the null space is contained.
    /// This is the constraint-set form of J_ψ ⊆ J_λ for nested subsystems.
    pub fn affine_subset_of(&self, other: &ConstraintSystem) -> (bool, f64) {
        let mut worst = (&other.a_mat * &self.x_canonical - &other.b_vec).amax();
        for j in 0..self.null_basis.ncols() {
            let v = self.null_basis.column(j).into_owned();
            let proj = &other.null_basis * (other.null_basis.transpose() * &v);
            worst = worst.max((v - proj).amax());
        }
        (worst < 1e-8, worst)
    }

    /// Whether the affine parts of two systems cut out the same solution
    /// set: both canonical points satisfy both systems and the null spaces
    /// contain each other. Returns the worst residual seen.
    pub fn affine_sets_equal(&self, other: &ConstraintSystem) -> (bool, f64) {
        let mut worst = (&self.a_mat * &other.x_canonical - &self.b_vec).amax();
        worst = worst.max((&other.a_mat * &self.x_canonical - &other.b_vec).amax());
        for j in 0..other.null_basis.ncols() {
            let v = other.null_basis.column(j).into_owned();
            let proj = &self.null_basis * (self.null_basis.transpose() * &v);
            worst = worst.max((v - proj).amax());
        }
        for j in 0..self.null_basis.ncols() {
            let v = self.null_basis.column(j).into_owned();
            let proj = &other.null_basis * (other.null_basis.transpose() * &v);
            worst = worst.max((v - proj).amax());
        }
        (worst < 1e-8, worst)
    }

    fn project_affine(&self, s: &RVector) -> RVector {
        let centered = s - &self.s0;
        &self.s0 + &self.q_range * (self.q_range.transpose() * centered)
    }

    fn x_from_s(&self, s: &RVector) -> RVector {
        &self.x_canonical + &self.recover * (s - &self.s0)
    }

    /// Dykstra alternating projections between the affine set and the PSD
    /// cone, starting from the canonical point plus a seeded random
    /// perturbation inside the affine set.
    pub fn probe(&self, ctx: &JoiningContext, seed: u64, max_iter: usize) -> ProbeResult {
        self.probe_with_scale(ctx, seed, max_iter, PERTURBATION_SCALE)
    }

    /// [`ConstraintSystem::probe`] with an explicit relative perturbation
    /// scale. Large scales start outside the PSD cone and exercise the
    /// alternating projections; the default small scale stays near the
    /// canonical point.
    pub fn probe_with_scale(
        &self,
        ctx: &JoiningContext,
        seed: u64,
        max_iter: usize,
        perturbation_scale: f64,
    ) -> ProbeResult {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nd = self.null_dimension();
        let dd = self.coordinate_count();

        let x_start = if nd == 0 {
            self.x_canonical.clone()
        } else {
            let mut z = RVector::zeros(nd);
            for i in 0..nd {
                z[i] = StandardNormal.sample(&mut rng);
            }
            let dir = &self.null_basis * z;
            let dir_norm = dir.norm();
            if dir_norm < 1e-14 {
                self.x_canonical.clone()
            } else {
                let scale = perturbation_scale * self.x_canonical.norm().max(1.0);
                &self.x_canonical + dir * (scale / dir_norm)
            }
        };

        let mut s = &self.psi * &x_start;
        let mut p = RVector::zeros(s.len());
        let mut q = RVector::zeros(s.len());
        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iter {
            iterations += 1;
            let y = project_psd_svec(&(&s + &p), dd);
            p = &s + &p - &y;
            let s_next = self.project_affine(&(&y + &q));
            q = &y + &q - &s_next;
            let step = (&s_next - &s).norm();
            s = s_next;
            if step < DYKSTRA_STOP {
                converged = true;
                break;
            }
        }

        let x = self.x_from_s(&s);
        let values = x_to_values(&x, self.d_left, self.d_right);
        let found = JoiningFunctional::new(ctx.a.algebra().clone(), ctx.b_tilde().clone(), values);
        let affine_residual = self.affine_residual(&found.values);
        let psd_min_eig = found.positivity_min_eig();
        let distance = {
            let canon = x_to_values(&self.x_canonical, self.d_left, self.d_right);
            (&found.values - canon).camax()
        };
        ProbeResult {
            found,
            distance_from_canonical: distance,
            iterations,
            converged,
            affine_residual,
            psd_min_eig,
            seed,
        }
    }
}

/// Outcome of one Dykstra probe.
pub struct ProbeResult {
    pub found: JoiningFunctional,
    pub distance_from_canonical: f64,
    pub iterations: usize,
    pub converged: bool,
    pub affine_residual: f64,
    pub psd_min_eig: f64,
    pub seed: u64,
}

fn values_to_x(values: &CMatrix) -> RVector {
    let (da, db) = values.shape();
    let dd = da * db;
    let mut x = RVector::zeros(2 * dd);
    for i in 0..da {
        for j in 0..db {
            let p = i * db + j;
            x[p] = values[(i, j)].re;
            x[dd + p] = values[(i, j)].im;
        }
    }
    x
}

fn x_to_values(x: &RVector, da: usize, db: usize) -> CMatrix {
    let dd = da * db;
    CMatrix::from_fn(da, db, |i, j| {
        let p = i * db + j;
        crate::linalg::c(x[p], x[dd + p])
    })
}

fn project_psd_svec(s: &RVector, m: usize) -> RVector {
    let h = smat(s.as_slice(), m);
    let clipped = project_psd(&h);
    RVector::from_vec(svec(&clipped))
}

/// Completes the row space of `v_t` to an orthonormal basis of ℝⁿ, returning
/// the missing directions as columns.
fn complete_orthonormal(v_t: &RMatrix) -> RMatrix {
    let n = v_t.ncols();
    let basis: Vec<RVector> = (0..v_t.nrows())
        .map(|r| v_t.row(r).transpose())
        .collect();
    let mut extra: Vec<RVector> = Vec::new();
    for k in 0..n {
        let mut v = RVector::zeros(n);
        v[k] = 1.0;
        for _ in 0..2 {
            for b in basis.iter().chain(extra.iter()) {
                let coeff = b.dot(&v);
                v -= b * coeff;
            }
        }
        let nrm = v.norm();
        if nrm > 1e-10 {
            extra.push(v / nrm);
        }
    }
    let mut out = RMatrix::zeros(n, extra.len());
    for (k, v) in extra.iter().enumerate() {
        out.set_column(k, v);
    }
    out
}

/// A witness pair from nested subsystems: μ⊙_ψν̃ over the larger common
/// modular subsystem R and μ⊙_λν̃ over F ⊊ R, with their restrictions to
/// R ⊙ R̃ compared.
#[derive(Debug)]
pub struct NestedWitness {
    pub over_r: JoiningFunctional,
    pub over_f: JoiningFunctional,
    pub ctx_f: JoiningContext,
    pub ctx_r: JoiningContext,
    /// Max coordinate difference of the two restrictions to R ⊙ R̃.
    pub restriction_difference: f64,
}

/// Builds the witness pair for common modular subsystems F ⊂ R of A and B,
/// given F → R and the two R-embeddings (η = θ|_F is derived by
/// composition). Errors if F and R are span-equal.
pub fn nested_witness(
    f_in_r: &crate::joinings::SubsystemEmbedding,
    r_in_a: &crate::joinings::SubsystemEmbedding,
    r_in_b: &crate::joinings::SubsystemEmbedding,
) -> Result<NestedWitness> {
    if f_in_r.sub().algebra().dim() == r_in_a.sub().algebra().dim() {
        return Err(WStarError::DegenerateInput(
            "F and R have equal dimension; the witness needs strict containment".into(),
        ));
    }
    let f_in_a = crate::joinings::SubsystemEmbedding::compose(r_in_a, f_in_r)?;
    let f_in_b = crate::joinings::SubsystemEmbedding::compose(r_in_b, f_in_r)?;

    let ctx_r = JoiningContext::new(r_in_a.clone(), r_in_b.clone())?;
    let ctx_f = JoiningContext::new(f_in_a, f_in_b)?;

    let over_r = ctx_r.relative_joining();
    let over_f = ctx_f.relative_joining();

    let za = r_in_a.map();
    let zr_tilde = ctx_r.eta.f_tilde.map();
    let diff = za.transpose() * (&over_r.values - &over_f.values) * zr_tilde;
    let restriction_difference = diff.camax();

    Ok(NestedWitness {
        over_r,
        over_f,
        ctx_f,
        ctx_r,
        restriction_difference,
    })
}
