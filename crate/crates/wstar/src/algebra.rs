//! Finite-dimensional *-subalgebras of complex matrices.
//!
//! A [`MatrixAlgebra`] is a unital *-subalgebra of the n×n matrices, stored
//! through an orthonormal basis with respect to the normalized trace inner
//! product ⟨x, y⟩ = Tr(x†y)/n. At finite dimension these are exactly the von
//! Neumann algebras acting on ℂⁿ, and the double commutant property holds as
//! a span identity, which [`MatrixAlgebra::validate`] checks numerically.

use crate::error::{Result, WStarError};
use crate::linalg::{
    cr, identity, kron, max_column_residual, nullspace, CMatrix, CVector, RANK_CUTOFF,
};

/// A unital *-subalgebra of M_n(ℂ) given by a trace-orthonormal basis.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    ambient_dim: usize,
    basis: Vec<CMatrix>,
    identity_coords: CVector,
    /// coords(a†) = adjoint_mat · conj(coords(a))
    adjoint_mat: CMatrix,
}

/// Normalized trace inner product ⟨x, y⟩ = Tr(x†y)/n on M_n.
pub fn trace_ip(x: &CMatrix, y: &CMatrix) -> num_complex::Complex64 {
    let n = x.nrows();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for j in 0..x.ncols() {
        for i in 0..n {
            acc += x[(i, j)].conj() * y[(i, j)];
        }
    }
    acc / cr(n as f64)
}

fn trace_norm(x: &CMatrix) -> f64 {
    trace_ip(x, x).re.max(0.0).sqrt()
}

/// Modified Gram-Schmidt over matrices under the normalized trace inner
/// product, dropping residuals below `cutoff`. Orthogonalizes twice.
fn mgs_matrices(candidates: &[CMatrix], existing: &mut Vec<CMatrix>, cutoff: f64) {
    for cand in candidates {
        let mut v = cand.clone();
        for _ in 0..2 {
            for b in existing.iter() {
                let coeff = trace_ip(b, &v);
                v -= b * coeff;
            }
        }
        let n = trace_norm(&v);
        if n > cutoff {
            existing.push(v / cr(n));
        }
    }
}

impl MatrixAlgebra {
    /// The smallest unital *-subalgebra of M_n containing the generators.
    ///
    /// If the generator list is already a trace-orthonormal basis of a closed
    /// unital *-algebra it is used verbatim, which makes the construction
    /// idempotent basis-for-basis (serialized algebras reload with identical
    /// coordinates).
    pub fn generate(ambient_dim: usize, generators: &[CMatrix]) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(WStarError::DimensionMismatch {
                context: "ambient dimension".into(),
                expected: 1,
                got: 0,
            });
        }
        for (k, g) in generators.iter().enumerate() {
            if g.shape() != (ambient_dim, ambient_dim) {
                return Err(WStarError::DimensionMismatch {
                    context: format!("generator {k}"),
                    expected: ambient_dim,
                    got: g.nrows(),
                });
            }
        }
        if let Ok(alg) = Self::from_orthonormal_basis(ambient_dim, generators.to_vec()) {
            return Ok(alg);
        }

        let mut basis: Vec<CMatrix> = Vec::new();
        let mut seed = vec![identity(ambient_dim)];
        for g in generators {
            seed.push(g.clone());
            seed.push(g.adjoint());
        }
        mgs_matrices(&seed, &mut basis, RANK_CUTOFF);

        let max_passes = ambient_dim * ambient_dim;
        let mut passes = 0;
        loop {
            let before = basis.len();
            let mut products = Vec::new();
            for x in &basis {
                for y in &basis {
                    products.push(x * y);
                }
            }
            mgs_matrices(&products, &mut basis, RANK_CUTOFF);
            if basis.len() == before {
                break;
            }
            passes += 1;
            if passes > max_passes {
                return Err(WStarError::SpanClosureOverflow {
                    max_passes,
                    ambient: ambient_dim,
                });
            }
        }
        Ok(Self::assemble(ambient_dim, basis))
    }

    /// Wraps a list of matrices as an algebra basis, verbatim, after checking
    /// it is trace-orthonormal, closed, and spans the identity.
    pub fn from_orthonormal_basis(ambient_dim: usize, basis: Vec<CMatrix>) -> Result<Self> {
        if basis.is_empty() {
            return Err(WStarError::NotInSpan { residual: 1.0 });
        }
        for b in &basis {
            if b.shape() != (ambient_dim, ambient_dim) {
                return Err(WStarError::DimensionMismatch {
                    context: "basis element".into(),
                    expected: ambient_dim,
                    got: b.nrows(),
                });
            }
        }
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let ip = trace_ip(x, y);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - cr(expect)).norm() > 1e-10 {
                    return Err(WStarError::NotInSpan { residual: (ip - cr(expect)).norm() });
                }
            }
        }
        let alg = Self::assemble(ambient_dim, basis);
        let checks = alg.closure_residuals();
        if checks.adjoint > 1e-9 || checks.multiplication > 1e-9 || checks.identity > 1e-9 {
            return Err(WStarError::NotInSpan {
                residual: checks.adjoint.max(checks.multiplication).max(checks.identity),
            });
        }
        Ok(alg)
    }

    fn assemble(ambient_dim: usize, basis: Vec<CMatrix>) -> Self {
        let d = basis.len();
        let ident = identity(ambient_dim);
        let identity_coords = CVector::from_iterator(d, basis.iter().map(|b| trace_ip(b, &ident)));
        let mut adjoint_mat = CMatrix::zeros(d, d);
        for (j, b) in basis.iter().enumerate() {
            let adj = b.adjoint();
            for i in 0..d {
                adjoint_mat[(i, j)] = trace_ip(&basis[i], &adj);
            }
        }
        Self {
            ambient_dim,
            basis,
            identity_coords,
            adjoint_mat,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn identity_coords(&self) -> &CVector {
        &self.identity_coords
    }

    /// Coordinates of an ambient matrix relative to the basis (orthogonal
    /// projection; meaningful when the matrix lies in the span).
    pub fn coords(&self, m: &CMatrix) -> CVector {
        CVector::from_iterator(self.dim(), self.basis.iter().map(|b| trace_ip(b, m)))
    }

    /// Coordinates together with the off-span residual norm.
    pub fn coords_checked(&self, m: &CMatrix) -> (CVector, f64) {
        let coords = self.coords(m);
        let recon = self.expand(&coords);
        let resid = trace_norm(&(m - recon));
        (coords, resid)
    }

    /// Σᵢ cᵢ bᵢ.
    pub fn expand(&self, coords: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (i, b) in self.basis.iter().enumerate() {
            out += b * coords[i];
        }
        out
    }

    /// coords(a†) for a given by coords.
    pub fn adjoint_coords(&self, coords: &CVector) -> CVector {
        &self.adjoint_mat * coords.map(|z| z.conj())
    }

    pub fn adjoint_mat(&self) -> &CMatrix {
        &self.adjoint_mat
    }

    /// Left-multiplication superoperator on basis coordinates:
    /// M(a)ᵢⱼ = ⟨bᵢ, a·bⱼ⟩.
    pub fn mult_superop(&self, a: &CMatrix) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            let prod = a * &self.basis[j];
            for i in 0..d {
                m[(i, j)] = trace_ip(&self.basis[i], &prod);
            }
        }
        m
    }

    /// Coordinates of bᵢ·bⱼ.
    pub fn prod_coords(&self, i: usize, j: usize) -> CVector {
        self.coords(&(&self.basis[i] * &self.basis[j]))
    }

    /// Commutant {x ∈ M_n : xb = bx for all b in the algebra}, computed as
    /// the SVD null space of the stacked commutator map.
    pub fn commutant(&self) -> Self {
        let n = self.ambient_dim;
        let n2 = n * n;
        let mut stacked = CMatrix::zeros(self.dim() * n2, n2);
        for (k, b) in self.basis.iter().enumerate() {
            // vec(XB − BX) = (Bᵀ ⊗ I − I ⊗ B) vec(X), column-major vec.
            let block = kron(&b.transpose(), &identity(n)) - kron(&identity(n), b);
            stacked.view_mut((k * n2, 0), (n2, n2)).copy_from(&block);
        }
        let null = nullspace(&stacked, RANK_CUTOFF);
        let mut basis = Vec::with_capacity(null.ncols());
        for j in 0..null.ncols() {
            let col = null.column(j);
            let mut m = CMatrix::zeros(n, n);
            for cidx in 0..n {
                for ridx in 0..n {
                    m[(ridx, cidx)] = col[cidx * n + ridx];
                }
            }
            // Null space columns are Frobenius-orthonormal; rescale to the
            // normalized trace norm.
            basis.push(m * cr((n as f64).sqrt()));
        }
        Self::assemble(n, basis)
    }

    /// Span of Kronecker products of the two bases inside M_{nm}.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(kron(a, b));
            }
        }
        Self::assemble(self.ambient_dim * other.ambient_dim, basis)
    }

    /// Whether every basis element of `inner` lies in this algebra's span,
    /// together with the largest projection residual seen.
    pub fn contains(&self, inner: &Self) -> Result<(bool, f64)> {
        if inner.ambient_dim != self.ambient_dim {
            return Err(WStarError::DimensionMismatch {
                context: "contains".into(),
                expected: self.ambient_dim,
                got: inner.ambient_dim,
            });
        }
        let mut worst = 0.0f64;
        for b in &inner.basis {
            let (_, resid) = self.coords_checked(b);
            worst = worst.max(resid);
        }
        Ok((worst < RANK_CUTOFF, worst))
    }

    /// Span equality, reported as mutual containment with the larger residual.
    pub fn span_equal(&self, other: &Self) -> (bool, f64) {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return (false, f64::INFINITY);
        }
        let a = self.contains(other).map(|(_, r)| r).unwrap_or(f64::INFINITY);
        let b = other.contains(self).map(|(_, r)| r).unwrap_or(f64::INFINITY);
        let worst = a.max(b);
        (worst < RANK_CUTOFF, worst)
    }

    /// Residuals for the defining invariants: adjoint closure, multiplicative
    /// closure, and identity membership.
    pub fn closure_residuals(&self) -> ClosureResiduals {
        let mut adjoint = 0.0f64;
        for b in &self.basis {
            let (_, r) = self.coords_checked(&b.adjoint());
            adjoint = adjoint.max(r);
        }
        let mut multiplication = 0.0f64;
        for x in &self.basis {
            for y in &self.basis {
                let (_, r) = self.coords_checked(&(x * y));
                multiplication = multiplication.max(r);
            }
        }
        let ident = identity(self.ambient_dim);
        let (_, identity_resid) = self.coords_checked(&ident);
        ClosureResiduals {
            adjoint,
            multiplication,
            identity: identity_resid,
        }
    }

    /// Full invariant check including the double commutant property.
    pub fn validate(&self) -> Result<ClosureResiduals> {
        let res = self.closure_residuals();
        if res.adjoint > RANK_CUTOFF || res.multiplication > RANK_CUTOFF {
            return Err(WStarError::NotInSpan {
                residual: res.adjoint.max(res.multiplication),
            });
        }
        if res.identity > RANK_CUTOFF {
            return Err(WStarError::NotInSpan { residual: res.identity });
        }
        let bicomm = self.commutant().commutant();
        let (ok, resid) = self.span_equal(&bicomm);
        if !ok {
            return Err(WStarError::Internal(format!(
                "double commutant mismatch: dim {} vs {}, residual {resid:.3e}",
                self.dim(),
                bicomm.dim()
            )));
        }
        Ok(res)
    }

    /// Orthonormal coordinate matrix (d_host × d_inner) of `inner`'s basis
    /// inside this algebra; errors if `inner` is not contained.
    pub fn subalgebra_coords(&self, inner: &Self) -> Result<CMatrix> {
        let (ok, resid) = self.contains(inner)?;
        if !ok {
            return Err(WStarError::ContainmentFailed { residual: resid });
        }
        let mut z = CMatrix::zeros(self.dim(), inner.dim());
        for (j, b) in inner.basis.iter().enumerate() {
            z.set_column(j, &self.coords(b));
        }
        Ok(z)
    }
}

/// Residuals from the closure invariants of a [`MatrixAlgebra`].
#[derive(Debug, Clone, Copy)]
pub struct ClosureResiduals {
    pub adjoint: f64,
    pub multiplication: f64,
    pub identity: f64,
}

/// Orthonormal span basis (in coordinate space ℂ^d of some host algebra)
/// for a list of coordinate vectors.
pub fn coord_span(vectors: &[CVector], cutoff: f64) -> CMatrix {
    crate::linalg::mgs_columns(vectors, cutoff)
}

/// The span residual of coordinate vector `x` against the coordinate span `q`.
pub fn coord_span_residual(q: &CMatrix, x: &CVector) -> f64 {
    crate::linalg::subspace_residual(q, x)
}

/// Largest residual of the columns of `b` against the span `q`.
pub fn coord_span_max_residual(q: &CMatrix, b: &CMatrix) -> f64 {
    max_column_residual(q, b)
}
