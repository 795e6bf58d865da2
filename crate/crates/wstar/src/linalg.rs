//! Dense complex linear algebra helpers shared across the crate.
//!
//! Everything here works on `nalgebra` dynamic matrices over `Complex64`.
//! Hermitian eigendecompositions and SVDs are the only factorizations used;
//! all spectral functions (square roots, logs, complex powers) go through
//! [`eigh`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Rank cutoff used for span decisions (Gram-Schmidt residuals, SVD null spaces).
pub const RANK_CUTOFF: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// (m + m†)/2, forcing exact Hermitian symmetry before eigendecomposition.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub struct Eigh {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors, in the same order.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a (numerically) Hermitian matrix.
pub fn eigh(m: &CMatrix) -> Eigh {
    let se = hermitize(m).symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    Eigh { values, vectors }
}

/// Applies a scalar function to a Hermitian matrix through its spectrum.
pub fn hermitian_fn(m: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let e = eigh(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        e.values.len(),
        e.values.iter().map(|&x| f(x)),
    ));
    &e.vectors * d * e.vectors.adjoint()
}

/// Square root of a positive semidefinite matrix (negative noise clipped to 0).
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |x| cr(x.max(0.0).sqrt()))
}

/// Inverse square root of a positive definite matrix.
pub fn inv_sqrt_pd(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |x| cr(1.0 / x.max(f64::MIN_POSITIVE).sqrt()))
}

/// Matrix logarithm of a positive definite matrix, flooring eigenvalues.
pub fn log_pd(m: &CMatrix, floor: f64) -> CMatrix {
    hermitian_fn(m, |x| cr(x.max(floor).ln()))
}

/// m^{it} for Hermitian positive definite m.
pub fn power_it(m: &CMatrix, t: f64, floor: f64) -> CMatrix {
    hermitian_fn(m, |x| {
        let l = x.max(floor).ln();
        c(0.0, t * l).exp()
    })
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eig(m: &CMatrix) -> f64 {
    eigh(m).values.first().copied().unwrap_or(0.0)
}

/// Orthonormal basis (as matrix columns) for the null space of `m`,
/// keeping directions whose singular value is below `cutoff * max(1, σ_max)`.
pub fn nullspace(m: &CMatrix, cutoff: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    // nalgebra's SVD is thin; pad wide matrices so V comes back square.
    let work = if rows < cols {
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let thr = cutoff * smax.max(1.0);
    let mut null_cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= thr)
        .collect();
    // v_t has `cols` rows here; rows beyond the singular value list are null too.
    null_cols.extend(svd.singular_values.len()..v_t.nrows());
    let mut out = CMatrix::zeros(cols, null_cols.len());
    for (k, &i) in null_cols.iter().enumerate() {
        out.set_column(k, &v_t.row(i).adjoint());
    }
    out
}

/// Least-squares solve via SVD pseudo-inverse with the standard rank cutoff.
pub fn solve_lsq(a: &CMatrix, b: &CVector) -> CVector {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd u");
    let v_t = svd.v_t.as_ref().expect("svd v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let thr = RANK_CUTOFF * smax.max(1.0);
    let ub = u.adjoint() * b;
    let mut y = CVector::zeros(v_t.nrows());
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] > thr {
            y[i] = ub[i] / cr(svd.singular_values[i]);
        }
    }
    v_t.adjoint() * y
}

/// Modified Gram-Schmidt over column vectors with the standard inner product.
///
/// Returns a matrix with orthonormal columns spanning the input, dropping
/// candidates whose residual norm after projection falls below `cutoff`.
/// Each vector is orthogonalized twice for stability near the cutoff.
pub fn mgs_columns(candidates: &[CVector], cutoff: f64) -> CMatrix {
    let dim = candidates.first().map(|v| v.len()).unwrap_or(0);
    let mut basis: Vec<CVector> = Vec::new();
    for cand in candidates {
        let mut v = cand.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&v);
                v -= b * coeff;
            }
        }
        let n = v.norm();
        if n > cutoff {
            basis.push(v / cr(n));
        }
    }
    let mut out = CMatrix::zeros(dim, basis.len());
    for (k, b) in basis.iter().enumerate() {
        out.set_column(k, b);
    }
    out
}

/// ‖x − QQᴴx‖ for Q with orthonormal columns.
pub fn subspace_residual(q: &CMatrix, x: &CVector) -> f64 {
    let p = q * (q.adjoint() * x);
    (x - p).norm()
}

/// Largest residual of any column of `b` against the span of `q`'s columns.
pub fn max_column_residual(q: &CMatrix, b: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..b.ncols() {
        let col = CVector::from_column_slice(b.column(j).as_slice());
        worst = worst.max(subspace_residual(q, &col));
    }
    worst
}

/// Mutual containment residual between two subspaces given by orthonormal columns.
pub fn mutual_containment(q1: &CMatrix, q2: &CMatrix) -> f64 {
    max_column_residual(q1, q2).max(max_column_residual(q2, q1))
}

/// Real vectorization of a Hermitian m×m matrix, isometric for the Frobenius
/// inner product: diagonal entries, then √2·Re and √2·Im of the upper triangle.
pub fn svec(h: &CMatrix) -> Vec<f64> {
    let m = h.nrows();
    let sq2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        out.push(h[(i, i)].re);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            out.push(sq2 * h[(i, j)].re);
            out.push(sq2 * h[(i, j)].im);
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], m: usize) -> CMatrix {
    let sq2 = std::f64::consts::SQRT_2;
    let mut h = CMatrix::zeros(m, m);
    for i in 0..m {
        h[(i, i)] = cr(v[i]);
    }
    let mut k = m;
    for i in 0..m {
        for j in (i + 1)..m {
            let re = v[k] / sq2;
            let im = v[k + 1] / sq2;
            k += 2;
            h[(i, j)] = c(re, im);
            h[(j, i)] = c(re, -im);
        }
    }
    h
}

/// Frobenius projection of a Hermitian matrix onto the PSD cone.
pub fn project_psd(h: &CMatrix) -> CMatrix {
    hermitian_fn(h, |x| cr(x.max(0.0)))
}

/// Splits each block (orthonormal columns) along the eigenspaces of the
/// compressed Hermitian matrix QᴴhQ, clustering eigenvalues closer than
/// `cluster_tol`.
pub fn refine_blocks(blocks: Vec<CMatrix>, h: &CMatrix, cluster_tol: f64) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for q in blocks {
        if q.ncols() == 1 {
            out.push(q);
            continue;
        }
        let compressed = hermitize(&(q.adjoint() * h * &q));
        let e = eigh(&compressed);
        let mut start = 0;
        for i in 1..=e.values.len() {
            let split = i == e.values.len() || e.values[i] - e.values[i - 1] > cluster_tol;
            if split {
                let cols = e.vectors.columns(start, i - start).into_owned();
                out.push(&q * cols);
                start = i;
            }
        }
    }
    out
}

/// Joint eigenspaces of a commuting family of unitaries, by sequential
/// eigenspace refinement over the Hermitian and skew-Hermitian parts of each
/// unitary. Each returned block carries orthonormal columns, every column is
/// a joint eigenvector, and the blocks together span the whole space.
pub fn joint_eigenspaces_of_unitaries(us: &[CMatrix], cluster_tol: f64) -> Vec<CMatrix> {
    let dim = us.first().map(|u| u.nrows()).unwrap_or(0);
    let mut blocks = vec![identity(dim)];
    for u in us {
        let re = hermitize(u);
        let im = hermitize(&u.map(|z| z * c(0.0, -1.0)));
        blocks = refine_blocks(blocks, &re, cluster_tol);
        blocks = refine_blocks(blocks, &im, cluster_tol);
    }
    blocks
}
