//! Brute-force classical reference formulas, kept independent of the
//! operator-algebra pipeline: everything here is elementary measure
//! arithmetic over finite point sets.

/// The classical relatively independent joining of (X, p) and (Y, q) over a
/// common factor Z: m(x, y) = [z(x) = z(y)] · p(x)·q(y) / r(z(x)), summing
/// the product of conditional measures over the shared fiber.
pub fn classical_relative_joining(
    p: &[f64],
    q: &[f64],
    fiber_x: &[usize],
    fiber_y: &[usize],
    r: &[f64],
) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; q.len()]; p.len()];
    for (x, &zx) in fiber_x.iter().enumerate() {
        for (y, &zy) in fiber_y.iter().enumerate() {
            if zx == zy {
                m[x][y] = p[x] * q[y] / r[zx];
            }
        }
    }
    m
}

/// Classical conditional expectation onto the factor: averages over fibers,
/// E(f)(z) = Σ_{x: z(x)=z} p(x) f(x) / r(z).
pub fn classical_conditional_expectation(
    f: &[f64],
    p: &[f64],
    fiber_x: &[usize],
    r: &[f64],
) -> Vec<f64> {
    let mut out = vec![0.0; r.len()];
    for (x, &z) in fiber_x.iter().enumerate() {
        out[z] += p[x] * f[x] / r[z];
    }
    out
}
