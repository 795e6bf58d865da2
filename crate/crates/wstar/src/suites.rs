//! Verification suites: paper-anchored fixtures and seeded property runs,
//! exposed both to the CLI `suite` command and to the acceptance tests.

use std::sync::Arc;

use crate::algebra::MatrixAlgebra;
use crate::disjointness::{nested_witness, ConstraintSystem};
use crate::dynamics::{
    classify, compact_subalgebra, eigen_decomposition, fixed_point_algebra, fixed_space_check,
    unitary_rep, GroupAction, GroupSpec, WStarSystem,
};
use crate::error::{Result, WStarError};
use crate::gns::{is_modular_invariant, modular_conjugation_subspace_check, FaithfulState};
use crate::joinings::{joining_geometry, JoiningContext, SubsystemEmbedding};
use crate::linalg::{cr, CMatrix, CVector};
use crate::oracle::classical_relative_joining;
use crate::report::{timed, Report, Tolerances};
use crate::sampler::{
    self, diagonal_algebra, gibbs_m2, random_classical_fixture, random_modular_triple,
    random_system, random_z_system, trivial_embedding, weyl_system, Profile,
};

/// Builds the diagonal subsystem of the Gibbs fixture with the restricted
/// state and identity dynamics.
fn gibbs_diagonal_subsystem(host: &WStarSystem) -> WStarSystem {
    let alg = diagonal_algebra(2);
    let state = FaithfulState::new(alg.clone(), host.state().density().clone()).unwrap();
    let group = host.action().group().clone();
    WStarSystem::new(state, GroupAction::identity_action(group, alg.dim())).unwrap()
}

/// Criterion 1: the Gibbs fixture has A^α = diagonal (dim 2), A^K = M₂
/// (dim 4), and classifies as non-ergodic but relatively ergodic with
/// respect to the diagonal.
pub fn criterion_gibbs(tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new("criterion 1: Gibbs fixture");
        let sys = gibbs_m2();
        let gns = sys.state().gns();

        let fixed = fixed_point_algebra(&sys).unwrap();
        rep.check_flag(
            "fixed point algebra dim = 2",
            fixed.algebra.dim() as f64 - 2.0,
            0.0,
            fixed.algebra.dim() == 2,
        );
        let diag = diagonal_algebra(2);
        let (_, span_resid) = fixed.algebra.span_equal(&diag);
        rep.check_le("fixed points span the diagonal", span_resid, tols.derived());

        let compact = compact_subalgebra(&sys, &gns).unwrap();
        rep.check_flag(
            "compact subalgebra dim = 4",
            compact.algebra.dim() as f64 - 4.0,
            0.0,
            compact.algebra.dim() == 4,
        );
        let (_, comp_resid) = compact.algebra.span_equal(sys.algebra());
        rep.check_le("compact subalgebra spans M2", comp_resid, tols.derived());

        let cls = classify(&sys, Some(&diag)).unwrap();
        rep.check_flag("non-ergodic", 0.0, 0.0, !cls.ergodic);
        rep.check_flag(
            "relatively ergodic wrt diagonal",
            0.0,
            0.0,
            cls.relatively_ergodic == Some(true),
        );
        rep
    })
}

/// Criterion 2: on seeded random triples (A, B, common modular F), the
/// relatively independent joining passes positivity, both marginals,
/// generator invariance, and the restriction to Δ_λ.
pub fn criterion_joining_suite(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("criterion 2: joining construction suite ({count} triples)"));
        let mut passes = 0usize;
        let mut worst = 0.0f64;
        for k in 0..count {
            let triple = random_modular_triple(seed + k as u64);
            let ctx = JoiningContext::new(triple.emb_a, triple.emb_b).unwrap();
            let w = ctx.relative_joining();
            let check = ctx.verify(&w);
            let violation = check.max_violation();
            worst = worst.max(violation);
            if check.is_joining_over_f(tols.geometry()) {
                passes += 1;
            } else {
                rep.note(format!("seed {}: violation {violation:.3e}", seed + k as u64));
            }
        }
        rep.check_flag(
            format!("{passes}/{count} joinings verified"),
            worst,
            tols.geometry(),
            passes == count,
        );
        rep
    })
}

/// Criterion 3: with F = ℂ the relative joining equals the product coupling
/// coordinatewise.
pub fn criterion_trivial_product(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("criterion 3: trivial F gives the product ({count} pairs)"));
        let mut passes = 0usize;
        let mut worst = 0.0f64;
        for k in 0..count {
            let a = random_z_system(seed + 2 * k as u64);
            let b = random_z_system(seed + 2 * k as u64 + 1);
            let ctx =
                JoiningContext::new(trivial_embedding(&a), trivial_embedding(&b)).unwrap();
            let w = ctx.relative_joining();
            let product = ctx.product_coupling();
            let diff = w.max_coordinate_difference(&product);
            worst = worst.max(diff);
            if diff < tols.exactness() {
                passes += 1;
            } else {
                rep.note(format!("seed {}: difference {diff:.3e}", seed + k as u64));
            }
        }
        rep.check_flag(
            format!("{passes}/{count} products matched"),
            worst,
            tols.exactness(),
            passes == count,
        );
        rep
    })
}

/// The nested witness pair on the Gibbs fixture: F = ℂ ⊊ R = A^α.
pub fn gibbs_witness() -> Result<crate::disjointness::NestedWitness> {
    let a = gibbs_m2();
    let r_sys = gibbs_diagonal_subsystem(&a);
    let r_in_a = SubsystemEmbedding::inclusion(r_sys.clone(), a.clone())?;
    let r_in_b = SubsystemEmbedding::inclusion(r_sys.clone(), a)?;
    let f_in_r = trivial_embedding(&r_sys);
    nested_witness(&f_in_r, &r_in_a, &r_in_b)
}

/// Criterion 4: both witness joinings lie in J_λ and their restrictions to
/// R ⊙ R̃ differ by more than 1e−3.
pub fn criterion_nested_witness(tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new("criterion 4: nested witness on the Gibbs fixture");
        let witness = gibbs_witness().unwrap();
        let rep_r = witness.ctx_f.verify(&witness.over_r);
        let rep_f = witness.ctx_f.verify(&witness.over_f);
        rep.check_le(
            "joining over R lies in J_lambda",
            rep_r.max_violation(),
            tols.geometry(),
        );
        rep.check_le(
            "joining over F lies in J_lambda",
            rep_f.max_violation(),
            tols.geometry(),
        );
        rep.check_flag(
            "restrictions to R⊙R~ differ",
            witness.restriction_difference,
            1e-3,
            witness.restriction_difference > 1e-3,
        );
        rep
    })
}

/// Criterion 5: for every joining produced in criteria 2-4 the orthogonality
/// verdict agrees with direct functional equality.
pub fn criterion_orthogonality(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new("criterion 5: orthogonality characterization");
        let mut agreements = 0usize;
        let mut total = 0usize;
        let mut worst_iso = 0.0f64;

        // Joinings from criterion 2.
        for k in 0..count {
            let triple = random_modular_triple(seed + k as u64);
            let ctx = JoiningContext::new(triple.emb_a, triple.emb_b).unwrap();
            let w = ctx.relative_joining();
            let geo = joining_geometry(&ctx, &w, tols.geometry()).unwrap();
            total += 1;
            worst_iso = worst_iso.max(geo.iso_residual);
            if geo.verdicts_agree() && geo.verdict_orthogonal {
                agreements += 1;
            } else {
                rep.note(format!(
                    "triple seed {}: orthogonal {} functional {}",
                    seed + k as u64,
                    geo.verdict_orthogonal,
                    geo.verdict_functional
                ));
            }
        }
        // Products from criterion 3.
        for k in 0..20 {
            let a = random_z_system(seed + 2 * k as u64);
            let b = random_z_system(seed + 2 * k as u64 + 1);
            let ctx =
                JoiningContext::new(trivial_embedding(&a), trivial_embedding(&b)).unwrap();
            let w = ctx.relative_joining();
            let geo = joining_geometry(&ctx, &w, tols.geometry()).unwrap();
            total += 1;
            if geo.verdicts_agree() && geo.verdict_orthogonal {
                agreements += 1;
            }
        }
        // The witness pair from criterion 4: the joining over R is not the
        // canonical joining over F, so both verdicts must be negative.
        let witness = gibbs_witness().unwrap();
        let geo = joining_geometry(&witness.ctx_f, &witness.over_r, tols.geometry()).unwrap();
        total += 1;
        if geo.verdicts_agree() && !geo.verdict_orthogonal {
            agreements += 1;
        } else {
            rep.note(format!(
                "witness: orthogonal {} functional {}",
                geo.verdict_orthogonal, geo.verdict_functional
            ));
        }
        let geo = joining_geometry(&witness.ctx_f, &witness.over_f, tols.geometry()).unwrap();
        total += 1;
        if geo.verdicts_agree() && geo.verdict_orthogonal {
            agreements += 1;
        }

        rep.check_flag(
            format!("{agreements}/{total} verdicts agree"),
            worst_iso,
            tols.geometry(),
            agreements == total,
        );
        rep
    })
}

/// Criterion 6: A^α is modular-invariant and the joint fixed space of U
/// equals span γ(A^α), on seeded random systems.
pub fn criterion_fixed_points(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("criterion 6: fixed point subsystem suite ({count} systems)"));
        let mut passes = 0usize;
        let mut worst = 0.0f64;
        for k in 0..count {
            let sys = random_system(seed + k as u64, Profile::Generic);
            let gns = sys.state().gns();
            let fixed = fixed_point_algebra(&sys).unwrap();
            let (minv, m_resid) = is_modular_invariant(sys.state(), &gns, &fixed.algebra).unwrap();
            let rep_u = unitary_rep(&sys, &gns);
            let (fs_ok, fs_resid) = fixed_space_check(&sys, &gns, &rep_u, &fixed);
            worst = worst.max(m_resid.max(fs_resid));
            if minv && fs_ok && fs_resid < tols.derived() {
                passes += 1;
            } else {
                rep.note(format!(
                    "seed {}: modular {m_resid:.3e}, fixed-space {fs_resid:.3e}",
                    seed + k as u64
                ));
            }
        }
        rep.check_flag(
            format!("{passes}/{count} systems verified"),
            worst,
            tols.derived(),
            passes == count,
        );
        rep
    })
}

/// Criterion 7: on seeded ergodic systems the state is tracial and every
/// eigenoperator is fixed by the modular flow at t ∈ {0.5, 1, π}.
pub fn criterion_ergodic_tracial(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("criterion 7: ergodic implies tracial suite ({count} systems)"));
        let mut passes = 0usize;
        let mut worst_tracial = 0.0f64;
        let mut worst_fix = 0.0f64;
        for k in 0..count {
            let sys = random_system(seed + k as u64, Profile::Ergodic);
            let gns = sys.state().gns();
            let tracial = sys.state().traciality_residual();
            worst_tracial = worst_tracial.max(tracial);
            let ops = eigen_decomposition(&sys, &gns).unwrap();
            let mut fix = 0.0f64;
            for t in [0.5, 1.0, std::f64::consts::PI] {
                let flow = gns.modular_flow_superop(t);
                for op in &ops {
                    fix = fix.max((&flow * &op.coords - &op.coords).norm());
                }
            }
            worst_fix = worst_fix.max(fix);
            if tracial < tols.derived() && fix < tols.geometry() {
                passes += 1;
            } else {
                rep.note(format!(
                    "seed {}: tracial {tracial:.3e}, eigen-fix {fix:.3e}",
                    seed + k as u64
                ));
            }
        }
        rep.check_le("max traciality residual", worst_tracial, tols.derived());
        rep.check_le("max eigenoperator flow residual", worst_fix, tols.geometry());
        rep.check_flag(
            format!("{passes}/{count} ergodic systems verified"),
            worst_tracial.max(worst_fix),
            tols.geometry(),
            passes == count,
        );
        rep
    })
}

/// The pair used by the disjointness probe: ergodic Weyl on M₂ against
/// the ℂ² identity system over F = ℂ.
pub fn ergodic_probe_context() -> Result<JoiningContext> {
    let a = weyl_system(2, None);
    let alg = diagonal_algebra(2);
    let density = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(0.4), cr(0.6)]));
    let state = FaithfulState::new(alg.clone(), density)?;
    let b = WStarSystem::new(
        state,
        GroupAction::identity_action(GroupSpec::FiniteProduct(vec![2, 2]), alg.dim()),
    )?;
    JoiningContext::new(trivial_embedding(&a), trivial_embedding(&b))
}

/// The Gibbs self-joining context over F = ℂ.
pub fn gibbs_self_context() -> Result<JoiningContext> {
    let a = gibbs_m2();
    JoiningContext::new(trivial_embedding(&a), trivial_embedding(&a))
}

/// Criterion 8: Dykstra probes collapse onto the product for the ergodic ×
/// identity pair, and escape for the non-ergodic Gibbs self-joining.
pub fn criterion_disjointness_probe(seed: u64, max_iter: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new("criterion 8: disjointness probe (evidence, not proof)");

        let ctx = ergodic_probe_context().unwrap();
        let cs = ConstraintSystem::build(&ctx).unwrap();
        let mut collapsed = 0usize;
        let mut worst = 0.0f64;
        for k in 0..20u64 {
            let r = cs.probe(&ctx, seed + k, max_iter);
            worst = worst.max(r.distance_from_canonical);
            if r.converged && r.distance_from_canonical < 1e-6 {
                collapsed += 1;
            }
        }
        rep.check_flag(
            format!("{collapsed}/20 ergodic probes collapse to the product"),
            worst,
            1e-6,
            collapsed == 20,
        );

        let ctx = gibbs_self_context().unwrap();
        let cs = ConstraintSystem::build(&ctx).unwrap();
        let mut escaped = 0usize;
        let mut best = 0.0f64;
        let mut feasible = true;
        for k in 0..20u64 {
            let r = cs.probe(&ctx, seed + k, max_iter);
            if r.converged {
                feasible = feasible
                    && r.affine_residual < tols.probe_feasibility()
                    && r.psd_min_eig > -tols.derived();
                best = best.max(r.distance_from_canonical);
                if r.distance_from_canonical > 1e-3 {
                    escaped += 1;
                }
            }
        }
        rep.check_flag(
            format!("{escaped}/20 Gibbs probes find a second joining"),
            best,
            1e-3,
            escaped >= 1,
        );
        rep.check_flag("probe outputs stay feasible", 0.0, 0.0, feasible);
        rep.note("the universal quantifier over all identity systems is not decidable here");
        rep
    })
}

/// Criterion 9: on random commutative fixtures the relative joining matches
/// the brute-force classical relative product on every matrix-unit pair.
pub fn criterion_classical(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("criterion 9: classical oracle ({count} fixtures)"));
        let mut passes = 0usize;
        let mut worst = 0.0f64;
        for k in 0..count {
            let fixture = random_classical_fixture(seed + k as u64);
            let diff = classical_fixture_oracle_difference(&fixture);
            worst = worst.max(diff);
            if diff < tols.exactness() {
                passes += 1;
            } else {
                rep.note(format!("seed {}: difference {diff:.3e}", seed + k as u64));
            }
        }
        rep.check_flag(
            format!("{passes}/{count} fixtures match the oracle"),
            worst,
            tols.exactness(),
            passes == count,
        );
        rep
    })
}

/// Largest difference between the constructed joining and the classical
/// formula over all matrix-unit pairs of a classical fixture.
pub fn classical_fixture_oracle_difference(fixture: &sampler::ClassicalFixture) -> f64 {
    let ctx = JoiningContext::new(fixture.emb_a.clone(), fixture.emb_b.clone()).unwrap();
    let w = ctx.relative_joining();
    let oracle = classical_relative_joining(
        &fixture.p,
        &fixture.q,
        &fixture.fiber_a,
        &fixture.fiber_b,
        &fixture.r,
    );
    let a_alg = ctx.a.algebra().clone();
    let b_alg = ctx.emb_b.host().algebra().clone();
    let na = fixture.p.len();
    let nb = fixture.q.len();
    let mut worst = 0.0f64;
    for x in 0..na {
        let mut unit_x = CMatrix::zeros(na, na);
        unit_x[(x, x)] = cr(1.0);
        let cx = a_alg.coords(&unit_x);
        for y in 0..nb {
            let mut unit_y = CMatrix::zeros(nb, nb);
            unit_y[(y, y)] = cr(1.0);
            // ẽ_y = j_ν π_ν (e_y) inside B̃.
            let image = ctx.commutant.j_pi(&b_alg.coords(&unit_y));
            let cy = ctx.b_tilde().coords(&image);
            let got = w.evaluate(&cx, &cy);
            worst = worst.max((got - cr(oracle[x][y])).norm());
        }
    }
    worst
}

/// Criterion 10: J H_F = H_F on every modular-invariant subalgebra arising
/// in the other criteria, and Jπ(A)J ⊆ π(A)′ on all GNS constructions.
pub fn criterion_modular_conjugation(seed: u64, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new("criterion 10: modular conjugation checks");
        let mut worst_jhf = 0.0f64;
        let mut worst_tomita = 0.0f64;
        let mut cases = 0usize;

        let mut run = |sys: &WStarSystem, sub: &Arc<MatrixAlgebra>| {
            let gns = sys.state().gns();
            let (ok, r) = modular_conjugation_subspace_check(sys.state(), &gns, sub).unwrap();
            worst_jhf = worst_jhf.max(r);
            let checks = gns.verify(sys.state());
            worst_tomita = worst_tomita.max(checks.tomita_residual);
            cases += 1;
            ok
        };

        // Gibbs fixture: diagonal fixed points and the full compact part.
        let gibbs = gibbs_m2();
        let fixed = fixed_point_algebra(&gibbs).unwrap();
        let mut all = run(&gibbs, &fixed.algebra);
        let gns = gibbs.state().gns();
        let compact = compact_subalgebra(&gibbs, &gns).unwrap();
        all &= run(&gibbs, &compact.algebra);

        // Common subsystems of every random triple used above.
        for k in 0..50 {
            let t = random_modular_triple(seed + k as u64);
            all &= run(t.emb_a.host(), t.emb_a.image());
            all &= run(t.emb_b.host(), t.emb_b.image());
        }
        // Fixed-point algebras of the random systems used above.
        for k in 0..50 {
            let sys = random_system(seed + k as u64, Profile::Generic);
            let fixed = fixed_point_algebra(&sys).unwrap();
            all &= run(&sys, &fixed.algebra);
        }
        // Classical factor images from the oracle fixtures.
        for k in 0..20 {
            let f = random_classical_fixture(seed + k as u64);
            all &= run(f.emb_a.host(), f.emb_a.image());
            all &= run(f.emb_b.host(), f.emb_b.image());
        }

        rep.check_le(
            format!("J H_F = H_F on {cases} modular subalgebras"),
            worst_jhf,
            tols.derived(),
        );
        rep.check_le("Tomita commutation on all GNS data", worst_tomita, tols.derived());
        rep.check_flag("all subspace checks passed", worst_jhf, tols.derived(), all);
        rep
    })
}

/// Probe with F = A = B on the Gibbs fixture: the restriction constraint
/// pins the joining completely, so every probe stays at the canonical point
/// (the compact-subsystem disjointness statement in its degenerate
/// finite-dimensional form, where A^K = A).
pub fn suite_compact_probe(seed: u64, max_iter: usize) -> Report {
    timed(|| {
        let mut rep = Report::new("compact-side probe: F = A^K = A on the Gibbs fixture");
        let a = gibbs_m2();
        let emb = SubsystemEmbedding::inclusion(a.clone(), a.clone()).unwrap();
        let ctx = JoiningContext::new(emb.clone(), emb).unwrap();
        let cs = ConstraintSystem::build(&ctx).unwrap();
        let mut collapsed = 0usize;
        let mut worst = 0.0f64;
        for k in 0..10u64 {
            let r = cs.probe(&ctx, seed + k, max_iter);
            worst = worst.max(r.distance_from_canonical);
            if r.converged && r.distance_from_canonical < 1e-6 {
                collapsed += 1;
            }
        }
        rep.check_flag(
            format!("{collapsed}/10 probes stay at the canonical joining"),
            worst,
            1e-6,
            collapsed == 10,
        );
        rep
    })
}

/// A system whose action is its own modular flow is compact, so if it is
/// also ergodic it must be trivial at finite dimension.
pub fn suite_modular_ergodicity(seed: u64, count: usize) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("modular-dynamics ergodicity check ({count} systems)"));
        let mut ok = 0usize;
        for k in 0..count {
            let sys = random_system(seed + k as u64, Profile::GibbsLike);
            let cls = classify(&sys, None).unwrap();
            if !cls.ergodic || cls.trivial {
                ok += 1;
            } else {
                rep.note(format!("seed {}: ergodic non-trivial modular system", seed + k as u64));
            }
        }
        rep.check_flag(
            format!("{ok}/{count} systems consistent"),
            0.0,
            0.0,
            ok == count,
        );
        rep
    })
}

/// Eigenoperator product law: uv is zero or an eigenoperator with the
/// product character, on random abelian systems.
pub fn suite_eigen_products(seed: u64, count: usize, tols: &Tolerances) -> Report {
    timed(|| {
        let mut rep = Report::new(format!("eigenoperator product law ({count} systems)"));
        let mut worst = 0.0f64;
        let mut ok = true;
        for k in 0..count {
            let sys = random_z_system(seed + k as u64);
            let gns = sys.state().gns();
            let ops = eigen_decomposition(&sys, &gns).unwrap();
            let alg = sys.algebra();
            let theta = &sys.action().generators()[0];
            for u in &ops {
                for v in &ops {
                    let prod = &u.matrix * &v.matrix;
                    let (coords, _) = alg.coords_checked(&prod);
                    if gns.gamma_of(&coords).norm() < 1e-8 {
                        continue;
                    }
                    let chi = u.character(0) * v.character(0);
                    let moved = alg.expand(&(theta * &coords));
                    let resid = (moved - prod * chi).camax();
                    worst = worst.max(resid);
                    ok &= resid < tols.geometry();
                }
            }
        }
        rep.check_flag("products carry product characters", worst, tols.geometry(), ok);
        rep
    })
}

/// Named suite profiles for the CLI.
pub fn run_profile(
    profile: &str,
    seed: u64,
    count: Option<usize>,
    max_iter: usize,
    tols: &Tolerances,
) -> Result<Vec<Report>> {
    let reports = match profile {
        "gibbs" => vec![criterion_gibbs(tols)],
        "joining-suite" => vec![criterion_joining_suite(seed, count.unwrap_or(50), tols)],
        "trivial-product" => vec![criterion_trivial_product(seed, count.unwrap_or(20), tols)],
        "nested-witness" => vec![criterion_nested_witness(tols)],
        "orthogonality" => vec![criterion_orthogonality(seed, count.unwrap_or(50), tols)],
        "fixed-points" => vec![criterion_fixed_points(seed, count.unwrap_or(50), tols)],
        "ergodic-tracial" => vec![criterion_ergodic_tracial(seed, count.unwrap_or(100), tols)],
        "disjointness-probe" => vec![criterion_disjointness_probe(seed, max_iter, tols)],
        "classical" => vec![criterion_classical(seed, count.unwrap_or(20), tols)],
        "modular-conjugation" => vec![criterion_modular_conjugation(seed, tols)],
        "compact-probe" => vec![suite_compact_probe(seed, max_iter)],
        "modular-ergodicity" => vec![suite_modular_ergodicity(seed, count.unwrap_or(25))],
        "eigen-products" => vec![suite_eigen_products(seed, count.unwrap_or(10), tols)],
        "acceptance" => run_acceptance(seed, max_iter, tols),
        other => {
            return Err(WStarError::Parse(format!(
                "unknown suite profile {other:?}; known: gibbs, joining-suite, trivial-product, \
                 nested-witness, orthogonality, fixed-points, ergodic-tracial, \
                 disjointness-probe, classical, modular-conjugation, compact-probe, \
                 modular-ergodicity, eigen-products, acceptance"
            )))
        }
    };
    Ok(reports)
}

/// The ten acceptance criteria in order.
pub fn run_acceptance(seed: u64, max_iter: usize, tols: &Tolerances) -> Vec<Report> {
    vec![
        criterion_gibbs(tols),
        criterion_joining_suite(seed, 50, tols),
        criterion_trivial_product(seed, 20, tols),
        criterion_nested_witness(tols),
        criterion_orthogonality(seed, 50, tols),
        criterion_fixed_points(seed, 50, tols),
        criterion_ergodic_tracial(seed, 100, tols),
        criterion_disjointness_probe(seed, max_iter, tols),
        criterion_classical(seed, 20, tols),
        criterion_modular_conjugation(seed, tols),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjointness::DEFAULT_MAX_ITER;

    #[test]
    fn gibbs_criterion_passes() {
        let rep = criterion_gibbs(&Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn small_joining_suite_slice_passes() {
        let rep = criterion_joining_suite(0, 8, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn small_trivial_product_slice_passes() {
        let rep = criterion_trivial_product(0, 5, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn witness_criterion_passes() {
        let rep = criterion_nested_witness(&Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn small_fixed_point_slice_passes() {
        let rep = criterion_fixed_points(0, 10, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn small_ergodic_tracial_slice_passes() {
        let rep = criterion_ergodic_tracial(0, 10, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn small_classical_slice_passes() {
        let rep = criterion_classical(0, 5, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn compact_probe_passes() {
        let rep = suite_compact_probe(0, DEFAULT_MAX_ITER);
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn modular_ergodicity_passes() {
        let rep = suite_modular_ergodicity(0, 10);
        assert!(rep.all_pass(), "{}", rep.render_table());
    }

    #[test]
    fn eigen_products_pass() {
        let rep = suite_eigen_products(0, 5, &Tolerances::default());
        assert!(rep.all_pass(), "{}", rep.render_table());
    }
}
