//! Batch command-line front end: loads a workspace file, dispatches to the
//! library, and renders check reports as tables or JSON.
//!
//! Exit codes: 0 when all checks pass, 1 when a check fails, 2 on input or
//! validation errors.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::disjointness::{nested_witness, ConstraintSystem, DEFAULT_MAX_ITER};
use crate::dynamics::{
    classify, compact_subalgebra, eigen_decomposition, fixed_point_algebra, fixed_space_check,
    unitary_rep,
};
use crate::error::{Result, WStarError};
use crate::gns::{conditional_expectation, is_modular_invariant, modular_conjugation_subspace_check};
use crate::joinings::{joining_geometry, CommutantSystem, JoiningContext, JoiningFunctional};
use crate::linalg::{cr, eigh, identity, CVector};
use crate::report::{timed, Report, Tolerances};
use crate::sampler::{random_system, Profile};
use crate::suites::run_profile;
use crate::workspace::{
    joining_to_json, joining_values_from_json, workspace_of_system, JoiningJson, Workspace,
};

#[derive(Parser)]
#[command(
    name = "wstar",
    about = "Finite-dimensional W*-dynamical systems: modular data, joinings, disjointness probes"
)]
pub struct Cli {
    /// Workspace JSON file with algebra/state/action/system/embedding declarations.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Emit reports as JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Base seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Repetition count for randomized commands.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Multiplies the tolerance ladder.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Iteration cap for the feasibility probe.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a workspace file and summarize its contents.
    Load,
    /// GNS construction and modular data checks for a state.
    Gns { state: String },
    /// Modular flow checks for a state at a given time.
    Modular {
        state: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// State-preserving conditional expectation onto a subalgebra.
    Condexp { state: String, sub: String },
    /// The commutant system of a system.
    CommutantSystem { system: String },
    /// Build the relatively independent joining for two embeddings of a
    /// common subsystem, verify it, and optionally write it out.
    RelJoining {
        emb_a: String,
        emb_b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a joining (from --joining, or the canonical one).
    VerifyJoining {
        emb_a: String,
        emb_b: String,
        #[arg(long)]
        joining: Option<PathBuf>,
    },
    /// Hilbert-space geometry and orthogonality verdict for a joining.
    Geometry {
        emb_a: String,
        emb_b: String,
        #[arg(long)]
        joining: Option<PathBuf>,
    },
    /// Fixed-point subsystem and the fixed-space identity.
    FixedPoints { system: String },
    /// Joint eigenoperator decomposition (abelian actions).
    Eigenops { system: String },
    /// The subsystem generated by all eigenoperators.
    CompactSub { system: String },
    /// Classification flags for a system.
    Classify {
        system: String,
        #[arg(long)]
        sub: Option<String>,
    },
    /// Build the joining constraint system and report its shape.
    Constraints { emb_a: String, emb_b: String },
    /// Dykstra feasibility probes for joinings beyond the canonical one.
    Probe { emb_a: String, emb_b: String },
    /// The nested-subsystem witness pair (F inside R inside A, B).
    Witness {
        f_in_r: String,
        r_in_a: String,
        r_in_b: String,
    },
    /// Run a named verification suite.
    Suite {
        #[arg(long)]
        profile: String,
    },
    /// Generate a seeded random system and emit it as a workspace file.
    RandomSystem {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(reports) => {
            let any_fail = reports.iter().any(|r| !r.all_pass());
            if any_fail {
                1
            } else {
                0
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn load_workspace(path: &Option<PathBuf>) -> Result<Workspace> {
    let path = path
        .as_ref()
        .ok_or_else(|| WStarError::Parse("this command needs --workspace <path>".into()))?;
    Workspace::load(path)
}

fn get<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    kind: &str,
    id: &str,
) -> Result<&'a T> {
    map.get(id).ok_or_else(|| WStarError::DanglingReference {
        kind: kind.into(),
        id: id.into(),
    })
}

fn print_reports(reports: &[Report], json: bool) {
    if json {
        let vals: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(vals)).unwrap()
        );
    } else {
        for r in reports {
            print!("{}", r.render_table());
        }
    }
}

fn context_from_ids(ws: &Workspace, emb_a: &str, emb_b: &str) -> Result<JoiningContext> {
    let a = get(&ws.embeddings, "embedding", emb_a)?.clone();
    let b = get(&ws.embeddings, "embedding", emb_b)?.clone();
    JoiningContext::new(a, b)
}

fn functional_from_file(
    ctx: &JoiningContext,
    path: &PathBuf,
) -> Result<JoiningFunctional> {
    let text = std::fs::read_to_string(path)?;
    let j: JoiningJson =
        serde_json::from_str(&text).map_err(|e| WStarError::Parse(e.to_string()))?;
    let values = joining_values_from_json(&j, ctx.a.algebra().dim(), ctx.b_tilde().dim())?;
    Ok(JoiningFunctional::new(
        ctx.a.algebra().clone(),
        ctx.b_tilde().clone(),
        values,
    ))
}

fn run(cli: Cli) -> Result<Vec<Report>> {
    let tols = Tolerances::scaled(cli.tol_scale);
    let seed = cli.seed.unwrap_or(0);
    let max_iter = cli.max_iter.unwrap_or(DEFAULT_MAX_ITER);

    let reports = match &cli.command {
        Command::Load => {
            let ws = load_workspace(&cli.workspace)?;
            let rep = timed(|| {
                let mut rep = Report::new("load");
                rep.note(format!(
                    "{} algebras, {} states, {} actions, {} systems, {} embeddings",
                    ws.algebras.len(),
                    ws.states.len(),
                    ws.actions.len(),
                    ws.systems.len(),
                    ws.embeddings.len()
                ));
                rep.check_flag("all declarations validated", 0.0, 0.0, true);
                rep
            });
            vec![rep]
        }
        Command::Gns { state } => {
            let ws = load_workspace(&cli.workspace)?;
            let state = get(&ws.states, "state", state)?;
            let rep = timed(|| {
                let mut rep = Report::new(format!("gns ({} -> dim {})", "state", state.algebra().dim()));
                let gns = state.gns();
                let checks = gns.verify(state);
                rep.check_le("gram identity", checks.gram_residual, tols.construction());
                rep.check_le("pi multiplicative", checks.hom_residual, tols.construction());
                rep.check_le("pi star-preserving", checks.star_residual, tols.construction());
                rep.check_le("pi unital", checks.unital_residual, tols.construction());
                rep.check_flag(
                    "omega cyclic (min singular value)",
                    checks.cyclic_min_sv,
                    0.0,
                    checks.cyclic_min_sv > 1e-6,
                );
                rep.check_le("polar identity S = J sqrt(Delta)", checks.polar_residual, tols.derived());
                rep.check_le("J^2 = 1", checks.j_squared_residual, tols.derived());
                rep.check_le("J Delta J = inverse", checks.jdj_residual, tols.derived());
                rep.check_le("Tomita commutation", checks.tomita_residual, tols.derived());
                rep.check_le("J Omega = Omega", checks.omega_fixed_residual, tols.derived());
                let spec: Vec<String> = eigh(gns.delta())
                    .values
                    .iter()
                    .map(|x| format!("{x:.6}"))
                    .collect();
                rep.note(format!("Delta spectrum: [{}]", spec.join(", ")));
                rep
            });
            vec![rep]
        }
        Command::Modular { state, t } => {
            let ws = load_workspace(&cli.workspace)?;
            let state = get(&ws.states, "state", state)?;
            let t = *t;
            let rep = timed(|| {
                let mut rep = Report::new(format!("modular flow at t = {t}"));
                let gns = state.gns();
                let alg = state.algebra();
                let id_resid = (gns.modular_flow_superop(0.0) - identity(alg.dim())).camax();
                rep.check_le("sigma_0 = id", id_resid, tols.derived());
                let group_resid = (gns.modular_flow_superop(0.6 * t)
                    * gns.modular_flow_superop(0.4 * t)
                    - gns.modular_flow_superop(t))
                .camax();
                rep.check_le("group law", group_resid, tols.derived());
                let flow = gns.modular_flow_superop(t);
                let mut inv = 0.0f64;
                for i in 0..alg.dim() {
                    let mut e = CVector::zeros(alg.dim());
                    e[i] = cr(1.0);
                    inv = inv
                        .max((state.value_coords(&(&flow * &e)) - state.value_coords(&e)).norm());
                }
                rep.check_le("state invariance", inv, tols.derived());
                let auto = crate::dynamics::automorphism_residuals(alg, state, &flow);
                rep.check_le("automorphism (multiplicative)", auto.multiplicative, tols.derived());
                rep.check_le("automorphism (star)", auto.star, tols.derived());
                rep
            });
            vec![rep]
        }
        Command::Condexp { state, sub } => {
            let ws = load_workspace(&cli.workspace)?;
            let state = get(&ws.states, "state", state)?;
            let sub = get(&ws.algebras, "algebra", sub)?;
            let gns = state.gns();
            let ce = conditional_expectation(state, &gns, sub)?;
            let rep = timed(|| {
                let mut rep = Report::new("conditional expectation");
                let (_, minv_resid) = is_modular_invariant(state, &gns, sub).unwrap();
                rep.check_le("target modular-invariant", minv_resid, 1e-8 * tols.scale);
                rep.check_le(
                    "idempotent",
                    (ce.map() * ce.map() - ce.map()).camax(),
                    tols.construction(),
                );
                let alg = state.algebra();
                rep.check_le(
                    "unital",
                    (ce.apply(alg.identity_coords()) - alg.identity_coords()).norm(),
                    tols.construction(),
                );
                let mut sp = 0.0f64;
                for i in 0..alg.dim() {
                    let mut e = CVector::zeros(alg.dim());
                    e[i] = cr(1.0);
                    sp = sp
                        .max((state.value_coords(&ce.apply(&e)) - state.value_coords(&e)).norm());
                }
                rep.check_le("state preserving", sp, tols.construction());
                let (_, jhf) = modular_conjugation_subspace_check(state, &gns, sub).unwrap();
                rep.check_le("J H_F = H_F", jhf, tols.derived());
                rep
            });
            vec![rep]
        }
        Command::CommutantSystem { system } => {
            let ws = load_workspace(&cli.workspace)?;
            let sys = get(&ws.systems, "system", system)?;
            let ctx = CommutantSystem::new(sys.clone())?;
            let rep = timed(|| {
                let mut rep = Report::new("commutant system");
                rep.check_flag(
                    "dim B~ = dim B",
                    (ctx.algebra().dim() as f64) - (sys.algebra().dim() as f64),
                    0.0,
                    ctx.algebra().dim() == sys.algebra().dim(),
                );
                rep.check_flag(
                    "nu~ faithful (Gram min eig)",
                    ctx.system().state().gram_min_eig(),
                    0.0,
                    ctx.system().state().gram_min_eig() > 1e-10,
                );
                let j_alg = crate::algebra::MatrixAlgebra::generate(
                    ctx.base_gns().dim_h(),
                    &(0..sys.algebra().dim())
                        .map(|i| {
                            let mut e = CVector::zeros(sys.algebra().dim());
                            e[i] = cr(1.0);
                            ctx.j_pi(&e)
                        })
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let (_, tomita) = ctx.algebra().span_equal(&j_alg);
                rep.check_le("J pi(B) J spans the commutant", tomita, tols.derived());
                rep.note(format!(
                    "B~ dim {}, identity action: {}",
                    ctx.algebra().dim(),
                    ctx.system().action().is_identity()
                ));
                rep
            });
            vec![rep]
        }
        Command::RelJoining { emb_a, emb_b, out } => {
            let ws = load_workspace(&cli.workspace)?;
            let ctx = context_from_ids(&ws, emb_a, emb_b)?;
            let w = ctx.relative_joining();
            if let Some(path) = out {
                let j = joining_to_json(emb_a, emb_b, &w);
                std::fs::write(path, serde_json::to_string_pretty(&j).unwrap())?;
            }
            let rep = verify_report("relatively independent joining", &ctx, &w, &tols);
            vec![rep]
        }
        Command::VerifyJoining {
            emb_a,
            emb_b,
            joining,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let ctx = context_from_ids(&ws, emb_a, emb_b)?;
            let w = match joining {
                Some(path) => functional_from_file(&ctx, path)?,
                None => ctx.relative_joining(),
            };
            vec![verify_report("verify joining", &ctx, &w, &tols)]
        }
        Command::Geometry {
            emb_a,
            emb_b,
            joining,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let ctx = context_from_ids(&ws, emb_a, emb_b)?;
            let w = match joining {
                Some(path) => functional_from_file(&ctx, path)?,
                None => ctx.relative_joining(),
            };
            let geo = joining_geometry(&ctx, &w, tols.geometry())?;
            let rep = timed(|| {
                let mut rep = Report::new("joining geometry");
                rep.check_le("imbedding isometries", geo.iso_residual, tols.geometry());
                rep.check_le(
                    "H_lambda~ = H_lambda",
                    geo.subspace_match_residual,
                    tols.geometry(),
                );
                rep.check_le(
                    "U_g P_omega = P_omega V~_g",
                    geo.intertwine_residual,
                    tols.geometry(),
                );
                rep.check_flag(
                    "orthogonality verdict matches functional equality",
                    geo.functional_match_residual,
                    tols.geometry(),
                    geo.verdicts_agree(),
                );
                rep.note(format!(
                    "orthogonality residuals: {:.3e}, {:.3e}, {:.3e}; omega {} the canonical joining",
                    geo.orthogonality_residuals[0],
                    geo.orthogonality_residuals[1],
                    geo.orthogonality_residuals[2],
                    if geo.verdict_functional { "equals" } else { "differs from" }
                ));
                rep
            });
            vec![rep]
        }
        Command::FixedPoints { system } => {
            let ws = load_workspace(&cli.workspace)?;
            let sys = get(&ws.systems, "system", system)?;
            let fixed = fixed_point_algebra(sys)?;
            let rep = timed(|| {
                let mut rep = Report::new("fixed point subsystem");
                let gns = sys.state().gns();
                let (minv, mresid) =
                    is_modular_invariant(sys.state(), &gns, &fixed.algebra).unwrap();
                rep.check_flag("A^alpha modular-invariant", mresid, 1e-8 * tols.scale, minv);
                let urep = unitary_rep(sys, &gns);
                let (ok, resid) = fixed_space_check(sys, &gns, &urep, &fixed);
                rep.check_flag("fixed space = gamma(A^alpha)", resid, tols.derived(), ok);
                rep.note(format!("dim A^alpha = {}", fixed.algebra.dim()));
                rep
            });
            vec![rep]
        }
        Command::Eigenops { system } => {
            let ws = load_workspace(&cli.workspace)?;
            let sys = get(&ws.systems, "system", system)?;
            let gns = sys.state().gns();
            let ops = eigen_decomposition(sys, &gns)?;
            let rep = timed(|| {
                let mut rep = Report::new("eigenoperator decomposition");
                rep.check_flag(
                    "eigenoperators span the algebra",
                    (ops.len() as f64) - (sys.algebra().dim() as f64),
                    0.0,
                    ops.len() == sys.algebra().dim(),
                );
                let mut worst = 0.0f64;
                for op in &ops {
                    for (k, theta) in sys.action().generators().iter().enumerate() {
                        let moved = theta * &op.coords;
                        let expect = op.coords.clone() * op.character(k);
                        worst = worst.max((moved - expect).norm());
                    }
                }
                rep.check_le("eigen equations", worst, tols.derived());
                for (n, op) in ops.iter().enumerate() {
                    let phases: Vec<String> =
                        op.phases.iter().map(|p| format!("{p:+.6}")).collect();
                    rep.note(format!("op {n}: phases [{}]", phases.join(", ")));
                }
                rep
            });
            vec![rep]
        }
        Command::CompactSub { system } => {
            let ws = load_workspace(&cli.workspace)?;
            let sys = get(&ws.systems, "system", system)?;
            let gns = sys.state().gns();
            let compact = compact_subalgebra(sys, &gns)?;
            let rep = timed(|| {
                let mut rep = Report::new("compact subsystem");
                let (ok, resid) = compact.algebra.span_equal(sys.algebra());
                rep.check_flag(
                    "A^K = A (finite dimension)",
                    resid,
                    tols.derived(),
                    ok,
                );
                let (minv, mresid) =
                    is_modular_invariant(sys.state(), &gns, &compact.algebra).unwrap();
                rep.check_flag("A^K modular-invariant", mresid, 1e-8 * tols.scale, minv);
                rep.note(format!("dim A^K = {}", compact.algebra.dim()));
                rep
            });
            vec![rep]
        }
        Command::Classify { system, sub } => {
            let ws = load_workspace(&cli.workspace)?;
            let sys = get(&ws.systems, "system", system)?;
            let sub_alg = match sub {
                Some(id) => Some(get(&ws.algebras, "algebra", id)?.as_ref().clone()),
                None => None,
            };
            let cls = classify(sys, sub_alg.as_ref())?;
            let rep = timed(|| {
                let mut rep = Report::new("classification");
                rep.note(format!("ergodic: {}", cls.ergodic));
                if let Some(rel) = cls.relatively_ergodic {
                    rep.note(format!("relatively ergodic wrt sub: {rel}"));
                }
                rep.note(format!("compact: {} ({})", cls.compact, cls.compact_note));
                rep.note(format!("weakly mixing: {}", cls.weakly_mixing));
                rep.note(format!("identity: {}", cls.identity));
                rep.note(format!("trivial: {}", cls.trivial));
                rep.note(format!("state tracial: {}", cls.state_tracial));
                rep.note(format!("dim A^alpha = {}", cls.fixed_point_dim));
                rep.check_flag("classification computed", 0.0, 0.0, true);
                rep
            });
            vec![rep]
        }
        Command::Constraints { emb_a, emb_b } => {
            let ws = load_workspace(&cli.workspace)?;
            let ctx = context_from_ids(&ws, emb_a, emb_b)?;
            let cs = ConstraintSystem::build(&ctx)?;
            let rep = timed(|| {
                let mut rep = Report::new("joining constraint system");
                rep.check_le(
                    "canonical point feasible (affine)",
                    cs.canonical_affine_residual,
                    tols.derived(),
                );
                rep.check_flag(
                    "canonical point feasible (PSD violation)",
                    (-cs.canonical_min_eig).max(0.0),
                    tols.derived(),
                    cs.canonical_min_eig > -tols.derived(),
                );
                rep.note(format!(
                    "{} coordinates, {} raw rows, rank {}, affine dimension {}",
                    cs.coordinate_count(),
                    cs.raw_rows,
                    cs.reduced_rank,
                    cs.null_dimension()
                ));
                rep
            });
            vec![rep]
        }
        Command::Probe { emb_a, emb_b } => {
            let ws = load_workspace(&cli.workspace)?;
            let ctx = context_from_ids(&ws, emb_a, emb_b)?;
            let cs = ConstraintSystem::build(&ctx)?;
            let count = cli.count.unwrap_or(1);
            let rep = timed(|| {
                let mut rep = Report::new(format!("disjointness probe ({count} seeds)"));
                for k in 0..count as u64 {
                    let r = cs.probe(&ctx, seed + k, max_iter);
                    rep.check_flag(
                        format!(
                            "seed {}: converged {} in {} iterations, distance {:.3e}",
                            r.seed, r.converged, r.iterations, r.distance_from_canonical
                        ),
                        r.affine_residual.max((-r.psd_min_eig).max(0.0)),
                        tols.probe_feasibility(),
                        r.converged
                            && r.affine_residual < tols.probe_feasibility()
                            && r.psd_min_eig > -tols.derived(),
                    );
                }
                rep.note("distance < 1e-6 is evidence (not proof) of local uniqueness");
                rep
            });
            vec![rep]
        }
        Command::Witness {
            f_in_r,
            r_in_a,
            r_in_b,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let f_in_r = get(&ws.embeddings, "embedding", f_in_r)?;
            let r_in_a = get(&ws.embeddings, "embedding", r_in_a)?;
            let r_in_b = get(&ws.embeddings, "embedding", r_in_b)?;
            let witness = nested_witness(f_in_r, r_in_a, r_in_b)?;
            let rep = timed(|| {
                let mut rep = Report::new("nested witness pair");
                let rep_r = witness.ctx_f.verify(&witness.over_r);
                let rep_f = witness.ctx_f.verify(&witness.over_f);
                rep.check_le(
                    "joining over R in J_lambda",
                    rep_r.max_violation(),
                    tols.geometry(),
                );
                rep.check_le(
                    "joining over F in J_lambda",
                    rep_f.max_violation(),
                    tols.geometry(),
                );
                rep.check_flag(
                    "restrictions to R⊙R~ differ",
                    witness.restriction_difference,
                    tols.geometry(),
                    witness.restriction_difference > tols.geometry(),
                );
                rep
            });
            vec![rep]
        }
        Command::Suite { profile } => {
            let count = cli.count;
            run_profile(profile, seed, count, max_iter, &tols)?
        }
        Command::RandomSystem { profile, out } => {
            let profile: Profile = profile.parse()?;
            let sys = random_system(seed, profile);
            let file = workspace_of_system("random", &sys)?;
            let text = serde_json::to_string_pretty(&file).unwrap();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            let rep = timed(|| {
                let mut rep = Report::new("random system");
                let cls = classify(&sys, None).unwrap();
                rep.note(format!(
                    "profile {profile:?}, seed {seed}: algebra dim {}, ergodic {}, tracial {}",
                    sys.algebra().dim(),
                    cls.ergodic,
                    cls.state_tracial
                ));
                rep.check_flag("system generated and validated", 0.0, 0.0, true);
                rep
            });
            vec![rep]
        }
    };

    print_reports(&reports, cli.json);
    Ok(reports)
}

fn verify_report(
    title: &str,
    ctx: &JoiningContext,
    w: &JoiningFunctional,
    tols: &Tolerances,
) -> Report {
    let tols = *tols;
    let title = title.to_string();
    let check = ctx.verify(w);
    timed(move || {
        let mut rep = Report::new(title);
        rep.check_flag(
            "positivity violation",
            (-check.positivity_min_eig).max(0.0),
            tols.geometry(),
            check.positivity_min_eig > -tols.geometry(),
        );
        rep.check_le("normalization", check.normalization_residual, tols.geometry());
        rep.check_le("left marginal = mu", check.marginal_left_residual, tols.geometry());
        rep.check_le(
            "right marginal = nu~",
            check.marginal_right_residual,
            tols.geometry(),
        );
        rep.check_le("diagonal invariance", check.invariance_residual, tols.geometry());
        rep.check_le(
            "restriction to Delta_lambda",
            check.restriction_residual,
            tols.geometry(),
        );
        rep
    })
}
