//! Workspace files: JSON declarations of algebras, states, actions, systems,
//! and embeddings, cross-referenced by id.
//!
//! Scalar format: a complex number is `[re, im]`; a matrix is a row-major
//! nested array of scalars. An algebra is `{"ambient_dim": n, "generators":
//! [matrix, ...]}` (a stored basis reloads verbatim, so coordinates are
//! stable across round trips). A state is `{"algebra": id, "density":
//! matrix}`. An action is `{"group": {"kind": "integer" | "finite_product",
//! "orders": [...]}, "generators": [{"unitary": matrix} | {"superop":
//! matrix}, ...]}` where a superoperator acts on the algebra's basis
//! coordinates. A system is `{"state": id, "action": id}`; an embedding is
//! `{"from": sys-id, "to": sys-id, "map": matrix}` on basis coordinates.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::MatrixAlgebra;
use crate::dynamics::{superop_from_unitary, GroupAction, GroupSpec, WStarSystem};
use crate::error::{Result, WStarError};
use crate::gns::FaithfulState;
use crate::joinings::{JoiningFunctional, SubsystemEmbedding};
use crate::linalg::{c, CMatrix};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<CMatrix> {
    let rows = j.len();
    if rows == 0 {
        return Err(WStarError::Parse("empty matrix".into()));
    }
    let cols = j[0].len();
    if cols == 0 || j.iter().any(|r| r.len() != cols) {
        return Err(WStarError::Parse("ragged or empty matrix rows".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, jj| c(j[i][jj][0], j[i][jj][1])))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDecl {
    pub ambient_dim: usize,
    pub generators: Vec<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDecl {
    pub algebra: String,
    pub density: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDecl {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superop: Option<MatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDecl {
    pub group: GroupDecl,
    pub generators: Vec<GeneratorDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDecl {
    pub state: String,
    pub action: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingDecl {
    pub from: String,
    pub to: String,
    pub map: MatrixJson,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SuiteDefaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

/// The raw declaration file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct WorkspaceFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, StateDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, ActionDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<String, SystemDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub embeddings: BTreeMap<String, EmbeddingDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteDefaults>,
}

/// Fully validated workspace objects.
#[derive(Debug)]
pub struct Workspace {
    pub algebras: BTreeMap<String, Arc<MatrixAlgebra>>,
    pub states: BTreeMap<String, FaithfulState>,
    pub actions: BTreeMap<String, ActionDecl>,
    pub systems: BTreeMap<String, WStarSystem>,
    pub system_decls: BTreeMap<String, SystemDecl>,
    pub embeddings: BTreeMap<String, SubsystemEmbedding>,
    pub suite: Option<SuiteDefaults>,
}

fn validation(kind: &str, id: &str, source: WStarError) -> WStarError {
    WStarError::Validation {
        kind: kind.into(),
        id: id.into(),
        source: Box::new(source),
    }
}

fn dangling(kind: &str, id: &str) -> WStarError {
    WStarError::DanglingReference {
        kind: kind.into(),
        id: id.into(),
    }
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: WorkspaceFile =
            serde_json::from_str(&text).map_err(|e| WStarError::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: WorkspaceFile) -> Result<Self> {
        let mut algebras = BTreeMap::new();
        for (id, decl) in &file.algebras {
            let gens: Vec<CMatrix> = decl
                .generators
                .iter()
                .map(matrix_from_json)
                .collect::<Result<_>>()
                .map_err(|e| validation("algebra", id, e))?;
            let alg = MatrixAlgebra::generate(decl.ambient_dim, &gens)
                .map_err(|e| validation("algebra", id, e))?;
            alg.validate().map_err(|e| validation("algebra", id, e))?;
            algebras.insert(id.clone(), Arc::new(alg));
        }

        let mut states = BTreeMap::new();
        for (id, decl) in &file.states {
            let alg = algebras
                .get(&decl.algebra)
                .ok_or_else(|| dangling("algebra", &decl.algebra))?;
            let density =
                matrix_from_json(&decl.density).map_err(|e| validation("state", id, e))?;
            let state = FaithfulState::new(alg.clone(), density)
                .map_err(|e| validation("state", id, e))?;
            states.insert(id.clone(), state);
        }

        for (id, decl) in &file.actions {
            group_spec(&decl.group).map_err(|e| validation("action", id, e))?;
        }

        let mut systems = BTreeMap::new();
        for (id, decl) in &file.systems {
            let state = states
                .get(&decl.state)
                .ok_or_else(|| dangling("state", &decl.state))?;
            let action_decl = file
                .actions
                .get(&decl.action)
                .ok_or_else(|| dangling("action", &decl.action))?;
            let action = realize_action(action_decl, state.algebra())
                .map_err(|e| validation("system", id, e))?;
            let system = WStarSystem::new(state.clone(), action)
                .map_err(|e| validation("system", id, e))?;
            systems.insert(id.clone(), system);
        }

        let mut embeddings = BTreeMap::new();
        for (id, decl) in &file.embeddings {
            let sub = systems
                .get(&decl.from)
                .ok_or_else(|| dangling("system", &decl.from))?;
            let host = systems
                .get(&decl.to)
                .ok_or_else(|| dangling("system", &decl.to))?;
            let map = matrix_from_json(&decl.map).map_err(|e| validation("embedding", id, e))?;
            let emb = SubsystemEmbedding::new(sub.clone(), host.clone(), map)
                .map_err(|e| validation("embedding", id, e))?;
            embeddings.insert(id.clone(), emb);
        }

        Ok(Self {
            algebras,
            states,
            actions: file.actions,
            systems,
            system_decls: file.systems,
            embeddings,
            suite: file.suite,
        })
    }

    /// Serializes back to the declaration format. Algebras are emitted
    /// through their orthonormal bases, so reloading reproduces identical
    /// coordinates.
    pub fn to_file(&self) -> WorkspaceFile {
        let mut file = WorkspaceFile::default();
        for (id, alg) in &self.algebras {
            file.algebras.insert(
                id.clone(),
                AlgebraDecl {
                    ambient_dim: alg.ambient_dim(),
                    generators: alg.basis().iter().map(matrix_to_json).collect(),
                },
            );
        }
        for (id, state) in &self.states {
            let alg_id = self
                .algebras
                .iter()
                .find(|(_, a)| Arc::ptr_eq(a, state.algebra()))
                .map(|(k, _)| k.clone())
                .unwrap_or_else(|| format!("{id}-algebra"));
            file.states.insert(
                id.clone(),
                StateDecl {
                    algebra: alg_id,
                    density: matrix_to_json(state.density()),
                },
            );
        }
        file.actions = self.actions.clone();
        file.systems = self.system_decls.clone();
        for (id, emb) in &self.embeddings {
            let find_sys = |target: &WStarSystem| {
                self.systems
                    .iter()
                    .find(|(_, s)| {
                        Arc::ptr_eq(s.algebra(), target.algebra())
                            && (s.state().density() - target.state().density()).norm() < 1e-15
                    })
                    .map(|(k, _)| k.clone())
                    .unwrap_or_default()
            };
            file.embeddings.insert(
                id.clone(),
                EmbeddingDecl {
                    from: find_sys(emb.sub()),
                    to: find_sys(emb.host()),
                    map: matrix_to_json(emb.map()),
                },
            );
        }
        file.suite = self.suite.clone();
        file
    }
}

pub fn group_spec(decl: &GroupDecl) -> Result<GroupSpec> {
    let spec = match decl.kind.as_str() {
        "integer" => GroupSpec::Integer,
        "finite_product" => GroupSpec::FiniteProduct(decl.orders.clone()),
        other => {
            return Err(WStarError::Parse(format!(
                "unknown group kind {other:?}; expected \"integer\" or \"finite_product\""
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

pub fn group_decl(spec: &GroupSpec) -> Result<GroupDecl> {
    match spec {
        GroupSpec::Integer => Ok(GroupDecl {
            kind: "integer".into(),
            orders: Vec::new(),
        }),
        GroupSpec::FiniteProduct(orders) => Ok(GroupDecl {
            kind: "finite_product".into(),
            orders: orders.clone(),
        }),
        GroupSpec::FiniteCyclic(k) => Ok(GroupDecl {
            kind: "finite_product".into(),
            orders: vec![*k],
        }),
        GroupSpec::FiniteGeneric { .. } => Err(WStarError::Parse(
            "generic multiplication tables have no file representation".into(),
        )),
    }
}

/// Turns an action declaration into superoperators on the given algebra.
pub fn realize_action(decl: &ActionDecl, alg: &Arc<MatrixAlgebra>) -> Result<GroupAction> {
    let spec = group_spec(&decl.group)?;
    let mut gens = Vec::new();
    for (k, g) in decl.generators.iter().enumerate() {
        let theta = match (&g.unitary, &g.superop) {
            (Some(u), None) => superop_from_unitary(alg, &matrix_from_json(u)?)?,
            (None, Some(s)) => {
                let m = matrix_from_json(s)?;
                if m.shape() != (alg.dim(), alg.dim()) {
                    return Err(WStarError::DimensionMismatch {
                        context: format!("superop generator {k}"),
                        expected: alg.dim(),
                        got: m.nrows(),
                    });
                }
                m
            }
            _ => {
                return Err(WStarError::Parse(format!(
                    "generator {k}: exactly one of \"unitary\" or \"superop\" required"
                )))
            }
        };
        gens.push(theta);
    }
    GroupAction::new(spec, gens)
}

/// Builds an action declaration from a system, in superoperator form.
pub fn action_decl_of(sys: &WStarSystem) -> Result<ActionDecl> {
    Ok(ActionDecl {
        group: group_decl(sys.action().group())?,
        generators: sys
            .action()
            .generators()
            .iter()
            .map(|g| GeneratorDecl {
                unitary: None,
                superop: Some(matrix_to_json(g)),
            })
            .collect(),
    })
}

/// Wraps a single system as a saveable workspace under the given id prefix.
pub fn workspace_of_system(id: &str, sys: &WStarSystem) -> Result<WorkspaceFile> {
    let mut file = WorkspaceFile::default();
    file.algebras.insert(
        format!("{id}-algebra"),
        AlgebraDecl {
            ambient_dim: sys.algebra().ambient_dim(),
            generators: sys.algebra().basis().iter().map(matrix_to_json).collect(),
        },
    );
    file.states.insert(
        format!("{id}-state"),
        StateDecl {
            algebra: format!("{id}-algebra"),
            density: matrix_to_json(sys.state().density()),
        },
    );
    file.actions
        .insert(format!("{id}-action"), action_decl_of(sys)?);
    file.systems.insert(
        id.to_string(),
        SystemDecl {
            state: format!("{id}-state"),
            action: format!("{id}-action"),
        },
    );
    Ok(file)
}

/// Serialized joining: values on the product basis plus the system ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JoiningJson {
    pub left: String,
    pub right: String,
    /// Product-basis labels, row-major in (left, right).
    pub basis: Vec<String>,
    /// One `[re, im]` pair per basis label.
    pub values: Vec<[f64; 2]>,
}

pub fn joining_to_json(left_id: &str, right_id: &str, w: &JoiningFunctional) -> JoiningJson {
    let da = w.left.dim();
    let db = w.right.dim();
    let mut basis = Vec::with_capacity(da * db);
    let mut values = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            basis.push(format!("a{i}*b{j}"));
            values.push([w.values[(i, j)].re, w.values[(i, j)].im]);
        }
    }
    JoiningJson {
        left: left_id.to_string(),
        right: right_id.to_string(),
        basis,
        values,
    }
}

pub fn joining_values_from_json(j: &JoiningJson, da: usize, db: usize) -> Result<CMatrix> {
    if j.values.len() != da * db {
        return Err(WStarError::DimensionMismatch {
            context: "joining values".into(),
            expected: da * db,
            got: j.values.len(),
        });
    }
    Ok(CMatrix::from_fn(da, db, |i, jj| {
        let p = i * db + jj;
        c(j.values[p][0], j.values[p][1])
    }))
}
