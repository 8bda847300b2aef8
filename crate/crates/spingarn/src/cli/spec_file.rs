//! JSON problem-spec files: schema, validation, and construction of the
//! solver-ready problem objects.
//!
//! The format is documented in the repository README. Numbers are plain
//! decimals, matrices are arrays of row arrays, and every dimension is
//! cross-checked before any iteration runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{LinearMap, Matrix, Vector};
use crate::monotone_ops::{MonotoneOp, ProxSpec};
use crate::pd_solvers::{
    CompositeProblem, CoupledBlock, CoupledProblem, MinimizationBlock, MinimizationProblem,
    MultiPrimalBlock, MultiPrimalProblem,
};
use crate::pinv_engine::{RelaxationSchedule, SolverConfig};

/// Top level of a problem-spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpecFile {
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverChoice,
    #[serde(default)]
    pub config: RunConfig,
}

/// Which recursion to run. `auto` picks the side with the smaller Gram
/// factorization for composite problems; the reductions fix their own side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    QForm,
    RForm,
    #[default]
    Auto,
}

/// Iteration controls. `x0`/`v0` are flat concatenations of the primal
/// and dual blocks and default to zero; `seed` is accepted for forward
/// compatibility but nothing randomized runs during a solve today.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub history_stride: usize,
    pub x0: Option<Vec<f64>>,
    pub v0: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: 1.0,
            tol: 1e-8,
            max_iter: 100_000,
            seed: 0,
            history_stride: 1,
            x0: None,
            v0: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Composite {
        a: OperatorSpec,
        b: OperatorSpec,
        l: MapSpec,
    },
    MultiPrimal {
        c: OperatorSpec,
        z: Vec<f64>,
        blocks: Vec<MultiPrimalBlockSpec>,
    },
    MultiMin {
        f: OperatorSpec,
        z: Vec<f64>,
        blocks: Vec<MultiMinBlockSpec>,
    },
    Coupled {
        d: OperatorSpec,
        offset: Vec<f64>,
        blocks: Vec<CoupledBlockSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiPrimalBlockSpec {
    pub b: OperatorSpec,
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
    pub l: MapSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiMinBlockSpec {
    pub g: OperatorSpec,
    #[serde(default)]
    pub offset: Option<Vec<f64>>,
    pub l: MapSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledBlockSpec {
    pub a: OperatorSpec,
    #[serde(default)]
    pub z: Option<Vec<f64>>,
    pub l: MapSpec,
}

/// Operator descriptors: the prox catalog plus dense linear monotone maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    L1Norm {
        dim: usize,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        linear: Option<Vec<f64>>,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
        /// Accepted for uniformity; indicators are scale-invariant.
        #[serde(default = "default_scale")]
        scale: f64,
    },
    EuclideanBall {
        center: Vec<f64>,
        radius: f64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    AffineSet {
        matrix: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Zero {
        dim: usize,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    LinearMonotone {
        matrix: Vec<Vec<f64>>,
    },
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Dense { matrix: Vec<Vec<f64>> },
    Identity { dim: usize },
    ScaledIdentity { dim: usize, scale: f64 },
    RowStack { children: Vec<MapSpec> },
    ColumnSum { children: Vec<MapSpec> },
}

/// Validated, solver-ready form of a spec file.
#[derive(Debug)]
pub struct BuiltProblem {
    pub problem: ProblemVariant,
    pub solver: SolverChoice,
    pub config: SolverConfig,
    pub x0: Vector,
    pub v0: Vector,
}

#[derive(Debug)]
pub enum ProblemVariant {
    Composite(CompositeProblem),
    MultiPrimal(MultiPrimalProblem),
    MultiMin(MinimizationProblem),
    Coupled(CoupledProblem),
}

impl ProblemVariant {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ProblemVariant::Composite(_) => "composite",
            ProblemVariant::MultiPrimal(_) => "multi_primal",
            ProblemVariant::MultiMin(_) => "multi_min",
            ProblemVariant::Coupled(_) => "coupled",
        }
    }
}

fn at(field: &str, err: Error) -> Error {
    match err {
        Error::Spec {
            field: inner,
            message,
        } => Error::Spec {
            field: format!("{field}.{inner}"),
            message,
        },
        other => Error::Spec {
            field: field.to_string(),
            message: other.to_string(),
        },
    }
}

fn vector_at(field: &str, coords: &[f64]) -> Result<Vector> {
    Vector::new(coords.to_vec()).map_err(|e| at(field, e))
}

fn matrix_at(field: &str, rows: &[Vec<f64>]) -> Result<Matrix> {
    Matrix::from_rows(rows).map_err(|e| at(field, e))
}

fn build_map(field: &str, spec: &MapSpec) -> Result<LinearMap> {
    match spec {
        MapSpec::Dense { matrix } => Ok(LinearMap::dense(matrix_at(
            &format!("{field}.matrix"),
            matrix,
        )?)),
        MapSpec::Identity { dim } => LinearMap::identity(*dim).map_err(|e| at(field, e)),
        MapSpec::ScaledIdentity { dim, scale } => {
            LinearMap::scaled_identity(*dim, *scale).map_err(|e| at(field, e))
        }
        MapSpec::RowStack { children } => {
            let maps = children
                .iter()
                .enumerate()
                .map(|(i, c)| build_map(&format!("{field}.children[{i}]"), c))
                .collect::<Result<Vec<_>>>()?;
            LinearMap::row_stack(maps).map_err(|e| at(field, e))
        }
        MapSpec::ColumnSum { children } => {
            let maps = children
                .iter()
                .enumerate()
                .map(|(i, c)| build_map(&format!("{field}.children[{i}]"), c))
                .collect::<Result<Vec<_>>>()?;
            LinearMap::column_sum(maps).map_err(|e| at(field, e))
        }
    }
}

fn build_prox(field: &str, spec: &OperatorSpec) -> Result<ProxSpec> {
    match spec {
        OperatorSpec::L1Norm { dim, scale } => ProxSpec::l1(*dim, *scale).map_err(|e| at(field, e)),
        OperatorSpec::Quadratic {
            matrix,
            linear,
            scale,
        } => {
            let m = matrix_at(&format!("{field}.matrix"), matrix)?;
            let c = match linear {
                Some(c) => vector_at(&format!("{field}.linear"), c)?,
                None => Vector::zeros(m.rows()),
            };
            ProxSpec::quadratic(m, c, *scale).map_err(|e| at(field, e))
        }
        OperatorSpec::Box { lower, upper, .. } => ProxSpec::box_indicator(
            vector_at(&format!("{field}.lower"), lower)?,
            vector_at(&format!("{field}.upper"), upper)?,
        )
        .map_err(|e| at(field, e)),
        OperatorSpec::EuclideanBall { center, radius, .. } => {
            ProxSpec::euclidean_ball(vector_at(&format!("{field}.center"), center)?, *radius)
                .map_err(|e| at(field, e))
        }
        OperatorSpec::AffineSet { matrix, rhs, .. } => ProxSpec::affine_set(
            matrix_at(&format!("{field}.matrix"), matrix)?,
            vector_at(&format!("{field}.rhs"), rhs)?,
        )
        .map_err(|e| at(field, e)),
        OperatorSpec::Zero { dim, .. } => ProxSpec::zero(*dim).map_err(|e| at(field, e)),
        OperatorSpec::LinearMonotone { .. } => Err(Error::spec(
            field,
            "linear_monotone is not a prox-catalog function; use a quadratic instead",
        )),
    }
}

fn build_operator(field: &str, spec: &OperatorSpec) -> Result<MonotoneOp> {
    match spec {
        OperatorSpec::LinearMonotone { matrix } => {
            let m = matrix_at(&format!("{field}.matrix"), matrix)?;
            MonotoneOp::linear(m).map_err(|e| at(field, e))
        }
        other => {
            let prox = build_prox(field, other)?;
            // prox preparation (factorizations, affine consistency) runs now
            MonotoneOp::from_prox(&prox).map_err(|e| at(field, e))
        }
    }
}

fn offset_or_zeros(field: &str, offset: &Option<Vec<f64>>, dim: usize) -> Result<Vector> {
    match offset {
        Some(o) => {
            let v = vector_at(field, o)?;
            if v.dim() != dim {
                return Err(Error::spec(
                    field,
                    format!("expected dimension {dim}, got {}", v.dim()),
                ));
            }
            Ok(v)
        }
        None => Ok(Vector::zeros(dim)),
    }
}

/// Parses JSON text into the schema, naming the offending field on error.
pub fn parse(text: &str) -> Result<ProblemSpecFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Spec {
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Validates a parsed spec and constructs the solver inputs.
pub fn build(spec: &ProblemSpecFile) -> Result<BuiltProblem> {
    let problem = match &spec.problem {
        ProblemSpec::Composite { a, b, l } => {
            let a = build_operator("problem.a", a)?;
            let b = build_operator("problem.b", b)?;
            let l = build_map("problem.l", l)?;
            ProblemVariant::Composite(CompositeProblem::new(a, b, l).map_err(|e| at("problem", e))?)
        }
        ProblemSpec::MultiPrimal { c, z, blocks } => {
            let c = build_operator("problem.c", c)?;
            let z = vector_at("problem.z", z)?;
            let blocks = blocks
                .iter()
                .enumerate()
                .map(|(i, blk)| {
                    let field = format!("problem.blocks[{i}]");
                    let l = build_map(&format!("{field}.l"), &blk.l)?;
                    Ok(MultiPrimalBlock {
                        b: build_operator(&format!("{field}.b"), &blk.b)?,
                        offset: offset_or_zeros(
                            &format!("{field}.offset"),
                            &blk.offset,
                            l.codomain_dim(),
                        )?,
                        l,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ProblemVariant::MultiPrimal(
                MultiPrimalProblem::new(c, z, blocks).map_err(|e| at("problem", e))?,
            )
        }
        ProblemSpec::MultiMin { f, z, blocks } => {
            let f = build_prox("problem.f", f)?;
            let z = vector_at("problem.z", z)?;
            let blocks = blocks
                .iter()
                .enumerate()
                .map(|(i, blk)| {
                    let field = format!("problem.blocks[{i}]");
                    let l = build_map(&format!("{field}.l"), &blk.l)?;
                    let g = build_prox(&format!("{field}.g"), &blk.g)?;
                    if g.dim() != l.codomain_dim() {
                        return Err(Error::spec(
                            format!("{field}.g"),
                            format!(
                                "dimension {} does not match map codomain {}",
                                g.dim(),
                                l.codomain_dim()
                            ),
                        ));
                    }
                    Ok(MinimizationBlock {
                        offset: offset_or_zeros(
                            &format!("{field}.offset"),
                            &blk.offset,
                            l.codomain_dim(),
                        )?,
                        g,
                        l,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let min = MinimizationProblem::new(f, z, blocks).map_err(|e| at("problem", e))?;
            // run the operator construction now so factorization and
            // consistency errors surface before any iteration
            min.to_multi_primal().map_err(|e| at("problem", e))?;
            ProblemVariant::MultiMin(min)
        }
        ProblemSpec::Coupled { d, offset, blocks } => {
            let d = build_operator("problem.d", d)?;
            let offset = vector_at("problem.offset", offset)?;
            let blocks = blocks
                .iter()
                .enumerate()
                .map(|(i, blk)| {
                    let field = format!("problem.blocks[{i}]");
                    let l = build_map(&format!("{field}.l"), &blk.l)?;
                    Ok(CoupledBlock {
                        a: build_operator(&format!("{field}.a"), &blk.a)?,
                        z: offset_or_zeros(&format!("{field}.z"), &blk.z, l.domain_dim())?,
                        l,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ProblemVariant::Coupled(
                CoupledProblem::new(d, offset, blocks).map_err(|e| at("problem", e))?,
            )
        }
    };

    // solver choice compatibility with the reductions
    match (&problem, spec.solver) {
        (ProblemVariant::MultiPrimal(_) | ProblemVariant::MultiMin(_), SolverChoice::RForm) => {
            return Err(Error::spec(
                "solver",
                "multi-operator problems run the Q-form reduction; use q_form or auto",
            ));
        }
        (ProblemVariant::Coupled(_), SolverChoice::QForm) => {
            return Err(Error::spec(
                "solver",
                "coupled problems run the R-form reduction; use r_form or auto",
            ));
        }
        _ => {}
    }

    let (primal_dim, dual_dim) = match &problem {
        ProblemVariant::Composite(p) => (p.primal_dim(), p.dual_dim()),
        ProblemVariant::MultiPrimal(p) => (p.primal_dim(), p.dual_dims().iter().sum()),
        ProblemVariant::MultiMin(p) => {
            let mp = p.to_multi_primal()?;
            (mp.primal_dim(), mp.dual_dims().iter().sum())
        }
        ProblemVariant::Coupled(p) => (p.primal_dims().iter().sum(), p.dual_dim()),
    };

    let x0 = match &spec.config.x0 {
        Some(x) => {
            let v = vector_at("config.x0", x)?;
            if v.dim() != primal_dim {
                return Err(Error::spec(
                    "config.x0",
                    format!("expected dimension {primal_dim}, got {}", v.dim()),
                ));
            }
            v
        }
        None => Vector::zeros(primal_dim),
    };
    let v0 = match &spec.config.v0 {
        Some(v) => {
            let v = vector_at("config.v0", v)?;
            if v.dim() != dual_dim {
                return Err(Error::spec(
                    "config.v0",
                    format!("expected dimension {dual_dim}, got {}", v.dim()),
                ));
            }
            v
        }
        None => Vector::zeros(dual_dim),
    };

    let relaxation =
        RelaxationSchedule::constant(spec.config.lambda).map_err(|e| at("config.lambda", e))?;
    let config = SolverConfig::default()
        .with_tol(spec.config.tol)
        .with_max_iter(spec.config.max_iter)
        .with_relaxation(relaxation)
        .with_history_stride(spec.config.history_stride);
    config.validate().map_err(|e| at("config", e))?;

    Ok(BuiltProblem {
        problem,
        solver: spec.solver,
        config,
        x0,
        v0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LASSO: &str = r#"{
        "problem": {
            "kind": "composite",
            "a": {"kind": "quadratic", "matrix": [[1.0]], "linear": [3.0]},
            "b": {"kind": "l1_norm", "dim": 1},
            "l": {"kind": "identity", "dim": 1}
        },
        "solver": "q_form",
        "config": {"tol": 1e-10, "max_iter": 5000}
    }"#;

    #[test]
    fn parse_and_build_composite() {
        let spec = parse(LASSO).unwrap();
        let built = build(&spec).unwrap();
        assert!(matches!(built.problem, ProblemVariant::Composite(_)));
        assert_eq!(built.solver, SolverChoice::QForm);
        assert_eq!(built.x0.dim(), 1);
        assert_eq!(built.config.max_iter, 5000);
    }

    #[test]
    fn roundtrip_serialization() {
        let spec = parse(LASSO).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let again = parse(&text).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn unknown_field_is_named() {
        let bad = r#"{"problem": {"kind": "composite", "a": {"kind": "zero", "dim": 1},
                       "b": {"kind": "zero", "dim": 1}, "l": {"kind": "identity", "dim": 1},
                       "typo_field": 3}}"#;
        let err = parse(bad).unwrap_err().to_string();
        assert!(
            err.contains("typo_field") || err.contains("problem"),
            "{err}"
        );
    }

    #[test]
    fn dimension_mismatch_names_field() {
        let bad = r#"{
            "problem": {
                "kind": "composite",
                "a": {"kind": "zero", "dim": 2},
                "b": {"kind": "zero", "dim": 1},
                "l": {"kind": "identity", "dim": 1}
            }
        }"#;
        let err = build(&parse(bad).unwrap()).unwrap_err().to_string();
        assert!(err.contains("problem"), "{err}");
        assert!(err.contains("expected 1"), "{err}");
    }

    #[test]
    fn initial_point_dimension_checked() {
        let bad = r#"{
            "problem": {
                "kind": "composite",
                "a": {"kind": "zero", "dim": 1},
                "b": {"kind": "zero", "dim": 1},
                "l": {"kind": "identity", "dim": 1}
            },
            "config": {"x0": [1.0, 2.0]}
        }"#;
        let err = build(&parse(bad).unwrap()).unwrap_err().to_string();
        assert!(err.contains("config.x0"), "{err}");
    }

    #[test]
    fn solver_reduction_compatibility() {
        let bad = r#"{
            "problem": {
                "kind": "coupled",
                "d": {"kind": "zero", "dim": 1},
                "offset": [0.0],
                "blocks": [{"a": {"kind": "zero", "dim": 1}, "l": {"kind": "identity", "dim": 1}}]
            },
            "solver": "q_form"
        }"#;
        let err = build(&parse(bad).unwrap()).unwrap_err().to_string();
        assert!(err.contains("solver"), "{err}");
    }

    #[test]
    fn multi_min_rejects_linear_monotone() {
        let bad = r#"{
            "problem": {
                "kind": "multi_min",
                "f": {"kind": "linear_monotone", "matrix": [[1.0]]},
                "z": [0.0],
                "blocks": [{"g": {"kind": "zero", "dim": 1}, "l": {"kind": "identity", "dim": 1}}]
            }
        }"#;
        let err = build(&parse(bad).unwrap()).unwrap_err().to_string();
        assert!(err.contains("problem.f"), "{err}");
    }
}
