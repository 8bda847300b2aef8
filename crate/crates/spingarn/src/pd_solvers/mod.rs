//! The concrete primal-dual solvers.
//!
//! [`solve_q_form`] and [`solve_r_form`] handle the two-operator composite
//! inclusion `0 ∈ Ax + L*BLx` directly. The remaining problem shapes
//! reduce to it by operator algebra and run the same engines:
//!
//! * [`MultiPrimalProblem`] (`z ∈ Cx + Σ L_i* B_i(L_i x - o_i)`) with
//!   `A = -z + C`, `B = ⨯_i B_i(· - o_i)`, `L = x ↦ (L_i x)`;
//! * [`MinimizationProblem`] (minimize `f(x) + Σ g_i(L_i x - o_i) - ⟨x, z⟩`)
//!   as the multi-operator problem over subdifferentials;
//! * [`CoupledProblem`] (`z_i ∈ A_i x_i + L_i* D(Σ L_j x_j - o)`) with
//!   `A = ⨯_i(-z_i + A_i)`, `B = D(· - o)`, `L = (x_i) ↦ Σ L_i x_i`.

mod engine;

pub use engine::{PdEngine, PdState, PdStepInfo, PdVariant};

use crate::diagnostics::{
    kkt_residual, should_stop, ConvergenceRecord, RunStatus, StopDecision, DIVERGENCE_LIMIT,
};
use crate::error::{Error, Result};
use crate::linops::{BlockVector, LinearMap, Vector};
use crate::monotone_ops::{product, MonotoneOp, ProxSpec};
use crate::pinv_engine::SolverConfig;

/// The two-operator composite inclusion `0 ∈ Ax + L*BLx`.
#[derive(Clone, Debug)]
pub struct CompositeProblem {
    a: MonotoneOp,
    b: MonotoneOp,
    l: LinearMap,
}

impl CompositeProblem {
    pub fn new(a: MonotoneOp, b: MonotoneOp, l: LinearMap) -> Result<Self> {
        if a.dim() != l.domain_dim() {
            return Err(Error::DimensionMismatch {
                context: "composite primal operator",
                expected: l.domain_dim(),
                actual: a.dim(),
            });
        }
        if b.dim() != l.codomain_dim() {
            return Err(Error::DimensionMismatch {
                context: "composite dual operator",
                expected: l.codomain_dim(),
                actual: b.dim(),
            });
        }
        Ok(CompositeProblem { a, b, l })
    }

    pub fn primal_op(&self) -> &MonotoneOp {
        &self.a
    }

    pub fn dual_op(&self) -> &MonotoneOp {
        &self.b
    }

    pub fn map(&self) -> &LinearMap {
        &self.l
    }

    pub fn primal_dim(&self) -> usize {
        self.l.domain_dim()
    }

    pub fn dual_dim(&self) -> usize {
        self.l.codomain_dim()
    }

    /// A stepper over this problem, for lockstep comparisons.
    pub fn engine(&self, variant: PdVariant, x0: Vector, v0: Vector) -> Result<PdEngine<'_>> {
        PdEngine::new(self, variant, x0, v0)
    }
}

/// `z ∈ Cx + Σ L_i* B_i(L_i x - o_i)` with per-block duals.
#[derive(Clone, Debug)]
pub struct MultiPrimalProblem {
    c: MonotoneOp,
    z: Vector,
    blocks: Vec<MultiPrimalBlock>,
}

#[derive(Clone, Debug)]
pub struct MultiPrimalBlock {
    pub b: MonotoneOp,
    pub offset: Vector,
    pub l: LinearMap,
}

impl MultiPrimalProblem {
    pub fn new(c: MonotoneOp, z: Vector, blocks: Vec<MultiPrimalBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(
                "multi-operator problem needs at least one block".into(),
            ));
        }
        z.check_dim(c.dim(), "primal offset z")?;
        for (i, blk) in blocks.iter().enumerate() {
            if blk.l.domain_dim() != c.dim() {
                return Err(Error::DimensionMismatch {
                    context: "multi-operator block map domain",
                    expected: c.dim(),
                    actual: blk.l.domain_dim(),
                });
            }
            if blk.b.dim() != blk.l.codomain_dim() {
                return Err(Error::Spec {
                    field: format!("blocks[{i}]"),
                    message: format!(
                        "operator dimension {} does not match map codomain {}",
                        blk.b.dim(),
                        blk.l.codomain_dim()
                    ),
                });
            }
            blk.offset
                .check_dim(blk.l.codomain_dim(), "block offset o_i")?;
        }
        Ok(MultiPrimalProblem { c, z, blocks })
    }

    pub fn primal_dim(&self) -> usize {
        self.c.dim()
    }

    pub fn dual_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.l.codomain_dim()).collect()
    }

    pub fn blocks(&self) -> &[MultiPrimalBlock] {
        &self.blocks
    }

    /// The composite problem the solver actually runs.
    pub fn reduced(&self) -> Result<CompositeProblem> {
        let a = self.c.clone().shift_input(self.z.clone())?;
        let b = product(
            self.blocks
                .iter()
                .map(|blk| blk.b.clone().shift_graph(blk.offset.clone()))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let l = LinearMap::row_stack(self.blocks.iter().map(|blk| blk.l.clone()).collect())?;
        CompositeProblem::new(a, b, l)
    }
}

/// Minimize `f(x) + Σ g_i(L_i x - o_i) - ⟨x, z⟩` over prox-catalog
/// functions; solved through the subdifferential reduction.
#[derive(Clone, Debug)]
pub struct MinimizationProblem {
    f: ProxSpec,
    z: Vector,
    blocks: Vec<MinimizationBlock>,
}

#[derive(Clone, Debug)]
pub struct MinimizationBlock {
    pub g: ProxSpec,
    pub offset: Vector,
    pub l: LinearMap,
}

impl MinimizationProblem {
    pub fn new(f: ProxSpec, z: Vector, blocks: Vec<MinimizationBlock>) -> Result<Self> {
        z.check_dim(f.dim(), "objective offset z")?;
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(
                "minimization problem needs at least one block".into(),
            ));
        }
        Ok(MinimizationProblem { f, z, blocks })
    }

    pub fn to_multi_primal(&self) -> Result<MultiPrimalProblem> {
        MultiPrimalProblem::new(
            MonotoneOp::from_prox(&self.f)?,
            self.z.clone(),
            self.blocks
                .iter()
                .map(|blk| {
                    Ok(MultiPrimalBlock {
                        b: MonotoneOp::from_prox(&blk.g)?,
                        offset: blk.offset.clone(),
                        l: blk.l.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// `f(x) + Σ g_i(L_i x - o_i) - ⟨x, z⟩`.
    pub fn objective(&self, x: &Vector) -> Result<f64> {
        let mut total = self.f.value(x)? - x.dot(&self.z);
        for blk in &self.blocks {
            total += blk.g.value(&blk.l.apply(x)?.sub(&blk.offset))?;
        }
        Ok(total)
    }
}

/// `z_i ∈ A_i x_i + L_i* D(Σ L_j x_j - o)` with a shared dual.
#[derive(Clone, Debug)]
pub struct CoupledProblem {
    d: MonotoneOp,
    offset: Vector,
    blocks: Vec<CoupledBlock>,
}

#[derive(Clone, Debug)]
pub struct CoupledBlock {
    pub a: MonotoneOp,
    pub z: Vector,
    pub l: LinearMap,
}

impl CoupledProblem {
    pub fn new(d: MonotoneOp, offset: Vector, blocks: Vec<CoupledBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(
                "coupled problem needs at least one block".into(),
            ));
        }
        offset.check_dim(d.dim(), "coupling offset o")?;
        for (i, blk) in blocks.iter().enumerate() {
            if blk.l.codomain_dim() != d.dim() {
                return Err(Error::DimensionMismatch {
                    context: "coupled block map codomain",
                    expected: d.dim(),
                    actual: blk.l.codomain_dim(),
                });
            }
            if blk.a.dim() != blk.l.domain_dim() {
                return Err(Error::Spec {
                    field: format!("blocks[{i}]"),
                    message: format!(
                        "operator dimension {} does not match map domain {}",
                        blk.a.dim(),
                        blk.l.domain_dim()
                    ),
                });
            }
            blk.z.check_dim(blk.l.domain_dim(), "block offset z_i")?;
        }
        Ok(CoupledProblem { d, offset, blocks })
    }

    pub fn primal_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.l.domain_dim()).collect()
    }

    pub fn dual_dim(&self) -> usize {
        self.d.dim()
    }

    pub fn blocks(&self) -> &[CoupledBlock] {
        &self.blocks
    }

    /// The composite problem the solver actually runs.
    pub fn reduced(&self) -> Result<CompositeProblem> {
        let a = product(
            self.blocks
                .iter()
                .map(|blk| blk.a.clone().shift_input(blk.z.clone()))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let b = self.d.clone().shift_graph(self.offset.clone())?;
        let l = LinearMap::column_sum(self.blocks.iter().map(|blk| blk.l.clone()).collect())?;
        CompositeProblem::new(a, b, l)
    }
}

/// Result of a primal-dual solve. Single-operator problems carry one
/// block on each side.
#[derive(Clone, Debug)]
pub struct PrimalDualSolution {
    pub primal: BlockVector,
    pub dual: BlockVector,
    pub status: RunStatus,
    pub iterations: usize,
    pub rho_primal: f64,
    pub rho_dual: f64,
    /// Final primal objective, reported by the minimization solver only.
    pub objective: Option<f64>,
    /// How often the drift guard re-projected the mirrored variables.
    pub reprojection_events: usize,
    pub history: Vec<ConvergenceRecord>,
}

impl PrimalDualSolution {
    /// The primal point of a single-block solution.
    pub fn primal_point(&self) -> &Vector {
        self.primal.block(0)
    }

    /// The dual point of a single-block solution.
    pub fn dual_point(&self) -> &Vector {
        self.dual.block(0)
    }
}

/// Outcome of driving an engine to termination.
struct DriveOutcome {
    state: PdState,
    status: RunStatus,
    iterations: usize,
    rho_primal: f64,
    rho_dual: f64,
    reprojections: usize,
    history: Vec<ConvergenceRecord>,
}

/// Runs an engine until the certificate residuals `ρ_P + ρ_D` fall below
/// `tol`, divergence is detected, or the budget runs out. Residuals are
/// evaluated by [`kkt_residual`] on the current `(x, v)` each iteration,
/// independent of the engine's auxiliary variables.
fn drive(engine: &mut PdEngine<'_>, config: &SolverConfig) -> Result<DriveOutcome> {
    config.validate()?;
    let problem = engine.problem();
    let n_dim = problem.primal_dim();
    let m_dim = problem.dual_dim();
    let mut history: Vec<ConvergenceRecord> = Vec::new();
    let mut last_step_norm = 0.0;

    let mut n = 0;
    loop {
        let (rho_primal, rho_dual) = kkt_residual(
            problem.primal_op(),
            problem.dual_op(),
            problem.map(),
            &engine.state().x,
            &engine.state().v,
        )?;
        let record = ConvergenceRecord {
            iteration: n,
            rho_primal,
            rho_dual,
            step_norm: last_step_norm,
            subspace_drift: engine.state().drift(problem.map())?,
            asymptotic_q1: 0.0,
            asymptotic_q2: 0.0,
        };

        let mut decision = should_stop(&record, config);
        // negated comparison so NaN magnitudes count as divergent
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if decision == StopDecision::Continue && !(engine.state().magnitude() <= DIVERGENCE_LIMIT) {
            decision = StopDecision::Diverged;
        }
        let out_of_budget = n == config.max_iter;

        let lambda = config.relaxation.value(n);
        let a_err = config.errors.sample(n, n_dim, 0);
        let b_err = config.errors.sample(n, m_dim, 1);

        if decision != StopDecision::Continue || out_of_budget {
            // evaluate the vanishing quantities at the terminal state
            let probe = engine.probe(lambda, &a_err, &b_err)?;
            history.push(ConvergenceRecord {
                step_norm: 0.0,
                asymptotic_q1: probe.q1,
                asymptotic_q2: probe.q2,
                ..record
            });
            let status = match decision {
                StopDecision::Converged => RunStatus::Converged,
                StopDecision::Diverged => RunStatus::Diverged,
                StopDecision::Continue => RunStatus::MaxIter,
            };
            return Ok(DriveOutcome {
                state: engine.state().clone(),
                status,
                iterations: n,
                rho_primal,
                rho_dual,
                reprojections: engine.reprojections(),
                history,
            });
        }

        let info = engine.step(lambda, &a_err, &b_err)?;
        if n % config.history_stride == 0 {
            history.push(ConvergenceRecord {
                step_norm: info.step_norm,
                asymptotic_q1: info.q1,
                asymptotic_q2: info.q2,
                ..record
            });
        }
        last_step_norm = info.step_norm;
        n += 1;
    }
}

fn single_block_solution(out: DriveOutcome) -> Result<PrimalDualSolution> {
    Ok(PrimalDualSolution {
        primal: BlockVector::new(vec![out.state.x])?,
        dual: BlockVector::new(vec![out.state.v])?,
        status: out.status,
        iterations: out.iterations,
        rho_primal: out.rho_primal,
        rho_dual: out.rho_dual,
        objective: None,
        reprojection_events: out.reprojections,
        history: out.history,
    })
}

/// Solves the composite inclusion through `Q = (Id + L*L)^{-1}`.
pub fn solve_q_form(
    problem: &CompositeProblem,
    x0: &Vector,
    v0: &Vector,
    config: &SolverConfig,
) -> Result<PrimalDualSolution> {
    let mut engine = PdEngine::new(problem, PdVariant::QForm, x0.clone(), v0.clone())?;
    single_block_solution(drive(&mut engine, config)?)
}

/// Solves the composite inclusion through `R = (Id + LL*)^{-1}`.
pub fn solve_r_form(
    problem: &CompositeProblem,
    x0: &Vector,
    v0: &Vector,
    config: &SolverConfig,
) -> Result<PrimalDualSolution> {
    let mut engine = PdEngine::new(problem, PdVariant::RForm, x0.clone(), v0.clone())?;
    single_block_solution(drive(&mut engine, config)?)
}

/// Solves the multi-operator primal inclusion; duals come back one block
/// per `(B_i, o_i, L_i)` triple.
pub fn solve_multi_primal(
    problem: &MultiPrimalProblem,
    x0: &Vector,
    v0: &[Vector],
    config: &SolverConfig,
) -> Result<PrimalDualSolution> {
    let dual_dims = problem.dual_dims();
    if v0.len() != dual_dims.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} dual blocks, got {}",
            dual_dims.len(),
            v0.len()
        )));
    }
    for (i, (v, &d)) in v0.iter().zip(&dual_dims).enumerate() {
        if v.dim() != d {
            return Err(Error::Spec {
                field: format!("v0[{i}]"),
                message: format!("expected dimension {d}, got {}", v.dim()),
            });
        }
    }
    let reduced = problem.reduced()?;
    let v0_flat = BlockVector::new(v0.to_vec())?.flatten();
    let mut engine = PdEngine::new(&reduced, PdVariant::QForm, x0.clone(), v0_flat)?;
    let out = drive(&mut engine, config)?;
    Ok(PrimalDualSolution {
        primal: BlockVector::new(vec![out.state.x])?,
        dual: BlockVector::from_flat(&dual_dims, &out.state.v)?,
        status: out.status,
        iterations: out.iterations,
        rho_primal: out.rho_primal,
        rho_dual: out.rho_dual,
        objective: None,
        reprojection_events: out.reprojections,
        history: out.history,
    })
}

/// Solves the structured minimization problem and reports the final
/// primal objective value alongside the certificates.
pub fn solve_multi_min(
    problem: &MinimizationProblem,
    x0: &Vector,
    v0: &[Vector],
    config: &SolverConfig,
) -> Result<PrimalDualSolution> {
    let multi = problem.to_multi_primal()?;
    let mut solution = solve_multi_primal(&multi, x0, v0, config)?;
    solution.objective = Some(problem.objective(solution.primal_point())?);
    Ok(solution)
}

/// Solves the coupled inclusion; primals come back one block per
/// `(A_i, z_i, L_i)` triple.
pub fn solve_coupled(
    problem: &CoupledProblem,
    x0: &[Vector],
    v0: &Vector,
    config: &SolverConfig,
) -> Result<PrimalDualSolution> {
    let primal_dims = problem.primal_dims();
    if x0.len() != primal_dims.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} primal blocks, got {}",
            primal_dims.len(),
            x0.len()
        )));
    }
    for (i, (x, &d)) in x0.iter().zip(&primal_dims).enumerate() {
        if x.dim() != d {
            return Err(Error::Spec {
                field: format!("x0[{i}]"),
                message: format!("expected dimension {d}, got {}", x.dim()),
            });
        }
    }
    let reduced = problem.reduced()?;
    let x0_flat = BlockVector::new(x0.to_vec())?.flatten();
    let mut engine = PdEngine::new(&reduced, PdVariant::RForm, x0_flat, v0.clone())?;
    let out = drive(&mut engine, config)?;
    Ok(PrimalDualSolution {
        primal: BlockVector::from_flat(&primal_dims, &out.state.x)?,
        dual: BlockVector::new(vec![out.state.v])?,
        status: out.status,
        iterations: out.iterations,
        rho_primal: out.rho_primal,
        rho_dual: out.rho_dual,
        objective: None,
        reprojection_events: out.reprojections,
        history: out.history,
    })
}
