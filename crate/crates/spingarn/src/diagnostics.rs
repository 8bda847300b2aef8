//! Residual certificates, stopping logic, and convergence history.
//!
//! A pair `(x, v)` solves the composite inclusion and its dual exactly when
//! `-L*v ∈ Ax` and `v ∈ BLx`, which in resolvent form reads
//! `x = J_A(x - L*v)` and `Lx = J_B(Lx + v)`. The residuals of those two
//! fixed-point equations are the certificates everything here reports.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linops::{LinearMap, Vector};
use crate::monotone_ops::MonotoneOp;
use crate::pinv_engine::SolverConfig;

/// Magnitude beyond which an iteration is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Terminal state of a solver run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIter,
    Diverged,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIter => "max_iter",
            RunStatus::Diverged => "diverged",
        })
    }
}

/// Per-iteration decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    Converged,
    Diverged,
}

/// One row of convergence history.
///
/// `asymptotic_q1` and `asymptotic_q2` are the vanishing quantities of the
/// underlying convergence theory (`||x_n - w_n||` and `||u_n - r_n + t_n||`
/// for the primal-dual solvers; the two subspace diagnostics for the
/// partial-inverse engine).
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRecord {
    pub iteration: usize,
    pub rho_primal: f64,
    pub rho_dual: f64,
    pub step_norm: f64,
    pub subspace_drift: f64,
    pub asymptotic_q1: f64,
    pub asymptotic_q2: f64,
}

/// Residuals of the primal-dual fixed-point characterization:
/// `ρ_P = ||x - J_A(x - L*v)||` and `ρ_D = ||Lx - J_B(Lx + v)||`.
///
/// Both vanish exactly on primal-dual solution pairs.
pub fn kkt_residual(
    a: &MonotoneOp,
    b: &MonotoneOp,
    l: &LinearMap,
    x: &Vector,
    v: &Vector,
) -> Result<(f64, f64)> {
    x.check_dim(l.domain_dim(), "KKT residual primal point")?;
    v.check_dim(l.codomain_dim(), "KKT residual dual point")?;
    if a.dim() != l.domain_dim() {
        return Err(Error::DimensionMismatch {
            context: "KKT residual primal operator",
            expected: l.domain_dim(),
            actual: a.dim(),
        });
    }
    if b.dim() != l.codomain_dim() {
        return Err(Error::DimensionMismatch {
            context: "KKT residual dual operator",
            expected: l.codomain_dim(),
            actual: b.dim(),
        });
    }
    let lx = l.apply(x)?;
    let rho_primal = x.sub(&a.resolve(&x.sub(&l.adjoint_apply(v)?))?).norm();
    let rho_dual = lx.sub(&b.resolve(&lx.add(v))?).norm();
    Ok((rho_primal, rho_dual))
}

/// Stopping rule: converged when `ρ_P + ρ_D <= tol`, diverged when any
/// recorded magnitude exceeds [`DIVERGENCE_LIMIT`] (NaN counts as
/// divergent).
pub fn should_stop(record: &ConvergenceRecord, config: &SolverConfig) -> StopDecision {
    let finite_and_small = |v: f64| v.abs() <= DIVERGENCE_LIMIT;
    if !finite_and_small(record.rho_primal)
        || !finite_and_small(record.rho_dual)
        || !finite_and_small(record.step_norm)
    {
        return StopDecision::Diverged;
    }
    if record.rho_primal + record.rho_dual <= config.tol {
        return StopDecision::Converged;
    }
    StopDecision::Continue
}

/// Writes history as CSV: a fixed header then one row per record in
/// iteration order. Floats are printed with 17 significant digits so the
/// output is byte-stable and round-trips exactly.
pub fn write_history_csv<W: Write>(history: &[ConvergenceRecord], mut sink: W) -> Result<()> {
    if history.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot write CSV for an empty history".into(),
        ));
    }
    writeln!(
        sink,
        "iter,rho_primal,rho_dual,step_norm,subspace_drift,q1,q2"
    )?;
    for r in history {
        writeln!(
            sink,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.iteration,
            r.rho_primal,
            r.rho_dual,
            r.step_norm,
            r.subspace_drift,
            r.asymptotic_q1,
            r.asymptotic_q2
        )?;
    }
    Ok(())
}
