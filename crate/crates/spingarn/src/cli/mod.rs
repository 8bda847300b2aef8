//! Command implementations behind the `spingarn` binary.
//!
//! Exit codes: 0 success/converged, 1 argument or spec validation
//! failure, 2 iteration budget exhausted (or a check exceeding its
//! tolerance), 3 divergence.

pub mod checks;
pub mod spec_file;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::diagnostics::{write_history_csv, RunStatus};
use crate::error::Result;
use crate::linops::{BlockVector, Vector};
use crate::pd_solvers::{
    solve_coupled, solve_multi_min, solve_multi_primal, solve_q_form, solve_r_form, PdVariant,
    PrimalDualSolution,
};

use spec_file::{BuiltProblem, ProblemVariant, SolverChoice};

/// Which verification suite `check` runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Projections,
    PartialInverse,
    FirmNonexpansive,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Projections => "projections",
            CheckKind::PartialInverse => "partial_inverse",
            CheckKind::FirmNonexpansive => "firm_nonexpansive",
        }
    }
}

/// Tolerance the `check` suites must meet.
pub const CHECK_TOLERANCE: f64 = 1e-8;

/// Tolerance for the lockstep `compare` command.
pub const COMPARE_TOLERANCE: f64 = 1e-9;

fn fail(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    1
}

fn load(spec_path: &Path) -> std::result::Result<BuiltProblem, String> {
    let text = fs::read_to_string(spec_path)
        .map_err(|e| format!("cannot read spec file {}: {e}", spec_path.display()))?;
    let parsed = spec_file::parse(&text).map_err(|e| e.to_string())?;
    spec_file::build(&parsed).map_err(|e| e.to_string())
}

fn dispatch(built: &BuiltProblem) -> Result<PrimalDualSolution> {
    let BuiltProblem {
        problem,
        solver,
        config,
        x0,
        v0,
    } = built;
    match problem {
        ProblemVariant::Composite(p) => {
            let variant = match solver {
                SolverChoice::QForm => PdVariant::QForm,
                SolverChoice::RForm => PdVariant::RForm,
                SolverChoice::Auto => {
                    if p.primal_dim() <= p.dual_dim() {
                        PdVariant::QForm
                    } else {
                        PdVariant::RForm
                    }
                }
            };
            match variant {
                PdVariant::QForm => solve_q_form(p, x0, v0, config),
                PdVariant::RForm => solve_r_form(p, x0, v0, config),
            }
        }
        ProblemVariant::MultiPrimal(p) => {
            let v_blocks = BlockVector::from_flat(&p.dual_dims(), v0)?;
            solve_multi_primal(p, x0, v_blocks.blocks(), config)
        }
        ProblemVariant::MultiMin(p) => {
            let dims = p.to_multi_primal()?.dual_dims();
            let v_blocks = BlockVector::from_flat(&dims, v0)?;
            solve_multi_min(p, x0, v_blocks.blocks(), config)
        }
        ProblemVariant::Coupled(p) => {
            let x_blocks = BlockVector::from_flat(&p.primal_dims(), x0)?;
            solve_coupled(p, x_blocks.blocks(), v0, config)
        }
    }
}

/// `solve <spec> [--out <csv>]`: run the requested solver, optionally
/// write the convergence history, print one summary line.
pub fn cmd_solve(spec_path: &Path, out_csv: Option<&Path>, summary: bool) -> i32 {
    let built = match load(spec_path) {
        Ok(b) => b,
        Err(m) => return fail(m),
    };
    let solution = match dispatch(&built) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };

    if let Some(path) = out_csv {
        let write_result = fs::File::create(path)
            .map_err(crate::error::Error::from)
            .and_then(|mut f| {
                write_history_csv(&solution.history, &mut f)?;
                f.flush()?;
                Ok(())
            });
        if let Err(e) = write_result {
            return fail(format!("cannot write history to {}: {e}", path.display()));
        }
    }

    if solution.reprojection_events > 0 {
        eprintln!(
            "note: drift guard re-projected auxiliary variables {} time(s)",
            solution.reprojection_events
        );
    }
    if summary {
        println!(
            "{} {} {:.11e} {:.11e}",
            solution.status, solution.iterations, solution.rho_primal, solution.rho_dual
        );
        if let Some(obj) = solution.objective {
            println!("objective {obj:.11e}");
        }
    }
    match solution.status {
        RunStatus::Converged => 0,
        RunStatus::MaxIter => 2,
        RunStatus::Diverged => 3,
    }
}

/// `check <kind> --dims NxM --trials T --seed S`: run a randomized
/// invariant suite and compare its worst deviation against
/// [`CHECK_TOLERANCE`].
pub fn cmd_check(kind: CheckKind, dims: (usize, usize), trials: usize, seed: u64) -> i32 {
    if trials == 0 {
        return fail("trials must be at least 1");
    }
    if dims.0 == 0 || dims.1 == 0 {
        return fail("dims must be positive");
    }
    let deviation = match kind {
        CheckKind::Projections => checks::projection_identities(dims.0, dims.1, trials, seed),
        CheckKind::PartialInverse => checks::partial_inverse_equivalence(dims.0, trials, seed),
        CheckKind::FirmNonexpansive => checks::firm_nonexpansiveness(trials, seed),
    };
    match deviation {
        Ok(dev) => {
            println!(
                "{} max deviation {dev:.11e} over {trials} trials",
                kind.name()
            );
            if dev <= CHECK_TOLERANCE {
                0
            } else {
                2
            }
        }
        Err(e) => fail(e),
    }
}

/// `compare <spec> --iters N`: run both composite recursions in lockstep
/// with zero errors and report the largest iterate discrepancy.
pub fn cmd_compare(spec_path: &Path, iterations: usize) -> i32 {
    let built = match load(spec_path) {
        Ok(b) => b,
        Err(m) => return fail(m),
    };
    let problem = match &built.problem {
        ProblemVariant::Composite(p) => p,
        other => {
            return fail(format!(
                "compare needs a composite problem, got kind `{}`",
                other.kind_name()
            ))
        }
    };
    let run = || -> Result<f64> {
        let mut q = problem.engine(PdVariant::QForm, built.x0.clone(), built.v0.clone())?;
        let mut r = problem.engine(PdVariant::RForm, built.x0.clone(), built.v0.clone())?;
        let a_zero = Vector::zeros(problem.primal_dim());
        let b_zero = Vector::zeros(problem.dual_dim());
        let mut worst: f64 = 0.0;
        for n in 0..iterations {
            let lambda = built.config.relaxation.value(n);
            q.step(lambda, &a_zero, &b_zero)?;
            r.step(lambda, &a_zero, &b_zero)?;
            let (qs, rs) = (q.state(), r.state());
            let d =
                qs.x.sub(&rs.x)
                    .norm_inf()
                    .max(qs.y.sub(&rs.y).norm_inf())
                    .max(qs.u.sub(&rs.u).norm_inf())
                    .max(qs.v.sub(&rs.v).norm_inf());
            worst = worst.max(d);
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => {
            println!("max iterate discrepancy {worst:.11e} over {iterations} iterations");
            if worst <= COMPARE_TOLERANCE {
                0
            } else {
                2
            }
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn fixture(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(name)
    }

    #[test]
    fn solve_missing_file_is_arg_error() {
        let code = cmd_solve(Path::new("/nonexistent/spec.json"), None, false);
        assert_eq!(code, 1);
    }

    #[test]
    fn check_rejects_zero_trials() {
        assert_eq!(cmd_check(CheckKind::Projections, (4, 4), 0, 1), 1);
    }

    #[test]
    fn check_suites_pass() {
        assert_eq!(cmd_check(CheckKind::Projections, (6, 5), 25, 3), 0);
        assert_eq!(cmd_check(CheckKind::PartialInverse, (4, 4), 20, 4), 0);
        assert_eq!(cmd_check(CheckKind::FirmNonexpansive, (3, 3), 40, 5), 0);
    }

    #[test]
    fn solve_and_compare_lasso_fixture() {
        let lasso = fixture("lasso.json");
        assert_eq!(cmd_solve(&lasso, None, false), 0);
        assert_eq!(cmd_compare(&lasso, 200), 0);
        assert_eq!(cmd_compare(&lasso, 0), 0);
    }
}
