//! Under- and over-relaxation and the summable error model. Any
//! relaxation sequence in (0, 2) with divergent Σ λ(2-λ) converges, and
//! resolvent errors with Σ λ‖e‖ < ∞ do not move the limit.
//!
//! Run with: cargo run --example relaxation_and_errors

use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::pd_solvers::{solve_q_form, CompositeProblem};
use spingarn::pinv_engine::{ErrorSchedule, RelaxationSchedule, SolverConfig};
use spingarn::{LinearMap, Matrix, Vector};

fn main() -> spingarn::Result<()> {
    let a = MonotoneOp::from_prox(&ProxSpec::quadratic(
        Matrix::identity(1),
        Vector::new(vec![3.0])?,
        1.0,
    )?)?;
    let b = MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0)?)?;
    let problem = CompositeProblem::new(a, b, LinearMap::identity(1)?)?;
    let x0 = Vector::zeros(1);
    let v0 = Vector::zeros(1);

    println!("constant relaxation sweep:");
    for lambda in [0.5, 1.0, 1.5, 1.9] {
        let config = SolverConfig::default().with_relaxation(RelaxationSchedule::constant(lambda)?);
        let sol = solve_q_form(&problem, &x0, &v0, &config)?;
        println!(
            "  lambda {lambda:>4}: {} in {:4} iterations, x = {:.9}",
            sol.status,
            sol.iterations,
            sol.primal_point().get(0)
        );
    }

    let geometric = RelaxationSchedule::geometric(1.9, 1.0, 0.95)?;
    let sol = solve_q_form(
        &problem,
        &x0,
        &v0,
        &SolverConfig::default().with_relaxation(geometric),
    )?;
    println!(
        "geometric 1.9 -> 1.0 : {} in {:4} iterations, x = {:.9}",
        sol.status,
        sol.iterations,
        sol.primal_point().get(0)
    );

    println!("summable resolvent errors (norm 0.1/(n+1)^2):");
    let noisy = SolverConfig::default().with_errors(ErrorSchedule::inverse_square(0.1, 42)?);
    let sol = solve_q_form(&problem, &x0, &v0, &noisy)?;
    println!(
        "  {} in {:4} iterations, x = {:.9} (limit unchanged)",
        sol.status,
        sol.iterations,
        sol.primal_point().get(0)
    );
    Ok(())
}
