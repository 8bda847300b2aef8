//! Structured minimization through the subdifferential reduction:
//! minimize ½x² + |x| - 3x. The minimizer is x = 2, the dual certificate
//! v = 1, and the optimal value -2.
//!
//! Run with: cargo run --example structured_minimization

use spingarn::monotone_ops::ProxSpec;
use spingarn::pd_solvers::{solve_multi_min, MinimizationBlock, MinimizationProblem};
use spingarn::pinv_engine::SolverConfig;
use spingarn::{LinearMap, Matrix, Vector};

fn main() -> spingarn::Result<()> {
    let problem = MinimizationProblem::new(
        ProxSpec::quadratic(Matrix::identity(1), Vector::zeros(1), 1.0)?,
        Vector::new(vec![3.0])?,
        vec![MinimizationBlock {
            g: ProxSpec::l1(1, 1.0)?,
            offset: Vector::zeros(1),
            l: LinearMap::identity(1)?,
        }],
    )?;

    let solution = solve_multi_min(
        &problem,
        &Vector::zeros(1),
        &[Vector::zeros(1)],
        &SolverConfig::default(),
    )?;

    println!("status    : {}", solution.status);
    println!("minimizer : {:.9}", solution.primal_point().get(0));
    println!("dual      : {:.9}", solution.dual.block(0).get(0));
    println!("objective : {:.9}", solution.objective.unwrap());
    println!(
        "residuals : rho_P = {:.3e}, rho_D = {:.3e}",
        solution.rho_primal, solution.rho_dual
    );
    Ok(())
}
