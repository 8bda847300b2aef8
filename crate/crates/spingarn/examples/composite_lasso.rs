//! Solve the 1-D composite inclusion 0 ∈ (x - 3) + ∂|x|: the scalar
//! soft-thresholding problem. The primal solution is x = 2 and the dual
//! certificate is v = 1 (so that -v ∈ Ax and v ∈ ∂|x|).
//!
//! Run with: cargo run --example composite_lasso

use spingarn::diagnostics::write_history_csv;
use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::pd_solvers::{solve_q_form, CompositeProblem};
use spingarn::pinv_engine::SolverConfig;
use spingarn::{LinearMap, Matrix, Vector};

fn main() -> spingarn::Result<()> {
    // A = ∂(½x² - 3x), i.e. A x = x - 3
    let a = MonotoneOp::from_prox(&ProxSpec::quadratic(
        Matrix::identity(1),
        Vector::new(vec![3.0])?,
        1.0,
    )?)?;
    // B = ∂|·|
    let b = MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0)?)?;
    let problem = CompositeProblem::new(a, b, LinearMap::identity(1)?)?;

    let config = SolverConfig::default();
    let solution = solve_q_form(&problem, &Vector::zeros(1), &Vector::zeros(1), &config)?;

    println!("status      : {}", solution.status);
    println!("iterations  : {}", solution.iterations);
    println!("primal      : {:.12}", solution.primal_point().get(0));
    println!("dual        : {:.12}", solution.dual_point().get(0));
    println!(
        "certificates: rho_P = {:.3e}, rho_D = {:.3e}",
        solution.rho_primal, solution.rho_dual
    );

    let mut csv = Vec::new();
    write_history_csv(&solution.history, &mut csv)?;
    println!(
        "history     : {} rows (pass --out to the CLI to write them)",
        solution.history.len()
    );
    println!("first rows  :");
    for line in String::from_utf8_lossy(&csv).lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
