//! A coupled inclusion: two agents, each pulled toward 3, sharing an
//! l1 penalty on the sum of their positions:
//!
//! ```text
//! z_i ∈ A_i x_i + L_i* D(x_1 + x_2)      A_i = Id, z_i = 3, D = ∂|·|
//! ```
//!
//! Stationarity gives x_i = 3 - v with v ∈ ∂|x_1 + x_2|, so the solution
//! is x = (2, 2) with shared dual v = 1.
//!
//! Run with: cargo run --example coupled_inclusions

use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::pd_solvers::{solve_coupled, CoupledBlock, CoupledProblem};
use spingarn::pinv_engine::SolverConfig;
use spingarn::{LinearMap, Vector};

fn main() -> spingarn::Result<()> {
    let block = |target: f64| -> spingarn::Result<CoupledBlock> {
        Ok(CoupledBlock {
            a: MonotoneOp::scaled_identity(1, 1.0)?,
            z: Vector::new(vec![target])?,
            l: LinearMap::identity(1)?,
        })
    };
    let problem = CoupledProblem::new(
        MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0)?)?,
        Vector::zeros(1),
        vec![block(3.0)?, block(3.0)?],
    )?;

    let solution = solve_coupled(
        &problem,
        &[Vector::zeros(1), Vector::zeros(1)],
        &Vector::zeros(1),
        &SolverConfig::default(),
    )?;

    println!("status     : {}", solution.status);
    println!("iterations : {}", solution.iterations);
    for (i, x) in solution.primal.blocks().iter().enumerate() {
        println!("x_{}        : {:.9}", i + 1, x.get(0));
    }
    println!("shared dual: {:.9}", solution.dual_point().get(0));
    println!(
        "certificates: rho_P = {:.3e}, rho_D = {:.3e}",
        solution.rho_primal, solution.rho_dual
    );
    Ok(())
}
