//! A multi-operator inclusion: find x with
//! `z ∈ Cx + Σ L_i* B_i(L_i x - o_i)`, here a 2-D quadratic pulled toward
//! z = (4, 2) under a box-constrained difference and a shifted l1 term.
//! Each block gets its own dual certificate.
//!
//! Run with: cargo run --example multi_operator_primal

use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::pd_solvers::{solve_multi_primal, MultiPrimalBlock, MultiPrimalProblem};
use spingarn::pinv_engine::SolverConfig;
use spingarn::{LinearMap, Matrix, Vector};

fn main() -> spingarn::Result<()> {
    let c = MonotoneOp::from_prox(&ProxSpec::quadratic(
        Matrix::identity(2),
        Vector::zeros(2),
        1.0,
    )?)?;
    let blocks = vec![
        // B_1 = normal cone of [-0.5, 0.5] composed with x1 - x2
        MultiPrimalBlock {
            b: MonotoneOp::from_prox(&ProxSpec::box_indicator(
                Vector::new(vec![-0.5])?,
                Vector::new(vec![0.5])?,
            )?)?,
            offset: Vector::zeros(1),
            l: LinearMap::dense(Matrix::from_rows(&[vec![1.0, -1.0]])?),
        },
        // B_2 = ∂(0.25 |·|_1) around the offset (0.1, -0.1)
        MultiPrimalBlock {
            b: MonotoneOp::from_prox(&ProxSpec::l1(2, 0.25)?)?,
            offset: Vector::new(vec![0.1, -0.1])?,
            l: LinearMap::dense(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.5]])?),
        },
    ];
    let problem = MultiPrimalProblem::new(c, Vector::new(vec![4.0, 2.0])?, blocks)?;

    let solution = solve_multi_primal(
        &problem,
        &Vector::zeros(2),
        &[Vector::zeros(1), Vector::zeros(2)],
        &SolverConfig::default(),
    )?;

    println!("status     : {}", solution.status);
    println!("iterations : {}", solution.iterations);
    let x = solution.primal_point();
    println!("x          : ({:.9}, {:.9})", x.get(0), x.get(1));
    for (i, v) in solution.dual.blocks().iter().enumerate() {
        println!("dual v_{}   : {:?}", i + 1, v.as_slice());
    }
    println!(
        "certificates: rho_P = {:.3e}, rho_D = {:.3e}",
        solution.rho_primal, solution.rho_dual
    );
    Ok(())
}
