//! The partial inverse A_V interpolates between an operator and its
//! inverse: its graph swaps the V⊥-components of points and values. This
//! example builds one directly, evaluates its resolvent through the
//! projector characterization, and runs the partial-inverse method on
//! the problem `find x ∈ V, u ∈ V⊥ with u ∈ Ax`.
//!
//! Run with: cargo run --example partial_inverse_basics

use spingarn::monotone_ops::{MonotoneOp, SubspaceProjectorPair};
use spingarn::oracles::{partial_inverse_matrix, LinearOperatorOracle};
use spingarn::pinv_engine::{spingarn_run, SolverConfig};
use spingarn::{Matrix, Vector};

fn main() -> spingarn::Result<()> {
    // A = diag(1, 3), V = span{e1}
    let a_matrix = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 3.0]])?;
    let e1 = Vector::new(vec![1.0, 0.0])?;

    // resolvent of A_V through the projector characterization
    let proj = SubspaceProjectorPair::span(2, std::slice::from_ref(&e1))?;
    let a = MonotoneOp::linear(a_matrix.clone())?;
    let a_v = a.clone().partial_inverse(proj.clone())?;
    let z = Vector::new(vec![2.0, 4.0])?;
    let p = a_v.resolve(&z)?;
    println!(
        "J_(A_V)(2, 4)          = ({:.6}, {:.6})",
        p.get(0),
        p.get(1)
    );

    // the same resolvent assembled from the graph definition
    let oracle = LinearOperatorOracle::new(a_matrix, vec![e1])?;
    let matrix = partial_inverse_matrix(&oracle)?;
    println!(
        "graph-built resolvent  = [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        matrix.get(0, 0),
        matrix.get(0, 1),
        matrix.get(1, 0),
        matrix.get(1, 1)
    );

    // solve: x ∈ V, u ∈ V⊥, u = x - (1, 1); solution x = (1, 0), u = (0, -1)
    let affine = MonotoneOp::from_prox(&spingarn::ProxSpec::quadratic(
        Matrix::identity(2),
        Vector::new(vec![1.0, 1.0])?,
        1.0,
    )?)?;
    let outcome = spingarn_run(
        &affine,
        &proj,
        Vector::zeros(2),
        Vector::zeros(2),
        &SolverConfig::default(),
    )?;
    println!(
        "partial-inverse method : status {}, {} iterations",
        outcome.status, outcome.iterations
    );
    println!(
        "  x = ({:.9}, {:.9}) in V",
        outcome.x.get(0),
        outcome.x.get(1)
    );
    println!(
        "  u = ({:.9}, {:.9}) in V⊥, certificate residual {:.3e}",
        outcome.u.get(0),
        outcome.u.get(1),
        outcome.residual
    );
    Ok(())
}
