//! Tour of the resolvent catalog and the operator algebra: evaluate each
//! proximity operator, then compose shifts, inverses, products, and a
//! partial inverse.
//!
//! Run with: cargo run --example operator_catalog

use spingarn::monotone_ops::{product, MonotoneOp, ProxSpec, SubspaceProjectorPair};
use spingarn::{Matrix, Vector};

fn show(label: &str, op: &MonotoneOp, z: &Vector) -> spingarn::Result<()> {
    let p = op.resolve(z)?;
    println!("{label:<28} J(z) = {:?}", p.as_slice());
    Ok(())
}

fn main() -> spingarn::Result<()> {
    let z2 = Vector::new(vec![3.0, -0.5])?;

    show(
        "l1 norm (soft threshold)",
        &MonotoneOp::from_prox(&ProxSpec::l1(2, 1.0)?)?,
        &z2,
    )?;
    show(
        "quadratic 1/2 |x|^2",
        &MonotoneOp::from_prox(&ProxSpec::quadratic(
            Matrix::identity(2),
            Vector::zeros(2),
            1.0,
        )?)?,
        &z2,
    )?;
    show(
        "box [0, 1]^2",
        &MonotoneOp::from_prox(&ProxSpec::box_indicator(
            Vector::zeros(2),
            Vector::new(vec![1.0, 1.0])?,
        )?)?,
        &z2,
    )?;
    show(
        "unit ball",
        &MonotoneOp::from_prox(&ProxSpec::euclidean_ball(Vector::zeros(2), 1.0)?)?,
        &z2,
    )?;
    show(
        "affine set x1 + x2 = 1",
        &MonotoneOp::from_prox(&ProxSpec::affine_set(
            Matrix::from_rows(&[vec![1.0, 1.0]])?,
            Vector::new(vec![1.0])?,
        )?)?,
        &z2,
    )?;

    println!();
    let l1 = MonotoneOp::from_prox(&ProxSpec::l1(2, 1.0)?)?;
    show("inverse of l1 (Moreau)", &l1.clone().inverse(), &z2)?;
    show(
        "input shift by (1, 1)",
        &l1.clone().shift_input(Vector::new(vec![1.0, 1.0])?)?,
        &z2,
    )?;
    show(
        "graph shift by (1, 1)",
        &l1.clone().shift_graph(Vector::new(vec![1.0, 1.0])?)?,
        &z2,
    )?;
    show(
        "product l1 x 2*Id",
        &product(vec![
            MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0)?)?,
            MonotoneOp::scaled_identity(1, 2.0)?,
        ])?,
        &z2,
    )?;
    show(
        "partial inverse over e1",
        &MonotoneOp::linear(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 3.0]])?)?
            .partial_inverse(SubspaceProjectorPair::span(
                2,
                &[Vector::new(vec![1.0, 0.0])?],
            )?)?,
        &Vector::new(vec![2.0, 4.0])?,
    )?;
    Ok(())
}
