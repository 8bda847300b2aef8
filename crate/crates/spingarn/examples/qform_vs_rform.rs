//! The Q-form recursion works through `(Id + L*L)^{-1}` on the primal
//! space, the R-form through `(Id + LL*)^{-1}` on the dual space. Both
//! realize the same partial-inverse iteration, so their iterates agree to
//! rounding error. This example runs them in lockstep on a random
//! quadratic instance (what `spingarn compare` does for spec files).
//!
//! Run with: cargo run --example qform_vs_rform

use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::oracles::sampling;
use spingarn::pd_solvers::{CompositeProblem, PdVariant};
use spingarn::{LinearMap, Vector};

fn main() -> spingarn::Result<()> {
    let mut rng = sampling::rng(7);
    let n = 4;
    let m = 6;
    let a = MonotoneOp::from_prox(&ProxSpec::quadratic(
        sampling::strongly_monotone_psd(&mut rng, n),
        sampling::vector(&mut rng, n),
        1.0,
    )?)?;
    let b = MonotoneOp::from_prox(&ProxSpec::quadratic(
        sampling::strongly_monotone_psd(&mut rng, m),
        sampling::vector(&mut rng, m),
        1.0,
    )?)?;
    let l = LinearMap::dense(sampling::matrix(&mut rng, m, n));
    let problem = CompositeProblem::new(a, b, l)?;

    let x0 = sampling::vector(&mut rng, n);
    let v0 = sampling::vector(&mut rng, m);
    let mut q = problem.engine(PdVariant::QForm, x0.clone(), v0.clone())?;
    let mut r = problem.engine(PdVariant::RForm, x0, v0)?;

    let zero_a = Vector::zeros(n);
    let zero_b = Vector::zeros(m);
    let mut worst: f64 = 0.0;
    for step in 1..=200 {
        q.step(1.0, &zero_a, &zero_b)?;
        r.step(1.0, &zero_a, &zero_b)?;
        let d = q.state().x.sub(&r.state().x).norm()
            + q.state().y.sub(&r.state().y).norm()
            + q.state().u.sub(&r.state().u).norm()
            + q.state().v.sub(&r.state().v).norm();
        worst = worst.max(d);
        if step % 50 == 0 {
            println!("step {step:3}: iterate discrepancy {d:.3e}");
        }
    }
    println!("worst discrepancy over 200 iterations: {worst:.3e}");
    Ok(())
}
