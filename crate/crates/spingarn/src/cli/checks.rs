//! Randomized verification suites behind the `check` command.
//!
//! Each suite returns the largest deviation it observed; the command
//! compares that against its tolerance. The acceptance tests run the same
//! suites at their published dimensions and trial counts.

use rand_chacha::ChaCha8Rng;

use rand::Rng;

use crate::error::Result;
use crate::linops::{GramSide, GraphProjector, GraphSubspace, LinearMap, Vector};
use crate::monotone_ops::{product, MonotoneOp, ProxSpec, SubspaceProjectorPair};
use crate::oracles::{partial_inverse_matrix, sampling, LinearOperatorOracle};

/// Graph-projector identity suite: both formula sides agree, the pair
/// decomposes the identity, each projector is idempotent and
/// self-adjoint, outputs land in their subspaces, and graph points are
/// fixed. Shapes cycle through every [`LinearMap`] kind.
pub fn projection_identities(
    max_domain: usize,
    max_codomain: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let shape = sampling::MapShape::ALL[trial % sampling::MapShape::ALL.len()];
        let map = sampling::linear_map(&mut rng, shape, max_domain.max(1), max_codomain.max(1));
        worst = worst.max(projector_deviation(&mut rng, &map)?);
    }
    Ok(worst)
}

fn projector_deviation(rng: &mut ChaCha8Rng, map: &LinearMap) -> Result<f64> {
    let n = map.domain_dim();
    let m = map.codomain_dim();
    let primal = GraphProjector::with_side(map.clone(), GramSide::Primal)?;
    let dual = GraphProjector::with_side(map.clone(), GramSide::Dual)?;
    let z = sampling::vector(rng, n + m);
    let a = sampling::vector(rng, n + m);
    let b = sampling::vector(rng, n + m);

    let mut worst: f64 = 0.0;
    for onto in [GraphSubspace::V, GraphSubspace::VPerp] {
        let via_primal = primal.project_flat(&z, onto)?;
        let via_dual = dual.project_flat(&z, onto)?;
        worst = worst.max(via_primal.sub(&via_dual).norm());
    }
    for projector in [&primal, &dual] {
        let pv = projector.project_flat(&z, GraphSubspace::V)?;
        let pperp = projector.project_flat(&z, GraphSubspace::VPerp)?;
        // decomposition and contraction
        worst = worst.max(pv.add(&pperp).sub(&z).norm());
        worst = worst.max((pv.norm() - z.norm()).max(0.0));
        // idempotence
        worst = worst.max(
            projector
                .project_flat(&pv, GraphSubspace::V)?
                .sub(&pv)
                .norm(),
        );
        worst = worst.max(
            projector
                .project_flat(&pperp, GraphSubspace::VPerp)?
                .sub(&pperp)
                .norm(),
        );
        // self-adjointness via <P a, b> = <a, P b>
        let pa = projector.project_flat(&a, GraphSubspace::V)?;
        let pb = projector.project_flat(&b, GraphSubspace::V)?;
        worst = worst.max((pa.dot(&b) - a.dot(&pb)).abs());
        // subspace membership of the outputs
        let x_hat = Vector::new(pv.as_slice()[..n].to_vec())?;
        let y_hat = Vector::new(pv.as_slice()[n..].to_vec())?;
        worst = worst.max(map.apply(&x_hat)?.sub(&y_hat).norm());
        let u_hat = Vector::new(pperp.as_slice()[..n].to_vec())?;
        let v_hat = Vector::new(pperp.as_slice()[n..].to_vec())?;
        worst = worst.max(u_hat.add(&map.adjoint_apply(&v_hat)?).norm());
        // points of the graph are fixed by P_V
        let x = sampling::vector(rng, n);
        let lx = map.apply(&x)?;
        let mut graph_point = x.clone().into_coords();
        graph_point.extend_from_slice(lx.as_slice());
        let graph_point = Vector::new(graph_point)?;
        worst = worst.max(
            projector
                .project_flat(&graph_point, GraphSubspace::V)?
                .sub(&graph_point)
                .norm(),
        );
    }
    Ok(worst)
}

/// Partial-inverse equivalence suite: the resolvent assembled from the
/// projector characterization must match the matrix the oracle builds
/// straight from the graph definition. Operator dimensions are sampled
/// up to `max_n`, subspace dimensions over the full range `0..=n`.
pub fn partial_inverse_equivalence(max_n: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.random_range(1..=max_n);
        let a = sampling::monotone_matrix(&mut rng, n);
        let k = rng.random_range(0..=n);
        let basis = sampling::orthonormal_basis(&mut rng, n, k);
        let oracle = LinearOperatorOracle::new(a.clone(), basis.clone())?;
        let resolvent = partial_inverse_matrix(&oracle)?;
        let proj = SubspaceProjectorPair::span(n, &basis)?;
        let op = MonotoneOp::linear(a)?.partial_inverse(proj)?;
        for _ in 0..5 {
            let z = sampling::vector(&mut rng, n);
            let reference = Vector::from_raw(resolvent.apply(z.as_slice()));
            let computed = op.resolve(&z)?;
            worst = worst.max(reference.sub(&computed).norm());
        }
    }
    Ok(worst)
}

/// Firm-nonexpansiveness suite over the whole catalog and every
/// transform. Returns the worst violation of
/// `||Jz - Jz'||² <= <z - z', Jz - Jz'>` (zero when none).
pub fn firm_nonexpansiveness(trials: usize, seed: u64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let ops = catalog_roster(&mut rng)?;
    let mut worst: f64 = 0.0;
    for op in &ops {
        for _ in 0..trials {
            let z1 = sampling::vector(&mut rng, op.dim()).scale(4.0);
            let z2 = sampling::vector(&mut rng, op.dim()).scale(4.0);
            let d_in = z1.sub(&z2);
            let d_out = op.resolve(&z1)?.sub(&op.resolve(&z2)?);
            let violation = d_out.dot(&d_out) - d_in.dot(&d_out);
            worst = worst.max(violation);
        }
    }
    Ok(worst.max(0.0))
}

/// One operator of every catalog kind and every transform, with random
/// parameters.
fn catalog_roster(rng: &mut ChaCha8Rng) -> Result<Vec<MonotoneOp>> {
    let dim = 3;
    let mut ops = Vec::new();

    ops.push(MonotoneOp::from_prox(&ProxSpec::l1(
        dim,
        rng.random_range(0.1..2.0),
    )?)?);

    let quad = ProxSpec::quadratic(
        sampling::psd_matrix(rng, dim),
        sampling::vector(rng, dim),
        rng.random_range(0.1..2.0),
    )?;
    ops.push(MonotoneOp::from_prox(&quad)?);

    let lo = sampling::vector(rng, dim);
    let hi = lo.add(&Vector::new(vec![1.0; dim])?);
    ops.push(MonotoneOp::from_prox(&ProxSpec::box_indicator(lo, hi)?)?);

    ops.push(MonotoneOp::from_prox(&ProxSpec::euclidean_ball(
        sampling::vector(rng, dim),
        rng.random_range(0.5..2.0),
    )?)?);

    // consistent affine set by construction: d = E x0
    let e = sampling::matrix(rng, 2, dim);
    let x0 = sampling::vector(rng, dim);
    let d = Vector::new(e.apply(x0.as_slice()))?;
    ops.push(MonotoneOp::from_prox(&ProxSpec::affine_set(e, d)?)?);

    ops.push(MonotoneOp::zero(dim)?);
    ops.push(MonotoneOp::linear(sampling::monotone_matrix(rng, dim))?);

    // transforms
    ops.push(MonotoneOp::from_prox(&quad)?.shift_input(sampling::vector(rng, dim))?);
    ops.push(
        MonotoneOp::from_prox(&ProxSpec::l1(dim, 1.0)?)?.shift_graph(sampling::vector(rng, dim))?,
    );
    ops.push(MonotoneOp::from_prox(&ProxSpec::l1(dim, 1.0)?)?.inverse());
    ops.push(product(vec![
        MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0)?)?,
        MonotoneOp::scaled_identity(2, rng.random_range(0.0..3.0))?,
    ])?);
    let basis = sampling::orthonormal_basis(rng, dim, 1);
    ops.push(
        MonotoneOp::linear(sampling::monotone_matrix(rng, dim))?
            .partial_inverse(SubspaceProjectorPair::span(dim, &basis)?)?,
    );

    Ok(ops)
}
