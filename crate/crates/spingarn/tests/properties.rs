//! Property tests for the algebraic invariants that hold on arbitrary
//! inputs, not just the curated instances.

use proptest::collection::vec;
use proptest::prelude::*;

use spingarn::linops::{
    adjoint_consistency_check, GramSide, GramSolver, GraphProjector, GraphSubspace, LinearMap,
    Matrix, Vector,
};
use spingarn::monotone_ops::{MonotoneOp, ProxSpec};

fn finite_coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

prop_compose! {
    fn dims()(n in 1usize..8, m in 1usize..8) -> (usize, usize) {
        (n, m)
    }
}

prop_compose! {
    fn dense_map()((n, m) in dims())(
        entries in vec(finite_coord(), n * m),
        n in Just(n),
        m in Just(m),
    ) -> LinearMap {
        LinearMap::dense(Matrix::new(m, n, entries).unwrap())
    }
}

proptest! {
    #[test]
    fn adjoints_are_consistent(map in dense_map(), seed in any::<u64>()) {
        let dev = adjoint_consistency_check(&map, 10, seed).unwrap();
        prop_assert!(dev <= 1e-12);
    }

    #[test]
    fn gram_solve_meets_its_residual_contract(
        map in dense_map(),
        raw in vec(finite_coord(), 8),
    ) {
        for side in [GramSide::Primal, GramSide::Dual] {
            let gs = GramSolver::new(map.clone(), side).unwrap();
            let w = Vector::new(raw[..gs.dim()].to_vec()).unwrap();
            let z = gs.solve(&w).unwrap();
            let gz = match side {
                GramSide::Primal => z.add(&map.adjoint_apply(&map.apply(&z).unwrap()).unwrap()),
                GramSide::Dual => z.add(&map.apply(&map.adjoint_apply(&z).unwrap()).unwrap()),
            };
            prop_assert!(gz.sub(&w).norm() <= 1e-10 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn graph_projectors_decompose_identity(
        map in dense_map(),
        raw in vec(finite_coord(), 16),
    ) {
        let gp = GraphProjector::new(map.clone()).unwrap();
        let z = Vector::new(raw[..gp.product_dim()].to_vec()).unwrap();
        let pv = gp.project_flat(&z, GraphSubspace::V).unwrap();
        let pp = gp.project_flat(&z, GraphSubspace::VPerp).unwrap();
        prop_assert!(pv.add(&pp).sub(&z).norm() <= 1e-10 * (1.0 + z.norm()));
        prop_assert!(pv.norm() <= z.norm() * (1.0 + 1e-12) + 1e-12);
        // projector outputs live in their subspaces
        let n = map.domain_dim();
        let x = Vector::new(pv.as_slice()[..n].to_vec()).unwrap();
        let y = Vector::new(pv.as_slice()[n..].to_vec()).unwrap();
        prop_assert!(map.apply(&x).unwrap().sub(&y).norm() <= 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn soft_threshold_shrinks_toward_zero(z in finite_coord(), w in 0.01..3.0f64) {
        let op = MonotoneOp::from_prox(&ProxSpec::l1(1, w).unwrap()).unwrap();
        let p = op.resolve(&Vector::new(vec![z]).unwrap()).unwrap().get(0);
        prop_assert!(p.abs() <= z.abs());
        prop_assert!(p * z >= 0.0);
        prop_assert!((z - p).abs() <= w + 1e-15);
    }

    #[test]
    fn moreau_decomposition_is_exact(raw in vec(finite_coord(), 3), w in 0.01..3.0f64) {
        // J_{A^{-1}} z is computed as z - J_A z; assert that identity bitwise
        let op = MonotoneOp::from_prox(&ProxSpec::l1(3, w).unwrap()).unwrap();
        let inv = op.clone().inverse();
        let z = Vector::new(raw).unwrap();
        let jz = op.resolve(&z).unwrap();
        let jinv = inv.resolve(&z).unwrap();
        let complement = z.sub(&jz);
        prop_assert_eq!(jinv.as_slice(), complement.as_slice());
    }

    #[test]
    fn box_prox_is_idempotent_and_feasible(
        raw in vec(finite_coord(), 2),
        lo in -5.0..0.0f64,
        width in 0.0..5.0f64,
    ) {
        let spec = ProxSpec::box_indicator(
            Vector::new(vec![lo; 2]).unwrap(),
            Vector::new(vec![lo + width; 2]).unwrap(),
        )
        .unwrap();
        let op = MonotoneOp::from_prox(&spec).unwrap();
        let z = Vector::new(raw).unwrap();
        let p = op.resolve(&z).unwrap();
        for i in 0..2 {
            prop_assert!(p.get(i) >= lo && p.get(i) <= lo + width);
        }
        let fixed = op.resolve(&p).unwrap();
        prop_assert_eq!(fixed.as_slice(), p.as_slice());
    }
}
