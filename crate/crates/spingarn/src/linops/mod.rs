//! Bounded linear operators `L: R^n -> R^m` with adjoints, block
//! composition, Gram-system solvers for `(Id + L*L)^{-1}` and
//! `(Id + LL*)^{-1}`, and the projectors onto the graph subspace
//! `V = {(x, y) : Lx = y}`.

mod dense;
mod gram;
mod graph;
mod vector;

pub use dense::{orthonormalize, symmetric_eigenvalues, CholeskyFactor, LuFactor, Matrix};
pub use gram::{GramSide, GramSolver};
pub use graph::{GraphProjector, GraphSubspace};
pub use vector::{BlockVector, Vector};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A linear operator together with its adjoint.
///
/// Block kinds store their children and are applied blockwise; nothing is
/// materialized except the Gram matrix a [`GramSolver`] factorizes.
#[derive(Clone, Debug)]
pub enum LinearMap {
    Dense(Matrix),
    Identity {
        dim: usize,
    },
    ScaledIdentity {
        dim: usize,
        scale: f64,
    },
    /// `x ↦ (L_1 x, …, L_k x)`; children share the domain.
    RowStack(Vec<LinearMap>),
    /// `(x_1, …, x_k) ↦ Σ L_i x_i`; children share the codomain.
    ColumnSum(Vec<LinearMap>),
}

/// Stacking mode for [`compose_blocks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    RowStack,
    ColumnSum,
}

impl LinearMap {
    pub fn dense(matrix: Matrix) -> Self {
        LinearMap::Dense(matrix)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "identity dimension must be positive".into(),
            ));
        }
        Ok(LinearMap::Identity { dim })
    }

    pub fn scaled_identity(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "identity dimension must be positive".into(),
            ));
        }
        if !scale.is_finite() {
            return Err(Error::NonFinite("scaled identity factor"));
        }
        Ok(LinearMap::ScaledIdentity { dim, scale })
    }

    pub fn row_stack(children: Vec<LinearMap>) -> Result<Self> {
        compose_blocks(children, BlockMode::RowStack)
    }

    pub fn column_sum(children: Vec<LinearMap>) -> Result<Self> {
        compose_blocks(children, BlockMode::ColumnSum)
    }

    pub fn domain_dim(&self) -> usize {
        match self {
            LinearMap::Dense(m) => m.cols(),
            LinearMap::Identity { dim } | LinearMap::ScaledIdentity { dim, .. } => *dim,
            LinearMap::RowStack(children) => children[0].domain_dim(),
            LinearMap::ColumnSum(children) => children.iter().map(|c| c.domain_dim()).sum(),
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self {
            LinearMap::Dense(m) => m.rows(),
            LinearMap::Identity { dim } | LinearMap::ScaledIdentity { dim, .. } => *dim,
            LinearMap::RowStack(children) => children.iter().map(|c| c.codomain_dim()).sum(),
            LinearMap::ColumnSum(children) => children[0].codomain_dim(),
        }
    }

    /// `L v`.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        v.check_dim(self.domain_dim(), "linear map apply")?;
        Ok(self.apply_unchecked(v))
    }

    /// `L* v`.
    pub fn adjoint_apply(&self, v: &Vector) -> Result<Vector> {
        v.check_dim(self.codomain_dim(), "linear map adjoint apply")?;
        Ok(self.adjoint_unchecked(v))
    }

    /// Single entry point matching the operation contract: `L v`, or
    /// `L* v` when `adjoint` is set.
    pub fn apply_with(&self, v: &Vector, adjoint: bool) -> Result<Vector> {
        if adjoint {
            self.adjoint_apply(v)
        } else {
            self.apply(v)
        }
    }

    fn apply_unchecked(&self, v: &Vector) -> Vector {
        match self {
            LinearMap::Dense(m) => Vector::from_raw(m.apply(v.as_slice())),
            LinearMap::Identity { .. } => v.clone(),
            LinearMap::ScaledIdentity { scale, .. } => v.scale(*scale),
            LinearMap::RowStack(children) => {
                let mut out = Vec::with_capacity(self.codomain_dim());
                for c in children {
                    out.extend_from_slice(c.apply_unchecked(v).as_slice());
                }
                Vector::from_raw(out)
            }
            LinearMap::ColumnSum(children) => {
                let mut out = vec![0.0; self.codomain_dim()];
                let mut off = 0;
                for c in children {
                    let d = c.domain_dim();
                    let piece = Vector::from_raw(v.as_slice()[off..off + d].to_vec());
                    for (o, p) in out.iter_mut().zip(c.apply_unchecked(&piece).as_slice()) {
                        *o += p;
                    }
                    off += d;
                }
                Vector::from_raw(out)
            }
        }
    }

    fn adjoint_unchecked(&self, v: &Vector) -> Vector {
        match self {
            LinearMap::Dense(m) => Vector::from_raw(m.apply_transpose(v.as_slice())),
            LinearMap::Identity { .. } => v.clone(),
            LinearMap::ScaledIdentity { scale, .. } => v.scale(*scale),
            // adjoint of a row stack: (y_i) ↦ Σ L_i* y_i
            LinearMap::RowStack(children) => {
                let mut out = vec![0.0; self.domain_dim()];
                let mut off = 0;
                for c in children {
                    let d = c.codomain_dim();
                    let piece = Vector::from_raw(v.as_slice()[off..off + d].to_vec());
                    for (o, p) in out.iter_mut().zip(c.adjoint_unchecked(&piece).as_slice()) {
                        *o += p;
                    }
                    off += d;
                }
                Vector::from_raw(out)
            }
            // adjoint of a column sum: y ↦ (L_i* y)
            LinearMap::ColumnSum(children) => {
                let mut out = Vec::with_capacity(self.domain_dim());
                for c in children {
                    out.extend_from_slice(c.adjoint_unchecked(v).as_slice());
                }
                Vector::from_raw(out)
            }
        }
    }
}

/// Stacks maps into one operator: `row_stack` shares the domain,
/// `column_sum` shares the codomain.
pub fn compose_blocks(maps: Vec<LinearMap>, mode: BlockMode) -> Result<LinearMap> {
    if maps.is_empty() {
        return Err(Error::InvalidArgument(
            "block composition needs at least one map".into(),
        ));
    }
    match mode {
        BlockMode::RowStack => {
            let domain = maps[0].domain_dim();
            for (i, m) in maps.iter().enumerate() {
                if m.domain_dim() != domain {
                    return Err(Error::DimensionMismatch {
                        context: "row stack child domain",
                        expected: domain,
                        actual: maps[i].domain_dim(),
                    });
                }
            }
            Ok(LinearMap::RowStack(maps))
        }
        BlockMode::ColumnSum => {
            let codomain = maps[0].codomain_dim();
            for (i, m) in maps.iter().enumerate() {
                if m.codomain_dim() != codomain {
                    return Err(Error::DimensionMismatch {
                        context: "column sum child codomain",
                        expected: codomain,
                        actual: maps[i].codomain_dim(),
                    });
                }
            }
            Ok(LinearMap::ColumnSum(maps))
        }
    }
}

/// Checks `⟨Lx, y⟩ = ⟨x, L*y⟩` on random probes and returns the largest
/// deviation relative to `||Lx|| ||y|| + ||x|| ||L*y||`.
///
/// Deterministic for a fixed seed.
pub fn adjoint_consistency_check(map: &LinearMap, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = random_vector(&mut rng, map.domain_dim());
        let y = random_vector(&mut rng, map.codomain_dim());
        let lx = map.apply(&x)?;
        let lty = map.adjoint_apply(&y)?;
        let num = (lx.dot(&y) - x.dot(&lty)).abs();
        let den = lx.norm() * y.norm() + x.norm() * lty.norm();
        let dev = if den == 0.0 { 0.0 } else { num / den };
        worst = worst.max(dev);
    }
    Ok(worst)
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::from_raw((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[Vec<f64>]) -> LinearMap {
        LinearMap::dense(Matrix::from_rows(rows).unwrap())
    }

    #[test]
    fn apply_scaling_and_identity() {
        let m = dense(&[vec![2.0]]);
        let v = Vector::new(vec![3.0]).unwrap();
        assert_eq!(m.apply(&v).unwrap().as_slice(), &[6.0]);

        let id = LinearMap::identity(2).unwrap();
        let w = Vector::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(id.apply(&w).unwrap().as_slice(), &[1.0, -1.0]);
    }

    #[test]
    fn row_stack_apply_and_adjoint() {
        let stack = LinearMap::row_stack(vec![dense(&[vec![1.0]]), dense(&[vec![2.0]])]).unwrap();
        let v = Vector::new(vec![3.0]).unwrap();
        assert_eq!(stack.apply(&v).unwrap().as_slice(), &[3.0, 6.0]);
        let y = Vector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(stack.adjoint_apply(&y).unwrap().as_slice(), &[3.0]);
    }

    #[test]
    fn column_sum_apply() {
        let sum = LinearMap::column_sum(vec![dense(&[vec![1.0]]), dense(&[vec![2.0]])]).unwrap();
        let v = Vector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(sum.apply(&v).unwrap().as_slice(), &[3.0]);
        let y = Vector::new(vec![2.0]).unwrap();
        assert_eq!(sum.adjoint_apply(&y).unwrap().as_slice(), &[2.0, 4.0]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = dense(&[vec![1.0, 2.0]]);
        let v = Vector::new(vec![1.0]).unwrap();
        let err = m.apply(&v).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expected 2"), "{msg}");
        assert!(msg.contains("got 1"), "{msg}");
    }

    #[test]
    fn compose_rejects_empty_and_inconsistent() {
        assert!(compose_blocks(vec![], BlockMode::RowStack).is_err());
        let bad = compose_blocks(
            vec![dense(&[vec![1.0]]), dense(&[vec![1.0, 2.0]])],
            BlockMode::RowStack,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn row_stack_of_one_map_matches_child() {
        let child = dense(&[vec![1.0, -2.0], vec![0.5, 3.0]]);
        let stack = LinearMap::row_stack(vec![child.clone()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = random_vector(&mut rng, 2);
            assert_eq!(
                stack.apply(&v).unwrap().as_slice(),
                child.apply(&v).unwrap().as_slice()
            );
        }
    }

    #[test]
    fn adjoint_check_identity_is_exact() {
        let id = LinearMap::identity(4).unwrap();
        assert_eq!(adjoint_consistency_check(&id, 10, 7).unwrap(), 0.0);
    }

    #[test]
    fn adjoint_check_dense_and_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let data: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
        let m = LinearMap::dense(Matrix::new(5, 3, data).unwrap());
        assert!(adjoint_consistency_check(&m, 50, 3).unwrap() <= 1e-12);

        let stack = LinearMap::row_stack(vec![
            dense(&[vec![0.3, -1.2], vec![2.0, 0.1]]),
            dense(&[vec![-0.7, 0.9]]),
        ])
        .unwrap();
        assert!(adjoint_consistency_check(&stack, 50, 5).unwrap() <= 1e-12);

        let sum = LinearMap::column_sum(vec![
            dense(&[vec![0.3], vec![2.0]]),
            dense(&[vec![-0.7, 1.1], vec![0.9, -0.4]]),
        ])
        .unwrap();
        assert!(adjoint_consistency_check(&sum, 50, 9).unwrap() <= 1e-12);
    }

    #[test]
    fn adjoint_check_requires_trials() {
        let id = LinearMap::identity(2).unwrap();
        assert!(adjoint_consistency_check(&id, 0, 0).is_err());
    }

    #[test]
    fn apply_with_selects_the_side() {
        let m = dense(&[vec![1.0, 2.0]]);
        let v = Vector::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(m.apply_with(&v, false).unwrap().as_slice(), &[3.0]);
        let y = Vector::new(vec![2.0]).unwrap();
        assert_eq!(m.apply_with(&y, true).unwrap().as_slice(), &[2.0, 4.0]);
    }

    #[test]
    fn scaled_identity_rejects_non_finite() {
        assert!(LinearMap::scaled_identity(2, f64::NAN).is_err());
        assert!(LinearMap::scaled_identity(0, 1.0).is_err());
    }
}
