//! Solvers for the Gram systems `(Id + L*L) z = w` and `(Id + LL*) z = w`.
//!
//! Both matrices have all eigenvalues >= 1, so a dense Cholesky
//! factorization, computed once per map and cached, is always available.
//! Only the Gram matrix itself is materialized, never the map.

use crate::error::{Error, Result};

use super::dense::{CholeskyFactor, Matrix};
use super::vector::Vector;
use super::LinearMap;

/// Which Gram system a solver is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramSide {
    /// `(Id + L*L)^{-1}` on the domain of `L`.
    Primal,
    /// `(Id + LL*)^{-1}` on the codomain of `L`.
    Dual,
}

/// A cached factorization of `Id + L*L` or `Id + LL*`.
#[derive(Clone, Debug)]
pub struct GramSolver {
    map: LinearMap,
    side: GramSide,
    factor: CholeskyFactor,
}

impl GramSolver {
    pub fn new(map: LinearMap, side: GramSide) -> Result<Self> {
        let dim = match side {
            GramSide::Primal => map.domain_dim(),
            GramSide::Dual => map.codomain_dim(),
        };
        let mut gram = Matrix::zeros(dim, dim);
        let mut basis = vec![0.0; dim];
        for j in 0..dim {
            basis[j] = 1.0;
            let e = Vector::new(basis.clone())?;
            let column = match side {
                GramSide::Primal => e.add(&map.adjoint_apply(&map.apply(&e)?)?),
                GramSide::Dual => e.add(&map.apply(&map.adjoint_apply(&e)?)?),
            };
            for i in 0..dim {
                gram.set(i, j, column.get(i));
            }
            basis[j] = 0.0;
        }
        let factor = CholeskyFactor::factor(&gram).map_err(|e| {
            Error::Internal(format!(
                "Gram matrix has eigenvalues >= 1 and must factor, but Cholesky failed: {e}"
            ))
        })?;
        Ok(GramSolver { map, side, factor })
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn side(&self) -> GramSide {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.factor.dim()
    }

    /// Returns `z` with `(Id + L*L) z = w` (primal) or `(Id + LL*) z = w`
    /// (dual), residual at most `1e-10 (1 + ||w||)`.
    pub fn solve(&self, w: &Vector) -> Result<Vector> {
        w.check_dim(self.dim(), "Gram solve")?;
        Ok(Vector::from_raw(self.factor.solve(w.as_slice())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_gram() {
        // L = [[2]]: (1 + 4) z = 10  =>  z = 2
        let map = LinearMap::dense(Matrix::from_rows(&[vec![2.0]]).unwrap());
        let gs = GramSolver::new(map, GramSide::Primal).unwrap();
        let z = gs.solve(&Vector::new(vec![10.0]).unwrap()).unwrap();
        assert!((z.get(0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_map_gram_is_identity() {
        let map = LinearMap::dense(Matrix::zeros(3, 3));
        for side in [GramSide::Primal, GramSide::Dual] {
            let gs = GramSolver::new(map.clone(), side).unwrap();
            let w = Vector::new(vec![1.5, -2.0, 0.25]).unwrap();
            let z = gs.solve(&w).unwrap();
            for i in 0..3 {
                assert!((z.get(i) - w.get(i)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn row_stack_gram() {
        // L = row stack of [[1]] and [[2]] maps R -> R^2; the primal Gram
        // matrix is 1 + 1 + 4 = 6, so w = 12 gives z = 2.
        let map = LinearMap::row_stack(vec![
            LinearMap::dense(Matrix::from_rows(&[vec![1.0]]).unwrap()),
            LinearMap::dense(Matrix::from_rows(&[vec![2.0]]).unwrap()),
        ])
        .unwrap();
        let gs = GramSolver::new(map, GramSide::Primal).unwrap();
        let z = gs.solve(&Vector::new(vec![12.0]).unwrap()).unwrap();
        assert!((z.get(0) - 12.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn residual_contract_on_random_maps() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.random_range(1..=12);
            let m = rng.random_range(1..=12);
            let data: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let map = LinearMap::dense(Matrix::new(m, n, data).unwrap());
            for side in [GramSide::Primal, GramSide::Dual] {
                let gs = GramSolver::new(map.clone(), side).unwrap();
                let w = super::super::random_vector(&mut rng, gs.dim());
                let z = gs.solve(&w).unwrap();
                // recompute (Id + Gram-op) z and compare against w
                let gz = match side {
                    GramSide::Primal => z.add(&map.adjoint_apply(&map.apply(&z).unwrap()).unwrap()),
                    GramSide::Dual => z.add(&map.apply(&map.adjoint_apply(&z).unwrap()).unwrap()),
                };
                let res = gz.sub(&w).norm();
                assert!(
                    res <= 1e-10 * (1.0 + w.norm()),
                    "residual {res:.3e} too large"
                );
            }
        }
    }

    #[test]
    fn solve_checks_dimension() {
        let map = LinearMap::identity(2).unwrap();
        let gs = GramSolver::new(map, GramSide::Primal).unwrap();
        assert!(gs.solve(&Vector::new(vec![1.0]).unwrap()).is_err());
    }
}
