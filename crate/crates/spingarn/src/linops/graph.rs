//! Orthogonal projectors onto the graph subspace
//! `V = {(x, y) ∈ R^n ⊕ R^m : Lx = y}` and its complement
//! `V⊥ = {(u, v) : u = -L*v}`.
//!
//! Two algebraically equal formula pairs exist, one through
//! `(Id + L*L)^{-1}` and one through `(Id + LL*)^{-1}`:
//!
//! ```text
//! P_V(x,y)  = (Q(x + L*y), L Q(x + L*y))                       (primal Gram)
//! P_V(x,y)  = (x - L* R(Lx - y), y + R(Lx - y))                (dual Gram)
//! P_V⊥(x,y) = (x,y) - P_V(x,y), expanded on the same side
//! ```
//!
//! The default constructor factors whichever Gram matrix is smaller.

use crate::error::Result;

use super::gram::{GramSide, GramSolver};
use super::vector::{BlockVector, Vector};
use super::LinearMap;

/// Which component of the orthogonal decomposition to project onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSubspace {
    V,
    VPerp,
}

/// Projector pair for the graph subspace of a linear map.
#[derive(Clone, Debug)]
pub struct GraphProjector {
    gram: GramSolver,
}

impl GraphProjector {
    /// Picks the side with the smaller Gram factorization: primal when
    /// `domain_dim <= codomain_dim`, dual otherwise.
    pub fn new(map: LinearMap) -> Result<Self> {
        let side = if map.domain_dim() <= map.codomain_dim() {
            GramSide::Primal
        } else {
            GramSide::Dual
        };
        Self::with_side(map, side)
    }

    pub fn with_side(map: LinearMap, side: GramSide) -> Result<Self> {
        Ok(GraphProjector {
            gram: GramSolver::new(map, side)?,
        })
    }

    pub fn map(&self) -> &LinearMap {
        self.gram.map()
    }

    pub fn side(&self) -> GramSide {
        self.gram.side()
    }

    pub fn domain_dim(&self) -> usize {
        self.map().domain_dim()
    }

    pub fn codomain_dim(&self) -> usize {
        self.map().codomain_dim()
    }

    /// Total dimension of the product space the projectors act on.
    pub fn product_dim(&self) -> usize {
        self.domain_dim() + self.codomain_dim()
    }

    /// Projects a two-block point `(x, y)` onto `V` or `V⊥`.
    pub fn project(&self, point: &BlockVector, onto: GraphSubspace) -> Result<BlockVector> {
        if point.blocks().len() != 2 {
            return Err(crate::error::Error::InvalidArgument(format!(
                "graph projection expects a two-block point, got {} blocks",
                point.blocks().len()
            )));
        }
        let (px, py) = self.project_pair(point.block(0), point.block(1), onto)?;
        Ok(BlockVector::pair(px, py))
    }

    /// Projects the pair `(x, y)` onto the requested subspace.
    pub fn project_pair(
        &self,
        x: &Vector,
        y: &Vector,
        onto: GraphSubspace,
    ) -> Result<(Vector, Vector)> {
        x.check_dim(self.domain_dim(), "graph projection primal block")?;
        y.check_dim(self.codomain_dim(), "graph projection dual block")?;
        let map = self.map();
        match (self.side(), onto) {
            (GramSide::Primal, GraphSubspace::V) => {
                let h = self.gram.solve(&x.add(&map.adjoint_apply(y)?))?;
                let lh = map.apply(&h)?;
                Ok((h, lh))
            }
            (GramSide::Primal, GraphSubspace::VPerp) => {
                let h = self.gram.solve(&x.add(&map.adjoint_apply(y)?))?;
                let lh = map.apply(&h)?;
                Ok((x.sub(&h), y.sub(&lh)))
            }
            (GramSide::Dual, GraphSubspace::V) => {
                let g = self.gram.solve(&map.apply(x)?.sub(y))?;
                Ok((x.sub(&map.adjoint_apply(&g)?), y.add(&g)))
            }
            (GramSide::Dual, GraphSubspace::VPerp) => {
                let g = self.gram.solve(&map.apply(x)?.sub(y))?;
                Ok((map.adjoint_apply(&g)?, g.scale(-1.0)))
            }
        }
    }

    /// Same projection on the flattened product space, splitting at the
    /// domain dimension.
    pub fn project_flat(&self, z: &Vector, onto: GraphSubspace) -> Result<Vector> {
        z.check_dim(self.product_dim(), "graph projection flat point")?;
        let n = self.domain_dim();
        let x = Vector::from_raw(z.as_slice()[..n].to_vec());
        let y = Vector::from_raw(z.as_slice()[n..].to_vec());
        let (px, py) = self.project_pair(&x, &y, onto)?;
        let mut coords = px.into_coords();
        coords.extend_from_slice(py.as_slice());
        Ok(Vector::from_raw(coords))
    }
}
