//! Projector pairs `(P_V, P_V⊥)` for closed vector subspaces of `R^d`.

use crate::error::Result;
use crate::linops::{orthonormalize, GraphProjector, GraphSubspace, Vector};

/// An orthogonal projector pair for a subspace `V ⊆ R^d`.
///
/// `project_v` and `project_v_perp` are idempotent, self-adjoint, and sum
/// to the identity.
#[derive(Clone, Debug)]
pub enum SubspaceProjectorPair {
    /// `V = R^d`.
    Whole { dim: usize },
    /// `V = {0}`.
    Origin { dim: usize },
    /// `V = span` of an orthonormal basis.
    Span { dim: usize, basis: Vec<Vector> },
    /// `V = {(x, y) : Lx = y}` in the flattened product space.
    Graph(GraphProjector),
}

impl SubspaceProjectorPair {
    pub fn whole(dim: usize) -> Self {
        assert!(dim > 0);
        SubspaceProjectorPair::Whole { dim }
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim > 0);
        SubspaceProjectorPair::Origin { dim }
    }

    /// Spans the given vectors; they are orthonormalized and linearly
    /// dependent ones dropped. An empty span is the origin.
    pub fn span(dim: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            v.check_dim(dim, "span basis vector")?;
        }
        let basis = orthonormalize(vectors, 1e-12);
        if basis.is_empty() {
            return Ok(SubspaceProjectorPair::Origin { dim });
        }
        if basis.len() == dim {
            return Ok(SubspaceProjectorPair::Whole { dim });
        }
        Ok(SubspaceProjectorPair::Span { dim, basis })
    }

    pub fn graph(projector: GraphProjector) -> Self {
        SubspaceProjectorPair::Graph(projector)
    }

    pub fn dim(&self) -> usize {
        match self {
            SubspaceProjectorPair::Whole { dim }
            | SubspaceProjectorPair::Origin { dim }
            | SubspaceProjectorPair::Span { dim, .. } => *dim,
            SubspaceProjectorPair::Graph(g) => g.product_dim(),
        }
    }

    pub fn project_v(&self, z: &Vector) -> Result<Vector> {
        z.check_dim(self.dim(), "subspace projection")?;
        Ok(match self {
            SubspaceProjectorPair::Whole { .. } => z.clone(),
            SubspaceProjectorPair::Origin { dim } => Vector::zeros(*dim),
            SubspaceProjectorPair::Span { basis, .. } => span_project(basis, z),
            SubspaceProjectorPair::Graph(g) => g.project_flat(z, GraphSubspace::V)?,
        })
    }

    pub fn project_v_perp(&self, z: &Vector) -> Result<Vector> {
        z.check_dim(self.dim(), "subspace projection")?;
        Ok(match self {
            SubspaceProjectorPair::Whole { dim } => Vector::zeros(*dim),
            SubspaceProjectorPair::Origin { .. } => z.clone(),
            SubspaceProjectorPair::Span { basis, .. } => z.sub(&span_project(basis, z)),
            SubspaceProjectorPair::Graph(g) => g.project_flat(z, GraphSubspace::VPerp)?,
        })
    }

    /// `||P_V⊥ z||` relative to `1 + ||z||`: how far `z` is from lying in V.
    pub fn membership_defect_v(&self, z: &Vector) -> Result<f64> {
        Ok(self.project_v_perp(z)?.norm() / (1.0 + z.norm()))
    }

    /// Same for membership in `V⊥`.
    pub fn membership_defect_v_perp(&self, z: &Vector) -> Result<f64> {
        Ok(self.project_v(z)?.norm() / (1.0 + z.norm()))
    }
}

fn span_project(basis: &[Vector], z: &Vector) -> Vector {
    let mut p = Vector::zeros(z.dim());
    for b in basis {
        p = p.add_scaled(z.dot(b), b);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn span_projects_onto_axis() {
        let e1 = Vector::new(vec![1.0, 0.0]).unwrap();
        let proj = SubspaceProjectorPair::span(2, &[e1]).unwrap();
        let z = Vector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(proj.project_v(&z).unwrap().as_slice(), &[3.0, 0.0]);
        assert_eq!(proj.project_v_perp(&z).unwrap().as_slice(), &[0.0, 4.0]);
    }

    #[test]
    fn full_span_collapses_to_whole() {
        let basis = vec![
            Vector::new(vec![1.0, 1.0]).unwrap(),
            Vector::new(vec![1.0, -1.0]).unwrap(),
        ];
        let proj = SubspaceProjectorPair::span(2, &basis).unwrap();
        assert!(matches!(proj, SubspaceProjectorPair::Whole { .. }));
    }

    #[test]
    fn projector_pair_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let dim = rng.random_range(2..=10);
            let k = rng.random_range(1..dim);
            let vectors: Vec<Vector> = (0..k)
                .map(|_| Vector::from_raw((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()))
                .collect();
            let proj = SubspaceProjectorPair::span(dim, &vectors).unwrap();
            let z = Vector::from_raw((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect());
            let pv = proj.project_v(&z).unwrap();
            let pp = proj.project_v_perp(&z).unwrap();
            assert!(pv.add(&pp).sub(&z).norm() <= 1e-10);
            assert!(proj.project_v(&pv).unwrap().sub(&pv).norm() <= 1e-10);
            assert!(pv.dot(&pp).abs() <= 1e-10);
        }
    }
}
