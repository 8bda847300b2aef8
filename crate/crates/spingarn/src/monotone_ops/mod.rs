//! Maximally monotone operators represented through their resolvents.
//!
//! An operator `A` is carried as a rule for evaluating `J_A = (Id + A)^{-1}`
//! at unit parameter. The catalog entries come from subdifferentials of the
//! prox catalog plus dense linear monotone maps; the transforms (input
//! shift, graph shift, inversion, products, partial inverses) compose
//! resolvents without ever forming the operators themselves:
//!
//! * inversion uses the Moreau decomposition `J_{A^{-1}} = Id - J_A`,
//! * the partial inverse `A_V` uses the characterization
//!   `J_{A_V} z = P_V(J_A z) + P_V⊥(z - J_A z)`.

mod prox;
mod subspace;

pub use prox::{ProxKind, ProxSpec};
pub use subspace::SubspaceProjectorPair;

use prox::ProxKernel;

use crate::error::{Error, Result};
use crate::linops::{symmetric_eigenvalues, LuFactor, Matrix, Vector};

/// A maximally monotone operator, held as a resolvent rule.
#[derive(Clone, Debug)]
pub struct MonotoneOp {
    dim: usize,
    rule: Rule,
}

#[derive(Clone, Debug)]
enum Rule {
    Prox {
        kernel: ProxKernel,
    },
    /// Dense linear `x ↦ Mx` with `M + M^T` PSD; resolvent prefactored.
    Linear {
        factor: LuFactor,
    },
    /// `x ↦ -z + C x`, resolvent `x ↦ J_C(x + z)`.
    ShiftInput {
        inner: Box<MonotoneOp>,
        offset: Vector,
    },
    /// `y ↦ D(y - o)`, resolvent `y ↦ o + J_D(y - o)`.
    ShiftGraph {
        inner: Box<MonotoneOp>,
        offset: Vector,
    },
    Inverse {
        inner: Box<MonotoneOp>,
    },
    /// Blockwise product on the flattened product space.
    Product {
        factors: Vec<MonotoneOp>,
    },
    PartialInverse {
        inner: Box<MonotoneOp>,
        proj: SubspaceProjectorPair,
    },
}

impl MonotoneOp {
    /// Subdifferential of a prox-catalog function, `J_A = prox_f`.
    pub fn from_prox(spec: &ProxSpec) -> Result<Self> {
        let kernel = spec.prepare()?;
        Ok(MonotoneOp {
            dim: kernel.dim(),
            rule: Rule::Prox { kernel },
        })
    }

    /// Dense linear operator `x ↦ Mx`, monotone when `M + M^T` is PSD.
    pub fn linear(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument(
                "linear monotone operator needs a square matrix".into(),
            ));
        }
        let eigs = symmetric_eigenvalues(&matrix)?;
        let min = eigs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if min < -1e-10 * matrix.max_abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not monotone: symmetric part has eigenvalue {min:.3e}"
            )));
        }
        let n = matrix.rows();
        let mut system = matrix.clone();
        for i in 0..n {
            system.set(i, i, system.get(i, i) + 1.0);
        }
        let factor = LuFactor::factor(&system).map_err(|e| {
            Error::Internal(format!(
                "Id + M is nonsingular for monotone M; factorization failed: {e}"
            ))
        })?;
        Ok(MonotoneOp {
            dim: n,
            rule: Rule::Linear { factor },
        })
    }

    /// The zero operator (`Ax = {0}`), whose resolvent is the identity.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::from_prox(&ProxSpec::zero(dim)?)
    }

    /// `x ↦ alpha x` for `alpha >= 0`.
    pub fn scaled_identity(dim: usize, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scaled identity needs alpha >= 0, got {alpha}"
            )));
        }
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, alpha);
        }
        Self::from_prox(&ProxSpec::quadratic(m, Vector::zeros(dim), 1.0)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates the resolvent `J_A z`.
    pub fn resolve(&self, z: &Vector) -> Result<Vector> {
        z.check_dim(self.dim, "resolvent argument")?;
        match &self.rule {
            Rule::Prox { kernel } => Ok(kernel.evaluate(z)),
            Rule::Linear { factor } => Ok(Vector::from_raw(factor.solve(z.as_slice()))),
            Rule::ShiftInput { inner, offset } => inner.resolve(&z.add(offset)),
            Rule::ShiftGraph { inner, offset } => Ok(offset.add(&inner.resolve(&z.sub(offset))?)),
            Rule::Inverse { inner } => Ok(z.sub(&inner.resolve(z)?)),
            Rule::Product { factors } => {
                let mut out = Vec::with_capacity(self.dim);
                let mut off = 0;
                for f in factors {
                    let piece = Vector::from_raw(z.as_slice()[off..off + f.dim()].to_vec());
                    out.extend_from_slice(f.resolve(&piece)?.as_slice());
                    off += f.dim();
                }
                Ok(Vector::from_raw(out))
            }
            Rule::PartialInverse { inner, proj } => {
                let j = inner.resolve(z)?;
                let in_v = proj.project_v(&j)?;
                let in_v_perp = proj.project_v_perp(&z.sub(&j))?;
                Ok(in_v.add(&in_v_perp))
            }
        }
    }

    /// For `self = C`, returns the operator `x ↦ -z + Cx` whose resolvent
    /// is `x ↦ J_C(x + z)`.
    pub fn shift_input(self, z: Vector) -> Result<MonotoneOp> {
        z.check_dim(self.dim, "input shift")?;
        Ok(MonotoneOp {
            dim: self.dim,
            rule: Rule::ShiftInput {
                inner: Box::new(self),
                offset: z,
            },
        })
    }

    /// For `self = D`, returns the operator `y ↦ D(y - o)` whose resolvent
    /// is `y ↦ o + J_D(y - o)`.
    pub fn shift_graph(self, o: Vector) -> Result<MonotoneOp> {
        o.check_dim(self.dim, "graph shift")?;
        Ok(MonotoneOp {
            dim: self.dim,
            rule: Rule::ShiftGraph {
                inner: Box::new(self),
                offset: o,
            },
        })
    }

    /// The inverse operator, via `J_{A^{-1}} = Id - J_A`.
    pub fn inverse(self) -> MonotoneOp {
        MonotoneOp {
            dim: self.dim,
            rule: Rule::Inverse {
                inner: Box::new(self),
            },
        }
    }

    /// The partial inverse `A_V` for the subspace described by `proj`.
    pub fn partial_inverse(self, proj: SubspaceProjectorPair) -> Result<MonotoneOp> {
        if proj.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "partial inverse projector",
                expected: self.dim,
                actual: proj.dim(),
            });
        }
        Ok(MonotoneOp {
            dim: self.dim,
            rule: Rule::PartialInverse {
                inner: Box::new(self),
                proj,
            },
        })
    }
}

/// Product operator `(x_i) ↦ ⨯_i A_i x_i` on the flattened product space;
/// the resolvent acts blockwise.
pub fn product(ops: Vec<MonotoneOp>) -> Result<MonotoneOp> {
    if ops.is_empty() {
        return Err(Error::InvalidArgument(
            "product of operators needs at least one factor".into(),
        ));
    }
    let dim = ops.iter().map(MonotoneOp::dim).sum();
    Ok(MonotoneOp {
        dim,
        rule: Rule::Product { factors: ops },
    })
}
