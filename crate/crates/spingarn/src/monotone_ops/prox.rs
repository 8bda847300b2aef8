//! Proximity-operator catalog.
//!
//! Each entry describes a function `f ∈ Γ₀(R^n)` whose proximity operator
//! `prox_f z = argmin f + ½||z - ·||²` has a closed form. All resolvents in
//! this crate run at unit parameter, so a `scale` weight `w` on `f` is
//! folded into each closed form directly (the l1 threshold becomes `w`, the
//! quadratic system becomes `Id + wM`, …). Indicator kinds are invariant
//! under positive scaling and ignore the weight.

use crate::error::{Error, Result};
use crate::linops::{symmetric_eigenvalues, CholeskyFactor, Matrix, Vector};

/// Description of a catalog function with a positive weight.
#[derive(Clone, Debug)]
pub struct ProxSpec {
    kind: ProxKind,
    scale: f64,
}

/// The catalog itself.
#[derive(Clone, Debug)]
pub enum ProxKind {
    /// `w ||x||_1`; prox is soft thresholding at `w`.
    L1 { dim: usize },
    /// `w (½ x^T M x - c^T x)` with `M` symmetric PSD.
    Quadratic { m: Matrix, c: Vector },
    /// Indicator of the box `[lo, hi]`; prox is the clamp.
    Box { lower: Vector, upper: Vector },
    /// Indicator of the closed ball; prox is the radial projection.
    EuclideanBall { center: Vector, radius: f64 },
    /// Indicator of `{x : Ex = d}`; prox is the affine projection.
    AffineSet { matrix: Matrix, rhs: Vector },
    /// The zero function; prox is the identity.
    Zero { dim: usize },
}

impl ProxSpec {
    pub fn new(kind: ProxKind, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "prox scale must be a positive real, got {scale}"
            )));
        }
        match &kind {
            ProxKind::L1 { dim } | ProxKind::Zero { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidArgument(
                        "prox dimension must be positive".into(),
                    ));
                }
            }
            ProxKind::Quadratic { m, c } => {
                if !m.is_square() {
                    return Err(Error::InvalidArgument(
                        "quadratic matrix must be square".into(),
                    ));
                }
                c.check_dim(m.rows(), "quadratic linear term")?;
                let scale_m = m.max_abs().max(1.0);
                if m.symmetry_defect() > 1e-12 * scale_m {
                    return Err(Error::InvalidArgument(
                        "quadratic matrix must be symmetric".into(),
                    ));
                }
                let eigs = symmetric_eigenvalues(m)?;
                let min = eigs.iter().fold(f64::INFINITY, |a, &b| a.min(b));
                if min < -1e-12 * scale_m {
                    return Err(Error::InvalidArgument(format!(
                        "quadratic matrix must be positive semidefinite (min eigenvalue {min:.3e})"
                    )));
                }
            }
            ProxKind::Box { lower, upper } => {
                upper.check_dim(lower.dim(), "box upper bound")?;
                for i in 0..lower.dim() {
                    if lower.get(i) > upper.get(i) {
                        return Err(Error::InvalidArgument(format!(
                            "box bounds crossed at coordinate {i}: {} > {}",
                            lower.get(i),
                            upper.get(i)
                        )));
                    }
                }
            }
            ProxKind::EuclideanBall { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            ProxKind::AffineSet { matrix, rhs } => {
                rhs.check_dim(matrix.rows(), "affine right-hand side")?;
            }
        }
        Ok(ProxSpec { kind, scale })
    }

    pub fn l1(dim: usize, scale: f64) -> Result<Self> {
        ProxSpec::new(ProxKind::L1 { dim }, scale)
    }

    pub fn quadratic(m: Matrix, c: Vector, scale: f64) -> Result<Self> {
        ProxSpec::new(ProxKind::Quadratic { m, c }, scale)
    }

    pub fn box_indicator(lower: Vector, upper: Vector) -> Result<Self> {
        ProxSpec::new(ProxKind::Box { lower, upper }, 1.0)
    }

    pub fn euclidean_ball(center: Vector, radius: f64) -> Result<Self> {
        ProxSpec::new(ProxKind::EuclideanBall { center, radius }, 1.0)
    }

    pub fn affine_set(matrix: Matrix, rhs: Vector) -> Result<Self> {
        ProxSpec::new(ProxKind::AffineSet { matrix, rhs }, 1.0)
    }

    pub fn zero(dim: usize) -> Result<Self> {
        ProxSpec::new(ProxKind::Zero { dim }, 1.0)
    }

    pub fn kind(&self) -> &ProxKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ProxKind::L1 { dim } | ProxKind::Zero { dim } => *dim,
            ProxKind::Quadratic { m, .. } => m.rows(),
            ProxKind::Box { lower, .. } => lower.dim(),
            ProxKind::EuclideanBall { center, .. } => center.dim(),
            ProxKind::AffineSet { matrix, .. } => matrix.cols(),
        }
    }

    /// Precomputes whatever the closed form needs (quadratic factorization,
    /// affine row basis with consistency check).
    pub(crate) fn prepare(&self) -> Result<ProxKernel> {
        match &self.kind {
            ProxKind::L1 { dim } => Ok(ProxKernel::L1 {
                dim: *dim,
                threshold: self.scale,
            }),
            ProxKind::Quadratic { m, c } => {
                let n = m.rows();
                let mut system = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let id = if i == j { 1.0 } else { 0.0 };
                        system.set(i, j, id + self.scale * m.get(i, j));
                    }
                }
                let factor = CholeskyFactor::factor(&system).map_err(|e| {
                    Error::Internal(format!(
                        "Id + w*M is positive definite for PSD M; factorization failed: {e}"
                    ))
                })?;
                Ok(ProxKernel::Quadratic {
                    factor,
                    c_scaled: c.scale(self.scale),
                })
            }
            ProxKind::Box { lower, upper } => Ok(ProxKernel::Box {
                lower: lower.clone(),
                upper: upper.clone(),
            }),
            ProxKind::EuclideanBall { center, radius } => Ok(ProxKernel::Ball {
                center: center.clone(),
                radius: *radius,
            }),
            ProxKind::AffineSet { matrix, rhs } => {
                let (basis, coeffs) = affine_row_basis(matrix, rhs)?;
                Ok(ProxKernel::Affine {
                    dim: matrix.cols(),
                    basis,
                    coeffs,
                })
            }
            ProxKind::Zero { dim } => Ok(ProxKernel::Zero { dim: *dim }),
        }
    }

    /// Function value at `x` (indicators report 0 inside a small tolerance
    /// of the set and +inf outside). Used for objective reporting.
    pub fn value(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim(), "prox function value")?;
        const MEMBERSHIP_TOL: f64 = 1e-8;
        Ok(match &self.kind {
            ProxKind::L1 { .. } => self.scale * x.as_slice().iter().map(|c| c.abs()).sum::<f64>(),
            ProxKind::Quadratic { m, c } => {
                let mx = Vector::from_raw(m.apply(x.as_slice()));
                self.scale * (0.5 * x.dot(&mx) - c.dot(x))
            }
            ProxKind::Box { lower, upper } => {
                let inside = (0..x.dim()).all(|i| {
                    x.get(i) >= lower.get(i) - MEMBERSHIP_TOL
                        && x.get(i) <= upper.get(i) + MEMBERSHIP_TOL
                });
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxKind::EuclideanBall { center, radius } => {
                if x.sub(center).norm() <= radius + MEMBERSHIP_TOL {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxKind::AffineSet { matrix, rhs } => {
                let res = Vector::from_raw(matrix.apply(x.as_slice())).sub(rhs).norm();
                if res <= MEMBERSHIP_TOL * (1.0 + rhs.norm()) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ProxKind::Zero { .. } => 0.0,
        })
    }
}

/// Prepared closed-form prox evaluator.
#[derive(Clone, Debug)]
pub(crate) enum ProxKernel {
    L1 {
        dim: usize,
        threshold: f64,
    },
    Quadratic {
        factor: CholeskyFactor,
        c_scaled: Vector,
    },
    Box {
        lower: Vector,
        upper: Vector,
    },
    Ball {
        center: Vector,
        radius: f64,
    },
    Affine {
        dim: usize,
        basis: Vec<Vector>,
        coeffs: Vec<f64>,
    },
    Zero {
        dim: usize,
    },
}

impl ProxKernel {
    pub(crate) fn dim(&self) -> usize {
        match self {
            ProxKernel::L1 { dim, .. }
            | ProxKernel::Zero { dim }
            | ProxKernel::Affine { dim, .. } => *dim,
            ProxKernel::Quadratic { factor, .. } => factor.dim(),
            ProxKernel::Box { lower, .. } => lower.dim(),
            ProxKernel::Ball { center, .. } => center.dim(),
        }
    }

    pub(crate) fn evaluate(&self, z: &Vector) -> Vector {
        match self {
            ProxKernel::L1 { threshold, .. } => Vector::from_raw(
                z.as_slice()
                    .iter()
                    .map(|&c| soft_threshold(c, *threshold))
                    .collect(),
            ),
            ProxKernel::Quadratic { factor, c_scaled } => {
                Vector::from_raw(factor.solve(z.add(c_scaled).as_slice()))
            }
            ProxKernel::Box { lower, upper } => Vector::from_raw(
                (0..z.dim())
                    .map(|i| z.get(i).clamp(lower.get(i), upper.get(i)))
                    .collect(),
            ),
            ProxKernel::Ball { center, radius } => {
                let d = z.sub(center);
                let dist = d.norm();
                if dist <= *radius {
                    z.clone()
                } else {
                    center.add(&d.scale(radius / dist))
                }
            }
            ProxKernel::Affine { basis, coeffs, .. } => {
                let mut p = z.clone();
                for (b, &c) in basis.iter().zip(coeffs) {
                    p = p.add_scaled(-(p.dot(b) - c), b);
                }
                p
            }
            ProxKernel::Zero { .. } => z.clone(),
        }
    }
}

fn soft_threshold(value: f64, threshold: f64) -> f64 {
    if value > threshold {
        value - threshold
    } else if value < -threshold {
        value + threshold
    } else {
        0.0
    }
}

/// Tolerance for rejecting `Ex = d` with `d` outside the range of `E`.
const AFFINE_CONSISTENCY_TOL: f64 = 1e-8;

/// Orthonormalizes the rows of `[E | d]`, transforming the right-hand side
/// alongside, so the set `{x : Ex = d}` becomes `{x : ⟨b_k, x⟩ = c_k}` with
/// orthonormal `b_k`. Redundant rows are dropped; the projection onto the
/// resulting set is checked against the original system, and an
/// inconsistent `d` is rejected.
fn affine_row_basis(matrix: &Matrix, rhs: &Vector) -> Result<(Vec<Vector>, Vec<f64>)> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut coeffs: Vec<f64> = Vec::new();
    for i in 0..matrix.rows() {
        let mut v = Vector::from_raw(matrix.row(i).to_vec());
        let mut t = rhs.get(i);
        let original = v.norm().max(1.0);
        for _ in 0..2 {
            for (b, &c) in basis.iter().zip(&coeffs) {
                let overlap = v.dot(b);
                v = v.add_scaled(-overlap, b);
                t -= overlap * c;
            }
        }
        let remaining = v.norm();
        if remaining > 1e-12 * original {
            basis.push(v.scale(1.0 / remaining));
            coeffs.push(t / remaining);
        }
        // a dropped row contributes only through the residual check below
    }
    // nearest feasible point per the orthonormalized system
    let mut x0 = Vector::zeros(matrix.cols());
    for (b, &c) in basis.iter().zip(&coeffs) {
        x0 = x0.add_scaled(c, b);
    }
    let residual = Vector::from_raw(matrix.apply(x0.as_slice()))
        .sub(rhs)
        .norm();
    if residual > AFFINE_CONSISTENCY_TOL {
        return Err(Error::InconsistentAffineSet {
            residual,
            tolerance: AFFINE_CONSISTENCY_TOL,
        });
    }
    Ok((basis, coeffs))
}
