//! Independent ground truth for the test suite and the `check` command.
//!
//! Everything here is deliberately built from first principles — the
//! partial inverse straight from its graph definition, linear systems by
//! local Gauss-Jordan elimination, argmins by exhaustive grid search — and
//! shares no solve path with the solvers it validates.

mod grid;
pub mod sampling;

pub use grid::grid_argmin;

use crate::error::{Error, Result};
use crate::linops::{symmetric_eigenvalues, LinearMap, Matrix, Vector};

/// A dense linear monotone operator `x ↦ Ax` together with an orthonormal
/// basis of a subspace `V`, the raw material for graph constructions.
#[derive(Clone, Debug)]
pub struct LinearOperatorOracle {
    a: Matrix,
    basis: Vec<Vector>,
}

impl LinearOperatorOracle {
    /// Validates that `A + A^T` is PSD (to `-1e-10`) and the basis is
    /// orthonormal (to `1e-12`); an empty basis means `V = {0}`.
    pub fn new(a: Matrix, basis: Vec<Vector>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(
                "oracle operator matrix must be square".into(),
            ));
        }
        let n = a.rows();
        let eigs = symmetric_eigenvalues(&a)?;
        let min = eigs.iter().fold(f64::INFINITY, |x, &e| x.min(e));
        if min < -1e-10 * a.max_abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "oracle operator is not monotone: symmetric part eigenvalue {min:.3e}"
            )));
        }
        for (i, b) in basis.iter().enumerate() {
            b.check_dim(n, "oracle basis vector")?;
            if (b.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "oracle basis vector {i} is not unit length"
                )));
            }
            for other in basis.iter().take(i) {
                if b.dot(other).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "oracle basis vector {i} is not orthogonal to earlier ones"
                    )));
                }
            }
        }
        if basis.len() > n {
            return Err(Error::InvalidArgument(
                "oracle basis has more vectors than the space dimension".into(),
            ));
        }
        Ok(LinearOperatorOracle { a, basis })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    fn project_v(&self, z: &Vector) -> Vector {
        let mut p = Vector::zeros(z.dim());
        for b in &self.basis {
            p = p.add_scaled(z.dot(b), b);
        }
        p
    }

    fn project_v_perp(&self, z: &Vector) -> Vector {
        z.sub(&self.project_v(z))
    }
}

/// Resolvent matrix of the partial inverse `A_V`, built directly from the
/// graph definition: each basis point `x` of the space is mapped to
///
/// ```text
/// first  = P_V x + P_V⊥ (Ax)
/// second = P_V (Ax) + P_V⊥ x
/// ```
///
/// the matrix `M_V` with `second = M_V first` is recovered by elimination,
/// and `(Id + M_V)^{-1}` is returned. A singular system means the sampled
/// instance is numerically degenerate and should be regenerated.
pub fn partial_inverse_matrix(oracle: &LinearOperatorOracle) -> Result<Matrix> {
    let n = oracle.dim();
    let mut first = Matrix::zeros(n, n);
    let mut second = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let x = Vector::new(e.clone())?;
        let ax = Vector::from_raw(oracle.a.apply(x.as_slice()));
        let f = oracle.project_v(&x).add(&oracle.project_v_perp(&ax));
        let s = oracle.project_v(&ax).add(&oracle.project_v_perp(&x));
        for i in 0..n {
            first.set(i, j, f.get(i));
            second.set(i, j, s.get(i));
        }
        e[j] = 0.0;
    }
    // M_V first = second  <=>  first^T M_V^T = second^T
    let m_v_t = gauss_solve_multi(&first.transpose(), &second.transpose())?;
    let m_v = m_v_t.transpose();
    let mut id_plus = m_v.clone();
    for i in 0..n {
        id_plus.set(i, i, id_plus.get(i, i) + 1.0);
    }
    gauss_solve_multi(&id_plus, &Matrix::identity(n))
}

/// Closed-form reference for all-quadratic composite problems: with
/// `A x = M_A x - c_A` and `B y = M_B y - c_B`, the primal solution solves
/// `(M_A + L* M_B L) x = c_A + L* c_B` and the dual is
/// `v = M_B L x - c_B`.
pub fn kkt_linear_solve(
    m_a: &Matrix,
    c_a: &Vector,
    m_b: &Matrix,
    c_b: &Vector,
    l: &LinearMap,
) -> Result<(Vector, Vector)> {
    let n = l.domain_dim();
    let m = l.codomain_dim();
    if !m_a.is_square() || m_a.rows() != n {
        return Err(Error::DimensionMismatch {
            context: "quadratic A-part",
            expected: n,
            actual: m_a.rows(),
        });
    }
    if !m_b.is_square() || m_b.rows() != m {
        return Err(Error::DimensionMismatch {
            context: "quadratic B-part",
            expected: m,
            actual: m_b.rows(),
        });
    }
    c_a.check_dim(n, "quadratic A linear term")?;
    c_b.check_dim(m, "quadratic B linear term")?;

    // K = M_A + L* M_B L, assembled column by column
    let mut k = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let ej = Vector::new(e.clone())?;
        let le = l.apply(&ej)?;
        let mble = Vector::from_raw(m_b.apply(le.as_slice()));
        let col = Vector::from_raw(m_a.apply(ej.as_slice())).add(&l.adjoint_apply(&mble)?);
        for i in 0..n {
            k.set(i, j, col.get(i));
        }
        e[j] = 0.0;
    }
    let rhs = c_a.add(&l.adjoint_apply(c_b)?);
    let mut rhs_col = Matrix::zeros(n, 1);
    for i in 0..n {
        rhs_col.set(i, 0, rhs.get(i));
    }
    let x_col = gauss_solve_multi(&k, &rhs_col)?;
    let x = Vector::from_raw((0..n).map(|i| x_col.get(i, 0)).collect());
    let lx = l.apply(&x)?;
    let v = Vector::from_raw(m_b.apply(lx.as_slice())).sub(c_b);

    // self-check the stationarity residual
    let grad = Vector::from_raw(m_a.apply(x.as_slice()))
        .sub(c_a)
        .add(&l.adjoint_apply(&v)?);
    let res = grad.norm();
    if res > 1e-10 * (1.0 + c_a.norm() + c_b.norm()) {
        return Err(Error::Singular(format!(
            "KKT reference solve left residual {res:.3e}"
        )));
    }
    Ok((x, v))
}

/// Gauss-Jordan elimination with partial pivoting for `A X = B`.
///
/// Local to the oracle module on purpose: reference solutions must not
/// flow through the factorizations used by the solvers under test.
fn gauss_solve_multi(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::InvalidArgument(
            "elimination needs a square system with matching right-hand side".into(),
        ));
    }
    let n = a.rows();
    let k = b.cols();
    let mut work = a.clone();
    let mut rhs = b.clone();
    let scale = a.max_abs().max(1.0);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, work.get(r, col).abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot <= 1e-14 * scale {
            return Err(Error::Singular(format!(
                "elimination pivot {col} is {pivot:.3e}"
            )));
        }
        if pivot_row != col {
            for j in 0..n {
                let t = work.get(col, j);
                work.set(col, j, work.get(pivot_row, j));
                work.set(pivot_row, j, t);
            }
            for j in 0..k {
                let t = rhs.get(col, j);
                rhs.set(col, j, rhs.get(pivot_row, j));
                rhs.set(pivot_row, j, t);
            }
        }
        let p = work.get(col, col);
        for j in 0..n {
            work.set(col, j, work.get(col, j) / p);
        }
        for j in 0..k {
            rhs.set(col, j, rhs.get(col, j) / p);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = work.get(r, col);
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                work.set(r, j, work.get(r, j) - f * work.get(col, j));
            }
            for j in 0..k {
                rhs.set(r, j, rhs.get(r, j) - f * rhs.get(col, j));
            }
        }
    }
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(dim: usize, axis: usize) -> Vector {
        let mut c = vec![0.0; dim];
        c[axis] = 1.0;
        Vector::new(c).unwrap()
    }

    #[test]
    fn axis_subspace_resolvent() {
        // A = diag(1, 3), V = span{e1}: A_V(a, b) = (a, b/3), so the
        // resolvent is diag(1/2, 3/4).
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let oracle = LinearOperatorOracle::new(a, vec![unit(2, 0)]).unwrap();
        let r = partial_inverse_matrix(&oracle).unwrap();
        assert!((r.get(0, 0) - 0.5).abs() < 1e-12);
        assert!((r.get(1, 1) - 0.75).abs() < 1e-12);
        assert!(r.get(0, 1).abs() < 1e-12 && r.get(1, 0).abs() < 1e-12);
    }

    #[test]
    fn whole_space_is_plain_resolvent() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let oracle = LinearOperatorOracle::new(a.clone(), vec![unit(2, 0), unit(2, 1)]).unwrap();
        let r = partial_inverse_matrix(&oracle).unwrap();
        // compare against (Id + A)^{-1} from the same elimination
        let mut id_plus = a.clone();
        for i in 0..2 {
            id_plus.set(i, i, id_plus.get(i, i) + 1.0);
        }
        let direct = gauss_solve_multi(&id_plus, &Matrix::identity(2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.get(i, j) - direct.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn origin_subspace_is_moreau_complement() {
        let a = Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let oracle = LinearOperatorOracle::new(a.clone(), vec![]).unwrap();
        let r = partial_inverse_matrix(&oracle).unwrap();
        let mut id_plus = a.clone();
        for i in 0..2 {
            id_plus.set(i, i, id_plus.get(i, i) + 1.0);
        }
        let inv = gauss_solve_multi(&id_plus, &Matrix::identity(2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((r.get(i, j) - (id - inv.get(i, j))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_validates_inputs() {
        let not_monotone = Matrix::from_rows(&[vec![-1.0]]).unwrap();
        assert!(LinearOperatorOracle::new(not_monotone, vec![]).is_err());
        let a = Matrix::identity(2);
        let not_unit = Vector::new(vec![0.5, 0.0]).unwrap();
        assert!(LinearOperatorOracle::new(a.clone(), vec![not_unit]).is_err());
        let b1 = unit(2, 0);
        let b2 = Vector::new(vec![(0.5f64).sqrt(), (0.5f64).sqrt()]).unwrap();
        assert!(LinearOperatorOracle::new(a, vec![b1, b2]).is_err());
    }

    #[test]
    fn kkt_examples() {
        // unconstrained: x = 5, v = 0
        let (x, v) = kkt_linear_solve(
            &Matrix::identity(1),
            &Vector::new(vec![5.0]).unwrap(),
            &Matrix::zeros(1, 1),
            &Vector::zeros(1),
            &LinearMap::identity(1).unwrap(),
        )
        .unwrap();
        assert!((x.get(0) - 5.0).abs() < 1e-12);
        assert!(v.get(0).abs() < 1e-12);

        // (1 + 1) x = 3
        let (x, v) = kkt_linear_solve(
            &Matrix::identity(1),
            &Vector::new(vec![3.0]).unwrap(),
            &Matrix::identity(1),
            &Vector::zeros(1),
            &LinearMap::identity(1).unwrap(),
        )
        .unwrap();
        assert!((x.get(0) - 1.5).abs() < 1e-12);
        assert!((v.get(0) - 1.5).abs() < 1e-12);

        // 2-D primal with 1-D dual through L = [1 0]
        let (x, v) = kkt_linear_solve(
            &Matrix::identity(2),
            &Vector::new(vec![2.0, 2.0]).unwrap(),
            &Matrix::identity(1),
            &Vector::zeros(1),
            &LinearMap::dense(Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap()),
        )
        .unwrap();
        assert!((x.get(0) - 1.0).abs() < 1e-12);
        assert!((x.get(1) - 2.0).abs() < 1e-12);
        assert!((v.get(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_system_reported() {
        let k = Matrix::zeros(2, 2);
        assert!(gauss_solve_multi(&k, &Matrix::identity(2)).is_err());
    }
}
