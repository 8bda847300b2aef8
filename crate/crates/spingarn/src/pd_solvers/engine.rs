//! Steppers for the two composite primal-dual recursions.
//!
//! Both run the method of partial inverses on the product operator
//! `(x, y) ↦ Ax × By` over the graph subspace `V = {(x, y) : Lx = y}`;
//! they differ only in which Gram inverse realizes the projections.
//! With `Q = (Id + L*L)^{-1}`:
//!
//! ```text
//! p = J_A(x + u) + a        q = J_B(y + v) + b
//! r = x + u - p             s = y + v - q
//! t = Q(r + L*s)            w = Q(p + L*q)
//! x ← x - λt                y ← y - λLt
//! u ← u + λ(w - p)          v ← v + λ(Lw - q)
//! ```
//!
//! and with `R = (Id + LL*)^{-1}`:
//!
//! ```text
//! t = R(Lr - s)             w = R(Lp - q)
//! x ← x + λ(L*t - r)        y ← y - λ(t + s)
//! u ← u - λL*w              v ← v + λw
//! ```
//!
//! In exact arithmetic the two produce identical iterate sequences; the
//! `compare` command and the test suite hold them to that.

use crate::error::{Error, Result};
use crate::linops::{GramSide, GramSolver, Vector};

use super::CompositeProblem;

/// Which Gram system drives the projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdVariant {
    QForm,
    RForm,
}

/// Iterates of a primal-dual run. `y` mirrors `Lx` and `u` mirrors
/// `-L*v`; the pair `(x, y)` walks the graph subspace while `(u, v)`
/// walks its orthogonal complement.
#[derive(Clone, Debug)]
pub struct PdState {
    pub x: Vector,
    pub y: Vector,
    pub u: Vector,
    pub v: Vector,
}

impl PdState {
    pub fn magnitude(&self) -> f64 {
        self.x.norm() + self.y.norm() + self.u.norm() + self.v.norm()
    }

    /// Max relative deviation of the mirrored variables `y ≈ Lx` and
    /// `u ≈ -L*v`.
    pub fn drift(&self, l: &crate::linops::LinearMap) -> Result<f64> {
        let dy = self.y.sub(&l.apply(&self.x)?).norm() / (1.0 + self.y.norm());
        let du = self.u.add(&l.adjoint_apply(&self.v)?).norm() / (1.0 + self.u.norm());
        Ok(dy.max(du))
    }
}

/// Quantities reported by one step, taken at the pre-step state.
#[derive(Clone, Debug)]
pub struct PdStepInfo {
    /// `||x_n - w_n||`: vanishes along the run.
    pub q1: f64,
    /// `||u_n - r_n + t_n||`: vanishes along the run.
    pub q2: f64,
    /// Norm of the applied composite update.
    pub step_norm: f64,
    /// Drift of the mirrored variables before any re-projection.
    pub drift: f64,
    /// Whether the drift guard re-projected `y ← Lx`, `u ← -L*v`.
    pub reprojected: bool,
    /// The Gram solve outputs of this step, for invariant checks.
    pub t: Vector,
    pub w: Vector,
}

/// Relative drift beyond which the mirrored variables are re-projected.
const REPROJECT_THRESHOLD: f64 = 1e-6;

/// One primal-dual run over a composite problem.
pub struct PdEngine<'p> {
    problem: &'p CompositeProblem,
    variant: PdVariant,
    gram: GramSolver,
    state: PdState,
    iteration: usize,
    reprojections: usize,
}

impl<'p> PdEngine<'p> {
    /// Initializes `y_0 = L x_0` and `u_0 = -L* v_0`.
    pub fn new(
        problem: &'p CompositeProblem,
        variant: PdVariant,
        x0: Vector,
        v0: Vector,
    ) -> Result<Self> {
        let l = problem.map();
        x0.check_dim(l.domain_dim(), "initial primal point")?;
        v0.check_dim(l.codomain_dim(), "initial dual point")?;
        if !x0.is_finite() || !v0.is_finite() {
            return Err(Error::NonFinite("initial point"));
        }
        let side = match variant {
            PdVariant::QForm => GramSide::Primal,
            PdVariant::RForm => GramSide::Dual,
        };
        let gram = GramSolver::new(l.clone(), side)?;
        let y0 = l.apply(&x0)?;
        let u0 = l.adjoint_apply(&v0)?.scale(-1.0);
        Ok(PdEngine {
            problem,
            variant,
            gram,
            state: PdState {
                x: x0,
                y: y0,
                u: u0,
                v: v0,
            },
            iteration: 0,
            reprojections: 0,
        })
    }

    pub fn problem(&self) -> &'p CompositeProblem {
        self.problem
    }

    pub fn variant(&self) -> PdVariant {
        self.variant
    }

    pub fn state(&self) -> &PdState {
        &self.state
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn reprojections(&self) -> usize {
        self.reprojections
    }

    /// Advances one iteration with relaxation `lambda` and resolvent
    /// errors `(a, b)`, returning the step's diagnostics.
    pub fn step(&mut self, lambda: f64, a_err: &Vector, b_err: &Vector) -> Result<PdStepInfo> {
        let (next, mut info) = self.compute(lambda, a_err, b_err)?;
        self.state = next;
        self.iteration += 1;
        if info.drift > REPROJECT_THRESHOLD {
            let l = self.problem.map();
            self.state.y = l.apply(&self.state.x)?;
            self.state.u = l.adjoint_apply(&self.state.v)?.scale(-1.0);
            self.reprojections += 1;
            info.reprojected = true;
        }
        Ok(info)
    }

    /// Computes one step's diagnostics at the current state without
    /// advancing.
    pub fn probe(&self, lambda: f64, a_err: &Vector, b_err: &Vector) -> Result<PdStepInfo> {
        Ok(self.compute(lambda, a_err, b_err)?.1)
    }

    fn compute(
        &self,
        lambda: f64,
        a_err: &Vector,
        b_err: &Vector,
    ) -> Result<(PdState, PdStepInfo)> {
        if !(lambda.is_finite() && lambda > 0.0 && lambda < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "relaxation parameter must lie strictly in (0, 2), got {lambda}"
            )));
        }
        let l = self.problem.map();
        a_err.check_dim(l.domain_dim(), "primal error term")?;
        b_err.check_dim(l.codomain_dim(), "dual error term")?;

        let st = &self.state;
        let p = self
            .problem
            .primal_op()
            .resolve(&st.x.add(&st.u))?
            .add(a_err);
        let q = self.problem.dual_op().resolve(&st.y.add(&st.v))?.add(b_err);
        let r = st.x.add(&st.u).sub(&p);
        let s = st.y.add(&st.v).sub(&q);

        let (t, w, q1, q2, next, step_norm) = match self.variant {
            PdVariant::QForm => {
                let t = self.gram.solve(&r.add(&l.adjoint_apply(&s)?))?;
                let w = self.gram.solve(&p.add(&l.adjoint_apply(&q)?))?;
                let q1 = st.x.sub(&w).norm();
                let q2 = st.u.sub(&r).add(&t).norm();
                let lt = l.apply(&t)?;
                let lw = l.apply(&w)?;
                let dx = t.scale(-1.0);
                let dy = lt.scale(-1.0);
                let du = w.sub(&p);
                let dv = lw.sub(&q);
                let step_norm =
                    lambda * (dx.dot(&dx) + dy.dot(&dy) + du.dot(&du) + dv.dot(&dv)).sqrt();
                let next = PdState {
                    x: st.x.add_scaled(lambda, &dx),
                    y: st.y.add_scaled(lambda, &dy),
                    u: st.u.add_scaled(lambda, &du),
                    v: st.v.add_scaled(lambda, &dv),
                };
                (t, w, q1, q2, next, step_norm)
            }
            PdVariant::RForm => {
                let t = self.gram.solve(&l.apply(&r)?.sub(&s))?;
                let w = self.gram.solve(&l.apply(&p)?.sub(&q))?;
                let lt_adj = l.adjoint_apply(&t)?;
                let lw_adj = l.adjoint_apply(&w)?;
                // the Q-side quantities expressed through the R-side solves
                let q1 = st.x.sub(&p.sub(&lw_adj)).norm();
                let q2 = st.u.sub(&lt_adj).norm();
                let dx = lt_adj.sub(&r);
                let dy = t.add(&s).scale(-1.0);
                let du = lw_adj.scale(-1.0);
                let dv = w.clone();
                let step_norm =
                    lambda * (dx.dot(&dx) + dy.dot(&dy) + du.dot(&du) + dv.dot(&dv)).sqrt();
                let next = PdState {
                    x: st.x.add_scaled(lambda, &dx),
                    y: st.y.add_scaled(lambda, &dy),
                    u: st.u.add_scaled(lambda, &du),
                    v: st.v.add_scaled(lambda, &dv),
                };
                (t, w, q1, q2, next, step_norm)
            }
        };

        let drift = next.drift(l)?;
        Ok((
            next,
            PdStepInfo {
                q1,
                q2,
                step_norm,
                drift,
                reprojected: false,
                t,
                w,
            },
        ))
    }
}
