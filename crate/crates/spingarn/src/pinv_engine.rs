//! The relaxed, error-tolerant proximal point step and the method of
//! partial inverses over an arbitrary subspace projector pair.
//!
//! Given a maximally monotone `A` and a subspace `V`, the method solves
//!
//! ```text
//! find x ∈ V, u ∈ V⊥ such that u ∈ Ax
//! ```
//!
//! by iterating, from `x_0 ∈ V` and `u_0 ∈ V⊥`,
//!
//! ```text
//! p_n = J_A(x_n + u_n) + e_n
//! r_n = x_n + u_n - p_n
//! x_{n+1} = x_n - λ_n P_V r_n
//! u_{n+1} = u_n - λ_n P_V⊥ p_n
//! ```
//!
//! which is the proximal point algorithm applied to the partial inverse
//! `A_V` through the composite iterate `z_n = x_n + u_n`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{ConvergenceRecord, RunStatus, DIVERGENCE_LIMIT};
use crate::error::{Error, Result};
use crate::linops::Vector;
use crate::monotone_ops::{MonotoneOp, SubspaceProjectorPair};

/// Tolerance on `x_0 ∈ V` and `u_0 ∈ V⊥`, and on the subspace
/// memberships maintained along the run.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Relaxation parameters `λ_n ∈ (0, 2)`.
///
/// Only forms whose divergence condition `Σ λ_n (2 - λ_n) = +∞` holds
/// structurally are representable; both variants below satisfy it because
/// their values stay in a closed subinterval of `(0, 2)`.
#[derive(Clone, Debug)]
pub enum RelaxationSchedule {
    Constant(f64),
    /// `λ_n = limit + (start - limit) rate^n`.
    GeometricToLimit {
        start: f64,
        limit: f64,
        rate: f64,
    },
}

impl RelaxationSchedule {
    pub fn constant(lambda: f64) -> Result<Self> {
        check_relaxation(lambda)?;
        Ok(RelaxationSchedule::Constant(lambda))
    }

    pub fn geometric(start: f64, limit: f64, rate: f64) -> Result<Self> {
        check_relaxation(start)?;
        check_relaxation(limit)?;
        if !(rate.is_finite() && rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "geometric relaxation rate must lie in (0, 1), got {rate}"
            )));
        }
        Ok(RelaxationSchedule::GeometricToLimit { start, limit, rate })
    }

    pub fn value(&self, n: usize) -> f64 {
        match self {
            RelaxationSchedule::Constant(l) => *l,
            RelaxationSchedule::GeometricToLimit { start, limit, rate } => {
                limit + (start - limit) * rate.powi(n as i32)
            }
        }
    }
}

fn check_relaxation(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0 && lambda < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "relaxation parameter must lie strictly in (0, 2), got {lambda}"
        )));
    }
    Ok(())
}

/// Error terms injected into the resolvent evaluations. Zero in
/// production; the summable rule exists so tests can exercise the
/// error-tolerance hypotheses of the convergence theory.
#[derive(Clone, Debug)]
pub enum ErrorSchedule {
    Zero,
    /// `||e_n|| = scale / (n + 1)²` along a seeded pseudorandom direction,
    /// summable against any relaxation schedule.
    InverseSquare {
        scale: f64,
        seed: u64,
    },
}

impl ErrorSchedule {
    pub fn inverse_square(scale: f64, seed: u64) -> Result<Self> {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "error scale must be nonnegative, got {scale}"
            )));
        }
        Ok(ErrorSchedule::InverseSquare { scale, seed })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ErrorSchedule::Zero)
            || matches!(self, ErrorSchedule::InverseSquare { scale, .. } if *scale == 0.0)
    }

    /// The error vector for iteration `n`. `stream` separates independent
    /// sequences drawn from one schedule (the primal-dual solvers use two).
    pub fn sample(&self, n: usize, dim: usize, stream: u64) -> Vector {
        match self {
            ErrorSchedule::Zero => Vector::zeros(dim),
            ErrorSchedule::InverseSquare { scale, seed } => {
                if *scale == 0.0 {
                    return Vector::zeros(dim);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(
                    seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (stream << 56),
                );
                let raw = Vector::from_raw((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect());
                let norm = raw.norm();
                let target = scale / ((n + 1) * (n + 1)) as f64;
                if norm == 0.0 {
                    let mut coords = vec![0.0; dim];
                    coords[0] = target;
                    Vector::from_raw(coords)
                } else {
                    raw.scale(target / norm)
                }
            }
        }
    }
}

/// Shared iteration budget and tolerances.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub relaxation: RelaxationSchedule,
    pub errors: ErrorSchedule,
    /// Record every `history_stride`-th iteration (the final one always).
    pub history_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 100_000,
            tol: 1e-8,
            relaxation: RelaxationSchedule::Constant(1.0),
            errors: ErrorSchedule::Zero,
            history_stride: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol must be a positive real, got {}",
                self.tol
            )));
        }
        if self.history_stride == 0 {
            return Err(Error::InvalidArgument(
                "history_stride must be at least 1".into(),
            ));
        }
        check_relaxation(self.relaxation.value(0))?;
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_relaxation(mut self, relaxation: RelaxationSchedule) -> Self {
        self.relaxation = relaxation;
        self
    }

    pub fn with_errors(mut self, errors: ErrorSchedule) -> Self {
        self.errors = errors;
        self
    }

    pub fn with_history_stride(mut self, stride: usize) -> Self {
        self.history_stride = stride;
        self
    }
}

/// One relaxed inexact proximal point step
/// `z + λ (J z + c - z)`.
pub fn ppa_step(op: &MonotoneOp, z: &Vector, lambda: f64, c: &Vector) -> Result<Vector> {
    check_relaxation(lambda)?;
    z.check_dim(op.dim(), "proximal point iterate")?;
    c.check_dim(op.dim(), "proximal point error term")?;
    let j = op.resolve(z)?;
    Ok(z.add_scaled(lambda, &j.add(c).sub(z)))
}

/// Quantities produced by one partial-inverse step.
#[derive(Clone, Debug)]
pub struct SpingarnStepInfo {
    /// `||P_V r_n||`: magnitude of the x-update at λ = 1.
    pub v_residual: f64,
    /// `||P_V⊥ p_n||`: magnitude of the u-update at λ = 1.
    pub v_perp_residual: f64,
    /// `||P_V (p_n - e_n) - x_n||`, vanishing along the run.
    pub diag_primal: f64,
    /// `||P_V⊥ (r_n + e_n) - u_n||`, vanishing along the run.
    pub diag_dual: f64,
    /// `||x - J_A(x + u)||`: the solution certificate at the pre-step state.
    pub certificate: f64,
    pub step_norm: f64,
}

/// Stepper for the partial-inverse iteration; exposes the state so callers
/// can compare runs against other formulations step by step.
pub struct SpingarnRun<'a> {
    op: &'a MonotoneOp,
    proj: &'a SubspaceProjectorPair,
    x: Vector,
    u: Vector,
    iteration: usize,
}

impl<'a> SpingarnRun<'a> {
    pub fn new(
        op: &'a MonotoneOp,
        proj: &'a SubspaceProjectorPair,
        x0: Vector,
        u0: Vector,
    ) -> Result<Self> {
        if proj.dim() != op.dim() {
            return Err(Error::DimensionMismatch {
                context: "partial inverse subspace",
                expected: op.dim(),
                actual: proj.dim(),
            });
        }
        x0.check_dim(op.dim(), "initial x")?;
        u0.check_dim(op.dim(), "initial u")?;
        let x_defect = proj.membership_defect_v(&x0)?;
        if x_defect > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "x0 must lie in V: defect {x_defect:.3e} exceeds {MEMBERSHIP_TOL:.0e}"
            )));
        }
        let u_defect = proj.membership_defect_v_perp(&u0)?;
        if u_defect > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "u0 must lie in V⊥: defect {u_defect:.3e} exceeds {MEMBERSHIP_TOL:.0e}"
            )));
        }
        Ok(SpingarnRun {
            op,
            proj,
            x: x0,
            u: u0,
            iteration: 0,
        })
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn u(&self) -> &Vector {
        &self.u
    }

    /// The composite iterate `z_n = x_n + u_n` driven by the proximal
    /// point recursion on `A_V`.
    pub fn composite(&self) -> Vector {
        self.x.add(&self.u)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Computes the step quantities at the current state without advancing.
    pub fn probe(&self, error: &Vector) -> Result<SpingarnStepInfo> {
        Ok(self.compute(error)?.1)
    }

    /// Advances one iteration and reports its quantities.
    pub fn step(&mut self, lambda: f64, error: &Vector) -> Result<SpingarnStepInfo> {
        check_relaxation(lambda)?;
        let (update, mut info) = self.compute(error)?;
        self.x = self.x.add_scaled(-lambda, &update.pv_r);
        self.u = self.u.add_scaled(-lambda, &update.pvp_p);
        info.step_norm =
            lambda * (update.pv_r.dot(&update.pv_r) + update.pvp_p.dot(&update.pvp_p)).sqrt();
        self.iteration += 1;
        Ok(info)
    }

    /// Largest relative violation of `x ∈ V`, `u ∈ V⊥`.
    pub fn membership_defect(&self) -> Result<f64> {
        let dx = self.proj.membership_defect_v(&self.x)?;
        let du = self.proj.membership_defect_v_perp(&self.u)?;
        Ok(dx.max(du))
    }

    fn compute(&self, error: &Vector) -> Result<(SpingarnUpdate, SpingarnStepInfo)> {
        error.check_dim(self.op.dim(), "error term")?;
        let z = self.composite();
        let j = self.op.resolve(&z)?;
        let p = j.add(error);
        let r = z.sub(&p);
        let pv_r = self.proj.project_v(&r)?;
        let pvp_p = self.proj.project_v_perp(&p)?;
        let diag_primal = self.proj.project_v(&j)?.sub(&self.x).norm();
        let diag_dual = self.proj.project_v_perp(&z.sub(&j))?.sub(&self.u).norm();
        let certificate = self.x.sub(&j).norm();
        let info = SpingarnStepInfo {
            v_residual: pv_r.norm(),
            v_perp_residual: pvp_p.norm(),
            diag_primal,
            diag_dual,
            certificate,
            step_norm: 0.0,
        };
        Ok((SpingarnUpdate { pv_r, pvp_p }, info))
    }
}

struct SpingarnUpdate {
    pv_r: Vector,
    pvp_p: Vector,
}

/// Outcome of a full partial-inverse run.
#[derive(Clone, Debug)]
pub struct SpingarnOutcome {
    pub x: Vector,
    pub u: Vector,
    pub status: RunStatus,
    pub iterations: usize,
    /// Final certificate `||x - J_A(x + u)||`.
    pub residual: f64,
    pub history: Vec<ConvergenceRecord>,
}

/// Runs the method of partial inverses until the update magnitudes fall
/// below `tol (1 + ||x|| + ||u||)`, the divergence guard trips, or the
/// iteration budget runs out.
///
/// The stopping quantities `||P_V r_n||` and `||P_V⊥ p_n||` are exactly
/// the λ = 1 update magnitudes and vanish precisely at solutions, so a
/// non-converged status after `max_iter` signals a possibly empty
/// solution set.
pub fn spingarn_run(
    op: &MonotoneOp,
    proj: &SubspaceProjectorPair,
    x0: Vector,
    u0: Vector,
    config: &SolverConfig,
) -> Result<SpingarnOutcome> {
    config.validate()?;
    let mut run = SpingarnRun::new(op, proj, x0, u0)?;
    let mut history: Vec<ConvergenceRecord> = Vec::new();
    let dim = op.dim();

    let status;
    let iterations;
    let final_residual;

    let mut n = 0;
    loop {
        let error = config.errors.sample(n, dim, 0);
        let info = run.probe(&error)?;
        let scale = 1.0 + run.x().norm() + run.u().norm();
        let mut record = ConvergenceRecord {
            iteration: n,
            rho_primal: info.v_residual,
            rho_dual: info.v_perp_residual,
            step_norm: 0.0,
            subspace_drift: run.membership_defect()?,
            asymptotic_q1: info.diag_primal,
            asymptotic_q2: info.diag_dual,
        };

        let converged = info.v_residual.max(info.v_perp_residual) <= config.tol * scale;
        // negated comparison so NaN magnitudes count as divergent
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let diverged = !(run.x().norm() + run.u().norm() <= DIVERGENCE_LIMIT);
        let out_of_budget = n == config.max_iter;

        if converged || diverged || out_of_budget {
            history.push(record);
            status = if converged {
                RunStatus::Converged
            } else if diverged {
                RunStatus::Diverged
            } else {
                RunStatus::MaxIter
            };
            iterations = n;
            final_residual = info.certificate;
            break;
        }

        let step_info = run.step(config.relaxation.value(n), &error)?;
        if n % config.history_stride == 0 {
            record.step_norm = step_info.step_norm;
            history.push(record);
        }
        n += 1;
    }

    Ok(SpingarnOutcome {
        x: run.x().clone(),
        u: run.u().clone(),
        status,
        iterations,
        residual: final_residual,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::Matrix;
    use crate::monotone_ops::ProxSpec;

    fn vec1(v: f64) -> Vector {
        Vector::new(vec![v]).unwrap()
    }

    #[test]
    fn ppa_step_examples() {
        // J = ½ Id (B = Id)
        let b = MonotoneOp::scaled_identity(1, 1.0).unwrap();
        assert_eq!(
            ppa_step(&b, &vec1(4.0), 1.0, &vec1(0.0)).unwrap().get(0),
            2.0
        );
        assert_eq!(
            ppa_step(&b, &vec1(4.0), 0.5, &vec1(0.0)).unwrap().get(0),
            3.0
        );
        assert_eq!(
            ppa_step(&b, &vec1(4.0), 1.0, &vec1(0.25)).unwrap().get(0),
            2.25
        );
    }

    #[test]
    fn ppa_step_rejects_bad_relaxation() {
        let b = MonotoneOp::scaled_identity(1, 1.0).unwrap();
        for bad in [0.0, 2.0, -0.5, f64::NAN] {
            assert!(ppa_step(&b, &vec1(1.0), bad, &vec1(0.0)).is_err());
        }
    }

    #[test]
    fn relaxation_schedules_stay_in_range() {
        assert!(RelaxationSchedule::constant(0.0).is_err());
        assert!(RelaxationSchedule::constant(2.0).is_err());
        let g = RelaxationSchedule::geometric(1.9, 0.5, 0.9).unwrap();
        for n in 0..1000 {
            let l = g.value(n);
            assert!(l > 0.0 && l < 2.0);
        }
        assert!((g.value(0) - 1.9).abs() < 1e-15);
    }

    #[test]
    fn error_schedule_envelope() {
        let zero = ErrorSchedule::Zero;
        assert_eq!(zero.sample(3, 4, 0).as_slice(), &[0.0; 4]);
        let sched = ErrorSchedule::inverse_square(0.1, 42).unwrap();
        for n in 0..50 {
            let e = sched.sample(n, 3, 0);
            let expected = 0.1 / ((n + 1) * (n + 1)) as f64;
            assert!((e.norm() - expected).abs() <= 1e-15 * (1.0 + expected));
        }
        // deterministic given the seed
        assert_eq!(
            sched.sample(7, 3, 0).as_slice(),
            sched.sample(7, 3, 0).as_slice()
        );
    }

    #[test]
    fn whole_space_run_is_plain_ppa() {
        // A = 2 Id on R²: z' = z/3 after one step from (3, 3)
        let a = MonotoneOp::scaled_identity(2, 2.0).unwrap();
        let proj = SubspaceProjectorPair::whole(2);
        let mut run = SpingarnRun::new(
            &a,
            &proj,
            Vector::new(vec![3.0, 3.0]).unwrap(),
            Vector::zeros(2),
        )
        .unwrap();
        run.step(1.0, &Vector::zeros(2)).unwrap();
        assert_eq!(run.x().as_slice(), &[1.0, 1.0]);
        assert_eq!(run.u().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn converges_to_unique_zero() {
        // A = Id, V = span{e1} in R²: the only solution is (0, 0)
        let a = MonotoneOp::scaled_identity(2, 1.0).unwrap();
        let proj = SubspaceProjectorPair::span(2, &[Vector::new(vec![1.0, 0.0]).unwrap()]).unwrap();
        let out = spingarn_run(
            &a,
            &proj,
            Vector::new(vec![5.0, 0.0]).unwrap(),
            Vector::new(vec![0.0, -2.0]).unwrap(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!(out.x.norm() <= 1e-7);
        assert!(out.u.norm() <= 1e-7);
        assert!(out.residual <= 1e-8 * 3.0);
    }

    #[test]
    fn converges_to_affine_solution() {
        // A x = x - (1, 1), V = span{e1}: solution x = (1, 0), u = (0, -1)
        let a = MonotoneOp::from_prox(
            &ProxSpec::quadratic(
                Matrix::identity(2),
                Vector::new(vec![1.0, 1.0]).unwrap(),
                1.0,
            )
            .unwrap(),
        )
        .unwrap();
        let proj = SubspaceProjectorPair::span(2, &[Vector::new(vec![1.0, 0.0]).unwrap()]).unwrap();
        let out = spingarn_run(
            &a,
            &proj,
            Vector::zeros(2),
            Vector::zeros(2),
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!((out.x.get(0) - 1.0).abs() <= 1e-7);
        assert!(out.x.get(1).abs() <= 1e-7);
        assert!(out.u.get(0).abs() <= 1e-7);
        assert!((out.u.get(1) + 1.0).abs() <= 1e-7);
        // diagnostics fell below tolerance at the convergence iteration
        let last = out.history.last().unwrap();
        assert!(last.asymptotic_q1 <= 1e-8 * (1.0 + out.x.norm() + out.u.norm()));
        assert!(last.asymptotic_q2 <= 1e-8 * (1.0 + out.x.norm() + out.u.norm()));
        // subspace memberships held throughout
        assert!(out
            .history
            .iter()
            .all(|r| r.subspace_drift <= MEMBERSHIP_TOL));
    }

    #[test]
    fn rejects_bad_initial_memberships() {
        let a = MonotoneOp::scaled_identity(2, 1.0).unwrap();
        let proj = SubspaceProjectorPair::span(2, &[Vector::new(vec![1.0, 0.0]).unwrap()]).unwrap();
        // x0 has a V⊥ component
        assert!(SpingarnRun::new(
            &a,
            &proj,
            Vector::new(vec![1.0, 1.0]).unwrap(),
            Vector::zeros(2),
        )
        .is_err());
        // u0 has a V component
        assert!(SpingarnRun::new(
            &a,
            &proj,
            Vector::new(vec![1.0, 0.0]).unwrap(),
            Vector::new(vec![0.5, 0.0]).unwrap(),
        )
        .is_err());
    }

    #[test]
    fn composite_iterate_matches_ppa_on_partial_inverse() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let dim = 4;
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, rng.random_range(-0.5..0.5));
            }
        }
        let sym = m.symmetric_part();
        // make the symmetric part PSD by shifting the diagonal
        let mut shifted = sym.clone();
        for i in 0..dim {
            shifted.set(i, i, shifted.get(i, i) + 2.0);
        }
        let a = MonotoneOp::linear(shifted).unwrap();
        let basis = vec![
            Vector::new(vec![1.0, 0.0, 1.0, 0.0]).unwrap(),
            Vector::new(vec![0.0, 1.0, 0.0, -1.0]).unwrap(),
        ];
        let proj = SubspaceProjectorPair::span(dim, &basis).unwrap();
        let av = a.clone().partial_inverse(proj.clone()).unwrap();

        let z0 = Vector::new(vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        let x0 = proj.project_v(&z0).unwrap();
        let u0 = proj.project_v_perp(&z0).unwrap();
        let mut run = SpingarnRun::new(&a, &proj, x0, u0).unwrap();
        let mut z = run.composite();
        let lambda = 1.3;
        for _ in 0..100 {
            run.step(lambda, &Vector::zeros(dim)).unwrap();
            z = ppa_step(&av, &z, lambda, &Vector::zeros(dim)).unwrap();
            assert!(run.composite().sub(&z).norm() <= 1e-12);
        }
    }
}
