//! Spingarn's method of partial inverses and the primal-dual splitting
//! algorithms built on it, for composite monotone inclusions
//!
//! ```text
//! find x such that 0 ∈ Ax + L*BLx
//! ```
//!
//! over finite-dimensional real spaces, together with the dual inclusion
//! `0 ∈ -LA^{-1}(-L*v) + B^{-1}v`.
//!
//! The pieces, bottom up:
//!
//! * [`linops`] — linear operators with adjoints, block composition, Gram
//!   solvers for `(Id + L*L)^{-1}` / `(Id + LL*)^{-1}`, and projectors
//!   onto the graph subspace `{(x, y) : Lx = y}`.
//! * [`monotone_ops`] — maximally monotone operators as resolvent rules: a
//!   prox catalog, dense linear monotone maps, and the algebra that
//!   composes them (shifts, inverses, products, partial inverses).
//! * [`pinv_engine`] — the relaxed, error-tolerant proximal point step and
//!   the method of partial inverses over an arbitrary subspace.
//! * [`pd_solvers`] — the concrete primal-dual algorithms: the Q-form and
//!   R-form composite solvers and their multi-operator, structured
//!   minimization, and coupled-inclusion reductions.
//! * [`diagnostics`] — residual certificates, stopping logic, convergence
//!   history, CSV export.
//! * [`oracles`] — independent ground truth: partial inverses built
//!   directly from the graph definition, grid search for small argmin
//!   problems, and closed-form solutions of all-quadratic instances. Used
//!   by the test suite and the `check` command; shares no solve path with
//!   the solvers it validates.
//! * [`cli`] — problem-spec files, the `solve`/`check`/`compare`
//!   commands, and the randomized verification suites behind `check`.
//!
//! See the crate examples for one runnable program per capability.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod linops;
pub mod monotone_ops;
pub mod oracles;
pub mod pd_solvers;
pub mod pinv_engine;

pub use error::{Error, Result};
pub use linops::{
    BlockVector, GramSide, GramSolver, GraphProjector, GraphSubspace, LinearMap, Matrix, Vector,
};
pub use monotone_ops::{MonotoneOp, ProxKind, ProxSpec, SubspaceProjectorPair};
