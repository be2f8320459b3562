//! Exact finite-difference schemes for `x' = Ax` with a constant real 3×3
//! matrix `A`.
//!
//! Two scheme families are provided, an implicit one
//!
//! ```text
//! (x_{k+1} − ψ·x_k) / φ = A·[θ·x_{k+1} + (1 − θ)·x_k]
//! ```
//!
//! and an explicit one
//!
//! ```text
//! (x_{k+1} − ψ·x_k) / φ = A·x_k + θ·φ·A²·x_k
//! ```
//!
//! whose parameters depend only on the step and the eigenvalues of `A`, and
//! which reproduce the true solution at every grid point for any step size.
//!
//! ```
//! use eds3::{integrate, problems::example1, SchemeKind, Vec3};
//!
//! let traj = integrate(&example1(), Vec3::new(0.0, -50.0, 50.0), 20.0, 400, SchemeKind::Implicit)?;
//! let t = 20.0f64;
//! let x = 100.0 * (-t).exp() - 100.0 * t.cos() - 450.0 * t.sin();
//! assert!((traj.states[400][0] - x).abs() < 1e-9);
//! # Ok::<(), eds3::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg3;
pub mod nsfd;
pub mod params;
pub mod problems;
pub mod scheme;
pub mod spectrum;
pub mod verify;

pub use baselines::{baseline_transfer, MethodId};
pub use bench::{run_cell, run_table, BenchRecord, ErrorMetric};
pub use error::{Error, Result};
pub use linalg3::{expm, solve3, CMatrix3, CVec3, Complex, Matrix3, Vec3};
pub use nsfd::{nsfd_integrate, nsfd_step, QuasiLinearProblem};
pub use params::{params_for, ParamRoute, SchemeKind, SchemeParams};
pub use scheme::{build_transfer, exact_transfer, integrate, one_shot, Trajectory, TransferMatrix};
pub use spectrum::{classify, eigenvalues3, Spectrum, SpectrumClass, DEFAULT_CLUSTER_TOL};
