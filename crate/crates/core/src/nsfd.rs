//! Combined nonstandard scheme for quasi-linear systems `v' = Av + g(t, v)`.
//!
//! The linear part is advanced with the explicit exact scheme and the
//! nonlinearity with a forward step scaled by the denominator function:
//!
//! ```text
//! v_{k+1} = Q·v_k + φ·g(t_k, v_k)
//! ```
//!
//! which is `(v_{k+1} − v_k)/φ = U + g(t_k, v_k)` with `U = (Q − I)v_k/φ`.
//! With `g ≡ 0` this is the exact scheme itself.

use crate::error::{Error, Result};
use crate::linalg3::{Matrix3, Vec3};
use crate::params::SchemeKind;
use crate::scheme::{exact_transfer, grid_step, Trajectory, TransferMatrix};
use crate::spectrum::DEFAULT_CLUSTER_TOL;

pub struct QuasiLinearProblem<G> {
    pub a: Matrix3,
    pub g: G,
    pub v0: Vec3,
    pub t_end: f64,
}

impl<G: Fn(f64, &Vec3) -> Vec3> QuasiLinearProblem<G> {
    pub fn new(a: Matrix3, g: G, v0: Vec3, t_end: f64) -> Self {
        QuasiLinearProblem { a, g, v0, t_end }
    }

    /// Exact explicit transfer matrix for the linear part at step `h`.
    pub fn transfer(&self, h: f64) -> Result<TransferMatrix> {
        exact_transfer(&self.a, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL)
    }
}

/// The registered test problem: `A = diag(−1, −2, −3)`,
/// `g(t, v) = e^{−t} sin(v)/(1 + t²)`, `v0 = (1, 1, 1)`.
pub fn test_problem(t_end: f64) -> QuasiLinearProblem<fn(f64, &Vec3) -> Vec3> {
    QuasiLinearProblem::new(
        crate::problems::example5(),
        crate::problems::example5_forcing as fn(f64, &Vec3) -> Vec3,
        Vec3::new(1.0, 1.0, 1.0),
        t_end,
    )
}

/// One step from `(t_k, v_k)`.
pub fn nsfd_step<G: Fn(f64, &Vec3) -> Vec3>(
    p: &QuasiLinearProblem<G>,
    q: &TransferMatrix,
    v: &Vec3,
    t: f64,
) -> Result<Vec3> {
    let phi = q
        .params
        .ok_or_else(|| {
            Error::InvalidInput("quasi-linear step needs an exact-scheme transfer matrix".into())
        })?
        .phi;
    let next = q.step(v) + (p.g)(t, v).scale(phi);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Overflow(format!(
            "quasi-linear state became non-finite after t = {t}"
        )))
    }
}

/// Integrates on `[0, T]` with `N` steps of size `T/N`.
pub fn nsfd_integrate<G: Fn(f64, &Vec3) -> Vec3>(
    p: &QuasiLinearProblem<G>,
    n: usize,
) -> Result<Trajectory> {
    let h = grid_step(p.t_end, n)?;
    let q = p.transfer(h)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut v = p.v0;
    times.push(0.0);
    states.push(v);
    for k in 0..n {
        v = nsfd_step(p, &q, &v, k as f64 * h)?;
        times.push((k + 1) as f64 * h);
        states.push(v);
    }
    Ok(Trajectory { times, states })
}

/// Classical RK4 on the full quasi-linear right-hand side; the reference
/// solution for accuracy checks.
pub fn rk4_integrate<G: Fn(f64, &Vec3) -> Vec3>(
    p: &QuasiLinearProblem<G>,
    n: usize,
) -> Result<Trajectory> {
    let h = grid_step(p.t_end, n)?;
    let f = |t: f64, v: &Vec3| p.a.mul_vec(v) + (p.g)(t, v);
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut v = p.v0;
    times.push(0.0);
    states.push(v);
    for k in 0..n {
        let t = k as f64 * h;
        let k1 = f(t, &v);
        let k2 = f(t + 0.5 * h, &(v + k1.scale(0.5 * h)));
        let k3 = f(t + 0.5 * h, &(v + k2.scale(0.5 * h)));
        let k4 = f(t + h, &(v + k3.scale(h)));
        v = v + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        if !v.is_finite() {
            return Err(Error::Overflow(format!(
                "reference state became non-finite at step {k}"
            )));
        }
        times.push((k + 1) as f64 * h);
        states.push(v);
    }
    Ok(Trajectory { times, states })
}

/// Forward Euler on the full right-hand side, `v_{k+1} = v_k + h(Av_k + g)`.
/// Divergent items are kept (no overflow error) so blow-up can be observed.
pub fn euler_integrate<G: Fn(f64, &Vec3) -> Vec3>(
    p: &QuasiLinearProblem<G>,
    n: usize,
) -> Result<Trajectory> {
    let h = grid_step(p.t_end, n)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut v = p.v0;
    times.push(0.0);
    states.push(v);
    for k in 0..n {
        let t = k as f64 * h;
        v = v + (p.a.mul_vec(&v) + (p.g)(t, &v)).scale(h);
        times.push((k + 1) as f64 * h);
        states.push(v);
    }
    Ok(Trajectory { times, states })
}
