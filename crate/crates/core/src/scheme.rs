//! One-step transfer matrices and trajectory drivers.
//!
//! For a linear system every one-step method is a matrix `Q` with
//! `x_{k+1} = Q·x_k`. The exact schemes produce `Q = e^{Ah}` up to rounding,
//! which [`build_transfer`] checks against the [`expm`] oracle before a
//! single step is taken.

use crate::baselines::MethodId;
use crate::error::{Error, Result};
use crate::linalg3::{expm, Lu, Matrix3, Vec3};
use crate::params::{confluent_params, params_for, SchemeKind, SchemeParams};
use crate::spectrum::{classify, eigenvalues3, SpectrumClass, DEFAULT_CLUSTER_TOL};

/// Relative bound on `‖Q − e^{Ah}‖_∞` accepted for an exact scheme.
pub const EXACTNESS_TOL: f64 = 1e-9;

/// Clustering tolerances tried after the requested one when the resulting
/// scheme fails validation.
const CLUSTER_LADDER: [f64; 4] = [1e-6, 1e-5, 1e-4, 1e-3];

/// Deviation below which a candidate is taken without trying the others.
const ACCURATE_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub q: Matrix3,
    pub h: f64,
    pub method: MethodId,
    /// Present for the exact schemes.
    pub params: Option<SchemeParams>,
    /// Spectral class the parameters were built from, if any.
    pub class: Option<SpectrumClass>,
}

impl TransferMatrix {
    pub fn kind(&self) -> Option<SchemeKind> {
        self.params.map(|p| p.kind)
    }

    #[inline]
    pub fn step(&self, x: &Vec3) -> Vec3 {
        self.q.mul_vec(x)
    }

    /// Lazily yields `x_0, x_1, …, x_n`.
    pub fn states(&self, x0: Vec3, n: usize) -> States<'_> {
        States {
            q: &self.q,
            x: x0,
            k: 0,
            n,
        }
    }
}

/// Iterator over `(k, x_k)` produced by repeated application of `Q`.
pub struct States<'a> {
    q: &'a Matrix3,
    x: Vec3,
    k: usize,
    n: usize,
}

impl Iterator for States<'_> {
    type Item = (usize, Vec3);

    fn next(&mut self) -> Option<(usize, Vec3)> {
        if self.k > self.n {
            return None;
        }
        let out = (self.k, self.x);
        self.k += 1;
        if self.k <= self.n {
            self.x = self.q.mul_vec(&self.x);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.n + 1).saturating_sub(self.k);
        (left, Some(left))
    }
}

impl ExactSizeIterator for States<'_> {}

/// Uniform-grid trajectory, `times[k] = k·h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec3>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<(f64, Vec3)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Vec3)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Transfer matrix of a scheme triple, without the exactness check.
///
/// Implicit: `Q = (I − φθA)^{-1}(ψI + φ(1−θ)A)`. Explicit:
/// `Q = ψI + φA + θφ²A²`.
pub fn scheme_matrix(a: &Matrix3, p: &SchemeParams) -> Result<Matrix3> {
    if !p.is_finite() {
        return Err(Error::ParamSingularity("non-finite parameters".into()));
    }
    match p.kind {
        SchemeKind::Implicit => {
            let lhs = a.affine(1.0, -p.phi * p.theta);
            let rhs = a.affine(p.psi, p.phi * (1.0 - p.theta));
            let lu = Lu::factor(&lhs).map_err(|_| Error::SingularImplicitStep)?;
            let cols = [0, 1, 2].map(|j| lu.solve(&rhs.column(j)));
            let q = Matrix3::from_columns(cols);
            if q.is_finite() {
                Ok(q)
            } else {
                Err(Error::SingularImplicitStep)
            }
        }
        SchemeKind::Explicit => {
            let a2 = a.matmul(a);
            let q = a.affine(p.psi, p.phi) + a2.scale(p.theta * p.phi * p.phi);
            if q.is_finite() {
                Ok(q)
            } else {
                Err(Error::Overflow("explicit transfer matrix".into()))
            }
        }
    }
}

/// Builds and validates the transfer matrix of an exact scheme.
pub fn build_transfer(a: &Matrix3, p: SchemeParams) -> Result<TransferMatrix> {
    let q = scheme_matrix(a, &p)?;
    let e = expm(a, p.h)?;
    let bound = EXACTNESS_TOL * e.norm_inf().max(1.0);
    let deviation = (q - e).norm_inf();
    if !(deviation <= bound) {
        return Err(Error::ExactnessViolation { deviation, bound });
    }
    Ok(TransferMatrix {
        q,
        h: p.h,
        method: method_of(p.kind),
        params: Some(p),
        class: None,
    })
}

fn method_of(kind: SchemeKind) -> MethodId {
    match kind {
        SchemeKind::Implicit => MethodId::Ieds,
        SchemeKind::Explicit => MethodId::Eeds,
    }
}

/// Exact-scheme transfer matrix for `x' = Ax` with step `h`.
///
/// The spectrum is classified at `cluster_tol`. Unless the resulting `Q`
/// agrees with `e^{Ah}` to about 1e-13, coarser tolerances are tried (a
/// defective eigenvalue comes out of the cubic split by up to `ε^{1/3}`),
/// then Hermite interpolation at the unmerged eigenvalues, and the closest
/// candidate within [`EXACTNESS_TOL`] wins. The first error is reported if
/// nothing validates.
pub fn exact_transfer(
    a: &Matrix3,
    h: f64,
    kind: SchemeKind,
    cluster_tol: f64,
) -> Result<TransferMatrix> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let spectrum = eigenvalues3(a);
    let e = expm(a, h)?;
    let scale = e.norm_inf().max(1.0);
    let bound = EXACTNESS_TOL * scale;
    let tols =
        std::iter::once(cluster_tol).chain(CLUSTER_LADDER.into_iter().filter(|&t| t > cluster_tol));
    let mut first = None;
    let mut best: Option<(f64, TransferMatrix)> = None;
    let mut consider = |p: Result<SchemeParams>, class: Option<SpectrumClass>| -> Result<bool> {
        let q = match p.and_then(|p| scheme_matrix(a, &p).map(|q| (p, q))) {
            Ok((p, q)) => {
                let deviation = (q - e).norm_inf();
                let tm = TransferMatrix {
                    q,
                    h,
                    method: method_of(kind),
                    params: Some(p),
                    class,
                };
                (deviation, tm)
            }
            Err(e @ Error::InvalidInput(_)) => return Err(e),
            Err(e) => {
                first.get_or_insert(e);
                return Ok(false);
            }
        };
        if !(q.0 <= bound) {
            first.get_or_insert(Error::ExactnessViolation {
                deviation: q.0,
                bound,
            });
            return Ok(false);
        }
        let good = q.0 <= ACCURATE_TOL * scale;
        if best.as_ref().is_none_or(|b| q.0 < b.0) {
            best = Some(q);
        }
        Ok(good)
    };
    let mut accurate = false;
    for tol in tols {
        let class = classify(&spectrum, tol).class;
        if consider(params_for(&class, h, kind), Some(class))? {
            accurate = true;
            break;
        }
    }
    if !accurate {
        consider(confluent_params(spectrum.eigenvalues, h, kind), None)?;
    }
    match best {
        Some((_, tm)) => Ok(tm),
        None => Err(first.expect("at least one attempt was made")),
    }
}

/// Integrates `x' = Ax` on `[0, T]` with `N` exact steps.
pub fn integrate(
    a: &Matrix3,
    x0: Vec3,
    t_end: f64,
    n: usize,
    kind: SchemeKind,
) -> Result<Trajectory> {
    integrate_with(a, x0, t_end, n, kind, DEFAULT_CLUSTER_TOL)
}

pub fn integrate_with(
    a: &Matrix3,
    x0: Vec3,
    t_end: f64,
    n: usize,
    kind: SchemeKind,
    cluster_tol: f64,
) -> Result<Trajectory> {
    let h = grid_step(t_end, n)?;
    let tm = exact_transfer(a, h, kind, cluster_tol)?;
    run(&tm, x0, n)
}

/// Iterates `tm` for `n` steps and materializes the trajectory.
pub fn run(tm: &TransferMatrix, x0: Vec3, n: usize) -> Result<Trajectory> {
    if !x0.is_finite() {
        return Err(Error::InvalidInput(
            "initial state has non-finite entries".into(),
        ));
    }
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    for (k, x) in tm.states(x0, n) {
        if !x.is_finite() {
            return Err(Error::Overflow(format!(
                "state became non-finite at step {k}"
            )));
        }
        times.push(k as f64 * tm.h);
        states.push(x);
    }
    Ok(Trajectory { times, states })
}

/// State at time `t` reached in a single exact step of size `h = t`.
pub fn one_shot(a: &Matrix3, x0: Vec3, t: f64, kind: SchemeKind) -> Result<Vec3> {
    one_shot_with(a, x0, t, kind, DEFAULT_CLUSTER_TOL)
}

pub fn one_shot_with(
    a: &Matrix3,
    x0: Vec3,
    t: f64,
    kind: SchemeKind,
    cluster_tol: f64,
) -> Result<Vec3> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "one-shot time must be positive, got {t}"
        )));
    }
    let tm = exact_transfer(a, t, kind, cluster_tol)?;
    let x = tm.step(&x0);
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow("one-shot state is non-finite".into()))
    }
}

/// `T / N`, rejecting degenerate grids.
pub fn grid_step(t_end: f64, n: usize) -> Result<f64> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "final time must be positive, got {t_end}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "number of steps must be at least 1".into(),
        ));
    }
    Ok(t_end / n as f64)
}
