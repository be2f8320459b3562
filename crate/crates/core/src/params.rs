//! Parameter triples `(ψ, φ, θ)` that make the implicit scheme
//!
//! ```text
//! (x_{k+1} − ψ·x_k) / φ = A·[θ·x_{k+1} + (1 − θ)·x_k]
//! ```
//!
//! and the explicit scheme
//!
//! ```text
//! (x_{k+1} − ψ·x_k) / φ = A·x_k + θ·φ·A²·x_k
//! ```
//!
//! exact for `x' = Ax`. `ψ` is the numerator function (`1 + O(h²)`), `φ` the
//! denominator function (`h + O(h²)`) and `θ` the weight. Every triple
//! depends only on the step `h` and the eigenvalues of `A`.
//!
//! The closed forms are evaluated through `expm1` and
//! `(e^x − 1 − x)/x²` so that differences of exponentials do not cancel at
//! small `h`. Each closed form checks its own condition-system residual; the
//! [`params_for`] dispatcher retries through a linear solve when a closed
//! form is singular.

use crate::error::{Error, Result};
use crate::linalg3::{expm_complex, solve3, CMatrix3, CVec3, Complex};
use crate::spectrum::SpectrumClass;

/// Eigenvalues with `|λ| ≤ ZERO_TOL · max(1, scale)` take the zero branch.
pub const ZERO_TOL: f64 = 1e-10;

/// Relative condition residual above which a triple is rejected.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Denominators below this magnitude are treated as zero.
const DENOM_FLOOR: f64 = 1e-300;

/// Which of the two scheme families a triple belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SchemeKind {
    Implicit,
    Explicit,
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemeKind::Implicit => "implicit",
            SchemeKind::Explicit => "explicit",
        })
    }
}

/// How a triple was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ParamRoute {
    /// Closed-form expression for the spectral case.
    ClosedForm,
    /// Direct solve of the condition system at distinct eigenvalues.
    Fallback,
    /// Hermite interpolation through divided differences; valid for any
    /// eigenvalue multiplicity.
    Confluent,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SchemeParams {
    /// Weight of `x_k` in the numerator.
    pub psi: f64,
    /// Denominator function; replaces `h`.
    pub phi: f64,
    /// Implicit: weight of `x_{k+1}` on the right-hand side.
    /// Explicit: coefficient of the `φ·A²` correction.
    pub theta: f64,
    /// Step the triple was built for.
    pub h: f64,
    pub kind: SchemeKind,
    pub route: ParamRoute,
}

impl SchemeParams {
    fn new(
        psi: f64,
        phi: f64,
        theta: f64,
        h: f64,
        kind: SchemeKind,
        route: ParamRoute,
    ) -> Result<Self> {
        if !(psi.is_finite() && phi.is_finite() && theta.is_finite()) {
            return Err(Error::ParamSingularity(format!(
                "non-finite triple psi={psi:e} phi={phi:e} theta={theta:e} at h={h:e}"
            )));
        }
        Ok(SchemeParams {
            psi,
            phi,
            theta,
            h,
            kind,
            route,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.psi.is_finite() && self.phi.is_finite() && self.theta.is_finite() && self.h.is_finite()
    }
}

// ---------------------------------------------------------------------------
// numerics helpers

/// `(e^x − 1 − x) / x²`, accurate for small `|x|`.
pub fn exprel2(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // Σ x^k / (k+2)!
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..30 {
            term *= x / (k + 2) as f64;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// `e^{a h} − e^{b h}` through `expm1` of the exponent difference.
#[inline]
fn exp_diff(a: f64, b: f64, h: f64) -> f64 {
    (b * h).exp() * ((a - b) * h).exp_m1()
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "step must be positive and finite, got {h}"
        )))
    }
}

fn guard(den: f64, what: &str) -> Result<f64> {
    if den.abs() < DENOM_FLOOR || !den.is_finite() {
        Err(Error::ParamSingularity(format!(
            "{what} vanishes ({den:e})"
        )))
    } else {
        Ok(den)
    }
}

fn is_zero(l: f64, scale: f64) -> bool {
    l.abs() <= ZERO_TOL * scale.max(1.0)
}

fn accept(p: SchemeParams, class: &SpectrumClass) -> Result<SchemeParams> {
    let r = max_residual(&p, class);
    if r <= RESIDUAL_TOL {
        Ok(p)
    } else {
        Err(Error::ParamSingularity(format!(
            "{} triple violates its conditions (relative residual {r:e})",
            class.name()
        )))
    }
}

// ---------------------------------------------------------------------------
// condition residuals

/// Relative residual of each exactness condition for `class`.
///
/// Implicit conditions at an eigenvalue `z` of derivative order 0, 1, 2:
///
/// ```text
/// ψ + φz(1−θ)          = e^{zh}(1 − φθz)
/// φ(1 − θ + ψθ)        = h·e^{zh}(1 − φθz)²
/// φ²θ(1 − θ + ψθ)      = (h²/2)·e^{zh}(1 − φθz)³
/// ```
///
/// Explicit:
///
/// ```text
/// ψ + φz + θφ²z²       = e^{zh}
/// φ + 2θφ²z            = h·e^{zh}
/// θφ²                  = (h²/2)·e^{zh}
/// ```
///
/// Each residual is divided by the sum of the magnitudes of its terms.
pub fn condition_residuals(p: &SchemeParams, class: &SpectrumClass) -> [f64; 3] {
    class
        .conditions()
        .map(|(z, order)| condition_residual(p, z, order))
}

pub fn max_residual(p: &SchemeParams, class: &SpectrumClass) -> f64 {
    condition_residuals(p, class).into_iter().fold(0.0, |m, r| {
        if r.is_nan() {
            f64::NAN
        } else {
            m.max(r)
        }
    })
}

/// Relative residual of a single condition.
pub fn condition_residual(p: &SchemeParams, z: Complex, order: usize) -> f64 {
    let (psi, phi, theta, h) = (p.psi, p.phi, p.theta, p.h);
    let e = (z * h).exp();
    let (diff, scale) = match p.kind {
        SchemeKind::Implicit => {
            let d = Complex::ONE - z * (phi * theta);
            let dn = 1.0 + (z * (phi * theta)).abs();
            let c = 1.0 - theta + psi * theta;
            let cs = (1.0 - theta).abs() + (psi * theta).abs();
            match order {
                0 => {
                    let lhs = z * (phi * (1.0 - theta)) + psi;
                    let rhs = e * d;
                    (
                        lhs - rhs,
                        psi.abs() + (z * (phi * (1.0 - theta))).abs() + e.abs() * dn,
                    )
                }
                1 => {
                    let rhs = e * d * d * h;
                    (
                        Complex::real(phi * c) - rhs,
                        phi.abs() * cs + h * e.abs() * dn * dn,
                    )
                }
                _ => {
                    let rhs = e * d * d * d * (0.5 * h * h);
                    (
                        Complex::real(phi * phi * theta * c) - rhs,
                        phi * phi * theta.abs() * cs + 0.5 * h * h * e.abs() * dn * dn * dn,
                    )
                }
            }
        }
        SchemeKind::Explicit => {
            let u3 = theta * phi * phi;
            match order {
                0 => {
                    let lhs = z * phi + z * z * u3 + psi;
                    (
                        lhs - e,
                        psi.abs() + (z * phi).abs() + (z * z * u3).abs() + e.abs(),
                    )
                }
                1 => {
                    let lhs = z * (2.0 * u3) + phi;
                    (
                        lhs - e * h,
                        phi.abs() + (z * (2.0 * u3)).abs() + h * e.abs(),
                    )
                }
                _ => (
                    Complex::real(u3) - e * (0.5 * h * h),
                    u3.abs() + 0.5 * h * h * e.abs(),
                ),
            }
        }
    };
    if scale == 0.0 {
        diff.abs()
    } else {
        diff.abs() / scale
    }
}

// ---------------------------------------------------------------------------
// implicit closed forms

/// Implicit triple for three distinct nonzero real eigenvalues.
///
/// `θ = T1/T2` with
/// `T1 = Σ λ1(e^{λ2h} − e^{λ3h})` and `T2 = Σ λ1(1 − e^{λ1h})(e^{λ2h} − e^{λ3h})`
/// (cyclic sums), then `φ = (e^{λ1h} − e^{λ2h}) / (λ1 − λ2 + θ·C1)` with
/// `C1 = λ1(e^{λ1h} − 1) − λ2(e^{λ2h} − 1)`, and `ψ` from the third
/// eigenvalue's condition.
pub fn ieds_distinct(l: [f64; 3], h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let [l1, l2, l3] = l;
    if l1 == l2 || l2 == l3 || l1 == l3 {
        return Err(Error::ParamSingularity(
            "eigenvalues are not distinct".into(),
        ));
    }
    if l.contains(&0.0) {
        return Err(Error::ParamSingularity(
            "zero eigenvalue in the distinct case".into(),
        ));
    }
    let [m1, m2, m3] = l.map(|v| (v * h).exp_m1());
    let d12 = exp_diff(l1, l2, h);
    let d23 = exp_diff(l2, l3, h);
    let d31 = exp_diff(l3, l1, h);

    let t1 = l1 * d23 + l2 * d31 + l3 * d12;
    let t2 = -(l1 * m1 * d23 + l2 * m2 * d31 + l3 * m3 * d12);
    let theta = t1 / guard(t2, "T2")?;
    let c1 = l1 * m1 - l2 * m2;
    let phi = d12 / guard(l1 - l2 + theta * c1, "phi denominator")?;
    let psi = 1.0 + m3 - phi * l3 * (1.0 + theta * m3);
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &SpectrumClass::DistinctReal(l))
}

/// Implicit triple for the spectrum `{0, a, b}` with `a ≠ b` both nonzero.
///
/// ```text
/// ψ = 1
/// φ = (a − b)(e^{ah} − 1)(e^{bh} − 1) / (a·b·(e^{ah} − e^{bh}))
/// θ = (b(e^{ah} − 1) − a(e^{bh} − 1)) / ((a − b)(e^{ah} − 1)(e^{bh} − 1))
/// ```
pub fn ieds_with_zero(nonzero: [f64; 2], h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let [a, b] = nonzero;
    if a == b || a == 0.0 || b == 0.0 {
        return Err(Error::ParamSingularity(
            "zero case needs two distinct nonzero eigenvalues".into(),
        ));
    }
    let ma = (a * h).exp_m1();
    let mb = (b * h).exp_m1();
    let dab = exp_diff(a, b, h);
    let phi = (a - b) * ma * mb / guard(a * b * dab, "phi denominator")?;
    // b(e^{ah} − 1) − a(e^{bh} − 1) = ab·h²·(a·R(ah) − b·R(bh)), R = exprel2
    let num = a * b * h * h * (a * exprel2(a * h) - b * exprel2(b * h));
    let theta = num / guard((a - b) * ma * mb, "theta denominator")?;
    let p = SchemeParams::new(
        1.0,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &SpectrumClass::DistinctRealWithZero(nonzero))
}

/// Implicit triple for the spectrum `{α + iβ, α − iβ, λ}`, in real arithmetic.
pub fn ieds_complex(alpha: f64, beta: f64, lambda: f64, h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    if beta == 0.0 {
        return Err(Error::ParamSingularity("imaginary part is zero".into()));
    }
    let ea = (alpha * h).exp();
    let (sb, cb) = (beta * h).sin_cos();
    let half = (0.5 * beta * h).sin();
    let s = ea * sb; // e^{αh} sin βh
    let cm1 = (alpha * h).exp_m1() * cb - 2.0 * half * half; // e^{αh} cos βh − 1
    let ml = (lambda * h).exp_m1(); // e^{λh} − 1
    let c_minus_el = cm1 - ml; // e^{αh} cos βh − e^{λh}

    let t1 = 2.0 * beta * c_minus_el + 2.0 * s * (lambda - alpha);
    let t2 = alpha * cm1 * 2.0 * s
        - alpha * s * 2.0 * c_minus_el
        - beta * cm1 * 2.0 * c_minus_el
        - 2.0 * beta * s * s
        - 2.0 * lambda * ml * s;
    let t3 = 2.0 * alpha * s + 2.0 * beta * cm1;
    let theta = t1 / guard(t2, "T2")?;
    let phi = 2.0 * s / guard(2.0 * beta + t3 * theta, "phi denominator")?;
    let psi = 1.0 + ml - phi * lambda * (1.0 + theta * ml);
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::ClosedForm,
    )?;
    accept(
        p,
        &SpectrumClass::ComplexPairPlusReal {
            alpha,
            beta: beta.abs(),
            lambda,
        },
    )
}

/// Implicit triple for `{λ1, λ1, λ2}`.
///
/// With `T = φθ` the conditions reduce to a quadratic in `T`; the root with
/// `λ1·T → 0` as `h → 0` is the one compatible with a nonsingular step, and
/// it simplifies to
///
/// ```text
/// T = (h·e^{λ1h} − Δ/D) / (λ1·(h·e^{λ1h} − Δ/D) + Δ),   Δ = e^{λ1h} − e^{λ2h}, D = λ1 − λ2
/// ```
///
/// after which `ψ − 1 = (λ1(e^{λ2h}−1) − λ2(e^{λ1h}−1) + λ1λ2ΔT)/D`,
/// `φ = (Δ + (λ2(e^{λ2h}−1) − λ1(e^{λ1h}−1))T)/D` and `θ = T/φ`.
/// For `λ1 = 0` the triple is `(1, h, (e^{λ2h} − λ2h − 1)/(λ2h(e^{λ2h} − 1)))`.
pub fn ieds_double(repeated: f64, simple: f64, h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let (l1, l2) = (repeated, simple);
    let class = SpectrumClass::DoubleReal {
        repeated: l1,
        simple: l2,
    };
    if l1 == l2 {
        return Err(Error::ParamSingularity("double case needs λ1 ≠ λ2".into()));
    }
    let m2 = (l2 * h).exp_m1();
    if is_zero(l1, l1.abs().max(l2.abs())) {
        let x = l2 * h;
        let theta = x * exprel2(x) / guard(m2, "e^{λ2h} − 1")?;
        let p = SchemeParams::new(
            1.0,
            h,
            theta,
            h,
            SchemeKind::Implicit,
            ParamRoute::ClosedForm,
        )?;
        return accept(p, &class);
    }
    let t = double_root_t1(l1, l2, h)?;
    let d = l1 - l2;
    let m1 = (l1 * h).exp_m1();
    let delta = exp_diff(l1, l2, h);
    // λ1(e^{λ2h} − 1) − λ2(e^{λ1h} − 1) = λ1λ2h²(λ2·R(λ2h) − λ1·R(λ1h))
    let lin = l1 * l2 * h * h * (l2 * exprel2(l2 * h) - l1 * exprel2(l1 * h));
    let psi = 1.0 + (lin + l1 * l2 * delta * t) / d;
    let phi = (delta + (l2 * m2 - l1 * m1) * t) / d;
    let theta = t / guard(phi, "phi")?;
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &class)
}

/// The admissible root `T1 = φθ` of the double-eigenvalue quadratic.
pub fn double_root_t1(l1: f64, l2: f64, h: f64) -> Result<f64> {
    let d = l1 - l2;
    let e1 = (l1 * h).exp();
    let delta = exp_diff(l1, l2, h);
    // h·e^{λ1h} − Δ/D = D·h²·e^{λ1h}·R(−Dh)
    let g = d * h * h * e1 * exprel2(-d * h);
    Ok(g / guard(l1 * g + delta, "T1 denominator")?)
}

/// The other root `T2` of the double-eigenvalue quadratic, straight from the
/// quadratic formula. It satisfies `λ1·T2 → 1` as `h → 0` and is never used
/// to build a scheme.
pub fn double_root_t2(l1: f64, l2: f64, h: f64) -> f64 {
    let e1 = (l1 * h).exp();
    let e2 = (l2 * h).exp();
    let d = l1 - l2;
    let a = h * e1 * l1 * l1 - l1 * l2 * (e1 - e2) / d;
    let b = 2.0 * h * e1 * l1 + (l1 + l2) * (e2 - e1) / d;
    (b + (e1 - e2)) / (2.0 * a)
}

/// Implicit triple for `{λ, λ, λ}`:
/// `ψ = e^{λh}(2 − λh)/(λh + 2)`, `φ = h(e^{λh} + 1)/(λh + 2)`,
/// `θ = 1/(e^{λh} + 1)`; `(1, h, 1/2)` for `λ = 0`.
pub fn ieds_triple(lambda: f64, h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let class = SpectrumClass::TripleReal(lambda);
    if is_zero(lambda, lambda.abs()) {
        let p = SchemeParams::new(1.0, h, 0.5, h, SchemeKind::Implicit, ParamRoute::ClosedForm)?;
        return accept(p, &class);
    }
    let x = lambda * h;
    if (x + 2.0).abs() < 1e-12 {
        return Err(Error::ParamSingularity(format!(
            "step h = {h} sits on the pole h = -2/λ"
        )));
    }
    let e = x.exp();
    let psi = e * (2.0 - x) / (x + 2.0);
    let phi = h * (e + 1.0) / (x + 2.0);
    let theta = 1.0 / (e + 1.0);
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &class)
}

// ---------------------------------------------------------------------------
// explicit closed forms

/// Explicit triple for three distinct real eigenvalues.
///
/// The eigenvalues are relabelled so that `λ2`, `λ3` and `λ1 + λ2` stay as
/// far from zero as possible; when every labelling has one of them below
/// `1e-8·scale` the Vandermonde solve [`eeds_fallback`] is used instead.
pub fn eeds_distinct(l: [f64; 3], h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let [x, y, z] = l;
    if x == y || y == z || x == z {
        return Err(Error::ParamSingularity(
            "eigenvalues are not distinct".into(),
        ));
    }
    let scale = l.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let perms = [
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 0, 1],
        [1, 2, 0],
        [2, 1, 0],
    ];
    let score = |p: &[usize; 3]| {
        let (a, b, c) = (l[p[0]], l[p[1]], l[p[2]]);
        (a + b).abs().min(b.abs()).min(c.abs())
    };
    let best = perms
        .iter()
        .copied()
        .max_by(|p, q| score(p).total_cmp(&score(q)))
        .unwrap();
    if score(&best) <= 1e-8 * scale {
        return eeds_fallback(l.map(Complex::real), h);
    }
    let (a, b, c) = (l[best[0]], l[best[1]], l[best[2]]);
    let (ma, mb, mc) = ((a * h).exp_m1(), (b * h).exp_m1(), (c * h).exp_m1());
    let (a2, b2, c2) = (a * a, b * b, c * c);

    // The constant parts of e^{λh} cancel exactly between the two products,
    // so the numerator is written with e^{λh} − 1.
    let num = (c2 - b2) * (b2 * ma - a2 * mb) - (b2 - a2) * (c2 * mb - b2 * mc);
    let den = b2 * (b - a) * (c - b) * (a - c);
    let phi = num / guard(den, "phi denominator")?;
    let psi_m1 = (b2 * ma - a2 * mb - a * b * (b - a) * phi) / guard(b2 - a2, "λ2² − λ1²")?;
    let theta = (mc - psi_m1 - c * phi) / guard(c2 * phi * phi, "λ3²φ²")?;
    let p = SchemeParams::new(
        1.0 + psi_m1,
        phi,
        theta,
        h,
        SchemeKind::Explicit,
        ParamRoute::ClosedForm,
    )?;
    let class = SpectrumClass::DistinctReal(l);
    match accept(p, &class) {
        Ok(p) => Ok(p),
        Err(_) => eeds_fallback(l.map(Complex::real), h),
    }
}

/// Explicit triple for `{λ1, λ1, λ2}`.
///
/// ```text
/// φ = ((λ2² − λ1²)h·e^{λ1h} + 2λ1(e^{λ1h} − e^{λ2h})) / (λ1 − λ2)²
/// ψ = ((2 − λ1h)e^{λ1h} − λ1φ) / 2
/// θ = (h·e^{λ1h} − φ) / (2λ1φ²)
/// ```
///
/// evaluated as `φ = h·e^{λ1h}(1 − 2λ1h·R(−Dh))`, `θ = h²e^{λ1h}R(−Dh)/φ²`
/// with `D = λ1 − λ2` and `R = exprel2`. For `λ1 = 0`:
/// `(1, h, (e^{λ2h} − λ2h − 1)/(λ2h)²)`.
pub fn eeds_double(repeated: f64, simple: f64, h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let (l1, l2) = (repeated, simple);
    let class = SpectrumClass::DoubleReal {
        repeated: l1,
        simple: l2,
    };
    if l1 == l2 {
        return Err(Error::ParamSingularity("double case needs λ1 ≠ λ2".into()));
    }
    if is_zero(l1, l1.abs().max(l2.abs())) {
        let p = SchemeParams::new(
            1.0,
            h,
            exprel2(l2 * h),
            h,
            SchemeKind::Explicit,
            ParamRoute::ClosedForm,
        )?;
        return accept(p, &class);
    }
    let e1 = (l1 * h).exp();
    let r = exprel2(-(l1 - l2) * h);
    let phi = h * e1 * (1.0 - 2.0 * l1 * h * r);
    let theta = h * h * e1 * r / guard(phi * phi, "phi")?;
    let psi = ((2.0 - l1 * h) * e1 - l1 * phi) / 2.0;
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Explicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &class)
}

/// Explicit triple for `{λ, λ, λ}`:
/// `φ = (h − λh²)e^{λh}`, `θ = h²e^{λh}/(2φ²)`, `ψ = e^{λh} − λφ − θφ²λ²`.
pub fn eeds_triple(lambda: f64, h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    let class = SpectrumClass::TripleReal(lambda);
    if is_zero(lambda, lambda.abs()) {
        let p = SchemeParams::new(1.0, h, 0.5, h, SchemeKind::Explicit, ParamRoute::ClosedForm)?;
        return accept(p, &class);
    }
    if (1.0 - lambda * h).abs() < 1e-12 {
        return Err(Error::ParamSingularity(format!(
            "φ vanishes at λh = 1 (λ = {lambda}, h = {h})"
        )));
    }
    let e = (lambda * h).exp();
    let phi = (h - lambda * h * h) * e;
    let theta = h * h * e / (2.0 * phi * phi);
    let psi = e - lambda * phi - theta * phi * phi * lambda * lambda;
    let p = SchemeParams::new(
        psi,
        phi,
        theta,
        h,
        SchemeKind::Explicit,
        ParamRoute::ClosedForm,
    )?;
    accept(p, &class)
}

// ---------------------------------------------------------------------------
// linear-solve routes

fn distinct_nodes(nodes: &[Complex; 3]) -> Result<()> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if nodes[i] == nodes[j] {
                return Err(Error::ParamSingularity(
                    "linear-solve route needs pairwise distinct eigenvalues".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Real part of a solution that should be real by conjugate symmetry.
fn realify(u: &CVec3) -> Result<[f64; 3]> {
    let scale = u.norm_inf().max(1e-300);
    if (0..3).any(|i| u[i].im.abs() > 1e-10 * scale.max(1.0)) {
        return Err(Error::ParamSingularity(format!(
            "solution is not real (imaginary parts {:e}, {:e}, {:e})",
            u[0].im, u[1].im, u[2].im
        )));
    }
    Ok([u[0].re, u[1].re, u[2].re])
}

fn class_of_nodes(nodes: &[Complex; 3]) -> SpectrumClass {
    // only used for the residual check of the linear-solve routes
    if let Some(k) = nodes.iter().position(|z| z.im != 0.0) {
        let r = (0..3).find(|&i| nodes[i].im == 0.0).unwrap_or(k);
        SpectrumClass::ComplexPairPlusReal {
            alpha: nodes[k].re,
            beta: nodes[k].im.abs(),
            lambda: nodes[r].re,
        }
    } else {
        SpectrumClass::DistinctReal(nodes.map(|z| z.re))
    }
}

/// Implicit triple from the condition system itself.
///
/// Each condition is rewritten as
/// `(ψ − 1) + λ·u2 + λ(e^{λh} − 1)·u3 = e^{λh} − 1` with `(u2, u3) = (φ, φθ)`;
/// the 3×3 system is solved (in complex arithmetic when needed) and
/// `θ = u3/u2`.
pub fn ieds_fallback(nodes: [Complex; 3], h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    distinct_nodes(&nodes)?;
    let m = nodes.map(|z| (z * h).exp_m1());
    let rows = [0, 1, 2].map(|i| [Complex::ONE, nodes[i], nodes[i] * m[i]]);
    let u = solve3(&CMatrix3::from_rows(rows), &crate::linalg3::Vector3(m))
        .map_err(|e| Error::ParamSingularity(format!("condition system: {e}")))?;
    let [psi_m1, phi, t] = realify(&u)?;
    let theta = t / guard(phi, "phi")?;
    let p = SchemeParams::new(
        1.0 + psi_m1,
        phi,
        theta,
        h,
        SchemeKind::Implicit,
        ParamRoute::Fallback,
    )?;
    accept(p, &class_of_nodes(&nodes))
}

/// Explicit triple from the Vandermonde system
/// `(ψ − 1) + λ·φ + λ²·(θφ²) = e^{λh} − 1`, then `θ = u3/φ²`.
///
/// This is also the only route for a complex-conjugate pair, for which no
/// closed form is available.
pub fn eeds_fallback(nodes: [Complex; 3], h: f64) -> Result<SchemeParams> {
    check_step(h)?;
    distinct_nodes(&nodes)?;
    let m = nodes.map(|z| (z * h).exp_m1());
    let rows = [0, 1, 2].map(|i| [Complex::ONE, nodes[i], nodes[i] * nodes[i]]);
    let u = solve3(&CMatrix3::from_rows(rows), &crate::linalg3::Vector3(m))
        .map_err(|e| Error::ParamSingularity(format!("Vandermonde system: {e}")))?;
    let [psi_m1, phi, u3] = realify(&u)?;
    let theta = u3 / guard(phi * phi, "phi²")?;
    let p = SchemeParams::new(
        1.0 + psi_m1,
        phi,
        theta,
        h,
        SchemeKind::Explicit,
        ParamRoute::Fallback,
    )?;
    accept(p, &class_of_nodes(&nodes))
}

/// Triple from Hermite interpolation at arbitrary (possibly coincident or
/// nearly coincident) nodes.
///
/// The exactness conditions say that `1, z, b(z)` combine to interpolate
/// `e^{zh}` at the eigenvalues with multiplicity, where `b(z) = z(e^{zh} − 1)`
/// (implicit) or `z²` (explicit). Newton divided differences of every
/// function are read off the first row of `f(Z)` for the bidiagonal matrix
/// `Z` with the nodes on its diagonal and ones above it, so no difference
/// quotient is ever formed explicitly.
pub fn confluent_params(nodes: [Complex; 3], h: f64, kind: SchemeKind) -> Result<SchemeParams> {
    check_step(h)?;
    let mut z = CMatrix3::zeros();
    for i in 0..3 {
        z[(i, i)] = nodes[i];
    }
    z[(0, 1)] = Complex::ONE;
    z[(1, 2)] = Complex::ONE;
    let mut em = expm_complex(&z, h)?;
    for i in 0..3 {
        em[(i, i)] = (nodes[i] * h).exp_m1();
    }
    // divided differences of e^{zh} − 1: first row of exp(hZ) − I
    let rhs = crate::linalg3::Vector3([em[(0, 0)], em[(0, 1)], em[(0, 2)]]);
    let third: [Complex; 3] = match kind {
        // first row of Z·(exp(hZ) − I) = z1·row0 + row1
        SchemeKind::Implicit => [0, 1, 2].map(|j| nodes[0] * em[(0, j)] + em[(1, j)]),
        // first row of Z²
        SchemeKind::Explicit => [nodes[0] * nodes[0], nodes[0] + nodes[1], Complex::ONE],
    };
    let rows = [
        [Complex::ONE, nodes[0], third[0]],
        [Complex::ZERO, Complex::ONE, third[1]],
        [Complex::ZERO, Complex::ZERO, third[2]],
    ];
    let u = solve3(&CMatrix3::from_rows(rows), &rhs)
        .map_err(|e| Error::ParamSingularity(format!("Hermite system: {e}")))?;
    let [psi_m1, phi, u3] = realify(&u)?;
    let theta = match kind {
        SchemeKind::Implicit => u3 / guard(phi, "phi")?,
        SchemeKind::Explicit => u3 / guard(phi * phi, "phi²")?,
    };
    SchemeParams::new(1.0 + psi_m1, phi, theta, h, kind, ParamRoute::Confluent)
}

// ---------------------------------------------------------------------------
// dispatch

/// Closed-form triple for `class`, without any retry.
pub fn closed_form(class: &SpectrumClass, h: f64, kind: SchemeKind) -> Result<SchemeParams> {
    match (kind, *class) {
        (SchemeKind::Implicit, SpectrumClass::DistinctReal(l)) => ieds_distinct(l, h),
        (SchemeKind::Implicit, SpectrumClass::DistinctRealWithZero(l)) => ieds_with_zero(l, h),
        (
            SchemeKind::Implicit,
            SpectrumClass::ComplexPairPlusReal {
                alpha,
                beta,
                lambda,
            },
        ) => ieds_complex(alpha, beta, lambda, h),
        (SchemeKind::Implicit, SpectrumClass::DoubleReal { repeated, simple }) => {
            ieds_double(repeated, simple, h)
        }
        (SchemeKind::Implicit, SpectrumClass::TripleReal(l)) => ieds_triple(l, h),
        (SchemeKind::Explicit, SpectrumClass::DistinctReal(l)) => eeds_distinct(l, h),
        (SchemeKind::Explicit, SpectrumClass::DistinctRealWithZero([a, b])) => {
            eeds_distinct([0.0, a, b], h)
        }
        (SchemeKind::Explicit, c @ SpectrumClass::ComplexPairPlusReal { .. }) => {
            eeds_fallback(c.eigenvalues(), h)
        }
        (SchemeKind::Explicit, SpectrumClass::DoubleReal { repeated, simple }) => {
            eeds_double(repeated, simple, h)
        }
        (SchemeKind::Explicit, SpectrumClass::TripleReal(l)) => eeds_triple(l, h),
    }
}

/// Exact-scheme triple for a classified spectrum.
///
/// Tries the closed form; on [`Error::ParamSingularity`] retries once through
/// the linear solve (distinct eigenvalues) or Hermite interpolation
/// (repeated eigenvalues) and surfaces the error only if that fails too.
pub fn params_for(class: &SpectrumClass, h: f64, kind: SchemeKind) -> Result<SchemeParams> {
    match closed_form(class, h, kind) {
        Err(Error::ParamSingularity(first)) => {
            let retry = match class {
                SpectrumClass::DoubleReal { .. } | SpectrumClass::TripleReal(_) => {
                    confluent_params(class.eigenvalues(), h, kind).and_then(|p| accept(p, class))
                }
                _ => match kind {
                    SchemeKind::Implicit => ieds_fallback(class.eigenvalues(), h),
                    SchemeKind::Explicit => eeds_fallback(class.eigenvalues(), h),
                },
            };
            retry.map_err(|e| Error::ParamSingularity(format!("{first}; retry failed: {e}")))
        }
        other => other,
    }
}
