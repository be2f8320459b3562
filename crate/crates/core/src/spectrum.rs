//! Eigenvalues of a real 3×3 matrix and their classification into the five
//! cases that select a parameter formula.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::linalg3::{Complex, Matrix3};

/// Default relative clustering tolerance for [`classify`].
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// Coefficients `(c2, c1, c0)` of `det(tI − A) = t³ + c2·t² + c1·t + c0`.
pub fn char_poly(a: &Matrix3) -> (f64, f64, f64) {
    let m = &a.0;
    let c2 = -a.trace();
    let c1 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let c0 = -a.det();
    (c2, c1, c0)
}

/// The three eigenvalues of a real matrix, complex ones in a conjugate pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: [Complex; 3],
}

impl Spectrum {
    pub fn new(eigenvalues: [Complex; 3]) -> Self {
        Spectrum { eigenvalues }
    }

    pub fn from_real(l: [f64; 3]) -> Self {
        Spectrum::new(l.map(Complex::real))
    }

    /// `max(1, max |λ|)`.
    pub fn scale(&self) -> f64 {
        self.eigenvalues.iter().fold(1.0, |m, z| m.max(z.abs()))
    }

    pub fn sum(&self) -> Complex {
        self.eigenvalues[0] + self.eigenvalues[1] + self.eigenvalues[2]
    }

    pub fn product(&self) -> Complex {
        self.eigenvalues[0] * self.eigenvalues[1] * self.eigenvalues[2]
    }

    pub fn is_real(&self) -> bool {
        self.eigenvalues.iter().all(|z| z.im == 0.0)
    }
}

/// Roots of `t³ + c2·t² + c1·t + c0`.
///
/// Cardano's formula when the discriminant is positive (one real root and a
/// conjugate pair), the trigonometric form otherwise. Each root gets one
/// guarded Newton step on the undepressed cubic.
pub fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [Complex; 3] {
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    let poly = |t: Complex| ((t + c2) * t + c1) * t + c0;
    let dpoly = |t: Complex| (t * 3.0 + 2.0 * c2) * t + c1;

    if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-half_q - sq.copysign(half_q)).cbrt();
        let v = if u != 0.0 { -third_p / u } else { 0.0 };
        let real = polish(Complex::real(u + v - shift), &poly, &dpoly);
        let pair = Complex::new(-0.5 * (u + v) - shift, 0.5 * 3f64.sqrt() * (u - v).abs());
        let pair = polish(pair, &poly, &dpoly);
        let pair = Complex::new(pair.re, pair.im.abs());
        let roots = if pair.im == 0.0 {
            // polishing collapsed the pair onto the real axis
            [real, pair, pair]
        } else {
            [real, pair, pair.conj()]
        };
        recenter(roots, c2)
    } else if p == 0.0 {
        [Complex::real(-shift); 3]
    } else {
        let r = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let roots = [0.0, 1.0, 2.0].map(|k| {
            let s = r * (phi - 2.0 * PI * k / 3.0).cos();
            let t = polish(Complex::real(s - shift), &poly, &dpoly);
            Complex::real(t.re)
        });
        recenter(roots, c2)
    }
}

/// Shifts the roots so that they sum to `−c2` exactly. Newton steps near a
/// multiple root move each root independently by up to `ε^{1/3}`; the shift
/// restores the cluster mean without touching well-separated roots beyond
/// rounding.
fn recenter(mut roots: [Complex; 3], c2: f64) -> [Complex; 3] {
    let sum: f64 = roots.iter().map(|z| z.re).sum();
    let scale = roots.iter().map(|z| z.abs()).fold(1.0, f64::max);
    let gap = |i: usize| {
        (0..3)
            .filter(|&j| j != i)
            .map(|j| (roots[i] - roots[j]).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let isolated = (0..3)
        .max_by(|&i, &j| gap(i).total_cmp(&gap(j)))
        .expect("three roots");
    // a well-separated root is already accurate; the trace fixes the cluster
    if gap(isolated) > 1e-4 * scale && gap((isolated + 1) % 3) < 1e-2 * scale {
        let delta = (-c2 - sum) / 2.0;
        for (i, z) in roots.iter_mut().enumerate() {
            if i != isolated {
                z.re += delta;
            }
        }
    } else {
        let delta = (-c2 - sum) / 3.0;
        for z in &mut roots {
            z.re += delta;
        }
    }
    roots
}

fn polish(
    mut t: Complex,
    f: &impl Fn(Complex) -> Complex,
    df: &impl Fn(Complex) -> Complex,
) -> Complex {
    for _ in 0..3 {
        let ft = f(t);
        let d = df(t);
        if d.abs() == 0.0 || ft.abs() == 0.0 {
            break;
        }
        let next = t - ft / d;
        if next.is_finite() && f(next).abs() < ft.abs() {
            t = next;
        } else {
            break;
        }
    }
    t
}

pub fn eigenvalues3(a: &Matrix3) -> Spectrum {
    let (c2, c1, c0) = char_poly(a);
    let roots = cubic_roots(c2, c1, c0);
    Spectrum::new(snap_multiple(roots, (c2, c1, c0), coefficient_errors(a)))
}

/// Multiple of the rounding bound within which a root counts as multiple.
const SNAP_FACTOR: f64 = 4.0;

/// Rounding bounds on the characteristic coefficients, from `|A|`.
fn coefficient_errors(a: &Matrix3) -> (f64, f64, f64) {
    let b = a.0.map(|r| r.map(f64::abs));
    let e2 = b[0][0] + b[1][1] + b[2][2];
    let e1 = b[0][0] * b[1][1]
        + b[0][1] * b[1][0]
        + b[0][0] * b[2][2]
        + b[0][2] * b[2][0]
        + b[1][1] * b[2][2]
        + b[1][2] * b[2][1];
    let e0 = b[0][0] * (b[1][1] * b[2][2] + b[1][2] * b[2][1])
        + b[0][1] * (b[1][0] * b[2][2] + b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] + b[1][1] * b[2][0]);
    (
        2.0 * f64::EPSILON * e2,
        4.0 * f64::EPSILON * e1,
        8.0 * f64::EPSILON * e0,
    )
}

/// Merges roots that coincide to within what the coefficients can resolve.
///
/// A multiple root of the characteristic cubic comes out split by up to
/// `ε^{1/2}` (double) or `ε^{1/3}` (triple). If the depressed cubic
/// `s³ + p·s + q` is within rounding of `(s − r)²(s + 2r)` (or of `s³`), the
/// roots are replaced by the exact multiple ones.
fn snap_multiple(
    roots: [Complex; 3],
    (c2, c1, c0): (f64, f64, f64),
    (e2, e1, e0): (f64, f64, f64),
) -> [Complex; 3] {
    let eps = f64::EPSILON;
    let shift = -c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let ep = e1 + 2.0 * c2.abs() * e2 / 3.0 + eps * (c1.abs() + c2 * c2 / 3.0);
    let eq = e0
        + c2.abs() * e1 / 3.0
        + (c1.abs() / 3.0 + 2.0 * c2 * c2 / 9.0) * e2
        + eps * (2.0 * (c2 * c2 * c2).abs() / 27.0 + (c2 * c1).abs() / 3.0 + c0.abs());
    let (ep, eq) = (SNAP_FACTOR * ep, SNAP_FACTOR * eq);
    if p.abs() <= ep && q.abs() <= eq {
        return [Complex::real(shift); 3];
    }
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .min_by(|&(a, b), &(c, d)| {
            (roots[a] - roots[b])
                .abs()
                .total_cmp(&(roots[c] - roots[d]).abs())
        })
        .expect("three pairs");
    // the pair mean, or when that is itself swamped, the root fixed by p
    let candidates = [
        0.5 * (roots[i].re + roots[j].re) - shift,
        (-p / 3.0).max(0.0).sqrt().copysign(q),
    ];
    for r in candidates {
        if (p + 3.0 * r * r).abs() <= ep && (q - 2.0 * r * r * r).abs() <= eq {
            let k = 3 - i - j;
            let mut out = roots;
            out[i] = Complex::real(shift + r);
            out[j] = Complex::real(shift + r);
            out[k] = Complex::real(shift - 2.0 * r);
            return out;
        }
    }
    roots
}

/// The spectral cases that select a parameter formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumClass {
    /// Three distinct nonzero real eigenvalues, ascending.
    DistinctReal([f64; 3]),
    /// Eigenvalues `{0, λ2, λ3}` with `λ2 ≠ λ3` both nonzero.
    DistinctRealWithZero([f64; 2]),
    /// `α ± iβ` with `β > 0`, plus a real `λ`.
    ComplexPairPlusReal { alpha: f64, beta: f64, lambda: f64 },
    /// `{λ1, λ1, λ2}` with `λ1 ≠ λ2`.
    DoubleReal { repeated: f64, simple: f64 },
    /// `{λ, λ, λ}`.
    TripleReal(f64),
}

impl SpectrumClass {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumClass::DistinctReal(_) => "DistinctReal",
            SpectrumClass::DistinctRealWithZero(_) => "DistinctRealWithZero",
            SpectrumClass::ComplexPairPlusReal { .. } => "ComplexPairPlusReal",
            SpectrumClass::DoubleReal { .. } => "DoubleReal",
            SpectrumClass::TripleReal(_) => "TripleReal",
        }
    }

    /// The eigenvalue multiset this class stands for.
    pub fn eigenvalues(&self) -> [Complex; 3] {
        match *self {
            SpectrumClass::DistinctReal(l) => l.map(Complex::real),
            SpectrumClass::DistinctRealWithZero([a, b]) => {
                [Complex::ZERO, Complex::real(a), Complex::real(b)]
            }
            SpectrumClass::ComplexPairPlusReal {
                alpha,
                beta,
                lambda,
            } => [
                Complex::new(alpha, beta),
                Complex::new(alpha, -beta),
                Complex::real(lambda),
            ],
            SpectrumClass::DoubleReal { repeated, simple } => [
                Complex::real(repeated),
                Complex::real(repeated),
                Complex::real(simple),
            ],
            SpectrumClass::TripleReal(l) => [Complex::real(l); 3],
        }
    }

    /// Interpolation conditions `(node, derivative order)` an exact scheme
    /// has to satisfy: one per eigenvalue, with derivative conditions for
    /// repeated values (the case with the largest minimal polynomial).
    pub fn conditions(&self) -> [(Complex, usize); 3] {
        match *self {
            SpectrumClass::DoubleReal { repeated, simple } => {
                let r = Complex::real(repeated);
                [(r, 0), (r, 1), (Complex::real(simple), 0)]
            }
            SpectrumClass::TripleReal(l) => {
                let r = Complex::real(l);
                [(r, 0), (r, 1), (r, 2)]
            }
            _ => self.eigenvalues().map(|z| (z, 0)),
        }
    }

    pub fn scale(&self) -> f64 {
        Spectrum::new(self.eigenvalues()).scale()
    }
}

/// Result of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub class: SpectrumClass,
    /// Absolute clustering distance that was applied, `tol · max(1, max|λ|)`.
    pub abs_tol: f64,
    /// Set when clustering was order dependent (`λ1~λ2`, `λ2~λ3` but not
    /// `λ1~λ3`); all three were merged.
    pub ambiguous: bool,
}

fn canonical_order(a: &Complex, b: &Complex) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Groups eigenvalues closer than `tol · max(1, max|λ|)` and maps the
/// cluster structure onto a [`SpectrumClass`]. Merged clusters are
/// represented by their arithmetic mean.
pub fn classify(s: &Spectrum, tol: f64) -> Classification {
    assert!(tol > 0.0, "cluster tolerance must be positive");
    let mut l = s.eigenvalues;
    l.sort_by(canonical_order);
    let abs_tol = tol * s.scale();
    let near = |i: usize, j: usize| (l[i] - l[j]).abs() <= abs_tol;
    let (n01, n02, n12) = (near(0, 1), near(0, 2), near(1, 2));
    let links = n01 as u8 + n02 as u8 + n12 as u8;

    let mean2 = |i: usize, j: usize| 0.5 * (l[i].re + l[j].re);
    let mut ambiguous = false;
    let class = match links {
        0 => {
            if let Some(k) = l.iter().position(|z| z.im != 0.0) {
                let partner = (0..3).filter(|&i| i != k).find(|&i| l[i].im != 0.0);
                let real = (0..3).find(|&i| l[i].im == 0.0);
                match (partner, real) {
                    (Some(p), Some(r)) => SpectrumClass::ComplexPairPlusReal {
                        alpha: mean2(k, p),
                        beta: 0.5 * (l[k].im.abs() + l[p].im.abs()),
                        lambda: l[r].re,
                    },
                    // not conjugate-closed; fall back to the real parts
                    _ => real_distinct([l[0].re, l[1].re, l[2].re], abs_tol),
                }
            } else {
                real_distinct([l[0].re, l[1].re, l[2].re], abs_tol)
            }
        }
        1 => {
            let (i, j, k) = if n01 {
                (0, 1, 2)
            } else if n02 {
                (0, 2, 1)
            } else {
                (1, 2, 0)
            };
            SpectrumClass::DoubleReal {
                repeated: mean2(i, j),
                simple: l[k].re,
            }
        }
        _ => {
            ambiguous = links == 2;
            SpectrumClass::TripleReal((l[0].re + l[1].re + l[2].re) / 3.0)
        }
    };
    Classification {
        class,
        abs_tol,
        ambiguous,
    }
}

fn real_distinct(l: [f64; 3], abs_tol: f64) -> SpectrumClass {
    match l.iter().position(|v| v.abs() <= abs_tol) {
        Some(z) => {
            let rest: Vec<f64> = (0..3).filter(|&i| i != z).map(|i| l[i]).collect();
            SpectrumClass::DistinctRealWithZero([rest[0], rest[1]])
        }
        None => SpectrumClass::DistinctReal(l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> Matrix3 {
        Matrix3::from_rows([
            [21.0, -8.0, -19.0],
            [18.0, -7.0, -15.0],
            [16.0, -6.0, -15.0],
        ])
    }

    fn example2() -> Matrix3 {
        Matrix3::from_rows([[3.0, -1.0, -3.0], [-6.0, 2.0, 6.0], [6.0, -2.0, -6.0]])
    }

    fn sorted_re(s: &Spectrum) -> Vec<f64> {
        let mut v: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&Matrix3::zeros()), (0.0, 0.0, 0.0));
        assert_eq!(
            char_poly(&Matrix3::diag([-1.0, -2.0, -100.0])),
            (103.0, 302.0, 200.0)
        );
        assert_eq!(char_poly(&example1()), (1.0, 1.0, 1.0));
    }

    #[test]
    fn stiff_diagonal_spectrum() {
        let s = eigenvalues3(&Matrix3::diag([-1.0, -2.0, -100.0]));
        assert!(s.is_real());
        let v = sorted_re(&s);
        for (got, want) in v.iter().zip([-100.0, -2.0, -1.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn example1_spectrum_is_minus_one_and_plus_minus_i() {
        let s = eigenvalues3(&example1());
        let c = classify(&s, DEFAULT_CLUSTER_TOL);
        match c.class {
            SpectrumClass::ComplexPairPlusReal {
                alpha,
                beta,
                lambda,
            } => {
                assert!(alpha.abs() < 1e-12);
                assert!((beta - 1.0).abs() < 1e-12);
                assert!((lambda + 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected class {other:?}"),
        }
    }

    #[test]
    fn example2_is_double_zero_with_minus_one() {
        let s = eigenvalues3(&example2());
        assert!((s.sum().re + 1.0).abs() < 1e-12);
        let c = classify(&s, DEFAULT_CLUSTER_TOL);
        match c.class {
            SpectrumClass::DoubleReal { repeated, simple } => {
                assert!(repeated.abs() < 1e-10);
                assert!((simple + 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected class {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_is_triple_zero() {
        let s = eigenvalues3(&Matrix3::zeros());
        assert_eq!(
            classify(&s, DEFAULT_CLUSTER_TOL).class,
            SpectrumClass::TripleReal(0.0)
        );
    }

    #[test]
    fn classify_examples() {
        let s = Spectrum::new([Complex::real(-1.0), Complex::I, -Complex::I]);
        assert_eq!(
            classify(&s, DEFAULT_CLUSTER_TOL).class,
            SpectrumClass::ComplexPairPlusReal {
                alpha: 0.0,
                beta: 1.0,
                lambda: -1.0
            }
        );

        let s = Spectrum::from_real([5.0, 5.0, 5.0]);
        assert_eq!(
            classify(&s, DEFAULT_CLUSTER_TOL).class,
            SpectrumClass::TripleReal(5.0)
        );

        let s = Spectrum::from_real([1.0, 1.0 + 1e-12, 7.0]);
        match classify(&s, 1e-8).class {
            SpectrumClass::DoubleReal { repeated, simple } => {
                assert!((repeated - (1.0 + 5e-13)).abs() < 1e-15);
                assert_eq!(simple, 7.0);
            }
            other => panic!("unexpected class {other:?}"),
        }
    }

    #[test]
    fn zero_eigenvalue_is_snapped() {
        let s = Spectrum::from_real([3e-9, -1.0, 2.0]);
        let c = classify(&s, DEFAULT_CLUSTER_TOL);
        assert_eq!(c.class, SpectrumClass::DistinctRealWithZero([-1.0, 2.0]));
        let c = classify(&s, 1e-9);
        assert_eq!(c.class, SpectrumClass::DistinctReal([-1.0, 3e-9, 2.0]));
    }

    #[test]
    fn chained_cluster_is_merged_with_warning() {
        let s = Spectrum::from_real([0.0, 0.6e-7, 1.2e-7]);
        let c = classify(&s, 1e-7);
        assert!(c.ambiguous);
        assert!(matches!(c.class, SpectrumClass::TripleReal(m) if (m - 0.6e-7).abs() < 1e-20));
    }

    #[test]
    fn narrow_complex_pair_merges_into_double() {
        let s = Spectrum::new([
            Complex::new(2.0, 1e-9),
            Complex::new(2.0, -1e-9),
            Complex::real(-3.0),
        ]);
        assert_eq!(
            classify(&s, DEFAULT_CLUSTER_TOL).class,
            SpectrumClass::DoubleReal {
                repeated: 2.0,
                simple: -3.0
            }
        );
    }

    #[test]
    fn cubic_roots_of_known_factorisations() {
        // (t-1)(t-2)(t-3)
        let r = cubic_roots(-6.0, 11.0, -6.0);
        let mut v: Vec<f64> = r.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        for (a, b) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        // (t+1)(t²+4)
        let r = cubic_roots(1.0, 4.0, 4.0);
        assert!((r[0].re + 1.0).abs() < 1e-14 && r[0].im == 0.0);
        assert!(r[1].re.abs() < 1e-14 && (r[1].im - 2.0).abs() < 1e-14);
        assert_eq!(r[2], r[1].conj());
    }

    #[test]
    fn conditions_follow_multiplicity() {
        let c = SpectrumClass::DoubleReal {
            repeated: -1.0,
            simple: 2.0,
        };
        let orders: Vec<usize> = c.conditions().iter().map(|c| c.1).collect();
        assert_eq!(orders, vec![0, 1, 0]);
        let orders: Vec<usize> = SpectrumClass::TripleReal(3.0)
            .conditions()
            .iter()
            .map(|c| c.1)
            .collect();
        assert_eq!(orders, vec![0, 1, 2]);
    }

    #[test]
    fn multiple_roots_are_merged_within_rounding() {
        let p = Matrix3::from_rows([[1.0, 0.3, -0.2], [0.1, 0.9, 0.4], [-0.3, 0.2, 1.1]]);
        let inv = p.inverse().unwrap();
        let a = p.matmul(&Matrix3::diag([-1.5; 3])).matmul(&inv);
        let s = eigenvalues3(&a);
        assert!(s.eigenvalues.iter().all(|z| *z == s.eigenvalues[0]));
        assert!((s.eigenvalues[0].re + 1.5).abs() < 1e-14);

        let s = eigenvalues3(&Matrix3::diag([2.0, 2.0, 2.00001]));
        let mut l: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        l.sort_by(f64::total_cmp);
        assert_eq!(l[0], l[1]);
        assert!((l[0] - 2.0).abs() < 1e-12 && (l[2] - 2.00001).abs() < 1e-12);

        // well separated roots are left alone
        let s = eigenvalues3(&Matrix3::diag([1.0, 1.001, 3.0]));
        let mut l: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        l.sort_by(f64::total_cmp);
        assert!((l[1] - 1.001).abs() < 1e-12 && (l[0] - 1.0).abs() < 1e-12);
    }
}
