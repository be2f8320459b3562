//! Dense 3×3 linear algebra over real and complex scalars.
//!
//! Everything here is stack-allocated and `Copy`. The matrix exponential
//! [`expm`] is a plain scaling-and-squaring Taylor evaluation; it needs no
//! eigen-decomposition and serves as the ground truth the exact schemes are
//! checked against.

mod complex;

use std::fmt::Debug;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

pub use complex::Complex;

use crate::error::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Relative truncation threshold for the exponential series.
const SERIES_TOL: f64 = 1e-18;
const SERIES_MAX_TERMS: usize = 80;

/// Field operations shared by `f64` and [`Complex`].
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;
    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex {
    const ZERO: Complex = Complex::ZERO;
    const ONE: Complex = Complex::ONE;
    #[inline]
    fn from_f64(x: f64) -> Complex {
        Complex::real(x)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
}

/// A 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector3<S>(pub [S; 3]);

/// A 3×3 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3x3<S>(pub [[S; 3]; 3]);

pub type Vec3 = Vector3<f64>;
pub type Matrix3 = Matrix3x3<f64>;
pub type CVec3 = Vector3<Complex>;
pub type CMatrix3 = Matrix3x3<Complex>;

impl<S: Scalar> Vector3<S> {
    pub const fn new(x: S, y: S, z: S) -> Self {
        Vector3([x, y, z])
    }

    pub fn zeros() -> Self {
        Vector3([S::ZERO; 3])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.finite())
    }

    /// Sum of moduli.
    pub fn norm1(&self) -> f64 {
        self.0.iter().map(|v| v.modulus()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn norm2(&self) -> f64 {
        self.0
            .iter()
            .map(|v| {
                let m = v.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, k: S) -> Self {
        Vector3(self.0.map(|v| v * k))
    }

    pub fn map<T, F: Fn(S) -> T>(&self, f: F) -> Vector3<T> {
        Vector3(self.0.map(f))
    }
}

impl<S: Scalar> Index<usize> for Vector3<S> {
    type Output = S;
    #[inline]
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> IndexMut<usize> for Vector3<S> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Add for Vector3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vector3([self[0] + o[0], self[1] + o[1], self[2] + o[2]])
    }
}

impl<S: Scalar> Sub for Vector3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vector3([self[0] - o[0], self[1] - o[1], self[2] - o[2]])
    }
}

impl Vec3 {
    pub fn to_complex(&self) -> CVec3 {
        self.map(Complex::real)
    }
}

impl<S: Scalar> Matrix3x3<S> {
    pub const fn from_rows(rows: [[S; 3]; 3]) -> Self {
        Matrix3x3(rows)
    }

    pub fn zeros() -> Self {
        Matrix3x3([[S::ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([S::ONE; 3])
    }

    pub fn diag(d: [S; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_columns(cols: [Vector3<S>; 3]) -> Self {
        let mut m = Self::zeros();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = c[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector3<S> {
        Vector3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn row(&self, i: usize) -> Vector3<S> {
        Vector3(self.0[i])
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.finite())
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|r| r.iter().map(|v| v.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn trace(&self) -> S {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> S {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, k: S) -> Self {
        Matrix3x3(self.0.map(|r| r.map(|v| v * k)))
    }

    pub fn mul_vec(&self, x: &Vector3<S>) -> Vector3<S> {
        let m = &self.0;
        Vector3([
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        ])
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let mut r = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] =
                    self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j];
            }
        }
        r
    }

    /// `a·I + self·b`, the building block of every one-step map.
    pub fn affine(&self, a: S, b: S) -> Self {
        let mut r = self.scale(b);
        for i in 0..3 {
            r.0[i][i] = r.0[i][i] + a;
        }
        r
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            k >>= 1;
        }
        acc
    }

    /// Solves `self · Y = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Self) -> Result<Self> {
        let lu = Lu::factor(self)?;
        Ok(Self::from_columns(
            [0, 1, 2].map(|j| lu.solve(&rhs.column(j))),
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve_matrix(&Self::identity())
    }
}

impl<S: Scalar> Index<(usize, usize)> for Matrix3x3<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.0[i][j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for Matrix3x3<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.0[i][j]
    }
}

impl<S: Scalar> Add for Matrix3x3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] = self.0[i][j] + o.0[i][j];
            }
        }
        r
    }
}

impl<S: Scalar> Sub for Matrix3x3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] = self.0[i][j] - o.0[i][j];
            }
        }
        r
    }
}

impl<S: Scalar> Mul for Matrix3x3<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.matmul(&o)
    }
}

impl<S: Scalar> Mul<Vector3<S>> for Matrix3x3<S> {
    type Output = Vector3<S>;
    fn mul(self, x: Vector3<S>) -> Vector3<S> {
        self.mul_vec(&x)
    }
}

impl Matrix3 {
    pub fn to_complex(&self) -> CMatrix3 {
        Matrix3x3(self.0.map(|r| r.map(Complex::real)))
    }
}

impl CMatrix3 {
    /// Real part, entrywise.
    pub fn re(&self) -> Matrix3 {
        Matrix3x3(self.0.map(|r| r.map(|z| z.re)))
    }
}

/// LU factorisation with partial pivoting, `P·M = L·U`.
#[derive(Clone, Copy, Debug)]
pub struct Lu<S> {
    lu: [[S; 3]; 3],
    perm: [usize; 3],
}

impl<S: Scalar> Lu<S> {
    pub fn factor(m: &Matrix3x3<S>) -> Result<Self> {
        let mut a = m.0;
        let mut perm = [0, 1, 2];
        for k in 0..3 {
            let (p, pivot) = (k..3)
                .map(|i| (i, a[i][k].modulus()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if !(pivot >= PIVOT_FLOOR) {
                return Err(Error::SingularMatrix { column: k, pivot });
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
            }
            for i in (k + 1)..3 {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in (k + 1)..3 {
                    a[i][j] = a[i][j] - f * a[k][j];
                }
            }
        }
        Ok(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &Vector3<S>) -> Vector3<S> {
        let a = &self.lu;
        let mut y = [b[self.perm[0]], b[self.perm[1]], b[self.perm[2]]];
        for i in 1..3 {
            for j in 0..i {
                y[i] = y[i] - a[i][j] * y[j];
            }
        }
        for i in (0..3).rev() {
            for j in (i + 1)..3 {
                y[i] = y[i] - a[i][j] * y[j];
            }
            y[i] = y[i] / a[i][i];
        }
        Vector3(y)
    }
}

/// Solves `M y = b` by Gaussian elimination with partial pivoting.
pub fn solve3(m: &CMatrix3, b: &CVec3) -> Result<CVec3> {
    Ok(Lu::factor(m)?.solve(b))
}

/// Real counterpart of [`solve3`].
pub fn solve3_real(m: &Matrix3, b: &Vec3) -> Result<Vec3> {
    Ok(Lu::factor(m)?.solve(b))
}

/// `e^{At}` by scaling and squaring a truncated Taylor series.
///
/// The scaling exponent is `s = max(0, ceil(log2 ‖At‖∞))`; the series for
/// `e^{At/2^s}` is summed until the next term is below `1e-18` of the partial
/// sum (both in the ∞-norm) and the result is squared `s` times.
pub fn expm(a: &Matrix3, t: f64) -> Result<Matrix3> {
    expm_generic(a, t)
}

/// Complex-matrix counterpart of [`expm`].
pub fn expm_complex(a: &CMatrix3, t: f64) -> Result<CMatrix3> {
    expm_generic(a, t)
}

fn expm_generic<S: Scalar>(a: &Matrix3x3<S>, t: f64) -> Result<Matrix3x3<S>> {
    if !a.is_finite() || !t.is_finite() {
        return Err(Error::InvalidInput("expm of a non-finite matrix".into()));
    }
    if t == 0.0 {
        return Ok(Matrix3x3::identity());
    }
    let at = a.scale(S::from_f64(t));
    let norm = at.norm_inf();
    let s = if norm > 0.0 {
        norm.log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let x = at.scale(S::from_f64(0.5f64.powi(s)));

    let mut sum = Matrix3x3::<S>::identity();
    let mut term = sum;
    for k in 1..SERIES_MAX_TERMS {
        term = term.matmul(&x).scale(S::from_f64(1.0 / k as f64));
        sum = sum + term;
        if term.norm_inf() < SERIES_TOL * sum.norm_inf() {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    if !sum.is_finite() {
        return Err(Error::Overflow(format!(
            "exp(At) is not representable (|At| = {norm:e})"
        )));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &Matrix3, b: &Matrix3, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = Vec3::new(1.0, 2.0, 3.0).to_complex();
        let y = solve3(&CMatrix3::identity(), &b).unwrap();
        assert_eq!(y, b);

        let d = Matrix3::diag([2.0, 4.0, 5.0]).to_complex();
        let y = solve3(&d, &Vec3::new(2.0, 4.0, 5.0).to_complex()).unwrap();
        for i in 0..3 {
            assert!((y[i] - Complex::ONE).abs() < 1e-15);
        }
    }

    #[test]
    fn solve_detects_singularity() {
        let m = Matrix3::from_rows([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]);
        assert!(matches!(
            solve3_real(&m, &Vec3::new(1.0, 1.0, 1.0)),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(solve3_real(&Matrix3::zeros(), &Vec3::zeros()).is_err());
    }

    #[test]
    fn solve_pivots() {
        // a zero leading entry needs a row swap
        let m = Matrix3::from_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 2.0]]);
        let y = solve3_real(&m, &Vec3::new(3.0, 5.0, 4.0)).unwrap();
        assert_eq!(y, Vec3::new(5.0, 3.0, 2.0));
    }

    #[test]
    fn complex_solve_residual() {
        let m = CMatrix3::from_rows([
            [
                Complex::new(1.0, 1.0),
                Complex::real(2.0),
                Complex::new(0.0, -1.0),
            ],
            [
                Complex::real(-1.0),
                Complex::new(3.0, 0.5),
                Complex::real(1.0),
            ],
            [
                Complex::new(0.2, 0.0),
                Complex::real(1.0),
                Complex::new(4.0, -2.0),
            ],
        ]);
        let b = CVec3::new(Complex::I, Complex::real(2.0), Complex::new(-1.0, 3.0));
        let y = solve3(&m, &b).unwrap();
        let r = m.mul_vec(&y) - b;
        assert!(r.norm_inf() <= 1e-12 * (m.norm_inf() * y.norm_inf() + b.norm_inf()));
    }

    #[test]
    fn expm_of_zero_is_identity() {
        for t in [0.0, 1.0, -3.5, 1e6] {
            assert_eq!(expm(&Matrix3::zeros(), t).unwrap(), Matrix3::identity());
        }
        let a = Matrix3::from_rows([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
        assert_eq!(expm(&a, 0.0).unwrap(), Matrix3::identity());
    }

    #[test]
    fn expm_stiff_diagonal() {
        let a = Matrix3::diag([-1.0, -2.0, -100.0]);
        let e = expm(&a, 1.0).unwrap();
        let want = [(-1.0f64).exp(), (-2.0f64).exp(), (-100.0f64).exp()];
        for i in 0..3 {
            assert!((e[(i, i)] - want[i]).abs() <= 1e-13 * want[i]);
            assert!(((e[(i, i)] - want[i]) / want[i]).abs() < 1e-13);
        }
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn expm_rotation_block() {
        let a = Matrix3::from_rows([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let e = expm(&a, FRAC_PI_2).unwrap();
        let want = Matrix3::from_rows([
            [0.0, -1.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 0.0, FRAC_PI_2.exp()],
        ]);
        assert!(close(&e, &want, 1e-14 * FRAC_PI_2.exp()));
    }

    #[test]
    fn expm_jordan_block_matches_polynomial_form() {
        // exp(t·J) for a 3×3 Jordan block is e^{λt}·[1, t, t²/2; 0, 1, t; 0, 0, 1]
        let lam = -0.7;
        let j = Matrix3::from_rows([[lam, 1.0, 0.0], [0.0, lam, 1.0], [0.0, 0.0, lam]]);
        let t = 2.5;
        let e = expm(&j, t).unwrap();
        let g = (lam * t).exp();
        let want =
            Matrix3::from_rows([[g, g * t, g * t * t / 2.0], [0.0, g, g * t], [0.0, 0.0, g]]);
        assert!(close(&e, &want, 1e-14));
    }

    #[test]
    fn expm_overflow_is_reported() {
        let a = Matrix3::diag([1.0, 0.0, 0.0]);
        assert!(matches!(expm(&a, 800.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn lu_handles_complex_pivoting() {
        let m = CMatrix3::from_rows([
            [Complex::ZERO, Complex::I, Complex::ZERO],
            [Complex::ONE, Complex::ZERO, Complex::ZERO],
            [Complex::ZERO, Complex::ZERO, Complex::new(0.0, -2.0)],
        ]);
        let inv = m.inverse().unwrap();
        let p = m.matmul(&inv);
        assert!((p - CMatrix3::identity()).max_abs() < 1e-15);
    }
}
