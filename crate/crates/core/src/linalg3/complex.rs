use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A complex number stored as a pair of `f64`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    #[inline]
    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m * c, m * s)
    }

    /// `exp(z) - 1` without cancellation for small `|z|`.
    pub fn exp_m1(self) -> Self {
        let (s, c) = self.im.sin_cos();
        let half = (0.5 * self.im).sin();
        // e^a cos b - 1 = expm1(a) cos b - 2 sin^2(b/2)
        let re = self.re.exp_m1() * c - 2.0 * half * half;
        Complex::new(re, self.re.exp() * s)
    }

    pub fn sqrt(self) -> Self {
        if self.im == 0.0 {
            return if self.re >= 0.0 {
                Complex::real(self.re.sqrt())
            } else {
                Complex::new(0.0, (-self.re).sqrt())
            };
        }
        let r = self.abs();
        let re = (0.5 * (r + self.re)).sqrt();
        let im = (0.5 * (r - self.re)).sqrt().copysign(self.im);
        Complex::new(re, im)
    }

    pub fn recip(self) -> Self {
        Complex::ONE / self
    }
}

impl From<f64> for Complex {
    fn from(re: f64) -> Self {
        Complex::real(re)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for Complex {
    type Output = Complex;
    #[inline]
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    #[inline]
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    // Smith's algorithm
    fn div(self, o: Complex) -> Complex {
        if o.im == 0.0 {
            return Complex::new(self.re / o.re, self.im / o.re);
        }
        if o.re.abs() >= o.im.abs() {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            Complex::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            Complex::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    #[inline]
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, k: f64) -> Complex {
        self.scale(k)
    }
}

impl Mul<Complex> for f64 {
    type Output = Complex;
    #[inline]
    fn mul(self, z: Complex) -> Complex {
        z.scale(self)
    }
}

impl Add<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn add(self, k: f64) -> Complex {
        Complex::new(self.re + k, self.im)
    }
}

impl Sub<f64> for Complex {
    type Output = Complex;
    #[inline]
    fn sub(self, k: f64) -> Complex {
        Complex::new(self.re - k, self.im)
    }
}

impl AddAssign for Complex {
    #[inline]
    fn add_assign(&mut self, o: Complex) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign for Complex {
    #[inline]
    fn sub_assign(&mut self, o: Complex) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl MulAssign for Complex {
    #[inline]
    fn mul_assign(&mut self, o: Complex) {
        *self = *self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_inverts_multiplication() {
        let a = Complex::new(3.0, -4.0);
        let b = Complex::new(-0.5, 2.0);
        let q = (a * b) / b;
        assert!((q - a).abs() < 1e-15);
        let q = (a * b) / a;
        assert!((q - b).abs() < 1e-15);
    }

    #[test]
    fn exp_m1_matches_exp_for_large_args_and_series_for_small() {
        let z = Complex::new(0.7, -1.3);
        assert!((z.exp_m1() - (z.exp() - 1.0)).abs() < 1e-15);
        let tiny = Complex::new(1e-12, 2e-12);
        let m = tiny.exp_m1();
        // a + (a² − b²)/2
        assert!((m.re - (1e-12 - 1.5e-24)).abs() < 1e-27);
        assert!((m.im / 2e-12 - 1.0).abs() < 2e-12);
    }

    #[test]
    fn sqrt_branches() {
        let r = Complex::real(-4.0).sqrt();
        assert_eq!(r, Complex::new(0.0, 2.0));
        let z = Complex::new(-3.0, 4.0);
        let s = z.sqrt();
        assert!((s * s - z).abs() < 1e-14);
        assert!(s.re >= 0.0);
    }

    #[test]
    fn euler_identity() {
        let z = Complex::new(0.0, std::f64::consts::PI).exp();
        assert!((z + 1.0).abs() < 1e-15);
    }
}
