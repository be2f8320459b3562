//! Built-in test systems with closed-form solutions.

use crate::linalg3::{Matrix3, Vec3};

/// Spectrum `{−1, ±i}`.
pub fn example1() -> Matrix3 {
    Matrix3::from_rows([
        [21.0, -8.0, -19.0],
        [18.0, -7.0, -15.0],
        [16.0, -6.0, -15.0],
    ])
}

/// Spectrum `{0, 0, −1}`.
pub fn example2() -> Matrix3 {
    Matrix3::from_rows([[3.0, -1.0, -3.0], [-6.0, 2.0, 6.0], [6.0, -2.0, -6.0]])
}

/// Rotation in the `(x, y)` plane plus exponential growth `λ` in `z`.
pub fn example3(lambda: f64) -> Matrix3 {
    Matrix3::from_rows([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, lambda]])
}

/// Stiff diagonal system, spectrum `{−1, −2, −100}`.
pub fn example4() -> Matrix3 {
    Matrix3::diag([-1.0, -2.0, -100.0])
}

/// Linear part of the quasi-linear test problem.
pub fn example5() -> Matrix3 {
    Matrix3::diag([-1.0, -2.0, -3.0])
}

/// Nonlinearity of the quasi-linear test problem,
/// `g(t, v) = e^{−t}·sin(v)/(1 + t²)` componentwise.
///
/// `|g(t, v)| ≤ e^{−t}/(1 + t²)·|v|`, an integrable bound.
pub fn example5_forcing(t: f64, v: &Vec3) -> Vec3 {
    let k = (-t).exp() / (1.0 + t * t);
    v.map(|c| k * c.sin())
}

/// A system with a closed-form solution for one fixed initial state.
#[derive(Clone, Debug)]
pub struct Problem {
    pub id: u8,
    pub name: &'static str,
    pub a: Matrix3,
    pub x0: Vec3,
    /// Value of the `z`-growth knob; zero where the system has none.
    pub lambda: f64,
}

impl Problem {
    /// Examples 1 to 4. Example 3 takes `lambda`; the others ignore it.
    pub fn linear(id: u8, lambda: f64) -> Option<Problem> {
        let p = match id {
            1 => Problem {
                id,
                name: "example1",
                a: example1(),
                x0: Vec3::new(0.0, -50.0, 50.0),
                lambda: 0.0,
            },
            2 => Problem {
                id,
                name: "example2",
                a: example2(),
                x0: Vec3::new(0.0, -40.0, 50.0),
                lambda: 0.0,
            },
            3 => Problem {
                id,
                name: "example3",
                a: example3(lambda),
                x0: Vec3::new(1.0, 0.0, 1.0),
                lambda,
            },
            4 => Problem {
                id,
                name: "example4",
                a: example4(),
                x0: Vec3::new(1.0, 1.0, 1.0),
                lambda: 0.0,
            },
            _ => return None,
        };
        Some(p)
    }

    /// Closed-form solution at time `t`.
    pub fn exact(&self, t: f64) -> Vec3 {
        let (s, c) = t.sin_cos();
        let e = (-t).exp();
        match self.id {
            1 => Vec3::new(
                100.0 * e - 100.0 * c - 450.0 * s,
                150.0 * c - 200.0 * e - 600.0 * s,
                200.0 * e - 150.0 * c - 250.0 * s,
            ),
            2 => Vec3::new(110.0 * e - 110.0, 180.0 - 220.0 * e, 220.0 * e - 170.0),
            3 => Vec3::new(c, s, (self.lambda * t).exp()),
            4 => Vec3::new(e, (-2.0 * t).exp(), (-100.0 * t).exp()),
            _ => unreachable!("linear problems are 1 to 4"),
        }
    }
}
