//! Classical one-step methods realized as transfer matrices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg3::{Lu, Matrix3};
use crate::params::SchemeKind;
use crate::scheme::{exact_transfer, TransferMatrix};
use crate::spectrum::DEFAULT_CLUSTER_TOL;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(into = "String", try_from = "String")]
pub enum MethodId {
    ExplicitEuler,
    ImplicitEuler,
    Trapezoidal,
    Rk4,
    Taylor5,
    RadauIia5,
    Ieds,
    Eeds,
}

impl MethodId {
    pub const ALL: [MethodId; 8] = [
        MethodId::ExplicitEuler,
        MethodId::ImplicitEuler,
        MethodId::Trapezoidal,
        MethodId::Rk4,
        MethodId::Taylor5,
        MethodId::RadauIia5,
        MethodId::Ieds,
        MethodId::Eeds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::ExplicitEuler => "explicit-euler",
            MethodId::ImplicitEuler => "implicit-euler",
            MethodId::Trapezoidal => "trapezoidal",
            MethodId::Rk4 => "rk4",
            MethodId::Taylor5 => "taylor5",
            MethodId::RadauIia5 => "radau-iia5",
            MethodId::Ieds => "ieds",
            MethodId::Eeds => "eeds",
        }
    }

    /// Classical convergence order; `None` for the exact schemes.
    pub fn order(self) -> Option<u32> {
        match self {
            MethodId::ExplicitEuler | MethodId::ImplicitEuler => Some(1),
            MethodId::Trapezoidal => Some(2),
            MethodId::Rk4 => Some(4),
            MethodId::Taylor5 => Some(6),
            MethodId::RadauIia5 => Some(5),
            MethodId::Ieds | MethodId::Eeds => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, MethodId::Ieds | MethodId::Eeds)
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ok(match key.as_str() {
            "expliciteuler" | "euler" => MethodId::ExplicitEuler,
            "impliciteuler" | "backwardeuler" => MethodId::ImplicitEuler,
            "trapezoidal" | "trapezoid" | "cranknicolson" => MethodId::Trapezoidal,
            "rk4" => MethodId::Rk4,
            "taylor5" | "taylor" => MethodId::Taylor5,
            "radauiia5" | "radau5" | "radauiia" | "radau" => MethodId::RadauIia5,
            "ieds" => MethodId::Ieds,
            "eeds" => MethodId::Eeds,
            _ => return Err(Error::Parse(format!("unknown method '{s}'"))),
        })
    }
}

impl From<MethodId> for String {
    fn from(m: MethodId) -> String {
        m.name().to_string()
    }
}

impl TryFrom<String> for MethodId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Truncated exponential series `Σ_{j≤n} (hA)^j / j!`.
fn taylor(a: &Matrix3, h: f64, n: u32) -> Matrix3 {
    let ha = a.scale(h);
    let mut term = Matrix3::identity();
    let mut sum = term;
    for j in 1..=n {
        term = term.matmul(&ha).scale(1.0 / j as f64);
        sum = sum + term;
    }
    sum
}

fn invert(m: &Matrix3, method: MethodId) -> Result<Lu<f64>> {
    Lu::factor(m).map_err(|_| Error::SingularStepMatrix { method })
}

/// Transfer matrix of `method` for `x' = Ax` with step `h`.
///
/// Taylor5 sums the series through `(hA)^6`, so its local error is
/// `O(h^7)` and its global order is 6.
pub fn baseline_transfer(a: &Matrix3, h: f64, method: MethodId) -> Result<TransferMatrix> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step must be positive and finite, got {h}"
        )));
    }
    let q = match method {
        MethodId::Ieds => return exact_transfer(a, h, SchemeKind::Implicit, DEFAULT_CLUSTER_TOL),
        MethodId::Eeds => return exact_transfer(a, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL),
        MethodId::ExplicitEuler => a.affine(1.0, h),
        MethodId::ImplicitEuler => {
            let lu = invert(&a.affine(1.0, -h), method)?;
            Matrix3::from_columns([0, 1, 2].map(|j| lu.solve(&Matrix3::identity().column(j))))
        }
        MethodId::Trapezoidal => {
            let lu = invert(&a.affine(1.0, -0.5 * h), method)?;
            let rhs = a.affine(1.0, 0.5 * h);
            Matrix3::from_columns([0, 1, 2].map(|j| lu.solve(&rhs.column(j))))
        }
        MethodId::Rk4 => taylor(a, h, 4),
        MethodId::Taylor5 => taylor(a, h, 6),
        MethodId::RadauIia5 => radau_iia5(a, h)?,
    };
    if !q.is_finite() {
        return Err(Error::SingularStepMatrix { method });
    }
    Ok(TransferMatrix {
        q,
        h,
        method,
        params: None,
        class: None,
    })
}

const SQRT6: f64 = 2.449_489_742_783_178;

/// Three-stage Radau IIA coefficients.
const RADAU_A: [[f64; 3]; 3] = [
    [
        (88.0 - 7.0 * SQRT6) / 360.0,
        (296.0 - 169.0 * SQRT6) / 1800.0,
        (-2.0 + 3.0 * SQRT6) / 225.0,
    ],
    [
        (296.0 + 169.0 * SQRT6) / 1800.0,
        (88.0 + 7.0 * SQRT6) / 360.0,
        (-2.0 - 3.0 * SQRT6) / 225.0,
    ],
    [(16.0 - SQRT6) / 36.0, (16.0 + SQRT6) / 36.0, 1.0 / 9.0],
];

/// Stage equations `K_i = A(x + h Σ_j a_ij K_j)` solved as one 9×9 system for
/// each basis vector `x = e_c`; the method is stiffly accurate, so the
/// weights are the last row of the coefficient matrix.
fn radau_iia5(a: &Matrix3, h: f64) -> Result<Matrix3> {
    let mut m = [[0.0; 9]; 9];
    for i in 0..3 {
        for j in 0..3 {
            for r in 0..3 {
                for c in 0..3 {
                    let id = if i == j && r == c { 1.0 } else { 0.0 };
                    m[3 * i + r][3 * j + c] = id - h * RADAU_A[i][j] * a[(r, c)];
                }
            }
        }
    }
    // right-hand sides: (A e_c) repeated for every stage
    let mut rhs = [[0.0; 3]; 9];
    for i in 0..3 {
        for r in 0..3 {
            for c in 0..3 {
                rhs[3 * i + r][c] = a[(r, c)];
            }
        }
    }
    let k = gauss_solve(m, rhs).ok_or(Error::SingularStepMatrix {
        method: MethodId::RadauIia5,
    })?;
    let mut q = Matrix3::identity();
    for r in 0..3 {
        for c in 0..3 {
            let incr: f64 = (0..3).map(|j| RADAU_A[2][j] * k[3 * j + r][c]).sum();
            q.0[r][c] += h * incr;
        }
    }
    Ok(q)
}

/// Gaussian elimination with partial pivoting on an `N×N` system with
/// three right-hand sides.
fn gauss_solve<const N: usize>(
    mut m: [[f64; N]; N],
    mut b: [[f64; 3]; N],
) -> Option<[[f64; 3]; N]> {
    for col in 0..N {
        let p = (col..N).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if !(m[p][col].abs() >= crate::linalg3::PIVOT_FLOOR) {
            return None;
        }
        m.swap(col, p);
        b.swap(col, p);
        for r in (col + 1)..N {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..N {
                m[r][c] -= f * m[col][c];
            }
            for c in 0..3 {
                b[r][c] -= f * b[col][c];
            }
        }
    }
    let mut x = [[0.0; 3]; N];
    for r in (0..N).rev() {
        for c in 0..3 {
            let s: f64 = ((r + 1)..N).map(|k| m[r][k] * x[k][c]).sum();
            x[r][c] = (b[r][c] - s) / m[r][r];
        }
    }
    Some(x)
}
