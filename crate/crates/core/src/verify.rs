//! Seeded exactness suite: random matrices and similarity-transformed Jordan
//! forms, checked step by step against the matrix exponential.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg3::{expm, Matrix3, Vec3};
use crate::params::SchemeKind;
use crate::scheme::exact_transfer;

/// The 3×3 Jordan structures, plus the real block of a complex pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JordanShape {
    /// `diag(λ1, λ2, λ3)`, distinct.
    Distinct,
    /// Real block `[[α, β], [−β, α]]` plus `λ`.
    ComplexPair,
    /// `diag(λ1, λ1, λ2)`.
    DoubleDiagonal,
    /// One 2×2 block at `λ1` plus `λ2`.
    DoubleDefective,
    /// `λI`.
    TripleScalar,
    /// A 2×2 and a 1×1 block at `λ`.
    TripleTwoBlocks,
    /// One 3×3 block at `λ`.
    TripleOneBlock,
}

impl JordanShape {
    pub const ALL: [JordanShape; 7] = [
        JordanShape::Distinct,
        JordanShape::ComplexPair,
        JordanShape::DoubleDiagonal,
        JordanShape::DoubleDefective,
        JordanShape::TripleScalar,
        JordanShape::TripleTwoBlocks,
        JordanShape::TripleOneBlock,
    ];

    /// Name of the spectral class the shape's eigenvalues fall in (a zero
    /// eigenvalue is never drawn for the distinct shape).
    pub fn class_name(self) -> &'static str {
        match self {
            JordanShape::Distinct => "DistinctReal",
            JordanShape::ComplexPair => "ComplexPairPlusReal",
            JordanShape::DoubleDiagonal | JordanShape::DoubleDefective => "DoubleReal",
            _ => "TripleReal",
        }
    }

    /// Jordan matrix with random eigenvalues in `[−2, 2]`, distinct values
    /// at least `0.2` apart and away from zero.
    pub fn sample<R: Rng>(self, rng: &mut R) -> Matrix3 {
        let mut pick = |avoid: &[f64]| loop {
            let v: f64 = rng.gen_range(-2.0..2.0);
            if v.abs() > 0.1 && avoid.iter().all(|a| (v - a).abs() > 0.2) {
                return v;
            }
        };
        let l1 = pick(&[]);
        let l2 = pick(&[l1]);
        match self {
            JordanShape::Distinct => {
                let l3 = pick(&[l1, l2]);
                Matrix3::diag([l1, l2, l3])
            }
            JordanShape::ComplexPair => {
                let beta = pick(&[]).abs().max(0.3);
                Matrix3::from_rows([[l1, beta, 0.0], [-beta, l1, 0.0], [0.0, 0.0, l2]])
            }
            JordanShape::DoubleDiagonal => Matrix3::diag([l1, l1, l2]),
            JordanShape::DoubleDefective => {
                Matrix3::from_rows([[l1, 1.0, 0.0], [0.0, l1, 0.0], [0.0, 0.0, l2]])
            }
            JordanShape::TripleScalar => Matrix3::diag([l1; 3]),
            JordanShape::TripleTwoBlocks => {
                Matrix3::from_rows([[l1, 1.0, 0.0], [0.0, l1, 0.0], [0.0, 0.0, l1]])
            }
            JordanShape::TripleOneBlock => {
                Matrix3::from_rows([[l1, 1.0, 0.0], [0.0, l1, 1.0], [0.0, 0.0, l1]])
            }
        }
    }
}

/// Random similarity transform with `‖P‖_∞‖P⁻¹‖_∞ ≤ 20`.
pub fn well_conditioned<R: Rng>(rng: &mut R) -> (Matrix3, Matrix3) {
    loop {
        let mut p = Matrix3::identity();
        for i in 0..3 {
            for j in 0..3 {
                p.0[i][j] += rng.gen_range(-0.7..0.7);
            }
        }
        if let Ok(inv) = p.inverse() {
            if p.norm_inf() * inv.norm_inf() <= 20.0 {
                return (p, inv);
            }
        }
    }
}

/// `P·J·P⁻¹` for a random well-conditioned `P`.
pub fn similar<R: Rng>(j: &Matrix3, rng: &mut R) -> Matrix3 {
    let (p, inv) = well_conditioned(rng);
    p.matmul(j).matmul(&inv)
}

pub fn random_matrix<R: Rng>(rng: &mut R, half_width: f64) -> Matrix3 {
    let mut a = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            a.0[i][j] = rng.gen_range(-half_width..half_width);
        }
    }
    a
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Matrices with entries uniform in `[−2, 2]`.
    pub random_cases: usize,
    /// Jordan constructions, cycling through every shape.
    pub jordan_cases: usize,
    pub steps: Vec<f64>,
    /// Upper bound on the number of steps per run.
    pub max_steps: usize,
    /// Upper bound on `N·h`.
    pub horizon: f64,
    pub cluster_tol: f64,
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            random_cases: 500,
            jordan_cases: 100,
            steps: vec![0.01, 0.1, 1.0],
            max_steps: 100,
            horizon: 10.0,
            cluster_tol: crate::spectrum::DEFAULT_CLUSTER_TOL,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub case: usize,
    pub label: String,
    pub kind: SchemeKind,
    pub h: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub cases: usize,
    pub runs: usize,
    /// Largest `max_k ‖x_k − e^{Akh}x0‖ / max_k max(1, ‖e^{Akh}x0‖)`.
    pub worst: f64,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Relative grid error of an exact scheme, or a description of why the
/// scheme could not be built.
pub fn exactness_error(
    a: &Matrix3,
    x0: Vec3,
    h: f64,
    n: usize,
    kind: SchemeKind,
    cluster_tol: f64,
) -> Result<f64, String> {
    let tm = exact_transfer(a, h, kind, cluster_tol).map_err(|e| e.to_string())?;
    let mut err = 0.0f64;
    let mut scale = 1.0f64;
    for (k, x) in tm.states(x0, n) {
        let exact = expm(a, k as f64 * h)
            .map_err(|e| e.to_string())?
            .mul_vec(&x0);
        err = err.max((x - exact).norm_inf());
        scale = scale.max(exact.norm_inf());
    }
    Ok(err / scale)
}

pub fn run_suite(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases: Vec<(String, Matrix3, Vec3)> =
        Vec::with_capacity(cfg.random_cases + cfg.jordan_cases);
    for i in 0..cfg.random_cases {
        let a = random_matrix(&mut rng, 2.0);
        let x0 = random_matrix(&mut rng, 1.0).row(0);
        cases.push((format!("random#{i}"), a, x0));
    }
    for i in 0..cfg.jordan_cases {
        let shape = JordanShape::ALL[i % JordanShape::ALL.len()];
        let j = shape.sample(&mut rng);
        let a = similar(&j, &mut rng);
        let x0 = random_matrix(&mut rng, 1.0).row(0);
        cases.push((format!("{shape:?}#{i}"), a, x0));
    }

    let mut report = VerifyReport {
        cases: cases.len(),
        ..Default::default()
    };
    for (idx, (label, a, x0)) in cases.iter().enumerate() {
        for kind in [SchemeKind::Implicit, SchemeKind::Explicit] {
            for &h in &cfg.steps {
                let n = ((cfg.horizon / h).round() as usize).clamp(1, cfg.max_steps);
                report.runs += 1;
                let fail = |detail: String| VerifyFailure {
                    case: idx,
                    label: label.clone(),
                    kind,
                    h,
                    detail,
                };
                match exactness_error(a, *x0, h, n, kind, cfg.cluster_tol) {
                    Ok(e) => {
                        report.worst = report.worst.max(e);
                        if !(e <= cfg.tolerance) {
                            report.failures.push(fail(format!("relative error {e:e}")));
                        }
                    }
                    Err(msg) => report.failures.push(fail(msg)),
                }
            }
        }
    }
    report
}
