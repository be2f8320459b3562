use eds3::linalg3::{expm, solve3, CMatrix3, CVec3, Complex, Matrix3};
use eds3::spectrum::{classify, eigenvalues3, Spectrum, DEFAULT_CLUSTER_TOL};
use eds3::verify::{similar, JordanShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(bound: f64) -> impl Strategy<Value = Matrix3> {
    prop::array::uniform3(prop::array::uniform3(-bound..bound)).prop_map(Matrix3::from_rows)
}

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn expm_semigroup(a in matrix(5.0 / 3.0), t1 in -2.0..2.0f64, t2 in -2.0..2.0f64) {
        let lhs = expm(&a, t1 + t2).unwrap();
        let rhs = expm(&a, t1).unwrap().matmul(&expm(&a, t2).unwrap());
        let scale = expm(&a, t1).unwrap().norm_inf() * expm(&a, t2).unwrap().norm_inf();
        prop_assert!((lhs - rhs).norm_inf() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn expm_at_zero_is_identity(a in matrix(100.0)) {
        prop_assert_eq!(expm(&a, 0.0).unwrap(), Matrix3::identity());
    }

    #[test]
    fn solve3_residual(
        rows in prop::array::uniform3(prop::array::uniform3(complex())),
        b in prop::array::uniform3(complex()),
    ) {
        let mut m = CMatrix3::from_rows(rows);
        for i in 0..3 {
            m[(i, i)] += Complex::real(3.0);
        }
        let b = CVec3::new(b[0], b[1], b[2]);
        let x = solve3(&m, &b).unwrap();
        let r = (m.mul_vec(&x) - b).norm_inf();
        prop_assert!(r <= 1e-12 * b.norm_inf().max(1e-300) * 10.0 || r <= 1e-14);
    }

    #[test]
    fn spectrum_matches_trace_and_determinant(a in matrix(10.0)) {
        let s = eigenvalues3(&a);
        let scale = a.norm_inf().max(1.0);
        let sum = s.sum();
        let prod = s.product();
        prop_assert!((sum.re - a.trace()).abs() <= 1e-9 * scale && sum.im.abs() <= 1e-9 * scale);
        prop_assert!((prod.re - a.det()).abs() <= 1e-9 * scale.powi(3) && prod.im.abs() <= 1e-9 * scale.powi(3));
        // conjugate-closed
        for z in s.eigenvalues {
            let d = s.eigenvalues.iter().map(|w| (*w - z.conj()).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= 1e-9 * scale);
        }
    }

    #[test]
    fn classification_ignores_eigenvalue_order(a in matrix(3.0), perm in 0usize..6) {
        let s = eigenvalues3(&a);
        let p = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let shuffled = Spectrum::new(p.map(|i| s.eigenvalues[i]));
        prop_assert_eq!(classify(&s, DEFAULT_CLUSTER_TOL), classify(&shuffled, DEFAULT_CLUSTER_TOL));
    }
}

#[test]
fn classification_recovers_jordan_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut hits = 0;
    let mut misses = Vec::new();
    for i in 0..1000 {
        let shape = JordanShape::ALL[i % JordanShape::ALL.len()];
        let j = shape.sample(&mut rng);
        let a = similar(&j, &mut rng);
        let got = classify(&eigenvalues3(&a), DEFAULT_CLUSTER_TOL).class;
        if got.name() == shape.class_name() {
            hits += 1;
        } else {
            // only a repeated root split beyond the tolerance is an acceptable miss
            assert!(
                !matches!(shape, JordanShape::Distinct | JordanShape::ComplexPair),
                "{shape:?} classified as {got:?}"
            );
            misses.push((shape, got));
        }
    }
    assert!(hits >= 990, "{hits}/1000, misses {misses:?}");
}
