#![allow(clippy::neg_cmp_op_on_partial_ord)]

use eds3::baselines::baseline_transfer;
use eds3::problems::{example4, Problem};
use eds3::scheme::run;
use eds3::verify::{well_conditioned, JordanShape};
use eds3::{
    exact_transfer, expm, integrate, one_shot, Matrix3, MethodId, SchemeKind, Vec3,
    DEFAULT_CLUSTER_TOL,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KINDS: [SchemeKind; 2] = [SchemeKind::Implicit, SchemeKind::Explicit];

#[test]
fn similar_matrices_have_similar_transfer_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..140 {
        let shape = JordanShape::ALL[i % JordanShape::ALL.len()];
        let j = shape.sample(&mut rng);
        let (p, p_inv) = well_conditioned(&mut rng);
        let a = p.matmul(&j).matmul(&p_inv);
        for kind in KINDS {
            for h in [0.05, 0.5] {
                let qj = exact_transfer(&j, h, kind, DEFAULT_CLUSTER_TOL).unwrap();
                let qa = exact_transfer(&a, h, kind, DEFAULT_CLUSTER_TOL).unwrap();
                let mapped = p.matmul(&qj.q).matmul(&p_inv);
                let d = (qa.q - mapped).norm_inf() / qa.q.norm_inf().max(1.0);
                assert!(d <= 1e-9, "{shape:?} {kind} h={h}: {d:e}");
            }
        }
    }
}

#[test]
fn one_shot_agrees_with_stepping() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..30 {
        let a = eds3::verify::random_matrix(&mut rng, 1.0);
        let x0 = Vec3::new(1.0, -0.5, 0.25 * i as f64);
        for kind in KINDS {
            for n in [1, 7, 100] {
                let t = 3.0;
                let far = one_shot(&a, x0, t, kind).unwrap();
                let stepped = integrate(&a, x0, t, n, kind).unwrap();
                let last = stepped.states[n];
                let d = (far - last).norm_inf() / far.norm_inf().max(1.0);
                assert!(d <= 1e-9, "case {i} {kind} N={n}: {d:e}");
            }
        }
    }
}

#[test]
fn one_shot_on_the_stiff_problem() {
    let a = example4();
    let x0 = Vec3::new(1.0, 1.0, 1.0);
    let exact = Vec3::new((-1f64).exp(), (-2f64).exp(), (-100f64).exp());
    for kind in KINDS {
        let x = one_shot(&a, x0, 1.0, kind).unwrap();
        assert!((x - exact).norm_inf() <= 1e-13, "{kind}: {x:?}");
    }
}

#[test]
fn zero_matrix_gives_the_identity_step() {
    for kind in KINDS {
        let tm = exact_transfer(&Matrix3::zeros(), 0.7, kind, DEFAULT_CLUSTER_TOL).unwrap();
        assert!((tm.q - Matrix3::identity()).norm_inf() <= 1e-15);
    }
}

#[test]
fn rotation_keeps_the_unit_circle() {
    let p = Problem::linear(3, 0.0).unwrap();
    for kind in KINDS {
        let tm = exact_transfer(&p.a, 0.1, kind, DEFAULT_CLUSTER_TOL).unwrap();
        for (k, x) in tm.states(p.x0, 10_000) {
            let r = x[0] * x[0] + x[1] * x[1];
            assert!((r - 1.0).abs() <= 1e-11, "{kind} step {k}: {r}");
        }
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let pts: Vec<(f64, f64)> = points.iter().map(|(h, e)| (h.ln(), e.ln())).collect();
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn classical_methods_converge_at_their_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..3 {
        let (p, p_inv) = well_conditioned(&mut rng);
        let a = p
            .matmul(&Matrix3::diag([-0.5, -1.0, -2.0 - case as f64]))
            .matmul(&p_inv);
        let x0 = Vec3::new(1.0, 2.0, -1.0);
        let t_end = 1.0;
        let exact = expm(&a, t_end).unwrap().mul_vec(&x0);
        for m in MethodId::ALL.into_iter().filter(|m| !m.is_exact()) {
            let order = m.order().unwrap() as f64;
            let mut pts = Vec::new();
            for k in 3..=10 {
                let n = 1usize << k;
                let h = t_end / n as f64;
                let tm = baseline_transfer(&a, h, m).unwrap();
                let err = (run(&tm, x0, n).unwrap().states[n] - exact).norm_inf();
                // stop at the rounding floor
                if err < 1e-12 {
                    break;
                }
                pts.push((h, err));
            }
            assert!(pts.len() >= 2, "{m:?}: too few points above the floor");
            let s = slope(&pts);
            assert!(
                (s - order).abs() <= 0.25,
                "{m:?}: slope {s}, expected {order}"
            );
        }
    }
}

#[test]
fn exact_schemes_beat_every_inaccurate_baseline() {
    for table in [3, 4] {
        let records = eds3::run_table(table).unwrap();
        for cell in records.chunks(5) {
            let eds = cell
                .iter()
                .filter(|r| r.method.is_exact())
                .map(|r| r.error)
                .fold(0.0, f64::max);
            // below ~1e-8 the baselines are rounding-dominated like the exact schemes
            for r in cell.iter().filter(|r| !r.method.is_exact()) {
                if !(r.error <= 1e-8) {
                    assert!(
                        r.error.is_nan() || eds < r.error,
                        "table {table}: {:?} vs exact {eds}",
                        r
                    );
                }
            }
        }
    }
}
