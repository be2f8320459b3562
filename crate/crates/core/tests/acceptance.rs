//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::{Duration, Instant};

use eds3::baselines::baseline_transfer;
use eds3::bench::{max_gap, run_cell, step_count};
use eds3::nsfd::{euler_integrate, nsfd_integrate, rk4_integrate, test_problem};
use eds3::params::{closed_form, eeds_fallback, ieds_fallback, max_residual, params_for};
use eds3::problems::Problem;
use eds3::verify::{run_suite, VerifyConfig};
use eds3::{
    exact_transfer, one_shot, ErrorMetric, MethodId, SchemeKind, SpectrumClass, DEFAULT_CLUSTER_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [SchemeKind; 2] = [SchemeKind::Implicit, SchemeKind::Explicit];

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn exactness_suite() -> Outcome {
    let report = run_suite(&VerifyConfig::default());
    check(
        report.passed() && report.cases == 600,
        format!(
            "{} matrices, {} runs, {} failures, worst relative error {:.2e}",
            report.cases,
            report.runs,
            report.failures.len(),
            report.worst
        ),
    )
}

fn cell(p: &Problem, m: MethodId, t: f64, h: f64, metric: ErrorMetric) -> f64 {
    run_cell(p, m, t, h, metric)
        .map(|r| r.error)
        .unwrap_or(f64::NAN)
}

fn table3_anchor() -> Outcome {
    let p = Problem::linear(3, 1.0).unwrap();
    let e = |m| cell(&p, m, 1.0, 1.0, ErrorMetric::FinalSum);
    let (rk4, trap, taylor, ieds, eeds) = (
        e(MethodId::Rk4),
        e(MethodId::Trapezoidal),
        e(MethodId::Taylor5),
        e(MethodId::Ieds),
        e(MethodId::Eeds),
    );
    check(
        within(rk4, 0.0195, 5e-4)
            && within(trap, 0.3829, 1e-3)
            && within(taylor, 4.465e-4, 2e-5)
            && ieds <= 1e-12
            && eeds <= 1e-12,
        format!("rk4 {rk4:.4} trapezoidal {trap:.4} taylor5 {taylor:.4e} ieds {ieds:.1e} eeds {eeds:.1e}"),
    )
}

fn table4_anchor() -> Outcome {
    let p = Problem::linear(4, 0.0).unwrap();
    let e = |m| cell(&p, m, 0.1, 0.1, ErrorMetric::MaxSum);
    let (rk4, taylor, radau, ieds, eeds) = (
        e(MethodId::Rk4),
        e(MethodId::Taylor5),
        e(MethodId::RadauIia5),
        e(MethodId::Ieds),
        e(MethodId::Eeds),
    );
    check(
        within(rk4, 291.0, 0.5) && within(taylor, 846.56, 0.5) && within(radau, 0.0517, 1e-3) && ieds <= 1e-12 && eeds <= 1e-12,
        format!("rk4 {rk4:.4} taylor5 {taylor:.4} radau-iia5 {radau:.4} ieds {ieds:.1e} eeds {eeds:.1e}"),
    )
}

fn one_shot_horizon() -> Outcome {
    let p = Problem::linear(3, 1e-5).unwrap();
    let t = 1e5;
    let errs: Vec<f64> = KINDS
        .iter()
        .map(|&k| {
            one_shot(&p.a, p.x0, t, k)
                .map(|x| (x - p.exact(t)).norm1())
                .unwrap_or(f64::NAN)
        })
        .collect();
    let rk4 = cell(&p, MethodId::Rk4, t, 1e4, ErrorMetric::FinalSum);
    let diverged = !rk4.is_finite() || rk4 > 1e100;
    check(
        errs.iter().all(|e| *e <= 1e-12) && diverged,
        format!(
            "ieds {:.2e} eeds {:.2e}; rk4 at h=1e4 {rk4:.3e}",
            errs[0], errs[1]
        ),
    )
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 1e-13)
        .map(|(h, y)| (h.ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

fn limit_sweep() -> Outcome {
    let classes = [
        SpectrumClass::DistinctReal([-2.0, 1.0, 3.0]),
        SpectrumClass::DistinctRealWithZero([-1.0, 2.0]),
        SpectrumClass::ComplexPairPlusReal {
            alpha: -0.5,
            beta: 2.0,
            lambda: 1.5,
        },
        SpectrumClass::DoubleReal {
            repeated: -1.0,
            simple: 2.5,
        },
        SpectrumClass::TripleReal(-1.5),
    ];
    let mut worst_slope = f64::INFINITY;
    let mut problems = Vec::new();
    for kind in KINDS {
        for class in classes {
            let mut psi = Vec::new();
            let mut tails = [Vec::new(), Vec::new()];
            for k in 4..=20 {
                let h = 2f64.powi(-k);
                let Ok(p) = params_for(&class, h, kind) else {
                    problems.push(format!("{} {kind}: no triple at k={k}", class.name()));
                    continue;
                };
                psi.push((h, (p.psi - 1.0).abs()));
                if k >= 8 {
                    tails[0].push((p.phi / h - 1.0).abs());
                    tails[1].push((p.theta - 0.5).abs());
                }
            }
            match loglog_slope(&psi) {
                Some(s) => {
                    worst_slope = worst_slope.min(s);
                    if s < 1.9 {
                        problems.push(format!("{} {kind}: psi slope {s:.3}", class.name()));
                    }
                }
                None if psi.iter().all(|(_, y)| *y <= 1e-13) => {}
                None => problems.push(format!("{} {kind}: psi too noisy", class.name())),
            }
            for t in &tails {
                let monotone = t.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6) + 1e-12);
                if !monotone || *t.last().unwrap_or(&1.0) >= 1e-4 {
                    problems.push(format!("{} {kind}: limit not monotone", class.name()));
                }
            }
        }
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            format!("10 sweeps, smallest psi slope {worst_slope:.3}")
        } else {
            problems.join("; ")
        },
    )
}

fn residual_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_res, mut worst_gap, mut n, mut poles) = (0.0f64, 0.0f64, 0, 0);
    for i in 0..500 {
        let class = common::random_class(&mut rng, i);
        let h: f64 = rng.gen_range(0.01..2.0);
        for kind in KINDS {
            let Ok(p) = params_for(&class, h, kind) else {
                poles += 1;
                continue;
            };
            n += 1;
            worst_res = worst_res.max(max_residual(&p, &class));
            if matches!(
                class,
                SpectrumClass::DoubleReal { .. } | SpectrumClass::TripleReal(_)
            ) {
                continue;
            }
            let (Ok(c), Ok(f)) = (
                closed_form(&class, h, kind),
                match kind {
                    SchemeKind::Implicit => ieds_fallback(class.eigenvalues(), h),
                    SchemeKind::Explicit => eeds_fallback(class.eigenvalues(), h),
                },
            ) else {
                continue;
            };
            for (a, b) in [
                (c.psi, f.psi),
                (c.phi, f.phi),
                (c.phi * c.theta, f.phi * f.theta),
            ] {
                worst_gap = worst_gap.max(common::rel(a, b));
            }
        }
    }
    check(
        worst_res <= 1e-11 && worst_gap <= 1e-10 && n >= 950,
        format!("{n} triples ({poles} draws at poles), worst residual {worst_res:.1e}, closed form vs solve {worst_gap:.1e}"),
    )
}

fn qualitative_baselines() -> Outcome {
    let p = Problem::linear(3, 0.0).unwrap();
    let h = 0.1;
    let radii = |m: MethodId, n: usize| -> Vec<f64> {
        let tm = match m {
            MethodId::Ieds => {
                exact_transfer(&p.a, h, SchemeKind::Implicit, DEFAULT_CLUSTER_TOL).unwrap()
            }
            MethodId::Eeds => {
                exact_transfer(&p.a, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL).unwrap()
            }
            _ => baseline_transfer(&p.a, h, m).unwrap(),
        };
        tm.states(p.x0, n)
            .map(|(_, x)| x[0] * x[0] + x[1] * x[1])
            .collect()
    };
    let ee = radii(MethodId::ExplicitEuler, 1000);
    let ie = radii(MethodId::ImplicitEuler, 1000);
    let tr = radii(MethodId::Trapezoidal, 1000);
    let grows = ee.windows(2).all(|w| w[1] > w[0]);
    let shrinks = ie.windows(2).all(|w| w[1] < w[0]);
    let trap_step = tr
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let eds_drift = [MethodId::Ieds, MethodId::Eeds]
        .iter()
        .flat_map(|&m| radii(m, 10_000))
        .map(|r| (r - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        grows && shrinks && trap_step <= 1e-12 && eds_drift <= 1e-11,
        format!(
            "explicit euler grows: {grows}, implicit euler shrinks: {shrinks}, trapezoidal per-step {trap_step:.1e}, exact schemes over 1e4 steps {eds_drift:.1e}"
        ),
    )
}

fn nsfd_quasilinear() -> Outcome {
    let mut bounded = true;
    let mut decays = true;
    for h in [0.1, 1.0, 2.0, 5.0] {
        let p = test_problem(50.0);
        let n = step_count(50.0, h).unwrap();
        let Ok(traj) = nsfd_integrate(&p, n) else {
            return check(false, format!("nsfd failed at h={h}"));
        };
        let v0 = p.v0.norm2();
        bounded &= traj.states.iter().all(|v| v.norm2() <= 10.0 * v0);
        decays &= traj.states[n].norm2() <= 1e-3 * v0;
    }
    let p = test_problem(50.0);
    let euler = euler_integrate(&p, 25).unwrap();
    let euler_breaks = euler
        .states
        .iter()
        .any(|v| !(v.norm2() <= 10.0 * p.v0.norm2()));

    let t_end = 5.0;
    let p = test_problem(t_end);
    let fine = 1 << 16;
    let reference = rk4_integrate(&p, fine).unwrap();
    let pts: Vec<(f64, f64)> = (4..=9)
        .map(|k| {
            let n = 1usize << k;
            let traj = nsfd_integrate(&p, n).unwrap();
            (
                t_end / n as f64,
                max_gap(&traj.states, &reference.states, fine / n),
            )
        })
        .collect();
    let order = loglog_slope(&pts).unwrap_or(f64::NAN);
    check(
        bounded && decays && euler_breaks && within(order, 1.0, 0.2),
        format!("bounded {bounded}, decays {decays}, euler at h=2 unbounded {euler_breaks}, empirical order {order:.3}"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 exactness suite",
            exactness_suite,
            Duration::from_secs(30),
        ),
        (
            "2 table 3 anchor cells",
            table3_anchor,
            Duration::from_secs(1),
        ),
        (
            "3 table 4 anchor cells",
            table4_anchor,
            Duration::from_secs(1),
        ),
        (
            "4 one-shot long horizon",
            one_shot_horizon,
            Duration::from_secs(1),
        ),
        ("5 small-step limits", limit_sweep, Duration::from_secs(1)),
        (
            "6 condition residuals",
            residual_suite,
            Duration::from_secs(5),
        ),
        (
            "7 qualitative baselines",
            qualitative_baselines,
            Duration::from_secs(2),
        ),
        (
            "8 quasi-linear scheme",
            nsfd_quasilinear,
            Duration::from_secs(10),
        ),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let ok = out.ok && took <= budget;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.3} s of {} s]",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
