//! Error tables comparing the exact schemes with classical integrators.
//!
//! Each cell integrates one built-in problem with one method and one step,
//! streaming the states so that runs of `10^7` steps need no storage, and
//! measures the deviation from the closed-form solution.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{baseline_transfer, MethodId};
use crate::error::{Error, Result};
use crate::io::{fmt_float, json_float};
use crate::linalg3::Vec3;
use crate::nsfd::{self, QuasiLinearProblem};
use crate::problems::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ErrorMetric {
    /// `Σ_i |x_N,i − x_i(T)|` at the final time.
    FinalSum,
    /// `max_k Σ_i |x_k,i − x_i(t_k)|` over the whole grid.
    MaxSum,
}

/// One table cell. `error` is `inf` or `nan` for diverged runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub method: MethodId,
    pub t_end: f64,
    pub lambda: f64,
    pub h: f64,
    pub error: f64,
    pub wall_time: f64,
}

impl BenchRecord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.method.name(),
            "T": json_float(self.t_end),
            "lambda": json_float(self.lambda),
            "h": json_float(self.h),
            "error": json_float(self.error),
            "wall_time": json_float(self.wall_time),
        })
    }
}

pub const BENCH_HEADER: &str = "method,T,lambda,h,error,wall_time";

pub fn write_csv<W: Write>(mut w: W, records: &[BenchRecord]) -> std::io::Result<()> {
    writeln!(w, "{BENCH_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.method,
            fmt_float(r.t_end),
            fmt_float(r.lambda),
            fmt_float(r.h),
            fmt_float(r.error),
            fmt_float(r.wall_time)
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, records: &[BenchRecord]) -> std::io::Result<()> {
    let v = serde_json::Value::Array(records.iter().map(BenchRecord::to_json).collect());
    serde_json::to_writer_pretty(&mut w, &v)?;
    writeln!(w)
}

/// Number of steps `N = T/h`, required to be a positive integer to within
/// `1e-9` relative.
pub fn step_count(t_end: f64, h: f64) -> Result<usize> {
    let ratio = t_end / h;
    let n = ratio.round();
    if !(h > 0.0 && t_end > 0.0) || n < 1.0 || (ratio - n).abs() > 1e-9 * n {
        return Err(Error::GridMismatch { t_end, h, ratio });
    }
    Ok(n as usize)
}

fn deviation(x: &Vec3, exact: &Vec3) -> f64 {
    (0..3).map(|i| (x[i] - exact[i]).abs()).sum()
}

/// Integrates `problem` with `method` at step `h` up to `T` and measures
/// `metric` against the closed-form solution.
pub fn run_cell(
    problem: &Problem,
    method: MethodId,
    t_end: f64,
    h: f64,
    metric: ErrorMetric,
) -> Result<BenchRecord> {
    let n = step_count(t_end, h)?;
    let start = Instant::now();
    let error = match baseline_transfer(&problem.a, h, method) {
        Err(_) => f64::NAN,
        Ok(tm) => match metric {
            ErrorMetric::FinalSum => {
                let mut x = problem.x0;
                for _ in 0..n {
                    x = tm.step(&x);
                    if x[0].is_nan() && x[1].is_nan() && x[2].is_nan() {
                        break;
                    }
                }
                deviation(&x, &problem.exact(t_end))
            }
            ErrorMetric::MaxSum => {
                let mut worst = 0.0f64;
                for (k, x) in tm.states(problem.x0, n) {
                    let e = deviation(&x, &problem.exact(k as f64 * h));
                    if e.is_nan() {
                        worst = f64::NAN;
                        break;
                    }
                    worst = worst.max(e);
                }
                worst
            }
        },
    };
    Ok(BenchRecord {
        method,
        t_end,
        lambda: problem.lambda,
        h,
        error,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// One row of a table: final time, problem knob and step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub t_end: f64,
    pub lambda: f64,
    pub h: f64,
}

/// Grid, problem and methods of one of the two error tables.
#[derive(Clone, Debug)]
pub struct TableSpec {
    pub id: u8,
    pub problem: u8,
    pub metric: ErrorMetric,
    pub methods: Vec<MethodId>,
    pub rows: Vec<TableRow>,
}

fn decades(lo: i32, hi: i32) -> impl Iterator<Item = f64> {
    (lo..=hi).map(|e| 10f64.powi(e))
}

/// Table 3: the rotation-plus-growth problem with `λ = 1/T`, final-time
/// error. Table 4: the stiff diagonal problem, maximum error over the grid.
pub fn table_spec(id: u8) -> Result<TableSpec> {
    match id {
        3 => {
            let blocks = [(0, -5), (1, -5), (2, -4), (3, -4), (4, -3), (5, -2)];
            let rows = blocks
                .iter()
                .flat_map(|&(e, lo)| {
                    let t = 10f64.powi(e);
                    decades(lo, e).map(move |h| TableRow {
                        t_end: t,
                        lambda: 1.0 / t,
                        h,
                    })
                })
                .collect();
            Ok(TableSpec {
                id,
                problem: 3,
                metric: ErrorMetric::FinalSum,
                methods: vec![
                    MethodId::Ieds,
                    MethodId::Eeds,
                    MethodId::Rk4,
                    MethodId::Taylor5,
                    MethodId::Trapezoidal,
                ],
                rows,
            })
        }
        4 => {
            let blocks = [(-3, -6), (-2, -6), (-1, -6), (0, -5)];
            let rows = blocks
                .iter()
                .flat_map(|&(e, lo)| {
                    let t = 10f64.powi(e);
                    decades(lo, e).map(move |h| TableRow {
                        t_end: t,
                        lambda: 0.0,
                        h,
                    })
                })
                .collect();
            Ok(TableSpec {
                id,
                problem: 4,
                metric: ErrorMetric::MaxSum,
                methods: vec![
                    MethodId::Ieds,
                    MethodId::Eeds,
                    MethodId::Rk4,
                    MethodId::Taylor5,
                    MethodId::RadauIia5,
                ],
                rows,
            })
        }
        _ => Err(Error::InvalidInput(format!(
            "no table {id}; tables are 3 and 4"
        ))),
    }
}

/// Every cell of a table, rows in table order and methods in column order.
/// Cells run in parallel; the output order does not depend on scheduling.
pub fn run_table(id: u8) -> Result<Vec<BenchRecord>> {
    let spec = table_spec(id)?;
    let cells: Vec<(TableRow, MethodId)> = spec
        .rows
        .iter()
        .flat_map(|r| spec.methods.iter().map(move |m| (*r, *m)))
        .collect();
    cells
        .par_iter()
        .map(|(row, m)| {
            let p = Problem::linear(spec.problem, row.lambda).expect("registered problem");
            run_cell(&p, *m, row.t_end, row.h, spec.metric)
        })
        .collect()
}

/// Small comparison grid for a single built-in problem.
///
/// Examples 1 to 4: every method, steps `10^-3 … 1` not exceeding `T`,
/// maximum error against the closed form. Example 5 (quasi-linear): the
/// combined scheme (reported as `eeds`), forward Euler and RK4 on the full
/// right-hand side, maximum error against an RK4 run at `h = 10^-3`.
pub fn example_bench(id: u8) -> Result<Vec<BenchRecord>> {
    if id == 5 {
        return quasilinear_bench();
    }
    let (t_end, lambda) = match id {
        1 | 2 => (10.0, 0.0),
        3 => (1.0, 1.0),
        4 => (1.0, 0.0),
        _ => {
            return Err(Error::InvalidInput(format!(
                "no example {id}; examples are 1 to 5"
            )))
        }
    };
    let p = Problem::linear(id, lambda).expect("registered problem");
    let cells: Vec<(f64, MethodId)> = decades(-3, 0)
        .filter(|&h| h <= t_end)
        .flat_map(|h| MethodId::ALL.into_iter().map(move |m| (h, m)))
        .collect();
    cells
        .par_iter()
        .map(|&(h, m)| run_cell(&p, m, t_end, h, ErrorMetric::MaxSum))
        .collect()
}

const QUASI_T: f64 = 50.0;
const QUASI_REF_H: f64 = 1e-3;

fn quasilinear_bench() -> Result<Vec<BenchRecord>> {
    let p = nsfd::test_problem(QUASI_T);
    let reference = nsfd::rk4_integrate(&p, step_count(QUASI_T, QUASI_REF_H)?)?;
    let mut out = Vec::new();
    for h in [0.1, 1.0, 2.0, 5.0] {
        let n = step_count(QUASI_T, h)?;
        let stride = step_count(h, QUASI_REF_H)?;
        for m in [MethodId::Eeds, MethodId::ExplicitEuler, MethodId::Rk4] {
            let start = Instant::now();
            let traj = match m {
                MethodId::Eeds => nsfd::nsfd_integrate(&p, n),
                MethodId::ExplicitEuler => nsfd::euler_integrate(&p, n),
                _ => nsfd::rk4_integrate(&p, n),
            };
            let error = match traj {
                Ok(t) => max_gap(&t.states, &reference.states, stride),
                Err(_) => f64::INFINITY,
            };
            out.push(BenchRecord {
                method: m,
                t_end: QUASI_T,
                lambda: 0.0,
                h,
                error,
                wall_time: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(out)
}

/// `max_k ‖x_k − ref_{k·stride}‖_1`, NaN-propagating.
pub fn max_gap(states: &[Vec3], reference: &[Vec3], stride: usize) -> f64 {
    let mut worst = 0.0f64;
    for (k, x) in states.iter().enumerate() {
        let e = deviation(x, &reference[k * stride]);
        if e.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(e);
    }
    worst
}

/// Quasi-linear problem accessor for callers that want to run their own
/// comparisons.
pub fn quasilinear_problem() -> QuasiLinearProblem<fn(f64, &Vec3) -> Vec3> {
    nsfd::test_problem(QUASI_T)
}
