//! Command-line front end.
//!
//! ```text
//! eds3 solve  --matrix example1 --scheme ieds --T 10 --N 100 [--one-shot] [--out traj.csv]
//! eds3 params --matrix example1 --h 0.1 --kind ieds
//! eds3 bench  --table 4 --out t4.csv
//! eds3 verify --seed 7 --cases 500
//! ```
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{baseline_transfer, MethodId};
use crate::bench;
use crate::error::{Error, Result};
use crate::io::{
    fmt_float, json_float, parse_vec3, resolve_matrix, trajectory_json, write_trajectory_csv,
};
use crate::linalg3::{expm, Vec3};
use crate::params::SchemeKind;
use crate::problems::Problem;
use crate::scheme::{exact_transfer, one_shot_with, run, Trajectory};
use crate::spectrum::{classify, eigenvalues3, DEFAULT_CLUSTER_TOL};
use crate::verify::{run_suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(
    name = "eds3",
    version,
    about = "Exact difference schemes for x' = Ax in three dimensions"
)]
pub struct Cli {
    /// Absolute tolerance (scaled by max(1, |λ|max)) under which eigenvalues merge.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one system and write the trajectory.
    Solve(SolveArgs),
    /// Print the scheme parameters and spectral class.
    Params(ParamsArgs),
    /// Reproduce an error table or run a per-example comparison.
    Bench(BenchArgs),
    /// Run the seeded exactness suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct MatrixArg {
    /// `zero`, `example1` … `example5`, a JSON file `{"rows": [...]}`, or
    /// inline `a11,a12,a13;a21,a22,a23;a31,a32,a33`.
    #[arg(long)]
    pub matrix: String,

    /// Growth rate of the `z` component for `example3`.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub matrix: MatrixArg,

    /// Initial state `a,b,c`; defaults to the built-in problem's state.
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<String>,

    /// `ieds`, `eeds` or a classical method (`rk4`, `taylor5`, `radau-iia5`,
    /// `trapezoidal`, `explicit-euler`, `implicit-euler`).
    #[arg(long, default_value = "ieds")]
    pub scheme: String,

    #[arg(long = "T")]
    pub t_end: f64,

    #[arg(long, conflicts_with = "n")]
    pub h: Option<f64>,

    #[arg(long = "N")]
    pub n: Option<usize>,

    /// Reach every grid time from `x0` in one step of that length.
    #[arg(long)]
    pub one_shot: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub matrix: MatrixArg,

    #[arg(long)]
    pub h: f64,

    #[arg(long, value_enum, default_value_t = KindArg::Ieds)]
    pub kind: KindArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ieds,
    Eeds,
}

impl From<KindArg> for SchemeKind {
    fn from(k: KindArg) -> SchemeKind {
        match k {
            KindArg::Ieds => SchemeKind::Implicit,
            KindArg::Eeds => SchemeKind::Explicit,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BenchTarget {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
    pub table: Option<u8>,

    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub example: Option<u8>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub target: BenchTarget,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random matrices; a fifth as many Jordan constructions are added.
    #[arg(long, default_value_t = 500)]
    pub cases: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn cli_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse(_) | Error::GridMismatch { .. } => 2,
        _ => 1,
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    if !(cli.cluster_tol > 0.0) {
        return Err(Error::InvalidInput("--cluster-tol must be positive".into()));
    }
    match &cli.command {
        Command::Solve(a) => solve(cli, a, stdout).map(|_| 0),
        Command::Params(a) => params(cli, a, stdout).map(|_| 0),
        Command::Bench(a) => bench_cmd(cli, a, stdout).map(|_| 0),
        Command::Verify(a) => verify(a, stdout),
    }
}

fn with_output<F>(out: &Option<PathBuf>, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(path, e))
        }
        None => f(stdout).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn builtin_problem(name: &str, lambda: f64) -> Option<Problem> {
    let id = name.strip_prefix("example")?.parse::<u8>().ok()?;
    Problem::linear(id, lambda)
}

fn default_x0(name: &str) -> Option<Vec3> {
    if name == "example5" {
        return Some(Vec3::new(1.0, 1.0, 1.0));
    }
    builtin_problem(name, 1.0).map(|p| p.x0)
}

fn solve(cli: &Cli, args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = resolve_matrix(&args.matrix.matrix, args.matrix.lambda)?;
    let x0 = match &args.x0 {
        Some(s) => parse_vec3(s)?,
        None => default_x0(args.matrix.matrix.trim())
            .ok_or_else(|| Error::InvalidInput("--x0 is required for this matrix".into()))?,
    };
    let method: MethodId = args
        .scheme
        .parse()
        .map_err(|_| Error::InvalidInput(format!("unknown scheme '{}'", args.scheme)))?;
    let n = match (args.h, args.n) {
        (Some(h), None) => bench::step_count(args.t_end, h)?,
        (None, Some(n)) if n >= 1 => n,
        (None, Some(_)) => return Err(Error::InvalidInput("--N must be at least 1".into())),
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --h and --N".into(),
            ))
        }
    };
    let h = crate::scheme::grid_step(args.t_end, n)?;

    let traj = if args.one_shot {
        let kind = match method {
            MethodId::Ieds => SchemeKind::Implicit,
            MethodId::Eeds => SchemeKind::Explicit,
            _ => {
                return Err(Error::InvalidInput(
                    "--one-shot needs --scheme ieds or eeds".into(),
                ))
            }
        };
        let mut times = vec![0.0];
        let mut states = vec![x0];
        for k in 1..=n {
            let t = k as f64 * h;
            times.push(t);
            states.push(one_shot_with(&a, x0, t, kind, cli.cluster_tol)?);
        }
        Trajectory { times, states }
    } else {
        let tm = match method {
            MethodId::Ieds => exact_transfer(&a, h, SchemeKind::Implicit, cli.cluster_tol)?,
            MethodId::Eeds => exact_transfer(&a, h, SchemeKind::Explicit, cli.cluster_tol)?,
            m => baseline_transfer(&a, h, m)?,
        };
        run(&tm, x0, n)?
    };

    // closed-form reference where one exists, the expm oracle otherwise
    let analytic =
        builtin_problem(args.matrix.matrix.trim(), args.matrix.lambda).filter(|p| p.x0 == x0);
    let err: Vec<f64> = traj
        .iter()
        .map(|(t, x)| match &analytic {
            Some(p) => (*x - p.exact(t)).norm1(),
            None => expm(&a, t)
                .map(|e| (*x - e.mul_vec(&x0)).norm1())
                .unwrap_or(f64::NAN),
        })
        .collect();
    with_output(&args.out, stdout, |w| match cli.format {
        Format::Csv => write_trajectory_csv(w, &traj, &err),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &trajectory_json(&traj, &err))?;
            writeln!(w)
        }
    })
}

fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        fmt_float(x)
    }
}

fn params(cli: &Cli, args: &ParamsArgs, stdout: &mut dyn Write) -> Result<()> {
    let a = resolve_matrix(&args.matrix.matrix, args.matrix.lambda)?;
    if !(args.h > 0.0 && args.h.is_finite()) {
        return Err(Error::InvalidInput("--h must be positive".into()));
    }
    let kind: SchemeKind = args.kind.into();
    let spectrum = eigenvalues3(&a);
    let classification = classify(&spectrum, cli.cluster_tol);
    let tm = exact_transfer(&a, args.h, kind, cli.cluster_tol)?;
    let p = tm.params.expect("exact schemes carry parameters");
    let class = tm.class.unwrap_or(classification.class);
    let eig: Vec<String> = spectrum.eigenvalues.iter().map(|z| z.to_string()).collect();
    let kind_name = match kind {
        SchemeKind::Implicit => "ieds",
        SchemeKind::Explicit => "eeds",
    };
    let route = format!("{:?}", p.route);
    let out = match cli.format {
        Format::Csv => format!(
            "kind,class,h,psi,phi,theta,route\n{kind_name},{},{},{},{},{},{route}\n",
            class.name(),
            fmt_float(p.h),
            sci(p.psi),
            sci(p.phi),
            sci(p.theta),
        ),
        Format::Json => {
            let v = serde_json::json!({
                "kind": kind_name,
                "class": class.name(),
                "eigenvalues": eig,
                "ambiguous": classification.ambiguous,
                "h": json_float(p.h),
                "psi": json_float(p.psi),
                "phi": json_float(p.phi),
                "theta": json_float(p.theta),
                "route": route,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    if classification.ambiguous {
        eprintln!("warning: eigenvalue clustering is order-dependent; merged all three");
    }
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn bench_cmd(cli: &Cli, args: &BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let records = match (args.target.table, args.target.example) {
        (Some(t), _) => bench::run_table(t)?,
        (None, Some(e)) => bench::example_bench(e)?,
        (None, None) => return Err(Error::InvalidInput("give --table or --example".into())),
    };
    with_output(&args.out, stdout, |w| match cli.format {
        Format::Csv => bench::write_csv(w, &records),
        Format::Json => bench::write_json(w, &records),
    })
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = VerifyConfig {
        seed: args.seed,
        random_cases: args.cases,
        jordan_cases: args.cases.div_ceil(5),
        ..Default::default()
    };
    let report = run_suite(&cfg);
    let io = |e| Error::io("<stdout>", e);
    writeln!(
        stdout,
        "cases={} runs={} failures={} worst_relative_error={}",
        report.cases,
        report.runs,
        report.failures.len(),
        fmt_float(report.worst)
    )
    .map_err(io)?;
    for f in &report.failures {
        writeln!(
            stdout,
            "FAIL {} {} h={} {}",
            f.label,
            f.kind,
            fmt_float(f.h),
            f.detail
        )
        .map_err(io)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}
