//! Text formats: floats, matrices, trajectories.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg3::{Matrix3, Vec3};
use crate::problems;
use crate::scheme::Trajectory;

/// Shortest decimal that parses back to the same `f64`.
///
/// Plain notation for `1e-5 ≤ |x| < 1e16`, scientific otherwise;
/// `inf`, `-inf` and `nan` for non-finite values.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn parse_float(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: '{t}'")))
}

/// JSON value for a float; non-finite values become strings.
pub fn json_float(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::String(fmt_float(x))
    }
}

/// `"a,b,c"` → `Vec3`.
pub fn parse_vec3(s: &str) -> Result<Vec3> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three comma-separated values, got '{s}'"
        )));
    }
    let v = Vec3::new(
        parse_float(parts[0])?,
        parse_float(parts[1])?,
        parse_float(parts[2])?,
    );
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!(
            "vector '{s}' has non-finite entries"
        )));
    }
    Ok(v)
}

/// Row-major inline matrix `a11,a12,a13;a21,a22,a23;a31,a32,a33`.
pub fn parse_inline_matrix(s: &str) -> Result<Matrix3> {
    let rows: Vec<&str> = s.trim().split(';').collect();
    if rows.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three ';'-separated rows, got '{s}'"
        )));
    }
    let mut m = [[0.0; 3]; 3];
    for (i, r) in rows.iter().enumerate() {
        m[i] = parse_vec3(r)?.0;
    }
    Ok(Matrix3::from_rows(m))
}

#[derive(serde::Deserialize, serde::Serialize)]
struct MatrixFile {
    rows: Vec<Vec<f64>>,
}

/// JSON `{"rows": [[..], [..], [..]]}`.
pub fn parse_json_matrix(text: &str) -> Result<Matrix3> {
    let f: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    if f.rows.len() != 3 || f.rows.iter().any(|r| r.len() != 3) {
        return Err(Error::Parse(
            "matrix JSON must hold three rows of three numbers".into(),
        ));
    }
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = f.rows[i][j];
        }
    }
    Ok(Matrix3::from_rows(m))
}

pub fn matrix_to_json(a: &Matrix3) -> String {
    let f = MatrixFile {
        rows: a.0.iter().map(|r| r.to_vec()).collect(),
    };
    serde_json::to_string(&f).expect("finite matrix serializes")
}

/// Resolves a matrix argument: a built-in name (`zero`, `example1` …
/// `example5`; `example3` uses `lambda`), a JSON file, or an inline matrix.
pub fn resolve_matrix(arg: &str, lambda: f64) -> Result<Matrix3> {
    let a = match arg.trim() {
        "zero" => Matrix3::zeros(),
        "example1" => problems::example1(),
        "example2" => problems::example2(),
        "example3" => problems::example3(lambda),
        "example4" => problems::example4(),
        "example5" => problems::example5(),
        other if Path::new(other).is_file() => {
            let text = fs::read_to_string(other).map_err(|e| Error::io(other, e))?;
            parse_json_matrix(&text)?
        }
        other => parse_inline_matrix(other)?,
    };
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(a)
}

pub const TRAJECTORY_HEADER: &str = "t,x1,x2,x3,err";

/// Writes `t,x1,x2,x3,err` rows; `err[k]` is the 1-norm deviation from a
/// reference solution.
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    traj: &Trajectory,
    err: &[f64],
) -> std::io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for (k, (t, x)) in traj.iter().enumerate() {
        let e = err.get(k).copied().unwrap_or(f64::NAN);
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_float(t),
            fmt_float(x[0]),
            fmt_float(x[1]),
            fmt_float(x[2]),
            fmt_float(e)
        )?;
    }
    Ok(())
}

pub fn trajectory_json(traj: &Trajectory, err: &[f64]) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = traj
        .iter()
        .enumerate()
        .map(|(k, (t, x))| {
            serde_json::json!({
                "t": json_float(t),
                "x1": json_float(x[0]),
                "x2": json_float(x[1]),
                "x3": json_float(x[2]),
                "err": json_float(err.get(k).copied().unwrap_or(f64::NAN)),
            })
        })
        .collect();
    serde_json::Value::Array(rows)
}

/// Reads a file written by [`write_trajectory_csv`].
pub fn read_trajectory_csv<R: BufRead>(r: R) -> Result<(Trajectory, Vec<f64>)> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trajectory file".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    if header.trim() != TRAJECTORY_HEADER {
        return Err(Error::Parse(format!("unexpected header '{header}'")));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut err = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(Error::Parse(format!("line {}: expected 5 fields", i + 2)));
        }
        times.push(parse_float(f[0])?);
        states.push(Vec3::new(
            parse_float(f[1])?,
            parse_float(f[2])?,
            parse_float(f[3])?,
        ));
        err.push(parse_float(f[4])?);
    }
    Ok((Trajectory { times, states }, err))
}
