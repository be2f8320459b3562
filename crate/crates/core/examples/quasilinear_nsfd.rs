//! `v' = Av + e^{−t}·sin(v)/(1 + t²)` with the exact linear step plus a
//! scaled forward step for the nonlinearity, against explicit Euler.

use eds3::nsfd::{euler_integrate, nsfd_integrate, rk4_integrate, test_problem};

fn main() -> eds3::Result<()> {
    let t_end = 50.0;
    let p = test_problem(t_end);
    let reference = rk4_integrate(&p, 50_000)?;
    let v0 = p.v0.norm2();
    println!(
        "{:>5} {:>12} {:>12} {:>12}",
        "h", "nsfd max|v|", "nsfd error", "euler max|v|"
    );
    for h in [0.1, 1.0, 2.0, 5.0] {
        let n = (t_end / h) as usize;
        let ours = nsfd_integrate(&p, n)?;
        let euler = euler_integrate(&p, n)?;
        let stride = 50_000 / n;
        let err = eds3::bench::max_gap(&ours.states, &reference.states, stride);
        let peak = |s: &[eds3::Vec3]| s.iter().map(|v| v.norm2()).fold(0.0, f64::max) / v0;
        println!(
            "{h:>5} {:>12.4} {err:>12.3e} {:>12.3e}",
            peak(&ours.states),
            peak(&euler.states)
        );
    }
    Ok(())
}
