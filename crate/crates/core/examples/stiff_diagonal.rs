//! A stiff diagonal system (eigenvalues −1, −2, −100) with steps far beyond
//! the stability limit of explicit Runge–Kutta methods.

use eds3::baselines::baseline_transfer;
use eds3::problems::Problem;
use eds3::scheme::run;
use eds3::{exact_transfer, MethodId, SchemeKind, DEFAULT_CLUSTER_TOL};

fn main() -> eds3::Result<()> {
    let p = Problem::linear(4, 0.0).expect("built-in problem");
    let t_end: f64 = 1.0;
    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "h", "ieds", "rk4", "radau-iia5"
    );
    for h in [0.01, 0.05, 0.1, 0.5] {
        let n = (t_end / h).round() as usize;
        let mut row = Vec::new();
        for m in [MethodId::Ieds, MethodId::Rk4, MethodId::RadauIia5] {
            let tm = match m {
                MethodId::Ieds => {
                    exact_transfer(&p.a, h, SchemeKind::Implicit, DEFAULT_CLUSTER_TOL)?
                }
                _ => baseline_transfer(&p.a, h, m)?,
            };
            let err = match run(&tm, p.x0, n) {
                Ok(traj) => traj
                    .iter()
                    .map(|(t, x)| (*x - p.exact(t)).norm1())
                    .fold(0.0, f64::max),
                Err(_) => f64::INFINITY,
            };
            row.push(err);
        }
        println!(
            "{h:>6} {:>14.3e} {:>14.3e} {:>14.3e}",
            row[0], row[1], row[2]
        );
    }
    Ok(())
}
