//! A singular matrix with a double zero eigenvalue: the repeated-root
//! parameter formulas, and the same matrix perturbed so the roots split.

use eds3::problems::{example2, Problem};
use eds3::{exact_transfer, expm, integrate, SchemeKind, DEFAULT_CLUSTER_TOL};

fn main() -> eds3::Result<()> {
    let p = Problem::linear(2, 0.0).expect("built-in problem");
    let traj = integrate(&p.a, p.x0, 5.0, 10, SchemeKind::Explicit)?;
    for (t, x) in traj.iter().step_by(2) {
        println!("t = {t:4}  error = {:.2e}", (*x - p.exact(t)).norm1());
    }

    // a tiny perturbation splits the double eigenvalue; the scheme stays exact
    for eps in [0.0, 1e-10, 1e-6, 1e-3] {
        let mut a = example2();
        a.0[0][0] += eps;
        let h = 0.5;
        let tm = exact_transfer(&a, h, SchemeKind::Implicit, DEFAULT_CLUSTER_TOL)?;
        let dev = (tm.q - expm(&a, h)?).norm_inf();
        let class = tm.class.map(|c| c.name()).unwrap_or("confluent");
        println!("eps = {eps:7.0e}  {class:<22} ‖Q − e^(Ah)‖ = {dev:.2e}");
    }
    Ok(())
}
