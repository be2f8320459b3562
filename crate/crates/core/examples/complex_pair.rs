//! A system whose matrix has eigenvalues −1 and ±i, integrated with both
//! exact schemes at a coarse step.

use eds3::problems::Problem;
use eds3::{classify, eigenvalues3, integrate, SchemeKind, DEFAULT_CLUSTER_TOL};

fn main() -> eds3::Result<()> {
    let p = Problem::linear(1, 0.0).expect("built-in problem");
    let class = classify(&eigenvalues3(&p.a), DEFAULT_CLUSTER_TOL).class;
    println!("spectrum: {class:?}");

    let (t_end, n) = (20.0, 40);
    for kind in [SchemeKind::Implicit, SchemeKind::Explicit] {
        let traj = integrate(&p.a, p.x0, t_end, n, kind)?;
        let worst = traj
            .iter()
            .map(|(t, x)| (*x - p.exact(t)).norm1() / p.exact(t).norm1().max(1.0))
            .fold(0.0, f64::max);
        let (t, x) = traj.last().expect("non-empty");
        println!(
            "{kind}: x({t}) = [{:.6}, {:.6}, {:.6}], worst relative error {worst:.2e}",
            x[0], x[1], x[2]
        );
    }
    Ok(())
}
