//! Reaching `t = 10⁵` in a single exact step, against RK4 with `h = 10⁴`.

use eds3::baselines::baseline_transfer;
use eds3::problems::Problem;
use eds3::scheme::run;
use eds3::{one_shot, MethodId, SchemeKind};

fn main() -> eds3::Result<()> {
    let p = Problem::linear(3, 1e-5).expect("built-in problem");
    let t = 1e5;
    let exact = p.exact(t);
    for kind in [SchemeKind::Implicit, SchemeKind::Explicit] {
        let x = one_shot(&p.a, p.x0, t, kind)?;
        println!("{kind} one step: error {:.3e}", (x - exact).norm1());
    }
    let tm = baseline_transfer(&p.a, 1e4, MethodId::Rk4)?;
    match run(&tm, p.x0, 10) {
        Ok(traj) => println!(
            "rk4, 10 steps: error {:.3e}",
            (traj.states[10] - exact).norm1()
        ),
        Err(e) => println!("rk4, 10 steps: {e}"),
    }
    Ok(())
}
