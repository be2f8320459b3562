//! Rotation in the `(x, y)` plane: how each method treats the invariant
//! `x² + y² = 1` over many steps.

use eds3::baselines::baseline_transfer;
use eds3::problems::Problem;
use eds3::{exact_transfer, MethodId, SchemeKind, DEFAULT_CLUSTER_TOL};

fn main() -> eds3::Result<()> {
    let p = Problem::linear(3, 0.0).expect("built-in problem");
    let (h, n) = (0.1, 10_000);
    for m in [
        MethodId::ExplicitEuler,
        MethodId::ImplicitEuler,
        MethodId::Trapezoidal,
        MethodId::Ieds,
        MethodId::Eeds,
    ] {
        let tm = match m {
            MethodId::Ieds => exact_transfer(&p.a, h, SchemeKind::Implicit, DEFAULT_CLUSTER_TOL)?,
            MethodId::Eeds => exact_transfer(&p.a, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL)?,
            _ => baseline_transfer(&p.a, h, m)?,
        };
        let mut drift = 0.0f64;
        let mut last = 1.0;
        for (_, x) in tm.states(p.x0, n) {
            last = x[0] * x[0] + x[1] * x[1];
            drift = drift.max((last - 1.0).abs());
        }
        println!(
            "{:<15} final radius² {last:<12.6e} max drift {drift:.2e}",
            m.name()
        );
    }
    Ok(())
}
