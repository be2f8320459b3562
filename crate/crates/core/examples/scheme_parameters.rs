//! The parameters `(ψ, φ, θ)` for each spectral class, and their
//! small-step limits `ψ → 1`, `φ/h → 1`, `θ → 1/2`.

use eds3::params::{max_residual, params_for};
use eds3::{SchemeKind, SpectrumClass};

fn main() {
    let classes = [
        SpectrumClass::DistinctReal([-1.0, 0.5, 2.0]),
        SpectrumClass::DistinctRealWithZero([-1.0, 2.0]),
        SpectrumClass::ComplexPairPlusReal {
            alpha: -0.5,
            beta: 1.0,
            lambda: 2.0,
        },
        SpectrumClass::DoubleReal {
            repeated: -1.0,
            simple: 3.0,
        },
        SpectrumClass::TripleReal(-3.0),
    ];
    for kind in [SchemeKind::Implicit, SchemeKind::Explicit] {
        for c in &classes {
            println!("{kind} {}", c.name());
            for h in [1.0, 0.1, 0.01, 0.001] {
                let p = match params_for(c, h, kind) {
                    Ok(p) => p,
                    Err(e) => {
                        println!("  h = {h:<6} {e}");
                        continue;
                    }
                };
                println!(
                    "  h = {h:<6} psi−1 = {:+.3e}  phi/h−1 = {:+.3e}  theta = {:.6}  residual {:.1e}",
                    p.psi - 1.0,
                    p.phi / h - 1.0,
                    p.theta,
                    max_residual(&p, c)
                );
            }
        }
    }
}
