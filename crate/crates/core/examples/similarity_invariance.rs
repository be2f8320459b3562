//! Scheme parameters depend only on the eigenvalues: a Jordan matrix and a
//! random similar matrix share them, and `Q_A = P·Q_J·P⁻¹`. For `λI` only
//! `Q` is determined, so the parameters may come from different routes.

use eds3::verify::{well_conditioned, JordanShape};
use eds3::{exact_transfer, SchemeKind, DEFAULT_CLUSTER_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> eds3::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 0.3;
    for shape in JordanShape::ALL {
        let j = shape.sample(&mut rng);
        let (p, p_inv) = well_conditioned(&mut rng);
        let a = p.matmul(&j).matmul(&p_inv);
        let qj = exact_transfer(&j, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL)?;
        let qa = exact_transfer(&a, h, SchemeKind::Explicit, DEFAULT_CLUSTER_TOL)?;
        let mapped = p.matmul(&qj.q).matmul(&p_inv);
        let (pj, pa) = (qj.params.expect("exact"), qa.params.expect("exact"));
        println!(
            "{:<16} |Δpsi| {:.1e} |Δphi| {:.1e}  ‖Q_A − P·Q_J·P⁻¹‖ {:.1e}",
            format!("{shape:?}"),
            (pj.psi - pa.psi).abs(),
            (pj.phi - pa.phi).abs(),
            (qa.q - mapped).norm_inf()
        );
    }
    Ok(())
}
