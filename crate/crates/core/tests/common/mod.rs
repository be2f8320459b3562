#![allow(dead_code)]

use eds3::SpectrumClass;
use rand::Rng;

/// Nonzero value in `[−3, 3]` at least `gap` away from every entry of `avoid`.
pub fn pick<R: Rng>(rng: &mut R, avoid: &[f64], gap: f64) -> f64 {
    loop {
        let v: f64 = rng.gen_range(-3.0..3.0);
        if v.abs() > gap && avoid.iter().all(|a| (v - a).abs() > gap) {
            return v;
        }
    }
}

/// A random spectral class, cycling through the five cases by `i`.
pub fn random_class<R: Rng>(rng: &mut R, i: usize) -> SpectrumClass {
    let gap = 0.1;
    match i % 5 {
        0 => {
            let a = pick(rng, &[], gap);
            let b = pick(rng, &[a], gap);
            let c = pick(rng, &[a, b], gap);
            let mut l = [a, b, c];
            l.sort_by(f64::total_cmp);
            SpectrumClass::DistinctReal(l)
        }
        1 => {
            let a = pick(rng, &[], gap);
            let b = pick(rng, &[a], gap);
            SpectrumClass::DistinctRealWithZero([a, b])
        }
        2 => SpectrumClass::ComplexPairPlusReal {
            alpha: rng.gen_range(-3.0..3.0),
            beta: rng.gen_range(0.1..3.0),
            lambda: rng.gen_range(-3.0..3.0),
        },
        3 => {
            let a = pick(rng, &[], gap);
            SpectrumClass::DoubleReal {
                repeated: a,
                simple: pick(rng, &[a], gap),
            }
        }
        _ => SpectrumClass::TripleReal(pick(rng, &[], gap)),
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
