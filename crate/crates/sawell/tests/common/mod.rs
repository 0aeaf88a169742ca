#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sawell::ExtensionParams;

pub const SEED: u64 = 0x5157_2026;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// `ψ` uniform on `[0, π]`, `m` uniform on the unit 3-sphere.
pub fn random_extension(r: &mut ChaCha8Rng, a: f64) -> ExtensionParams {
    let psi = r.gen_range(0.0..std::f64::consts::PI);
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(r));
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let m = g.map(|x| x / norm);
            return ExtensionParams::new(psi, m, a).expect("unit vector");
        }
    }
}
