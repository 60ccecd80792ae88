//! Seeded random generator sets for slope sweeps.

use ekcells::bigraded::{Generator, GeneratorList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` lists `sigma:(1,0)` plus one to three generators with `d >= n - 1` and `d >= 1`.
pub fn random_generator_sets(seed: u64, count: u32) -> Vec<GeneratorList> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let extra = rng.gen_range(1..=3);
            let mut gens = vec![Generator::new("sigma", 1, 0)];
            for i in 0..extra {
                let n = rng.gen_range(1..=4u32);
                let lo = n.saturating_sub(1).max(1);
                let d = rng.gen_range(lo..=lo + 2);
                gens.push(Generator::new(format!("x{i}"), n, d));
            }
            GeneratorList::new(gens).expect("names are distinct")
        })
        .collect()
}
