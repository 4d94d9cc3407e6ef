//! Many surfaces in parallel. Each job gets its own seed so results do not
//! depend on scheduling.

use std::time::Instant;

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::numerics::BigComplex;
use cubic_pfaffian::pipeline::{represent, Options};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let surfaces: Vec<CubicSurface> = (0..n)
        .map(|_| loop {
            let theta = std::array::from_fn(|_| BigComplex::from_parts_i64(256, rng.random_range(-9..=9), rng.random_range(-9..=9)));
            if let Ok(c) = CubicSurface::from_theta(theta) {
                break c;
            }
        })
        .collect();

    let start = Instant::now();
    let results: Vec<_> = surfaces
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let t = Instant::now();
            let opts = Options { seed: i as u64, ..Options::default() };
            (represent(c, &opts), t.elapsed())
        })
        .collect();

    let mut passed = 0;
    for (i, (r, dt)) in results.iter().enumerate() {
        match r {
            Ok(r) => {
                passed += r.certificate.pass as usize;
                println!("{i:3} {:12} {:>8.1?} worst {:.1e}", r.rep.branch.as_str(), dt, r.certificate.max_residual().to_f64());
            }
            Err(e) => println!("{i:3} failed: {e}"),
        }
    }
    println!("{passed}/{n} certified in {:.2?}", start.elapsed());
}
