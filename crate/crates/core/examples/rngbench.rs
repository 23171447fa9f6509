use rand::{Rng, SeedableRng, rngs::SmallRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use std::time::Instant;
fn main() {
    let mut c = ChaCha8Rng::seed_from_u64(1);
    let n = 100_000_000u64;
    let t0 = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n { let e: f64 = Exp1.sample(&mut c); acc += e; let u: f64 = c.random(); acc += u; }
    println!("chacha8 exp+unif: {:.1}ns/pair acc {}", t0.elapsed().as_nanos() as f64 / n as f64, acc);
    let mut s = SmallRng::seed_from_u64(1);
    let t0 = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n { let e: f64 = Exp1.sample(&mut s); acc += e; let u: f64 = s.random(); acc += u; }
    println!("smallrng exp+unif: {:.1}ns/pair acc {}", t0.elapsed().as_nanos() as f64 / n as f64, acc);
}
