//! Best-arm identification with MOSS.

use shapebandit::baseline::moss_top1;
use shapebandit::{rng, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let means = [0.2, 0.5, 0.45, 0.7, 0.65, 0.1];
    let inst = BanditInstance::bernoulli(&means, 0.5, Shape::None)?;
    let mut wins = [0usize; 6];
    for seed in 0..200 {
        let mut env = Environment::new(inst.clone(), seed).with_budget_cap(2_000);
        wins[moss_top1(&mut env, 2_000, &mut rng::stream(seed, rng::TAG_ALGO, 0))? - 1] += 1;
    }
    println!("picked per arm over 200 runs: {wins:?}");
    Ok(())
}
