//! Monotone search on a decreasing sequence.

use shapebandit::mtb::{mtb_run, MtbConfig};
use shapebandit::{rng, simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let means: Vec<f64> = (0..64).map(|j| 1.0 - j as f64 / 63.0).collect();
    let inst = BanditInstance::bernoulli(&means, 0.35, Shape::None)?;
    let budget = 8_000;

    for seed in 0..5 {
        let mut env = Environment::new(inst.clone(), seed).with_budget_cap(budget);
        let config = MtbConfig::new(inst.tau(), budget, 1.0).decreasing();
        let out = mtb_run(&mut env, &config, &mut rng::stream(seed, rng::TAG_ALGO, 0))?;
        println!("seed {seed}: last arm above = {:2}, regret {:.3}", out.khat, simple_regret(&inst, &out.qhat)?);
    }
    Ok(())
}
