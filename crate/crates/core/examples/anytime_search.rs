//! Monotone search without a known budget: restart with doubled budgets
//! until the environment runs out.

use shapebandit::mtb::mtb_anytime;
use shapebandit::{rng, simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let means: Vec<f64> = (1..=100).map(|j| j as f64 / 100.0).collect();
    let inst = BanditInstance::gaussian(&means, 1.0, 0.615, Shape::Monotone)?;

    for cap in [1_000, 10_000, 100_000, 1_000_000] {
        let mut env = Environment::new(inst.clone(), 3).with_budget_cap(cap);
        let out = mtb_anytime(&mut env, inst.tau(), 1.0, &mut rng::stream(3, rng::TAG_ALGO, 0))?;
        println!(
            "cap {cap:>8}: {} runs, last budget {:>7}, khat {:3}, regret {:.3}",
            out.completed_runs,
            out.last_budget,
            out.khat,
            simple_regret(&inst, &out.qhat)?
        );
    }
    Ok(())
}
