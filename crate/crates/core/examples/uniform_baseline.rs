//! Classify every arm from an equal share of the budget.

use shapebandit::baseline::uniform_run;
use shapebandit::{simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let means = [0.15, 0.62, 0.48, 0.9, 0.3, 0.55];
    let inst = BanditInstance::bernoulli(&means, 0.5, Shape::None)?;
    let budget = 600;

    let mut env = Environment::new(inst.clone(), 7).with_budget_cap(budget);
    let qhat = uniform_run(&mut env, inst.tau(), budget)?;

    println!("labels  {:?}", qhat.labels());
    println!("pulls   {:?}", env.per_arm_counts());
    println!("regret  {:.3}", simple_regret(&inst, &qhat)?);
    Ok(())
}
