//! Level set of a single-peaked sequence.

use shapebandit::utb::utb_run;
use shapebandit::{rng, simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let k = 120;
    let means: Vec<f64> = (1..=k).map(|j| (-((j as f64 - 70.0) / 25.0).powi(2)).exp()).collect();
    let inst = BanditInstance::gaussian(&means, 0.5, 0.6, Shape::Unimodal)?;
    let budget = 200_000;

    let mut env = Environment::new(inst.clone(), 5).with_budget_cap(budget);
    let out = utb_run(&mut env, inst.tau(), budget, &mut rng::stream(5, rng::TAG_ALGO, 0))?;

    let above: Vec<usize> = (1..=k).filter(|&j| out.qhat.is_above(j)).collect();
    match (above.first(), above.last()) {
        (Some(a), Some(b)) => println!("estimated level set {a}..={b}"),
        _ => println!("estimated level set is empty"),
    }
    if let Some(s) = &out.stages {
        println!("mode {} left {} right {} verified {}", s.m_hat, s.l_hat, s.r_hat, s.verification.passed);
    }
    println!("regret {:.4}", simple_regret(&inst, &out.qhat)?);
    Ok(())
}
