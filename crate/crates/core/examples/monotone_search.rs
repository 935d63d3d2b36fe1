//! Noisy binary search for the first arm above the threshold, with the
//! explore trace.

use shapebandit::mtb::{mtb_run, MtbConfig};
use shapebandit::{rng, simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let k = 200;
    let means: Vec<f64> = (1..=k).map(|j| (j as f64 / k as f64).powf(1.5)).collect();
    let inst = BanditInstance::gaussian(&means, 0.5, 0.4, Shape::Monotone)?;
    let budget = 30_000;
    let seed = 11;

    let mut env = Environment::new(inst.clone(), seed).with_budget_cap(budget);
    let config = MtbConfig::new(inst.tau(), budget, inst.sigma());
    let out = mtb_run(&mut env, &config, &mut rng::stream(seed, rng::TAG_ALGO, 0))?;

    let truth = means.iter().position(|&m| m >= inst.tau()).map_or(k + 1, |j| j + 1);
    println!("khat {} (true crossing {truth}), regret {:.4}", out.khat, simple_regret(&inst, &out.qhat)?);

    if let Some(trace) = &out.trace {
        let h = &trace.history;
        println!("T1 = {} steps of 3 x {} pulls, eps0 = {:.3}, eps_hat = {:.3}", h.t1, h.t2, h.eps0, trace.eps_hat);
        for (t, s) in h.steps.iter().enumerate().take(12) {
            // positions on the padded line: 1 and K+2 are the boundary arms
            println!("  step {t:2}: node ({:3}, {:3}, {:3})", s.node.l, s.node.m, s.node.r);
        }
    }
    println!("pulls used {}", env.pulls_used());
    Ok(())
}
