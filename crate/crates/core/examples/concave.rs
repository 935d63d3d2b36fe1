//! Level set of a concave sequence, phase by phase.
//!
//! The default phase-length constant is sized for asymptotic budgets; a
//! small one is used here so the phased search actually runs.

use shapebandit::ctb::ctb_run;
use shapebandit::{rng, simple_regret, BanditInstance, Environment, Shape};

fn main() -> shapebandit::Result<()> {
    let k = 256;
    let means: Vec<f64> = (1..=k).map(|j| { let x = j as f64 / k as f64; 4.0 * x * (1.0 - x) }).collect();
    let inst = BanditInstance::gaussian(&means, 0.3, 0.8, Shape::Concave)?;
    let budget = 400_000;

    let mut env = Environment::new(inst.clone(), 2).with_budget_cap(budget);
    let out = ctb_run(&mut env, inst.tau(), budget, 1.0, &mut rng::stream(2, rng::TAG_ALGO, 0))?;

    if let Some(s) = &out.schedule {
        println!("{} phases, {} pulls scheduled", s.m_phases, s.total_pulls());
    }
    for p in out.phases.iter().step_by(4) {
        println!("phase {:2} eps {:.3}: l {:3} m {:3} r {:3}", p.phase, p.eps, p.l, p.m, p.r);
    }
    println!("interval {:?}, regret {:.4}, pulls {}", out.interval, simple_regret(&inst, &out.qhat)?, env.pulls_used());
    Ok(())
}
