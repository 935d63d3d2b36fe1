//! Monte Carlo regret of every algorithm on one monotone instance.

use shapebandit::harness::{estimate_regret, Algo, AlgoConfig};
use shapebandit::{BanditInstance, Shape};

fn main() -> shapebandit::Result<()> {
    let k = 128;
    let means: Vec<f64> = (1..=k).map(|j| j as f64 / k as f64).collect();
    let inst = BanditInstance::gaussian(&means, 1.0, 0.503, Shape::Monotone)?;
    let budget = 200_000;
    let config = AlgoConfig::default().with_ctb_constant(2.0);

    for algo in [Algo::Uniform, Algo::Mtb, Algo::Utb, Algo::Ctb] {
        let e = estimate_regret(algo, &inst, budget, 200, 42, &config)?;
        println!("{:<8} mean {:.4} ± {:.4}  p90 {:.4}  pulls {:.0}", algo.as_str(), e.mean, e.se, e.p90, e.mean_pulls);
    }
    Ok(())
}
