//! Budgets that give regret at most eps with probability 1 - delta.

use shapebandit::baseline::uniform_fc_budget;
use shapebandit::mtb::mtb_fc_budget;

fn main() -> shapebandit::Result<()> {
    println!("{:>6} {:>6} {:>6} {:>12} {:>12}", "K", "eps", "delta", "uniform", "monotone");
    for k in [10, 100, 1000, 10_000] {
        for (eps, delta) in [(0.1, 0.1), (0.05, 0.01)] {
            let u = uniform_fc_budget(k, eps, delta, 1.0)?;
            let m = mtb_fc_budget(k, eps, delta, 1.0)?;
            println!("{k:>6} {eps:>6} {delta:>6} {u:>12} {m:>12}");
        }
    }
    Ok(())
}
