//! Empirical rate in T on the step family, written to CSV.

use shapebandit::harness::{rate_sweep, write_csv, Algo, SweepSpec};
use shapebandit::instances::Family;

fn main() -> shapebandit::Result<()> {
    let spec = SweepSpec::new(Algo::Mtb, Family::MonotoneStep, vec![16, 256], vec![2_000, 8_000, 32_000], 300, 9);
    let res = rate_sweep(&spec)?;
    for row in &res.rows {
        println!("K {:4} T {:6}: {:?}", row.k, row.t, row.regret_mean);
    }
    for (k, fit) in &res.t_slopes {
        if let Some(f) = fit {
            println!("K {k}: regret ~ T^{:.2}", f.slope);
        }
    }
    let path = std::env::temp_dir().join("mtb_step_sweep.csv");
    write_csv(&res.rows, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
