//! Grids over `(K, T)` on the lower-bound families, with log-log slope fits.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{estimate_regret, Algo, AlgoConfig, Estimate};
use crate::error::{Error, Result};
use crate::instances::{default_epsilon, gen_lower_bound_instance, middle_index, Family, FamilyIndex, Variant};

/// Which family members a cell is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexPolicy {
    Middle,
    /// `n` evenly spaced members; the cell reports the worst one.
    Spread(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub algo: Algo,
    pub family: Family,
    pub k_list: Vec<usize>,
    pub t_list: Vec<u64>,
    pub reps: usize,
    pub master_seed: u64,
    pub config: AlgoConfig,
    pub variant: Variant,
    pub sigma: f64,
    pub index_policy: IndexPolicy,
}

impl SweepSpec {
    pub fn new(algo: Algo, family: Family, k_list: Vec<usize>, t_list: Vec<u64>, reps: usize, master_seed: u64) -> Self {
        SweepSpec {
            algo,
            family,
            k_list,
            t_list,
            reps,
            master_seed,
            config: AlgoConfig::default(),
            variant: Variant::Gaussian,
            sigma: 1.0,
            index_policy: IndexPolicy::Middle,
        }
    }
}

/// One grid cell. Statistics are empty for skipped cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algo: String,
    pub shape: String,
    pub family: String,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub reps: usize,
    pub seed: u64,
    pub regret_mean: Option<f64>,
    pub regret_se: Option<f64>,
    pub regret_p90: Option<f64>,
    pub mean_pulls: Option<f64>,
    pub skipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// `NaN` with fewer than three points.
    pub slope_se: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Per `K`: slope of log mean regret against log `T`.
    pub t_slopes: Vec<(usize, Option<Fit>)>,
    /// Per `T`: slope of log mean regret against log `K`.
    pub k_slopes: Vec<(u64, Option<Fit>)>,
}

/// Ordinary least squares of `y` on `x`; `None` with fewer than two points
/// or no spread in `x`.
pub fn ols(points: &[(f64, f64)]) -> Option<Fit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if n > 2 {
        let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Some(Fit { slope, intercept, slope_se, n })
}

/// [`ols`] on `(ln x, ln y)`, dropping points with `y <= 0`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<Fit> {
    let logs: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    ols(&logs)
}

fn members(family: Family, k: usize, policy: IndexPolicy) -> Vec<FamilyIndex> {
    match (policy, family.index_range(k)) {
        (IndexPolicy::Spread(n), Some(range)) if n >= 2 => {
            let (lo, hi) = (*range.start(), *range.end());
            if hi < lo {
                return vec![];
            }
            let mut v: Vec<usize> = (0..n).map(|j| lo + (hi - lo) * j / (n - 1)).collect();
            v.dedup();
            v.into_iter().map(FamilyIndex::Index).collect()
        }
        _ => vec![middle_index(family, k)],
    }
}

fn cell(spec: &SweepSpec, k: usize, t: u64) -> Result<Option<Estimate>> {
    if t < spec.algo.min_budget(k) {
        return Ok(None);
    }
    let eps = default_epsilon(spec.family, k, t, spec.sigma);
    let mut worst: Option<Estimate> = None;
    for idx in members(spec.family, k, spec.index_policy) {
        let inst = match gen_lower_bound_instance(spec.family, k, eps, spec.sigma, &idx, spec.variant) {
            Ok(i) => i,
            Err(Error::InvalidParameter(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let e = match estimate_regret(spec.algo, &inst, t, spec.reps, spec.master_seed, &spec.config) {
            Ok(e) => e,
            Err(Error::BudgetExhausted { .. }) | Err(Error::DegenerateProblem(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if worst.is_none_or(|w| e.mean > w.mean) {
            worst = Some(e);
        }
    }
    Ok(worst)
}

/// Evaluates every `(K, T)` cell (`K` outer, `T` inner) at the family's
/// lower-bound tolerance and fits the log-log slopes.
pub fn rate_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let mut rows = Vec::with_capacity(spec.k_list.len() * spec.t_list.len());
    for &k in &spec.k_list {
        for &t in &spec.t_list {
            let est = cell(spec, k, t)?;
            rows.push(SweepRow {
                algo: spec.algo.to_string(),
                shape: spec.family.shape().to_string(),
                family: spec.family.to_string(),
                k,
                t,
                reps: spec.reps,
                seed: spec.master_seed,
                regret_mean: est.map(|e| e.mean),
                regret_se: est.map(|e| e.se),
                regret_p90: est.map(|e| e.p90),
                mean_pulls: est.map(|e| e.mean_pulls),
                skipped: est.is_none(),
            });
        }
    }
    let series = |keep: &dyn Fn(&SweepRow) -> bool, x: &dyn Fn(&SweepRow) -> f64| {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| keep(r)).filter_map(|r| r.regret_mean.map(|m| (x(r), m))).collect();
        fit_loglog(&pts)
    };
    let t_slopes = spec.k_list.iter().map(|&k| (k, series(&|r| r.k == k, &|r| r.t as f64))).collect();
    let k_slopes = spec.t_list.iter().map(|&t| (t, series(&|r| r.t == t, &|r| r.k as f64))).collect();
    Ok(SweepResult { rows, t_slopes, k_slopes })
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(rows: &[SweepRow], path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(rows)?)?;
    Ok(())
}
