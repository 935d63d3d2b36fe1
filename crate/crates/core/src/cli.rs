//! Command-line front end. The binary only forwards to [`main_with`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baseline::uniform_fc_budget;
use crate::ctb::DEFAULT_CONSTANT;
use crate::error::{Error, Result};
use crate::harness::{
    estimate_regret, rate_sweep, run_once, write_csv, write_json, Algo, AlgoConfig, IndexPolicy, SweepSpec,
};
use crate::instances::{
    default_epsilon, gen_lower_bound_instance, gen_random_instance, middle_index, Family, FamilyIndex, Variant,
};
use crate::mtb::mtb_fc_budget;
use crate::problem::{validate_shape, BanditInstance, InstanceFile, Shape};
use crate::rng;

#[derive(Debug, Parser)]
#[command(name = "shapebandit", version, about = "Thresholding bandits under shape constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one episode and print its outcome as JSON.
    Run(EpisodeArgs),
    /// Monte Carlo estimate of the expected simple regret.
    Estimate(EstimateArgs),
    /// Grid over (K, T) on a lower-bound family; writes CSV.
    Sweep(SweepArgs),
    /// Fixed-confidence budget for an (epsilon, delta) guarantee.
    Budget(BudgetArgs),
    /// Write an instance file.
    Gen(GenArgs),
    /// Check an instance file against a shape.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct EpisodeArgs {
    #[arg(long)]
    algo: Algo,
    /// Instance JSON file, or a family spec such as
    /// `monotone_step:K=64,epsilon=0.3,index=32`.
    #[arg(long)]
    instance: String,
    #[arg(long)]
    budget: u64,
    #[arg(long, env = "SHAPEBANDIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tau_override: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CONSTANT)]
    ctb_constant: f64,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    episode: EpisodeArgs,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    family: Family,
    #[arg(long = "K-list", value_delimiter = ',', required = true)]
    k_list: Vec<usize>,
    #[arg(long = "T-list", value_delimiter = ',', required = true)]
    t_list: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, env = "SHAPEBANDIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the rows as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CONSTANT)]
    ctb_constant: f64,
    #[arg(long, default_value = "gaussian")]
    variant: Variant,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Evaluate this many evenly spaced family members per cell and keep
    /// the worst.
    #[arg(long)]
    spread: Option<usize>,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// `uniform` or `mtb`.
    #[arg(long)]
    algo: Algo,
    #[arg(long = "K")]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Lower-bound family; without it a random instance of `--shape` is drawn.
    #[arg(long, conflicts_with = "shape")]
    family: Option<Family>,
    #[arg(long)]
    shape: Option<Shape>,
    #[arg(long = "K")]
    k: usize,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Budget used for the family's default epsilon.
    #[arg(long)]
    budget: Option<u64>,
    /// Step or spike position, or ramp level.
    #[arg(long, visible_aliases = ["l", "k"])]
    index: Option<usize>,
    /// Hypercube signs, e.g. `+-+-`.
    #[arg(long)]
    signs: Option<String>,
    #[arg(long, default_value = "gaussian")]
    variant: Variant,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, env = "SHAPEBANDIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    file: PathBuf,
    /// Shape to check (defaults to the one declared in the file).
    #[arg(long)]
    shape: Option<Shape>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code: 0 on success, 1 when a check fails, 2 on usage or
/// precondition errors.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Run(a) => cmd_run(&a, out),
        Command::Estimate(a) => cmd_estimate(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Budget(a) => cmd_budget(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Validate(a) => cmd_validate(&a, out),
    }
}

fn with_threads<T: Send, F: FnOnce() -> Result<T> + Send>(threads: Option<usize>, f: F) -> Result<T> {
    match threads {
        None => f(),
        Some(0) => Err(Error::param("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param(e.to_string()))?
            .install(f),
    }
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(Error::param(format!("sign {c:?} is not + or -"))),
        })
        .collect()
}

/// `family:key=value,...` with keys `K`, `epsilon`, `index`, `signs`,
/// `variant`, `sigma`. Epsilon defaults to the family's value at `budget`.
pub fn parse_family_spec(spec: &str, budget: u64) -> Result<BanditInstance> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let family: Family = name.parse()?;
    let (mut k, mut epsilon, mut index, mut signs) = (None, None, None, None);
    let (mut variant, mut sigma) = (Variant::Gaussian, 1.0);
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = kv.split_once('=').ok_or_else(|| Error::param(format!("expected key=value, got {kv:?}")))?;
        let bad = || Error::param(format!("bad value for {key}: {value:?}"));
        match key {
            "K" => k = Some(value.parse::<usize>().map_err(|_| bad())?),
            "epsilon" | "eps" => epsilon = Some(value.parse::<f64>().map_err(|_| bad())?),
            "index" | "k" | "l" => index = Some(value.parse::<usize>().map_err(|_| bad())?),
            "signs" => signs = Some(parse_signs(value)?),
            "variant" => variant = value.parse()?,
            "sigma" => sigma = value.parse::<f64>().map_err(|_| bad())?,
            _ => return Err(Error::param(format!("unknown key {key:?} in family spec"))),
        }
    }
    let k = k.ok_or_else(|| Error::param("family spec needs K"))?;
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(family, k, budget, sigma));
    build_family(family, k, epsilon, sigma, index, signs, variant)
}

fn build_family(
    family: Family,
    k: usize,
    epsilon: f64,
    sigma: f64,
    index: Option<usize>,
    signs: Option<Vec<i8>>,
    variant: Variant,
) -> Result<BanditInstance> {
    let idx = match (family, index, signs) {
        (Family::Hypercube, _, Some(s)) => FamilyIndex::Signs(s),
        (Family::Hypercube, _, None) => middle_index(family, k),
        (_, Some(j), _) => FamilyIndex::Index(j),
        (_, None, _) => middle_index(family, k),
    };
    gen_lower_bound_instance(family, k, epsilon, sigma, &idx, variant)
}

fn load_instance(source: &str, budget: u64, tau_override: Option<f64>) -> Result<BanditInstance> {
    let instance = if Path::new(source).is_file() {
        BanditInstance::from_json(&std::fs::read_to_string(source)?)?
    } else {
        parse_family_spec(source, budget)?
    };
    match tau_override {
        Some(t) => instance.with_tau(t),
        None => Ok(instance),
    }
}

fn check_budget(algo: Algo, k: usize, budget: u64) -> Result<()> {
    let need = algo.min_budget(k);
    if budget < need {
        return Err(Error::param(format!("budget {budget} is too small: {algo} needs at least {need} pulls for K = {k}")));
    }
    Ok(())
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

#[derive(Serialize)]
struct RunReport<'a> {
    algo: &'a str,
    budget: u64,
    seed: u64,
    regret: f64,
    pulls: u64,
    khat: Option<usize>,
    qhat: &'a [i8],
}

fn cmd_run(a: &EpisodeArgs, out: &mut dyn Write) -> Result<i32> {
    let instance = load_instance(&a.instance, a.budget, a.tau_override)?;
    check_budget(a.algo, instance.k(), a.budget)?;
    let config = AlgoConfig::default().with_ctb_constant(a.ctb_constant);
    let r = run_once(a.algo, &instance, a.budget, a.seed, &config)?;
    print_json(
        out,
        &RunReport {
            algo: a.algo.as_str(),
            budget: a.budget,
            seed: a.seed,
            regret: r.regret,
            pulls: r.pulls,
            khat: r.khat,
            qhat: r.qhat.labels(),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    algo: &'a str,
    budget: u64,
    seed: u64,
    reps: usize,
    mean: f64,
    se: f64,
    p90: f64,
    mean_pulls: f64,
}

fn cmd_estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<i32> {
    let ep = &a.episode;
    let instance = load_instance(&ep.instance, ep.budget, ep.tau_override)?;
    check_budget(ep.algo, instance.k(), ep.budget)?;
    let config = AlgoConfig::default().with_ctb_constant(ep.ctb_constant);
    let e = with_threads(a.threads, || estimate_regret(ep.algo, &instance, ep.budget, a.reps, ep.seed, &config))?;
    print_json(
        out,
        &EstimateReport {
            algo: ep.algo.as_str(),
            budget: ep.budget,
            seed: ep.seed,
            reps: e.reps,
            mean: e.mean,
            se: e.se,
            p90: e.p90,
            mean_pulls: e.mean_pulls,
        },
    )?;
    Ok(0)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let mut spec = SweepSpec::new(a.algo, a.family, a.k_list.clone(), a.t_list.clone(), a.reps, a.seed);
    spec.config = AlgoConfig::default().with_ctb_constant(a.ctb_constant);
    spec.variant = a.variant;
    spec.sigma = a.sigma;
    spec.index_policy = a.spread.map_or(IndexPolicy::Middle, IndexPolicy::Spread);
    let res = with_threads(a.threads, || rate_sweep(&spec))?;
    write_csv(&res.rows, &a.out)?;
    if let Some(p) = &a.json {
        write_json(&res.rows, p)?;
    }
    let show = |f: &Option<crate::harness::Fit>| match f {
        Some(f) => format!("{:.3} (se {:.3}, n {})", f.slope, f.slope_se, f.n),
        None => "n/a".to_string(),
    };
    for (k, f) in &res.t_slopes {
        writeln!(out, "K={k}: T-slope {}", show(f))?;
    }
    for (t, f) in &res.k_slopes {
        writeln!(out, "T={t}: K-slope {}", show(f))?;
    }
    let skipped = res.rows.iter().filter(|r| r.skipped).count();
    if skipped > 0 {
        writeln!(out, "{skipped} cell(s) skipped")?;
    }
    Ok(0)
}

fn cmd_budget(a: &BudgetArgs, out: &mut dyn Write) -> Result<i32> {
    let t = match a.algo {
        Algo::Uniform => uniform_fc_budget(a.k, a.epsilon, a.delta, a.sigma)?,
        Algo::Mtb => mtb_fc_budget(a.k, a.epsilon, a.delta, a.sigma)?,
        other => return Err(Error::param(format!("no fixed-confidence budget for {other}"))),
    };
    writeln!(out, "{t}")?;
    Ok(0)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let instance = match (a.family, a.shape) {
        (Some(family), _) => {
            let epsilon = match (a.epsilon, a.budget) {
                (Some(e), _) => e,
                (None, Some(t)) => default_epsilon(family, a.k, t, a.sigma),
                (None, None) => return Err(Error::param("--family needs --epsilon or --budget")),
            };
            let signs = a.signs.as_deref().map(parse_signs).transpose()?;
            build_family(family, a.k, epsilon, a.sigma, a.index, signs, a.variant)?
        }
        (None, Some(shape)) => {
            let mut r = rng::stream(a.seed, "gen", 0);
            gen_random_instance(shape, a.k, &mut r, a.variant, a.sigma)?
        }
        (None, None) => return Err(Error::param("gen needs --family or --shape")),
    };
    let json = instance.to_json()?;
    match &a.out {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    Ok(0)
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let file: InstanceFile = serde_json::from_str(&std::fs::read_to_string(&a.file)?)?;
    let shape = a.shape.unwrap_or(file.shape);
    if validate_shape(&file.means, shape) {
        writeln!(out, "{shape}: ok")?;
        Ok(0)
    } else {
        writeln!(out, "{shape}: violated")?;
        Ok(1)
    }
}
