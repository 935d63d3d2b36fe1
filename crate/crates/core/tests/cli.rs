use std::process::Command;

use shapebandit::cli::main_with;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(std::iter::once("shapebandit").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn budget_values() {
    let (code, out, _) = cli(&["budget", "--algo", "mtb", "--K", "100", "--epsilon", "0.1", "--delta", "0.2", "--sigma", "1"]);
    assert_eq!((code, out.trim()), (0, "9726"));
    let (code, out, _) = cli(&["budget", "--algo", "uniform", "--K", "10", "--epsilon", "0.1", "--delta", "0.1"]);
    assert_eq!((code, out.trim()), (0, "10606"));
    let (code, _, err) = cli(&["budget", "--algo", "utb", "--K", "10", "--epsilon", "0.1", "--delta", "0.1"]);
    assert_eq!(code, 2);
    assert!(err.contains("no fixed-confidence budget"));
}

#[test]
fn gen_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ramp.json");
    let p = path.to_str().unwrap();
    let (code, ..) = cli(&["gen", "--family", "concave_ramp", "--K", "8", "--l", "1", "--epsilon", "0.1", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(cli(&["validate", p]), (0, "concave: ok\n".into(), String::new()));
    assert_eq!(cli(&["validate", p, "--shape", "unimodal"]).1, "unimodal: ok\n");

    let spike = dir.path().join("spike.json");
    let s = spike.to_str().unwrap();
    cli(&["gen", "--family", "unimodal_spike", "--K", "9", "--index", "4", "--epsilon", "0.2", "--out", s]);
    let (code, out, _) = cli(&["validate", s, "--shape", "monotone"]);
    assert_eq!((code, out.as_str()), (1, "monotone: violated\n"));
}

#[test]
fn too_small_budget_is_rejected() {
    let (code, _, err) = cli(&["run", "--algo", "mtb", "--instance", "monotone_step:K=64,epsilon=0.3", "--budget", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget 10 is too small"), "{err}");
    let (code, ..) = cli(&["run", "--algo", "bogus", "--instance", "monotone_step:K=4,epsilon=0.3", "--budget", "100"]);
    assert_eq!(code, 2);
}

#[test]
fn run_is_seeded() {
    let args = |seed: &'static str| {
        ["run", "--algo", "utb", "--instance", "unimodal_spike:K=32,epsilon=0.5,index=7", "--budget", "20000", "--seed", seed]
    };
    let a = cli(&args("3"));
    assert_eq!(a.0, 0);
    assert_eq!(a, cli(&args("3")));
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert!(v["pulls"].as_u64().unwrap() <= 20_000);
    assert_eq!(v["qhat"].as_array().unwrap().len(), 32);
}

#[test]
fn estimate_ignores_thread_count() {
    let args = |threads: &'static str| {
        ["estimate", "--algo", "mtb", "--instance", "monotone_step:K=50,epsilon=0.2,index=20", "--budget", "3000", "--reps", "40", "--threads", threads]
    };
    let one = cli(&args("1"));
    assert_eq!(one.0, 0);
    assert_eq!(one, cli(&args("4")));
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let (code, out, _) = cli(&[
        "sweep", "--algo", "uniform", "--family", "hypercube", "--K-list", "4,8", "--T-list", "100,400", "--reps", "20",
        "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("K=4: T-slope"));
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 5);
}

#[test]
fn seed_falls_back_to_environment() {
    let bin = env!("CARGO_BIN_EXE_shapebandit");
    let run = |env_seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["run", "--algo", "ctb", "--instance", "concave_ramp:K=16,epsilon=0.2,l=2", "--budget", "5000"]);
        c.args(["--ctb-constant", "1"]);
        c.env_remove("SHAPEBANDIT_SEED");
        if let Some(s) = env_seed {
            c.env("SHAPEBANDIT_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("41"), None), 41);
    assert_eq!(run(Some("41"), Some("5")), 5);
}
