//! Property checks shared by the proptest suite and the acceptance runner.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shapebandit::harness::{run_once, run_reps, Algo, AlgoConfig};
use shapebandit::instances::{gen_random_instance, Variant};
use shapebandit::mtb::{self, candidate_list, explore, mtb_run, qualifying, ArmLine, MtbConfig};
use shapebandit::problem::validate_shape;
use shapebandit::{rng, ArmRef, BanditInstance, Environment, Shape};

pub const SHAPES: [Shape; 4] = [Shape::None, Shape::Monotone, Shape::Unimodal, Shape::Concave];

pub fn random_instance(shape: Shape, k: usize, seed: u64, bernoulli: bool) -> BanditInstance {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let variant = if bernoulli { Variant::Bernoulli } else { Variant::Gaussian };
    gen_random_instance(shape, k, &mut r, variant, 0.5).unwrap()
}

fn adjacent(a: &shapebandit::tree::TreeNode, b: &shapebandit::tree::TreeNode) -> bool {
    let is_child = |p: &shapebandit::tree::TreeNode, c: &shapebandit::tree::TreeNode| {
        let (l, r) = p.children();
        l.as_ref() == Some(c) || r.as_ref() == Some(c)
    };
    a == b || is_child(a, b) || is_child(b, a)
}

/// Consecutive explore nodes are equal or joined by one tree edge.
pub fn one_edge_moves(k: usize, seed: u64, t2: u64) -> Result<(), TestCaseError> {
    let inst = random_instance(Shape::Monotone, k, seed, true);
    let t1 = mtb::t1_for(k.max(3));
    let mut env = Environment::new(inst.clone(), seed);
    let line = ArmLine::padded((1..=k).map(ArmRef::Arm));
    let h = explore(&mut env, &line, inst.tau(), t1, t2, 0.5).unwrap();
    prop_assert_eq!(h.steps.len(), t1);
    prop_assert_eq!(env.pulls_used(), h.total_pulls());
    for w in h.steps.windows(2) {
        prop_assert!(adjacent(&w[0].node, &w[1].node), "{:?} -> {:?}", w[0].node, w[1].node);
    }
    Ok(())
}

/// The candidate list gains at most one entry per step, every entry is a
/// position of the step it came from, and a larger tolerance never makes
/// a step stop qualifying.
pub fn candidate_growth(k: usize, seed: u64, eps: f64) -> Result<(), TestCaseError> {
    let inst = random_instance(Shape::Monotone, k, seed, false);
    let t1 = mtb::t1_for(k.max(3));
    let mut env = Environment::new(inst.clone(), seed);
    let line = ArmLine::padded((1..=k).map(ArmRef::Arm));
    let h = explore(&mut env, &line, inst.tau(), t1, 4, 0.5).unwrap();
    let tau = inst.tau();
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ 1);
    let list = candidate_list(eps, &h, tau, &mut r);
    let contributing = h.steps.iter().filter(|s| !qualifying(s, eps, tau).is_empty()).count();
    prop_assert_eq!(list.len(), contributing);
    let mut it = list.iter();
    for s in &h.steps {
        let q = qualifying(s, eps, tau);
        if !q.is_empty() {
            let p = it.next().unwrap();
            prop_assert!(q.contains(p));
        }
        prop_assert!(!qualifying(s, 2.0 * eps, tau).is_empty() || q.is_empty());
    }
    let longer = candidate_list(2.0 * eps, &h, tau, &mut r);
    prop_assert!(longer.len() >= list.len());
    Ok(())
}

/// Every algorithm stays within its budget on every shape.
pub fn budget_compliance(algo: Algo, shape: Shape, k: usize, budget: u64, seed: u64) -> Result<(), TestCaseError> {
    let inst = random_instance(shape, k, seed, seed % 2 == 0);
    let config = AlgoConfig::default().with_ctb_constant(0.5);
    match run_once(algo, &inst, budget, seed, &config) {
        Ok(res) => {
            prop_assert!(res.pulls <= budget, "{} used {} of {}", algo, res.pulls, budget);
            prop_assert_eq!(res.per_arm.iter().sum::<u64>() <= res.pulls, true);
            prop_assert_eq!(res.qhat.len(), k);
        }
        Err(e) => prop_assert!(budget < algo.min_budget(k), "{} failed at budget {}: {}", algo, budget, e),
    }
    Ok(())
}

fn pools() -> &'static (rayon::ThreadPool, rayon::ThreadPool) {
    static POOLS: OnceLock<(rayon::ThreadPool, rayon::ThreadPool)> = OnceLock::new();
    POOLS.get_or_init(|| {
        let p = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        (p(1), p(8))
    })
}

/// Repetitions give identical results on 1 and 8 worker threads.
pub fn thread_determinism(algo: Algo, k: usize, seed: u64) -> Result<(), TestCaseError> {
    let inst = random_instance(Shape::Monotone, k, seed, false);
    let config = AlgoConfig::default().with_ctb_constant(0.5);
    let budget = 3000;
    let (one, eight) = pools();
    let a = one.install(|| run_reps(algo, &inst, budget, 12, seed, &config)).unwrap();
    let b = eight.install(|| run_reps(algo, &inst, budget, 12, seed, &config)).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

/// Generated instances satisfy their own shape and every weaker one:
/// monotone and concave are unimodal, everything is unstructured.
pub fn validator_nesting(shape: Shape, k: usize, seed: u64) -> Result<(), TestCaseError> {
    let means = random_instance(shape, k, seed, true).means();
    prop_assert!(validate_shape(&means, shape));
    prop_assert!(validate_shape(&means, Shape::None));
    if validate_shape(&means, Shape::Monotone) || validate_shape(&means, Shape::Concave) {
        prop_assert!(validate_shape(&means, Shape::Unimodal));
    }
    let rev: Vec<f64> = means.iter().rev().copied().collect();
    for s in [Shape::Unimodal, Shape::Concave] {
        prop_assert_eq!(validate_shape(&means, s), validate_shape(&rev, s));
    }
    Ok(())
}

/// The decreasing search on an instance is the increasing search on the
/// reversed instance, read backwards.
pub fn dec_mirror(k: usize, seed: u64, budget: u64) -> Result<(), TestCaseError> {
    let inc = random_instance(Shape::Monotone, k, seed, seed % 2 == 1);
    let dec = inc.reversed();
    let run = |inst: &BanditInstance, decreasing: bool| {
        let mut env = Environment::new(inst.clone(), seed).with_budget_cap(budget);
        let mut r = rng::stream(seed, rng::TAG_ALGO, 0);
        let mut c = MtbConfig::new(inst.tau(), budget, inst.sigma());
        if decreasing {
            c = c.decreasing();
        }
        mtb_run(&mut env, &c, &mut r).unwrap()
    };
    let a = run(&inc, false);
    let b = run(&dec, true);
    prop_assert_eq!(b.khat, k + 1 - a.khat);
    prop_assert_eq!(b.qhat, a.qhat.reversed());
    Ok(())
}

pub fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(SHAPES.to_vec())
}

pub fn algo() -> impl Strategy<Value = Algo> {
    prop::sample::select(Algo::ALL.to_vec())
}
