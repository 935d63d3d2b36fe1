//! Hard families, random shaped instances, discretized functions and the
//! JSON instance format.

use shapebandit::instances::{
    default_epsilon, discretize_holder, gen_lower_bound_instance, gen_random_instance, Family, FamilyIndex, Variant,
};
use shapebandit::problem::validate_shape;
use shapebandit::{rng, BanditInstance, Shape};

fn show(name: &str, inst: &BanditInstance) {
    let m: Vec<String> = inst.means().iter().map(|x| format!("{x:.2}")).collect();
    println!("{name:<16} tau {:.3}  [{}]", inst.tau(), m.join(" "));
}

fn main() -> shapebandit::Result<()> {
    let k = 8;
    for (family, idx) in [
        (Family::Hypercube, FamilyIndex::Signs(vec![1, -1, 1, 1, -1, -1, 1, -1])),
        (Family::MonotoneStep, FamilyIndex::Index(5)),
        (Family::UnimodalSpike, FamilyIndex::Index(3)),
        (Family::ConcaveRamp, FamilyIndex::Index(2)),
    ] {
        let inst = gen_lower_bound_instance(family, k, 0.2, 1.0, &idx, Variant::Gaussian)?;
        show(family.as_str(), &inst);
    }
    println!("step eps at T=10^4, K=64: {:.4}", default_epsilon(Family::MonotoneStep, 64, 10_000, 1.0));

    let mut r = rng::stream(1, "gen", 0);
    for shape in [Shape::Monotone, Shape::Unimodal, Shape::Concave] {
        let inst = gen_random_instance(shape, k, &mut r, Variant::Bernoulli, 1.0)?;
        assert!(validate_shape(&inst.means(), shape));
        show(shape.as_str(), &inst);
    }

    let bump = |x: f64| 1.0 - (2.0 * x - 1.0).abs();
    let inst = discretize_holder(bump, 1.0, 1_000, Shape::Unimodal, 0.7, Variant::Bernoulli, 1.0)?;
    println!("tent function on {} bins", inst.k());

    let json = inst.to_json()?;
    assert_eq!(BanditInstance::from_json(&json)?, inst);
    println!("json round trip ok ({} bytes)", json.len());
    Ok(())
}
