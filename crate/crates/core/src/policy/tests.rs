use super::*;
use crate::container::PlacementRules;
use crate::geometry::Point;
use crate::instance::tests::package;
use crate::instance::{generate, GenParams, VehicleSpec};
use crate::error::Error;
use crate::validate::validate;

fn line_instance(xs: &[f64]) -> Arc<Instance> {
    let clients = xs.iter().map(|&x| Point::new(x, 0.0)).collect();
    let packages = (1..=xs.len()).map(|c| package(c, 1, [1, 1, 1], 1.0)).collect();
    let spec = VehicleSpec::new(2, 2, 4, 10.0).unwrap();
    Arc::new(Instance::new("line", Point::new(0.0, 0.0), clients, packages, spec, 2).unwrap())
}

#[test]
fn greedy_prefers_nearer_client() {
    let inst = line_instance(&[5.0, 1.0]);
    let (_, obs) = Episode::reset(inst, EnvConfig::default()).unwrap();
    assert_eq!(GreedyNearest.rank(&obs), vec![PackageId(1), PackageId(0)]);
}

#[test]
fn greedy_ties_break_by_client_then_package() {
    let clients = vec![Point::new(0.0, 2.0), Point::new(2.0, 0.0)];
    let packages = vec![
        package(2, 1, [1, 1, 1], 1.0),
        package(1, 1, [1, 1, 1], 1.0),
        package(1, 2, [1, 1, 2], 1.0),
    ];
    let spec = VehicleSpec::new(2, 2, 4, 10.0).unwrap();
    let inst = Arc::new(Instance::new("tie", Point::new(0.0, 0.0), clients, packages, spec, 1).unwrap());
    let (_, obs) = Episode::reset(inst, EnvConfig::default()).unwrap();
    assert_eq!(GreedyNearest.rank(&obs), vec![PackageId(0), PackageId(1), PackageId(2)]);
}

#[test]
fn greedy_leads_with_open_client_by_volume() {
    let clients = vec![Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
    let packages = vec![
        package(1, 1, [1, 1, 1], 1.0),
        package(1, 2, [1, 1, 1], 1.0),
        package(1, 3, [1, 1, 2], 1.0),
        package(2, 1, [1, 1, 1], 1.0),
    ];
    let spec = VehicleSpec::new(2, 2, 4, 10.0).unwrap();
    let inst = Arc::new(Instance::new("open", Point::new(0.0, 0.0), clients, packages, spec, 1).unwrap());
    let (mut ep, _) = Episode::reset(inst, EnvConfig::default()).unwrap();
    let out = ep.step(&[PackageId(0)]).unwrap();
    assert_eq!(GreedyNearest.rank(&out.observation), vec![PackageId(2), PackageId(1)]);
}

#[test]
fn greedy_ranking_is_translation_invariant() {
    let inst = generate(&GenParams::default().with_n(12).with_seed(5)).unwrap();
    let moved = crate::instance::augment(&inst, crate::instance::Transform::Translate { dx: 10.0, dy: 10.0 });
    let (_, a) = Episode::reset(Arc::new(inst), EnvConfig::default()).unwrap();
    let (_, b) = Episode::reset(Arc::new(moved), EnvConfig::default()).unwrap();
    assert_eq!(GreedyNearest.rank(&a), GreedyNearest.rank(&b));
}

#[test]
fn random_is_seeded_and_complete() {
    let inst = generate(&GenParams::default().with_n(6).with_seed(2)).unwrap();
    let (_, obs) = Episode::reset(Arc::new(inst), EnvConfig::default()).unwrap();
    let p = RandomPolicy { seed: 9 };
    let a = p.rank(&obs);
    assert_eq!(a, p.rank(&obs));
    let mut sorted = a.clone();
    sorted.sort();
    assert_eq!(sorted, obs.unmasked().collect::<Vec<_>>());
    assert_ne!(a, RandomPolicy { seed: 10 }.rank(&obs));
}

#[test]
fn random_first_choice_is_uniform() {
    let inst = line_instance(&[1.0, 2.0, 3.0, 4.0]);
    let (_, obs) = Episode::reset(inst, EnvConfig::default()).unwrap();
    let (k, trials) = (4usize, 4000usize);
    let mut counts = vec![0usize; k];
    for seed in 0..trials as u64 {
        counts[RandomPolicy { seed }.rank(&obs)[0].0] += 1;
    }
    let expected = trials as f64 / k as f64;
    let sigma = (trials as f64 * (1.0 / k as f64) * (1.0 - 1.0 / k as f64)).sqrt();
    for c in counts {
        assert!((c as f64 - expected).abs() <= 3.0 * sigma, "{c}");
    }
}

#[test]
fn rollouts_are_valid_for_any_policy() {
    let rules = PlacementRules::default();
    for seed in 0..10 {
        let inst = Arc::new(generate(&GenParams::default().with_n(10).with_seed(seed)).unwrap());
        for policy in [&GreedyNearest as &dyn Policy, &RandomPolicy { seed }] {
            let r = rollout(policy, inst.clone(), EnvConfig::default(), 2.0).unwrap();
            let report = validate(&inst, &r.solution, &rules).unwrap();
            assert!(report.passed(), "{} seed {seed}: {:?}", policy.name(), report.failed());
            assert!((report.distance - r.cost.distance).abs() < 1e-9);
        }
    }
}

#[test]
fn rollout_is_deterministic_and_replayable() {
    let inst = Arc::new(generate(&GenParams::default().with_n(15).with_seed(8)).unwrap());
    let a = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    let b = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    assert_eq!(a.solution, b.solution);
    assert_eq!(a.cost, b.cost);
    let (sol, cost) = replay(inst, EnvConfig::default(), &a.actions, 2.0).unwrap();
    assert_eq!(sol, a.solution);
    assert_eq!(cost.total.to_bits(), a.cost.total.to_bits());
}

#[test]
fn batch_matches_sequential() {
    let insts: Vec<_> = (0..4)
        .map(|s| Arc::new(generate(&GenParams::default().with_n(8).with_seed(s)).unwrap()))
        .collect();
    let batch = rollout_batch(&GreedyNearest, &insts, EnvConfig::default(), 2.0);
    for (inst, r) in insts.iter().zip(batch) {
        let single = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
        assert_eq!(r.unwrap().solution, single.solution);
    }
}

#[test]
fn local_search_budget_zero_returns_input() {
    let inst = Arc::new(generate(&GenParams::default().with_n(8).with_seed(1)).unwrap());
    let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    let out = local_search(&r.solution, &inst, 0, 2.0, &PlacementRules::default()).unwrap();
    assert_eq!(out, r.solution);
}

#[test]
fn local_search_keeps_single_client_route() {
    let inst = line_instance(&[3.0]);
    let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    let out = local_search(&r.solution, &inst, 10, 2.0, &PlacementRules::default()).unwrap();
    assert_eq!(out, r.solution);
}

#[test]
fn local_search_rejects_invalid_input() {
    let inst = line_instance(&[3.0, 4.0]);
    let mut sol = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap().solution;
    sol.vehicles[0].route.pop();
    let err = local_search(&sol, &inst, 5, 2.0, &PlacementRules::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidSolution(_)));
}

/// Every ordering of three clients on one vehicle, by brute force.
fn best_single_route(inst: &Instance) -> f64 {
    let perms = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
    perms
        .iter()
        .map(|p| crate::cost::route_distance(p, inst).unwrap())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn local_search_uncrosses_a_route() {
    // Corners of a square visited diagonally first.
    let clients = vec![Point::new(0.0, 4.0), Point::new(4.0, 0.0), Point::new(4.0, 4.0)];
    let packages = (1..=3).map(|c| package(c, 1, [1, 1, 1], 1.0)).collect();
    let spec = VehicleSpec::new(2, 2, 4, 10.0).unwrap();
    let inst = Instance::new("cross", Point::new(0.0, 0.0), clients, packages, spec, 1).unwrap();
    let route = [1, 2, 3];
    let packs = repack(&inst, &route, &PlacementRules::default()).unwrap();
    let sol = Solution { vehicles: vec![crate::solution::VehiclePlan::from_clients(&route, packs)] };
    let before = crate::cost::total_distance(&sol, &inst).unwrap();
    let optimum = best_single_route(&inst);
    assert!(before > optimum + 1.0);
    let out = local_search(&sol, &inst, 10, 2.0, &PlacementRules::default()).unwrap();
    let after = crate::cost::total_distance(&out, &inst).unwrap();
    assert!(after < before);
    assert!((after - optimum).abs() < 1e-9);
    assert!(validate(&inst, &out, &PlacementRules::default()).unwrap().passed());
}

#[test]
fn local_search_never_worsens_generated_solutions() {
    let rules = PlacementRules::default();
    for seed in 0..6 {
        let inst = Arc::new(generate(&GenParams::default().with_n(12).with_seed(seed)).unwrap());
        let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
        let out = local_search(&r.solution, &inst, 50, 2.0, &rules).unwrap();
        let c = crate::cost::cost(&out, out.missed(&inst).len(), &inst, 2.0).unwrap();
        assert!(c.total <= r.cost.total + 1e-12, "seed {seed}");
        assert!(validate(&inst, &out, &rules).unwrap().passed());
    }
}
