mod common;

use std::sync::Arc;

use cvrp3d::env::EnvConfig;
use cvrp3d::policy::{local_search, rollout, GreedyNearest};
use cvrp3d::{validate, PlacementRules};

#[test]
fn instances_match_published_sizes() {
    for (name, packages, capacity) in [("E016-03m", 32, 90.0), ("E016-05m", 26, 55.0)] {
        let inst = common::benchmark(name);
        assert_eq!(inst.name(), name);
        assert_eq!(inst.num_clients(), 15);
        assert_eq!(inst.fleet_size(), 5);
        assert_eq!(inst.num_packages(), packages);
        assert_eq!(inst.vehicle().weight_capacity, capacity);
        assert_eq!((inst.vehicle().height, inst.vehicle().width, inst.vehicle().length), (30, 25, 60));
        assert_eq!(inst.total_weight(), 258.0);
        for p in inst.packages() {
            assert!((6..=18).contains(&p.height) && (5..=15).contains(&p.width) && (12..=36).contains(&p.length));
        }
    }
}

#[test]
fn greedy_on_e016_03m_loads_everything() {
    let inst = Arc::new(common::benchmark("E016-03m"));
    let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    let report = validate(&inst, &r.solution, &PlacementRules::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failed());
    assert_eq!(report.loaded, 32);
}

#[test]
fn greedy_on_e016_05m_is_valid() {
    let inst = Arc::new(common::benchmark("E016-05m"));
    let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
    let report = validate(&inst, &r.solution, &PlacementRules::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failed());
    assert_eq!(report.loaded + report.missed, 26);
}

#[test]
fn local_search_improves_both() {
    let rules = PlacementRules::default();
    for name in ["E016-03m", "E016-05m"] {
        let inst = Arc::new(common::benchmark(name));
        let r = rollout(&GreedyNearest, inst.clone(), EnvConfig::default(), 2.0).unwrap();
        let improved = local_search(&r.solution, &inst, 200, 2.0, &rules).unwrap();
        let report = validate(&inst, &improved, &rules).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failed());
        assert_eq!(report.missed, 0, "{name}");
        let c = cvrp3d::cost(&improved, 0, &inst, 2.0).unwrap();
        assert!(c.total < r.cost.total, "{name}");
    }
}

#[test]
fn classic_layout_parses_like_native() {
    // The same three-client instance in both text layouts.
    let classic = "Name: tiny\nNumber of Customers: 2\nNumber of Vehicles: 2\n\
        Capacity - height - width - length\n20 30 25 60\n\
        Node - x - y - demand\n1 30 40 0\n2 37 52 4\n3 49 49 6\n\
        Node - number of items - h - w - l - fragility\n2 2 10 8 20 0 12 9 15 1\n3 1 8 8 30 0\n";
    let native = cvrp3d::instance::to_instance_text(&cvrp3d::instance::parse_gendreau(classic).unwrap());
    let back = cvrp3d::instance::parse_gendreau(&native).unwrap();
    assert_eq!(back, cvrp3d::instance::parse_gendreau(classic).unwrap());
    assert_eq!(back.num_packages(), 3);
    assert_eq!(back.client_weight(1), 4.0);
}
