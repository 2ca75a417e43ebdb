//! The placement scan against the exhaustive oracle.

mod common;

use common::oracle;
use cvrp3d::container::{Cuboid, Footprint};
use proptest::prelude::*;

#[test]
fn scan_matches_oracle_on_seeded_states() {
    for seed in 0..3000 {
        oracle::agree(seed).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scan_matches_oracle(seed in any::<u64>()) {
        prop_assert!(oracle::agree(seed).is_ok(), "{}", oracle::agree(seed).unwrap_err());
    }

    #[test]
    fn individual_checks_match_oracle(seed in any::<u64>(), h in 0u32..6, w in 0u32..5, l in 0u32..12) {
        let case = oracle::random_case(seed);
        let c = &case.container;
        let p = &case.package;
        let s = c.spec();
        for rotated in [false, true] {
            let e = cvrp3d::container::Extent::of(p, rotated);
            if h + e.height > s.height || w + e.width > s.width || l + e.length > s.length {
                continue;
            }
            let cuboid = Cuboid { h, w, l, height: e.height, width: e.width, length: e.length };
            let fp = Footprint { w, l, width: e.width, length: e.length };
            let empty = (0..e.height).all(|dh| (0..e.width).all(|dw| (0..e.length)
                .all(|dl| c.occupant(h + dh, w + dw, l + dl).is_none())));
            let engine = empty
                && (h == 0 || (c.check_fragility(p, fp, h) && c.check_support(fp, h, case.rules.a_min)))
                && c.check_cover(p, fp, h + e.height)
                && c.check_lifo(&cuboid, p.client, case.rules.lifo);
            prop_assert_eq!(engine, oracle::feasible(c, p, rotated, h, w, l, &case.rules));
            prop_assert_eq!(c.compute_waste(&cuboid), oracle::waste(c, h, w, l, e.height, e.width));
        }
    }

    #[test]
    fn occupancy_and_heightmap_are_consistent(seed in any::<u64>()) {
        let case = oracle::random_case(seed);
        let c = &case.container;
        let volume: u64 = c.boxes().iter().map(|b| b.cuboid.volume()).sum();
        let s = c.spec();
        let mut occupied = 0u64;
        for h in 0..s.height {
            for w in 0..s.width {
                for l in 0..s.length {
                    occupied += u64::from(c.occupant(h, w, l).is_some());
                }
            }
        }
        prop_assert_eq!(occupied, volume);
        prop_assert_eq!(c.volume(), volume);
        let map = c.signed_heightmap();
        let tops = oracle::column_tops(c);
        for (v, t) in map.values.iter().zip(&tops) {
            prop_assert_eq!(v.abs(), *t);
            prop_assert!(v.unsigned_abs() <= s.height);
        }
    }
}
