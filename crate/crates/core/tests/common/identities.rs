//! Cost identities checked against hand-rolled arithmetic.

use cvrp3d::instance::{generate, GenParams};
use cvrp3d::{cost, CostBreakdown, Solution, VehiclePlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// One random case: a generated instance, penalty and missed count. Checks
/// `C_vrp = 1/p` at the star distance, `C_vrp = 2/p` for one vehicle per
/// client, `C_packing = missed / n` and `C = C_vrp + C_packing`.
pub fn check_case(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=40);
    let inst = generate(&GenParams::default().with_n(n).with_seed(seed)).map_err(|e| e.to_string())?;
    let penalty = rng.gen_range(0.1..10.0);
    let missed = rng.gen_range(0..=inst.num_packages());
    let depot = inst.depot();
    let star: f64 = inst
        .clients()
        .iter()
        .map(|c| (c.location.x - depot.x).hypot(c.location.y - depot.y))
        .sum();
    if star == 0.0 {
        return Ok(());
    }

    let at_star = CostBreakdown::from_distance(star, missed, &inst, penalty).map_err(|e| e.to_string())?;
    let expect_packing = missed as f64 / n as f64;
    let checks = [
        ("C_vrp = 1/p at star distance", close(at_star.vrp, 1.0 / penalty)),
        ("C_packing = missed/n", close(at_star.packing, expect_packing)),
        ("C = C_vrp + C_packing", close(at_star.total, at_star.vrp + at_star.packing)),
    ];
    for (what, ok) in checks {
        if !ok {
            return Err(format!("seed {seed}: {what} ({at_star:?})"));
        }
    }

    let star_routes = Solution {
        vehicles: (1..=n).map(|c| VehiclePlan::from_clients(&[c], Vec::new())).collect(),
    };
    let c = cost(&star_routes, missed, &inst, penalty).map_err(|e| e.to_string())?;
    if !close(c.distance, 2.0 * star) || !close(c.vrp, 2.0 / penalty) {
        return Err(format!("seed {seed}: out-and-back routes ({c:?}, star {star})"));
    }
    if !close(c.total, c.vrp + expect_packing) {
        return Err(format!("seed {seed}: total of out-and-back routes"));
    }
    Ok(())
}
