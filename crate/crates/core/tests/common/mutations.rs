//! A small hand-built solution and eight single-constraint mutations of it.
//!
//! Vehicle: height 2, width 2, length 6, capacity 10. The door is at l = 6.
//!
//! ```text
//! vehicle 0, route 0-1-2-4-0, floor plan (w rows, l columns):
//!   w1  .  .  2  2  1b 1b
//!   w0  4  4  2  2  1a 1a
//! vehicle 1, route 0-3-0: package 3 rotated at the origin
//! ```
//!
//! Package 1a is fragile. Every box stands on the floor.

use cvrp3d::geometry::Point;
use cvrp3d::{Extent, Instance, LoadedPackage, Package, PackageId, Placement, Solution, VehiclePlan, VehicleSpec};

pub const P1A: PackageId = PackageId(0);
pub const P1B: PackageId = PackageId(1);
pub const P2: PackageId = PackageId(2);
pub const P3: PackageId = PackageId(3);
pub const P4: PackageId = PackageId(4);

fn pkg(client: usize, index: usize, dims: [u32; 3], weight: f64, fragile: bool) -> Package {
    Package {
        client,
        index,
        height: dims[0],
        width: dims[1],
        length: dims[2],
        weight,
        fragile,
    }
}

pub fn instance() -> Instance {
    Instance::new(
        "mutations",
        Point::new(0.0, 0.0),
        vec![Point::new(1.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 3.0), Point::new(0.0, 4.0)],
        vec![
            pkg(1, 1, [1, 1, 2], 1.0, true),
            pkg(1, 2, [1, 1, 2], 1.0, false),
            pkg(2, 1, [1, 2, 2], 1.0, false),
            pkg(3, 1, [1, 2, 1], 6.0, false),
            pkg(4, 1, [1, 1, 2], 6.0, false),
        ],
        VehicleSpec::new(2, 2, 6, 10.0).unwrap(),
        2,
    )
    .unwrap()
}

fn lp(package: PackageId, at: [u32; 3], size: [u32; 3], rotated: bool, load_order: usize) -> LoadedPackage {
    LoadedPackage {
        package,
        placement: Placement {
            h: at[0],
            w: at[1],
            l: at[2],
            rotated,
        },
        extent: Extent {
            height: size[0],
            width: size[1],
            length: size[2],
        },
        load_order,
    }
}

pub fn base() -> Solution {
    Solution {
        vehicles: vec![
            VehiclePlan {
                route: vec![0, 1, 2, 4, 0],
                packages: vec![
                    lp(P4, [0, 0, 0], [1, 1, 2], false, 0),
                    lp(P2, [0, 0, 2], [1, 2, 2], false, 1),
                    lp(P1A, [0, 0, 4], [1, 1, 2], false, 2),
                    lp(P1B, [0, 1, 4], [1, 1, 2], false, 3),
                ],
            },
            VehiclePlan {
                route: vec![0, 3, 0],
                packages: vec![lp(P3, [0, 0, 0], [1, 1, 2], true, 0)],
            },
        ],
    }
}

fn find(sol: &mut Solution, id: PackageId) -> &mut LoadedPackage {
    sol.vehicles
        .iter_mut()
        .flat_map(|v| v.packages.iter_mut())
        .find(|p| p.package == id)
        .unwrap()
}

/// `(constraint id, description, mutated solution)` for constraints 1 to 8.
pub fn mutations() -> Vec<(u8, &'static str, Solution)> {
    let mut out = Vec::new();

    let mut s = base();
    s.vehicles[0].route.pop();
    out.push((1, "trailing depot dropped", s));

    let mut s = base();
    s.vehicles[0].route = vec![0, 1, 2, 4, 3, 0];
    out.push((2, "client 3 visited by both vehicles", s));

    let mut s = base();
    let moved = s.vehicles.remove(1).packages[0];
    s.vehicles[0].route = vec![0, 1, 2, 4, 3, 0];
    s.vehicles[0].packages.push(LoadedPackage {
        placement: Placement { h: 0, w: 1, l: 0, rotated: true },
        load_order: 4,
        ..moved
    });
    out.push((3, "client 3 moved into vehicle 0, 15 > 10", s));

    let mut s = base();
    find(&mut s, P1B).placement.w = 0;
    out.push((4, "package 1b moved onto its sibling", s));

    let mut s = base();
    find(&mut s, P2).extent = Extent { height: 2, width: 1, length: 2 };
    out.push((5, "package 2 stood on its side", s));

    let mut s = base();
    let p = find(&mut s, P1B);
    p.placement.h = 1;
    p.placement.w = 0;
    out.push((6, "package 1b stacked on fragile 1a", s));

    let mut s = base();
    find(&mut s, P1B).placement.h = 1;
    out.push((7, "package 1b floating", s));

    let mut s = base();
    s.vehicles[0].route = vec![0, 2, 1, 4, 0];
    out.push((8, "client 2 visited before client 1", s));

    out
}
