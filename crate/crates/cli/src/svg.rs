//! SVG rendering of a solution: a route map on the [0, 100] plane followed by
//! one top view per vehicle.

use std::fmt::Write;

use cvrp3d::{Instance, Solution};

const MAP: f64 = 400.0;
const MARGIN: f64 = 20.0;
const CELL: f64 = 4.0;

fn colour(client: usize) -> String {
    format!("hsl({:.1},65%,55%)", (client as f64 * 137.508) % 360.0)
}

/// Renders routes and packings. Boxes in a top view are drawn lowest first,
/// so each column shows its topmost box; fragile boxes are hatched.
pub fn render(instance: &Instance, solution: &Solution) -> String {
    let veh = instance.vehicle();
    let (vw, vl) = (f64::from(veh.width) * CELL, f64::from(veh.length) * CELL);
    let per_row = ((MAP + MARGIN) / (vw + MARGIN)).floor().max(1.0) as usize;
    let rows = solution.vehicles.len().div_ceil(per_row);
    let width = MAP + 2.0 * MARGIN;
    let height = MAP + 2.0 * MARGIN + rows as f64 * (vl + 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="9">"#
    );
    s.push_str(
        "<defs><pattern id=\"hatch\" width=\"4\" height=\"4\" patternUnits=\"userSpaceOnUse\">\
         <path d=\"M0,4 L4,0\" stroke=\"black\" stroke-width=\"0.7\"/></pattern></defs>\n",
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{MAP}" height="{MAP}" fill="none" stroke="grey"/>"#
    );

    let to_map = |node: usize| {
        let p = instance.location(node).expect("route node checked by validation");
        (MARGIN + p.x / 100.0 * MAP, MARGIN + MAP - p.y / 100.0 * MAP)
    };
    for (v, plan) in solution.vehicles.iter().enumerate() {
        let pts: Vec<String> = plan
            .route
            .iter()
            .map(|&n| {
                let (x, y) = to_map(n);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"><title>vehicle {v}</title></polyline>"#,
            pts.join(" "),
            colour(v + 1000)
        );
    }
    for c in 1..=instance.num_clients() {
        let (x, y) = to_map(c);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{}"/>"#, colour(c));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{c}</text>"#, x + 5.0, y - 5.0);
    }
    let (dx, dy) = to_map(0);
    let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="black"/>"#, dx - 4.0, dy - 4.0);

    for (v, plan) in solution.vehicles.iter().enumerate() {
        let ox = MARGIN + (v % per_row) as f64 * (vw + MARGIN);
        let oy = MAP + 3.0 * MARGIN + (v / per_row) as f64 * (vl + 2.0 * MARGIN);
        let _ = writeln!(s, r#"<text x="{ox}" y="{:.2}">vehicle {v} (door at bottom)</text>"#, oy - 4.0);
        let _ = writeln!(
            s,
            r#"<rect x="{ox}" y="{oy}" width="{vw}" height="{vl}" fill="white" stroke="black"/>"#
        );
        let mut boxes = plan.packages.clone();
        boxes.sort_by_key(|b| (b.placement.h + b.extent.height, b.load_order));
        for b in boxes {
            let Some(p) = instance.package(b.package) else { continue };
            let x = ox + f64::from(b.placement.w) * CELL;
            let y = oy + f64::from(b.placement.l) * CELL;
            let (w, l) = (f64::from(b.extent.width) * CELL, f64::from(b.extent.length) * CELL);
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{w}" height="{l}" fill="{}" stroke="black" stroke-width="0.5"><title>package {} client {} h={}..{}</title></rect>"#,
                colour(p.client),
                b.package.0,
                p.client,
                b.placement.h,
                b.placement.h + b.extent.height
            );
            if p.fragile {
                let _ = writeln!(s, r#"<rect x="{x}" y="{y}" width="{w}" height="{l}" fill="url(#hatch)"/>"#);
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
