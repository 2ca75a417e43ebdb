//! Plain-text instance formats.
//!
//! The native layout, written by [`to_instance_text`]:
//!
//! ```text
//! # comment lines and blank lines are ignored
//! name E016-03m
//! n 15
//! fleet 5
//! capacity 90
//! vehicle 30 25 60          # height width length, in voxels
//! 0 30 40 0                 # n + 1 node lines: id x y m_i (node 0 is the depot)
//! 1 37 52 2
//! ...
//! 1 10 8 21 0 3.5           # sum(m_i) item lines: client h w l fragile weight
//! ```
//!
//! The classic benchmark layout is also accepted. It starts with a `Name:`
//! line, carries `Key: value` header lines, a `Capacity - height - width -
//! length` block, a `Node - x - y - demand` block whose first node is the
//! depot, and one item line per client of the form
//! `node m_i h w l fragile [h w l fragile ...]`. Client demand is split
//! across that client's items.

use std::fmt::Write as _;

use super::{Instance, Package, VehicleSpec};
use crate::error::{ParseError, Result};
use crate::geometry::Point;

/// Parses either text layout, picking the classic one when the first
/// meaningful line starts with `Name:`.
pub fn parse_gendreau(text: &str) -> Result<Instance> {
    let first = lines(text).next().map(|(_, l)| l).unwrap_or("");
    if first.to_ascii_lowercase().starts_with("name:") {
        parse_classic(text)
    } else {
        parse_instance_text(text)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty())
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{tok}`")))
}

fn flag(line: usize, tok: Option<&str>) -> Result<bool, ParseError> {
    match num::<u8>(line, tok, "fragility flag")? {
        0 => Ok(false),
        1 => Ok(true),
        v => Err(ParseError::new(line, format!("fragility flag must be 0 or 1, got {v}"))),
    }
}

/// Parses the native text layout.
pub fn parse_instance_text(text: &str) -> Result<Instance> {
    let mut it = lines(text).peekable();
    let mut name = None;
    let mut n = None;
    let mut fleet = None;
    let mut capacity = None;
    let mut dims = None;
    let mut last_line = 0;

    while let Some(&(ln, line)) = it.peek() {
        let mut tok = line.split_whitespace();
        let key = tok.next().unwrap_or_default();
        match key {
            "name" => name = Some(tok.collect::<Vec<_>>().join(" ")),
            "n" => n = Some(num::<usize>(ln, tok.next(), "client count")?),
            "fleet" => fleet = Some(num::<usize>(ln, tok.next(), "fleet size")?),
            "capacity" => capacity = Some(num::<f64>(ln, tok.next(), "capacity")?),
            "vehicle" => {
                dims = Some([
                    num::<u32>(ln, tok.next(), "vehicle height")?,
                    num::<u32>(ln, tok.next(), "vehicle width")?,
                    num::<u32>(ln, tok.next(), "vehicle length")?,
                ])
            }
            _ => break,
        }
        last_line = ln;
        it.next();
    }
    let missing = |what: &str| ParseError::new(last_line + 1, format!("missing header `{what}`"));
    let name = name.ok_or_else(|| missing("name"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let fleet = fleet.ok_or_else(|| missing("fleet"))?;
    let capacity = capacity.ok_or_else(|| missing("capacity"))?;
    let [h, w, l] = dims.ok_or_else(|| missing("vehicle"))?;
    let vehicle = VehicleSpec {
        height: h,
        width: w,
        length: l,
        weight_capacity: capacity,
    };
    vehicle
        .check()
        .map_err(|e| ParseError::new(last_line, e.to_string()))?;

    let mut depot = None;
    let mut clients = vec![None; n];
    let mut counts = vec![0usize; n + 1];
    for expected in 0..=n {
        let (ln, line) = it.next().ok_or_else(|| {
            ParseError::new(
                last_line + 1,
                format!("node section truncated: expected {} node lines, found {expected}", n + 1),
            )
        })?;
        last_line = ln;
        let mut tok = line.split_whitespace();
        let id: usize = num(ln, tok.next(), "node id")?;
        let x: f64 = num(ln, tok.next(), "x coordinate")?;
        let y: f64 = num(ln, tok.next(), "y coordinate")?;
        let m: usize = num(ln, tok.next(), "package count")?;
        if tok.next().is_some() {
            return Err(ParseError::new(ln, "trailing fields on node line").into());
        }
        if id > n {
            return Err(ParseError::new(ln, format!("node id {id} exceeds n = {n}")).into());
        }
        let p = Point::new(x, y);
        if id == 0 {
            if depot.replace(p).is_some() {
                return Err(ParseError::new(ln, "duplicate depot line").into());
            }
            if m != 0 {
                return Err(ParseError::new(ln, "depot cannot have packages").into());
            }
        } else {
            if clients[id - 1].replace(p).is_some() {
                return Err(ParseError::new(ln, format!("duplicate node {id}")).into());
            }
            if m == 0 {
                return Err(ParseError::new(ln, format!("client {id} has no packages")).into());
            }
            counts[id] = m;
        }
    }
    let depot = depot.ok_or_else(|| ParseError::new(last_line, "node section has no depot (id 0)"))?;
    let clients: Vec<Point> = clients.into_iter().map(|c| c.unwrap()).collect();

    let total: usize = counts.iter().sum();
    let mut seen = vec![0usize; n + 1];
    let mut packages = Vec::with_capacity(total);
    for expected in 0..total {
        let (ln, line) = it.next().ok_or_else(|| {
            ParseError::new(
                last_line + 1,
                format!("item section truncated: expected {total} item lines, found {expected}"),
            )
        })?;
        last_line = ln;
        let mut tok = line.split_whitespace();
        let client: usize = num(ln, tok.next(), "item client")?;
        if client == 0 || client > n {
            return Err(ParseError::new(ln, format!("item references unknown client {client}")).into());
        }
        let height = num(ln, tok.next(), "item height")?;
        let width = num(ln, tok.next(), "item width")?;
        let length = num(ln, tok.next(), "item length")?;
        let fragile = flag(ln, tok.next())?;
        let weight = num(ln, tok.next(), "item weight")?;
        if tok.next().is_some() {
            return Err(ParseError::new(ln, "trailing fields on item line").into());
        }
        seen[client] += 1;
        if seen[client] > counts[client] {
            return Err(ParseError::new(
                ln,
                format!("client {client} declares {} items but has more", counts[client]),
            )
            .into());
        }
        packages.push(Package {
            client,
            index: seen[client],
            height,
            width,
            length,
            weight,
            fragile,
        });
    }
    if let Some((ln, _)) = it.next() {
        return Err(ParseError::new(ln, "unexpected content after the item section").into());
    }
    Instance::new(name, depot, clients, packages, vehicle, fleet)
        .map_err(|e| ParseError::new(last_line, e.to_string()).into())
}

/// Serialises to the native text layout; [`parse_instance_text`] reads it
/// back to an identical instance.
pub fn to_instance_text(inst: &Instance) -> String {
    let v = inst.vehicle();
    let mut out = String::new();
    let _ = writeln!(out, "name {}", inst.name());
    let _ = writeln!(out, "n {}", inst.num_clients());
    let _ = writeln!(out, "fleet {}", inst.fleet_size());
    let _ = writeln!(out, "capacity {}", v.weight_capacity);
    let _ = writeln!(out, "vehicle {} {} {}", v.height, v.width, v.length);
    let d = inst.depot();
    let _ = writeln!(out, "0 {} {} 0", d.x, d.y);
    for c in inst.clients() {
        let m = inst.package_ids_of(c.id).count();
        let _ = writeln!(out, "{} {} {} {}", c.id, c.location.x, c.location.y, m);
    }
    for p in inst.packages() {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            p.client, p.height, p.width, p.length, p.fragile as u8, p.weight
        );
    }
    out
}

fn parse_classic(text: &str) -> Result<Instance> {
    let mut it = lines(text).peekable();
    let mut name = String::new();
    let mut n = None;
    let mut fleet = None;
    let mut vehicle = None;
    let mut last_line = 0;

    // Header: `Key: value` lines until the first block title.
    while let Some(&(ln, line)) = it.peek() {
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("capacity") || lower.starts_with("node") {
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| ParseError::new(ln, format!("expected `Key: value`, got `{line}`")))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        if key == "name" {
            name = value.to_string();
        } else if key.contains("customers") || key.contains("clients") {
            n = Some(num::<usize>(ln, Some(value), "number of customers")?);
        } else if key.contains("vehicles") {
            fleet = Some(num::<usize>(ln, Some(value), "number of vehicles")?);
        }
        last_line = ln;
        it.next();
    }
    let n = n.ok_or_else(|| ParseError::new(last_line + 1, "missing header `Number of Customers`"))?;
    let fleet = fleet.ok_or_else(|| ParseError::new(last_line + 1, "missing header `Number of Vehicles`"))?;

    let mut depot = None;
    let mut clients = Vec::new();
    let mut demands = Vec::new();
    let mut packages = Vec::new();
    while let Some((ln, title)) = it.next() {
        last_line = ln;
        let lower = title.to_ascii_lowercase();
        if lower.starts_with("capacity") {
            let (ln, line) = it
                .next()
                .ok_or_else(|| ParseError::new(ln + 1, "capacity section truncated"))?;
            last_line = ln;
            let mut tok = line.split_whitespace();
            let cap: f64 = num(ln, tok.next(), "capacity")?;
            let h = num(ln, tok.next(), "vehicle height")?;
            let w = num(ln, tok.next(), "vehicle width")?;
            let l = num(ln, tok.next(), "vehicle length")?;
            vehicle = Some(VehicleSpec {
                height: h,
                width: w,
                length: l,
                weight_capacity: cap,
            });
        } else if lower.starts_with("node") && lower.contains("items") {
            for expected in 0..n {
                let (ln, line) = it.next().ok_or_else(|| {
                    ParseError::new(
                        last_line + 1,
                        format!("item section truncated: expected {n} client lines, found {expected}"),
                    )
                })?;
                last_line = ln;
                let mut tok = line.split_whitespace();
                let node: usize = num(ln, tok.next(), "node id")?;
                if node < 2 || node > n + 1 {
                    return Err(ParseError::new(ln, format!("item line for unknown node {node}")).into());
                }
                let client = node - 1;
                let m: usize = num(ln, tok.next(), "item count")?;
                if m == 0 {
                    return Err(ParseError::new(ln, format!("node {node} has no items")).into());
                }
                let demand = *demands
                    .get(client)
                    .ok_or_else(|| ParseError::new(ln, "item block must follow the node block"))?;
                let weights = split_demand(demand, m);
                for (k, weight) in weights.into_iter().enumerate() {
                    let height = num(ln, tok.next(), "item height")?;
                    let width = num(ln, tok.next(), "item width")?;
                    let length = num(ln, tok.next(), "item length")?;
                    let fragile = flag(ln, tok.next())?;
                    packages.push(Package {
                        client,
                        index: k + 1,
                        height,
                        width,
                        length,
                        weight,
                        fragile,
                    });
                }
                if tok.next().is_some() {
                    return Err(ParseError::new(ln, format!("node {node} has more than {m} items")).into());
                }
            }
        } else if lower.starts_with("node") {
            demands = vec![0.0; n + 1];
            for expected in 0..=n {
                let (ln, line) = it.next().ok_or_else(|| {
                    ParseError::new(
                        last_line + 1,
                        format!("node section truncated: expected {} node lines, found {expected}", n + 1),
                    )
                })?;
                last_line = ln;
                let mut tok = line.split_whitespace();
                let node: usize = num(ln, tok.next(), "node id")?;
                if node != expected + 1 {
                    return Err(ParseError::new(ln, format!("expected node {}, got {node}", expected + 1)).into());
                }
                let x: f64 = num(ln, tok.next(), "x coordinate")?;
                let y: f64 = num(ln, tok.next(), "y coordinate")?;
                let demand: f64 = num(ln, tok.next(), "demand")?;
                let p = Point::new(x, y);
                if expected == 0 {
                    depot = Some(p);
                } else {
                    clients.push(p);
                    demands[expected] = demand;
                }
            }
        } else {
            return Err(ParseError::new(ln, format!("unexpected section `{title}`")).into());
        }
    }
    let vehicle = vehicle.ok_or_else(|| ParseError::new(last_line + 1, "missing capacity section"))?;
    let depot = depot.ok_or_else(|| ParseError::new(last_line + 1, "missing node section"))?;
    if packages.is_empty() {
        return Err(ParseError::new(last_line + 1, "missing item section").into());
    }
    Instance::new(name, depot, clients, packages, vehicle, fleet)
        .map_err(|e| ParseError::new(last_line, e.to_string()).into())
}

/// Spreads a client demand over `m` items: integral demands are split into
/// integers with the remainder on the first items, others evenly.
fn split_demand(demand: f64, m: usize) -> Vec<f64> {
    if demand.fract() == 0.0 && demand >= 0.0 && demand < u64::MAX as f64 {
        let d = demand as u64;
        let m64 = m as u64;
        (0..m64)
            .map(|k| (d / m64 + u64::from(k < d % m64)) as f64)
            .collect()
    } else {
        vec![demand / m as f64; m]
    }
}
