//! Random training-style instances and the fleet sizing rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Instance, Package, VehicleSpec, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Coordinates are snapped to multiples of this step. Dyadic values keep
/// integer translations and `100 - x` flips exact in floating point, so
/// distance-driven behaviour is bit-for-bit invariant under augmentation.
const COORD_STEP: f64 = 1.0 / 65536.0;

/// Sampling ranges for [`generate`]. Defaults reproduce the training
/// distribution: 15 clients on the `[0, 100]²` plane, a 6×5×12 vehicle,
/// package sides between 20% and 60% of the vehicle side, one to three
/// packages per client, integer weights 1..=30 and 25% fragile packages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub fragile_probability: f64,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub vehicle: VehicleSpec,
    /// Lower and upper package side as a fraction of the vehicle side.
    pub dim_fraction: [f64; 2],
    /// Allowed package counts per client, drawn uniformly.
    pub packages_per_client: Vec<usize>,
    /// Inclusive integer weight range per package.
    pub weight_range: [u32; 2],
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n: 15,
            fragile_probability: 0.25,
            x_range: [0.0, 100.0],
            y_range: [0.0, 100.0],
            vehicle: VehicleSpec {
                height: 6,
                width: 5,
                length: 12,
                weight_capacity: 90.0,
            },
            dim_fraction: [0.2, 0.6],
            packages_per_client: vec![1, 2, 3],
            weight_range: [1, 30],
            seed: 0,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GenParamsDoc {
    format_version: u32,
    #[serde(flatten)]
    params: GenParams,
}

impl GenParams {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        self.vehicle.check()?;
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.fragile_probability) {
            return bad(format!("fragile probability {} outside [0, 1]", self.fragile_probability));
        }
        for (name, r) in [("x", self.x_range), ("y", self.y_range)] {
            if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
                return bad(format!("{name} range {r:?} is empty"));
            }
        }
        let [lo, hi] = self.dim_fraction;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return bad(format!("dimension fractions {:?} must satisfy 0 < lo <= hi <= 1", self.dim_fraction));
        }
        if self.packages_per_client.is_empty() || self.packages_per_client.contains(&0) {
            return bad("packages_per_client must be non-empty and positive".into());
        }
        if self.weight_range[0] > self.weight_range[1] {
            return bad(format!("weight range {:?} is empty", self.weight_range));
        }
        Ok(())
    }

    /// Inclusive voxel bounds for a package side along a vehicle side of
    /// `side` voxels. Bounds are rounded inwards so the scaled side always
    /// stays within the configured fractions, with a floor of one voxel.
    pub fn side_bounds(&self, side: u32) -> (u32, u32) {
        let lo = (self.dim_fraction[0] * side as f64 - 1e-9).ceil().max(1.0) as u32;
        let hi = (self.dim_fraction[1] * side as f64 + 1e-9).floor().min(side as f64) as u32;
        (lo, hi.max(lo))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GenParamsDoc {
            format_version: FORMAT_VERSION,
            params: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GenParamsDoc = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        doc.params.check()?;
        Ok(doc.params)
    }
}

fn coordinate(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> f64 {
    let raw = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
    ((raw / COORD_STEP).round() * COORD_STEP).clamp(lo, hi)
}

/// Samples an instance. The result depends only on `params`.
pub fn generate(params: &GenParams) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let v = params.vehicle;
    let bounds = [
        params.side_bounds(v.height),
        params.side_bounds(v.width),
        params.side_bounds(v.length),
    ];
    let depot = Point::new(
        coordinate(&mut rng, params.x_range),
        coordinate(&mut rng, params.y_range),
    );
    let mut clients = Vec::with_capacity(params.n);
    let mut packages = Vec::new();
    for client in 1..=params.n {
        clients.push(Point::new(
            coordinate(&mut rng, params.x_range),
            coordinate(&mut rng, params.y_range),
        ));
        let m = params.packages_per_client[rng.gen_range(0..params.packages_per_client.len())];
        for index in 1..=m {
            let [h, w, l] = bounds.map(|(lo, hi)| rng.gen_range(lo..=hi));
            let weight = rng.gen_range(params.weight_range[0]..=params.weight_range[1]) as f64;
            let fragile = rng.gen_bool(params.fragile_probability);
            packages.push(Package {
                client,
                index,
                height: h,
                width: w,
                length: l,
                weight,
                fragile,
            });
        }
    }
    let volume = packages.iter().map(Package::volume).sum();
    let weight = packages.iter().map(|p| p.weight).sum();
    let fleet = fleet_size(volume, weight, &v)?;
    Instance::new(
        format!("gen-n{}-s{}", params.n, params.seed),
        depot,
        clients,
        packages,
        v,
        fleet,
    )
}

/// Twice the number of vehicles needed by volume or by weight alone,
/// whichever is larger, and never fewer than two.
pub fn fleet_size(total_volume: u64, total_weight: f64, vehicle: &VehicleSpec) -> Result<usize> {
    vehicle.check()?;
    if !(total_weight.is_finite() && total_weight >= 0.0) {
        return Err(Error::InvalidInstance(format!("invalid total weight {total_weight}")));
    }
    let by_volume = total_volume.div_ceil(vehicle.volume()) as usize;
    let by_weight = (total_weight / vehicle.weight_capacity).ceil() as usize;
    Ok((2 * by_volume.max(by_weight)).max(2))
}
