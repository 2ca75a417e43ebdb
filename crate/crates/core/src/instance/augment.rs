//! Test-time augmentation: rigid transforms of node locations.

use serde::{Deserialize, Serialize};

use super::Instance;
use crate::geometry::Point;

/// Flips mirror the `[0, 100]` plane, so `x = 10` becomes `x = 90`.
/// Translations do not clamp to the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Translate { dx: f64, dy: f64 },
    FlipX,
    FlipY,
    FlipXY,
}

const PLANE: f64 = 100.0;

impl Transform {
    pub fn apply(&self, p: Point) -> Point {
        match *self {
            Transform::Translate { dx, dy } => Point::new(p.x + dx, p.y + dy),
            Transform::FlipX => Point::new(PLANE - p.x, p.y),
            Transform::FlipY => Point::new(p.x, PLANE - p.y),
            Transform::FlipXY => Point::new(PLANE - p.x, PLANE - p.y),
        }
    }

    /// The transforms of the robustness probe, original first.
    pub fn probe_set() -> Vec<(&'static str, Option<Transform>)> {
        vec![
            ("original", None),
            ("translate(+10,+10)", Some(Transform::Translate { dx: 10.0, dy: 10.0 })),
            ("translate(+20,+20)", Some(Transform::Translate { dx: 20.0, dy: 20.0 })),
            ("flip_x", Some(Transform::FlipX)),
            ("flip_y", Some(Transform::FlipY)),
            ("flip_xy", Some(Transform::FlipXY)),
        ]
    }
}

/// Applies `transform` to the depot and every client.
pub fn augment(instance: &Instance, transform: Transform) -> Instance {
    instance.map_locations(|p| transform.apply(p))
}
