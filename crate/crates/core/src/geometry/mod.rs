//! Geometry primitives used by the pre-deployment stage.

mod kmeans;
mod median;
mod voronoi;

use serde::{Deserialize, Serialize};

pub use kmeans::{kmeans, ClusterAssignment};
pub use median::{geometric_median, sum_of_distances};
pub use voronoi::{voronoi, point_in_convex_polygon, VoronoiDiagram};

use crate::scenario::Point3;

/// A point in the horizontal plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn with_z(self, z: f64) -> Point3 {
        Point3::new(self.x, self.y, z)
    }
}

impl From<Point3> for Point2 {
    fn from(p: Point3) -> Self {
        Point2::new(p.x, p.y)
    }
}

/// Euclidean distance in 3D.
pub fn distance(a: &Point3, b: &Point3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Elevation angle of `uav` seen from `gu`, in degrees.
///
/// A UAV directly overhead gives 90°, the limit of the arctangent.
pub fn elevation_angle_deg(gu: &Point3, uav: &Point3) -> f64 {
    let horizontal = (uav.x - gu.x).hypot(uav.y - gu.y);
    (uav.z - gu.z).atan2(horizontal).to_degrees()
}
