use serde::{Deserialize, Serialize};

use super::Point2;
use crate::error::{Error, Result};
use crate::scenario::AreaBounds;

/// Voronoi diagram clipped to a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiDiagram {
    pub seeds: Vec<Point2>,
    /// Convex cell of each seed, counter-clockwise.
    pub cells: Vec<Vec<Point2>>,
    /// Interior Voronoi vertices followed by the points where Voronoi edges
    /// meet the box boundary. Box corners are not included.
    pub vertices: Vec<Point2>,
}

impl VoronoiDiagram {
    /// Index of the seed nearest to `p` (lowest index on ties).
    pub fn nearest_seed(&self, p: &Point2) -> usize {
        nearest_index(&self.seeds, p)
    }
}

pub(crate) fn nearest_index(seeds: &[Point2], p: &Point2) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, s) in seeds.iter().enumerate() {
        let d = s.distance_sq(p);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Builds the bounded Voronoi diagram of `seeds` inside `bounds` by clipping
/// the box with the bisector half-plane of every other seed.
///
/// A single seed yields the whole box as its cell and no vertices.
pub fn voronoi(seeds: &[Point2], bounds: &AreaBounds) -> Result<VoronoiDiagram> {
    if seeds.is_empty() {
        return Err(Error::Geometry("voronoi needs at least one seed".into()));
    }
    for (i, s) in seeds.iter().enumerate() {
        if !(s.x.is_finite() && s.y.is_finite()) || !bounds.contains_xy(s.x, s.y) {
            return Err(Error::Geometry(format!("seed {i} ({}, {}) outside the box", s.x, s.y)));
        }
        for (j, t) in seeds[..i].iter().enumerate() {
            if s == t {
                return Err(Error::Geometry(format!("seeds {j} and {i} coincide")));
            }
        }
    }
    let scale = bounds.width().max(bounds.height());
    let tol = 1e-9 * scale;
    let rect = vec![
        Point2::new(bounds.x_min, bounds.y_min),
        Point2::new(bounds.x_max, bounds.y_min),
        Point2::new(bounds.x_max, bounds.y_max),
        Point2::new(bounds.x_min, bounds.y_max),
    ];

    let cells: Vec<Vec<Point2>> = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut poly = rect.clone();
            for (j, t) in seeds.iter().enumerate() {
                if i == j {
                    continue;
                }
                // keep points p with (t - s)·p <= (|t|² - |s|²)/2
                let nx = t.x - s.x;
                let ny = t.y - s.y;
                let c = 0.5 * (t.x * t.x + t.y * t.y - s.x * s.x - s.y * s.y);
                poly = clip_half_plane(&poly, nx, ny, c);
                if poly.is_empty() {
                    break;
                }
            }
            dedup_ring(poly, tol)
        })
        .collect();

    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    for cell in &cells {
        for v in cell {
            let on_box = (v.x - bounds.x_min).abs() <= tol
                || (v.x - bounds.x_max).abs() <= tol
                || (v.y - bounds.y_min).abs() <= tol
                || (v.y - bounds.y_max).abs() <= tol;
            let ties = equidistant_count(seeds, v, tol);
            let list = if !on_box && ties >= 3 {
                &mut interior
            } else if on_box && ties >= 2 {
                &mut boundary
            } else {
                continue;
            };
            if !list.iter().any(|q: &Point2| q.distance(v) <= 1e3 * tol) {
                list.push(*v);
            }
        }
    }
    interior.extend(boundary);

    Ok(VoronoiDiagram {
        seeds: seeds.to_vec(),
        cells,
        vertices: interior,
    })
}

fn equidistant_count(seeds: &[Point2], p: &Point2, tol: f64) -> usize {
    let dists: Vec<f64> = seeds.iter().map(|s| s.distance(p)).collect();
    let min = dists.iter().cloned().fold(f64::INFINITY, f64::min);
    dists.iter().filter(|&&d| d - min <= 1e3 * tol).count()
}

/// Sutherland–Hodgman clip of a convex polygon against `nx*x + ny*y <= c`.
fn clip_half_plane(poly: &[Point2], nx: f64, ny: f64, c: f64) -> Vec<Point2> {
    let side = |p: &Point2| nx * p.x + ny * p.y - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let sa = side(&a);
        let sb = side(&b);
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

fn dedup_ring(poly: Vec<Point2>, tol: f64) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().is_none_or(|q| q.distance(&p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].distance(out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// Point-in-convex-polygon test for a counter-clockwise ring, with an
/// absolute boundary tolerance in meters.
pub fn point_in_convex_polygon(poly: &[Point2], p: &Point2, tol: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    (0..poly.len()).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let len = a.distance(&b);
        if len == 0.0 {
            return true;
        }
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        cross / len >= -tol
    })
}

/// Shoelace area of a ring.
#[cfg(test)]
pub(crate) fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}
