use super::Point2;
use crate::error::{Error, Result};

/// Sum of Euclidean distances from `at` to every point.
pub fn sum_of_distances(points: &[Point2], at: &Point2) -> f64 {
    points.iter().map(|p| p.distance(at)).sum()
}

/// Geometric median (Fermat–Weber point) by Weiszfeld iteration with the
/// Vardi–Zhang correction for iterates that land on an input point.
///
/// Iteration stops once a step moves less than `tol` or after `max_iters`
/// steps.
pub fn geometric_median(points: &[Point2], tol: f64, max_iters: usize) -> Result<Point2> {
    if points.is_empty() {
        return Err(Error::Geometry("geometric median of an empty set".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Config("geometric median tolerance must be > 0".into()));
    }
    if points.len() == 1 {
        return Ok(points[0]);
    }
    let n = points.len() as f64;
    let mut y = Point2::new(
        points.iter().map(|p| p.x).sum::<f64>() / n,
        points.iter().map(|p| p.y).sum::<f64>() / n,
    );
    // scale-aware coincidence threshold
    let span = points
        .iter()
        .map(|p| p.distance(&y))
        .fold(0.0, f64::max)
        .max(1.0);
    let eps = 1e-12 * span;

    for _ in 0..max_iters {
        let mut wx = 0.0;
        let mut wy = 0.0;
        let mut wsum = 0.0;
        let mut rx = 0.0;
        let mut ry = 0.0;
        let mut coincident = 0usize;
        for p in points {
            let d = p.distance(&y);
            if d <= eps {
                coincident += 1;
                continue;
            }
            let w = 1.0 / d;
            wx += p.x * w;
            wy += p.y * w;
            wsum += w;
            rx += (p.x - y.x) * w;
            ry += (p.y - y.y) * w;
        }
        if wsum == 0.0 {
            // every point coincides with y
            return Ok(y);
        }
        let t = Point2::new(wx / wsum, wy / wsum);
        let next = if coincident == 0 {
            t
        } else {
            let r = rx.hypot(ry);
            let eta = coincident as f64;
            if r <= eta {
                // subgradient condition: y is optimal
                return Ok(y);
            }
            let lam = eta / r;
            Point2::new((1.0 - lam) * t.x + lam * y.x, (1.0 - lam) * t.y + lam * y.y)
        };
        let step = next.distance(&y);
        y = next;
        if step < tol {
            break;
        }
    }
    Ok(y)
}
