use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Point2;
use crate::error::{Error, Result};

/// Outcome of a k-means run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub centers: Vec<Point2>,
    /// Cluster index of every input point.
    pub labels: Vec<usize>,
    /// Sum of squared distances to the assigned centers.
    pub inertia: f64,
    /// Inertia after each assignment pass, oldest first.
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
}

/// Lloyd's algorithm from a seeded k-means++ start.
///
/// Stops when the labels no longer change or after `max_iters` passes. A
/// cluster that loses all its members is re-seeded at the point farthest
/// from its current center (lowest index on ties).
pub fn kmeans(points: &[Point2], k: usize, seed: u64, max_iters: usize) -> Result<ClusterAssignment> {
    if k == 0 {
        return Err(Error::Config("kmeans: k must be >= 1".into()));
    }
    if k > points.len() {
        return Err(Error::Config(format!(
            "kmeans: k = {k} exceeds the number of points {}",
            points.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = plus_plus_init(points, k, &mut rng);
    let mut labels = vec![usize::MAX; points.len()];
    let mut trace = Vec::new();
    let mut iterations = 0;

    loop {
        let (changed, inertia) = assign(points, &centers, &mut labels);
        trace.push(inertia);
        iterations += 1;
        if !changed || iterations >= max_iters.max(1) {
            break;
        }
        update_centers(points, &mut centers, &mut labels);
    }

    let inertia = *trace.last().expect("at least one pass");
    Ok(ClusterAssignment {
        centers,
        labels,
        inertia,
        inertia_trace: trace,
        iterations,
    })
}

fn plus_plus_init(points: &[Point2], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let mut centers = Vec::with_capacity(k);
    centers.push(points[rng.random_range(0..points.len())]);
    let mut d2: Vec<f64> = points.iter().map(|p| p.distance_sq(&centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // all remaining points coincide with chosen centers
            rng.random_range(0..points.len())
        };
        let c = points[next];
        centers.push(c);
        for (w, p) in d2.iter_mut().zip(points) {
            *w = w.min(p.distance_sq(&c));
        }
    }
    centers
}

fn nearest(p: &Point2, centers: &[Point2]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = p.distance_sq(c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn assign(points: &[Point2], centers: &[Point2], labels: &mut [usize]) -> (bool, f64) {
    let mut changed = false;
    let mut inertia = 0.0;
    for (p, label) in points.iter().zip(labels.iter_mut()) {
        let (j, d) = nearest(p, centers);
        if *label != j {
            *label = j;
            changed = true;
        }
        inertia += d;
    }
    (changed, inertia)
}

fn update_centers(points: &[Point2], centers: &mut [Point2], labels: &mut [usize]) {
    let k = centers.len();
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for (p, &l) in points.iter().zip(labels.iter()) {
        sums[l].0 += p.x;
        sums[l].1 += p.y;
        sums[l].2 += 1;
    }
    for (c, &(sx, sy, n)) in centers.iter_mut().zip(&sums) {
        if n > 0 {
            *c = Point2::new(sx / n as f64, sy / n as f64);
        }
    }
    for j in 0..k {
        if sums[j].2 > 0 {
            continue;
        }
        // Re-seed an empty cluster at the worst-served point. Only points whose
        // own cluster keeps other members are eligible, so no new hole opens.
        let mut counts: Vec<usize> = sums.iter().map(|s| s.2).collect();
        let mut far = None;
        let mut far_d = -1.0;
        for (i, p) in points.iter().enumerate() {
            let l = labels[i];
            if counts[l] < 2 {
                continue;
            }
            let d = p.distance_sq(&centers[l]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        if let Some(i) = far {
            counts[labels[i]] -= 1;
            sums[labels[i]].2 -= 1;
            centers[j] = points[i];
            labels[i] = j;
            sums[j].2 = 1;
        }
    }
}
