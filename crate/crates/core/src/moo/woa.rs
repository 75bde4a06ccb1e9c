//! Whale position updates on the unit box.

use rand::Rng;

/// Linearly decreasing control parameter, 2 at `i = 0` and 0 at `i = i_max`.
pub fn update_a(i: usize, i_max: usize) -> f64 {
    2.0 * (1.0 - i as f64 / i_max as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WoaMove {
    Encircle,
    Search,
    Spiral,
}

/// The random quantities of one update.
#[derive(Debug, Clone, PartialEq)]
pub struct WoaDraw {
    pub tau: f64,
    /// Per-dimension `r` for `A`.
    pub r_a: Vec<f64>,
    /// Per-dimension `r` for `C`.
    pub r_c: Vec<f64>,
    /// Spiral parameter in [-1, 1].
    pub l: f64,
}

impl WoaDraw {
    pub fn sample<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let tau = rng.random::<f64>();
        let r_a = (0..dim).map(|_| rng.random::<f64>()).collect();
        let r_c = (0..dim).map(|_| rng.random::<f64>()).collect();
        let l = rng.random_range(-1.0..=1.0);
        Self { tau, r_a, r_c, l }
    }
}

/// Deterministic update given the draw; the result is not clamped.
pub fn woa_move(x: &[f64], leader: &[f64], random_agent: &[f64], a: f64, b: f64, draw: &WoaDraw) -> (Vec<f64>, WoaMove) {
    let big_a: Vec<f64> = draw.r_a.iter().map(|r| 2.0 * a * r - a).collect();
    let c: Vec<f64> = draw.r_c.iter().map(|r| 2.0 * r).collect();
    if draw.tau < 0.5 {
        let (target, kind) = if big_a.iter().all(|v| v.abs() < 1.0) {
            (leader, WoaMove::Encircle)
        } else {
            (random_agent, WoaMove::Search)
        };
        let next = (0..x.len())
            .map(|d| {
                let dist = (c[d] * target[d] - x[d]).abs();
                target[d] - big_a[d] * dist
            })
            .collect();
        (next, kind)
    } else {
        let f = (b * draw.l).exp() * (2.0 * std::f64::consts::PI * draw.l).cos();
        let next = (0..x.len()).map(|d| (leader[d] - x[d]).abs() * f + leader[d]).collect();
        (next, WoaMove::Spiral)
    }
}

/// One whale update, clamped to the unit box.
pub fn woa_update<R: Rng + ?Sized>(
    x: &[f64],
    leader: &[f64],
    random_agent: &[f64],
    a: f64,
    b: f64,
    rng: &mut R,
) -> Vec<f64> {
    let draw = WoaDraw::sample(x.len(), rng);
    let (mut next, _) = woa_move(x, leader, random_agent, a, b, &draw);
    for v in &mut next {
        *v = v.clamp(0.0, 1.0);
    }
    next
}
