//! Next-hover selection by normalized marginal objective change.

/// Picks the candidate minimizing `Σ_j Δf_j / f_j*`.
///
/// `deltas[c]` holds the predicted change of each objective if candidate `c`
/// is visited next; `best` holds the current best value of each objective.
/// An objective whose best value is not positive (nothing served yet) is
/// normalized by the largest absolute change over the candidates instead.
/// Ties go to the lowest index.
pub fn greedy_next_hover(deltas: &[[f64; 3]], best: [f64; 3]) -> usize {
    assert!(!deltas.is_empty(), "no remaining candidates");
    let mut scale = best;
    for (j, s) in scale.iter_mut().enumerate() {
        if !(*s > 0.0 && s.is_finite()) {
            *s = deltas.iter().map(|d| d[j].abs()).fold(0.0, f64::max);
        }
    }
    let score = |d: &[f64; 3]| -> f64 {
        (0..3)
            .map(|j| if scale[j] > 0.0 { d[j] / scale[j] } else { 0.0 })
            .sum()
    };
    let mut best_idx = 0;
    let mut best_score = f64::INFINITY;
    for (c, d) in deltas.iter().enumerate() {
        let s = score(d);
        if s < best_score {
            best_idx = c;
            best_score = s;
        }
    }
    best_idx
}
