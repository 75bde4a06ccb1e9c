//! Constrained non-dominated sorting and crowding distance (minimization).

/// Plain Pareto domination: `a` no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Deb's rule: feasible beats infeasible, lower violation beats higher, and
/// two feasible members compare by Pareto domination.
pub fn constrained_dominates(a: &[f64], va: f64, b: &[f64], vb: f64) -> bool {
    match (va > 0.0, vb > 0.0) {
        (false, true) => true,
        (true, false) => false,
        (true, true) => va < vb,
        (false, false) => dominates(a, b),
    }
}

/// Partitions `0..objectives.len()` into fronts, best first. Members inside a
/// front are in ascending index order.
pub fn fast_nondominated_sort<T: AsRef<[f64]>>(objectives: &[T], violations: &[f64]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    assert_eq!(n, violations.len());
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (oi, oj) = (objectives[i].as_ref(), objectives[j].as_ref());
            if constrained_dominates(oi, violations[i], oj, violations[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if constrained_dominates(oj, violations[j], oi, violations[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of every member of one front.
pub fn crowding_distance<T: AsRef<[f64]>>(front: &[T]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let k = front[0].as_ref().len();
    let mut dist = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..k {
        let val = |i: usize| front[i].as_ref()[obj];
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let lo = val(order[0]);
        let hi = val(order[n - 1]);
        let span = hi - lo;
        if !(span > 0.0) || !span.is_finite() {
            continue;
        }
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for w in 1..n - 1 {
            dist[order[w]] += (val(order[w + 1]) - val(order[w - 1])) / span;
        }
    }
    dist
}

/// Front rank (1-based) and crowding distance of every member.
pub fn rank_and_crowding<T: AsRef<[f64]>>(objectives: &[T], violations: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let n = objectives.len();
    let mut ranks = vec![0; n];
    let mut crowding = vec![0.0; n];
    for (r, front) in fast_nondominated_sort(objectives, violations).iter().enumerate() {
        let objs: Vec<&[f64]> = front.iter().map(|&i| objectives[i].as_ref()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&objs)) {
            ranks[i] = r + 1;
            crowding[i] = d;
        }
    }
    (ranks, crowding)
}

/// Crowded-comparison order: lower rank, then larger crowding, then lower index.
pub fn crowded_order(ranks: &[usize], crowding: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ranks.len()).collect();
    idx.sort_by(|&a, &b| {
        ranks[a]
            .cmp(&ranks[b])
            .then(crowding[b].total_cmp(&crowding[a]))
            .then(a.cmp(&b))
    });
    idx
}

/// Binary tournament on (rank, crowding); the first draw wins ties.
pub fn crowded_tournament<R: rand::Rng + ?Sized>(ranks: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let a = rng.random_range(0..ranks.len());
    let b = rng.random_range(0..ranks.len());
    let better = |i: usize, j: usize| ranks[i] < ranks[j] || (ranks[i] == ranks[j] && crowding[i] > crowding[j]);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// Indices of the `k` survivors of elitist truncation, best first.
pub fn select_survivors<T: AsRef<[f64]>>(objectives: &[T], violations: &[f64], k: usize) -> Vec<usize> {
    let (ranks, crowding) = rank_and_crowding(objectives, violations);
    let mut order = crowded_order(&ranks, &crowding);
    order.truncate(k);
    order
}

/// Min-max normalize each objective over the set (degenerate objective → 0)
/// and return the index with the smallest normalized sum; ties go to the
/// lowest index.
pub fn compromise_index<T: AsRef<[f64]>>(objectives: &[T]) -> Option<usize> {
    let first = objectives.first()?.as_ref();
    let k = first.len();
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for o in objectives {
        for (j, &v) in o.as_ref().iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let score = |o: &[f64]| -> f64 {
        o.iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = hi[j] - lo[j];
                if span > 0.0 && span.is_finite() {
                    (v - lo[j]) / span
                } else {
                    0.0
                }
            })
            .sum()
    };
    let mut best = 0;
    let mut best_score = f64::INFINITY;
    for (i, o) in objectives.iter().enumerate() {
        let s = score(o.as_ref());
        if s < best_score {
            best = i;
            best_score = s;
        }
    }
    Some(best)
}
