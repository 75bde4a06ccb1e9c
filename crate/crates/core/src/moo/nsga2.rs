//! Generational NSGA-II over the full mission vector.
//!
//! Layout per T-UAV: for each candidate `[key, z, dx, dy, p_u...]`, then the
//! relay power. Visiting orders are decoded from the keys (random-key
//! encoding, ties by candidate index).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{crowded_tournament, rank_and_crowding, select_survivors, stream, ArchiveMember, HoverSlot, ParetoArchive, Problem};
use crate::error::{Error, Result};
use crate::evaluator::Solution;
use crate::predeploy::Deployment;
use crate::scenario::Scenario;

const TAG: u64 = 0x4e53_4741;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsgaParams {
    pub population: usize,
    /// Total evaluator calls, including the initial population.
    pub evaluations: usize,
    pub seed: u64,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    pub mutation_eta: f64,
    pub offset_radius: f64,
}

impl Default for NsgaParams {
    fn default() -> Self {
        Self {
            population: 30,
            evaluations: 30 * 51,
            seed: 1,
            crossover_prob: 0.9,
            crossover_eta: 15.0,
            mutation_eta: 20.0,
            offset_radius: 50.0,
        }
    }
}

struct Layout {
    /// Per T-UAV: key offsets per candidate, the hover slots, relay offset.
    keys: Vec<Vec<usize>>,
    slots: Vec<HoverSlot>,
    relay: Vec<usize>,
    dim: usize,
}

fn layout(problem: &Problem) -> Layout {
    let mut keys = Vec::new();
    let mut slots = Vec::new();
    let mut relay = Vec::new();
    let mut offset = 0;
    for (t, plan) in problem.deployment.tuavs.iter().enumerate() {
        let mut k = Vec::new();
        for (c, cand) in plan.candidates.iter().enumerate() {
            k.push(offset);
            slots.push(HoverSlot {
                tuav: t,
                candidate: c,
                offset: offset + 1,
            });
            offset += 4 + cand.members.len();
        }
        keys.push(k);
        relay.push(offset);
        offset += 1;
    }
    Layout {
        keys,
        slots,
        relay,
        dim: offset,
    }
}

fn decode(problem: &Problem, lay: &Layout, x: &[f64], base: &Solution) -> Solution {
    let mut sol = base.clone();
    for (t, keys) in lay.keys.iter().enumerate() {
        let mut ord: Vec<usize> = (0..keys.len()).collect();
        ord.sort_by(|&a, &b| x[keys[a]].total_cmp(&x[keys[b]]).then(a.cmp(&b)));
        sol.orderings[t] = ord;
        sol.relay_powers[t] = problem.decode_relay(x[lay.relay[t]]);
    }
    for slot in &lay.slots {
        problem.decode_hover(slot, x, &mut sol);
    }
    sol
}

fn sbx<R: Rng>(p1: &[f64], p2: &[f64], eta: f64, prob: f64, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() > prob {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= 1e-14 {
            continue;
        }
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let u = rng.random::<f64>();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let bq1 = spread(1.0 + 2.0 * y1 / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (1.0 - y2) / (y2 - y1));
        let a = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(0.0, 1.0);
        let b = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(0.0, 1.0);
        if rng.random::<f64>() < 0.5 {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    (c1, c2)
}

fn mutate<R: Rng>(x: &mut [f64], eta: f64, rng: &mut R) {
    let rate = 1.0 / x.len() as f64;
    let pow = 1.0 / (eta + 1.0);
    for v in x.iter_mut() {
        if rng.random::<f64>() >= rate {
            continue;
        }
        let y = *v;
        let r = rng.random::<f64>();
        let dq = if r < 0.5 {
            let val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - y).powf(eta + 1.0);
            val.powf(pow) - 1.0
        } else {
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * y.powf(eta + 1.0);
            1.0 - val.powf(pow)
        };
        *v = (y + dq).clamp(0.0, 1.0);
    }
}

pub fn nsga2(scenario: &Scenario, deployment: &Deployment, params: &NsgaParams) -> Result<ParetoArchive> {
    let n = params.population;
    if n < 4 {
        return Err(Error::Config(format!("population {n} < 4")));
    }
    if params.evaluations < n {
        return Err(Error::Config(format!(
            "evaluation budget {} below population size {n}",
            params.evaluations
        )));
    }
    let problem = Problem {
        scenario,
        deployment,
        radius: params.offset_radius,
    };
    let lay = layout(&problem);
    let base = problem.base_solution();
    let mut rng: ChaCha8Rng = stream(params.seed, TAG, 0, 0);

    let mut xs: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..lay.dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let mut sols: Vec<Solution> = xs.iter().map(|x| decode(&problem, &lay, x, &base)).collect();
    let mut scores = problem.score_all(&sols, true);
    let mut evaluations = n;
    let mut generation = 0;

    while evaluations < params.evaluations {
        let objs: Vec<[f64; 3]> = scores.iter().map(|(o, _)| o.as_array()).collect();
        let viol: Vec<f64> = scores.iter().map(|s| s.1).collect();
        let (ranks, crowding) = rank_and_crowding(&objs, &viol);
        let want = n.min(params.evaluations - evaluations);
        let mut kids: Vec<Vec<f64>> = Vec::with_capacity(want + 1);
        while kids.len() < want {
            let p1 = crowded_tournament(&ranks, &crowding, &mut rng);
            let p2 = crowded_tournament(&ranks, &crowding, &mut rng);
            let (mut c1, mut c2) = sbx(&xs[p1], &xs[p2], params.crossover_eta, params.crossover_prob, &mut rng);
            mutate(&mut c1, params.mutation_eta, &mut rng);
            mutate(&mut c2, params.mutation_eta, &mut rng);
            kids.push(c1);
            kids.push(c2);
        }
        kids.truncate(want);
        let kid_sols: Vec<Solution> = kids.iter().map(|x| decode(&problem, &lay, x, &base)).collect();
        let kid_scores = problem.score_all(&kid_sols, true);
        evaluations += want;

        xs.extend(kids);
        sols.extend(kid_sols);
        scores.extend(kid_scores);
        let objs: Vec<[f64; 3]> = scores.iter().map(|(o, _)| o.as_array()).collect();
        let viol: Vec<f64> = scores.iter().map(|s| s.1).collect();
        let keep = select_survivors(&objs, &viol, n);
        xs = keep.iter().map(|&k| xs[k].clone()).collect();
        sols = keep.iter().map(|&k| sols[k].clone()).collect();
        scores = keep.iter().map(|&k| scores[k]).collect();
        generation += 1;
    }
    log::debug!("nsga2: {generation} generations, {evaluations} evaluations");

    let members = sols
        .into_iter()
        .zip(scores)
        .map(|(solution, (objectives, violation))| ArchiveMember {
            solution,
            objectives,
            violation,
        })
        .collect();
    Ok(ParetoArchive::from_population(members, n, evaluations))
}
