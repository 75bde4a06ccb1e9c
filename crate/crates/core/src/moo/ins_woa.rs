//! Step-wise whale search with greedy hover sequencing.
//!
//! Hover steps are processed jointly for all T-UAVs: at step `n` every T-UAV
//! that still has an unvisited candidate contributes the continuous variables
//! of its `n`-th hover (altitude, x-y offset, member GU powers, relay power).
//! Each agent keeps the mission it has built so far and is scored on that
//! partial mission. After the inner loop the visiting order is extended for
//! every T-UAV by the greedy rule applied to the compromise agent.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    compromise_index, crowded_order, fast_nondominated_sort, greedy_next_hover, rank_and_crowding,
    select_survivors, stream, update_a, woa_update, Agent, ArchiveMember, HoverSlot, ParetoArchive,
    Problem, WoaParams,
};
use crate::error::{Error, Result};
use crate::evaluator::{ObjectiveVector, Solution};
use crate::predeploy::Deployment;
use crate::scenario::Scenario;

const TAG: u64 = 0x0057_4f41;

/// Evaluator calls made by [`ins_woa`] for the given sizes.
pub fn planned_evaluations(deployment: &Deployment, population: usize, iterations: usize) -> usize {
    let counts: Vec<usize> = deployment.tuavs.iter().map(|t| t.candidates.len()).collect();
    let steps = counts.iter().copied().max().unwrap_or(0);
    let greedy: usize = counts
        .iter()
        .map(|&n| (0..n).map(|k| n - k).filter(|&r| r >= 2).sum::<usize>())
        .sum();
    steps * population * (1 + iterations) + greedy + population
}

fn fit_iterations(deployment: &Deployment, params: &WoaParams) -> Result<usize> {
    let Some(cap) = params.max_evaluations else {
        return Ok(params.iterations);
    };
    (1..=params.iterations)
        .rev()
        .find(|&i| planned_evaluations(deployment, params.population, i) <= cap)
        .ok_or_else(|| {
            Error::Config(format!(
                "evaluation budget {cap} below the minimum {} for one inner iteration",
                planned_evaluations(deployment, params.population, 1)
            ))
        })
}

pub fn ins_woa(scenario: &Scenario, deployment: &Deployment, params: &WoaParams) -> Result<ParetoArchive> {
    params.validate()?;
    let iterations = fit_iterations(deployment, params)?;
    let problem = Problem {
        scenario,
        deployment,
        radius: params.offset_radius,
    };
    let j_max = params.population;
    let m = deployment.tuavs.len();
    let counts: Vec<usize> = deployment.tuavs.iter().map(|t| t.candidates.len()).collect();
    let steps = counts.iter().copied().max().unwrap_or(0);
    let base = problem.base_solution();
    let zero = ObjectiveVector::from_array([0.0; 3]);
    let mut evaluations = 0;

    let mut order: Vec<Vec<usize>> = vec![Vec::new(); m];
    for t in 0..m {
        if counts[t] > 0 {
            let pick = pick_next(&problem, &base, zero, t, [0.0; 3], &mut evaluations);
            order[t].push(pick);
        }
    }

    let mut agents: Vec<Agent> = (0..j_max)
        .map(|_| Agent {
            position: Vec::new(),
            solution: base.clone(),
            objectives: zero,
            violation: 0.0,
        })
        .collect();

    for n in 0..steps {
        let (slots, dim) = step_layout(&problem, &order, n);
        let mut rngs: Vec<ChaCha8Rng> = (0..j_max).map(|a| stream(params.seed, TAG, a as u64, n as u64)).collect();
        for (agent, rng) in agents.iter_mut().zip(&mut rngs) {
            agent.position = (0..dim).map(|_| rng.random::<f64>()).collect();
            agent.solution.orderings = order.clone();
            apply(&problem, &slots, &agent.position, &mut agent.solution);
        }
        score(&problem, &mut agents, &mut evaluations);

        for i in 1..=iterations {
            let a = update_a(i - 1, iterations);
            let objs: Vec<[f64; 3]> = agents.iter().map(|g| g.objectives.as_array()).collect();
            let viol: Vec<f64> = agents.iter().map(|g| g.violation).collect();
            let (ranks, crowding) = rank_and_crowding(&objs, &viol);
            let leader = crowded_order(&ranks, &crowding)[0];
            let mut children: Vec<Agent> = Vec::with_capacity(j_max);
            for (j, rng) in rngs.iter_mut().enumerate() {
                let r = rng.random_range(0..j_max);
                let x = woa_update(
                    &agents[j].position,
                    &agents[leader].position,
                    &agents[r].position,
                    a,
                    params.spiral_b,
                    rng,
                );
                let mut solution = agents[j].solution.clone();
                apply(&problem, &slots, &x, &mut solution);
                children.push(Agent {
                    position: x,
                    solution,
                    objectives: zero,
                    violation: 0.0,
                });
            }
            score(&problem, &mut children, &mut evaluations);
            agents.extend(children);
            let objs: Vec<[f64; 3]> = agents.iter().map(|g| g.objectives.as_array()).collect();
            let viol: Vec<f64> = agents.iter().map(|g| g.violation).collect();
            let keep = select_survivors(&objs, &viol, j_max);
            let mut pool: Vec<Option<Agent>> = agents.into_iter().map(Some).collect();
            agents = keep.iter().map(|&k| pool[k].take().expect("unique survivor")).collect();
        }
        log::debug!("step {n}: {} evaluations so far", evaluations);

        if n + 1 < steps {
            let objs: Vec<[f64; 3]> = agents.iter().map(|g| g.objectives.as_array()).collect();
            let viol: Vec<f64> = agents.iter().map(|g| g.violation).collect();
            let front = fast_nondominated_sort(&objs, &viol).swap_remove(0);
            let front_objs: Vec<[f64; 3]> = front.iter().map(|&i| objs[i]).collect();
            let comp = &agents[front[compromise_index(&front_objs).expect("front non-empty")]];
            let mut best = [f64::INFINITY; 3];
            for o in &front_objs {
                for j in 0..3 {
                    best[j] = best[j].min(o[j]);
                }
            }
            for t in 0..m {
                if counts[t] > n + 1 {
                    let pick = pick_next(&problem, &comp.solution, comp.objectives, t, best, &mut evaluations);
                    order[t].push(pick);
                }
            }
        }
    }

    let solutions: Vec<Solution> = agents.into_iter().map(|g| g.solution).collect();
    let scores = problem.score_all(&solutions, true);
    evaluations += solutions.len();
    let members = solutions
        .into_iter()
        .zip(scores)
        .map(|(solution, (objectives, violation))| ArchiveMember {
            solution,
            objectives,
            violation,
        })
        .collect();
    debug_assert_eq!(evaluations, planned_evaluations(deployment, j_max, iterations));
    Ok(ParetoArchive::from_population(members, j_max, evaluations))
}

/// Slots of step `n` and the resulting vector length. Each slot is followed
/// by its T-UAV's relay power.
fn step_layout(problem: &Problem, order: &[Vec<usize>], n: usize) -> (Vec<HoverSlot>, usize) {
    let mut slots = Vec::new();
    let mut offset = 0;
    for (t, o) in order.iter().enumerate() {
        if let Some(&candidate) = o.get(n) {
            slots.push(HoverSlot {
                tuav: t,
                candidate,
                offset,
            });
            offset += 3 + problem.members(t, candidate).len() + 1;
        }
    }
    (slots, offset)
}

fn apply(problem: &Problem, slots: &[HoverSlot], x: &[f64], sol: &mut Solution) {
    for slot in slots {
        problem.decode_hover(slot, x, sol);
        let relay = slot.offset + 3 + problem.members(slot.tuav, slot.candidate).len();
        sol.relay_powers[slot.tuav] = problem.decode_relay(x[relay]);
    }
}

fn score(problem: &Problem, agents: &mut [Agent], evaluations: &mut usize) {
    let sols: Vec<Solution> = agents.iter().map(|a| a.solution.clone()).collect();
    for (agent, (o, v)) in agents.iter_mut().zip(problem.score_all(&sols, false)) {
        agent.objectives = o;
        agent.violation = v;
    }
    *evaluations += agents.len();
}

/// Predicts the marginal objective change of visiting each remaining
/// candidate of `tuav` next, holding the reference agent's altitude and
/// powers, and applies the greedy rule.
fn pick_next(
    problem: &Problem,
    reference: &Solution,
    reference_objs: ObjectiveVector,
    tuav: usize,
    best: [f64; 3],
    evaluations: &mut usize,
) -> usize {
    let visited = &reference.orderings[tuav];
    let n_cand = problem.deployment.tuavs[tuav].candidates.len();
    let remaining: Vec<usize> = (0..n_cand).filter(|c| !visited.contains(c)).collect();
    if remaining.len() == 1 {
        return remaining[0];
    }
    let z = visited
        .last()
        .map(|&c| reference.hover_points[tuav][c].z)
        .unwrap_or(0.5 * (problem.scenario.bounds.tuav_z_min + problem.scenario.bounds.tuav_z_max));
    let served: Vec<usize> = visited
        .iter()
        .flat_map(|&c| problem.members(tuav, c).iter().copied())
        .collect();
    let p_u = if served.is_empty() {
        let pl = &problem.scenario.power;
        0.5 * (pl.p_u_min + pl.p_u_max)
    } else {
        served.iter().map(|&u| reference.gu_powers[u]).sum::<f64>() / served.len() as f64
    };
    let trials: Vec<Solution> = remaining
        .iter()
        .map(|&c| {
            let mut s = reference.clone();
            s.orderings[tuav].push(c);
            s.hover_points[tuav][c] = problem.deployment.tuavs[tuav].candidates[c].point.with_z(z);
            for &u in problem.members(tuav, c) {
                s.gu_powers[u] = p_u;
            }
            s
        })
        .collect();
    let scores = problem.score_all(&trials, false);
    *evaluations += trials.len();
    let r = reference_objs.as_array();
    let deltas: Vec<[f64; 3]> = scores
        .iter()
        .map(|(o, v)| {
            if *v == f64::INFINITY {
                [f64::INFINITY; 3]
            } else {
                let o = o.as_array();
                [o[0] - r[0], o[1] - r[1], o[2] - r[2]]
            }
        })
        .collect();
    remaining[greedy_next_hover(&deltas, best)]
}
