//! Multi-objective search over hover positions, visiting orders and powers.
//!
//! Decision vectors live on the unit box; [`Problem`] maps each coordinate to
//! its physical range (hover altitude, x-y offset around the Fermat point,
//! GU power, relay power).

mod greedy;
mod hypervolume;
mod ins_woa;
mod nsga2;
mod sort;
mod woa;

pub use greedy::greedy_next_hover;
pub use hypervolume::hypervolume;
pub use ins_woa::{ins_woa, planned_evaluations};
pub use nsga2::{nsga2, NsgaParams};
pub use sort::{
    compromise_index, constrained_dominates, crowded_order, crowded_tournament, crowding_distance, dominates,
    fast_nondominated_sort, rank_and_crowding, select_survivors,
};
pub use woa::{update_a, woa_move, woa_update, WoaDraw, WoaMove};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{evaluate_mission, ObjectiveVector, Solution};
use crate::predeploy::Deployment;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WoaParams {
    /// Number of whale agents.
    pub population: usize,
    /// Inner iterations per hover step.
    pub iterations: usize,
    /// Logarithmic spiral constant.
    pub spiral_b: f64,
    pub seed: u64,
    /// Half-width of the x-y search square around each Fermat point, m.
    pub offset_radius: f64,
    /// Evaluation cap; inner iterations are reduced to fit.
    pub max_evaluations: Option<usize>,
}

impl Default for WoaParams {
    fn default() -> Self {
        Self {
            population: 30,
            iterations: 50,
            spiral_b: 1.0,
            seed: 1,
            offset_radius: 50.0,
            max_evaluations: None,
        }
    }
}

impl WoaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Config(format!("population {} < 4", self.population)));
        }
        if self.iterations < 1 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.offset_radius >= 0.0) {
            return Err(Error::Config("offset_radius must be non-negative".into()));
        }
        Ok(())
    }
}

/// One search agent: its current step vector and the mission it has built.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub position: Vec<f64>,
    pub solution: Solution,
    pub objectives: ObjectiveVector,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveMember {
    pub solution: Solution,
    pub objectives: ObjectiveVector,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoArchive {
    pub members: Vec<ArchiveMember>,
    /// Front index (1-based) of each member.
    pub ranks: Vec<usize>,
    pub crowding: Vec<f64>,
    /// Evaluator calls spent producing the archive.
    pub evaluations: usize,
    /// No member satisfies every constraint.
    pub all_infeasible: bool,
}

impl ParetoArchive {
    /// Non-dominated filter of `population`: front 1 under constrained
    /// domination, exact duplicates removed, truncated to `cap` by crowding.
    pub fn from_population(population: Vec<ArchiveMember>, cap: usize, evaluations: usize) -> Self {
        let objs: Vec<[f64; 3]> = population.iter().map(|m| m.objectives.as_array()).collect();
        let viol: Vec<f64> = population.iter().map(|m| m.violation).collect();
        let fronts = fast_nondominated_sort(&objs, &viol);
        let mut keep: Vec<usize> = Vec::new();
        for &i in fronts.first().map(Vec::as_slice).unwrap_or(&[]) {
            if !keep.iter().any(|&k| objs[k] == objs[i] && viol[k] == viol[i]) {
                keep.push(i);
            }
        }
        if keep.len() > cap {
            let sub: Vec<[f64; 3]> = keep.iter().map(|&i| objs[i]).collect();
            let d = crowding_distance(&sub);
            let order = crowded_order(&vec![1; sub.len()], &d);
            let mut chosen: Vec<usize> = order[..cap].iter().map(|&o| keep[o]).collect();
            chosen.sort_unstable();
            keep = chosen;
        }
        let mut slots: Vec<Option<ArchiveMember>> = population.into_iter().map(Some).collect();
        let members: Vec<ArchiveMember> = keep.iter().map(|&i| slots[i].take().expect("unique index")).collect();
        Self::from_members(members, evaluations)
    }

    /// Archive over already filtered members; ranks and crowding recomputed.
    pub fn from_members(members: Vec<ArchiveMember>, evaluations: usize) -> Self {
        let objs: Vec<[f64; 3]> = members.iter().map(|m| m.objectives.as_array()).collect();
        let viol: Vec<f64> = members.iter().map(|m| m.violation).collect();
        let (ranks, crowding) = rank_and_crowding(&objs, &viol);
        let all_infeasible = members.iter().all(|m| m.violation > 0.0);
        Self {
            members,
            ranks,
            crowding,
            evaluations,
            all_infeasible,
        }
    }

    pub fn objectives(&self) -> Vec<[f64; 3]> {
        self.members.iter().map(|m| m.objectives.as_array()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Independent random stream for (run seed, agent, step) under `tag`.
pub(crate) fn stream(seed: u64, tag: u64, agent: u64, step: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    key[16..24].copy_from_slice(&agent.to_le_bytes());
    key[24..].copy_from_slice(&step.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// The variables of one hover visit inside a decision vector.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct HoverSlot {
    pub tuav: usize,
    pub candidate: usize,
    /// Offset of `[z, dx, dy, p_u...]` in the vector.
    pub offset: usize,
}

/// Scenario, deployment and the unit-box decoding shared by both engines.
pub(crate) struct Problem<'a> {
    pub scenario: &'a Scenario,
    pub deployment: &'a Deployment,
    pub radius: f64,
}

impl<'a> Problem<'a> {
    /// Every hover at its Fermat point at mid altitude, mid-range powers, nothing visited.
    pub fn base_solution(&self) -> Solution {
        let b = &self.scenario.bounds;
        let pl = &self.scenario.power;
        let mut s = Solution::uniform(
            self.deployment,
            self.scenario.gus.len(),
            0.5 * (b.tuav_z_min + b.tuav_z_max),
            0.5 * (pl.p_u_min + pl.p_u_max),
            0.5 * (pl.p_m_min + pl.p_m_max),
        );
        for o in &mut s.orderings {
            o.clear();
        }
        s
    }

    pub fn members(&self, tuav: usize, candidate: usize) -> &[usize] {
        &self.deployment.tuavs[tuav].candidates[candidate].members
    }

    /// Writes hover position and member powers of `slot` from `x`.
    pub fn decode_hover(&self, slot: &HoverSlot, x: &[f64], sol: &mut Solution) {
        let b = &self.scenario.bounds;
        let pl = &self.scenario.power;
        let o = slot.offset;
        let fermat = self.deployment.tuavs[slot.tuav].candidates[slot.candidate].point;
        let z = b.tuav_z_min + x[o] * (b.tuav_z_max - b.tuav_z_min);
        let px = (fermat.x + (2.0 * x[o + 1] - 1.0) * self.radius).clamp(b.x_min, b.x_max);
        let py = (fermat.y + (2.0 * x[o + 2] - 1.0) * self.radius).clamp(b.y_min, b.y_max);
        sol.hover_points[slot.tuav][slot.candidate] = crate::scenario::Point3::new(px, py, z);
        for (k, &u) in self.members(slot.tuav, slot.candidate).iter().enumerate() {
            sol.gu_powers[u] = pl.p_u_min + x[o + 3 + k] * (pl.p_u_max - pl.p_u_min);
        }
    }

    pub fn decode_relay(&self, value: f64) -> f64 {
        let pl = &self.scenario.power;
        pl.p_m_min + value * (pl.p_m_max - pl.p_m_min)
    }

    /// Objectives and violation; evaluator errors become an infinitely
    /// violating member with infinite objectives.
    pub fn score(&self, sol: &Solution, complete: bool) -> (ObjectiveVector, f64) {
        match evaluate_mission(self.scenario, self.deployment, sol, complete) {
            Ok(m) => (m.objectives, m.report.violation),
            Err(e) => {
                log::debug!("evaluation failed: {e}");
                (ObjectiveVector::from_array([f64::INFINITY; 3]), f64::INFINITY)
            }
        }
    }

    pub fn score_all(&self, sols: &[Solution], complete: bool) -> Vec<(ObjectiveVector, f64)> {
        sols.par_iter().map(|s| self.score(s, complete)).collect()
    }
}
