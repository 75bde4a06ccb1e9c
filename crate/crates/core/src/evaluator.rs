//! Objective and constraint evaluation of a mission plan.
//!
//! A [`Solution`] fixes, for every T-UAV, the visiting order over its hover
//! candidates, the 3D hover position at each candidate, every GU's transmit
//! power and every T-UAV's relay power. The connection plan comes from the
//! [`Deployment`] and is not part of the decision.

use serde::{Deserialize, Serialize};

use crate::channel::{a2a_link_rate, g2a_rate};
use crate::energy::{
    a2a_delay, flight_energy, flight_speed, g2a_delay, gu_energy, hover_duration, hover_power,
    huav_energy, huav_mission_time, leg_flight_time, EnergyBreakdown,
};
use crate::error::{Error, Result};
use crate::predeploy::Deployment;
use crate::scenario::{Point3, Scenario};

/// Decision variables of one mission plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Visiting order per T-UAV, as candidate indices. During optimization an
    /// ordering may be a prefix; [`evaluate`] requires full permutations.
    pub orderings: Vec<Vec<usize>>,
    /// Hover position per T-UAV and candidate (indexed by candidate, not by
    /// visit position).
    pub hover_points: Vec<Vec<Point3>>,
    /// Transmit power of every GU, W.
    pub gu_powers: Vec<f64>,
    /// Relay transmit power of every T-UAV, W.
    pub relay_powers: Vec<f64>,
}

impl Solution {
    /// A plan hovering at every Fermat point at `z` in index order with uniform powers.
    pub fn uniform(deployment: &Deployment, num_gus: usize, z: f64, p_u: f64, p_m: f64) -> Self {
        Self {
            orderings: deployment
                .tuavs
                .iter()
                .map(|t| (0..t.candidates.len()).collect())
                .collect(),
            hover_points: deployment
                .tuavs
                .iter()
                .map(|t| t.candidates.iter().map(|c| c.point.with_z(z)).collect())
                .collect(),
            gu_powers: vec![p_u; num_gus],
            relay_powers: vec![p_m; deployment.tuavs.len()],
        }
    }
}

/// Total UAV energy (J), mean GU energy (J) and mean GU delay (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub teu: f64,
    pub aeg: f64,
    pub adg: f64,
}

impl ObjectiveVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.teu, self.aeg, self.adg]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            teu: a[0],
            aeg: a[1],
            adg: a[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Each GU connected exactly once.
    SingleConnection,
    /// At most `u_max` GUs per hover point.
    HoverCapacity,
    /// End-to-end delay within the GU's tolerance.
    MaxDelay,
    G2aRate,
    A2aRate,
    GuPower,
    RelayPower,
    HoverRegion,
    /// Visiting order is a permutation of the candidates.
    Ordering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub constraint: Constraint,
    /// GU, T-UAV or hover index the violation refers to.
    pub subject: String,
    /// Normalized excess (> 0).
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Sum of the normalized excesses.
    pub violation: f64,
    pub details: Vec<ConstraintViolation>,
}

/// Per-GU link outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuLink {
    pub g2a_rate: f64,
    pub a2a_rate: f64,
    pub g2a_delay: f64,
    pub a2a_delay: f64,
    pub energy: f64,
}

impl GuLink {
    pub fn delay(&self) -> f64 {
        self.g2a_delay + self.a2a_delay
    }
}

/// Everything computed while evaluating a (possibly partial) plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionEvaluation {
    pub objectives: ObjectiveVector,
    pub report: FeasibilityReport,
    /// `None` for GUs whose hover point is not visited yet.
    pub gu_links: Vec<Option<GuLink>>,
    pub tuav_energy: Vec<EnergyBreakdown>,
    /// Hover plus flight time of every T-UAV.
    pub tuav_times: Vec<f64>,
    pub swarm_times: Vec<f64>,
    pub swarm_energy: Vec<f64>,
}

/// Objective vector of a complete plan.
pub fn evaluate(scenario: &Scenario, deployment: &Deployment, solution: &Solution) -> Result<ObjectiveVector> {
    evaluate_mission(scenario, deployment, solution, true).map(|m| m.objectives)
}

/// Constraint report of a complete plan.
pub fn feasibility(scenario: &Scenario, deployment: &Deployment, solution: &Solution) -> Result<FeasibilityReport> {
    evaluate_mission(scenario, deployment, solution, true).map(|m| m.report)
}

/// Full evaluation. With `complete = false` only the visited prefix of each
/// ordering is charged; unvisited GUs contribute nothing, and averages still
/// divide by the total number of GUs.
pub fn evaluate_mission(
    scenario: &Scenario,
    deployment: &Deployment,
    solution: &Solution,
    complete: bool,
) -> Result<MissionEvaluation> {
    check_shape(scenario, deployment, solution)?;
    let ch = &scenario.channel;
    let en = &scenario.energy;
    let pl = &scenario.power;
    let u_total = scenario.gus.len() as f64;
    let mut details = Vec::new();
    let mut push = |constraint, subject: String, excess: f64| {
        if excess > 0.0 {
            details.push(ConstraintViolation {
                constraint,
                subject,
                excess,
            });
        }
    };

    // (32c) and (32d) follow from the connection plan
    let mut counts = vec![0usize; scenario.gus.len()];
    for (t, plan) in deployment.tuavs.iter().enumerate() {
        for (n, cand) in plan.candidates.iter().enumerate() {
            for &u in &cand.members {
                counts[u] += 1;
            }
            let excess = cand.members.len().saturating_sub(scenario.u_max) as f64;
            push(
                Constraint::HoverCapacity,
                format!("tuav {t} hover {n}"),
                excess / scenario.u_max as f64,
            );
        }
    }
    for (u, &c) in counts.iter().enumerate() {
        push(Constraint::SingleConnection, format!("gu {u}"), (c as f64 - 1.0).abs());
    }

    let b = &scenario.bounds;
    let z_span = b.tuav_z_max - b.tuav_z_min;
    let p_u_span = (pl.p_u_max - pl.p_u_min).max(f64::MIN_POSITIVE);
    let p_m_span = (pl.p_m_max - pl.p_m_min).max(f64::MIN_POSITIVE);
    for (t, &p) in solution.relay_powers.iter().enumerate() {
        let ex = (pl.p_m_min - p).max(p - pl.p_m_max).max(0.0);
        push(Constraint::RelayPower, format!("tuav {t}"), ex / p_m_span);
    }

    let speed = flight_speed(en);
    let p_hov = hover_power(en);
    let mut gu_links: Vec<Option<GuLink>> = vec![None; scenario.gus.len()];
    let mut tuav_energy = Vec::with_capacity(deployment.tuavs.len());
    let mut tuav_times = Vec::with_capacity(deployment.tuavs.len());

    for (t, plan) in deployment.tuavs.iter().enumerate() {
        let order = &solution.orderings[t];
        let n_cand = plan.candidates.len();
        let mut seen = vec![false; n_cand];
        let mut valid_order = true;
        for &c in order {
            if c >= n_cand || seen[c] {
                valid_order = false;
                break;
            }
            seen[c] = true;
        }
        if !valid_order || (complete && order.len() != n_cand) {
            if complete {
                return Err(Error::Config(format!(
                    "tuav {t}: ordering {order:?} is not a permutation of {n_cand} candidates"
                )));
            }
            push(Constraint::Ordering, format!("tuav {t}"), 1.0);
            tuav_energy.push(EnergyBreakdown::default());
            tuav_times.push(0.0);
            continue;
        }

        let site = deployment.swarm_sites[plan.swarm];
        let p_m = solution.relay_powers[t];
        let mut trajectory = Vec::with_capacity(order.len() + 1);
        trajectory.push(site);
        let mut hover_total = 0.0;
        let mut relay_total = 0.0;
        for &c in order {
            let pos = solution.hover_points[t][c];
            let zx = (b.tuav_z_min - pos.z).max(pos.z - b.tuav_z_max).max(0.0) / z_span;
            let xx = (b.x_min - pos.x).max(pos.x - b.x_max).max(0.0) / b.width();
            let yx = (b.y_min - pos.y).max(pos.y - b.y_max).max(0.0) / b.height();
            push(Constraint::HoverRegion, format!("tuav {t} hover {c}"), zx + xx + yx);
            trajectory.push(pos);
            let r_ms = a2a_link_rate(&pos, &site, p_m, ch);
            let mut delays = Vec::with_capacity(plan.candidates[c].members.len());
            for &u in &plan.candidates[c].members {
                let gu = &scenario.gus[u];
                let p_u = solution.gu_powers[u];
                let ex = (pl.p_u_min - p_u).max(p_u - pl.p_u_max).max(0.0);
                push(Constraint::GuPower, format!("gu {u}"), ex / p_u_span);
                let r_um = g2a_rate(&gu.position, &pos, p_u, ch)?;
                let t_um = g2a_delay(gu.data_size, r_um)
                    .map_err(|e| Error::InfeasibleLink(format!("gu {u}: {e}")))?;
                let t_ms = a2a_delay(gu.data_size, r_ms)
                    .map_err(|e| Error::InfeasibleLink(format!("tuav {t}: {e}")))?;
                let link = GuLink {
                    g2a_rate: r_um,
                    a2a_rate: r_ms,
                    g2a_delay: t_um,
                    a2a_delay: t_ms,
                    energy: gu_energy(p_u, t_um),
                };
                push(
                    Constraint::MaxDelay,
                    format!("gu {u}"),
                    (link.delay() - gu.max_delay) / gu.max_delay,
                );
                push(Constraint::G2aRate, format!("gu {u}"), (ch.r_min_g2a - r_um) / ch.r_min_g2a);
                push(Constraint::A2aRate, format!("gu {u}"), (ch.r_min_a2a - r_ms) / ch.r_min_a2a);
                delays.push(link.delay());
                relay_total += t_ms;
                gu_links[u] = Some(link);
            }
            hover_total += hover_duration(&delays)?;
        }
        let flight_time: f64 = trajectory
            .windows(2)
            .map(|w| leg_flight_time(&w[0], &w[1], speed))
            .sum();
        let breakdown = EnergyBreakdown::new(
            p_m * relay_total,
            p_hov * hover_total,
            flight_energy(&trajectory, en),
        );
        tuav_energy.push(breakdown);
        tuav_times.push(hover_total + flight_time);
    }

    let mut swarm_times = vec![0.0; deployment.swarm_sites.len()];
    for (s, time) in swarm_times.iter_mut().enumerate() {
        let members: Vec<f64> = deployment
            .tuavs
            .iter()
            .zip(&tuav_times)
            .filter(|(p, _)| p.swarm == s)
            .map(|(_, &t)| t)
            .collect();
        *time = huav_mission_time(&members);
    }
    let swarm_energy: Vec<f64> = swarm_times.iter().map(|&t| huav_energy(t, en)).collect();

    let teu = swarm_energy.iter().sum::<f64>() + tuav_energy.iter().map(|e| e.total).sum::<f64>();
    let served = gu_links.iter().flatten();
    let aeg = served.clone().map(|l| l.energy).sum::<f64>() / u_total;
    let adg = served.map(|l| l.delay()).sum::<f64>() / u_total;

    let violation = details.iter().fold(0.0, |acc, d| acc + d.excess);
    Ok(MissionEvaluation {
        objectives: ObjectiveVector { teu, aeg, adg },
        report: FeasibilityReport {
            feasible: details.is_empty(),
            violation,
            details,
        },
        gu_links,
        tuav_energy,
        tuav_times,
        swarm_times,
        swarm_energy,
    })
}

fn check_shape(scenario: &Scenario, deployment: &Deployment, solution: &Solution) -> Result<()> {
    let m = deployment.tuavs.len();
    let bad = |what: &str| Err(Error::Config(format!("solution shape mismatch: {what}")));
    if solution.orderings.len() != m || solution.hover_points.len() != m || solution.relay_powers.len() != m {
        return bad("per-T-UAV vectors");
    }
    if solution.gu_powers.len() != scenario.gus.len() {
        return bad("GU powers");
    }
    for (t, plan) in deployment.tuavs.iter().enumerate() {
        if solution.hover_points[t].len() != plan.candidates.len() {
            return bad("hover points");
        }
        if plan.swarm >= deployment.swarm_sites.len() {
            return bad("swarm index");
        }
    }
    for plan in &deployment.tuavs {
        for c in &plan.candidates {
            if c.members.iter().any(|&u| u >= scenario.gus.len()) {
                return bad("GU index in deployment");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{a2a_rate, free_space_gain, small_scale_gain};
    use crate::energy::{horizontal_fly_power, vertical_power};
    use crate::geometry::Point2;
    use crate::predeploy::{predeploy, Connection, ConnectionPlan, FermatGroup, TuavPlan};
    use crate::scenario::{generate_scenario, AreaBounds, GroundUser, ScenarioConfig};

    /// One GU at the origin, one swarm whose H-UAV sits 500 m away.
    fn toy(num_copies: usize) -> (Scenario, Deployment) {
        let cfg = ScenarioConfig {
            users: num_copies,
            swarms: 1,
            tuavs: 1,
            ..ScenarioConfig::default()
        };
        let mut s = cfg.generate(1).unwrap();
        for gu in &mut s.gus {
            gu.position = Point3::new(1000.0, 1000.0, 0.0);
        }
        let d = Deployment {
            swarm_sites: vec![Point3::new(1500.0, 1000.0, 120.0)],
            swarm_sizes: vec![1],
            tuavs: vec![TuavPlan {
                swarm: 0,
                subregion: 0,
                candidates: vec![FermatGroup {
                    point: Point2::new(1000.0, 1000.0),
                    members: (0..num_copies).collect(),
                }],
            }],
            connections: ConnectionPlan {
                assignment: vec![Connection { swarm: 0, tuav: 0, hover: 0 }; num_copies],
            },
            cluster_centers: vec![Point2::new(1000.0, 1000.0)],
            cells: vec![],
            vertices: vec![],
        };
        (s, d)
    }

    #[test]
    fn single_gu_overhead_link() {
        let (s, d) = toy(1);
        let sol = Solution::uniform(&d, 1, 100.0, 1.0, 5.0);
        let m = evaluate_mission(&s, &d, &sol, true).unwrap();
        let o = m.objectives;
        assert!((o.aeg - 0.325).abs() < 1e-3, "{o:?}");
        assert!((o.adg - 0.370).abs() < 1e-3, "{o:?}");

        // oracle from the module formulas
        let ch = &s.channel;
        let h = small_scale_gain(90.0, ch) * free_space_gain(100.0, ch);
        let r = ch.bw_g2a * (1.0 + h / (ch.bw_g2a * ch.noise_psd)).log2();
        let t_um = 1e7 / r;
        let t_ms = 1e7 / a2a_rate(5.0, ch);
        assert!((o.adg - (t_um + t_ms)).abs() < 1e-12);
        let leg = (500f64.powi(2) + 20f64.powi(2)).sqrt() / 15f64.hypot(6.0);
        let e_m = 5.0 * t_ms + 219.82 * (t_um + t_ms)
            + (horizontal_fly_power(15.0, &s.energy) + vertical_power(6.0, &s.energy)) * leg;
        let e_s = 219.82 * (t_um + t_ms + leg);
        assert!((o.teu - (e_m + e_s)).abs() < 1e-6 * o.teu);
        assert!(m.report.feasible);
        assert_eq!(m.report.violation, 0.0);
    }

    #[test]
    fn averages_invariant_under_gu_duplication() {
        let (s1, d1) = toy(1);
        let (s2, d2) = toy(2);
        let o1 = evaluate(&s1, &d1, &Solution::uniform(&d1, 1, 80.0, 0.3, 2.0)).unwrap();
        let o2 = evaluate(&s2, &d2, &Solution::uniform(&d2, 2, 80.0, 0.3, 2.0)).unwrap();
        assert!((o1.aeg - o2.aeg).abs() < 1e-15);
        assert!((o1.adg - o2.adg).abs() < 1e-15);
        assert!(o2.teu > o1.teu);
    }

    #[test]
    fn delay_violation_is_normalized() {
        let (mut s, d) = toy(1);
        let sol = Solution::uniform(&d, 1, 100.0, 1.0, 5.0);
        let delay = evaluate(&s, &d, &sol).unwrap().adg;
        // tolerance set so the measured delay exceeds it by exactly 25 %
        s.gus[0].max_delay = delay / 1.25;
        let r = feasibility(&s, &d, &sol).unwrap();
        let dv: Vec<_> = r.details.iter().filter(|v| v.constraint == Constraint::MaxDelay).collect();
        assert_eq!(dv.len(), 1);
        assert!((dv[0].excess - 0.25).abs() < 1e-12);
        assert!(!r.feasible);
    }

    #[test]
    fn capacity_violation_listed() {
        let (mut s, d) = toy(7);
        s.u_max = 6;
        let r = feasibility(&s, &d, &Solution::uniform(&d, 7, 60.0, 1.0, 5.0)).unwrap();
        assert!(r.details.iter().any(|v| v.constraint == Constraint::HoverCapacity));
    }

    #[test]
    fn partial_orderings_rejected_by_full_evaluation() {
        let (s, d) = toy(1);
        let mut sol = Solution::uniform(&d, 1, 100.0, 1.0, 5.0);
        sol.orderings[0].clear();
        assert!(evaluate(&s, &d, &sol).is_err());
        let m = evaluate_mission(&s, &d, &sol, false).unwrap();
        assert_eq!(m.objectives.aeg, 0.0);
        assert!(m.gu_links[0].is_none());
    }

    #[test]
    fn teu_equals_sum_of_parts_and_is_pure() {
        let s = generate_scenario(AreaBounds::default(), 60, 3, 8, 2).unwrap();
        let d = predeploy(&s).unwrap();
        let sol = Solution::uniform(&d, 60, 50.0, 0.5, 2.5);
        let m = evaluate_mission(&s, &d, &sol, true).unwrap();
        let parts: f64 =
            m.swarm_energy.iter().sum::<f64>() + m.tuav_energy.iter().map(|e| e.relay + e.hover + e.flight).sum::<f64>();
        assert_eq!(m.objectives.teu, parts);
        let again = evaluate(&s, &d, &sol).unwrap();
        assert_eq!(m.objectives, again);
        for (s_idx, &t) in m.swarm_times.iter().enumerate() {
            for (plan, &tt) in d.tuavs.iter().zip(&m.tuav_times) {
                if plan.swarm == s_idx {
                    assert!(t >= tt);
                }
            }
        }
    }

    #[test]
    fn more_gu_power_means_less_g2a_delay() {
        let s = generate_scenario(AreaBounds::default(), 30, 3, 6, 4).unwrap();
        let d = predeploy(&s).unwrap();
        let low = evaluate_mission(&s, &d, &Solution::uniform(&d, 30, 60.0, 0.2, 2.0), true).unwrap();
        let high = evaluate_mission(&s, &d, &Solution::uniform(&d, 30, 60.0, 0.4, 2.0), true).unwrap();
        for (a, b) in low.gu_links.iter().zip(&high.gu_links) {
            assert!(b.unwrap().g2a_delay < a.unwrap().g2a_delay);
        }
        assert!(high.objectives.adg < low.objectives.adg);
    }

    #[test]
    fn zero_duration_mission_costs_only_huav_hover() {
        // all hover times vanish when no GU is visited and the T-UAV never leaves
        let (s, mut d) = toy(1);
        d.swarm_sites[0] = Point3::new(1000.0, 1000.0, 120.0);
        let mut sol = Solution::uniform(&d, 1, 100.0, 1.0, 5.0);
        sol.orderings[0].clear();
        let m = evaluate_mission(&s, &d, &sol, false).unwrap();
        assert_eq!(m.objectives.teu, m.swarm_energy.iter().sum::<f64>());
        assert_eq!(m.objectives.teu, 0.0);
    }

    #[test]
    fn gu_struct_round_trip_via_scenario() {
        let (s, _) = toy(1);
        let gu: &GroundUser = &s.gus[0];
        assert_eq!(gu.data_size, 1e7);
    }
}
