//! Rotary-wing propulsion power, per-UAV energy accounting and the delay
//! quantities they are built from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::distance;
use crate::scenario::{EnergyParams, Point3, VerticalMode};

/// Propulsion power at the configured flight speeds, W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub p_fly_horizontal: f64,
    pub p_hover: f64,
    pub p_vertical: f64,
}

impl PowerProfile {
    pub fn new(params: &EnergyParams) -> Self {
        Self {
            p_fly_horizontal: horizontal_fly_power(params.v_xy, params),
            p_hover: hover_power(params),
            p_vertical: vertical_power(params.v_z, params),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LegTiming {
    pub hover_duration: f64,
    pub flight_duration: f64,
}

/// Energy of one T-UAV, J. `total` is always the plain sum of the parts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub relay: f64,
    pub hover: f64,
    pub flight: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(relay: f64, hover: f64, flight: f64) -> Self {
        Self {
            relay,
            hover,
            flight,
            total: relay + hover + flight,
        }
    }
}

/// Power for straight-and-level flight at horizontal speed `v`.
///
/// The induced term contains `sqrt(1 + x²) - x` with `x = v²/(2 v0²)`, which
/// cancels catastrophically for the tiny `v0` of the reference airframe; it
/// is evaluated as `1 / (sqrt(1 + x²) + x)` instead.
pub fn horizontal_fly_power(v: f64, params: &EnergyParams) -> f64 {
    let v2 = v * v;
    let blade = params.p0 * (1.0 + 3.0 * v2 / (params.u_tips * params.u_tips));
    let x = v2 / (2.0 * params.v0 * params.v0);
    let induced = params.p1 * (1.0 / (x.hypot(1.0) + x)).sqrt();
    let parasite = 0.5 * params.d0 * params.rho0 * params.s0 * params.a0 * v2 * v;
    blade + induced + parasite
}

pub fn hover_power(params: &EnergyParams) -> f64 {
    params.p0 + params.p1
}

/// Power for climbing or descending at vertical speed magnitude `v_z`.
pub fn vertical_power(v_z: f64, params: &EnergyParams) -> f64 {
    params.mass * params.gravity * v_z
}

/// Speed along a straight 3D leg flown at the configured component speeds.
pub fn flight_speed(params: &EnergyParams) -> f64 {
    params.v_xy.hypot(params.v_z)
}

pub fn g2a_delay(q_bits: f64, rate: f64) -> Result<f64> {
    transfer_delay(q_bits, rate, "G2A")
}

pub fn a2a_delay(q_bits: f64, rate: f64) -> Result<f64> {
    transfer_delay(q_bits, rate, "A2A")
}

fn transfer_delay(q_bits: f64, rate: f64, what: &str) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::InfeasibleLink(format!("{what} rate {rate} is not positive")));
    }
    Ok(q_bits / rate)
}

/// Hover time at one point: the slowest connected GU's end-to-end delay.
pub fn hover_duration(delays: &[f64]) -> Result<f64> {
    if delays.is_empty() {
        return Err(Error::Config("hover point without connected GUs".into()));
    }
    Ok(delays.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

pub fn leg_flight_time(p: &Point3, q: &Point3, speed: f64) -> f64 {
    distance(p, q) / speed
}

/// Energy of one T-UAV flying `trajectory` (which starts at its swarm site)
/// and hovering `hover_durations[i]` at `trajectory[i + 1]`.
///
/// `relay_delays` holds the A2A delay of every GU the T-UAV relays.
pub fn tuav_energy(
    trajectory: &[Point3],
    hover_durations: &[f64],
    relay_power: f64,
    relay_delays: &[f64],
    params: &EnergyParams,
) -> EnergyBreakdown {
    assert_eq!(
        trajectory.len(),
        hover_durations.len() + 1,
        "one hover duration per visited point"
    );
    let relay = relay_power * relay_delays.iter().sum::<f64>();
    let hover = hover_power(params) * hover_durations.iter().sum::<f64>();
    let flight = flight_energy(trajectory, params);
    EnergyBreakdown::new(relay, hover, flight)
}

/// Propulsion energy over all legs of `trajectory`.
pub fn flight_energy(trajectory: &[Point3], params: &EnergyParams) -> f64 {
    let speed = flight_speed(params);
    let p_h = horizontal_fly_power(params.v_xy, params);
    match params.vertical_mode {
        VerticalMode::Literal => {
            let time: f64 = trajectory
                .windows(2)
                .map(|w| leg_flight_time(&w[0], &w[1], speed))
                .sum();
            (p_h + vertical_power(params.v_z, params)) * time
        }
        // P_ver charged for |dz| / v_z seconds, i.e. W g |dz| per leg
        VerticalMode::Scaled => trajectory
            .windows(2)
            .map(|w| {
                p_h * leg_flight_time(&w[0], &w[1], speed)
                    + params.mass * params.gravity * (w[1].z - w[0].z).abs()
            })
            .sum(),
    }
}

/// Time an H-UAV hovers: the longest member mission (hover + flight).
pub fn huav_mission_time(member_times: &[f64]) -> f64 {
    member_times.iter().cloned().fold(0.0, f64::max)
}

pub fn huav_energy(mission_time: f64, params: &EnergyParams) -> f64 {
    hover_power(params) * mission_time
}

pub fn gu_energy(p_u: f64, g2a_delay: f64) -> f64 {
    p_u * g2a_delay
}
