//! World model: area, ground users, swarm sizing and the physical constants
//! of the channel and propulsion models.
//!
//! Two file formats live here. A flat *config* file uses the short parameter
//! names of the reference parameter table (`alpha`, `B_um`, `P0`, ...) and is
//! turned into a [`Scenario`] by [`ScenarioConfig::generate`]. A *scenario*
//! file is the self-describing persisted form of a fully generated scenario.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the 3D mission frame, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Rectangular mission area plus the altitude rules for both UAV tiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Fixed altitude of every H-UAV.
    pub huav_altitude: f64,
    pub tuav_z_min: f64,
    pub tuav_z_max: f64,
}

impl Default for AreaBounds {
    fn default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 2000.0,
            y_min: 0.0,
            y_max: 2000.0,
            huav_altitude: 120.0,
            tuav_z_min: 30.0,
            tuav_z_max: 100.0,
        }
    }
}

impl AreaBounds {
    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    fn violations(&self, out: &mut Vec<String>) {
        let finite = [
            self.x_min,
            self.x_max,
            self.y_min,
            self.y_max,
            self.huav_altitude,
            self.tuav_z_min,
            self.tuav_z_max,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            out.push("bounds: non-finite value".into());
            return;
        }
        if self.x_min >= self.x_max {
            out.push(format!("bounds: x_min {} >= x_max {}", self.x_min, self.x_max));
        }
        if self.y_min >= self.y_max {
            out.push(format!("bounds: y_min {} >= y_max {}", self.y_min, self.y_max));
        }
        if self.tuav_z_min >= self.tuav_z_max {
            out.push(format!(
                "bounds: tuav_z_min {} >= tuav_z_max {}",
                self.tuav_z_min, self.tuav_z_max
            ));
        }
        if self.tuav_z_min < 0.0 {
            out.push(format!("bounds: tuav_z_min {} < 0", self.tuav_z_min));
        }
        if self.huav_altitude <= 0.0 {
            out.push(format!("bounds: huav_altitude {} <= 0", self.huav_altitude));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundUser {
    pub id: usize,
    pub position: Point3,
    /// Payload to upload, bits.
    pub data_size: f64,
    /// Maximum tolerated end-to-end delay, seconds.
    pub max_delay: f64,
}

/// How the mean additional losses `eta_los`/`eta_nlos` enter the small-scale gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaInterpretation {
    /// Multiply the gain by eta directly.
    #[default]
    Linear,
    /// Treat eta as an excess loss in dB, i.e. multiply by 10^(-eta/10).
    Decibel,
}

/// Model for the T-UAV to H-UAV relay rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A2aMode {
    /// Distance-independent rate using only `eta_los`.
    #[default]
    Literal,
    /// Additionally multiply the received power by the free-space gain over the relay distance.
    FreeSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub alpha: f64,
    pub beta: f64,
    /// Carrier frequency, Hz.
    pub carrier_freq: f64,
    pub light_speed: f64,
    pub eta_los: f64,
    pub eta_nlos: f64,
    /// Noise power spectral density, W/Hz.
    pub noise_psd: f64,
    pub bw_g2a: f64,
    pub bw_a2a: f64,
    pub r_min_g2a: f64,
    pub r_min_a2a: f64,
    pub eta_interpretation: EtaInterpretation,
    pub a2a_mode: A2aMode,
}

impl ChannelParams {
    fn violations(&self, out: &mut Vec<String>) {
        let named = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("carrier_freq", self.carrier_freq),
            ("light_speed", self.light_speed),
            ("eta_los", self.eta_los),
            ("eta_nlos", self.eta_nlos),
            ("noise_psd", self.noise_psd),
            ("bw_g2a", self.bw_g2a),
            ("bw_a2a", self.bw_a2a),
            ("r_min_g2a", self.r_min_g2a),
            ("r_min_a2a", self.r_min_a2a),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("channel.{name} must be finite and > 0, got {v}"));
            }
        }
    }
}

/// Vertical-power accounting on a flight leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerticalMode {
    /// Horizontal and vertical power both charged over the whole leg duration.
    #[default]
    Literal,
    /// Vertical power charged only for the altitude actually changed (W·g·|dz|).
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    /// Blade profile power in hover, W.
    pub p0: f64,
    /// Induced power in hover, W.
    pub p1: f64,
    pub u_tips: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub v0: f64,
    pub d0: f64,
    pub rho0: f64,
    pub s0: f64,
    pub a0: f64,
    pub mass: f64,
    pub gravity: f64,
    pub v_xy: f64,
    pub v_z: f64,
    pub vertical_mode: VerticalMode,
}

impl EnergyParams {
    fn violations(&self, out: &mut Vec<String>) {
        let named = [
            ("p0", self.p0),
            ("p1", self.p1),
            ("u_tips", self.u_tips),
            ("v0", self.v0),
            ("d0", self.d0),
            ("rho0", self.rho0),
            ("s0", self.s0),
            ("a0", self.a0),
            ("mass", self.mass),
            ("gravity", self.gravity),
            ("v_xy", self.v_xy),
            ("v_z", self.v_z),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("energy.{name} must be finite and > 0, got {v}"));
            }
        }
    }
}

/// Transmit power boxes for GUs and T-UAVs, W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLimits {
    pub p_u_min: f64,
    pub p_u_max: f64,
    pub p_m_min: f64,
    pub p_m_max: f64,
}

impl PowerLimits {
    fn violations(&self, out: &mut Vec<String>) {
        if !(self.p_u_min >= 0.0 && self.p_u_min <= self.p_u_max && self.p_u_max.is_finite()) {
            out.push(format!(
                "power: need 0 <= p_u_min <= p_u_max, got [{}, {}]",
                self.p_u_min, self.p_u_max
            ));
        }
        if !(self.p_m_min >= 0.0 && self.p_m_min <= self.p_m_max && self.p_m_max.is_finite()) {
            out.push(format!(
                "power: need 0 <= p_m_min <= p_m_max, got [{}, {}]",
                self.p_m_min, self.p_m_max
            ));
        }
    }
}

/// Immutable description of one data-collection mission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub bounds: AreaBounds,
    pub num_swarms: usize,
    pub num_tuavs: usize,
    /// Maximum T-UAVs in one swarm.
    pub m_max: usize,
    /// Maximum GUs served simultaneously at one hover point.
    pub u_max: usize,
    pub seed: u64,
    pub channel: ChannelParams,
    pub energy: EnergyParams,
    pub power: PowerLimits,
    pub gus: Vec<GroundUser>,
}

/// Result of [`validate_scenario`]: one message per violated invariant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityNote {
    pub violations: Vec<String>,
}

impl FeasibilityNote {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every invariant the scenario breaks. An empty note means the
/// scenario is usable.
pub fn validate_scenario(s: &Scenario) -> FeasibilityNote {
    let mut v = Vec::new();
    s.bounds.violations(&mut v);
    s.channel.violations(&mut v);
    s.energy.violations(&mut v);
    s.power.violations(&mut v);
    if s.gus.is_empty() {
        v.push("gus: at least one ground user is required".into());
    }
    if s.num_swarms == 0 {
        v.push("num_swarms must be >= 1".into());
    }
    if s.num_tuavs == 0 {
        v.push("num_tuavs must be >= 1".into());
    }
    if s.u_max == 0 {
        v.push("u_max must be >= 1".into());
    }
    if s.num_tuavs > s.num_swarms * s.m_max {
        v.push(format!(
            "num_tuavs {} exceeds num_swarms * m_max = {}",
            s.num_tuavs,
            s.num_swarms * s.m_max
        ));
    }
    if s.num_tuavs > s.gus.len() && !s.gus.is_empty() {
        v.push(format!(
            "num_tuavs {} exceeds the number of ground users {}",
            s.num_tuavs,
            s.gus.len()
        ));
    }
    for (i, gu) in s.gus.iter().enumerate() {
        if gu.id != i {
            v.push(format!("gus[{i}]: id {} does not match its index", gu.id));
        }
        if !gu.position.is_finite() || !s.bounds.contains_xy(gu.position.x, gu.position.y) {
            v.push(format!(
                "gus[{i}]: position ({}, {}) outside bounds",
                gu.position.x, gu.position.y
            ));
        }
        if gu.position.z >= s.bounds.tuav_z_min {
            v.push(format!(
                "gus[{i}]: height {} not below the lowest hover altitude {}",
                gu.position.z, s.bounds.tuav_z_min
            ));
        }
        if !(gu.data_size > 0.0 && gu.data_size.is_finite()) {
            v.push(format!("gus[{i}]: data_size must be > 0"));
        }
        if !(gu.max_delay > 0.0 && gu.max_delay.is_finite()) {
            v.push(format!("gus[{i}]: max_delay must be > 0"));
        }
    }
    FeasibilityNote { violations: v }
}

fn dbm_per_hz_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Flat generation config. Keys mirror the short parameter names of the
/// reference parameter table; every key is optional and falls back to the
/// reference defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    #[serde(rename = "H_altitude")]
    pub huav_altitude: f64,
    pub tuav_z_min: f64,
    pub tuav_z_max: f64,
    /// Terrain band the GU heights are drawn from.
    pub terrain_z_min: f64,
    pub terrain_z_max: f64,

    pub users: usize,
    pub swarms: usize,
    pub tuavs: usize,
    #[serde(rename = "M_max")]
    pub m_max: usize,
    #[serde(rename = "U_max")]
    pub u_max: usize,

    pub alpha: f64,
    pub beta: f64,
    pub f: f64,
    pub c: f64,
    pub g: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "P_u_min")]
    pub p_u_min: f64,
    #[serde(rename = "P_u_max")]
    pub p_u_max: f64,
    #[serde(rename = "P_m_min")]
    pub p_m_min: f64,
    #[serde(rename = "P_m_max")]
    pub p_m_max: f64,
    #[serde(rename = "T_u_max")]
    pub t_u_max: f64,
    #[serde(rename = "B_um")]
    pub b_um: f64,
    #[serde(rename = "B_ms")]
    pub b_ms: f64,
    #[serde(rename = "U_tips")]
    pub u_tips: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "A0")]
    pub a0: f64,
    pub v0: f64,
    #[serde(rename = "P0")]
    pub p0: f64,
    #[serde(rename = "P1")]
    pub p1: f64,
    pub rho0: f64,
    pub d0: f64,
    pub v_xy: f64,
    pub v_z: f64,
    pub s0: f64,
    pub sigma2_dbm_hz: f64,
    pub eta_los: f64,
    pub eta_nlos: f64,
    /// G2A rate threshold, bits/s. Defaults to `Q / T_u_max`.
    #[serde(rename = "R_min_g2a", skip_serializing_if = "Option::is_none")]
    pub r_min_g2a: Option<f64>,
    /// A2A rate threshold, bits/s. Defaults to `Q / T_u_max`.
    #[serde(rename = "R_min_a2a", skip_serializing_if = "Option::is_none")]
    pub r_min_a2a: Option<f64>,
    pub eta_interpretation: EtaInterpretation,
    pub a2a_mode: A2aMode,
    pub vertical_mode: VerticalMode,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let b = AreaBounds::default();
        Self {
            x_min: b.x_min,
            x_max: b.x_max,
            y_min: b.y_min,
            y_max: b.y_max,
            huav_altitude: b.huav_altitude,
            tuav_z_min: b.tuav_z_min,
            tuav_z_max: b.tuav_z_max,
            terrain_z_min: 0.0,
            terrain_z_max: 10.0,
            users: 60,
            swarms: 3,
            tuavs: 8,
            m_max: 3,
            u_max: 6,
            alpha: 9.6,
            beta: 0.28,
            f: 2.4e9,
            c: 3.0e8,
            g: 9.8,
            q: 1.0e7,
            p_u_min: 0.001,
            p_u_max: 1.0,
            p_m_min: 0.001,
            p_m_max: 5.0,
            t_u_max: 0.4,
            b_um: 1.8e6,
            b_ms: 5.0e6,
            u_tips: 120.0,
            w: 4.25,
            a0: 0.5,
            v0: 0.002,
            p0: 99.66,
            p1: 120.16,
            rho0: 1.225,
            d0: 0.48,
            v_xy: 15.0,
            v_z: 6.0,
            s0: 0.0001,
            sigma2_dbm_hz: -174.0,
            eta_los: 0.1,
            eta_nlos: 20.0,
            r_min_g2a: None,
            r_min_a2a: None,
            eta_interpretation: EtaInterpretation::Linear,
            a2a_mode: A2aMode::Literal,
            vertical_mode: VerticalMode::Literal,
        }
    }
}

impl ScenarioConfig {
    pub fn bounds(&self) -> AreaBounds {
        AreaBounds {
            x_min: self.x_min,
            x_max: self.x_max,
            y_min: self.y_min,
            y_max: self.y_max,
            huav_altitude: self.huav_altitude,
            tuav_z_min: self.tuav_z_min,
            tuav_z_max: self.tuav_z_max,
        }
    }

    pub fn channel(&self) -> ChannelParams {
        let default_rate = self.q / self.t_u_max;
        ChannelParams {
            alpha: self.alpha,
            beta: self.beta,
            carrier_freq: self.f,
            light_speed: self.c,
            eta_los: self.eta_los,
            eta_nlos: self.eta_nlos,
            noise_psd: dbm_per_hz_to_watts(self.sigma2_dbm_hz),
            bw_g2a: self.b_um,
            bw_a2a: self.b_ms,
            r_min_g2a: self.r_min_g2a.unwrap_or(default_rate),
            r_min_a2a: self.r_min_a2a.unwrap_or(default_rate),
            eta_interpretation: self.eta_interpretation,
            a2a_mode: self.a2a_mode,
        }
    }

    pub fn energy(&self) -> EnergyParams {
        EnergyParams {
            p0: self.p0,
            p1: self.p1,
            u_tips: self.u_tips,
            v0: self.v0,
            d0: self.d0,
            rho0: self.rho0,
            s0: self.s0,
            a0: self.a0,
            mass: self.w,
            gravity: self.g,
            v_xy: self.v_xy,
            v_z: self.v_z,
            vertical_mode: self.vertical_mode,
        }
    }

    pub fn power(&self) -> PowerLimits {
        PowerLimits {
            p_u_min: self.p_u_min,
            p_u_max: self.p_u_max,
            p_m_min: self.p_m_min,
            p_m_max: self.p_m_max,
        }
    }

    /// Draws the GU layout and assembles a scenario.
    ///
    /// GUs are drawn one at a time from a single seeded stream, so the first
    /// `k` users of a larger draw equal the users of a `k`-user draw with the
    /// same seed.
    pub fn generate(&self, seed: u64) -> Result<Scenario> {
        if self.users == 0 {
            return Err(Error::Config("at least one ground user is required".into()));
        }
        if self.tuavs > self.swarms * self.m_max {
            return Err(Error::Config(format!(
                "{} T-UAVs cannot fit in {} swarms of at most {}",
                self.tuavs, self.swarms, self.m_max
            )));
        }
        if !(self.terrain_z_min <= self.terrain_z_max) {
            return Err(Error::Config("terrain_z_min must not exceed terrain_z_max".into()));
        }
        let bounds = self.bounds();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gus = (0..self.users)
            .map(|id| {
                let x = bounds.x_min + rng.random::<f64>() * bounds.width();
                let y = bounds.y_min + rng.random::<f64>() * bounds.height();
                let z = self.terrain_z_min
                    + rng.random::<f64>() * (self.terrain_z_max - self.terrain_z_min);
                GroundUser {
                    id,
                    position: Point3::new(x, y, z),
                    data_size: self.q,
                    max_delay: self.t_u_max,
                }
            })
            .collect();
        let scenario = Scenario {
            bounds,
            num_swarms: self.swarms,
            num_tuavs: self.tuavs,
            m_max: self.m_max,
            u_max: self.u_max,
            seed,
            channel: self.channel(),
            energy: self.energy(),
            power: self.power(),
            gus,
        };
        let note = validate_scenario(&scenario);
        if !note.is_valid() {
            return Err(Error::Config(note.violations.join("; ")));
        }
        Ok(scenario)
    }

    /// Reads a config file. Unknown keys are rejected.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Generates a scenario with reference defaults for everything but the
/// area, the counts and the seed.
pub fn generate_scenario(
    bounds: AreaBounds,
    num_gus: usize,
    num_swarms: usize,
    num_tuavs: usize,
    seed: u64,
) -> Result<Scenario> {
    let cfg = ScenarioConfig {
        x_min: bounds.x_min,
        x_max: bounds.x_max,
        y_min: bounds.y_min,
        y_max: bounds.y_max,
        huav_altitude: bounds.huav_altitude,
        tuav_z_min: bounds.tuav_z_min,
        tuav_z_max: bounds.tuav_z_max,
        users: num_gus,
        swarms: num_swarms,
        tuavs: num_tuavs,
        ..ScenarioConfig::default()
    };
    cfg.generate(seed)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = toml::to_string_pretty(s).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    crate::io::write_atomic(path, text.as_bytes())
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    load_scenario_with_warnings(path).map(|(s, _)| s)
}

/// Loads a scenario and also returns the dotted paths of any keys that were
/// ignored because the schema does not know them.
pub fn load_scenario_with_warnings(path: impl AsRef<Path>) -> Result<(Scenario, Vec<String>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (scenario, unknown) = parse_tolerant::<Scenario>(&text).map_err(|message| {
        Error::Parse {
            path: path.to_path_buf(),
            message,
        }
    })?;
    for key in &unknown {
        warn!("{}: ignoring unknown key `{key}`", path.display());
    }
    Ok((scenario, unknown))
}

/// Deserializes TOML text, reporting missing/invalid keys with their dotted
/// path and collecting keys the target type does not use.
pub(crate) fn parse_tolerant<T>(text: &str) -> std::result::Result<(T, Vec<String>), String>
where
    T: DeserializeOwned + Serialize,
{
    let raw: toml::Table = toml::from_str(text).map_err(|e| e.to_string())?;
    let raw = toml::Value::Table(raw);
    let parsed: T = serde_path_to_error::deserialize(raw.clone()).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("{path}: {}", e.inner())
        }
    })?;
    let known = toml::Value::try_from(&parsed).map_err(|e| e.to_string())?;
    let mut unknown = BTreeSet::new();
    collect_unknown(&raw, &known, String::new(), &mut unknown);
    Ok((parsed, unknown.into_iter().collect()))
}

fn collect_unknown(raw: &toml::Value, known: &toml::Value, prefix: String, out: &mut BTreeSet<String>) {
    match (raw, known) {
        (toml::Value::Table(r), toml::Value::Table(k)) => {
            for (key, value) in r {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                match k.get(key) {
                    Some(kv) => collect_unknown(value, kv, path, out),
                    None => {
                        out.insert(path);
                    }
                }
            }
        }
        (toml::Value::Array(r), toml::Value::Array(k)) => {
            for (i, (rv, kv)) in r.iter().zip(k).enumerate() {
                collect_unknown(rv, kv, format!("{prefix}[{i}]"), out);
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Scenario {
        generate_scenario(AreaBounds::default(), 60, 3, 8, 7).unwrap()
    }

    #[test]
    fn reference_generation_uses_table_defaults() {
        let s = reference();
        assert_eq!(s.gus.len(), 60);
        assert!(validate_scenario(&s).is_valid());
        assert_eq!(s.channel.alpha, 9.6);
        assert_eq!(s.channel.beta, 0.28);
        assert_eq!(s.energy.p0 + s.energy.p1, 219.82);
        assert_eq!(s.gus[0].data_size, 1.0e7);
        assert_eq!(s.gus[0].max_delay, 0.4);
        assert!((s.channel.noise_psd - 3.9811e-21).abs() < 1e-25);
        assert_eq!(s.channel.r_min_g2a, 2.5e7);
        for gu in &s.gus {
            assert!(s.bounds.contains_xy(gu.position.x, gu.position.y));
            assert!((0.0..=10.0).contains(&gu.position.z));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(reference(), reference());
        let other = generate_scenario(AreaBounds::default(), 60, 3, 8, 8).unwrap();
        assert_ne!(reference().gus, other.gus);
    }

    #[test]
    fn smaller_draw_is_prefix_of_larger() {
        let small = generate_scenario(AreaBounds::default(), 30, 3, 8, 7).unwrap();
        assert_eq!(small.gus[..], reference().gus[..30]);
    }

    #[test]
    fn too_many_tuavs_is_config_error() {
        let cfg = ScenarioConfig {
            swarms: 3,
            tuavs: 10,
            m_max: 3,
            ..ScenarioConfig::default()
        };
        assert!(matches!(cfg.generate(7), Err(Error::Config(_))));
    }

    #[test]
    fn validation_reports_gu_outside_bounds() {
        let mut s = reference();
        s.gus[3].position.x = 2500.0;
        let note = validate_scenario(&s);
        assert_eq!(note.violations.len(), 1);
        assert!(note.violations[0].contains("gus[3]"));
    }

    #[test]
    fn validation_reports_zero_u_max() {
        let mut s = reference();
        s.u_max = 0;
        let note = validate_scenario(&s);
        assert!(note.violations.iter().any(|v| v.contains("u_max")));
    }

    #[test]
    fn config_keys_use_table_names() {
        let cfg: ScenarioConfig = toml::from_str("alpha = 11.95\nB_um = 2e6\nP0 = 80.0\n").unwrap();
        assert_eq!(cfg.alpha, 11.95);
        assert_eq!(cfg.b_um, 2e6);
        assert_eq!(cfg.p0, 80.0);
        assert_eq!(cfg.beta, 0.28);
        assert!(toml::from_str::<ScenarioConfig>("alfa = 1.0").is_err());
    }
}
