//! Ground-to-air and air-to-air link models.
//!
//! The G2A link uses a probabilistic line-of-sight model: an S-curve in the
//! elevation angle weights the LoS and NLoS mean additional losses, and the
//! result multiplies the free-space gain. Rates follow Shannon capacity with
//! noise power `B * sigma²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, elevation_angle_deg};
use crate::scenario::{A2aMode, ChannelParams, EtaInterpretation, Point3};

/// Everything known about one G2A link at a given transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub los_prob: f64,
    pub gain: f64,
    pub rate: f64,
    pub meets_threshold: bool,
}

/// LoS probability at elevation `theta_deg`.
pub fn los_probability(theta_deg: f64, params: &ChannelParams) -> f64 {
    1.0 / (1.0 + params.alpha * (-params.beta * (theta_deg - params.alpha)).exp())
}

fn eta_factors(params: &ChannelParams) -> (f64, f64) {
    match params.eta_interpretation {
        EtaInterpretation::Linear => (params.eta_los, params.eta_nlos),
        EtaInterpretation::Decibel => (
            10f64.powf(-params.eta_los / 10.0),
            10f64.powf(-params.eta_nlos / 10.0),
        ),
    }
}

/// Free-space power gain `(c / (4π f d))²`.
pub fn free_space_gain(d: f64, params: &ChannelParams) -> f64 {
    let r = params.light_speed / (4.0 * std::f64::consts::PI * params.carrier_freq * d);
    r * r
}

/// Small-scale (LoS/NLoS-averaged) gain at elevation `theta_deg`.
pub fn small_scale_gain(theta_deg: f64, params: &ChannelParams) -> f64 {
    let p = los_probability(theta_deg, params);
    let (los, nlos) = eta_factors(params);
    p * los + (1.0 - p) * nlos
}

/// Total G2A channel gain between a GU and a T-UAV.
pub fn g2a_gain(gu: &Point3, uav: &Point3, params: &ChannelParams) -> Result<f64> {
    let d = distance(gu, uav);
    if !(d > 0.0) {
        return Err(Error::Geometry("GU and T-UAV coincide".into()));
    }
    let theta = elevation_angle_deg(gu, uav);
    Ok(small_scale_gain(theta, params) * free_space_gain(d, params))
}

fn shannon(bandwidth: f64, gain: f64, power: f64, noise_psd: f64) -> f64 {
    bandwidth * (gain * power / (bandwidth * noise_psd)).ln_1p() / std::f64::consts::LN_2
}

/// G2A Shannon rate, bits/s.
pub fn g2a_rate(gu: &Point3, uav: &Point3, p_u: f64, params: &ChannelParams) -> Result<f64> {
    let h = g2a_gain(gu, uav, params)?;
    Ok(shannon(params.bw_g2a, h, p_u, params.noise_psd))
}

/// A2A relay rate, bits/s. Distance-independent: only the LoS loss applies.
pub fn a2a_rate(p_m: f64, params: &ChannelParams) -> f64 {
    let (los, _) = eta_factors(params);
    shannon(params.bw_a2a, los, p_m, params.noise_psd)
}

/// A2A rate for a concrete T-UAV/H-UAV pair, honoring `params.a2a_mode`.
pub fn a2a_link_rate(tuav: &Point3, huav: &Point3, p_m: f64, params: &ChannelParams) -> f64 {
    match params.a2a_mode {
        A2aMode::Literal => a2a_rate(p_m, params),
        A2aMode::FreeSpace => {
            let (los, _) = eta_factors(params);
            let d = distance(tuav, huav).max(1.0);
            shannon(params.bw_a2a, los * free_space_gain(d, params), p_m, params.noise_psd)
        }
    }
}

/// Threshold outcome for one GU's two hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdCheck {
    pub g2a: bool,
    pub a2a: bool,
}

impl ThresholdCheck {
    pub fn both(&self) -> bool {
        self.g2a && self.a2a
    }
}

pub fn check_thresholds(g2a_rate: f64, a2a_rate: f64, params: &ChannelParams) -> ThresholdCheck {
    ThresholdCheck {
        g2a: g2a_rate >= params.r_min_g2a,
        a2a: a2a_rate >= params.r_min_a2a,
    }
}

pub fn link_budget(gu: &Point3, uav: &Point3, p_u: f64, params: &ChannelParams) -> Result<LinkBudget> {
    let theta = elevation_angle_deg(gu, uav);
    let gain = g2a_gain(gu, uav, params)?;
    let rate = shannon(params.bw_g2a, gain, p_u, params.noise_psd);
    Ok(LinkBudget {
        los_prob: los_probability(theta, params),
        gain,
        rate,
        meets_threshold: rate >= params.r_min_g2a,
    })
}
