//! Downlink NOMA: geometric fixed power allocation, superposition coding,
//! and successive interference cancellation.
//!
//! User 1 has the weakest channel statistics and the largest power share;
//! user u decodes (and cancels) users 1..u−1 before its own signal. Imperfect
//! SIC reconstructs interferers from their decoded bits
//! (decode–remodulate–subtract); the perfect-SIC switch subtracts the true
//! transmitted frames instead.

use crate::cpm::{BasebandFrame, ViterbiDetector};
use crate::error::{Error, Result};
use crate::modems::{
    cim_baseline_detect, cim_baseline_transmit, cim_detect, cim_transmit, im_detect, im_transmit,
    sep_detect, CimBaselineConfig, CimConfig, ImConfig,
};
use crate::Cplx;
use serde::{Deserialize, Serialize};

/// SIC reconstruction policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SicPolicy {
    /// Subtract re-modulated decoded bits.
    #[default]
    DecodeRemodulateSubtract,
    /// Subtract the true transmitted signals (genie).
    Perfect,
}

/// A NOMA cell: user count, power split, channel statistics, SIC policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NomaScenario {
    pub users: usize,
    pub beta: f64,
    pub p_total: f64,
    /// Derived P_1 > P_2 > ... > P_U, summing to p_total.
    pub powers: Vec<f64>,
    /// Rayleigh variance σ² per user (ascending, Table II defaults 1, 2, 3).
    pub channel_vars: Vec<f64>,
    pub sic: SicPolicy,
}

impl NomaScenario {
    pub fn new(users: usize, beta: f64, p_total: f64) -> Result<Self> {
        let powers = allocate_powers(users, beta, p_total)?;
        Ok(NomaScenario {
            users,
            beta,
            p_total,
            powers,
            channel_vars: (1..=users).map(|u| u as f64).collect(),
            sic: SicPolicy::default(),
        })
    }
}

/// Geometric power split P_u ∝ β^u normalized to `p_total`; strictly
/// decreasing for β ∈ (0, 1).
pub fn allocate_powers(users: usize, beta: f64, p_total: f64) -> Result<Vec<f64>> {
    if users == 0 {
        return Err(Error::config("user count must be at least 1"));
    }
    if users > 1 && !(beta > 0.0 && beta < 1.0) {
        return Err(Error::config(format!(
            "power allocation factor beta = {beta} outside (0, 1)"
        )));
    }
    if p_total <= 0.0 {
        return Err(Error::config("total power must be positive"));
    }
    let raw: Vec<f64> = (0..users).map(|u| beta.powi(u as i32)).collect();
    let sum: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|r| r * p_total / sum).collect())
}

/// Sample-wise Σ √P_u · s_u with each user frame normalized to unit average
/// power first, so the aggregate average power is exactly p_total for
/// uncorrelated users.
pub fn superpose(frames: &[BasebandFrame], powers: &[f64]) -> Result<BasebandFrame> {
    if frames.is_empty() || frames.len() != powers.len() {
        return Err(Error::input("one frame per power entry required"));
    }
    let len = frames[0].len();
    if len == 0 {
        return Err(Error::input("cannot superpose empty frames"));
    }
    for f in frames {
        if f.len() != len {
            return Err(Error::input(format!(
                "frame length mismatch: {} vs {len}",
                f.len()
            )));
        }
    }
    let mut samples = vec![Cplx::new(0.0, 0.0); len];
    for (frame, &p) in frames.iter().zip(powers) {
        let avg = frame.energy() / len as f64;
        let scale = (p / avg).sqrt();
        for (acc, s) in samples.iter_mut().zip(&frame.samples) {
            *acc += s * scale;
        }
    }
    Ok(BasebandFrame {
        samples,
        samples_per_chip: frames[0].samples_per_chip,
        chips_per_symbol: frames[0].chips_per_symbol,
    })
}

/// One user's modem in a NOMA cell.
#[derive(Clone)]
pub enum UserModem<'a> {
    Im(ImConfig<'a>),
    ImSep(ImConfig<'a>, &'a ViterbiDetector),
    Cim(CimConfig<'a>),
    CimBaseline(CimBaselineConfig),
}

impl UserModem<'_> {
    pub fn bits_per_group(&self) -> usize {
        match self {
            UserModem::Im(cfg) | UserModem::ImSep(cfg, _) => cfg.b_c,
            UserModem::Cim(cfg) => cfg.bits_per_group(),
            UserModem::CimBaseline(cfg) => cfg.bits_per_group(),
        }
    }

    pub fn samples_per_group(&self) -> usize {
        match self {
            UserModem::Im(cfg) | UserModem::ImSep(cfg, _) => cfg.codebook.samples_per_codeword(),
            UserModem::Cim(cfg) => cfg.codebook.samples_per_codeword(),
            UserModem::CimBaseline(cfg) => cfg.samples_per_group(),
        }
    }

    pub fn transmit(&self, bits: &[u8]) -> Result<BasebandFrame> {
        match self {
            UserModem::Im(cfg) | UserModem::ImSep(cfg, _) => im_transmit(bits, cfg),
            UserModem::Cim(cfg) => cim_transmit(bits, cfg),
            UserModem::CimBaseline(cfg) => cim_baseline_transmit(bits, cfg),
        }
    }

    /// Detect a burst with effective channel `h_eff` (receiver-side genie).
    pub fn detect(&self, rx: &BasebandFrame, h_eff: Cplx) -> Result<Vec<u8>> {
        let bits = match self {
            UserModem::Im(cfg) => im_detect(rx, cfg)?
                .into_iter()
                .flat_map(|d| d.bits)
                .collect(),
            UserModem::ImSep(cfg, vit) => sep_detect(rx, cfg, vit)?
                .into_iter()
                .flat_map(|d| d.bits)
                .collect(),
            UserModem::Cim(cfg) => cim_detect(rx, h_eff, cfg)?
                .into_iter()
                .flat_map(|d| d.bits)
                .collect(),
            UserModem::CimBaseline(cfg) => cim_baseline_detect(rx, h_eff, cfg)?
                .into_iter()
                .flat_map(|d| d.bits)
                .collect(),
        };
        Ok(bits)
    }
}

/// Decoded bits and residual diagnostics from one SIC chain.
#[derive(Debug, Clone)]
pub struct SicTrace {
    /// Bits decoded at each cancellation stage (users 1..u, then user u).
    pub stage_bits: Vec<Vec<u8>>,
    /// Average residual power after each subtraction.
    pub residual_power: Vec<f64>,
}

/// Run SIC at `user` (0-based): decode and cancel users 0..user, then decode
/// `user`'s own bits from the residual.
///
/// `rx` is the superposed downlink burst as received at this user (already
/// through its channel `h_u` plus noise). `true_frames` supplies the genie
/// signals for [`SicPolicy::Perfect`] (normalized like [`superpose`] does).
pub fn sic_receive(
    rx: &BasebandFrame,
    user: usize,
    scenario: &NomaScenario,
    h_u: Cplx,
    modems: &[UserModem],
    true_frames: Option<&[BasebandFrame]>,
) -> Result<(SicTrace, Vec<u8>)> {
    if modems.len() != scenario.users || user >= scenario.users {
        return Err(Error::input(
            "modem list and user index must match the scenario's user count",
        ));
    }
    if scenario.sic == SicPolicy::Perfect && true_frames.is_none() {
        return Err(Error::input("perfect SIC requires the true frames"));
    }
    let mut residual = rx.clone();
    let mut trace = SicTrace {
        stage_bits: Vec::with_capacity(user + 1),
        residual_power: Vec::with_capacity(user),
    };
    for q in 0..user {
        let amp = scenario.powers[q].sqrt();
        let bits = modems[q].detect(&residual, h_u * amp)?;
        let replica = match scenario.sic {
            SicPolicy::Perfect => true_frames.unwrap()[q].clone(),
            SicPolicy::DecodeRemodulateSubtract => modems[q].transmit(&bits)?,
        };
        let avg = replica.energy() / replica.len() as f64;
        let scale = h_u * (scenario.powers[q] / avg).sqrt();
        for (r, s) in residual.samples.iter_mut().zip(&replica.samples) {
            *r -= s * scale;
        }
        trace
            .residual_power
            .push(residual.energy() / residual.len() as f64);
        trace.stage_bits.push(bits);
    }
    let own = modems[user].detect(&residual, h_u * scenario.powers[user].sqrt())?;
    trace.stage_bits.push(own.clone());
    Ok((trace, own))
}
