//! Continuous phase modulation: configuration, phase accumulation, waveform
//! synthesis, and the trellis MLSD used by the separate-detection baselines.
//!
//! The transmitted phase over symbol interval `n` is
//! `φ(t) = φ_acc + 2πh Σ_{j=0}^{L-1} a_{n-j} q(t - (n-j)T)`, where `φ_acc`
//! accumulates `πh·a_m` for every symbol `m ≤ n-L` that has left the pulse
//! window. Samples are taken at right endpoints `t = (k+1)T/P` (see
//! [`pulse::PulseTable`]).

mod pulse;
pub mod viterbi;

pub use pulse::{PulseShape, PulseTable};
pub use viterbi::{StartState, ViterbiDetector};

use crate::error::{Error, Result};
use crate::Cplx;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Full CPM parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpmConfig {
    /// Modulation index numerator h_m.
    pub h_num: u32,
    /// Modulation index denominator h_d.
    pub h_den: u32,
    /// Memory L in symbol intervals (pulse support length).
    pub memory: usize,
    /// Alphabet size M; symbols are {±1, ±3, ..., ±(M−1)}.
    pub order: u32,
    /// Samples per chip/symbol interval.
    pub oversample: usize,
    /// Frequency pulse family.
    pub pulse: PulseShape,
}

impl CpmConfig {
    /// Binary h = 1/2 full-response REC CPM (MSK), the Table-II default.
    pub fn msk(oversample: usize) -> Self {
        CpmConfig {
            h_num: 1,
            h_den: 2,
            memory: 1,
            order: 2,
            oversample,
            pulse: PulseShape::Rec,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_num == 0 || self.h_den == 0 || gcd(self.h_num, self.h_den) != 1 {
            return Err(Error::config(
                "modulation index must be a reduced fraction h_m/h_d with both nonzero",
            ));
        }
        if self.memory == 0 {
            return Err(Error::config("memory L must be at least 1"));
        }
        if self.order < 2 || !self.order.is_power_of_two() {
            return Err(Error::config("order M must be a power of two, at least 2"));
        }
        if self.oversample == 0 {
            return Err(Error::config("oversample P must be at least 1"));
        }
        Ok(())
    }

    /// Modulation index h = h_m/h_d.
    pub fn h(&self) -> f64 {
        self.h_num as f64 / self.h_den as f64
    }

    /// Trellis state count: h_d·M^(L−1) for even h_m, 2·h_d·M^(L−1) for odd.
    pub fn trellis_state_count(&self) -> usize {
        let phases = if self.h_num % 2 == 0 {
            self.h_den as usize
        } else {
            2 * self.h_den as usize
        };
        phases * (self.order as usize).pow(self.memory as u32 - 1)
    }

    /// True if `a` is a valid symbol: odd and |a| ≤ M−1.
    pub fn in_alphabet(&self, a: i32) -> bool {
        a.rem_euclid(2) == 1 && a.unsigned_abs() <= self.order - 1
    }

    pub fn pulse_table(&self) -> PulseTable {
        PulseTable::new(self.pulse, self.memory, self.oversample)
    }
}

/// CPM phase state: accumulated phase plus the L−1 most recent symbols.
///
/// `recent[0]` is the latest symbol; a 0 entry means "no symbol yet" (cold
/// start) and contributes nothing to the phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    /// Accumulated phase φ (radians, mod 2π).
    pub accumulated: f64,
    /// Last L−1 symbols, newest first.
    pub recent: Vec<i32>,
}

impl PhaseState {
    /// Zero-phase cold start.
    pub fn zero(cfg: &CpmConfig) -> Self {
        PhaseState {
            accumulated: 0.0,
            recent: vec![0; cfg.memory - 1],
        }
    }
}

/// A burst of complex baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct BasebandFrame {
    pub samples: Vec<Cplx>,
    /// Samples per chip (the oversampling factor P).
    pub samples_per_chip: usize,
    /// Chips per symbol: N when carrying a spread codeword, 1 otherwise.
    pub chips_per_symbol: usize,
}

impl BasebandFrame {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total energy Σ|s|².
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Peak-to-average power ratio of this frame alone, in dB.
    pub fn papr_db(&self) -> f64 {
        let peak = self
            .samples
            .iter()
            .map(|s| s.norm_sqr())
            .fold(0.0f64, f64::max);
        let mean = self.energy() / self.len() as f64;
        10.0 * (peak / mean).log10()
    }
}

fn symbol_at(symbols: &[i32], recent: &[i32], n: isize) -> i32 {
    if n >= 0 {
        symbols[n as usize]
    } else {
        let back = (-n) as usize; // a_{-1} = recent[0], a_{-2} = recent[1], ...
        if back <= recent.len() {
            recent[back - 1]
        } else {
            0
        }
    }
}

/// Phase trajectory φ(t; a), P samples per symbol, plus the final phase state.
pub fn phase_trajectory_with_state(
    symbols: &[i32],
    cfg: &CpmConfig,
    initial: &PhaseState,
) -> Result<(Vec<f64>, PhaseState)> {
    cfg.validate()?;
    if initial.recent.len() != cfg.memory - 1 {
        return Err(Error::input(format!(
            "initial state carries {} recent symbols, expected {}",
            initial.recent.len(),
            cfg.memory - 1
        )));
    }
    for &a in symbols {
        if !cfg.in_alphabet(a) && a != 0 {
            return Err(Error::input(format!("symbol {a} outside the CPM alphabet")));
        }
        if a == 0 {
            return Err(Error::input("symbol 0 outside the CPM alphabet"));
        }
    }
    let p = cfg.oversample;
    let l = cfg.memory;
    let table = cfg.pulse_table();
    let two_pi_h = 2.0 * PI * cfg.h();
    let pi_h = PI * cfg.h();
    let mut acc = initial.accumulated;
    let mut out = Vec::with_capacity(symbols.len() * p);
    for n in 0..symbols.len() as isize {
        for k in 0..p {
            let mut inst = 0.0;
            for j in 0..l {
                let a = symbol_at(symbols, &initial.recent, n - j as isize);
                if a != 0 {
                    inst += a as f64 * table.q(j, k);
                }
            }
            out.push(acc + two_pi_h * inst);
        }
        // symbol a_{n-L+1} leaves the pulse window
        let leaving = symbol_at(symbols, &initial.recent, n - (l as isize - 1));
        acc += pi_h * leaving as f64;
    }
    let mut recent = vec![0i32; l - 1];
    for (j, slot) in recent.iter_mut().enumerate() {
        *slot = symbol_at(symbols, &initial.recent, symbols.len() as isize - 1 - j as isize);
    }
    let acc = acc.rem_euclid(2.0 * PI);
    Ok((out, PhaseState { accumulated: acc, recent }))
}

/// Phase trajectory φ(t; a) with P samples per symbol interval.
pub fn phase_trajectory(
    symbols: &[i32],
    cfg: &CpmConfig,
    initial: &PhaseState,
) -> Result<Vec<f64>> {
    phase_trajectory_with_state(symbols, cfg, initial).map(|(v, _)| v)
}

/// Synthesize the constant-envelope waveform exp(jφ(t; a)).
pub fn modulate(symbols: &[i32], cfg: &CpmConfig, initial: &PhaseState) -> Result<BasebandFrame> {
    let phase = phase_trajectory(symbols, cfg, initial)?;
    Ok(BasebandFrame {
        samples: phase.iter().map(|&p| Cplx::from_polar(1.0, p)).collect(),
        samples_per_chip: cfg.oversample,
        chips_per_symbol: 1,
    })
}
