//! Link-level simulation library for index-modulated spread continuous phase
//! modulation (IM-CPM-SS / CIM-CPM-SS) and their baselines.
//!
//! The building blocks, bottom up:
//!
//! * [`msequence`] — LFSR maximal-length sequences, cyclic shifts, bipolar chips.
//! * [`cpm`] — phase-smoothing pulses, the CPM modulator, and a trellis MLSD.
//! * [`codebook`] — the quasi-orthogonal CPM-SS codebook and its
//!   cross-correlation verification tools.
//! * [`modems`] — the IM/CIM transceivers, the separate-detection baselines,
//!   and the conventional CIM (SRRC) baseline.
//! * [`channel`] — AWGN, block Rayleigh fading, the Rapp power amplifier, and
//!   PAPR/CCDF measurement.
//! * [`noma`] — downlink superposition with geometric power allocation and SIC.
//! * [`analysis`] — closed-form BER, spectral/energy efficiency, and
//!   complexity counts used as Monte Carlo oracles.
//! * [`harness`] — Eb/N0 calibration, the Monte Carlo BER engine, PAPR
//!   campaigns, figure-replication presets, and CSV output.
//!
//! With the default `parallel` feature, Monte Carlo trials and correlation
//! scans fan out over rayon; the sequential fallback produces byte-identical
//! results (see [`exec`]).

pub mod analysis;
pub mod channel;
pub mod codebook;
pub mod cpm;
pub mod error;
pub mod exec;
pub mod harness;
pub mod modems;
pub mod msequence;
pub mod noma;
pub mod seeds;

pub use cpm::{BasebandFrame, CpmConfig, PhaseState, PulseShape};
pub use error::{Error, Result};

/// Complex baseband sample type used throughout.
pub type Cplx = num_complex::Complex64;
