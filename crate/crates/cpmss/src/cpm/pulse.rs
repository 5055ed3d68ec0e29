//! Frequency pulses g(τ) and their phase-smoothing integrals q(t).
//!
//! All pulses are defined on the support `[0, L·T]` (T = 1 chip interval,
//! L = the configured memory) and satisfy `∫ g = 1/2`, so `q(0) = 0` and
//! `q(t ≥ L) = 1/2`. REC and RC integrate in closed form; the nominally
//! infinite SRC and Gaussian pulses are truncated to the support and
//! renormalized:
//!
//! * Gaussian: truncated to the configured support (use `memory = 3` for the
//!   usual 3-interval truncation), bandwidth from the time-bandwidth
//!   product BT.
//! * Spectral raised cosine: main-lobe scale `L₀ = L/4`, i.e. the support is
//!   4 nominal intervals wide.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::f64::consts::PI;

/// Phase-smoothing pulse family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PulseShape {
    /// Rectangular. `L = 1` with `h = 1/2`, `M = 2` is MSK.
    Rec,
    /// Raised cosine (time domain).
    Rc,
    /// Spectral raised cosine with roll-off `rolloff`, truncated to `4·(L/4)`
    /// intervals and renormalized.
    Src { rolloff: f64 },
    /// Gaussian with time-bandwidth product `bt`, truncated to the support
    /// and renormalized (GMSK-style).
    Gau { bt: f64 },
}

fn gauss_q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

impl PulseShape {
    /// Raw (pre-normalization) pulse value at `t ∈ [0, L]`.
    fn g_raw(&self, t: f64, l: f64) -> f64 {
        match *self {
            PulseShape::Rec => 1.0 / (2.0 * l),
            PulseShape::Rc => (1.0 - (2.0 * PI * t / l).cos()) / (2.0 * l),
            PulseShape::Src { rolloff } => {
                let l0 = l / 4.0;
                let u = t - l / 2.0;
                let x = 2.0 * u / l0;
                let sinc = if x.abs() < 1e-12 {
                    1.0
                } else {
                    (PI * x).sin() / (PI * x)
                };
                let denom = 1.0 - (2.0 * rolloff * x) * (2.0 * rolloff * x);
                let cosf = if denom.abs() < 1e-9 {
                    // removable singularity at 2·rolloff·x = ±1
                    PI / 4.0
                } else {
                    (PI * rolloff * x).cos() / denom
                };
                sinc * cosf / (2.0 * l0)
            }
            PulseShape::Gau { bt } => {
                let u = t - l / 2.0;
                let c = 2.0 * PI * bt / (2.0f64.ln()).sqrt();
                0.5 * (gauss_q(c * (u - 0.5)) - gauss_q(c * (u + 0.5)))
            }
        }
    }

    fn has_closed_form_q(&self) -> bool {
        matches!(self, PulseShape::Rec | PulseShape::Rc)
    }

    fn q_closed(&self, t: f64, l: f64) -> f64 {
        match *self {
            PulseShape::Rec => t / (2.0 * l),
            PulseShape::Rc => (t - (l / (2.0 * PI)) * (2.0 * PI * t / l).sin()) / (2.0 * l),
            _ => unreachable!(),
        }
    }

    /// Composite-Simpson integral of the raw pulse over `[a, b]`.
    fn integrate_raw(&self, a: f64, b: f64, l: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let n = (((b - a) * 1024.0).ceil() as usize).max(64) & !1usize;
        let h = (b - a) / n as f64;
        let mut acc = self.g_raw(a, l) + self.g_raw(b, l);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.g_raw(a + i as f64 * h, l);
        }
        acc * h / 3.0
    }
}

/// Sampled phase-smoothing table for a given support and oversampling factor.
///
/// `q[j * p + k]` is q evaluated at offset `j + (k+1)/P`, the time of sample
/// `k` of a chip relative to the start of the symbol `j` chips earlier.
/// Samples are taken at the right endpoints `t = (k+1)·T/P`; the modulator
/// and every correlator in the crate share this convention.
#[derive(Debug, Clone)]
pub struct PulseTable {
    pub memory: usize,
    pub oversample: usize,
    q: Vec<f64>,
}

impl PulseTable {
    pub fn new(pulse: PulseShape, memory: usize, oversample: usize) -> Self {
        let l = memory as f64;
        let p = oversample;
        let offsets: Vec<f64> = (0..memory * p)
            .map(|i| {
                let j = i / p;
                let k = i % p;
                j as f64 + (k + 1) as f64 / p as f64
            })
            .collect();
        let q = if pulse.has_closed_form_q() {
            offsets.iter().map(|&t| pulse.q_closed(t, l)).collect()
        } else {
            // integrate segment by segment, then scale so q(L) = 1/2
            let mut cum = Vec::with_capacity(offsets.len());
            let mut prev_t = 0.0;
            let mut acc = 0.0;
            for &t in &offsets {
                acc += pulse.integrate_raw(prev_t, t, l);
                cum.push(acc);
                prev_t = t;
            }
            let total = acc; // last offset is exactly L
            let scale = 0.5 / total;
            cum.iter().map(|&v| v * scale).collect()
        };
        PulseTable {
            memory,
            oversample,
            q,
        }
    }

    #[inline]
    pub fn q(&self, j: usize, k: usize) -> f64 {
        self.q[j * self.oversample + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }
}
