//! Conventional code index modulation over SRRC-shaped Walsh codes — the
//! non-constant-envelope baseline for the PAPR and nonlinearity comparisons.
//!
//! Index bits select a Walsh row, the PSK symbol multiplies it (the same
//! spreading code serves the in-phase and quadrature branches), chips are
//! upsampled and shaped by a truncated square-root raised cosine. The
//! receiver applies the matched filter, samples at chip instants, and
//! despreads against the candidate codes.

use super::psk;
use super::{bits_to_index, index_to_bits, DetectionResult};
use crate::cpm::BasebandFrame;
use crate::error::{Error, Result};
use crate::Cplx;
use std::f64::consts::PI;

/// Conventional CIM baseline parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CimBaselineConfig {
    pub b_c: usize,
    pub b_m: usize,
    pub gray: bool,
    /// SRRC roll-off α.
    pub rolloff: f64,
    /// One-sided pulse span in chip intervals (L_t = 6T → 6).
    pub span_chips: usize,
    /// Chips per symbol (Walsh code length, a power of two).
    pub chips: usize,
    /// Samples per chip.
    pub oversample: usize,
}

impl CimBaselineConfig {
    /// Table-II flavored default: Walsh-64, P = 4, span 6T.
    pub fn new(b_c: usize, b_m: usize, rolloff: f64) -> Self {
        CimBaselineConfig {
            b_c,
            b_m,
            gray: true,
            rolloff,
            span_chips: 6,
            chips: 64,
            oversample: 4,
        }
    }

    pub fn bits_per_group(&self) -> usize {
        self.b_c + self.b_m
    }

    pub fn samples_per_group(&self) -> usize {
        self.chips * self.oversample
    }

    fn validate(&self) -> Result<()> {
        if self.b_c == 0 || self.b_m == 0 {
            return Err(Error::config("b_c and b_m must both be at least 1"));
        }
        if !self.chips.is_power_of_two() {
            return Err(Error::config("Walsh code length must be a power of two"));
        }
        if (1usize << self.b_c) + 1 > self.chips {
            return Err(Error::config(format!(
                "2^b_c = {} codes requested but Walsh-{} provides {} (DC row excluded)",
                1usize << self.b_c,
                self.chips,
                self.chips - 1
            )));
        }
        if !(0.0..=1.0).contains(&self.rolloff) || self.rolloff == 0.0 {
            return Err(Error::config("roll-off must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Sylvester-ordered Walsh-Hadamard codes; row 0 is the all-ones (DC) row.
pub fn walsh_codes(n: usize) -> Vec<Vec<i8>> {
    assert!(n.is_power_of_two());
    (0..n)
        .map(|r| (0..n).map(|c| if (r & c).count_ones() % 2 == 0 { 1i8 } else { -1 }).collect())
        .collect()
}

/// Unit-energy truncated SRRC taps: `span` chips each side, P samples per chip.
pub fn srrc_taps(rolloff: f64, span_chips: usize, oversample: usize) -> Vec<f64> {
    let p = oversample as f64;
    let half = (span_chips * oversample) as i64;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| {
            let t = i as f64 / p; // in chip intervals
            let fourat = 4.0 * rolloff * t;
            if t.abs() < 1e-12 {
                1.0 - rolloff + 4.0 * rolloff / PI
            } else if (fourat.abs() - 1.0).abs() < 1e-9 {
                (rolloff / 2f64.sqrt())
                    * ((1.0 + 2.0 / PI) * (PI / (4.0 * rolloff)).sin()
                        + (1.0 - 2.0 / PI) * (PI / (4.0 * rolloff)).cos())
            } else {
                ((PI * t * (1.0 - rolloff)).sin()
                    + fourat * (PI * t * (1.0 + rolloff)).cos())
                    / (PI * t * (1.0 - fourat * fourat))
            }
        })
        .collect();
    let energy: f64 = taps.iter().map(|h| h * h).sum();
    let scale = energy.sqrt().recip();
    taps.iter_mut().for_each(|h| *h *= scale);
    taps
}

fn filter_same(x: &[Cplx], taps: &[f64]) -> Vec<Cplx> {
    let half = (taps.len() - 1) / 2;
    let mut y = vec![Cplx::new(0.0, 0.0); x.len()];
    for (i, out) in y.iter_mut().enumerate() {
        let mut acc = Cplx::new(0.0, 0.0);
        for (j, &h) in taps.iter().enumerate() {
            let k = i as i64 + half as i64 - j as i64;
            if k >= 0 && (k as usize) < x.len() {
                acc += x[k as usize] * h;
            }
        }
        *out = acc;
    }
    y
}

/// Chip sequence (code × PSK symbol) for one bit group.
fn group_chips(bits: &[u8], cfg: &CimBaselineConfig, codes: &[Vec<i8>]) -> (usize, usize, Vec<Cplx>) {
    let idx = bits_to_index(&bits[..cfg.b_c]);
    let v = bits_to_index(&bits[cfg.b_c..]);
    let sym = psk::symbol_for_bits(v, 1 << cfg.b_m, cfg.gray);
    let chips = codes[idx + 1].iter().map(|&c| sym * c as f64).collect();
    (idx, v, chips)
}

/// Transmit a burst; average power is normalized to 1 (unit-energy taps and
/// the √P upsampling compensation), envelope is not constant.
pub fn cim_baseline_transmit(bits: &[u8], cfg: &CimBaselineConfig) -> Result<BasebandFrame> {
    cfg.validate()?;
    let bg = cfg.bits_per_group();
    if bits.len() % bg != 0 {
        return Err(Error::input(format!(
            "bit count {} not divisible by b_c + b_m = {bg}",
            bits.len()
        )));
    }
    let codes = walsh_codes(cfg.chips);
    let groups = bits.len() / bg;
    let p = cfg.oversample;
    let mut impulses = vec![Cplx::new(0.0, 0.0); groups * cfg.chips * p];
    for g in 0..groups {
        let (_, _, chips) = group_chips(&bits[g * bg..(g + 1) * bg], cfg, &codes);
        for (c, chip) in chips.iter().enumerate() {
            impulses[(g * cfg.chips + c) * p] = chip * (p as f64).sqrt();
        }
    }
    let taps = srrc_taps(cfg.rolloff, cfg.span_chips, p);
    let samples = filter_same(&impulses, &taps);
    Ok(BasebandFrame {
        samples,
        samples_per_chip: p,
        chips_per_symbol: cfg.chips,
    })
}

/// Matched-filter detection with known channel `h`.
pub fn cim_baseline_detect(
    rx: &BasebandFrame,
    h: Cplx,
    cfg: &CimBaselineConfig,
) -> Result<Vec<DetectionResult>> {
    cfg.validate()?;
    if h.norm_sqr() == 0.0 {
        return Err(Error::input("degenerate channel h = 0"));
    }
    let spg = cfg.samples_per_group();
    if rx.len() % spg != 0 {
        return Err(Error::input(format!(
            "frame length {} is not a multiple of the group length {spg}",
            rx.len()
        )));
    }
    let taps = srrc_taps(cfg.rolloff, cfg.span_chips, cfg.oversample);
    let filtered = filter_same(&rx.samples, &taps);
    let codes = walsh_codes(cfg.chips);
    let k = 1usize << cfg.b_c;
    let m = 1usize << cfg.b_m;
    let p = cfg.oversample;
    let hc = h.conj();
    let groups = rx.len() / spg;
    let mut out = Vec::with_capacity(groups);
    for g in 0..groups {
        // chip-rate samples at the cascaded-filter alignment points
        let chips: Vec<Cplx> = (0..cfg.chips)
            .map(|c| hc * filtered[(g * cfg.chips + c) * p])
            .collect();
        let ds: Vec<Cplx> = (0..k)
            .map(|n| {
                chips
                    .iter()
                    .zip(&codes[n + 1])
                    .map(|(x, &c)| x * c as f64)
                    .sum()
            })
            .collect();
        let mags: Vec<f64> = ds.iter().map(|d| d.norm()).collect();
        let mut index_hat = 0usize;
        for (i, &v) in mags.iter().enumerate().skip(1) {
            if v > mags[index_hat] {
                index_hat = i;
            }
        }
        let psk_hat = psk::slice_position(ds[index_hat], m);
        let mut bits = index_to_bits(index_hat, cfg.b_c);
        let v = if cfg.gray { psk::gray_encode(psk_hat) } else { psk_hat };
        bits.extend(index_to_bits(v, cfg.b_m));
        out.push(DetectionResult {
            index_hat,
            psk_hat: Some(psk_hat),
            decision_mags: mags,
            bits,
        });
    }
    Ok(out)
}
