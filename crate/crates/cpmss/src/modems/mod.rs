//! The transceivers: IM-CPM-SS and CIM-CPM-SS with joint demodulation and
//! despreading, the DSSS-CPM pair, the separate Viterbi-then-despread
//! baselines, and the conventional SRRC-shaped CIM baseline.
//!
//! Group phase policy: the noncoherently detected schemes (IM, DSSS) keep the
//! CPM phase running across groups — a constant rotation per group that
//! magnitude correlators never see. CIM-CPM-SS restarts each group at phase
//! zero because its PSK symbol needs an absolute phase reference.

pub mod baseline;
pub mod psk;

pub use baseline::{cim_baseline_detect, cim_baseline_transmit, CimBaselineConfig};

use crate::codebook::CpmSsCodebook;
use crate::cpm::{BasebandFrame, StartState, ViterbiDetector};
use crate::error::{Error, Result};
use crate::Cplx;

/// Pack bits (MSB first) into an index.
pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

/// Unpack an index into `width` bits, MSB first.
pub fn index_to_bits(index: usize, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((index >> (width - 1 - i)) & 1) as u8).collect()
}

/// IM-CPM-SS configuration: b_c index bits per group over a codebook slice.
#[derive(Clone, Copy)]
pub struct ImConfig<'a> {
    pub b_c: usize,
    pub codebook: &'a CpmSsCodebook,
    /// Start of this transmitter's slice in the kept-codeword list
    /// (cyclic; used to give NOMA users distinct codewords).
    pub offset: usize,
    /// Keep the accumulated CPM phase running across groups.
    pub phase_continuous: bool,
}

impl<'a> ImConfig<'a> {
    pub fn new(b_c: usize, codebook: &'a CpmSsCodebook) -> Result<Self> {
        if b_c == 0 {
            return Err(Error::config("b_c must be at least 1"));
        }
        if (1usize << b_c) > codebook.len() {
            return Err(Error::config(format!(
                "2^b_c = {} codewords needed but the codebook holds {}",
                1usize << b_c,
                codebook.len()
            )));
        }
        Ok(ImConfig {
            b_c,
            codebook,
            offset: 0,
            phase_continuous: true,
        })
    }

    pub fn with_offset(mut self, offset: usize) -> Self {
        self.offset = offset % self.codebook.len();
        self
    }

    fn codeword(&self, index: usize) -> &'a [Cplx] {
        let n_c = self.codebook.len();
        &self.codebook.codewords[(self.offset + index) % n_c]
    }

    fn end_phase(&self, index: usize) -> f64 {
        let n_c = self.codebook.len();
        self.codebook.end_phases[(self.offset + index) % n_c]
    }
}

/// CIM-CPM-SS configuration: b_c index bits plus b_m PSK bits per group.
#[derive(Clone, Copy)]
pub struct CimConfig<'a> {
    pub b_c: usize,
    pub b_m: usize,
    pub gray: bool,
    pub codebook: &'a CpmSsCodebook,
    pub offset: usize,
}

impl<'a> CimConfig<'a> {
    pub fn new(b_c: usize, b_m: usize, codebook: &'a CpmSsCodebook) -> Result<Self> {
        if b_c == 0 || b_m == 0 {
            return Err(Error::config("b_c and b_m must both be at least 1"));
        }
        if (1usize << b_c) > codebook.len() {
            return Err(Error::config(format!(
                "2^b_c = {} codewords needed but the codebook holds {}",
                1usize << b_c,
                codebook.len()
            )));
        }
        Ok(CimConfig {
            b_c,
            b_m,
            gray: true,
            codebook,
            offset: 0,
        })
    }

    pub fn with_offset(mut self, offset: usize) -> Self {
        self.offset = offset % self.codebook.len();
        self
    }

    /// Bits per group b_g = b_c + b_m.
    pub fn bits_per_group(&self) -> usize {
        self.b_c + self.b_m
    }

    pub fn psk_order(&self) -> usize {
        1 << self.b_m
    }

    fn codeword(&self, index: usize) -> &'a [Cplx] {
        let n_c = self.codebook.len();
        &self.codebook.codewords[(self.offset + index) % n_c]
    }
}

/// Per-group detector output.
#[derive(Debug, Clone)]
pub struct DetectionResult {
    /// Detected codeword index n̂ (within the 2^b_c slice).
    pub index_hat: usize,
    /// Detected PSK constellation position (CIM only).
    pub psk_hat: Option<usize>,
    /// |D_n| for every candidate, diagnostics.
    pub decision_mags: Vec<f64>,
    /// Recovered bit group.
    pub bits: Vec<u8>,
}

fn argmax_lowest(mags: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, &m) in mags.iter().enumerate().skip(1) {
        if m > mags[best] {
            best = i;
        }
    }
    best
}

/// IM-CPM-SS transmitter: each b_c-bit group selects one codeword.
pub fn im_transmit(bits: &[u8], cfg: &ImConfig) -> Result<BasebandFrame> {
    if bits.len() % cfg.b_c != 0 {
        return Err(Error::input(format!(
            "bit count {} not divisible by b_c = {}",
            bits.len(),
            cfg.b_c
        )));
    }
    let groups = bits.len() / cfg.b_c;
    let cw_len = cfg.codebook.samples_per_codeword();
    let mut samples = Vec::with_capacity(groups * cw_len);
    let mut running = 0.0f64;
    for g in 0..groups {
        let idx = bits_to_index(&bits[g * cfg.b_c..(g + 1) * cfg.b_c]);
        let cw = cfg.codeword(idx);
        if cfg.phase_continuous && running != 0.0 {
            let rot = Cplx::from_polar(1.0, running);
            samples.extend(cw.iter().map(|s| s * rot));
        } else {
            samples.extend_from_slice(cw);
        }
        if cfg.phase_continuous {
            running = (running + cfg.end_phase(idx)).rem_euclid(2.0 * std::f64::consts::PI);
        }
    }
    Ok(BasebandFrame {
        samples,
        samples_per_chip: cfg.codebook.cfg.oversample,
        chips_per_symbol: cfg.codebook.code_length(),
    })
}

/// Noncoherent IM detection: n̂ = argmax |⟨z_n, r⟩| per group. Uses no
/// channel knowledge; ties break to the lowest index.
pub fn im_detect(rx: &BasebandFrame, cfg: &ImConfig) -> Result<Vec<DetectionResult>> {
    let cw_len = cfg.codebook.samples_per_codeword();
    if rx.len() % cw_len != 0 {
        return Err(Error::input(format!(
            "frame length {} is not a multiple of the codeword length {cw_len}",
            rx.len()
        )));
    }
    let k = 1usize << cfg.b_c;
    let mut out = Vec::with_capacity(rx.len() / cw_len);
    for seg in rx.samples.chunks_exact(cw_len) {
        let mags: Vec<f64> = (0..k)
            .map(|n| {
                let dot: Cplx = cfg
                    .codeword(n)
                    .iter()
                    .zip(seg)
                    .map(|(z, r)| z.conj() * r)
                    .sum();
                dot.norm()
            })
            .collect();
        let index_hat = argmax_lowest(&mags);
        out.push(DetectionResult {
            index_hat,
            psk_hat: None,
            bits: index_to_bits(index_hat, cfg.b_c),
            decision_mags: mags,
        });
    }
    Ok(out)
}

/// CIM-CPM-SS transmitter: index bits pick the codeword, modulated bits the
/// PSK rotation; each group restarts at phase zero.
pub fn cim_transmit(bits: &[u8], cfg: &CimConfig) -> Result<BasebandFrame> {
    let bg = cfg.bits_per_group();
    if bits.len() % bg != 0 {
        return Err(Error::input(format!(
            "bit count {} not divisible by b_c + b_m = {bg}",
            bits.len()
        )));
    }
    let groups = bits.len() / bg;
    let cw_len = cfg.codebook.samples_per_codeword();
    let m = cfg.psk_order();
    let mut samples = Vec::with_capacity(groups * cw_len);
    for g in 0..groups {
        let group = &bits[g * bg..(g + 1) * bg];
        let idx = bits_to_index(&group[..cfg.b_c]);
        let v = bits_to_index(&group[cfg.b_c..]);
        let rot = psk::symbol_for_bits(v, m, cfg.gray);
        samples.extend(cfg.codeword(idx).iter().map(|s| s * rot));
    }
    Ok(BasebandFrame {
        samples,
        samples_per_chip: cfg.codebook.cfg.oversample,
        chips_per_symbol: cfg.codebook.code_length(),
    })
}

/// Coherent CIM detection with known channel `h`: channel-compensate,
/// correlate, pick the largest |D|, then slice D's angle for the PSK bits.
pub fn cim_detect(rx: &BasebandFrame, h: Cplx, cfg: &CimConfig) -> Result<Vec<DetectionResult>> {
    if h.norm_sqr() == 0.0 {
        return Err(Error::input("degenerate channel h = 0"));
    }
    let cw_len = cfg.codebook.samples_per_codeword();
    if rx.len() % cw_len != 0 {
        return Err(Error::input(format!(
            "frame length {} is not a multiple of the codeword length {cw_len}",
            rx.len()
        )));
    }
    let k = 1usize << cfg.b_c;
    let m = cfg.psk_order();
    let hc = h.conj();
    let mut out = Vec::with_capacity(rx.len() / cw_len);
    for seg in rx.samples.chunks_exact(cw_len) {
        let ds: Vec<Cplx> = (0..k)
            .map(|n| {
                cfg.codeword(n)
                    .iter()
                    .zip(seg)
                    .map(|(z, r)| z.conj() * (hc * r))
                    .sum()
            })
            .collect();
        let mags: Vec<f64> = ds.iter().map(|d| d.norm()).collect();
        let index_hat = argmax_lowest(&mags);
        // only the angle feeds the slicer; |h|^2 E_s scaling is positive real
        let psk_hat = psk::slice_position(ds[index_hat], m);
        let mut bits = index_to_bits(index_hat, cfg.b_c);
        let v = if cfg.gray {
            psk::gray_encode(psk_hat)
        } else {
            psk_hat
        };
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

/// Separate-detection baseline: Viterbi chip decisions, then hard bipolar
/// despreading against the candidate codewords.
pub fn sep_detect(
    rx: &BasebandFrame,
    cfg: &ImConfig,
    viterbi: &ViterbiDetector,
) -> Result<Vec<DetectionResult>> {
    let cw_len = cfg.codebook.samples_per_codeword();
    if rx.len() % cw_len != 0 {
        return Err(Error::input(format!(
            "frame length {} is not a multiple of the codeword length {cw_len}",
            rx.len()
        )));
    }
    let k = 1usize << cfg.b_c;
    let n_c = cfg.codebook.len();
    let mut out = Vec::with_capacity(rx.len() / cw_len);
    for seg in rx.samples.chunks_exact(cw_len) {
        // free start: IM bursts carry a running phase, always a trellis state
        let chips = viterbi.detect(seg, StartState::Free)?;
        let corrs: Vec<f64> = (0..k)
            .map(|n| {
                let code = &cfg.codebook.bipolar[(cfg.offset + n) % n_c];
                chips
                    .iter()
                    .zip(&code.chips)
                    .map(|(&a, &b)| (a * b as i32) as i64)
                    .sum::<i64>() as f64
            })
            .collect();
        let index_hat = argmax_lowest(&corrs);
        out.push(DetectionResult {
            index_hat,
            psk_hat: None,
            bits: index_to_bits(index_hat, cfg.b_c),
            decision_mags: corrs,
        });
    }
    Ok(out)
}

/// DSSS-CPM transmitter: one bit per codeword, bit 0 → +c, bit 1 → −c,
/// phase-continuous across groups.
pub fn dsss_transmit(bits: &[u8], codebook: &CpmSsCodebook) -> Result<BasebandFrame> {
    let plus = &codebook.codewords[0];
    let end_plus = codebook.end_phases[0];
    let mut samples = Vec::with_capacity(bits.len() * plus.len());
    let mut running = 0.0f64;
    for &b in bits {
        let rot = Cplx::from_polar(1.0, running);
        match b {
            // CPM of the negated chips is the conjugate waveform
            0 => samples.extend(plus.iter().map(|s| s * rot)),
            1 => samples.extend(plus.iter().map(|s| s.conj() * rot)),
            _ => return Err(Error::input("bits must be 0 or 1")),
        }
        let end = if b == 0 { end_plus } else { -end_plus };
        running = (running + end).rem_euclid(2.0 * std::f64::consts::PI);
    }
    Ok(BasebandFrame {
        samples,
        samples_per_chip: codebook.cfg.oversample,
        chips_per_symbol: codebook.code_length(),
    })
}

/// Joint DSSS-CPM detection: noncoherent choice between the ±c waveforms.
pub fn dsss_detect(rx: &BasebandFrame, codebook: &CpmSsCodebook) -> Result<Vec<u8>> {
    let cw_len = codebook.samples_per_codeword();
    if rx.len() % cw_len != 0 {
        return Err(Error::input("frame length not a multiple of codeword length"));
    }
    let plus = &codebook.codewords[0];
    let mut out = Vec::with_capacity(rx.len() / cw_len);
    for seg in rx.samples.chunks_exact(cw_len) {
        let mut d_plus = Cplx::new(0.0, 0.0);
        let mut d_minus = Cplx::new(0.0, 0.0);
        for (z, r) in plus.iter().zip(seg) {
            d_plus += z.conj() * r;
            d_minus += z * r; // conj of the conjugate codeword
        }
        out.push(if d_minus.norm() > d_plus.norm() { 1 } else { 0 });
    }
    Ok(out)
}

/// Separate DSSS-CPM detection: Viterbi chips, then the sign of the
/// despreading correlation.
pub fn dsss_sep_detect(
    rx: &BasebandFrame,
    codebook: &CpmSsCodebook,
    viterbi: &ViterbiDetector,
) -> Result<Vec<u8>> {
    let cw_len = codebook.samples_per_codeword();
    if rx.len() % cw_len != 0 {
        return Err(Error::input("frame length not a multiple of codeword length"));
    }
    let code = &codebook.bipolar[0];
    let mut out = Vec::with_capacity(rx.len() / cw_len);
    for seg in rx.samples.chunks_exact(cw_len) {
        let chips = viterbi.detect(seg, StartState::Free)?;
        let corr: i64 = chips
            .iter()
            .zip(&code.chips)
            .map(|(&a, &b)| (a * b as i32) as i64)
            .sum();
        out.push(if corr >= 0 { 0 } else { 1 });
    }
    Ok(out)
}
