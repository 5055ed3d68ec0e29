//! The quasi-orthogonal CPM-SS codebook.
//!
//! Construction: map the m-sequence to bipolar chips, form the N×N cyclic
//! shift matrix, CPM-modulate every row from zero initial phase, then drop
//! rows whose shifts are cyclically adjacent (their cross-correlations carry
//! the ±j/π imaginary component). The pruning rule keeps even shift indices
//! 0, 2, 4, ... truncated to `N_c = 2^(SF−1) − 1` rows, which also breaks the
//! wrap-around adjacency between shifts N−1 and 0.
//!
//! For the full-response binary h = 1/2 configuration the remaining pairs
//! satisfy |ρ| = 1/N exactly, and adjacent-shift pairs (before pruning) have
//! Im ρ = ±(N+1)/(2NP)·cot(π/2P) — [`verify_theorem1`] measures both.

use crate::cpm::{modulate, CpmConfig, PhaseState};
use crate::error::{Error, Result};
use crate::exec::{map_reduce, Execution};
use crate::msequence::{generate_msequence, shift_matrix, BipolarSequence, LfsrSpec};
use crate::Cplx;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A built codebook: the retained shifts, their modulated codewords, and the
/// bipolar chips they came from.
#[derive(Debug, Clone)]
pub struct CpmSsCodebook {
    pub sf: u32,
    pub cfg: CpmConfig,
    pub lfsr: LfsrSpec,
    /// Shift indices retained after adjacency pruning, in shift order.
    pub kept_shifts: Vec<usize>,
    /// N_c codewords of N·P complex samples each.
    pub codewords: Vec<Vec<Cplx>>,
    /// The bipolar chip rows behind `codewords` (used by hard despreading).
    pub bipolar: Vec<BipolarSequence>,
    /// Accumulated CPM phase at the end of each codeword.
    pub end_phases: Vec<f64>,
    /// Codeword energy E_s = N·P (constant envelope).
    pub energy: f64,
    /// True when the config is the full-response binary h = 1/2 family the
    /// quasi-orthogonality analysis covers.
    pub theorem1_config: bool,
}

impl CpmSsCodebook {
    /// Number of usable codewords N_c.
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Code length N = 2^SF − 1.
    pub fn code_length(&self) -> usize {
        (1usize << self.sf) - 1
    }

    /// Samples per codeword, N·P.
    pub fn samples_per_codeword(&self) -> usize {
        self.code_length() * self.cfg.oversample
    }

    /// Convenience: default taps and all-ones seed for `sf`.
    pub fn build_default(sf: u32, cfg: CpmConfig) -> Result<Self> {
        build_codebook(cfg, &LfsrSpec::with_default_taps(sf)?)
    }
}

/// Build the pruned codebook from an LFSR spec.
pub fn build_codebook(cfg: CpmConfig, lfsr: &LfsrSpec) -> Result<CpmSsCodebook> {
    cfg.validate()?;
    if lfsr.sf < 2 {
        return Err(Error::config("SF must be at least 2"));
    }
    let base = generate_msequence(lfsr)?;
    let rows = shift_matrix(&base);
    let n = rows.len();
    let n_c = (1usize << (lfsr.sf - 1)) - 1;
    let kept_shifts: Vec<usize> = (0..n).step_by(2).take(n_c).collect();
    let zero = PhaseState::zero(&cfg);
    let mut codewords = Vec::with_capacity(n_c);
    let mut bipolar = Vec::with_capacity(n_c);
    let mut end_phases = Vec::with_capacity(n_c);
    for &s in &kept_shifts {
        let chips: Vec<i32> = rows[s].chips.iter().map(|&c| c as i32).collect();
        let frame = modulate(&chips, &cfg, &zero)?;
        end_phases.push((PI * cfg.h() * chips.iter().sum::<i32>() as f64).rem_euclid(2.0 * PI));
        codewords.push(frame.samples);
        bipolar.push(rows[s].clone());
    }
    let energy = (n * cfg.oversample) as f64;
    let theorem1_config = cfg.h_num == 1 && cfg.h_den == 2 && cfg.memory == 1 && cfg.order == 2;
    Ok(CpmSsCodebook {
        sf: lfsr.sf,
        cfg,
        lfsr: lfsr.clone(),
        kept_shifts,
        codewords,
        bipolar,
        end_phases,
        energy,
        theorem1_config,
    })
}

/// CPM-modulate every cyclic shift (the unpruned complex codebook Y).
pub fn modulate_all_shifts(cfg: &CpmConfig, lfsr: &LfsrSpec) -> Result<Vec<Vec<Cplx>>> {
    cfg.validate()?;
    let base = generate_msequence(lfsr)?;
    let zero = PhaseState::zero(cfg);
    shift_matrix(&base)
        .iter()
        .map(|row| {
            let chips: Vec<i32> = row.chips.iter().map(|&c| c as i32).collect();
            modulate(&chips, cfg, &zero).map(|f| f.samples)
        })
        .collect()
}

/// Normalized cross-correlation ρ = ⟨a, b⟩ / (‖a‖·‖b‖) with ⟨a, b⟩ = aᴴb.
pub fn cross_correlation(a: &[Cplx], b: &[Cplx]) -> Result<Cplx> {
    if a.len() != b.len() {
        return Err(Error::input(format!(
            "cross-correlation length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let dot: Cplx = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::input("cross-correlation of a zero-norm frame"));
    }
    Ok(dot / (na * nb))
}

/// Worst-case correlation statistics for one cyclic shift distance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistanceStats {
    /// Cyclic shift distance d (1 ..= N/2).
    pub d: usize,
    /// ρ of the worst pair (largest |ρ|) at this distance.
    pub worst_rho_re: f64,
    pub worst_rho_im: f64,
    pub max_abs: f64,
    pub max_abs_re: f64,
    pub min_abs_im: f64,
    pub max_abs_im: f64,
}

impl DistanceStats {
    fn empty(d: usize) -> Self {
        DistanceStats {
            d,
            worst_rho_re: 0.0,
            worst_rho_im: 0.0,
            max_abs: 0.0,
            max_abs_re: 0.0,
            min_abs_im: f64::MAX,
            max_abs_im: 0.0,
        }
    }

    fn absorb(&mut self, rho: Cplx) {
        let mag = rho.norm();
        if mag > self.max_abs {
            self.max_abs = mag;
            self.worst_rho_re = rho.re;
            self.worst_rho_im = rho.im;
        }
        self.max_abs_re = self.max_abs_re.max(rho.re.abs());
        self.min_abs_im = self.min_abs_im.min(rho.im.abs());
        self.max_abs_im = self.max_abs_im.max(rho.im.abs());
    }

    fn merge(mut self, other: &DistanceStats) -> Self {
        if other.max_abs > self.max_abs {
            self.max_abs = other.max_abs;
            self.worst_rho_re = other.worst_rho_re;
            self.worst_rho_im = other.worst_rho_im;
        }
        self.max_abs_re = self.max_abs_re.max(other.max_abs_re);
        self.min_abs_im = self.min_abs_im.min(other.min_abs_im);
        self.max_abs_im = self.max_abs_im.max(other.max_abs_im);
        self
    }
}

/// Cross-correlation scan results for one spreading factor.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCorrReport {
    pub sf: u32,
    /// Per-cyclic-distance worst-case stats over all N(N−1)/2 shift pairs.
    pub pairs: Vec<DistanceStats>,
    /// Maximum |ρ| among the pruned (kept) codebook's off-diagonal pairs.
    pub max_abs_offdiag: f64,
    /// Maximum |ρ| over all non-adjacent shift pairs (d ∉ {1, N−1}).
    pub max_abs_nonadjacent: f64,
    /// Maximum |Re ρ| over all pairs.
    pub max_abs_re: f64,
    /// Measured |Im ρ| range over adjacent pairs.
    pub adjacent_abs_im: (f64, f64),
    /// The closed-form adjacent-pair Im magnitude (N+1)/(2NP)·cot(π/2P).
    pub predicted_adjacent_im: f64,
    /// Human-readable bound violations (empty = verified).
    pub violations: Vec<String>,
}

/// Tolerances for [`verify_theorem1`], pinned to the asymptotic statement
/// with finite-N slack.
#[derive(Debug, Clone, Copy)]
pub struct TheoremTolerances {
    /// |ρ| bound for non-adjacent pairs, in units of 1/N.
    pub nonadjacent_abs_over_n: f64,
    /// |Re ρ| bound for all pairs, in units of 1/N.
    pub re_abs_over_n: f64,
    /// Absolute band around 1/π for adjacent-pair |Im ρ|.
    pub adjacent_im_band: f64,
    /// Relative tolerance for the finite-N closed form.
    pub closed_form_rel: f64,
}

impl Default for TheoremTolerances {
    fn default() -> Self {
        TheoremTolerances {
            nonadjacent_abs_over_n: 3.0,
            re_abs_over_n: 3.0,
            adjacent_im_band: 0.05,
            closed_form_rel: 0.01,
        }
    }
}

/// Closed-form adjacent-shift Im ρ magnitude for the REC h=1/2 configuration.
pub fn adjacent_im_closed_form(n: usize, p: usize) -> f64 {
    (n as f64 + 1.0) / (2.0 * n as f64 * p as f64) / (PI / (2.0 * p as f64)).tan()
}

/// Scan every shift pair of the unpruned codebook for one SF and check the
/// quasi-orthogonality bounds. Violations are reported, not thrown.
pub fn verify_theorem1_single(
    sf: u32,
    cfg: &CpmConfig,
    lfsr: &LfsrSpec,
    tol: &TheoremTolerances,
    exec: Execution,
) -> Result<CrossCorrReport> {
    if lfsr.sf != sf {
        return Err(Error::input("LFSR spec does not match the requested SF"));
    }
    let rows = modulate_all_shifts(cfg, lfsr)?;
    let n = rows.len();
    let np = (n * cfg.oversample) as f64;
    let half = n / 2;
    let empty: Vec<DistanceStats> = (1..=half).map(DistanceStats::empty).collect();
    let stats = map_reduce(
        exec,
        n,
        empty.clone(),
        |i| {
            let mut local = empty.clone();
            for l in (i + 1)..n {
                let dot: Cplx = rows[i].iter().zip(&rows[l]).map(|(x, y)| x.conj() * y).sum();
                let rho = dot / np;
                let d = (l - i).min(n - (l - i));
                local[d - 1].absorb(rho);
            }
            local
        },
        |a, b| {
            a.into_iter()
                .zip(&b)
                .map(|(x, y)| x.merge(y))
                .collect()
        },
    );

    let n_c = (1usize << (sf - 1)) - 1;
    let kept: Vec<usize> = (0..n).step_by(2).take(n_c).collect();
    let kept_max = max_abs_offdiag_of(&rows, &kept, np, exec);

    let predicted = adjacent_im_closed_form(n, cfg.oversample);
    let adjacent = stats[0];
    let max_abs_nonadjacent = stats[1..].iter().map(|s| s.max_abs).fold(0.0, f64::max);
    let max_abs_re = stats.iter().map(|s| s.max_abs_re).fold(0.0, f64::max);

    let mut violations = Vec::new();
    let n_f = n as f64;
    if max_abs_nonadjacent > tol.nonadjacent_abs_over_n / n_f {
        let worst = stats[1..]
            .iter()
            .max_by(|a, b| a.max_abs.partial_cmp(&b.max_abs).unwrap())
            .unwrap();
        violations.push(format!(
            "SF={sf}: non-adjacent |rho|={:.6} at d={} exceeds {}/N",
            worst.max_abs, worst.d, tol.nonadjacent_abs_over_n
        ));
    }
    if max_abs_re > tol.re_abs_over_n / n_f {
        violations.push(format!(
            "SF={sf}: |Re rho|={max_abs_re:.6} exceeds {}/N",
            tol.re_abs_over_n
        ));
    }
    for im in [adjacent.min_abs_im, adjacent.max_abs_im] {
        if (im - 1.0 / PI).abs() > tol.adjacent_im_band {
            violations.push(format!(
                "SF={sf}: adjacent |Im rho|={im:.6} outside 1/pi ± {}",
                tol.adjacent_im_band
            ));
        }
        if (im - predicted).abs() > tol.closed_form_rel * predicted {
            violations.push(format!(
                "SF={sf}: adjacent |Im rho|={im:.6} vs closed form {predicted:.6} beyond {}%",
                100.0 * tol.closed_form_rel
            ));
        }
    }

    Ok(CrossCorrReport {
        sf,
        pairs: stats,
        max_abs_offdiag: kept_max,
        max_abs_nonadjacent,
        max_abs_re,
        adjacent_abs_im: (adjacent.min_abs_im, adjacent.max_abs_im),
        predicted_adjacent_im: predicted,
        violations,
    })
}

fn max_abs_offdiag_of(
    rows: &[Vec<Cplx>],
    subset: &[usize],
    np: f64,
    exec: Execution,
) -> f64 {
    map_reduce(
        exec,
        subset.len(),
        0.0f64,
        |i| {
            let mut m = 0.0f64;
            for j in (i + 1)..subset.len() {
                let dot: Cplx = rows[subset[i]]
                    .iter()
                    .zip(&rows[subset[j]])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                m = m.max(dot.norm() / np);
            }
            m
        },
        f64::max,
    )
}

/// Run [`verify_theorem1_single`] over a range of spreading factors with
/// default taps.
pub fn verify_theorem1(
    sf_range: &[u32],
    cfg: &CpmConfig,
    tol: &TheoremTolerances,
    exec: Execution,
) -> Result<Vec<CrossCorrReport>> {
    sf_range
        .iter()
        .map(|&sf| verify_theorem1_single(sf, cfg, &LfsrSpec::with_default_taps(sf)?, tol, exec))
        .collect()
}

/// Pinned text artifact so experiments can reproduce exact codebooks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookArtifact {
    pub sf: u32,
    pub lfsr: LfsrSpec,
    pub cfg: CpmConfig,
    pub kept_shifts: Vec<usize>,
}

impl CodebookArtifact {
    pub fn from_codebook(cb: &CpmSsCodebook) -> Self {
        CodebookArtifact {
            sf: cb.sf,
            lfsr: cb.lfsr.clone(),
            cfg: cb.cfg,
            kept_shifts: cb.kept_shifts.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rebuild the codebook and check it matches the pinned shifts.
    pub fn instantiate(&self) -> Result<CpmSsCodebook> {
        let cb = build_codebook(self.cfg, &self.lfsr)?;
        if cb.kept_shifts != self.kept_shifts {
            return Err(Error::config(
                "pinned kept_shifts do not match the pruning rule output",
            ));
        }
        Ok(cb)
    }
}
