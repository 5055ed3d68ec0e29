//! Peak-to-average power ratio statistics.
//!
//! Per-frame PAPR is `max|s|² / E|s|²` where the expectation is the average
//! power over the whole measured ensemble, matching the statistical PAPR
//! definition: a frame's peak is compared against the transmit power level,
//! not against its own local mean.

use crate::cpm::BasebandFrame;
use crate::Cplx;

/// CCDF grid resolution in dB.
const GRID_STEP_DB: f64 = 0.05;

/// Result of a PAPR campaign.
#[derive(Debug, Clone)]
pub struct PaprCcdf {
    /// Threshold grid in dB.
    pub thresholds: Vec<f64>,
    /// Pr(PAPR > threshold) for each grid point.
    pub ccdf: Vec<f64>,
    /// Threshold where the CCDF crosses 1e−4 (linear interpolation on the grid).
    pub papr0_at_1e4: f64,
    /// Number of frames measured.
    pub frames: usize,
    /// Set when there are too few frames for a stable 1e−4 quantile.
    pub low_sample_warning: bool,
}

/// Streaming collector; mergeable, so parallel batches can be combined.
#[derive(Debug, Clone, Default)]
pub struct PaprAccumulator {
    peaks: Vec<f64>,
    power_sum: f64,
    sample_count: u64,
}

impl PaprAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record one frame's samples.
    pub fn push_samples(&mut self, samples: &[Cplx]) {
        if samples.is_empty() {
            return;
        }
        let mut peak = 0.0f64;
        let mut sum = 0.0f64;
        for s in samples {
            let p = s.norm_sqr();
            peak = peak.max(p);
            sum += p;
        }
        self.peaks.push(peak);
        self.power_sum += sum;
        self.sample_count += samples.len() as u64;
    }

    pub fn push_frame(&mut self, frame: &BasebandFrame) {
        self.push_samples(&frame.samples);
    }

    pub fn merge(&mut self, other: PaprAccumulator) {
        self.peaks.extend(other.peaks);
        self.power_sum += other.power_sum;
        self.sample_count += other.sample_count;
    }

    pub fn frames(&self) -> usize {
        self.peaks.len()
    }

    pub fn finalize(self) -> PaprCcdf {
        finalize(self.peaks, self.power_sum, self.sample_count, 1e-4)
    }
}

fn finalize(peaks: Vec<f64>, power_sum: f64, sample_count: u64, target: f64) -> PaprCcdf {
    let n = peaks.len();
    if n == 0 || power_sum <= 0.0 {
        return PaprCcdf {
            thresholds: Vec::new(),
            ccdf: Vec::new(),
            papr0_at_1e4: f64::NAN,
            frames: 0,
            low_sample_warning: true,
        };
    }
    let mean_power = power_sum / sample_count as f64;
    let mut db: Vec<f64> = peaks
        .into_iter()
        .map(|p| 10.0 * (p / mean_power).log10())
        .collect();
    db.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (lo, hi) = (db[0], db[n - 1]);
    let low_sample_warning = (n as f64) * target < 10.0;

    if hi - lo < 1e-9 {
        // degenerate (constant-envelope) distribution: a step CCDF
        return PaprCcdf {
            thresholds: vec![hi],
            ccdf: vec![0.0],
            papr0_at_1e4: hi,
            frames: n,
            low_sample_warning,
        };
    }

    let start = (lo / GRID_STEP_DB).floor() * GRID_STEP_DB - GRID_STEP_DB;
    let steps = (((hi - start) / GRID_STEP_DB).ceil() as usize) + 1;
    let thresholds: Vec<f64> = (0..=steps).map(|i| start + i as f64 * GRID_STEP_DB).collect();
    // ccdf(t) = #(papr > t)/n via binary search on the sorted values
    let ccdf: Vec<f64> = thresholds
        .iter()
        .map(|&t| {
            let idx = db.partition_point(|&v| v <= t);
            (n - idx) as f64 / n as f64
        })
        .collect();

    let mut papr0 = hi;
    for i in 1..thresholds.len() {
        if ccdf[i] < target {
            let (c0, c1) = (ccdf[i - 1], ccdf[i]);
            papr0 = if c0 > c1 {
                thresholds[i - 1] + (c0 - target) / (c0 - c1) * GRID_STEP_DB
            } else {
                thresholds[i - 1]
            };
            break;
        }
    }
    PaprCcdf {
        thresholds,
        ccdf,
        papr0_at_1e4: papr0,
        frames: n,
        low_sample_warning,
    }
}

/// Measure the PAPR CCDF of an ensemble of frames.
pub fn measure_papr<'a>(frames: impl IntoIterator<Item = &'a BasebandFrame>) -> PaprCcdf {
    let mut acc = PaprAccumulator::new();
    for f in frames {
        acc.push_frame(f);
    }
    acc.finalize()
}

/// PAPR in dB of one sample window against an externally supplied mean power.
pub fn papr_db_global_mean(samples: &[Cplx], mean_power: f64) -> f64 {
    let peak = samples.iter().map(|s| s.norm_sqr()).fold(0.0f64, f64::max);
    10.0 * (peak / mean_power).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame_with(samples: Vec<Cplx>) -> BasebandFrame {
        BasebandFrame {
            samples,
            samples_per_chip: 1,
            chips_per_symbol: 1,
        }
    }

    #[test]
    fn constant_envelope_is_zero_db_step() {
        let frames: Vec<BasebandFrame> = (0..100)
            .map(|i| {
                frame_with(
                    (0..64)
                        .map(|k| Cplx::from_polar(1.0, (i * 64 + k) as f64 * 0.1))
                        .collect(),
                )
            })
            .collect();
        let out = measure_papr(frames.iter());
        assert!(out.papr0_at_1e4.abs() < 1e-9);
        assert!(out.low_sample_warning); // only 100 frames for a 1e-4 quantile
    }

    #[test]
    fn ccdf_monotone_and_normalized() {
        let mut acc = PaprAccumulator::new();
        let mut x = 1u64;
        for _ in 0..5000 {
            // cheap LCG so the test has a spread of peak values
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = 1.0 + (x >> 40) as f64 / (1u64 << 24) as f64;
            acc.push_samples(&[Cplx::new(a, 0.0), Cplx::new(1.0, 0.0)]);
        }
        let out = acc.finalize();
        for w in out.ccdf.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(out.ccdf.iter().all(|&c| (0.0..=1.0).contains(&c)));
    }

    #[test]
    fn papr0_matches_known_quantile() {
        // 10_000 frames, one in 10_000 has peak power 4 (6.02 dB), mean 1
        let mut acc = PaprAccumulator::new();
        for i in 0..10_000 {
            let peak = if i == 0 { 2.0 } else { 1.0 };
            acc.push_samples(&[Cplx::new(peak, 0.0), Cplx::new(0.0, 0.0)]);
        }
        let out = acc.finalize();
        // mean power = (4 + 9999)/20000 ≈ 0.5; the single outlier defines the
        // 1e-4 tail at 10log10(4/0.50015)
        let expect = 10.0 * (4.0f64 / 0.50015).log10();
        assert!(
            (out.papr0_at_1e4 - expect).abs() < 0.1,
            "papr0 {} vs {expect}",
            out.papr0_at_1e4
        );
        assert!(!out.low_sample_warning || out.frames < 100_000);
    }

    #[test]
    fn merge_equals_single_pass() {
        let frames: Vec<BasebandFrame> = (0..50)
            .map(|i| frame_with(vec![Cplx::new(1.0 + i as f64 * 0.01, 0.0); 8]))
            .collect();
        let whole = measure_papr(frames.iter());
        let mut a = PaprAccumulator::new();
        let mut b = PaprAccumulator::new();
        for f in &frames[..20] {
            a.push_frame(f);
        }
        for f in &frames[20..] {
            b.push_frame(f);
        }
        a.merge(b);
        let merged = a.finalize();
        assert_eq!(whole.thresholds, merged.thresholds);
        assert_eq!(whole.ccdf, merged.ccdf);
    }
}
