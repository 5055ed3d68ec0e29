//! Channel impairments: AWGN, block Rayleigh fading, and the Rapp
//! solid-state power amplifier model, plus PAPR/CCDF measurement.

mod papr;

pub use papr::{measure_papr, papr_db_global_mean, PaprAccumulator, PaprCcdf};

use crate::cpm::BasebandFrame;
use crate::seeds::SeedTree;
use crate::Cplx;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Complex AWGN with per-sample variance `n0` (N_0/2 per real component).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub n0: f64,
    pub seed: u64,
}

/// Block Rayleigh fading: h ~ CN(0, variance), constant over `block_length`
/// samples (0 = one h for the whole frame).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingSpec {
    pub variance: f64,
    pub block_length: usize,
}

/// Rapp AM-AM nonlinearity with input back-off; AM-PM is identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RappPa {
    /// Small-signal gain G_0.
    pub g0: f64,
    /// Saturation amplitude S_sat.
    pub s_sat: f64,
    /// Smoothness exponent p.
    pub p: f64,
    /// Input back-off in dB; the input is scaled by 10^(−IBO/20).
    pub ibo_db: f64,
}

impl RappPa {
    /// The Table-II amplifier: G_0 = S_sat = 1, p = 2.
    pub fn nominal(ibo_db: f64) -> Self {
        RappPa {
            g0: 1.0,
            s_sat: 1.0,
            p: 2.0,
            ibo_db,
        }
    }

    /// Amplitude transfer F_a(s) = G_0·s / (1 + (G_0·s/S_sat)^{2p})^{1/2p}.
    pub fn am_am(&self, amplitude: f64) -> f64 {
        let x = self.g0 * amplitude;
        x / (1.0 + (x / self.s_sat).powf(2.0 * self.p)).powf(1.0 / (2.0 * self.p))
    }
}

fn standard_complex(rng: &mut impl Rng) -> Cplx {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Cplx::new(re, im)
}

/// Add seeded complex AWGN with total per-sample variance N_0.
pub fn add_awgn(frame: &BasebandFrame, spec: &NoiseSpec) -> BasebandFrame {
    let mut rng = SeedTree::new(spec.seed).rng();
    add_awgn_with(frame, spec.n0, &mut rng)
}

/// AWGN from a caller-provided stream (for per-trial substreams).
pub fn add_awgn_with(frame: &BasebandFrame, n0: f64, rng: &mut impl Rng) -> BasebandFrame {
    let sigma = (n0 / 2.0).sqrt();
    let samples = frame
        .samples
        .iter()
        .map(|s| s + standard_complex(rng) * sigma)
        .collect();
    BasebandFrame {
        samples,
        ..*frame
    }
}

/// Draw one block-fading coefficient h ~ CN(0, variance).
pub fn draw_fading(variance: f64, rng: &mut impl Rng) -> Cplx {
    standard_complex(rng) * (variance / 2.0).sqrt()
}

/// Scale each block by its own fading draw; returns the realized h values.
pub fn apply_fading(
    frame: &BasebandFrame,
    spec: &FadingSpec,
    rng: &mut impl Rng,
) -> (BasebandFrame, Vec<Cplx>) {
    let block = if spec.block_length == 0 {
        frame.len().max(1)
    } else {
        spec.block_length
    };
    let n_blocks = frame.len().div_ceil(block);
    let hs: Vec<Cplx> = (0..n_blocks).map(|_| draw_fading(spec.variance, rng)).collect();
    let samples = frame
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| s * hs[i / block])
        .collect();
    (
        BasebandFrame {
            samples,
            ..*frame
        },
        hs,
    )
}

/// Apply input back-off and the Rapp AM-AM curve; phases pass through.
pub fn rapp_amplify(frame: &BasebandFrame, pa: &RappPa) -> BasebandFrame {
    let backoff = 10f64.powf(-pa.ibo_db / 20.0);
    let samples = frame
        .samples
        .iter()
        .map(|s| {
            let a = s.norm() * backoff;
            if a == 0.0 {
                Cplx::new(0.0, 0.0)
            } else {
                s * (pa.am_am(a) / s.norm())
            }
        })
        .collect();
    BasebandFrame {
        samples,
        ..*frame
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_frame(n: usize) -> BasebandFrame {
        BasebandFrame {
            samples: vec![Cplx::new(1.0, 0.0); n],
            samples_per_chip: 1,
            chips_per_symbol: 1,
        }
    }

    #[test]
    fn awgn_variance_calibrated() {
        let frame = unit_frame(1_000_000);
        let n0 = 0.37;
        let out = add_awgn(&frame, &NoiseSpec { n0, seed: 1 });
        let var: f64 = out
            .samples
            .iter()
            .zip(&frame.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / frame.len() as f64;
        assert!((var - n0).abs() / n0 < 0.01, "measured {var}");
    }

    #[test]
    fn awgn_deterministic_per_seed() {
        let frame = unit_frame(100);
        let a = add_awgn(&frame, &NoiseSpec { n0: 0.1, seed: 7 });
        let b = add_awgn(&frame, &NoiseSpec { n0: 0.1, seed: 7 });
        let c = add_awgn(&frame, &NoiseSpec { n0: 0.1, seed: 8 });
        assert_eq!(a.samples, b.samples);
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn awgn_vanishes_with_n0() {
        let frame = unit_frame(64);
        let out = add_awgn(&frame, &NoiseSpec { n0: 1e-30, seed: 3 });
        for (a, b) in out.samples.iter().zip(&frame.samples) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fading_mean_square_matches_variance() {
        let mut rng = SeedTree::new(2).rng();
        let n = 100_000;
        let mean_sq: f64 =
            (0..n).map(|_| draw_fading(1.0, &mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_sq - 1.0).abs() < 0.02, "E|h|^2 = {mean_sq}");
    }

    #[test]
    fn fading_magnitude_is_rayleigh() {
        // Kolmogorov-Smirnov against the Rayleigh CDF at the 1% level
        let mut rng = SeedTree::new(3).rng();
        let n = 20_000;
        let mut mags: Vec<f64> = (0..n).map(|_| draw_fading(1.0, &mut rng).norm()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d = 0.0f64;
        for (i, &x) in mags.iter().enumerate() {
            let cdf = 1.0 - (-x * x).exp(); // sigma^2 = 1/2 per component
            let emp_hi = (i + 1) as f64 / n as f64;
            let emp_lo = i as f64 / n as f64;
            d = d.max((cdf - emp_lo).abs()).max((cdf - emp_hi).abs());
        }
        let crit = 1.63 / (n as f64).sqrt(); // alpha = 0.01
        assert!(d < crit, "KS statistic {d} vs {crit}");
    }

    #[test]
    fn whole_frame_block_uses_single_h() {
        let mut rng = SeedTree::new(4).rng();
        let frame = unit_frame(256);
        let (out, hs) = apply_fading(
            &frame,
            &FadingSpec {
                variance: 1.0,
                block_length: 0,
            },
            &mut rng,
        );
        assert_eq!(hs.len(), 1);
        for s in &out.samples {
            assert!((s - hs[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn rapp_linear_region_and_saturation() {
        let pa = RappPa::nominal(0.0);
        assert_abs_diff_eq!(pa.am_am(1e-4), 1e-4, epsilon = 1e-12);
        assert!((pa.am_am(1e6) - 1.0).abs() < 1e-6);
        // p=2, G0=1, input 1 -> 1/2^{1/4}
        assert_abs_diff_eq!(pa.am_am(1.0), 1.0 / 2f64.powf(0.25), epsilon = 1e-12);
    }

    #[test]
    fn rapp_monotone_and_bounded() {
        let pa = RappPa::nominal(0.0);
        let mut prev = 0.0;
        for i in 1..=4000 {
            let a = i as f64 * 0.005;
            let y = pa.am_am(a);
            assert!(y > prev);
            assert!(y <= pa.s_sat * (1.0 + 1e-12));
            prev = y;
        }
    }

    #[test]
    fn rapp_preserves_phase() {
        let pa = RappPa::nominal(2.55);
        let frame = BasebandFrame {
            samples: (0..100)
                .map(|i| Cplx::from_polar(0.3 + 0.02 * i as f64, 0.1 * i as f64))
                .collect(),
            samples_per_chip: 1,
            chips_per_symbol: 1,
        };
        let out = rapp_amplify(&frame, &pa);
        for (a, b) in out.samples.iter().zip(&frame.samples) {
            assert_abs_diff_eq!(a.arg(), b.arg(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rapp_ibo_scales_input() {
        let pa = RappPa::nominal(20.0);
        // deep back-off keeps the PA linear: out ≈ in * 10^(-1)
        let frame = unit_frame(4);
        let out = rapp_amplify(&frame, &pa);
        for s in &out.samples {
            assert!((s.norm() - 0.1).abs() < 1e-4);
        }
    }
}
