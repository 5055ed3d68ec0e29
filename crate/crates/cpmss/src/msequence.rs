//! Maximal-length sequences: LFSR generation, cyclic shifts, bipolar mapping.
//!
//! An m-sequence of degree `SF` has period `N = 2^SF - 1`, is balanced (one
//! more 1-bit than 0-bits per period), and has two-valued circular
//! autocorrelation (`N` at shift 0, `-1` elsewhere). These are the raw
//! spreading codes behind the CPM-SS codebooks.
//!
//! Bit-to-polarity convention, used everywhere in this crate:
//! **bit 0 → +1, bit 1 → −1**, so the chip sum over one period is −1.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default primitive polynomials, degree 2..=12, as tap exponent sets.
/// `taps = [6, 1]` means x⁶ + x + 1 (the constant term is implicit).
pub const DEFAULT_TAPS: [&[u32]; 11] = [
    &[2, 1],
    &[3, 1],
    &[4, 1],
    &[5, 2],
    &[6, 1],
    &[7, 1],
    &[8, 4, 3, 2],
    &[9, 4],
    &[10, 3],
    &[11, 2],
    &[12, 6, 4, 1],
];

/// LFSR specification: degree, feedback taps, initial register state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfsrSpec {
    /// Spreading factor = LFSR degree; sequence period is 2^sf − 1.
    pub sf: u32,
    /// Tap exponents of the primitive feedback polynomial, including `sf`.
    pub taps: Vec<u32>,
    /// Nonzero initial register state (bit i of `seed` = cell i).
    pub seed: u32,
}

impl LfsrSpec {
    /// Spec with the built-in primitive polynomial for `sf` and an all-ones seed.
    pub fn with_default_taps(sf: u32) -> Result<Self> {
        if !(2..=12).contains(&sf) {
            return Err(Error::config(format!(
                "no default taps for SF={sf}; supported range is 2..=12"
            )));
        }
        Ok(LfsrSpec {
            sf,
            taps: DEFAULT_TAPS[(sf - 2) as usize].to_vec(),
            seed: (1u32 << sf) - 1,
        })
    }

    /// The reciprocal polynomial's taps (also primitive); handy for
    /// tap-invariance checks.
    pub fn reciprocal(&self) -> Self {
        let mut taps: Vec<u32> = self
            .taps
            .iter()
            .filter(|&&t| t != self.sf)
            .map(|&t| self.sf - t)
            .collect();
        taps.push(self.sf);
        taps.sort_unstable_by(|a, b| b.cmp(a));
        LfsrSpec {
            sf: self.sf,
            taps,
            seed: self.seed,
        }
    }

    /// Sequence period `N = 2^sf − 1`.
    pub fn period(&self) -> usize {
        (1usize << self.sf) - 1
    }

    fn validate(&self) -> Result<()> {
        if self.sf < 2 {
            return Err(Error::config("SF must be at least 2"));
        }
        if self.sf > 24 {
            return Err(Error::config("SF above 24 is not supported"));
        }
        if self.seed == 0 || self.seed >= (1u32 << self.sf) {
            return Err(Error::config(format!(
                "LFSR seed must be nonzero and below 2^{}",
                self.sf
            )));
        }
        if !self.taps.contains(&self.sf) {
            return Err(Error::config(format!(
                "tap set must include the degree {}",
                self.sf
            )));
        }
        if self.taps.iter().any(|&t| t == 0 || t > self.sf) {
            return Err(Error::config("tap exponents must lie in 1..=SF"));
        }
        Ok(())
    }
}

/// One period of a bipolar (±1) m-sequence plus its cyclic-shift index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipolarSequence {
    /// Chips in {−1, +1}; length is the period N.
    pub chips: Vec<i8>,
    /// Cyclic shift applied to the base sequence, modulo N.
    pub shift: usize,
}

impl BipolarSequence {
    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    /// Unnormalized circular autocorrelation at lag `lag`.
    pub fn circular_autocorrelation(&self, lag: usize) -> i64 {
        let n = self.len();
        (0..n)
            .map(|i| self.chips[i] as i64 * self.chips[(i + lag) % n] as i64)
            .sum()
    }
}

/// Run the LFSR for one full period and map bits to chips (0 → +1, 1 → −1).
///
/// The register is checked to return to the seed state after exactly
/// `2^SF − 1` steps and not before, which rejects non-primitive tap sets.
pub fn generate_msequence(spec: &LfsrSpec) -> Result<BipolarSequence> {
    spec.validate()?;
    let n = spec.period();
    let sf = spec.sf;
    // Fibonacci form: cell 0 is the oldest bit and the output; the new bit is
    // the XOR of cell 0 (constant term) and cells at the non-degree taps.
    let mid: Vec<u32> = spec.taps.iter().copied().filter(|&t| t != sf).collect();
    let mut state = spec.seed;
    let mut chips = Vec::with_capacity(n);
    for step in 0..n {
        let out = state & 1;
        chips.push(if out == 0 { 1i8 } else { -1i8 });
        let mut newbit = state & 1;
        for &t in &mid {
            newbit ^= (state >> t) & 1;
        }
        state = (state >> 1) | (newbit << (sf - 1));
        if state == spec.seed && step + 1 != n {
            return Err(Error::config(format!(
                "taps {:?} are not primitive for SF={} (period {} < {})",
                spec.taps,
                sf,
                step + 1,
                n
            )));
        }
    }
    if state != spec.seed {
        return Err(Error::config(format!(
            "taps {:?} are not primitive for SF={} (period exceeds {})",
            spec.taps, sf, n
        )));
    }
    Ok(BipolarSequence { chips, shift: 0 })
}

/// Cyclic shift by `d` (d > 0 right shift, d < 0 left shift):
/// output element `i` equals input element `(i − d) mod N`.
pub fn cyclic_shift(seq: &BipolarSequence, d: i64) -> BipolarSequence {
    let n = seq.len() as i64;
    let d_mod = d.rem_euclid(n) as usize;
    let nn = seq.len();
    let chips = (0..nn)
        .map(|i| seq.chips[(i + nn - d_mod) % nn])
        .collect();
    BipolarSequence {
        chips,
        shift: (seq.shift + d_mod) % nn,
    }
}

/// The N×N shift matrix: row `k` is the base sequence shifted by `k`.
pub fn shift_matrix(seq: &BipolarSequence) -> Vec<BipolarSequence> {
    (0..seq.len() as i64).map(|d| cyclic_shift(seq, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sf6_has_length_63() {
        let seq = generate_msequence(&LfsrSpec::with_default_taps(6).unwrap()).unwrap();
        assert_eq!(seq.len(), 63);
    }

    #[test]
    fn smallest_msequence_is_balanced() {
        let spec = LfsrSpec {
            sf: 2,
            taps: vec![2, 1],
            seed: 0b01,
        };
        let seq = generate_msequence(&spec).unwrap();
        assert_eq!(seq.len(), 3);
        let plus = seq.chips.iter().filter(|&&c| c == 1).count();
        let minus = seq.chips.iter().filter(|&&c| c == -1).count();
        assert_eq!((plus, minus), (1, 2)); // one more 1-bit than 0-bits
    }

    #[test]
    fn balance_convention_chip_sum_is_minus_one() {
        for sf in 2..=12 {
            let seq = generate_msequence(&LfsrSpec::with_default_taps(sf).unwrap()).unwrap();
            let sum: i64 = seq.chips.iter().map(|&c| c as i64).sum();
            assert_eq!(sum, -1, "SF={sf}");
        }
    }

    #[test]
    fn autocorrelation_two_valued() {
        // brute-force circular correlation over all nonzero shifts
        for sf in [5u32, 6, 8] {
            let seq = generate_msequence(&LfsrSpec::with_default_taps(sf).unwrap()).unwrap();
            let n = seq.len();
            assert_eq!(seq.circular_autocorrelation(0), n as i64);
            for lag in 1..n {
                assert_eq!(seq.circular_autocorrelation(lag), -1, "SF={sf} lag={lag}");
            }
        }
    }

    #[test]
    fn period_is_exact_for_all_default_taps() {
        for sf in 2..=12 {
            let spec = LfsrSpec::with_default_taps(sf).unwrap();
            assert!(generate_msequence(&spec).is_ok(), "SF={sf}");
            let recip = spec.reciprocal();
            assert!(generate_msequence(&recip).is_ok(), "SF={sf} reciprocal");
        }
    }

    #[test]
    fn non_primitive_taps_rejected() {
        // x^4 + x^2 + 1 = (x^2+x+1)^2 is not primitive
        let spec = LfsrSpec {
            sf: 4,
            taps: vec![4, 2],
            seed: 0b1111,
        };
        assert!(matches!(generate_msequence(&spec), Err(Error::Config(_))));
    }

    #[test]
    fn zero_seed_rejected() {
        let spec = LfsrSpec {
            sf: 5,
            taps: vec![5, 2],
            seed: 0,
        };
        assert!(matches!(generate_msequence(&spec), Err(Error::Config(_))));
    }

    #[test]
    fn shift_identities() {
        let seq = generate_msequence(&LfsrSpec::with_default_taps(5).unwrap()).unwrap();
        let n = seq.len() as i64;
        assert_eq!(cyclic_shift(&seq, 0), seq);
        assert_eq!(cyclic_shift(&seq, n).chips, seq.chips);
        let back = cyclic_shift(&cyclic_shift(&seq, 1), -1);
        assert_eq!(back.chips, seq.chips);
    }

    #[test]
    fn shift_moves_elements() {
        let seq = generate_msequence(&LfsrSpec::with_default_taps(4).unwrap()).unwrap();
        let s1 = cyclic_shift(&seq, 1);
        let n = seq.len();
        for i in 0..n {
            assert_eq!(s1.chips[i], seq.chips[(i + n - 1) % n]);
        }
    }

    #[test]
    fn shift_matrix_rows_balanced_and_quasi_orthogonal() {
        let seq = generate_msequence(&LfsrSpec::with_default_taps(6).unwrap()).unwrap();
        let rows = shift_matrix(&seq);
        assert_eq!(rows.len(), 63);
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.shift, k);
            let sum: i64 = row.chips.iter().map(|&c| c as i64).sum();
            assert_eq!(sum, -1);
        }
        // distinct rows: unnormalized dot product = -1
        for a in 0..rows.len() {
            for b in (a + 1)..rows.len() {
                let dot: i64 = rows[a]
                    .chips
                    .iter()
                    .zip(&rows[b].chips)
                    .map(|(&x, &y)| x as i64 * y as i64)
                    .sum();
                assert_eq!(dot, -1, "rows {a},{b}");
            }
        }
    }

    #[test]
    fn sf2_shift_matrix_is_all_rotations() {
        let spec = LfsrSpec {
            sf: 2,
            taps: vec![2, 1],
            seed: 0b01,
        };
        let seq = generate_msequence(&spec).unwrap();
        let rows = shift_matrix(&seq);
        assert_eq!(rows.len(), 3);
        for d in 0..3usize {
            for i in 0..3usize {
                assert_eq!(rows[d].chips[i], seq.chips[(i + 3 - d) % 3]);
            }
        }
    }
}
