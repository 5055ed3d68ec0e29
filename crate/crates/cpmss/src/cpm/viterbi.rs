//! Maximum-likelihood sequence detection over the CPM phase trellis.
//!
//! States pair the accumulated-phase index `w` (phase = π·w/h_d, `w` mod
//! 2·h_d) with the L−1 most recent symbols; each state fans out over the M
//! symbols. Branch metrics are coherent correlations
//! `Re⟨branch waveform, rx segment⟩`; branch waveforms for the steady part of
//! the frame are cached once per config.

use super::{CpmConfig, PulseTable};
use crate::error::{Error, Result};
use crate::Cplx;
use std::f64::consts::PI;

/// Initial metric assignment for the first trellis step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartState {
    /// Zero accumulated phase, cold pulse window.
    Zero,
    /// Any accumulated phase (cold pulse window): handles bursts that carry a
    /// running phase offset, which for rational h is always a trellis phase.
    Free,
}

#[derive(Debug, Clone)]
struct Branch {
    next: usize,
    waveform: Vec<Cplx>,
}

/// Precomputed trellis detector for a fixed [`CpmConfig`].
pub struct ViterbiDetector {
    cfg: CpmConfig,
    table: PulseTable,
    n_phases: usize,
    n_recent: usize,
    n_states: usize,
    alphabet: Vec<i32>,
    /// `branches[state * M + sym]`, valid from step L−1 onward.
    branches: Vec<Branch>,
}

impl ViterbiDetector {
    pub fn new(cfg: CpmConfig) -> Result<Self> {
        cfg.validate()?;
        let m = cfg.order as usize;
        let l = cfg.memory;
        let n_phases = 2 * cfg.h_den as usize;
        let n_recent = m.pow(l as u32 - 1);
        let n_states = n_phases * n_recent;
        let alphabet: Vec<i32> = (0..m as i32)
            .map(|i| 2 * i - (cfg.order as i32 - 1))
            .collect();
        let table = cfg.pulse_table();
        let mut det = ViterbiDetector {
            cfg,
            table,
            n_phases,
            n_recent,
            n_states,
            alphabet,
            branches: Vec::new(),
        };
        det.branches = (0..n_states * m)
            .map(|i| det.steady_branch(i / m, i % m))
            .collect();
        Ok(det)
    }

    fn digits(&self, mut recent_code: usize) -> Vec<usize> {
        let m = self.cfg.order as usize;
        let mut out = vec![0usize; self.cfg.memory - 1];
        for d in out.iter_mut() {
            *d = recent_code % m;
            recent_code /= m;
        }
        out
    }

    fn steady_branch(&self, state: usize, sym: usize) -> Branch {
        let m = self.cfg.order as usize;
        let l = self.cfg.memory;
        let p = self.cfg.oversample;
        let w = state / self.n_recent;
        let digits = self.digits(state % self.n_recent);
        let a_new = self.alphabet[sym];
        let two_pi_h = 2.0 * PI * self.cfg.h();
        let base = PI * w as f64 / self.cfg.h_den as f64;
        let mut waveform = Vec::with_capacity(p);
        for k in 0..p {
            let mut inst = a_new as f64 * self.table.q(0, k);
            for j in 1..l {
                inst += self.alphabet[digits[j - 1]] as f64 * self.table.q(j, k);
            }
            waveform.push(Cplx::from_polar(1.0, base + two_pi_h * inst));
        }
        let exiting = if l == 1 {
            a_new
        } else {
            self.alphabet[digits[l - 2]]
        };
        let w_next = (w as i64 + self.cfg.h_num as i64 * exiting as i64)
            .rem_euclid(self.n_phases as i64) as usize;
        let recent_next = if l == 1 {
            0
        } else {
            // shift digits: new recent = (sym, digits[0..L-2])
            let code = state % self.n_recent;
            (code * m) % self.n_recent + sym
        };
        Branch {
            next: w_next * self.n_recent + recent_next,
            waveform,
        }
    }

    /// Branch for a warmup step `n < L−1`: pulse slots older than the frame
    /// start contribute nothing and the exiting symbol is absent, so the
    /// accumulated phase does not advance.
    fn warmup_branch(&self, state: usize, sym: usize, step: usize) -> Branch {
        let m = self.cfg.order as usize;
        let l = self.cfg.memory;
        let p = self.cfg.oversample;
        let w = state / self.n_recent;
        let digits = self.digits(state % self.n_recent);
        let a_new = self.alphabet[sym];
        let two_pi_h = 2.0 * PI * self.cfg.h();
        let base = PI * w as f64 / self.cfg.h_den as f64;
        let mut waveform = Vec::with_capacity(p);
        for k in 0..p {
            let mut inst = a_new as f64 * self.table.q(0, k);
            for j in 1..=step.min(l - 1) {
                inst += self.alphabet[digits[j - 1]] as f64 * self.table.q(j, k);
            }
            waveform.push(Cplx::from_polar(1.0, base + two_pi_h * inst));
        }
        let recent_next = (state % self.n_recent * m) % self.n_recent + sym;
        Branch {
            next: w * self.n_recent + recent_next,
            waveform,
        }
    }

    /// Detect the ML symbol sequence for `rx`; length must be a multiple of P.
    pub fn detect(&self, rx: &[Cplx], start: StartState) -> Result<Vec<i32>> {
        let p = self.cfg.oversample;
        if rx.len() % p != 0 {
            return Err(Error::input(format!(
                "frame length {} is not a multiple of the oversample factor {p}",
                rx.len()
            )));
        }
        let n_steps = rx.len() / p;
        if n_steps == 0 {
            return Ok(Vec::new());
        }
        let m = self.cfg.order as usize;
        const NEG: f64 = f64::NEG_INFINITY;
        let mut metric = vec![NEG; self.n_states];
        match start {
            StartState::Zero => metric[0] = 0.0,
            StartState::Free => {
                for w in 0..self.n_phases {
                    metric[w * self.n_recent] = 0.0;
                }
            }
        }
        let mut prev_state = vec![0u32; n_steps * self.n_states];
        let mut prev_sym = vec![0u8; n_steps * self.n_states];
        let mut next = vec![NEG; self.n_states];
        for n in 0..n_steps {
            let seg = &rx[n * p..(n + 1) * p];
            next.iter_mut().for_each(|v| *v = NEG);
            let warm = n < self.cfg.memory - 1;
            for state in 0..self.n_states {
                if metric[state] == NEG {
                    continue;
                }
                for sym in 0..m {
                    let owned;
                    let branch = if warm {
                        owned = self.warmup_branch(state, sym, n);
                        &owned
                    } else {
                        &self.branches[state * m + sym]
                    };
                    let corr: f64 = branch
                        .waveform
                        .iter()
                        .zip(seg)
                        .map(|(b, r)| b.re * r.re + b.im * r.im)
                        .sum();
                    let cand = metric[state] + corr;
                    if cand > next[branch.next] {
                        next[branch.next] = cand;
                        prev_state[n * self.n_states + branch.next] = state as u32;
                        prev_sym[n * self.n_states + branch.next] = sym as u8;
                    }
                }
            }
            std::mem::swap(&mut metric, &mut next);
        }
        // traceback from the best final state
        let mut state = metric
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let mut out = vec![0i32; n_steps];
        for n in (0..n_steps).rev() {
            out[n] = self.alphabet[prev_sym[n * self.n_states + state] as usize];
            state = prev_state[n * self.n_states + state] as usize;
        }
        Ok(out)
    }
}
