//! Adaptive Simpson quadrature for the semi-infinite BER integrals.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerances and limits for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_depth: usize,
    /// Mass allowed in the truncated tail of semi-infinite integrals; the
    /// truncation point is chosen so the discarded exponential tail is below
    /// this bound.
    pub tail_mass: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_depth: 40,
            tail_mass: 1e-12,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.abs_tol <= 0.0 || self.rel_tol <= 0.0 || self.tail_mass <= 0.0 {
            return Err(Error::config("quadrature tolerances must be positive"));
        }
        Ok(())
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> std::result::Result<f64, f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || (b - a) < 1e-14 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(err.abs() / 15.0);
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    match (l, r) {
        (Ok(x), Ok(y)) => Ok(x + y),
        (Ok(_), Err(e)) | (Err(e), Ok(_)) => Err(e),
        (Err(e1), Err(e2)) => Err(e1 + e2),
    }
}

/// Adaptive Simpson over a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if b <= a {
        return Ok(0.0);
    }
    // seed the recursion with a coarse scan so narrow features are not missed
    const SEED_PANELS: usize = 32;
    let h = (b - a) / SEED_PANELS as f64;
    let mut total = 0.0;
    let mut worst_err = 0.0f64;
    for i in 0..SEED_PANELS {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let m = 0.5 * (x0 + x1);
        let (fa, fm, fb) = (f(x0), f(m), f(x1));
        let whole = simpson(fa, fm, fb, h);
        let tol = (spec.abs_tol + spec.rel_tol * whole.abs()).max(1e-300) / SEED_PANELS as f64;
        match adapt(f, x0, x1, fa, fm, fb, whole, tol, spec.max_depth) {
            Ok(v) => total += v,
            Err(e) => worst_err += e,
        }
    }
    if worst_err > spec.abs_tol + spec.rel_tol * total.abs() {
        return Err(Error::Numerical(format!(
            "quadrature failed to converge on [{a}, {b}]: residual error {worst_err:.3e} \
             for integral {total:.6e}"
        )));
    }
    Ok(total)
}

/// ∫₀^∞ f(γ)·(1/γ̄)·e^{−γ/γ̄} dγ for f bounded by 1: truncates the tail at
/// γ̄·ln(1/tail_mass).
pub fn integrate_exponential_mixture<F: Fn(f64) -> f64>(
    f: &F,
    gamma_bar: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if gamma_bar <= 0.0 {
        return Err(Error::config("average SNR must be positive"));
    }
    let upper = gamma_bar * (1.0 / spec.tail_mass).ln();
    let g = |gamma: f64| f(gamma) * (-gamma / gamma_bar).exp() / gamma_bar;
    integrate(&g, 0.0, upper, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let spec = QuadratureSpec::default();
        let v = integrate(&|x: f64| 3.0 * x * x, 0.0, 2.0, &spec).unwrap();
        assert!((v - 8.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_bump() {
        let spec = QuadratureSpec::default();
        let v = integrate(&|x: f64| (-(x - 5.0) * (x - 5.0)).exp(), 0.0, 10.0, &spec).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn exponential_mixture_of_one_is_one() {
        let spec = QuadratureSpec::default();
        let v = integrate_exponential_mixture(&|_| 1.0, 3.7, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_mixture_known_value() {
        // E[e^{-aγ}] = 1/(1 + a·γ̄)
        let spec = QuadratureSpec::default();
        let v = integrate_exponential_mixture(&|g| (-0.5 * g).exp(), 2.0, &spec).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bad_tolerances_rejected() {
        let mut spec = QuadratureSpec::default();
        spec.abs_tol = 0.0;
        assert!(integrate(&|x| x, 0.0, 1.0, &spec).is_err());
    }
}
