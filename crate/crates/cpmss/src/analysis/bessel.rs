//! Exponentially scaled modified Bessel function I₀, after the standard
//! polynomial fits (Abramowitz & Stegun 9.8.1/9.8.2, abs error < 2e-7).

/// I₀(x)·e^{−x} for x ≥ 0; stays bounded where I₀ itself overflows.
pub fn i0e(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 3.75 {
        let t = (x / 3.75) * (x / 3.75);
        let i0 = 1.0
            + t * (3.5156229
                + t * (3.0899424
                    + t * (1.2067492 + t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
        i0 * (-x).exp()
    } else {
        let t = 3.75 / x;
        let poly = 0.39894228
            + t * (0.01328592
                + t * (0.00225319
                    + t * (-0.00157565
                        + t * (0.00916281
                            + t * (-0.02057706
                                + t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
        poly / x.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Independent route: I₀(x) = (1/π) ∫₀^π e^{x cos θ} dθ by fine Simpson.
    fn i0e_quadrature(x: f64) -> f64 {
        let n = 4000;
        let h = PI / n as f64;
        let f = |theta: f64| (x * (theta.cos() - 1.0)).exp(); // e^{x cosθ}·e^{-x}
        let mut acc = f(0.0) + f(PI);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        acc * h / 3.0 / PI
    }

    #[test]
    fn matches_integral_definition() {
        for x in [0.0, 0.1, 1.0, 3.0, 3.75, 5.0, 20.0, 200.0, 5000.0] {
            let got = i0e(x);
            let want = i0e_quadrature(x);
            assert!(
                (got - want).abs() < 3e-7 * want.max(1e-12) + 1e-9,
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn scaled_form_stays_finite() {
        assert!(i0e(1e6).is_finite());
        assert!((i0e(0.0) - 1.0).abs() < 1e-12);
    }
}
