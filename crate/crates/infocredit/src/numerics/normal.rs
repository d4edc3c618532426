//! Standard normal distribution functions.

use std::f64::consts::{PI, SQRT_2};

/// Standard normal cumulative distribution function, accurate to better
/// than 1e-14 absolute over the full double range.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Inverse of the standard normal CDF (Acklam's rational approximation
/// polished by one Halley step against `normal_cdf`).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probability must lie in (0, 1)");

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Halley refinement step.
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, Tolerances};

    #[test]
    fn symmetry_at_zero() {
        assert_eq!(normal_cdf(0.0), 0.5);
    }

    #[test]
    fn far_tail_saturates() {
        assert_eq!(normal_cdf(40.0), 1.0);
        assert_eq!(normal_cdf(-40.0), 0.0);
    }

    #[test]
    fn reflection_identity() {
        for &x in &[0.1, 0.7, 1.3, 2.9, 5.5] {
            assert!((normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn value_at_one_against_quadrature_oracle() {
        // Oracle: high-resolution quadrature of the Gaussian density.
        let tight = Tolerances {
            quad_rel_tol: 1e-13,
            ..Tolerances::default()
        };
        let oracle = 0.5 + integrate(normal_pdf, 0.0, 1.0, &tight).unwrap();
        let got = normal_cdf(1.0);
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 0.841344746068543).abs() < 1e-12);
    }

    #[test]
    fn monotone_on_grid() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=2000 {
            let x = -10.0 + i as f64 * 0.01;
            let v = normal_cdf(x);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn inverse_round_trips() {
        for i in 1..200 {
            let p = i as f64 / 200.0;
            let x = inverse_normal_cdf(p);
            assert!((normal_cdf(x) - p).abs() < 1e-14, "p = {p}");
        }
        // Deep tails.
        for &p in &[1e-12, 1e-9, 1e-6, 1.0 - 1e-6, 1.0 - 1e-9] {
            let x = inverse_normal_cdf(p);
            assert!((normal_cdf(x) - p).abs() < 1e-15_f64.max(1e-4 * p.min(1.0 - p)));
        }
    }
}
