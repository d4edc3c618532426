//! Bracketed root-finding: inverse-quadratic interpolation with a bisection
//! fallback (Brent's method).

use super::{NumericsError, Tolerances};

const MAX_ITER: u32 = 200;

/// Find a root of `f` in [lo, hi]. Requires a sign change over the bracket.
/// The returned value always lies within the initial bracket.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    tol.validate()?;
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange {
            lo,
            hi,
            flo: fa,
            fhi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.root_abs_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation (secant when a == c).
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(NumericsError::RootNonConvergence {
        best: b,
        width: (c - b).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::normal_cdf;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_root() {
        let r = find_root(|y| y, -1.0, 1.0, &tols()).unwrap();
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root(|y| y * y - 2.0, 0.0, 2.0, &tols()).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn inverse_normal_quantile() {
        // Oracle: invert the normal CDF by fine trapezoid tabulation of the
        // density, independent of normal_cdf.
        let n = 4_000_000usize;
        let hi = 4.0f64;
        let h = hi / n as f64;
        let dens = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = 0.5f64; // CDF at 0
        let mut oracle = f64::NAN;
        for i in 0..n {
            let x0 = i as f64 * h;
            let x1 = x0 + h;
            let step = 0.5 * (dens(x0) + dens(x1)) * h;
            if acc + step >= 0.975 {
                // Linear interpolation within the step.
                oracle = x0 + h * (0.975 - acc) / step;
                break;
            }
            acc += step;
        }
        assert!(oracle.is_finite());

        let r = find_root(|y| normal_cdf(y) - 0.975, 0.0, 4.0, &tols()).unwrap();
        assert!((r - 1.959964).abs() < 1e-6);
        assert!((r - oracle).abs() < 1e-6);
    }

    #[test]
    fn no_sign_change_is_distinct_error() {
        let e = find_root(|y| y * y + 1.0, -1.0, 1.0, &tols()).unwrap_err();
        assert!(matches!(e, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn root_stays_in_bracket() {
        let (lo, hi) = (0.5, 3.0);
        let r = find_root(|y| (y - 2.0).powi(3), lo, hi, &tols()).unwrap();
        assert!(r >= lo && r <= hi);
        assert!((r - 2.0).abs() < 1e-4);
    }
}
