//! Deterministic initial discount curve P_{0t} and derived quantities.

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Initial term structure. Forward discount factors satisfy
/// P_{tT} = P_{0T} / P_{0t} exactly by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermStructure {
    /// Flat continuously compounded rate r: P_{0t} = exp(-r t).
    Flat { flat_rate: f64 },
    /// Tabulated curve, log-linearly interpolated; the last forward rate is
    /// extrapolated beyond the final pillar.
    Table { times: Vec<f64>, discounts: Vec<f64> },
}

impl TermStructure {
    pub fn flat(rate: f64) -> Self {
        TermStructure::Flat { flat_rate: rate }
    }

    pub fn table(times: Vec<f64>, discounts: Vec<f64>) -> Result<Self, ModelError> {
        let ts = TermStructure::Table { times, discounts };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            TermStructure::Flat { flat_rate } => {
                if !flat_rate.is_finite() {
                    return Err(ModelError::InvalidCurve("flat rate must be finite".into()));
                }
            }
            TermStructure::Table { times, discounts } => {
                if times.len() != discounts.len() || times.len() < 2 {
                    return Err(ModelError::InvalidCurve(
                        "curve table needs matching times/discounts with at least 2 pillars".into(),
                    ));
                }
                if times[0] != 0.0 || discounts[0] != 1.0 {
                    return Err(ModelError::InvalidCurve(
                        "curve table must start at (t=0, P=1)".into(),
                    ));
                }
                for i in 1..times.len() {
                    if !(times[i] > times[i - 1]) {
                        return Err(ModelError::InvalidCurve("curve times must increase".into()));
                    }
                    if !(discounts[i] > 0.0 && discounts[i] <= discounts[i - 1]) {
                        return Err(ModelError::InvalidCurve(
                            "discount factors must be positive and nonincreasing".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// P_{0t}.
    pub fn discount(&self, t: f64) -> f64 {
        match self {
            TermStructure::Flat { flat_rate } => (-flat_rate * t).exp(),
            TermStructure::Table { times, discounts } => {
                let n = times.len();
                if t <= 0.0 {
                    return 1.0;
                }
                // Segment index with flat-forward extrapolation past the end.
                let i = match times.iter().position(|&ti| ti >= t) {
                    Some(0) => 1,
                    Some(i) => i,
                    None => n - 1,
                };
                let (t0, t1) = (times[i - 1], times[i]);
                let (p0, p1) = (discounts[i - 1], discounts[i]);
                let slope = (p1.ln() - p0.ln()) / (t1 - t0);
                (p0.ln() + slope * (t - t0)).exp()
            }
        }
    }

    /// P_{tT} = P_{0T} / P_{0t}.
    pub fn forward_discount(&self, t: f64, maturity: f64) -> f64 {
        self.discount(maturity) / self.discount(t)
    }

    /// Deterministic short rate r_t = -d/dt ln P_{0t}.
    pub fn short_rate(&self, t: f64) -> f64 {
        match self {
            TermStructure::Flat { flat_rate } => *flat_rate,
            TermStructure::Table { .. } => {
                let h = 1e-6 * t.abs().max(1.0);
                let lo = (t - h).max(0.0);
                -(self.discount(t + h).ln() - self.discount(lo).ln()) / (t + h - lo)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_curve_basics() {
        let c = TermStructure::flat(0.02);
        assert_eq!(c.discount(0.0), 1.0);
        assert!((c.discount(1.0) - (-0.02f64).exp()).abs() < 1e-15);
        assert!((c.forward_discount(0.5, 1.0) - (-0.01f64).exp()).abs() < 1e-15);
        assert!((c.short_rate(3.0) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn table_interpolation_and_short_rate() {
        let c = TermStructure::table(
            vec![0.0, 1.0, 2.0],
            vec![1.0, (-0.02f64).exp(), (-0.05f64).exp()],
        )
        .unwrap();
        assert!((c.discount(0.5) - (-0.01f64).exp()).abs() < 1e-12);
        // Forward rate on the second segment is 3%.
        assert!((c.short_rate(1.5) - 0.03).abs() < 1e-5);
        // Flat-forward extrapolation.
        assert!((c.discount(3.0) - (-0.08f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn increasing_discounts_rejected() {
        assert!(TermStructure::table(vec![0.0, 1.0], vec![1.0, 1.1]).is_err());
    }
}
