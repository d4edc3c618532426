//! Overflow-safe evaluation of sums and ratios of exponentials.

use super::NumericsError;

/// log(sum_i exp(terms[i])) computed after subtracting the maximum term.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| (t - m).exp()).sum();
    m + s.ln()
}

/// Evaluates `sum(exp(num)) / sum(exp(den))` after shifting both sums by the
/// global maximum exponent, so the result never overflows for exponents
/// within roughly +/-1e6.
pub fn shifted_exp_ratio(
    log_numerator_terms: &[f64],
    log_denominator_terms: &[f64],
) -> Result<f64, NumericsError> {
    if log_numerator_terms.is_empty() || log_denominator_terms.is_empty() {
        return Err(NumericsError::EmptyTerms);
    }
    // One shared shift keeps the exponent subtraction exact, avoiding the
    // cancellation that exp(logsumexp(num) - logsumexp(den)) would incur.
    let m = log_numerator_terms
        .iter()
        .chain(log_denominator_terms)
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(NumericsError::DegenerateDenominator);
    }
    let sd: f64 = log_denominator_terms.iter().map(|&t| (t - m).exp()).sum();
    if sd <= 0.0 {
        return Err(NumericsError::DegenerateDenominator);
    }
    let sn: f64 = log_numerator_terms.iter().map(|&t| (t - m).exp()).sum();
    Ok(sn / sd)
}
