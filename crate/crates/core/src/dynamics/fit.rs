//! Power laws `x = c·λ^e` fitted on log-log axes.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 5 points, got {0}")]
    InsufficientPoints(usize),
    #[error("values change sign or vanish")]
    MixedSigns,
    #[error("abscissae must be positive")]
    NonPositiveLambda,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r2: f64,
}

fn logs(points: &[(f64, f64)]) -> Result<(f64, Vec<(f64, f64)>), FitError> {
    if points.len() < 5 {
        return Err(FitError::InsufficientPoints(points.len()));
    }
    if points.iter().any(|&(l, _)| !(l > 0.0)) {
        return Err(FitError::NonPositiveLambda);
    }
    let sign = points[0].1.signum();
    if points.iter().any(|&(_, v)| v == 0.0 || !v.is_finite() || v.signum() != sign) {
        return Err(FitError::MixedSigns);
    }
    Ok((sign, points.iter().map(|&(l, v)| (l.ln(), v.abs().ln())).collect()))
}

/// Least squares on `(ln λ, ln |x|)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, FitError> {
    let (sign, xy) = logs(points)?;
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(PowerLawFit {
        exponent: slope,
        coefficient: sign * intercept.exp(),
        r2,
    })
}

/// Least-squares coefficient on log axes with the exponent held fixed.
pub fn coefficient_at_exponent(points: &[(f64, f64)], exponent: f64) -> Result<f64, FitError> {
    let (sign, xy) = logs(points)?;
    let mean = xy.iter().map(|p| p.1 - exponent * p.0).sum::<f64>() / xy.len() as f64;
    Ok(sign * mean.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictor::residual::geometric_grid;

    #[test]
    fn exact_law() {
        let pts: Vec<(f64, f64)> = geometric_grid(1e-4, 1e-2, 50).into_iter().map(|l| (l, 10.0 * l)).collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.coefficient - 10.0).abs() < 1e-9);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!((coefficient_at_exponent(&pts, 1.0).unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn negative_values_keep_their_sign() {
        let pts: Vec<(f64, f64)> = geometric_grid(1e-4, 1e-2, 20)
            .into_iter()
            .map(|l| (l, -3.0 * l.sqrt()))
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-12);
        assert!((f.coefficient + 3.0).abs() < 1e-9);
    }

    #[test]
    fn failures() {
        let pts = vec![(1.0, 1.0); 4];
        assert_eq!(fit_power_law(&pts), Err(FitError::InsufficientPoints(4)));
        let pts = vec![(1.0, 1.0), (2.0, -1.0), (3.0, 1.0), (4.0, 1.0), (5.0, 1.0)];
        assert_eq!(fit_power_law(&pts), Err(FitError::MixedSigns));
        let pts = vec![(0.0, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0), (5.0, 1.0)];
        assert_eq!(fit_power_law(&pts), Err(FitError::NonPositiveLambda));
    }
}
