//! Ordinary least-squares line fits and the log transforms used for decay rates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual sum of squares.
    pub rss: f64,
    /// Coefficient of determination; 1 for an exact line, and also 1 when `y` is constant.
    pub r_squared: f64,
    pub points: usize,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!(
            "length mismatch {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let m = x.len();
    if m < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {m}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite sample".into()));
    }
    let mf = m as f64;
    let xm = x.iter().sum::<f64>() / mf;
    let ym = y.iter().sum::<f64>() / mf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - xm;
        let dy = yi - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let spread = x.iter().fold(0.0_f64, |a, &v| a.max((v - xm).abs()));
    if !(sxx > 0.0) || spread <= 1e-12 * xm.abs().max(1.0) {
        return Err(Error::Fit("degenerate abscissa range".into()));
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let rss = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let e = yi - (intercept + slope * xi);
            e * e
        })
        .sum::<f64>();
    let r_squared = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept,
        rss,
        r_squared,
        points: m,
    })
}

fn positive_logs(v: &[f64]) -> Result<Vec<f64>> {
    v.iter()
        .map(|&a| {
            if a > 0.0 && a.is_finite() {
                Ok(a.ln())
            } else {
                Err(Error::Fit(format!("log of non-positive sample {a}")))
            }
        })
        .collect()
}

/// Fits `log v = slope · log x + intercept`.
pub fn power_law_fit(x: &[f64], v: &[f64]) -> Result<LineFit> {
    least_squares(&positive_logs(x)?, &positive_logs(v)?)
}

/// Fits `log v = slope · x + intercept`.
pub fn exponential_fit(x: &[f64], v: &[f64]) -> Result<LineFit> {
    least_squares(x, &positive_logs(v)?)
}

/// Indices of the samples in the last decade `[x_max / 10, x_max]`.
pub fn last_decade(x: &[f64]) -> Vec<usize> {
    let Some(&x_max) = x.iter().max_by(|a, b| a.total_cmp(b)) else {
        return Vec::new();
    };
    (0..x.len()).filter(|&i| x[i] >= x_max / 10.0).collect()
}
