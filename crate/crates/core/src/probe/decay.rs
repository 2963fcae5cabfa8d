use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::fit::{exponential_fit, last_decade, least_squares, power_law_fit, LineFit};

/// Asymptotic decay class of a positive sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayClass {
    /// `v ~ C r^a`; the Bryant class has `a = -1`.
    Linear,
    /// `v ~ C e^{a r}`
    Exponential,
    Neither,
}

impl DecayClass {
    pub fn name(self) -> &'static str {
        match self {
            DecayClass::Linear => "linear",
            DecayClass::Exponential => "exponential",
            DecayClass::Neither => "neither",
        }
    }
}

impl fmt::Display for DecayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub class: DecayClass,
    /// `log v` against `log r`.
    pub power: LineFit,
    /// `log v` against `r`.
    pub exponential: LineFit,
    /// Largest value of `log(v (1+r)^{-3(n+1)} e^r)` over the samples.
    pub envelope_log_max: f64,
    /// Slope of that log-envelope over the last decade of samples; `<= 0`
    /// means it is not growing at the end of the range.
    pub envelope_tail_slope: f64,
}

impl DecayFit {
    /// The envelope check applies to the exponential class only.
    pub fn envelope_bounded(&self) -> bool {
        self.class != DecayClass::Exponential || self.envelope_tail_slope <= 0.0
    }
}

/// Winning residual must be this many times smaller than the other.
pub const RSS_RATIO: f64 = 10.0;
/// And the winning fit must explain this much of the variance.
pub const MIN_R_SQUARED: f64 = 0.999;
const MIN_SAMPLES: usize = 16;

/// Classifies samples `(r, v)` as power-law or exponential decay.
///
/// Both fits are made; a class wins when its residual sum of squares is at
/// least 10 times smaller than the other's and its `R² >= 0.999`.
pub fn decay_classifier(r: &[f64], v: &[f64], n: usize) -> Result<DecayFit> {
    if r.len() != v.len() {
        return Err(Error::Fit(format!(
            "length mismatch {} vs {}",
            r.len(),
            v.len()
        )));
    }
    if r.len() < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            r.len()
        )));
    }
    if r.windows(2).any(|p| !(p[1] > p[0])) || !(r[0] > 0.0) {
        return Err(Error::Fit(
            "sample radii must be positive and strictly increasing".into(),
        ));
    }
    if r[r.len() - 1] < 10.0 * r[0] {
        return Err(Error::Fit(format!(
            "samples span [{}, {}], less than one decade",
            r[0],
            r[r.len() - 1]
        )));
    }
    let power = power_law_fit(r, v)?;
    let exponential = exponential_fit(r, v)?;
    let class = if power.rss * RSS_RATIO <= exponential.rss && power.r_squared >= MIN_R_SQUARED {
        DecayClass::Linear
    } else if exponential.rss * RSS_RATIO <= power.rss && exponential.r_squared >= MIN_R_SQUARED {
        DecayClass::Exponential
    } else {
        DecayClass::Neither
    };
    let k = 3.0 * (n as f64 + 1.0);
    let env: Vec<f64> = r
        .iter()
        .zip(v)
        .map(|(&ri, &vi)| vi.ln() - k * (1.0 + ri).ln() + ri)
        .collect();
    let envelope_log_max = env.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = last_decade(r);
    let tail = if tail.len() >= 2 {
        tail
    } else {
        (0..r.len()).collect()
    };
    let x: Vec<f64> = tail.iter().map(|&i| r[i]).collect();
    let y: Vec<f64> = tail.iter().map(|&i| env[i]).collect();
    let envelope_tail_slope = least_squares(&x, &y)?.slope;
    Ok(DecayFit {
        class,
        power,
        exponential,
        envelope_log_max,
        envelope_tail_slope,
    })
}
