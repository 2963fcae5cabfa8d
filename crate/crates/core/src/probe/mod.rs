//! Hypothesis probes: pinching margins, sphere fluxes, the ψ/u profile
//! functions of the Bryant soliton, and asymptotic decay classification.

mod decay;
mod flux;
mod pinching;
mod psi;

pub use decay::{decay_classifier, DecayClass, DecayFit};
pub use flux::{flux_series, FluxIntegrand, FluxSeries};
pub use pinching::{pinching_profile, Margin, PinchingProfile, SignChange};
pub use psi::{reconstruct_psi, PsiEvaluator, PsiTable, PSI_ENDPOINT_GAP};

use crate::error::{Error, Result};

/// `σ(n) = ((n+1) + √((n-1)(7n-13))) / (3n-2)`, the pinching constant of the
/// `σ R |∇f| <= |∇R|` hypothesis. `σ(2) = 1`, `σ(3) = 8/7`, increasing to `(1+√7)/3`.
pub fn sigma_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension { n, min: 2 });
    }
    let nf = n as f64;
    Ok(((nf + 1.0) + ((nf - 1.0) * (7.0 * nf - 13.0)).sqrt()) / (3.0 * nf - 2.0))
}

/// Magnitudes below this multiple of `ε · scale` count as exact zeros.
pub(crate) const ZERO_BAND: f64 = 64.0 * f64::EPSILON;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_constant(2).unwrap(), 1.0);
        assert_eq!(sigma_constant(3).unwrap(), 8.0 / 7.0);
        assert!(sigma_constant(1).is_err());
        let limit = (1.0 + 7f64.sqrt()) / 3.0;
        assert!((sigma_constant(1_000_000).unwrap() - limit).abs() < 1e-5);
    }

    #[test]
    fn sigma_is_increasing_and_bounded() {
        let limit = (1.0 + 7f64.sqrt()) / 3.0;
        let mut prev = 0.0;
        for n in 2..=100 {
            let s = sigma_constant(n).unwrap();
            assert!(s > prev && s <= limit, "n={n}");
            prev = s;
        }
    }
}
