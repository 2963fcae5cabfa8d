use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::GeometryFrame;
use crate::model::SolitonModel;
use crate::numerics::fit::{exponential_fit, last_decade, power_law_fit, LineFit};

use super::ZERO_BAND;

/// Radial densities whose flux through geodesic spheres is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxIntegrand {
    /// `|∇R + R∇f|`
    GradRPlusRGradF,
    /// `|∇R| + 2R|∇f|`
    GradRPlus2RGradF,
    /// `(1 - R)|∇R + R∇f|`, with `1 - R = |∇f|²`
    OneMinusRWeighted,
}

impl FluxIntegrand {
    pub const ALL: [FluxIntegrand; 3] = [
        FluxIntegrand::GradRPlusRGradF,
        FluxIntegrand::GradRPlus2RGradF,
        FluxIntegrand::OneMinusRWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FluxIntegrand::GradRPlusRGradF => "gradR_plus_RgradF",
            FluxIntegrand::GradRPlus2RGradF => "gradR_plus_2RgradF",
            FluxIntegrand::OneMinusRWeighted => "one_minus_R_weighted",
        }
    }

    /// Density at a frame. Cancellation residue below `64ε` of the terms
    /// is returned as an exact zero.
    pub fn density(self, frame: &GeometryFrame) -> f64 {
        let rp = frame.scal_dr;
        let rf = frame.scal * frame.fp;
        let x = rp + rf;
        let x = if x.abs() <= ZERO_BAND * rp.abs().max(rf.abs()) {
            0.0
        } else {
            x.abs()
        };
        match self {
            FluxIntegrand::GradRPlusRGradF => x,
            FluxIntegrand::GradRPlus2RGradF => rp.abs() + 2.0 * frame.scal * frame.fp.abs(),
            FluxIntegrand::OneMinusRWeighted => frame.fp * frame.fp * x,
        }
    }
}

impl fmt::Display for FluxIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FluxIntegrand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FluxIntegrand::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown flux integrand {s:?}")))
    }
}

/// Fluxes through the geodesic spheres `∂B(r)` with decay fits.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSeries {
    pub integrand: FluxIntegrand,
    pub radii: Vec<f64>,
    pub flux: Vec<f64>,
    /// Slope of `log flux` against `log r` over the last decade of radii.
    /// `None` when fewer than 8 positive fluxes are available there.
    pub fitted_exponent: Option<LineFit>,
    /// Slope of `log flux` against `r` over the same window.
    pub fitted_rate: Option<LineFit>,
}

impl FluxSeries {
    /// True when every flux is an exact zero.
    pub fn identically_zero(&self) -> bool {
        self.flux.iter().all(|&f| f == 0.0)
    }
}

const MIN_FIT_POINTS: usize = 8;

/// Flux of `integrand` through the spheres at `radii`, with power-law and
/// exponential fits over the last decade.
pub fn flux_series<M: SolitonModel + ?Sized>(
    model: &M,
    integrand: FluxIntegrand,
    radii: &[f64],
) -> Result<FluxSeries> {
    if radii.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_FIT_POINTS} radii, got {}",
            radii.len()
        )));
    }
    if radii.windows(2).any(|p| !(p[1] > p[0])) || radii[0] <= 0.0 {
        return Err(Error::InvalidParameter(
            "flux radii must be positive and strictly increasing".into(),
        ));
    }
    let (lo, hi) = model.range();
    let flux = radii
        .iter()
        .map(|&r| {
            if !(lo..=hi).contains(&r) {
                return Err(Error::Range { r, lo, hi });
            }
            let frame = model.frame_at(r)?;
            model.level_flux(integrand.density(&frame), &frame)
        })
        .collect::<Result<Vec<_>>>()?;

    let window: Vec<usize> = last_decade(radii)
        .into_iter()
        .filter(|&i| flux[i] > 0.0)
        .collect();
    let (mut fitted_exponent, mut fitted_rate) = (None, None);
    if window.len() >= MIN_FIT_POINTS {
        let x: Vec<f64> = window.iter().map(|&i| radii[i]).collect();
        let v: Vec<f64> = window.iter().map(|&i| flux[i]).collect();
        fitted_exponent = Some(power_law_fit(&x, &v)?);
        fitted_rate = Some(exponential_fit(&x, &v)?);
    }
    Ok(FluxSeries {
        integrand,
        radii: radii.to_vec(),
        flux,
        fitted_exponent,
        fitted_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FlatPotential;
    use crate::model::{Cigar, FlatSoliton};
    use crate::numerics::log_grid;

    #[test]
    fn names_round_trip() {
        for i in FluxIntegrand::ALL {
            assert_eq!(i.name().parse::<FluxIntegrand>().unwrap(), i);
        }
        assert!("bogus".parse::<FluxIntegrand>().is_err());
    }

    #[test]
    fn linear_flat_flux_vanishes() {
        let f = FlatSoliton {
            n: 4,
            potential: FlatPotential::Linear,
        };
        let s = flux_series(
            &f,
            FluxIntegrand::GradRPlusRGradF,
            &log_grid(1.0, 100.0, 20).unwrap(),
        )
        .unwrap();
        assert!(s.identically_zero());
        assert!(s.fitted_exponent.is_none());
    }

    #[test]
    fn cigar_fluxes() {
        let radii: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let c = Cigar::normalized();
        // ∇R + R∇f vanishes identically on the cigar
        let s = flux_series(&c, FluxIntegrand::GradRPlusRGradF, &radii).unwrap();
        assert!(s.identically_zero());
        // |∇R| + 2R|∇f| = 3R|∇f| decays like e^{-r} in the normalized metric
        let s = flux_series(&c, FluxIntegrand::GradRPlus2RGradF, &radii).unwrap();
        let rate = s.fitted_rate.unwrap().slope;
        assert!((rate + 1.0).abs() < 1e-3, "{rate}");
    }

    #[test]
    fn too_few_radii() {
        assert!(matches!(
            flux_series(
                &Cigar::normalized(),
                FluxIntegrand::GradRPlusRGradF,
                &[1.0, 2.0]
            ),
            Err(Error::Fit(_))
        ));
    }
}
