//! Closed-form steady solitons: Hamilton's cigar, cigar × ℝᵏ, and the flat ones.
//!
//! The cigar `g = (dx² + dy²)/(1 + ρ²)` is written in geodesic polar form
//! `ds² + tanh²(s) dθ²` with `ρ = sinh s`, potential derivative
//! `f' = 2 tanh s` (increasing outward) and Gauss curvature `K = 2/(1+ρ²)`.
//! Along a ray `R = 4/cosh² s`, and `R + |∇f|² = 4`.

use crate::error::{Error, Result};
use crate::geometry::{rescale_metric, GeometryFrame};
use crate::numerics::fit::{exponential_fit, LineFit};

/// One point of the cigar (or a flat product of it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CigarPoint {
    /// Conformal Euclidean radius.
    pub rho: f64,
    /// Geodesic distance from the tip, `asinh ρ`.
    pub s: f64,
    pub k_extra: usize,
    pub frame: GeometryFrame,
}

/// The cigar × ℝ^k_extra at conformal radius `rho`, before normalization
/// (`R + |∇f|² = 4`).
pub fn cigar_frame(rho: f64, k_extra: usize) -> Result<CigarPoint> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!(
            "cigar radius must be finite and >= 0, got {rho}"
        )));
    }
    let q = 1.0 + rho * rho;
    let sq = q.sqrt();
    let s = rho.asinh();
    let gauss = 2.0 / q;
    let w = rho / sq;
    let fp = 2.0 * rho / sq;
    let (mean_curvature, hess_f_tan) = if rho > 0.0 {
        (1.0 / (rho * sq), gauss)
    } else {
        (f64::INFINITY, gauss)
    };
    // a 2-dimensional warped factor has no tangential 2-planes; k_tan is unused
    let mut frame =
        GeometryFrame::from_sectional(s, 2, k_extra, w, mean_curvature, fp, gauss, gauss, 0.0);
    frame.hess_f_tan = hess_f_tan;
    frame.scal_dr = -8.0 * rho / (q * sq);
    frame.scal_lap = -16.0 * (1.0 - rho * rho) / (q * q);
    Ok(CigarPoint {
        rho,
        s,
        k_extra,
        frame,
    })
}

/// The cigar at geodesic distance `s` in the metric `lambda · g_cigar`.
///
/// `lambda = 4` gives the normalized cigar, `R + |∇f|² = 1`.
pub fn cigar_frame_at_distance(s: f64, k_extra: usize, lambda: f64) -> Result<GeometryFrame> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {lambda}"
        )));
    }
    let s0 = s / lambda.sqrt();
    let mut frame = rescale_metric(&cigar_frame(s0.sinh(), k_extra)?.frame, lambda)?;
    frame.r = s;
    Ok(frame)
}

/// Slope of `log R` against geodesic distance for cigar samples at the given
/// distances. The closed form `R = 4/cosh² s` gives `-2` asymptotically.
pub fn cigar_decay_exponent(samples: &[f64]) -> Result<LineFit> {
    let values = samples
        .iter()
        .map(|&s| Ok(cigar_frame(s.sinh(), 0)?.frame.scal))
        .collect::<Result<Vec<_>>>()?;
    decay_rate(samples, &values)
}

/// Semi-log slope of a positive sampled quantity, requiring at least 8
/// increasing samples spanning two e-foldings of distance.
pub fn decay_rate(s: &[f64], values: &[f64]) -> Result<LineFit> {
    if s.len() < 8 {
        return Err(Error::Fit(format!(
            "need at least 8 samples, got {}",
            s.len()
        )));
    }
    if s.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::Fit(
            "sample distances must be strictly increasing".into(),
        ));
    }
    let span = s[s.len() - 1] - s[0];
    if !(span >= 2.0) {
        return Err(Error::Fit(format!(
            "samples span {span}, need at least two e-foldings"
        )));
    }
    exponential_fit(s, values)
}

/// Potential of a flat steady soliton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlatPotential {
    /// `f` constant on ℝⁿ.
    Constant,
    /// `f` linear along one factor of ℝⁿ⁻¹ × ℝ, `|∇f| = 1`.
    Linear,
}

impl FlatPotential {
    pub fn grad_f_norm(self) -> f64 {
        match self {
            FlatPotential::Constant => 0.0,
            FlatPotential::Linear => 1.0,
        }
    }
}

/// Flat soliton frame at distance `r`.
///
/// The constant variant is written in polar form about the origin (`w = r`),
/// the linear variant as the line factor `dr²` times a flat `ℝⁿ⁻¹` (`w = 1`,
/// no mean curvature).
pub fn flat_soliton_frame(n: usize, potential: FlatPotential, r: f64) -> Result<GeometryFrame> {
    if n < 2 {
        return Err(Error::Dimension { n, min: 2 });
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!(
            "radius must be finite and >= 0, got {r}"
        )));
    }
    Ok(match potential {
        FlatPotential::Constant => {
            let h = if r > 0.0 {
                (n - 1) as f64 / r
            } else {
                f64::INFINITY
            };
            GeometryFrame::flat(r, n, 0, r, h, 0.0)
        }
        FlatPotential::Linear => GeometryFrame::flat(r, n, n - 1, 1.0, 0.0, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tip_values() {
        let p = cigar_frame(0.0, 0).unwrap();
        assert_eq!(p.s, 0.0);
        assert_eq!(p.frame.scal, 4.0);
        assert_eq!(p.frame.grad_f_norm, 0.0);
        assert_eq!(p.frame.scal_dr, 0.0);
        // ΔR(0) = 2 R''(0) = -16
        assert_eq!(p.frame.scal_lap, -16.0);
    }

    #[test]
    fn closed_form_along_ray() {
        for &s in &[0.3_f64, 1.0, 2.5, 7.0] {
            let p = cigar_frame(s.sinh(), 0).unwrap();
            assert_relative_eq!(p.s, s, max_relative = 1e-15);
            assert_relative_eq!(p.frame.scal, 4.0 / s.cosh().powi(2), max_relative = 1e-14);
            assert_relative_eq!(p.frame.fp, 2.0 * s.tanh(), max_relative = 1e-15);
            assert_relative_eq!(p.frame.w, s.tanh(), max_relative = 1e-15);
            // 2D: |Rm| = R
            assert_relative_eq!(p.frame.rm_norm, p.frame.scal, max_relative = 1e-15);
            assert_eq!(p.frame.ric_rad, p.frame.ric_tan);
            assert_relative_eq!(p.frame.soliton_residual(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn products_add_flat_directions() {
        let p = cigar_frame(1.5, 3).unwrap();
        let q = cigar_frame(1.5, 0).unwrap();
        assert_eq!(p.frame.n, 5);
        assert_eq!(p.frame.warped_dim(), 2);
        assert_eq!(p.frame.scal, q.frame.scal);
        assert_eq!(p.frame.ric_norm_sq, q.frame.ric_norm_sq);
    }

    #[test]
    fn normalized_distance_frame() {
        let f = cigar_frame_at_distance(3.0, 0, 4.0).unwrap();
        assert_eq!(f.r, 3.0);
        assert_relative_eq!(f.first_integral(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(f.scal, 1.0 / 1.5_f64.cosh().powi(2), max_relative = 1e-14);
    }

    #[test]
    fn decay_exponent() {
        let s: Vec<f64> = (0..=20).map(|i| 5.0 + 0.25 * i as f64).collect();
        assert_relative_eq!(
            cigar_decay_exponent(&s).unwrap().slope,
            -2.0,
            epsilon = 2e-4
        );
        assert!(cigar_decay_exponent(&s[..5]).is_err());
        let narrow: Vec<f64> = (0..10).map(|i| 5.0 + 0.1 * i as f64).collect();
        assert!(matches!(cigar_decay_exponent(&narrow), Err(Error::Fit(_))));
    }

    #[test]
    fn flat_frames() {
        let c = flat_soliton_frame(4, FlatPotential::Constant, 2.0).unwrap();
        assert_eq!(c.first_integral(), 0.0);
        assert_eq!(c.mean_curvature, 1.5);
        let l = flat_soliton_frame(4, FlatPotential::Linear, 2.0).unwrap();
        assert_eq!(l.first_integral(), 1.0);
        assert_eq!(l.warped_dim(), 1);
        assert!(flat_soliton_frame(1, FlatPotential::Linear, 1.0).is_err());
    }
}
