//! Curvature, Laplacian, divergence and flux formulas for rotationally
//! symmetric metrics `g = dr² + w(r)² g_{S^{n-1}}` with a radial potential
//! `f(r)`.
//!
//! Nothing here differentiates numerically: radial derivatives are always
//! supplied by the caller.

use crate::error::{Error, Result};

/// Radius below which `1/w` formulas are refused and series limits must be used.
pub const DEFAULT_SWITCH_RADIUS: f64 = 1e-3;

/// Pointwise data of a warped product with radial potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    /// Geodesic distance from the origin.
    pub r: f64,
    /// Warping function.
    pub w: f64,
    /// `dw/dr`.
    pub wp: f64,
    /// `df/dr`.
    pub fp: f64,
    /// Ambient dimension.
    pub n: usize,
    pub switch_radius: f64,
}

impl RadialPoint {
    pub fn new(r: f64, w: f64, wp: f64, fp: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension { n, min: 3 });
        }
        if !(r.is_finite() && w.is_finite() && wp.is_finite() && fp.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite radial data (r={r}, w={w}, wp={wp}, fp={fp})"
            )));
        }
        if r < 0.0 {
            return Err(Error::Domain(format!("negative radius {r}")));
        }
        Ok(Self {
            r,
            w,
            wp,
            fp,
            n,
            switch_radius: DEFAULT_SWITCH_RADIUS,
        })
    }

    pub fn with_switch_radius(mut self, switch_radius: f64) -> Self {
        self.switch_radius = switch_radius;
        self
    }

    fn check_off_origin(&self) -> Result<()> {
        if self.w <= 0.0 {
            return Err(Error::Domain(format!(
                "inside origin chart (w = {})",
                self.w
            )));
        }
        if self.r < self.switch_radius {
            return Err(Error::OriginLimit {
                r: self.r,
                switch_radius: self.switch_radius,
            });
        }
        Ok(())
    }

    /// Mean curvature `(n-1) w'/w` of the level sphere, i.e. `Δr`.
    pub fn mean_curvature(&self) -> Result<f64> {
        self.check_off_origin()?;
        Ok((self.n - 1) as f64 * self.wp / self.w)
    }
}

/// All pointwise geometric scalars at one radius.
///
/// Product metrics `(warped factor) × ℝ^k` are carried in the same shape:
/// `flat_dims = k` of the `n - 1` directions orthogonal to `∂r` are flat,
/// and only the remaining `n - k - 1` carry the tangential Ricci eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryFrame {
    pub r: f64,
    pub n: usize,
    pub flat_dims: usize,
    pub w: f64,
    /// `Δr` of the level sets; zero when the radial factor is a line.
    pub mean_curvature: f64,
    /// Signed `df/dr`.
    pub fp: f64,
    /// Scalar curvature `R`.
    pub scal: f64,
    /// `dR/dr`.
    pub scal_dr: f64,
    /// `ΔR`.
    pub scal_lap: f64,
    pub ric_rad: f64,
    pub ric_tan: f64,
    pub ric_norm_sq: f64,
    pub rm_norm: f64,
    pub grad_f_norm: f64,
    pub k_rad: f64,
    pub k_tan: f64,
    /// `Hess f(∂r, ∂r) = f''`.
    pub hess_f_rad: f64,
    /// `Hess f(e, e) = f' w'/w` on a unit tangential vector of the warped factor.
    pub hess_f_tan: f64,
}

impl GeometryFrame {
    /// Dimension of the rotationally symmetric factor.
    pub fn warped_dim(&self) -> usize {
        self.n - self.flat_dims
    }

    /// Multiplicity of `ric_tan`.
    pub fn tan_multiplicity(&self) -> f64 {
        (self.warped_dim() - 1) as f64
    }

    pub fn ric_norm(&self) -> f64 {
        self.ric_norm_sq.sqrt()
    }

    /// `d²R/dr²`, recovered from `ΔR = R'' + H R'`.
    pub fn scal_d2(&self) -> f64 {
        if !self.mean_curvature.is_finite() {
            // origin limit ΔR = m R''
            self.scal_lap / self.warped_dim() as f64
        } else if self.scal_dr == 0.0 {
            self.scal_lap
        } else {
            self.scal_lap - self.mean_curvature * self.scal_dr
        }
    }

    /// `R + |∇f|²`.
    pub fn first_integral(&self) -> f64 {
        self.scal + self.fp * self.fp
    }

    /// Largest deviation of `Ric - Hess f` over the radial and tangential eigenvalues.
    pub fn soliton_residual(&self) -> f64 {
        let tan = if self.warped_dim() > 1 {
            (self.ric_tan - self.hess_f_tan).abs()
        } else {
            0.0
        };
        (self.ric_rad - self.hess_f_rad).abs().max(tan)
    }

    /// Fills `R'` and `ΔR` from `R'` and `R''`.
    pub fn with_scalar_derivatives(mut self, scal_dr: f64, scal_d2: f64) -> Self {
        self.scal_dr = scal_dr;
        self.scal_lap = if scal_dr == 0.0 {
            scal_d2
        } else {
            scal_d2 + self.mean_curvature * scal_dr
        };
        self
    }

    /// The trivial frame: every curvature quantity vanishes.
    pub(crate) fn flat(
        r: f64,
        n: usize,
        flat_dims: usize,
        w: f64,
        mean_curvature: f64,
        fp: f64,
    ) -> Self {
        Self {
            r,
            n,
            flat_dims,
            w,
            mean_curvature,
            fp,
            scal: 0.0,
            scal_dr: 0.0,
            scal_lap: 0.0,
            ric_rad: 0.0,
            ric_tan: 0.0,
            ric_norm_sq: 0.0,
            rm_norm: 0.0,
            grad_f_norm: fp.abs(),
            k_rad: 0.0,
            k_tan: 0.0,
            hess_f_rad: 0.0,
            hess_f_tan: 0.0,
        }
    }

    /// Assembles a frame from the two sectional curvatures of an `m`-dimensional
    /// warped factor times `ℝ^flat_dims`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_sectional(
        r: f64,
        m: usize,
        flat_dims: usize,
        w: f64,
        mean_curvature: f64,
        fp: f64,
        fpp: f64,
        k_rad: f64,
        k_tan: f64,
    ) -> Self {
        let mm1 = (m - 1) as f64;
        let mm2 = (m - 2) as f64;
        let ric_rad = mm1 * k_rad;
        let ric_tan = k_rad + mm2 * k_tan;
        Self {
            r,
            n: m + flat_dims,
            flat_dims,
            w,
            mean_curvature,
            fp,
            scal: ric_rad + mm1 * ric_tan,
            scal_dr: 0.0,
            scal_lap: 0.0,
            ric_rad,
            ric_tan,
            ric_norm_sq: ric_rad * ric_rad + mm1 * ric_tan * ric_tan,
            rm_norm: (4.0 * mm1 * k_rad * k_rad + 2.0 * mm1 * mm2 * k_tan * k_tan).sqrt(),
            grad_f_norm: fp.abs(),
            k_rad,
            k_tan,
            hess_f_rad: fpp,
            hess_f_tan: if m > 1 && mean_curvature.is_finite() {
                fp * mean_curvature / mm1
            } else {
                0.0
            },
        }
    }
}

/// Curvature of the warped product at `p`, given `w''` and `f''`.
///
/// `R'` and `ΔR` need third-order data and are left at zero; set them with
/// [`GeometryFrame::with_scalar_derivatives`].
pub fn curvature_from_point(p: &RadialPoint, wpp: f64, fpp: f64) -> Result<GeometryFrame> {
    if p.n < 3 {
        return Err(Error::Dimension { n: p.n, min: 3 });
    }
    if !(wpp.is_finite() && fpp.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite second derivatives (wpp={wpp}, fpp={fpp})"
        )));
    }
    let h = p.mean_curvature()?;
    let k_rad = -wpp / p.w;
    let k_tan = (1.0 - p.wp * p.wp) / (p.w * p.w);
    Ok(GeometryFrame::from_sectional(
        p.r, p.n, 0, p.w, h, p.fp, fpp, k_rad, k_tan,
    ))
}

/// `Δq = q'' + (n-1)(w'/w) q'` for a radial function `q`.
pub fn laplacian_radial(dq: f64, d2q: f64, p: &RadialPoint) -> Result<f64> {
    Ok(d2q + p.mean_curvature()? * dq)
}

/// `div(v ∂r) = v' + (n-1)(w'/w) v`.
pub fn divergence_radial(v: f64, dv: f64, p: &RadialPoint) -> Result<f64> {
    Ok(dv + p.mean_curvature()? * v)
}

/// Volume of the unit `k`-sphere, `2π^{(k+1)/2} / Γ((k+1)/2)`.
///
/// The Gamma value is built by exact recursion from `Γ(1) = 1` or
/// `Γ(1/2) = √π`, so the constants are reproducible to the last bit.
pub fn unit_sphere_volume(k: usize) -> f64 {
    let half = (k + 1) as f64 / 2.0;
    let (mut gamma, mut x) = if (k + 1).is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while x < half {
        gamma *= x;
        x += 1.0;
    }
    2.0 * std::f64::consts::PI.powf(half) / gamma
}

/// Flux `|S^{m-1}| w^{m-1} q` of a radial density through the level set of an
/// `m`-dimensional warped factor.
pub fn level_set_flux(q: f64, w: f64, m: usize) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::Domain(format!(
            "flux density must be nonnegative, got {q}"
        )));
    }
    if m < 1 {
        return Err(Error::Dimension { n: m, min: 1 });
    }
    Ok(unit_sphere_volume(m - 1) * w.powi(m as i32 - 1) * q)
}

/// Flux of a nonnegative radial density through the geodesic sphere at `p`.
pub fn sphere_flux(q: f64, p: &RadialPoint) -> Result<f64> {
    level_set_flux(q, p.w, p.n)
}

/// Frame of the metric `lambda · g`. Eigenvalues of `Ric` relative to the
/// metric, `R` and `|∇f|²` scale by `1/lambda`; radii by `√lambda`.
pub fn rescale_metric(frame: &GeometryFrame, lambda: f64) -> Result<GeometryFrame> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {lambda}"
        )));
    }
    let s = lambda.sqrt();
    let mut out = *frame;
    out.r *= s;
    out.w *= s;
    out.mean_curvature /= s;
    out.fp /= s;
    out.grad_f_norm /= s;
    out.scal /= lambda;
    out.scal_dr /= lambda * s;
    out.scal_lap /= lambda * lambda;
    out.ric_rad /= lambda;
    out.ric_tan /= lambda;
    out.ric_norm_sq /= lambda * lambda;
    out.rm_norm /= lambda;
    out.k_rad /= lambda;
    out.k_tan /= lambda;
    out.hess_f_rad /= lambda;
    out.hess_f_tan /= lambda;
    Ok(out)
}
