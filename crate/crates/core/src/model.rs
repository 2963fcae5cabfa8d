//! A common view of the solitons the probes and identity checks run on.

use crate::bryant::RadialProfile;
use crate::error::{Error, Result};
use crate::exact::{cigar_frame_at_distance, flat_soliton_frame, FlatPotential};
use crate::geometry::{level_set_flux, GeometryFrame};

/// A steady soliton with radial data along one distance coordinate.
pub trait SolitonModel {
    /// Total dimension.
    fn dim(&self) -> usize;
    /// First-integral constant `R + |∇f|²`.
    fn c0(&self) -> f64;
    /// Closed range of distances where [`SolitonModel::frame_at`] is defined.
    fn range(&self) -> (f64, f64);
    fn frame_at(&self, r: f64) -> Result<GeometryFrame>;
    /// Radius below which quantities divided by `w` or `|∇f|` are replaced by limits.
    fn origin_radius(&self) -> f64 {
        0.0
    }
    /// Flux of a nonnegative density through the level set at `frame.r`.
    ///
    /// For products with flat factors the level set is noncompact; the flux is
    /// taken per unit volume of the flat factor.
    fn level_flux(&self, q: f64, frame: &GeometryFrame) -> Result<f64> {
        level_set_flux(q, frame.w, frame.warped_dim())
    }
}

impl SolitonModel for RadialProfile {
    fn dim(&self) -> usize {
        self.n()
    }
    fn c0(&self) -> f64 {
        RadialProfile::c0(self)
    }
    fn range(&self) -> (f64, f64) {
        (0.0, self.r_max())
    }
    fn frame_at(&self, r: f64) -> Result<GeometryFrame> {
        RadialProfile::frame_at(self, r)
    }
    fn origin_radius(&self) -> f64 {
        self.switch_radius()
    }
}

/// Cigar × ℝ^k_extra in the metric `scale · g_cigar`, by geodesic distance from the tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cigar {
    pub k_extra: usize,
    pub scale: f64,
}

impl Cigar {
    /// The cigar with `R + |∇f|² = 1`.
    pub fn normalized() -> Self {
        Self {
            k_extra: 0,
            scale: 4.0,
        }
    }

    /// The cigar as written, `R + |∇f|² = 4`.
    pub fn standard() -> Self {
        Self {
            k_extra: 0,
            scale: 1.0,
        }
    }

    pub fn with_flat_factor(mut self, k_extra: usize) -> Self {
        self.k_extra = k_extra;
        self
    }
}

impl SolitonModel for Cigar {
    fn dim(&self) -> usize {
        2 + self.k_extra
    }
    fn c0(&self) -> f64 {
        4.0 / self.scale
    }
    fn range(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn frame_at(&self, r: f64) -> Result<GeometryFrame> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Range {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        cigar_frame_at_distance(r, self.k_extra, self.scale)
    }
}

/// Flat ℝⁿ with constant or linear potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatSoliton {
    pub n: usize,
    pub potential: FlatPotential,
}

impl SolitonModel for FlatSoliton {
    fn dim(&self) -> usize {
        self.n
    }
    fn c0(&self) -> f64 {
        let g = self.potential.grad_f_norm();
        g * g
    }
    fn range(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn frame_at(&self, r: f64) -> Result<GeometryFrame> {
        flat_soliton_frame(self.n, self.potential, r)
    }
}
