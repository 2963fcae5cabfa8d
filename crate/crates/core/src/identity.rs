//! Pointwise residuals of the steady-soliton identities.
//!
//! Every `1 - R` and `√(1 - R)` is written as `|∇f|²` and `f'`, which is the
//! same thing on a normalized soliton and stays accurate where `R → 1`. With
//! that substitution the identities hold for any value of `R + |∇f|²`.
//!
//! Relative residuals divide by the largest absolute term on either side.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::GeometryFrame;
use crate::model::SolitonModel;

/// Denominator floor for relative residuals.
pub const SCALE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `R + |∇f|² = c0`
    FirstIntegral,
    /// `∇R = -2 Ric(∇f)`
    GradRRic,
    /// `2|Ric|² + ⟨∇R, ∇f⟩ + ΔR = 0`
    BianchiTraced,
    /// `D = 0` on rotationally symmetric solitons
    DTensorNorm,
    /// `|D|²` in terms of `R` and `f`
    Lemma23,
    /// divergence of `∇R/√(1-R) - 2√(1-R)∇f`
    Lemma24,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::FirstIntegral,
        Identity::GradRRic,
        Identity::BianchiTraced,
        Identity::DTensorNorm,
        Identity::Lemma23,
        Identity::Lemma24,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::FirstIntegral => "first_integral",
            Identity::GradRRic => "gradR_ric",
            Identity::BianchiTraced => "bianchi_traced",
            Identity::DTensorNorm => "d_tensor_norm",
            Identity::Lemma23 => "lemma23",
            Identity::Lemma24 => "lemma24",
        }
    }

    /// Accepted relative residual on a computed profile.
    pub fn tolerance(self) -> f64 {
        match self {
            Identity::FirstIntegral | Identity::DTensorNorm => 1e-8,
            Identity::GradRRic | Identity::BianchiTraced | Identity::Lemma23 => 1e-6,
            // one more derivative than the others
            Identity::Lemma24 => 1e-5,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Signed residual `LHS - RHS` and the magnitude it is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    fn from_terms(value: f64, terms: &[f64]) -> Self {
        Self {
            value,
            scale: terms.iter().fold(0.0_f64, |m, t| m.max(t.abs())),
        }
    }

    pub fn zero() -> Self {
        Self {
            value: 0.0,
            scale: 0.0,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.abs()
    }

    pub fn rel(&self) -> f64 {
        self.value.abs() / self.scale.max(SCALE_FLOOR)
    }
}

fn require_d_tensor_dim(frame: &GeometryFrame) -> Result<()> {
    if frame.n < 3 {
        return Err(Error::Dimension { n: frame.n, min: 3 });
    }
    Ok(())
}

/// `D(∂r, e, e)` for a unit tangential `e` in the warped factor and in a flat factor.
///
/// All other components vanish or follow by antisymmetry in the first two slots.
pub fn d_tensor_components(frame: &GeometryFrame) -> Result<(f64, f64)> {
    require_d_tensor_dim(frame)?;
    let n = frame.n as f64;
    let common = (frame.scal_dr + 2.0 * frame.scal * frame.fp) / (2.0 * (n - 1.0) * (n - 2.0));
    let warped = -frame.ric_tan * frame.fp / (n - 2.0) + common;
    Ok((warped, common))
}

/// `|D|²` of a radial frame.
pub fn d_tensor_norm_sq(frame: &GeometryFrame) -> Result<f64> {
    let (dw, dflat) = d_tensor_components(frame)?;
    let m = frame.tan_multiplicity().max(0.0);
    Ok(2.0 * (m * dw * dw + frame.flat_dims as f64 * dflat * dflat))
}

/// `|D|` measured against `|Ric| |∇f|`.
pub fn d_tensor_residual(frame: &GeometryFrame) -> Result<Residual> {
    Ok(Residual {
        value: d_tensor_norm_sq(frame)?.sqrt(),
        scale: frame.ric_norm() * frame.grad_f_norm,
    })
}

/// `|D|² + |∇R + 2R∇f|²/(2(n-1)(n-2)²)` against
/// `-(|∇f|² ΔR + |∇f|² ⟨∇R, ∇f⟩ + |∇R|²/2)/(n-2)²`.
pub fn lemma23_residual(frame: &GeometryFrame) -> Result<Residual> {
    let d2 = d_tensor_norm_sq(frame)?;
    let n = frame.n as f64;
    let nm2sq = (n - 2.0) * (n - 2.0);
    let fp = frame.fp;
    let fp2 = fp * fp;
    let rp = frame.scal_dr;
    let x = rp + 2.0 * frame.scal * fp;
    let a = x * x / (2.0 * (n - 1.0) * nm2sq);
    let b1 = -fp2 * frame.scal_lap / nm2sq;
    let b2 = -fp2 * rp * fp / nm2sq;
    let b3 = -rp * rp / (2.0 * nm2sq);
    Ok(Residual::from_terms(
        d2 + a - (b1 + b2 + b3),
        &[d2, a, b1, b2, b3],
    ))
}

/// `Y = R'/f' - 2 f'²` (radial component) and its `r`-derivative.
pub fn lemma24_field(frame: &GeometryFrame) -> Result<(f64, f64)> {
    let fp = frame.fp;
    if fp == 0.0 || !frame.mean_curvature.is_finite() {
        return Err(Error::OriginLimit {
            r: frame.r,
            switch_radius: 0.0,
        });
    }
    let rp = frame.scal_dr;
    let fpp = frame.hess_f_rad;
    let y = rp / fp - 2.0 * fp * fp;
    let dy = frame.scal_d2() / fp - rp * fpp / (fp * fp) - 4.0 * fp * fpp;
    Ok((y, dy))
}

/// `|∇f|³ div Y + (n-2)²|D|² + |∇R + 2R∇f|²/(2(n-1)) + 2R|∇f|⁴`.
///
/// Undefined where `∇f = 0`; both sides tend to 0 there.
pub fn lemma24_residual(frame: &GeometryFrame) -> Result<Residual> {
    let d2 = d_tensor_norm_sq(frame)?;
    let (y, dy) = lemma24_field(frame)?;
    let n = frame.n as f64;
    let fp = frame.fp;
    let fp2 = fp * fp;
    let div_y = dy + frame.mean_curvature * y;
    let t1 = fp2 * fp.abs() * div_y;
    let t2 = (n - 2.0) * (n - 2.0) * d2;
    let x = frame.scal_dr + 2.0 * frame.scal * fp;
    let t3 = x * x / (2.0 * (n - 1.0));
    let t4 = 2.0 * frame.scal * fp2 * fp2;
    Ok(Residual::from_terms(t1 + t2 + t3 + t4, &[t1, t2, t3, t4]))
}

/// `2|Ric|² + R' f' + ΔR`.
pub fn bianchi_traced_residual(frame: &GeometryFrame) -> Residual {
    let a = 2.0 * frame.ric_norm_sq;
    let b = frame.scal_dr * frame.fp;
    let c = frame.scal_lap;
    Residual::from_terms(a + b + c, &[a, b, c])
}

/// `R + |∇f|² - c0`.
pub fn first_integral_residual(frame: &GeometryFrame, c0: f64) -> Residual {
    let fp2 = frame.fp * frame.fp;
    Residual::from_terms(frame.scal + fp2 - c0, &[frame.scal, fp2, c0])
}

/// `R' + 2 Ric(∂r, ∂r) f'`.
pub fn grad_r_ric_residual(frame: &GeometryFrame) -> Residual {
    let b = 2.0 * frame.ric_rad * frame.fp;
    Residual::from_terms(frame.scal_dr + b, &[frame.scal_dr, b])
}

/// All residuals at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub r: f64,
    pub residuals: BTreeMap<Identity, Residual>,
    /// Set when a residual was replaced by its limit at the origin.
    pub origin_limit: bool,
}

impl IdentityReport {
    pub fn get(&self, id: Identity) -> Residual {
        self.residuals[&id]
    }
}

/// Evaluates every identity on one frame. Below `origin_radius`, or where
/// `∇f = 0`, the divergence identity is reported by its limit `0 = 0`.
pub fn evaluate_frame(
    frame: &GeometryFrame,
    c0: f64,
    origin_radius: f64,
) -> Result<IdentityReport> {
    let mut residuals = BTreeMap::new();
    residuals.insert(Identity::FirstIntegral, first_integral_residual(frame, c0));
    residuals.insert(Identity::GradRRic, grad_r_ric_residual(frame));
    residuals.insert(Identity::BianchiTraced, bianchi_traced_residual(frame));
    residuals.insert(Identity::DTensorNorm, d_tensor_residual(frame)?);
    residuals.insert(Identity::Lemma23, lemma23_residual(frame)?);
    let near_origin =
        frame.r < origin_radius || frame.fp == 0.0 || !frame.mean_curvature.is_finite();
    let l24 = if near_origin {
        Residual::zero()
    } else {
        lemma24_residual(frame)?
    };
    residuals.insert(Identity::Lemma24, l24);
    Ok(IdentityReport {
        r: frame.r,
        residuals,
        origin_limit: near_origin,
    })
}

/// Worst case of one identity over a set of radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySummary {
    pub identity: Identity,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Radius of the largest relative residual.
    pub worst_r: f64,
}

impl IdentitySummary {
    pub fn passed(&self) -> bool {
        self.max_rel <= self.identity.tolerance()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub reports: Vec<IdentityReport>,
    pub summary: Vec<IdentitySummary>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(IdentitySummary::passed)
    }

    pub fn summary_of(&self, id: Identity) -> IdentitySummary {
        *self
            .summary
            .iter()
            .find(|s| s.identity == id)
            .expect("every identity is summarized")
    }
}

/// Residuals over a list of frames, with per-identity maxima.
pub fn verify_frames(
    frames: &[GeometryFrame],
    c0: f64,
    origin_radius: f64,
) -> Result<Verification> {
    let reports = frames
        .iter()
        .map(|f| evaluate_frame(f, c0, origin_radius).map_err(|e| e.at(f.r)))
        .collect::<Result<Vec<_>>>()?;
    let summary = Identity::ALL
        .iter()
        .map(|&identity| {
            // NaN ranks above everything so that it fails the check instead of vanishing in max()
            let rank = |x: f64| if x.is_nan() { f64::INFINITY } else { x };
            let mut s = IdentitySummary {
                identity,
                max_abs: 0.0,
                max_rel: 0.0,
                worst_r: f64::NAN,
            };
            for (i, rep) in reports.iter().enumerate() {
                let res = rep.get(identity);
                if rank(res.abs()) > rank(s.max_abs) {
                    s.max_abs = res.abs();
                }
                if i == 0 || rank(res.rel()) > rank(s.max_rel) {
                    s.max_rel = res.rel();
                    s.worst_r = rep.r;
                }
            }
            s
        })
        .collect();
    Ok(Verification { reports, summary })
}

/// Evaluates `model` at each radius and verifies the resulting frames.
pub fn verify_profile<M: SolitonModel + ?Sized>(model: &M, radii: &[f64]) -> Result<Verification> {
    let frames = radii
        .iter()
        .map(|&r| model.frame_at(r).map_err(|e| e.at(r)))
        .collect::<Result<Vec<_>>>()?;
    verify_frames(&frames, model.c0(), model.origin_radius())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cigar_frame, flat_soliton_frame, FlatPotential};

    fn bryant_like() -> GeometryFrame {
        // an exactly rotationally symmetric consistent frame: n = 3, with Rp = -2 ric_rad fp
        let mut f =
            GeometryFrame::from_sectional(2.0, 3, 0, 1.3, 2.0 * 0.8 / 1.3, 0.6, 0.05, 0.05, 0.1);
        f.scal_dr = -2.0 * f.ric_rad * f.fp;
        f
    }

    #[test]
    fn d_vanishes_under_rotational_symmetry() {
        let f = bryant_like();
        assert!(d_tensor_norm_sq(&f).unwrap() < 1e-32);
        let mut g = f;
        g.ric_tan *= 1.01;
        assert!(d_tensor_norm_sq(&g).unwrap() > 0.0);
    }

    #[test]
    fn d_is_nonzero_on_cigar_products() {
        let p = cigar_frame(1.0, 1).unwrap().frame;
        assert!(d_tensor_norm_sq(&p).unwrap() > 1e-3);
        assert!(matches!(
            d_tensor_norm_sq(&cigar_frame(1.0, 0).unwrap().frame),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn identities_on_cigar_products() {
        // D ≠ 0 here, so the two lemmas are exercised with both sides nonzero
        for k in 1..4 {
            for &rho in &[0.2, 1.0, 3.0, 40.0] {
                let f = cigar_frame(rho, k).unwrap().frame;
                for res in [
                    lemma23_residual(&f).unwrap(),
                    lemma24_residual(&f).unwrap(),
                    bianchi_traced_residual(&f),
                ] {
                    assert!(res.rel() < 1e-13, "k={k} rho={rho} {res:?}");
                }
                assert!(first_integral_residual(&f, 4.0).rel() < 1e-15);
            }
        }
    }

    #[test]
    fn flat_solitons_are_exact() {
        for pot in [FlatPotential::Constant, FlatPotential::Linear] {
            let f = flat_soliton_frame(4, pot, 2.0).unwrap();
            let rep = evaluate_frame(&f, pot.grad_f_norm().powi(2), 0.0).unwrap();
            for id in Identity::ALL {
                assert_eq!(rep.get(id).value, 0.0, "{id} {pot:?}");
            }
        }
        let f = flat_soliton_frame(4, FlatPotential::Linear, 2.0).unwrap();
        assert_eq!(lemma24_field(&f).unwrap(), (-2.0, 0.0));
    }

    #[test]
    fn relative_residual_floor() {
        let r = Residual {
            value: 0.0,
            scale: 0.0,
        };
        assert_eq!(r.rel(), 0.0);
        let r = Residual {
            value: 1e-310,
            scale: 0.0,
        };
        assert!(r.rel().is_finite());
    }

    #[test]
    fn nan_residual_fails_summary() {
        let mut f = bryant_like();
        f.scal_lap = f64::NAN;
        let v = verify_frames(&[bryant_like(), f], 1.0, 0.0).unwrap();
        assert!(!v.passed());
        assert!(v.summary_of(Identity::BianchiTraced).max_rel.is_nan());
    }
}
