use crate::error::{Error, Result};
use crate::geometry::GeometryFrame;
use crate::model::SolitonModel;

use super::{sigma_constant, ZERO_BAND};

/// Signed inequality margins; nonnegative means the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Margin {
    /// `|∇R| - σ(n) R |∇f|`
    Sigma,
    /// `|Ric|² - |∇R|²/(4|∇f|²)`, Kato's inequality for `|∇|∇f||`
    Kato,
    /// `(1/4)[(3/2)|∇R|²/|∇f|² - 2R²] - |Ric|`
    Munteanu,
    /// `|∇R|/|∇f| - √((3n-4)/(2(n-1))) R`
    Pinch33,
    /// `R²/2 - |Ric|²`
    RicciBound,
}

impl Margin {
    pub const ALL: [Margin; 5] = [
        Margin::Sigma,
        Margin::Kato,
        Margin::Munteanu,
        Margin::Pinch33,
        Margin::RicciBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Margin::Sigma => "sigma_margin",
            Margin::Kato => "kato_margin",
            Margin::Munteanu => "munteanu_margin",
            Margin::Pinch33 => "pinch33_margin",
            Margin::RicciBound => "ricci_bound_margin",
        }
    }

    /// Margin and the largest term it is the difference of. `None` where
    /// `∇f = 0` makes a ratio undefined.
    pub fn evaluate(self, frame: &GeometryFrame) -> Result<Option<(f64, f64)>> {
        let g = frame.grad_f_norm;
        let r = frame.scal;
        let grad_r = frame.scal_dr.abs();
        let ric_sq = frame.ric_norm_sq;
        let pair = |a: f64, b: f64| Some((a - b, a.abs().max(b.abs())));
        Ok(match self {
            Margin::Sigma => pair(grad_r, sigma_constant(frame.n)? * r * g),
            Margin::RicciBound => pair(0.5 * r * r, ric_sq),
            _ if g == 0.0 => None,
            Margin::Kato => pair(ric_sq, grad_r * grad_r / (4.0 * g * g)),
            Margin::Munteanu => pair(
                0.25 * (1.5 * grad_r * grad_r / (g * g) - 2.0 * r * r),
                ric_sq.sqrt(),
            ),
            Margin::Pinch33 => {
                let n = frame.n as f64;
                pair(grad_r / g, ((3.0 * n - 4.0) / (2.0 * (n - 1.0))).sqrt() * r)
            }
        })
    }
}

/// A radius where a margin changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub margin: Margin,
    pub r: f64,
    /// True when the margin goes from nonnegative to negative with increasing `r`.
    pub becomes_negative: bool,
}

/// Pinching data sampled along the radial direction.
///
/// Undefined entries (ratios at `∇f = 0`, `delta` where `R <= 0`) are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct PinchingProfile {
    pub n: usize,
    pub radii: Vec<f64>,
    /// `min Ric / R`
    pub delta: Vec<f64>,
    pub sigma_margin: Vec<f64>,
    pub kato_margin: Vec<f64>,
    pub munteanu_margin: Vec<f64>,
    pub pinch33_margin: Vec<f64>,
    pub ricci_bound_margin: Vec<f64>,
    /// Largest term of each margin, for relative comparisons.
    pub scales: Vec<[f64; 5]>,
    pub sign_changes: Vec<SignChange>,
}

impl PinchingProfile {
    pub fn margin(&self, m: Margin) -> &[f64] {
        match m {
            Margin::Sigma => &self.sigma_margin,
            Margin::Kato => &self.kato_margin,
            Margin::Munteanu => &self.munteanu_margin,
            Margin::Pinch33 => &self.pinch33_margin,
            Margin::RicciBound => &self.ricci_bound_margin,
        }
    }
}

/// Bisection tolerance for sign-change radii.
const SIGN_CHANGE_TOL: f64 = 1e-6;

fn sign(value: f64, scale: f64) -> i8 {
    if value.abs() <= ZERO_BAND * scale {
        0
    } else if value > 0.0 {
        1
    } else {
        -1
    }
}

fn signed_margin<M: SolitonModel + ?Sized>(model: &M, m: Margin, r: f64) -> Result<i8> {
    let frame = model.frame_at(r).map_err(|e| e.at(r))?;
    Ok(m.evaluate(&frame)?.map_or(0, |(v, s)| sign(v, s)))
}

fn bisect<M: SolitonModel + ?Sized>(
    model: &M,
    m: Margin,
    mut lo: f64,
    mut hi: f64,
    s_lo: i8,
) -> Result<f64> {
    while hi - lo > SIGN_CHANGE_TOL {
        let mid = 0.5 * (lo + hi);
        let s = signed_margin(model, m, mid)?;
        if s == s_lo {
            lo = mid;
        } else if s == -s_lo {
            hi = mid;
        } else {
            // landed on an exact zero
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Margins at each radius, with sign changes between consecutive radii
/// located by bisection to `1e-6` in `r`.
pub fn pinching_profile<M: SolitonModel + ?Sized>(
    model: &M,
    radii: &[f64],
) -> Result<PinchingProfile> {
    if radii.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidParameter(
            "probe radii must be strictly increasing".into(),
        ));
    }
    let n = model.dim();
    let mut out = PinchingProfile {
        n,
        radii: radii.to_vec(),
        delta: Vec::with_capacity(radii.len()),
        sigma_margin: Vec::with_capacity(radii.len()),
        kato_margin: Vec::with_capacity(radii.len()),
        munteanu_margin: Vec::with_capacity(radii.len()),
        pinch33_margin: Vec::with_capacity(radii.len()),
        ricci_bound_margin: Vec::with_capacity(radii.len()),
        scales: Vec::with_capacity(radii.len()),
        sign_changes: Vec::new(),
    };
    let mut signs: Vec<[i8; 5]> = Vec::with_capacity(radii.len());
    for &r in radii {
        let frame = model.frame_at(r).map_err(|e| e.at(r))?;
        let mut scale = [0.0; 5];
        let mut sg = [0i8; 5];
        for (i, m) in Margin::ALL.into_iter().enumerate() {
            let (v, s) = m
                .evaluate(&frame)
                .map_err(|e| e.at(r))?
                .unwrap_or((f64::NAN, 0.0));
            scale[i] = s;
            sg[i] = if v.is_nan() { 0 } else { sign(v, s) };
            match m {
                Margin::Sigma => out.sigma_margin.push(v),
                Margin::Kato => out.kato_margin.push(v),
                Margin::Munteanu => out.munteanu_margin.push(v),
                Margin::Pinch33 => out.pinch33_margin.push(v),
                Margin::RicciBound => out.ricci_bound_margin.push(v),
            }
        }
        let mut min_ric = frame.ric_rad.min(if frame.warped_dim() > 1 {
            frame.ric_tan
        } else {
            f64::INFINITY
        });
        if frame.flat_dims > 0 {
            min_ric = min_ric.min(0.0);
        }
        out.delta.push(if frame.scal > 0.0 {
            min_ric / frame.scal
        } else {
            f64::NAN
        });
        out.scales.push(scale);
        signs.push(sg);
    }
    for (i, m) in Margin::ALL.into_iter().enumerate() {
        // compare against the last nonzero sign so exact zeros do not split a crossing
        let mut last: Option<(usize, i8)> = None;
        for (j, sg) in signs.iter().enumerate() {
            let s = sg[i];
            if s == 0 {
                continue;
            }
            if let Some((k, prev)) = last {
                if prev != s {
                    let r = bisect(model, m, radii[k], radii[j], prev)?;
                    out.sign_changes.push(SignChange {
                        margin: m,
                        r,
                        becomes_negative: s < 0,
                    });
                }
            }
            last = Some((j, s));
        }
    }
    Ok(out)
}
