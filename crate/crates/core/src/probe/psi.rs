//! The profile functions `ψ` and `u` of the Bryant soliton.
//!
//! `ψ` is defined on the range of `R` by `∇R + ψ(R)∇f = 0`, i.e.
//! `ψ(s) = -R'(r(s)) / f'(r(s))` with `r(s)` the inverse of the decreasing
//! function `R(r)`, and
//!
//! ```text
//! u(s) = log ψ(s) + 1/(n-1) ∫_{1/2}^{s} ( n/(1-t) - (n-1-(n-3)t) / ((1-t) ψ(t)) ) dt
//! ```

use crate::bryant::RadialProfile;
use crate::error::{Error, Result};
use crate::geometry::{sphere_flux, RadialPoint};
use crate::numerics::interp::Pchip;
use crate::numerics::log_grid;
use crate::numerics::quadrature::integrate;

/// Distance kept from both ends of the computed range of `R`.
pub const PSI_ENDPOINT_GAP: f64 = 1e-4;

const NEWTON_MAX_ITER: usize = 60;
const FINE_RTOL: f64 = 1e-12;
const COARSE_RTOL: f64 = 1e-10;
const RESIDUAL_CHECKS: usize = 100;

/// Evaluates `r(s)`, `ψ(s)` and `u(s)` on a computed Bryant profile.
#[derive(Debug, Clone)]
pub struct PsiEvaluator<'a> {
    profile: &'a RadialProfile,
    /// `r` as a function of `R`, on increasing `R`.
    inverse: Pchip,
    s_min: f64,
    s_max: f64,
}

impl<'a> PsiEvaluator<'a> {
    pub fn new(profile: &'a RadialProfile) -> Result<Self> {
        let grid = &profile.grid()[1..];
        let mut scal = Vec::with_capacity(grid.len());
        for &r in grid {
            scal.push(profile.frame_at(r)?.scal);
        }
        if let Some(i) = (1..scal.len()).find(|&i| !(scal[i] < scal[i - 1])) {
            return Err(Error::Inversion(format!(
                "R is not strictly decreasing near r = {}",
                grid[i]
            )));
        }
        let (s_lo, s_hi) = (scal[scal.len() - 1], scal[0]);
        let s_min = s_lo + PSI_ENDPOINT_GAP;
        let s_max = s_hi - PSI_ENDPOINT_GAP;
        if !(s_min < 0.5 && 0.5 < s_max) {
            return Err(Error::InvalidParameter(format!(
                "range of R [{s_lo}, {s_hi}] does not contain 1/2 with margin {PSI_ENDPOINT_GAP}; increase r_max"
            )));
        }
        let x: Vec<f64> = scal.iter().rev().copied().collect();
        let y: Vec<f64> = grid.iter().rev().copied().collect();
        Ok(Self {
            profile,
            inverse: Pchip::new(x, y)?,
            s_min,
            s_max,
        })
    }

    /// Admissible `s` range, `[R(r_max) + gap, R(r0) - gap]`.
    pub fn range(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    fn check(&self, s: f64) -> Result<()> {
        if !(self.s_min..=self.s_max).contains(&s) {
            return Err(Error::Range {
                r: s,
                lo: self.s_min,
                hi: self.s_max,
            });
        }
        Ok(())
    }

    /// The radius where `R = s`: monotone cubic seed, then safeguarded Newton.
    pub fn radius_of(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        let (xs, ys) = self.inverse.knots();
        let i = self.inverse.segment(s);
        // R decreasing: larger r at smaller s
        let (mut r_lo, mut r_hi) = (ys[i + 1], ys[i]);
        if xs[i] == s {
            return Ok(ys[i]);
        }
        let mut r = self.inverse.eval(s).clamp(r_lo, r_hi);
        for _ in 0..NEWTON_MAX_ITER {
            let f = self.profile.frame_at(r)?;
            let g = f.scal - s;
            if g == 0.0 {
                return Ok(r);
            }
            if g > 0.0 {
                r_lo = r_lo.max(r);
            } else {
                r_hi = r_hi.min(r);
            }
            let mut next = r - g / f.scal_dr;
            if !(next > r_lo && next < r_hi) {
                next = 0.5 * (r_lo + r_hi);
            }
            if (next - r).abs() <= 4.0 * f64::EPSILON * r {
                return Ok(next);
            }
            r = next;
        }
        Err(Error::Inversion(format!(
            "no convergence inverting R = {s}"
        )))
    }

    /// `ψ(s) = -R'/f'` at `r(s)`.
    pub fn psi(&self, s: f64) -> Result<f64> {
        let r = self.radius_of(s)?;
        let f = self.profile.frame_at(r)?;
        let psi = -f.scal_dr / f.fp;
        if !(psi > 0.0) {
            return Err(Error::Domain(format!("psi({s}) = {psi} is not positive")));
        }
        Ok(psi)
    }

    /// Integrand of `u`, using `1 - t = f'(r(t))²`.
    pub fn u_integrand(&self, t: f64) -> Result<f64> {
        let n = self.profile.n() as f64;
        let r = self.radius_of(t)?;
        let f = self.profile.frame_at(r)?;
        let psi = -f.scal_dr / f.fp;
        if !(psi > 0.0) {
            return Err(Error::Domain(format!("psi({t}) = {psi} is not positive")));
        }
        let one_minus_t = f.fp * f.fp;
        Ok((n * psi - (n - 1.0 - (n - 3.0) * t)) / (one_minus_t * psi))
    }

    /// `∫_{1/2}^{s}` of the `u` integrand, with the absolute integral.
    fn u_integral(&self, a: f64, b: f64, rtol: f64) -> Result<(f64, f64)> {
        let q = integrate(|t| self.u_integrand(t), a, b, rtol)?;
        Ok((q.value, q.abs_value))
    }

    pub fn u(&self, s: f64) -> Result<f64> {
        let n = self.profile.n() as f64;
        self.check(s)?;
        let (i, _) = self.u_integral(0.5, s, FINE_RTOL)?;
        Ok(self.psi(s)?.ln() + i / (n - 1.0))
    }

    /// Flux of `e^{u(R)} |∇R + ψ(R)∇f|` through the sphere of radius `r`,
    /// and the flux of `e^{u(R)} (|∇R| + ψ(R)|∇f|)` it is a cancellation of.
    ///
    /// `e^u` grows without bound as `R → 0`, so only the ratio is meaningful.
    pub fn x_flux(&self, r: f64) -> Result<(f64, f64)> {
        let f = self.profile.frame_at(r)?;
        let psi = self.psi(f.scal)?;
        let x = f.scal_dr + psi * f.fp;
        let scale = f.scal_dr.abs() + psi * f.fp.abs();
        let d = self.profile.dense_eval(r)?;
        let p = RadialPoint::new(r, d.w, d.wp, d.fp, f.n)?;
        let eu = self.u(f.scal)?.exp();
        Ok((sphere_flux(eu * x.abs(), &p)?, sphere_flux(eu * scale, &p)?))
    }
}

/// `ψ` and `u` sampled on the computed range of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTable {
    pub n: usize,
    /// Values of `R`, decreasing (increasing radius).
    pub s: Vec<f64>,
    /// `r(s)`.
    pub r: Vec<f64>,
    pub psi: Vec<f64>,
    pub u: Vec<f64>,
    /// `max |R' + ψ(R) f'|` over off-table radii.
    pub x_residual: f64,
    /// Same, relative to `|R'|`.
    pub x_residual_rel: f64,
    /// Largest relative change of the `u` integrals between quadrature
    /// tolerances `1e-10` and `1e-12`.
    pub quadrature_change: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl PsiTable {
    /// `ψ(1/2)` and `u(1/2)`, recomputed on `profile`.
    pub fn base_point(profile: &RadialProfile) -> Result<(f64, f64)> {
        let e = PsiEvaluator::new(profile)?;
        Ok((e.psi(0.5)?, e.u(0.5)?))
    }
}

/// Tabulates `ψ` and `u` at `samples` radii spread logarithmically over the
/// admissible range, and checks `X = ∇R + ψ(R)∇f` at radii between them.
pub fn reconstruct_psi(profile: &RadialProfile, samples: usize) -> Result<PsiTable> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let n = profile.n();
    let e = PsiEvaluator::new(profile)?;
    let (s_min, s_max) = e.range();
    let r_near = e.radius_of(s_max)?;
    let r_far = e.radius_of(s_min)?;
    let radii = log_grid(r_near, r_far, samples)?;
    let s: Vec<f64> = radii
        .iter()
        .map(|&r| Ok(profile.frame_at(r)?.scal.clamp(s_min, s_max)))
        .collect::<Result<_>>()?;
    let r = s
        .iter()
        .map(|&v| e.radius_of(v))
        .collect::<Result<Vec<_>>>()?;
    let psi = s.iter().map(|&v| e.psi(v)).collect::<Result<Vec<_>>>()?;

    // integrals accumulated outward from 1/2 in both directions
    let mut fine = vec![0.0; s.len()];
    let mut coarse = vec![0.0; s.len()];
    let mut abs_fine = vec![0.0; s.len()];
    let split = s.partition_point(|&v| v >= 0.5);
    let up: Vec<usize> = (0..split).rev().collect();
    let down: Vec<usize> = (split..s.len()).collect();
    for side in [up, down] {
        let (mut prev, mut acc_f, mut acc_c, mut acc_a) = (0.5, 0.0, 0.0, 0.0);
        for i in side {
            let (vf, af) = e.u_integral(prev, s[i], FINE_RTOL)?;
            let (vc, _) = e.u_integral(prev, s[i], COARSE_RTOL)?;
            acc_f += vf;
            acc_c += vc;
            acc_a += af;
            fine[i] = acc_f;
            coarse[i] = acc_c;
            abs_fine[i] = acc_a;
            prev = s[i];
        }
    }
    let quadrature_change = (0..s.len())
        .map(|i| {
            (fine[i] - coarse[i]).abs() / fine[i].abs().max(abs_fine[i]).max(f64::MIN_POSITIVE)
        })
        .fold(0.0_f64, f64::max);
    let nm1 = (n - 1) as f64;
    let u: Vec<f64> = (0..s.len()).map(|i| psi[i].ln() + fine[i] / nm1).collect();

    // off-table radii: midpoints in log r
    let checks = log_grid(r_near, r_far, RESIDUAL_CHECKS + 1)?;
    let (mut x_residual, mut x_residual_rel) = (0.0_f64, 0.0_f64);
    for w in checks.windows(2) {
        let rc = (w[0] * w[1]).sqrt();
        let f = profile.frame_at(rc)?;
        let x = (f.scal_dr + e.psi(f.scal.clamp(s_min, s_max))? * f.fp).abs();
        x_residual = x_residual.max(x);
        x_residual_rel = x_residual_rel.max(x / f.scal_dr.abs());
    }
    Ok(PsiTable {
        n,
        s,
        r,
        psi,
        u,
        x_residual,
        x_residual_rel,
        quadrature_change,
        s_min,
        s_max,
    })
}
