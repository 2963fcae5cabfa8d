//! Taylor data of the regular solution at the origin.
//!
//! Substituting `w = r + a3 r³ + a5 r⁵`, `f' = b1 r + b3 r³ + b5 r⁵` into the
//! reduced equations and matching powers of `r` gives the coefficients below
//! as rational functions of `n`; `b1 = c0/n` fixes `R(0) = c0`. A coefficient
//! of `r^{2k+1}` carries `c0^k` in `w` and `c0^{k+1}` in `f'`.

use crate::error::{Error, Result};
use crate::geometry::GeometryFrame;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    pub a3: f64,
    pub a5: f64,
    pub b1: f64,
    pub b3: f64,
    pub b5: f64,
}

impl SeriesCoefficients {
    pub fn new(n: usize, c0: f64) -> Self {
        let nf = n as f64;
        let nm1 = nf - 1.0;
        let np2 = nf + 2.0;
        let np4 = nf + 4.0;
        Self {
            a3: -c0 / (6.0 * nf * nm1),
            a5: c0 * c0 * (13.0 * nf - 10.0) / (120.0 * nf * nf * nm1 * nm1 * np2),
            b1: c0 / nf,
            b3: -2.0 * c0 * c0 / (3.0 * nf * nf * np2),
            b5: c0 * c0 * c0 * (11.0 * nf - 10.0) / (15.0 * nf * nf * nf * nm1 * np2 * np4),
        }
    }
}

/// `(w, w', f', w'', f'')` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesState {
    pub w: f64,
    pub wp: f64,
    /// `w' - 1`
    pub wp_dev: f64,
    pub fp: f64,
    pub wpp: f64,
    pub fpp: f64,
}

/// Degree-5 Taylor data of the normalized (`c0 = 1`) solution at `r <= switch_radius`.
pub fn series_seed(n: usize, r: f64, switch_radius: f64) -> Result<SeriesState> {
    series_seed_scaled(n, 1.0, r, switch_radius)
}

pub fn series_seed_scaled(n: usize, c0: f64, r: f64, switch_radius: f64) -> Result<SeriesState> {
    if n < 3 {
        return Err(Error::Dimension { n, min: 3 });
    }
    if !(0.0..=switch_radius).contains(&r) {
        return Err(Error::Range {
            r,
            lo: 0.0,
            hi: switch_radius,
        });
    }
    Ok(eval(&SeriesCoefficients::new(n, c0), r))
}

pub(crate) fn eval(c: &SeriesCoefficients, r: f64) -> SeriesState {
    let r2 = r * r;
    let wp_dev = r2 * (3.0 * c.a3 + 5.0 * c.a5 * r2);
    SeriesState {
        w: r * (1.0 + r2 * (c.a3 + c.a5 * r2)),
        wp: 1.0 + wp_dev,
        wp_dev,
        fp: r * (c.b1 + r2 * (c.b3 + c.b5 * r2)),
        wpp: r * (6.0 * c.a3 + 20.0 * c.a5 * r2),
        fpp: c.b1 + r2 * (3.0 * c.b3 + 5.0 * c.b5 * r2),
    }
}

/// Geometry frame built from the series without dividing by `w`, valid down to `r = 0`.
pub(crate) fn frame(n: usize, c: &SeriesCoefficients, r: f64) -> GeometryFrame {
    let r2 = r * r;
    let s = eval(c, r);
    // w = r·u, f' = r·v, w' - 1 = r²·e
    let u = 1.0 + r2 * (c.a3 + c.a5 * r2);
    let v = c.b1 + r2 * (c.b3 + c.b5 * r2);
    let e = 3.0 * c.a3 + 5.0 * c.a5 * r2;
    let k_rad = -(6.0 * c.a3 + 20.0 * c.a5 * r2) / u;
    let k_tan = -e * (2.0 + r2 * e) / (u * u);
    let nm1 = (n - 1) as f64;
    let mean_curvature = if r > 0.0 {
        nm1 * s.wp / s.w
    } else {
        f64::INFINITY
    };
    let mut f =
        GeometryFrame::from_sectional(r, n, 0, s.w, mean_curvature, s.fp, s.fpp, k_rad, k_tan);
    f.hess_f_tan = v * s.wp / u;
    let fppp = r * (6.0 * c.b3 + 20.0 * c.b5 * r2);
    f.scal_dr = -2.0 * s.fpp * s.fp;
    let scal_d2 = -2.0 * (fppp * s.fp + s.fpp * s.fpp);
    // H·R' = (n-1) w' (-2 f'') (f'/w)
    f.scal_lap = scal_d2 + nm1 * s.wp * (-2.0 * s.fpp) * (v / u);
    f
}
