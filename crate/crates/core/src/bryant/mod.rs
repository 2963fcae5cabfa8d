//! The Bryant soliton: rotationally symmetric steady gradient soliton on `ℝⁿ`, `n >= 3`.
//!
//! With `g = dr² + w(r)² g_{S^{n-1}}` and a radial potential, `Ric = Hess f`
//! reduces to
//!
//! ```text
//! w'' = (n-2)(1 - w'²)/w - f' w'      (tangential directions)
//! f'' = -(n-1) w''/w                  (radial direction)
//! ```
//!
//! The regular solution is seeded from its Taylor series at `r = switch_radius`
//! and integrated outward with an adaptive Dormand–Prince 5(4) scheme. The
//! potential is taken increasing outward (`f' >= 0`).

mod series;
mod stepper;

pub use series::{series_seed, series_seed_scaled, SeriesCoefficients, SeriesState};

use crate::error::{Error, Result};
use crate::geometry::{
    laplacian_radial, unit_sphere_volume, GeometryFrame, RadialPoint, DEFAULT_SWITCH_RADIUS,
};
use crate::numerics::interp::{hermite, locate};
use crate::numerics::quadrature::integrate;
use stepper::{dopri5, State};

/// `(w', w'', f'')` for the state `(w, w', f')`.
pub fn soliton_rhs(state: [f64; 3], n: usize) -> Result<[f64; 3]> {
    let [w, wp, fp] = state;
    if n < 3 {
        return Err(Error::Dimension { n, min: 3 });
    }
    if !(w > 0.0) {
        return Err(Error::Domain(format!(
            "w = {w} <= 0: inside the origin chart, use the series seed"
        )));
    }
    let wpp = (n - 2) as f64 * (1.0 - wp * wp) / w - fp * wp;
    let fpp = -((n - 1) as f64) * wpp / w;
    Ok([wp, wpp, fpp])
}

/// Right-hand side in the integration variables `(w, w' - 1, f')`.
///
/// Carrying `w' - 1` keeps `1 - w'² = -(w'-1)(w'+1)` free of cancellation
/// near the origin, where it is divided by `w²`.
fn rhs_dev(y: &State, n: usize) -> Result<State> {
    let [w, v, fp] = *y;
    if !(w > 0.0) {
        return Err(Error::Domain(format!(
            "w = {w} <= 0: inside the origin chart, use the series seed"
        )));
    }
    let one_minus_wp2 = -v * (2.0 + v);
    let wpp = (n - 2) as f64 * one_minus_wp2 / w - fp * (1.0 + v);
    let fpp = -((n - 1) as f64) * wpp / w;
    Ok([1.0 + v, wpp, fpp])
}

/// `(w''', f''')` by differentiating the right-hand side along the flow.
fn third_derivatives(s: &DenseState, n: usize) -> (f64, f64) {
    let nm2 = (n - 2) as f64;
    let nm1 = (n - 1) as f64;
    let one_minus_wp2 = -s.wp_dev * (2.0 + s.wp_dev);
    let wppp = nm2 * (-2.0 * s.wp * s.wpp / s.w - one_minus_wp2 * s.wp / (s.w * s.w))
        - s.fpp * s.wp
        - s.fp * s.wpp;
    let fppp = -nm1 * (wppp / s.w - s.wpp * s.wp / (s.w * s.w));
    (wppp, fppp)
}

/// Continuous solution data at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseState {
    pub w: f64,
    pub wp: f64,
    /// `w' - 1`, carried separately to full relative precision.
    pub wp_dev: f64,
    pub fp: f64,
    pub wpp: f64,
    pub fpp: f64,
}

impl From<SeriesState> for DenseState {
    fn from(s: SeriesState) -> Self {
        Self {
            w: s.w,
            wp: s.wp,
            wp_dev: s.wp_dev,
            fp: s.fp,
            wpp: s.wpp,
            fpp: s.fpp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// First-integral constant `R + |∇f|²`; 1 is the normalized soliton.
    pub c0: f64,
    pub switch_radius: f64,
    /// Upper bound on `h / r`. Bounds the cubic dense-output error and keeps the
    /// `1/w` terms near the origin resolved.
    pub max_step_fraction: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            c0: 1.0,
            switch_radius: DEFAULT_SWITCH_RADIUS,
            max_step_fraction: 2.5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// `max |R + f'² - c0|` over the grid.
    pub conservation_drift: f64,
}

/// Computed Bryant profile with a dense evaluator on `[0, r_max]`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    n: usize,
    c0: f64,
    tol: f64,
    switch_radius: f64,
    r_max: f64,
    coeffs: SeriesCoefficients,
    grid: Vec<f64>,
    states: Vec<State>,
    slopes: Vec<State>,
    cum_volume: Vec<f64>,
    stats: SolveStats,
}

/// Normalized Bryant profile (`c0 = 1`) on `[0, r_max]`.
pub fn solve_bryant(n: usize, r_max: f64, tol: f64) -> Result<RadialProfile> {
    solve_bryant_with(n, r_max, tol, &SolveOptions::default())
}

pub fn solve_bryant_with(
    n: usize,
    r_max: f64,
    tol: f64,
    opts: &SolveOptions,
) -> Result<RadialProfile> {
    if n < 3 {
        return Err(Error::Dimension { n, min: 3 });
    }
    let r0 = opts.switch_radius;
    if !(r0 > 0.0 && r0 <= 0.05) {
        return Err(Error::InvalidParameter(format!(
            "switch radius {r0} outside (0, 0.05]"
        )));
    }
    if !(r_max > r0 && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "r_max = {r_max} must exceed the switch radius {r0}"
        )));
    }
    if !(1e-14..=1e-4).contains(&tol) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol:e} outside [1e-14, 1e-4]"
        )));
    }
    if !(opts.c0 > 0.0 && opts.c0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "c0 = {} must be positive",
            opts.c0
        )));
    }
    if !(opts.max_step_fraction > 0.0 && opts.max_step_fraction <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "max step fraction {} outside (0, 0.1]",
            opts.max_step_fraction
        )));
    }

    let coeffs = SeriesCoefficients::new(n, opts.c0);
    let rhs = |_r: f64, y: &State| rhs_dev(y, n);
    let origin = series::eval(&coeffs, 0.0);
    let seed = series::eval(&coeffs, r0);

    let mut grid = vec![0.0, r0];
    let mut states = vec![
        [origin.w, origin.wp_dev, origin.fp],
        [seed.w, seed.wp_dev, seed.fp],
    ];
    let mut slopes = vec![[origin.wp, origin.wpp, origin.fpp]];
    let k0 = rhs(r0, &states[1])?;
    slopes.push(k0);

    let sqrt_c0 = opts.c0.sqrt();
    let slack = 100.0 * tol;
    let mut stats = SolveStats {
        accepted_steps: 0,
        rejected_steps: 0,
        rhs_evaluations: 1,
        conservation_drift: 0.0,
    };
    let mut r = r0;
    let mut y = states[1];
    let mut k1 = k0;
    let mut h = r0;
    while r < r_max {
        let h_cap = opts.max_step_fraction * r;
        h = h.min(h_cap);
        let last = r + h >= r_max * (1.0 - 4.0 * f64::EPSILON);
        if last {
            h = r_max - r;
        }
        if h <= 1e-14 * r.max(1.0) {
            return Err(Error::IntegrationStall {
                last_good_r: r,
                step: h,
            });
        }
        let step = dopri5(&rhs, r, &y, &k1, h)?;
        stats.rhs_evaluations += 6;
        let err = (0..3)
            .map(|i| step.err[i].abs() / (tol * (1.0 + y[i].abs().max(step.y[i].abs()))))
            .fold(0.0_f64, f64::max);
        if !err.is_finite() {
            return Err(Error::IntegrationStall {
                last_good_r: r,
                step: h,
            });
        }
        if err <= 1.0 {
            r = if last { r_max } else { r + h };
            y = step.y;
            k1 = step.dy;
            stats.accepted_steps += 1;
            let [_, v, fp] = y;
            let wp = 1.0 + v;
            if !(wp > 0.0 && wp <= 1.0 + slack) {
                return Err(Error::Monotonicity {
                    r,
                    what: format!("w' = {wp} left (0, 1]"),
                });
            }
            if !(fp >= 0.0 && fp < sqrt_c0 * (1.0 + slack)) {
                return Err(Error::Monotonicity {
                    r,
                    what: format!("f' = {fp} left [0, {sqrt_c0})"),
                });
            }
            grid.push(r);
            states.push(y);
            slopes.push(k1);
            h *= (0.9 * err.powf(-0.2)).min(5.0);
        } else {
            stats.rejected_steps += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }

    let mut profile = RadialProfile {
        n,
        c0: opts.c0,
        tol,
        switch_radius: r0,
        r_max,
        coeffs,
        grid,
        states,
        slopes,
        cum_volume: Vec::new(),
        stats,
    };
    profile.stats.conservation_drift = profile
        .grid
        .iter()
        .map(|&r| {
            profile
                .frame_at(r)
                .map(|f| (f.first_integral() - profile.c0).abs())
        })
        .try_fold(0.0_f64, |a, d| d.map(|d| a.max(d)))?;
    profile.cum_volume = profile.cumulative_volume()?;
    Ok(profile)
}

impl RadialProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn switch_radius(&self) -> f64 {
        self.switch_radius
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    /// Radii of the origin, the series handoff and every accepted step.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn w(&self) -> Vec<f64> {
        self.states.iter().map(|s| s[0]).collect()
    }

    pub fn wp(&self) -> Vec<f64> {
        self.states.iter().map(|s| 1.0 + s[1]).collect()
    }

    pub fn fp(&self) -> Vec<f64> {
        self.states.iter().map(|s| s[2]).collect()
    }

    fn check_range(&self, r: f64) -> Result<()> {
        if !(0.0..=self.r_max).contains(&r) {
            return Err(Error::Range {
                r,
                lo: 0.0,
                hi: self.r_max,
            });
        }
        Ok(())
    }

    /// `(w, w', f', w'', f'')` at any `r` in `[0, r_max]`.
    ///
    /// Below the switch radius this is the series; above it, a cubic Hermite
    /// interpolant of `(w, w', f')` between accepted steps with the second
    /// derivatives taken from [`soliton_rhs`].
    pub fn dense_eval(&self, r: f64) -> Result<DenseState> {
        self.check_range(r)?;
        if r < self.switch_radius {
            return Ok(series::eval(&self.coeffs, r).into());
        }
        let nodes = &self.grid[1..];
        let i = locate(nodes, r) + 1;
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let mut y = [0.0; 3];
        for (c, yc) in y.iter_mut().enumerate() {
            *yc = hermite(
                x0,
                x1,
                self.states[i][c],
                self.states[i + 1][c],
                self.slopes[i][c],
                self.slopes[i + 1][c],
                r,
            )
            .0;
        }
        let [wp, wpp, fpp] = rhs_dev(&y, self.n)?;
        Ok(DenseState {
            w: y[0],
            wp,
            wp_dev: y[1],
            fp: y[2],
            wpp,
            fpp,
        })
    }

    /// Full geometry at `r`, with `R' = -2 f'' f'` and `ΔR` from the analytic `R''`.
    pub fn frame_at(&self, r: f64) -> Result<GeometryFrame> {
        self.check_range(r)?;
        if r < self.switch_radius {
            return Ok(series::frame(self.n, &self.coeffs, r));
        }
        let s = self.dense_eval(r)?;
        let p =
            RadialPoint::new(r, s.w, s.wp, s.fp, self.n)?.with_switch_radius(self.switch_radius);
        let k_rad = -s.wpp / s.w;
        let k_tan = -s.wp_dev * (2.0 + s.wp_dev) / (s.w * s.w);
        let mut frame = GeometryFrame::from_sectional(
            r,
            self.n,
            0,
            s.w,
            p.mean_curvature()?,
            s.fp,
            s.fpp,
            k_rad,
            k_tan,
        );
        let (_, fppp) = third_derivatives(&s, self.n);
        let scal_dr = -2.0 * s.fpp * s.fp;
        let scal_d2 = -2.0 * (fppp * s.fp + s.fpp * s.fpp);
        frame.scal_dr = scal_dr;
        frame.scal_lap = laplacian_radial(scal_dr, scal_d2, &p)?;
        Ok(frame)
    }

    fn cumulative_volume(&self) -> Result<Vec<f64>> {
        let omega = unit_sphere_volume(self.n - 1);
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.grid.len());
        out.push(0.0);
        for seg in self.grid.windows(2) {
            acc += self.segment_volume(seg[0], seg[1], omega)?;
            out.push(acc);
        }
        Ok(out)
    }

    fn segment_volume(&self, a: f64, b: f64, omega: f64) -> Result<f64> {
        let e = self.n as i32 - 1;
        let q = integrate(|r| Ok(omega * self.dense_eval(r)?.w.powi(e)), a, b, 1e-13)?;
        Ok(q.value)
    }

    /// Volume of the geodesic ball of radius `r` about the origin.
    pub fn volume(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        let i = locate(&self.grid, r);
        let omega = unit_sphere_volume(self.n - 1);
        Ok(self.cum_volume[i] + self.segment_volume(self.grid[i], r, omega)?)
    }
}
