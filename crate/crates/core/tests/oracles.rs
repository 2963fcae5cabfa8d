//! Independent oracles: a fixed-step RK4 integration, finite differences,
//! series substitution and quadrature over the sphere. Reference values were
//! produced by the oracles below and are frozen here.

use approx::assert_relative_eq;
use soliton_lab::bryant::{
    series_seed_scaled, solve_bryant, solve_bryant_with, SeriesCoefficients, SolveOptions,
};
use soliton_lab::geometry::{level_set_flux, rescale_metric};
use soliton_lab::identity::lemma24_field;

/// Classical RK4 on `(w, w', f')` from the series seed at `r0`, with steps
/// capped at `1e-4` and `r/100`.
fn rk4_to(n: usize, r_end: f64) -> [f64; 3] {
    let nf = n as f64;
    let rhs = |y: [f64; 3]| {
        let [w, wp, fp] = y;
        let wpp = (nf - 2.0) * (1.0 - wp * wp) / w - fp * wp;
        [wp, wpp, -(nf - 1.0) * wpp / w]
    };
    let r0 = 1e-3;
    let s = series_seed_scaled(n, 1.0, r0, r0).unwrap();
    let mut y = [s.w, s.wp, s.fp];
    let mut r = r0;
    while r < r_end {
        let h = (1e-4_f64).min(0.01 * r).min(r_end - r);
        let add =
            |a: [f64; 3], k: [f64; 3], c: f64| [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2]];
        let k1 = rhs(y);
        let k2 = rhs(add(y, k1, h / 2.0));
        let k3 = rhs(add(y, k2, h / 2.0));
        let k4 = rhs(add(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += h;
    }
    y
}

/// `R(1)` for `n = 3` from [`rk4_to`].
const R_AT_1_N3: f64 = 8.980_556_483_149_338e-1;
/// `R'(5)` for `n = 4`, fourth-order central difference with `h = 1e-3`.
const RP_AT_5_N4: f64 = -9.003_400_577_999_958e-2;
/// `ΔR(2)` for `n = 3`: fourth-order `R''` with `h = 0.02` plus `2 w'/w · R'` by differences.
const LAPR_AT_2_N3: f64 = -1.728_778_601_856_087_7e-1;
/// `div Y(3)` for `n = 3`, `Y = R'/f' - 2f'²`, by differences.
const DIVY_AT_3_N3: f64 = -8.393_096_917_227_061e-1;

/// Fourth-order central difference.
fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// Fourth-order central second difference.
fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

#[test]
fn scalar_curvature_matches_rk4() {
    let y = rk4_to(3, 1.0);
    assert_relative_eq!(1.0 - y[2] * y[2], R_AT_1_N3, max_relative = 1e-12);
    let p = solve_bryant(3, 10.0, 1e-10).unwrap();
    let f = p.frame_at(1.0).unwrap();
    assert_relative_eq!(f.scal, R_AT_1_N3, max_relative = 1e-9);
    assert_relative_eq!(f.w, y[0], max_relative = 1e-9);
}

#[test]
fn scalar_derivative_matches_difference() {
    let p = solve_bryant(4, 10.0, 1e-10).unwrap();
    assert_relative_eq!(
        d1(|x| p.frame_at(x).unwrap().scal, 5.0, 1e-3),
        RP_AT_5_N4,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        p.frame_at(5.0).unwrap().scal_dr,
        RP_AT_5_N4,
        max_relative = 1e-8
    );
}

#[test]
fn laplacian_matches_difference() {
    let p = solve_bryant(3, 10.0, 1e-10).unwrap();
    let s = |x: f64| p.frame_at(x).unwrap().scal;
    let w = |x: f64| p.dense_eval(x).unwrap().w;
    let lap = d2(s, 2.0, 2e-2) + 2.0 * d1(w, 2.0, 1e-3) / w(2.0) * d1(s, 2.0, 1e-3);
    assert_relative_eq!(lap, LAPR_AT_2_N3, max_relative = 1e-12);
    assert_relative_eq!(
        p.frame_at(2.0).unwrap().scal_lap,
        LAPR_AT_2_N3,
        max_relative = 1e-8
    );
}

#[test]
fn lemma24_divergence_matches_difference() {
    let p = solve_bryant(3, 10.0, 1e-10).unwrap();
    let y = |x: f64| lemma24_field(&p.frame_at(x).unwrap()).unwrap().0;
    let w = |x: f64| p.dense_eval(x).unwrap().w;
    let div = d1(y, 3.0, 1e-3) + 2.0 * d1(w, 3.0, 1e-3) / w(3.0) * y(3.0);
    assert_relative_eq!(div, DIVY_AT_3_N3, max_relative = 1e-12);
    let f = p.frame_at(3.0).unwrap();
    let (yv, dy) = lemma24_field(&f).unwrap();
    assert_relative_eq!(
        dy + f.mean_curvature * yv,
        DIVY_AT_3_N3,
        max_relative = 1e-9
    );
}

#[test]
fn second_derivatives_match_dense_output() {
    for n in 3..=6 {
        let p = solve_bryant(n, 100.0, 1e-10).unwrap();
        for &r in &[0.01, 0.3, 2.0, 20.0, 80.0] {
            let h = 1e-3 * r;
            let d = p.dense_eval(r).unwrap();
            let wpp = d1(|x| p.dense_eval(x).unwrap().wp, r, h);
            let fpp = d1(|x| p.dense_eval(x).unwrap().fp, r, h);
            assert!(
                (wpp - d.wpp).abs() <= 1e-8,
                "n={n} r={r}: w'' {} vs {wpp}",
                d.wpp
            );
            assert!(
                (fpp - d.fpp).abs() <= 1e-8,
                "n={n} r={r}: f'' {} vs {fpp}",
                d.fpp
            );
        }
    }
}

#[test]
fn series_derivatives_are_consistent() {
    let r = 1e-2;
    let h = 1e-4;
    for n in 3..=8 {
        let at = |x: f64| series_seed_scaled(n, 1.0, x, 1.0).unwrap();
        let s = at(r);
        assert!((d1(|x| at(x).w, r, h) - s.wp).abs() <= 1e-10);
        assert!((d1(|x| at(x).wp, r, h) - s.wpp).abs() <= 1e-10);
        assert!((d1(|x| at(x).fp, r, h) - s.fpp).abs() <= 1e-10);
    }
}

/// Residuals of the two equations after substituting the truncated series.
fn series_residuals(n: usize, c0: f64, r: f64) -> (f64, f64) {
    let nf = n as f64;
    let s = series_seed_scaled(n, c0, r, 1.0).unwrap();
    let e1 = s.wpp - ((nf - 2.0) * (1.0 - s.wp * s.wp) / s.w - s.fp * s.wp);
    let e2 = s.fpp + (nf - 1.0) * s.wpp / s.w;
    (e1, e2)
}

#[test]
fn series_substitution_leaves_only_truncation_order() {
    for n in 3..=8 {
        for &c0 in &[1.0, 2.5] {
            let (a1, a2) = series_residuals(n, c0, 0.1);
            let (b1, b2) = series_residuals(n, c0, 0.05);
            // the w equation is left with O(r⁵); the f equation divides w'' by w
            // and keeps the missing r⁷ term of w at order r⁴
            assert!((a1 / b1 - 32.0).abs() < 2.0, "n={n}: ratio {}", a1 / b1);
            assert!((a2 / b2 - 16.0).abs() < 1.0, "n={n}: ratio {}", a2 / b2);
            assert!(b1.abs() < 1e-7 * c0.powi(3) && b2.abs() < 1e-6 * c0.powi(3));
        }
    }
    let c = SeriesCoefficients::new(3, 1.0);
    assert_eq!(c.b1, 1.0 / 3.0);
    assert_eq!(c.a3, -1.0 / 36.0);
}

#[test]
fn sphere_flux_matches_surface_quadrature() {
    let p = solve_bryant(3, 100.0, 1e-10).unwrap();
    let f = p.frame_at(50.0).unwrap();
    let q = (f.scal_dr + f.scal * f.fp).abs();
    // midpoint rule in θ and φ over the round sphere of radius w
    let (nt, np) = (400, 800);
    let (dt, dp) = (
        std::f64::consts::PI / nt as f64,
        2.0 * std::f64::consts::PI / np as f64,
    );
    let mut sum = 0.0;
    for i in 0..nt {
        let theta = (i as f64 + 0.5) * dt;
        for _ in 0..np {
            sum += q * f.w * f.w * theta.sin() * dt * dp;
        }
    }
    assert_relative_eq!(level_set_flux(q, f.w, 3).unwrap(), sum, max_relative = 2e-5);
}

#[test]
fn scaling_closure() {
    let p1 = solve_bryant(3, 100.0, 1e-10).unwrap();
    for &lambda in &[0.4, 2.5] {
        let opts = SolveOptions {
            c0: lambda,
            ..SolveOptions::default()
        };
        let pc = solve_bryant_with(3, 30.0, 1e-10, &opts).unwrap();
        for &r in &[0.5, 3.0, 20.0] {
            let a = pc.frame_at(r).unwrap();
            let b = rescale_metric(&p1.frame_at(r * lambda.sqrt()).unwrap(), 1.0 / lambda).unwrap();
            assert_relative_eq!(a.r, b.r, max_relative = 1e-14);
            for (x, y) in [
                (a.scal, b.scal),
                (a.fp, b.fp),
                (a.w, b.w),
                (a.scal_dr, b.scal_dr),
                (a.scal_lap, b.scal_lap),
                (a.ric_tan, b.ric_tan),
            ] {
                assert_relative_eq!(x, y, max_relative = 1e-8);
            }
        }
    }
}
