use proptest::prelude::*;
use soliton_lab::bryant::{solve_bryant, RadialProfile};
use soliton_lab::exact::cigar_frame;
use soliton_lab::geometry::{
    curvature_from_point, divergence_radial, laplacian_radial, rescale_metric, GeometryFrame,
    RadialPoint,
};
use soliton_lab::identity::{d_tensor_norm_sq, evaluate_frame, Identity};
use soliton_lab::model::{Cigar, SolitonModel};
use soliton_lab::numerics::log_grid;
use soliton_lab::probe::Margin;
use std::sync::OnceLock;

fn profiles() -> &'static [RadialProfile] {
    static P: OnceLock<Vec<RadialProfile>> = OnceLock::new();
    P.get_or_init(|| {
        (3..=6)
            .map(|n| solve_bryant(n, 100.0, 1e-10).unwrap())
            .collect()
    })
}

fn trace_gap(f: &GeometryFrame) -> f64 {
    let m = f.warped_dim();
    let trace = f.ric_rad + f.tan_multiplicity() * f.ric_tan;
    // flat directions contribute nothing; a 2-dimensional warped factor has one Ricci eigenvalue
    let trace = if m == 2 { 2.0 * f.ric_rad } else { trace };
    (trace - f.scal).abs() / f.scal.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ricci_trace_is_scalar_curvature(idx in 0usize..4, r in 1e-3f64..99.0) {
        let f = profiles()[idx].frame_at(r).unwrap();
        prop_assert!(trace_gap(&f) <= 1e-12);
        prop_assert!(f.ric_norm_sq >= f.scal * f.scal / f.n as f64 * (1.0 - 1e-12));
    }

    #[test]
    fn cigar_product_trace(rho in 0.0f64..1e3, k in 0usize..4) {
        let f = cigar_frame(rho, k).unwrap().frame;
        prop_assert!(trace_gap(&f) <= 1e-14);
    }

    #[test]
    fn d_tensor_norm_is_nonnegative(
        n in 3usize..9,
        w in 0.01f64..10.0,
        wp in -1.0f64..1.5,
        fp in -2.0f64..2.0,
        fpp in -2.0f64..2.0,
        wpp in -3.0f64..3.0,
    ) {
        let p = RadialPoint::new(1.0, w, wp, fp, n).unwrap();
        let f = curvature_from_point(&p, wpp, fpp).unwrap();
        prop_assert!(d_tensor_norm_sq(&f).unwrap() >= 0.0);
    }

    #[test]
    fn laplacian_is_divergence_of_gradient(idx in 0usize..4, r in 0.05f64..90.0) {
        let p = &profiles()[idx];
        let m = (p.n() - 1) as i32;
        // w^{n-1} R' is the flux density of ∇R through the level sphere
        let flux = |x: f64| {
            let f = p.frame_at(x).unwrap();
            f.w.powi(m) * f.scal_dr
        };
        let h = 1e-3 * r;
        let d = (8.0 * (flux(r + h) - flux(r - h)) - (flux(r + 2.0 * h) - flux(r - 2.0 * h))) / (12.0 * h);
        let f = p.frame_at(r).unwrap();
        let div = d / f.w.powi(m);
        let scale = f.scal_lap.abs().max((f.mean_curvature * f.scal_dr).abs());
        prop_assert!((div - f.scal_lap).abs() <= 1e-6 * scale, "{} vs {}", div, f.scal_lap);
        let pt = RadialPoint::new(r, f.w, p.dense_eval(r).unwrap().wp, f.fp, p.n()).unwrap();
        prop_assert_eq!(
            laplacian_radial(f.scal_dr, f.scal_d2(), &pt).unwrap(),
            divergence_radial(f.scal_dr, f.scal_d2(), &pt).unwrap()
        );
    }

    #[test]
    fn relative_residuals_are_scale_invariant(idx in 0usize..4, r in 0.05f64..50.0, lambda in 0.1f64..10.0) {
        let p = &profiles()[idx];
        let f = p.frame_at(r).unwrap();
        let g = rescale_metric(&f, lambda).unwrap();
        let a = evaluate_frame(&f, p.c0(), p.switch_radius()).unwrap();
        let b = evaluate_frame(&g, p.c0() / lambda, p.switch_radius()).unwrap();
        for id in Identity::ALL {
            let (x, y) = (a.get(id).rel(), b.get(id).rel());
            prop_assert!((x - y).abs() <= 1e-12, "{}: {} vs {}", id, x, y);
        }
    }

    #[test]
    fn log_grid_is_increasing_with_exact_ends(lo in 1e-6f64..1.0, span in 1.5f64..1e6, count in 2usize..300) {
        let hi = lo * span;
        let g = log_grid(lo, hi, count).unwrap();
        prop_assert_eq!(g.len(), count);
        prop_assert_eq!(g[0], lo);
        prop_assert_eq!(g[count - 1], hi);
        prop_assert!(g.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn kato_holds_on_generated_solitons(idx in 0usize..4, r in 1e-3f64..99.0, k in 0usize..3, s in 1e-3f64..30.0) {
        let bryant = profiles()[idx].frame_at(r).unwrap();
        let cigar = Cigar::normalized().with_flat_factor(k).frame_at(s).unwrap();
        for f in [bryant, cigar] {
            if let Some((m, _)) = Margin::Kato.evaluate(&f).unwrap() {
                prop_assert!(m >= -1e-10 * f.ric_norm_sq, "r={}: {}", f.r, m);
            }
        }
    }

    #[test]
    fn normalized_cigar_attains_sigma_equality(s in 0.0f64..40.0) {
        let f = Cigar::normalized().frame_at(s).unwrap();
        let (m, _) = Margin::Sigma.evaluate(&f).unwrap().unwrap();
        prop_assert!(m.abs() <= 1e-12, "{}", m);
    }
}
