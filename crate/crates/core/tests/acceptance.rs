//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::path::Path;
use std::process::Command;

use soliton_lab::bryant::{solve_bryant, RadialProfile};
use soliton_lab::exact::{cigar_frame, cigar_frame_at_distance, FlatPotential};
use soliton_lab::identity::{verify_profile, Identity};
use soliton_lab::model::{Cigar, FlatSoliton, SolitonModel};
use soliton_lab::numerics::fit::power_law_fit;
use soliton_lab::numerics::log_grid;
use soliton_lab::probe::{
    decay_classifier, flux_series, pinching_profile, reconstruct_psi, sigma_constant, DecayClass,
    FluxIntegrand, Margin, PsiEvaluator,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn bryant(n: usize) -> RadialProfile {
    solve_bryant(n, 100.0, 1e-10).expect("bryant solve")
}

fn cigar_ground_truth() -> Check {
    let mut rho = vec![0.0];
    rho.extend(log_grid(1e-6, 1e4, 401).unwrap());
    let sigma2 = sigma_constant(2).unwrap();
    let (mut fi, mut grad, mut ric, mut sig) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for &p in &rho {
        let f = cigar_frame(p, 0).unwrap().frame;
        fi = fi.max((f.first_integral() - 4.0).abs());
        let rel = |a: f64, b: f64| {
            if a == b {
                0.0
            } else {
                (a - b).abs() / a.abs().max(b.abs())
            }
        };
        grad = grad.max(rel(f.scal * f.grad_f_norm, f.scal_dr.abs()));
        ric = ric.max(rel(f.ric_norm_sq, 0.5 * f.scal * f.scal));
        let g = cigar_frame_at_distance(2.0 * p.asinh(), 0, 4.0).unwrap();
        sig = sig.max(rel(sigma2 * g.scal * g.grad_f_norm, g.scal_dr.abs()));
    }
    let msg = format!(
        "|R+|∇f|²-4| {fi:.1e}, R|∇f| vs |∇R| {grad:.1e}, |Ric|² vs R²/2 {ric:.1e}, σ(2)R|∇f| vs |∇R| {sig:.1e}"
    );
    ensure(
        fi <= 1e-12 && grad <= 1e-12 && ric <= 1e-12 && sig <= 1e-12,
        msg,
    )
}

fn sigma_values() -> Check {
    let s2 = sigma_constant(2).unwrap();
    let s3 = sigma_constant(3).unwrap();
    let bound = (1.0 + 7.0_f64.sqrt()) / 3.0;
    let seq: Vec<f64> = (2..=100).map(|n| sigma_constant(n).unwrap()).collect();
    let monotone = seq.windows(2).all(|p| p[1] > p[0]);
    let bounded = seq.iter().all(|&s| s <= bound);
    let msg = format!("σ(2) = {s2}, σ(3) = {s3:.17}, monotone {monotone}, bounded {bounded}");
    ensure(
        (s2 - 1.0).abs() <= 1e-15 && (s3 - 8.0 / 7.0).abs() <= 1e-15 && monotone && bounded,
        msg,
    )
}

/// Fourth-order central difference of `R`.
fn fd_scal_dr(p: &RadialProfile, r: f64, h: f64) -> f64 {
    let s = |x: f64| p.frame_at(x).unwrap().scal;
    (8.0 * (s(r + h) - s(r - h)) - (s(r + 2.0 * h) - s(r - 2.0 * h))) / (12.0 * h)
}

fn bryant_construction() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 3..=6 {
        let p = bryant(n);
        let drift = p.stats().conservation_drift;
        let mut fd = 0.0_f64;
        for &r in &log_grid(0.05, 95.0, 40).unwrap() {
            let exact = p.frame_at(r).unwrap().scal_dr;
            fd = fd.max((fd_scal_dr(&p, r, 1e-2 * r) - exact).abs() / exact.abs());
        }
        let v = verify_profile(&p, p.grid()).unwrap();
        let rel = |id| v.summary_of(id).max_rel;
        let (d, l23, l24, b) = (
            rel(Identity::DTensorNorm),
            rel(Identity::Lemma23),
            rel(Identity::Lemma24),
            rel(Identity::BianchiTraced),
        );
        ok &= drift <= 1e-8 && fd <= 1e-6 && d <= 1e-8 && l23 <= 1e-6 && l24 <= 1e-5 && b <= 1e-6;
        lines.push(format!(
            "n={n}: drift {drift:.1e}, FD R' {fd:.1e}, D {d:.1e}, lemma23 {l23:.1e}, lemma24 {l24:.1e}, Bianchi {b:.1e}"
        ));
    }
    ensure(ok, lines.join("; "))
}

fn bryant_asymptotics() -> Check {
    let p = bryant(3);
    let radii = log_grid(10.0, 100.0, 61).unwrap();
    let scal: Vec<f64> = radii.iter().map(|&r| p.frame_at(r).unwrap().scal).collect();
    let vol: Vec<f64> = radii.iter().map(|&r| p.volume(r).unwrap()).collect();
    let re = power_law_fit(&radii, &scal).unwrap().slope;
    let ve = power_law_fit(&radii, &vol).unwrap().slope;
    let gap = 1.0 - p.frame_at(100.0).unwrap().grad_f_norm;
    let msg = format!("R exponent {re:.4}, volume exponent {ve:.4}, 1-|∇f|(100) {gap:.4}");
    ensure(
        (re + 1.0).abs() <= 0.05 && (ve - 2.0).abs() <= 0.05 && (0.0..=0.05).contains(&gap),
        msg,
    )
}

fn psi_reconstruction() -> Check {
    let p = bryant(3);
    let t = reconstruct_psi(&p, 200).unwrap();
    let e = PsiEvaluator::new(&p).unwrap();
    let (psi, u) = (e.psi(0.5).unwrap(), e.u(0.5).unwrap());
    let msg = format!(
        "X residual {:.1e}, u(1/2) - log ψ(1/2) = {:e}, quadrature change {:.1e}",
        t.x_residual_rel,
        u - psi.ln(),
        t.quadrature_change
    );
    ensure(
        t.x_residual_rel <= 1e-6 && u == psi.ln() && t.quadrature_change <= 1e-10,
        msg,
    )
}

fn kato_and_ricci_bounds() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 3..=6 {
        let p = bryant(n);
        let radii = log_grid(1e-2, 100.0, 300).unwrap();
        let pin = pinching_profile(&p, &radii).unwrap();
        let (mut kato, mut ricci) = (f64::INFINITY, f64::INFINITY);
        for (i, &r) in radii.iter().enumerate() {
            let ric_sq = p.frame_at(r).unwrap().ric_norm_sq;
            let k = pin.margin(Margin::Kato)[i];
            if !k.is_nan() {
                kato = kato.min(k + 1e-10 * ric_sq);
            }
            ricci = ricci.min(pin.margin(Margin::RicciBound)[i] + 1e-10);
        }
        ok &= kato >= 0.0 && ricci >= 0.0;
        lines.push(format!(
            "n={n}: min Kato slack {kato:.1e}, min Ricci slack {ricci:.1e}"
        ));
    }
    ensure(ok, lines.join("; "))
}

fn decay_classes() -> Check {
    let p = bryant(3);
    let radii = log_grid(10.0, 100.0, 61).unwrap();
    let rm: Vec<f64> = radii
        .iter()
        .map(|&r| p.frame_at(r).unwrap().rm_norm)
        .collect();
    let b = decay_classifier(&radii, &rm, 3).unwrap();
    let cigar = Cigar::standard();
    let scal: Vec<f64> = radii
        .iter()
        .map(|&s| cigar.frame_at(s).unwrap().scal)
        .collect();
    let c = decay_classifier(&radii, &scal, 2).unwrap();
    let msg = format!(
        "Bryant |Rm| {} exponent {:.4}; cigar R {} rate {:.4}",
        b.class.name(),
        b.power.slope,
        c.class.name(),
        c.exponential.slope
    );
    ensure(
        b.class == DecayClass::Linear
            && (b.power.slope + 1.0).abs() <= 0.1
            && c.class == DecayClass::Exponential
            && (c.exponential.slope + 2.0).abs() <= 0.05,
        msg,
    )
}

fn flat_suite() -> Check {
    let radii = log_grid(1e-3, 100.0, 50).unwrap();
    let mut ok = true;
    let mut worst = 0.0_f64;
    for n in 3..=6 {
        for potential in [FlatPotential::Constant, FlatPotential::Linear] {
            let m = FlatSoliton { n, potential };
            let mut grid = vec![0.0];
            grid.extend(&radii);
            let v = verify_profile(&m, &grid).unwrap();
            for s in &v.summary {
                worst = worst.max(s.max_abs);
                ok &= s.max_abs == 0.0;
            }
            let f = flux_series(&m, FluxIntegrand::GradRPlusRGradF, &radii).unwrap();
            ok &= f.identically_zero();
        }
    }
    ensure(
        ok,
        format!("largest residual {worst:e}; ∇R + R∇f flux identically zero"),
    )
}

fn run_twice(args: &[&str], files: &[&str]) -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_soliton-lab");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let st = Command::new(bin)
            .args(args)
            .arg("--out")
            .arg(d.path())
            .output()
            .unwrap();
        if !st.status.success() {
            return Err(format!(
                "{args:?} failed: {}",
                String::from_utf8_lossy(&st.stderr)
            ));
        }
    }
    for f in files {
        let read = |d: &Path| std::fs::read(d.join(f)).map_err(|e| format!("{f}: {e}"));
        if read(dirs[0].path())? != read(dirs[1].path())? {
            return Err(format!("{f} differs between runs"));
        }
    }
    Ok(())
}

fn determinism() -> Check {
    let cases: [(&[&str], &[&str]); 5] = [
        (
            &["bryant", "--dim", "4", "--format", "csv,json,svg"],
            &["bryant_n4.csv", "bryant_n4.json", "bryant_n4.svg"],
        ),
        (
            &["cigar", "--normalized"],
            &["cigar_k0_normalized.csv", "cigar_k0_normalized.json"],
        ),
        (
            &["probe", "psi", "--dim", "3"],
            &["probe_psi_n3.csv", "probe_psi_n3.json"],
        ),
        (
            &["probe", "pinch", "--dim", "3", "--format", "csv,json,svg"],
            &["probe_pinch_bryant_n3.csv", "probe_pinch_bryant_n3.json"],
        ),
        (
            &["probe", "decay", "--source", "cigar"],
            &["probe_decay_cigar_n2.csv", "probe_decay_cigar_n2.json"],
        ),
    ];
    for (args, files) in cases {
        run_twice(args, files)?;
    }
    Ok("bryant, cigar, psi, pinch and decay outputs byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("cigar ground truth", cigar_ground_truth),
        ("sigma constant", sigma_values),
        ("Bryant construction n=3..6", bryant_construction),
        ("Bryant asymptotics n=3", bryant_asymptotics),
        ("psi/u reconstruction n=3", psi_reconstruction),
        ("Kato and Ricci bounds on Bryant", kato_and_ricci_bounds),
        ("decay classifier", decay_classes),
        ("flat solitons", flat_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("PASS {}. {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
