//! Python bindings: Bryant profiles, closed-form solitons, identity checks and probes.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use soliton_lab::bryant::{solve_bryant_with, RadialProfile, SolveOptions};
use soliton_lab::geometry::{GeometryFrame, DEFAULT_SWITCH_RADIUS};
use soliton_lab::identity::verify_profile;
use soliton_lab::model::{Cigar, SolitonModel};
use soliton_lab::probe::{self, PsiEvaluator};
use soliton_lab::Error;

fn to_py(e: Error) -> PyErr {
    match e.root() {
        Error::Dimension { .. }
        | Error::InvalidParameter(_)
        | Error::Range { .. }
        | Error::Parse(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn frame_dict(f: &GeometryFrame) -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("r", f.r),
        ("w", f.w),
        ("fp", f.fp),
        ("R", f.scal),
        ("Rp", f.scal_dr),
        ("lapR", f.scal_lap),
        ("ric_rad", f.ric_rad),
        ("ric_tan", f.ric_tan),
        ("ric_norm_sq", f.ric_norm_sq),
        ("rm_norm", f.rm_norm),
        ("mean_curvature", f.mean_curvature),
    ])
}

/// A computed Bryant soliton.
#[pyclass(frozen)]
struct BryantProfile {
    inner: RadialProfile,
}

#[pymethods]
impl BryantProfile {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.inner.r_max()
    }

    #[getter]
    fn c0(&self) -> f64 {
        self.inner.c0()
    }

    /// `max |R + f'² - c0|` over the grid.
    #[getter]
    fn drift(&self) -> f64 {
        self.inner.stats().conservation_drift
    }

    fn grid(&self) -> Vec<f64> {
        self.inner.grid().to_vec()
    }

    fn w(&self) -> Vec<f64> {
        self.inner.w()
    }

    fn fp(&self) -> Vec<f64> {
        self.inner.fp()
    }

    /// Curvature data at radius `r` as a dict.
    fn frame(&self, r: f64) -> PyResult<BTreeMap<&'static str, f64>> {
        Ok(frame_dict(&self.inner.frame_at(r).map_err(to_py)?))
    }

    /// Volume of the geodesic ball of radius `r`.
    fn volume(&self, r: f64) -> PyResult<f64> {
        self.inner.volume(r).map_err(to_py)
    }

    /// Worst relative residual of each identity over the grid.
    fn verify(&self) -> PyResult<BTreeMap<&'static str, f64>> {
        let v = verify_profile(&self.inner, self.inner.grid()).map_err(to_py)?;
        Ok(v.summary
            .iter()
            .map(|s| (s.identity.name(), s.max_rel))
            .collect())
    }

    /// `ψ(s)` with `∇R = -ψ(R)∇f`.
    fn psi(&self, s: f64) -> PyResult<f64> {
        PsiEvaluator::new(&self.inner)
            .and_then(|e| e.psi(s))
            .map_err(to_py)
    }

    /// `u(s)`, normalized by `u(1/2) = log ψ(1/2)`.
    fn u(&self, s: f64) -> PyResult<f64> {
        PsiEvaluator::new(&self.inner)
            .and_then(|e| e.u(s))
            .map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (n, r_max = 100.0, tol = 1e-10, switch_radius = DEFAULT_SWITCH_RADIUS, c0 = 1.0))]
fn solve_bryant(
    n: usize,
    r_max: f64,
    tol: f64,
    switch_radius: f64,
    c0: f64,
) -> PyResult<BryantProfile> {
    let opts = SolveOptions {
        c0,
        switch_radius,
        ..SolveOptions::default()
    };
    let inner = solve_bryant_with(n, r_max, tol, &opts).map_err(to_py)?;
    Ok(BryantProfile { inner })
}

#[pyfunction]
fn sigma_constant(n: usize) -> PyResult<f64> {
    probe::sigma_constant(n).map_err(to_py)
}

/// Cigar × ℝ^k_extra at geodesic distance `s`.
#[pyfunction]
#[pyo3(signature = (s, k_extra = 0, normalized = true))]
fn cigar_frame(s: f64, k_extra: usize, normalized: bool) -> PyResult<BTreeMap<&'static str, f64>> {
    let c = if normalized {
        Cigar::normalized()
    } else {
        Cigar::standard()
    };
    Ok(frame_dict(
        &c.with_flat_factor(k_extra).frame_at(s).map_err(to_py)?,
    ))
}

/// Classifies samples `v(r)` as power-law (`"linear"`), exponential or neither.
#[pyfunction]
fn classify_decay(r: Vec<f64>, v: Vec<f64>, n: usize) -> PyResult<(String, f64, f64)> {
    let fit = probe::decay_classifier(&r, &v, n).map_err(to_py)?;
    Ok((
        fit.class.name().to_string(),
        fit.power.slope,
        fit.exponential.slope,
    ))
}

#[pymodule]
#[pyo3(name = "soliton_lab")]
fn soliton_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BryantProfile>()?;
    m.add_function(wrap_pyfunction!(solve_bryant, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_constant, m)?)?;
    m.add_function(wrap_pyfunction!(cigar_frame, m)?)?;
    m.add_function(wrap_pyfunction!(classify_decay, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
