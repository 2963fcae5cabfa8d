//! Small numerical building blocks shared by the solver and the probes.

pub mod fit;
pub mod interp;
pub mod quadrature;

use crate::error::{Error, Result};

/// `count` points spaced evenly in `log r` from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || count < 2 {
        return Err(Error::InvalidParameter(format!(
            "log grid [{lo}, {hi}] with {count} points"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|i| (a + step * i as f64).exp()).collect();
    out[0] = lo;
    out[count - 1] = hi;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.1, 100.0, 4).unwrap();
        assert_eq!(g[0], 0.1);
        assert_eq!(g[3], 100.0);
        assert!((g[1] - 1.0).abs() < 1e-14 && (g[2] - 10.0).abs() < 1e-13);
        assert!(log_grid(0.0, 1.0, 4).is_err());
        assert!(log_grid(1.0, 2.0, 1).is_err());
    }
}
