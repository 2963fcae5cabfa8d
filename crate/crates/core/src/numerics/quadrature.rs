//! Adaptive Gauss–Kronrod (7, 15) quadrature with global bisection.
//!
//! The interval with the largest `|K15 - G7|` is bisected until the sum of
//! those differences falls below `rtol · ∫|f|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum over intervals of `|K15 - G7|`.
    pub error: f64,
    /// Kronrod estimate of `∫|f|`.
    pub abs_value: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).abs();
    if !value.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        abs_value: abs * h.abs(),
    })
}

/// Integrates `f` over `[a, b]` to relative accuracy `rtol`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, rtol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            abs_value: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    if !(rtol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance {rtol}"
        )));
    }
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&mut f, a, b)?);
    let mut evaluations = 15;
    loop {
        let (value, error, abs_value) = heap.iter().fold((0.0, 0.0, 0.0), |(v, e, s), g| {
            (v + g.value, e + g.error, s + g.abs_value)
        });
        let target = rtol * abs_value.max(f64::MIN_POSITIVE);
        let worst = heap.peek().expect("non-empty");
        let unresolvable =
            (worst.b - worst.a).abs() <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if error <= target || unresolvable {
            return Ok(QuadResult {
                value,
                error,
                abs_value,
                intervals: heap.len(),
                evaluations,
            });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "{} intervals, error {error:e} above target {target:e}",
                heap.len()
            )));
        }
        let seg = heap.pop().expect("non-empty");
        let mid = 0.5 * (seg.a + seg.b);
        heap.push(gk15(&mut f, seg.a, mid)?);
        heap.push(gk15(&mut f, mid, seg.b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| Ok(x.powi(5) - 3.0 * x), 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(q.value, 64.0 / 6.0 - 6.0, epsilon = 1e-13);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn peaked_integrand_is_refined() {
        // ∫_0^1 1/(1e-4 + (x - 0.3)²) dx
        let eps: f64 = 1e-4;
        let exact = ((0.7 / eps.sqrt()).atan() + (0.3 / eps.sqrt()).atan()) / eps.sqrt();
        let q = integrate(|x| Ok(1.0 / (eps + (x - 0.3) * (x - 0.3))), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(q.value, exact, max_relative = 1e-11);
        assert!(q.intervals > 1);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let q = integrate(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate(|x: f64| Ok(x.exp()), 1.0, 0.0, 1e-12).unwrap();
        assert_relative_eq!(q.value, 1.0 - 1f64.exp(), epsilon = 1e-14);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|_| Ok(1.0), 0.5, 0.5, 1e-10).unwrap().value, 0.0);
    }
}
