//! Gauss-Legendre rules and a globally adaptive Gauss-Kronrod 7-15 integrator.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::green::C64;

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A fixed Gauss-Legendre rule applied on equal panels.
#[derive(Clone, Debug)]
pub struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(points: usize) -> Self {
        let (nodes, weights) = gauss_legendre(points);
        PanelRule { nodes, weights }
    }

    /// `int_a^b f` over `panels` equal sub-intervals.
    pub fn integrate(&self, f: impl Fn(f64) -> C64, a: f64, b: f64, panels: usize) -> C64 {
        let h = (b - a) / panels as f64;
        let mut sum = C64::new(0.0, 0.0);
        for p in 0..panels {
            let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                sum += w * half * f(mid + half * x);
            }
        }
        sum
    }

    /// Sample points and weights for `panels` panels on `[a, b]`.
    pub fn points(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + h / 2.0 * x, w * h / 2.0));
            }
        }
        out
    }
}

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
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let (f1, f2) = (f(c - h * XGK[j]), f(c + h * XGK[j]));
        k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive GK15: always bisects the piece with the largest error
/// estimate until the total is below `abs_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<Estimate> {
    const MAX_PIECES: usize = 20_000;
    let (value, err) = gk15(&f, a, b);
    let mut heap = BinaryHeap::from([Piece { a, b, value, err }]);
    let mut total_err = err;
    while !(total_err <= abs_tol) {
        if heap.len() >= MAX_PIECES || !total_err.is_finite() {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error {total_err:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) / 2.0;
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_err += e1 + e2 - worst.err;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.err).sum();
    Ok(Estimate { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_are_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn panels_integrate_complex_functions() {
        let rule = PanelRule::new(10);
        let v = rule.integrate(|t| C64::new(0.0, t).exp(), 0.0, PI, 4);
        assert!((v - C64::new(0.0, 2.0)).norm() < 1e-14);
        let pts = rule.points(0.0, 2.0, 3);
        assert_eq!(pts.len(), 30);
        assert!((pts.iter().map(|p| p.1).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks_and_singular_slopes() {
        let r = integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-12).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = integrate(f64::sqrt, 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
        let r = integrate(|x| 1.0 / (1e-4 + (x - 0.3).powi(2)), 0.0, 1.0, 1e-9).unwrap();
        let exact = 100.0 * ((70.0f64).atan() + (30.0f64).atan());
        assert!((r.value - exact).abs() < 1e-8);
    }

    #[test]
    fn non_integrable_input_is_reported() {
        assert!(integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10).is_err());
    }
}
