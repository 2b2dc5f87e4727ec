//! Saddle points of the Cauchy integrands and their local expansions.
//!
//! Writing `k = xi n`, the integrand `G F^{2k} / z^{n+1}` becomes
//! `(G/z) exp(n Psi(z))` with
//!
//! * `Psi_Y(z) = 2 xi log(1 - s) - (xi + 1) log z`
//! * `Psi_X(z) = 2 xi log(1 + s - sqrt(2) t) - (xi + 1) log z`
//!
//! where `s = sqrt(1 - z)` and `t = sqrt(1 - z + s)`. On `(0, 1)` each has a
//! single minimum `z_o(xi)`, and `phi(xi) = Psi(z_o)` is the exponential rate.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{GreenValues, C64};
use crate::series::Axis;

/// Limit of `-phi_X(xi) / xi^{4/3}` as `xi -> 0`, namely `3 / 2^{2/3}`.
/// Frozen after a limit sweep; see the tests.
pub const PHI_X_SMALL_XI: f64 = 1.889_881_574_842_309_7;

fn check_xi(xi: f64) -> Result<()> {
    if xi > 0.0 && xi < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("xi must lie in (0, 1), got {xi}")))
    }
}

fn point(z: C64) -> Result<GreenValues> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("Psi is singular at z = 0".into()));
    }
    GreenValues::at(z, false)
}

pub fn psi_y(z: C64, xi: f64) -> Result<C64> {
    let p = point(z)?;
    // 1 - s = z / (1 + s) without cancellation
    let one_minus_s = z / (1.0 + p.s);
    Ok(2.0 * xi * one_minus_s.ln() - (xi + 1.0) * z.ln())
}

pub fn psi_x(z: C64, xi: f64) -> Result<C64> {
    let p = point(z)?;
    let e = z / (1.0 + p.s + SQRT_2 * p.t);
    Ok(2.0 * xi * e.ln() - (xi + 1.0) * z.ln())
}

pub fn psi(axis: Axis, z: C64, xi: f64) -> Result<C64> {
    match axis {
        Axis::Y => psi_y(z, xi),
        Axis::X => psi_x(z, xi),
    }
}

/// `dPsi_Y/dz = (xi - s) / (s z)`.
pub fn psi_y_prime(z: C64, xi: f64) -> Result<C64> {
    let p = point(z)?;
    Ok((xi - p.s) / (p.s * z))
}

/// `dPsi_X/dz = (xi - 1)/z - 2 xi B'/B` with `B = 1 + s + sqrt(2) t`.
pub fn psi_x_prime(z: C64, xi: f64) -> Result<C64> {
    let p = point(z)?;
    let ds = -0.5 / p.s;
    let db = ds * (1.0 + SQRT_2 * (2.0 * p.s + 1.0) / (2.0 * p.t));
    let b = 1.0 + p.s + SQRT_2 * p.t;
    Ok((xi - 1.0) / z - 2.0 * xi * db / b)
}

pub fn psi_prime(axis: Axis, z: C64, xi: f64) -> Result<C64> {
    match axis {
        Axis::Y => psi_y_prime(z, xi),
        Axis::X => psi_x_prime(z, xi),
    }
}

/// Derivative of a real-analytic function by the complex step
/// `Im f(x + ih) / h`, free of subtractive cancellation.
pub fn complex_step_derivative(f: impl Fn(C64) -> C64, x: f64) -> f64 {
    let h = 1e-30 * x.abs().max(1.0);
    f(C64::new(x, h)).im / h
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaddleData {
    pub axis: Axis,
    pub xi: f64,
    pub z_o: f64,
    /// `sqrt(1 - z_o)`: equal to `xi` on the y-axis.
    pub u_o: f64,
    /// `sqrt(u_o)`, the saddle in the `v`-plane (x-axis only).
    pub v_o: Option<f64>,
    pub phi: f64,
    pub psi2: f64,
    pub psi3: f64,
}

pub fn phi_y(xi: f64) -> f64 {
    (xi - 1.0) * (-xi).ln_1p() - (xi + 1.0) * xi.ln_1p()
}

pub fn saddle_y(xi: f64) -> Result<SaddleData> {
    check_xi(xi)?;
    let x2 = xi * xi;
    let w = 1.0 - x2;
    Ok(SaddleData {
        axis: Axis::Y,
        xi,
        z_o: w,
        u_o: xi,
        v_o: None,
        phi: phi_y(xi),
        psi2: 1.0 / (2.0 * x2 * w),
        psi3: (3.0 - 7.0 * x2) / (4.0 * x2 * x2 * w * w),
    })
}

/// Cardano root of `2u^3 = xi^2 (1 + u)`, polished by Newton steps.
pub fn u_o_x(xi: f64) -> f64 {
    let a = (54.0 + 6.0 * (81.0 - 6.0 * xi * xi).sqrt()).cbrt();
    let mut u = xi.powf(2.0 / 3.0) * a / 6.0 + xi.powf(4.0 / 3.0) / a;
    for _ in 0..3 {
        let f = 2.0 * u * u * u - xi * xi * (1.0 + u);
        let df = 6.0 * u * u - xi * xi;
        u -= f / df;
    }
    u
}

/// `phi_X` written through `u = u_o`: `(xi-1) log(1-u^2) - 2 xi log(1 + u + sqrt(2 (u^2+u)))`.
fn phi_x_at(xi: f64, u: f64) -> f64 {
    let b = 1.0 + u + SQRT_2 * (u * u + u).sqrt();
    (xi - 1.0) * (-u * u).ln_1p() - 2.0 * xi * b.ln()
}

pub fn phi_x(xi: f64) -> Result<f64> {
    check_xi(xi)?;
    Ok(phi_x_at(xi, u_o_x(xi)))
}

pub fn saddle_x(xi: f64) -> Result<SaddleData> {
    check_xi(xi)?;
    let u = u_o_x(xi);
    let (um, up) = (1.0 - u, 1.0 + u);
    Ok(SaddleData {
        axis: Axis::X,
        xi,
        z_o: 1.0 - u * u,
        u_o: u,
        v_o: Some(u.sqrt()),
        phi: phi_x_at(xi, u),
        psi2: (2.0 * u + 3.0) / (4.0 * u * u * um * up * up),
        psi3: (21.0 + 13.0 * u - 46.0 * u * u - 28.0 * u * u * u) / (16.0 * u.powi(4) * um * um * up.powi(3)),
    })
}

pub fn saddle(axis: Axis, xi: f64) -> Result<SaddleData> {
    match axis {
        Axis::Y => saddle_y(xi),
        Axis::X => saddle_x(xi),
    }
}

/// Expansion of `Psi_Y` along `z = 1 - (xi - i t)^2`.
#[derive(Clone, Copy, Debug)]
pub struct YTaylor {
    pub value: C64,
    /// Coefficient of `t^2`, `-1/(1 - xi^2)`.
    pub quadratic: f64,
    /// `C` with `|value - phi - quadratic t^2| <= C |t|^3`.
    pub remainder_const: f64,
}

pub fn y_taylor(xi: f64, t: f64) -> Result<YTaylor> {
    if !(0.0..1.0).contains(&xi) || t.abs() >= 1.0 - xi {
        return Err(Error::Domain(format!("need 0 <= xi < 1 and |t| < 1 - xi, got xi = {xi}, t = {t}")));
    }
    let i = C64::new(0.0, 1.0);
    let (p, q) = (1.0 / (1.0 - xi), 1.0 / (1.0 + xi));
    let mut value = C64::new(phi_y(xi), 0.0);
    // (-i)^{n+1} p^n and i^{n+1} q^n, advanced one power at a time
    let (mut a, mut b) = (-i * -i * p, i * i * q);
    let mut tp = t * t;
    for n in 1..10_000 {
        let term = (a + b) * tp / (n as f64 + 1.0);
        value += term;
        if term.norm() <= 1e-18 * value.norm().max(1e-300) {
            break;
        }
        a *= -i * p;
        b *= i * q;
        tp *= t;
    }
    let ratio = t.abs() * p;
    Ok(YTaylor { value, quadratic: -1.0 / (1.0 - xi * xi), remainder_const: 2.0 * p * p / (3.0 * (1.0 - ratio)) })
}

/// `a + ib = sqrt(xi - i t)` taken with `a >= 0`.
pub fn real_imag_root_split(xi: f64, t: f64) -> (f64, f64) {
    let r = xi.hypot(t);
    let a = ((r + xi) / 2.0).max(0.0).sqrt();
    let b = ((r - xi) / 2.0).max(0.0).sqrt();
    (a, if t > 0.0 { -b } else { b })
}

/// `sum_{i <= n/2} C(1/2, n - 2i)` for `n = 0..len`.
pub fn b_coeffs(len: usize) -> Vec<f64> {
    let mut half = Vec::with_capacity(len);
    let mut c = 1.0;
    for j in 0..len {
        half.push(c);
        c *= (0.5 - j as f64) / (j as f64 + 1.0);
    }
    (0..len).map(|n| (0..=n / 2).map(|i| half[n - 2 * i]).sum()).collect()
}

/// Taylor data of `Psi_X` in the `v`-plane, where `z = 1 - v^4`.
///
/// `d` are the coefficients of `Psi_1(v)` (valid for `arg v` in
/// `[-pi/4, 0]`), `d_prime` those of `Psi_2(v) = Psi_1(-iv)` (valid for
/// `arg v` in `[pi/4, pi/2]`). `g` and `g_prime` re-expand both around the
/// saddle `v_o`; `a2..a4` are the leading ones.
#[derive(Clone, Debug)]
pub struct XTaylorCoeffs {
    pub xi: f64,
    pub v: f64,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub d_prime: Vec<C64>,
    pub g: Vec<f64>,
    pub g_prime: Vec<C64>,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a2p: C64,
    pub a3p: C64,
    pub a4p: C64,
}

/// Number of re-expanded coefficients `g_m` kept.
pub const G_ORDER: usize = 40;

pub fn x_taylor_coeffs(xi: f64, order: usize) -> Result<XTaylorCoeffs> {
    check_xi(xi)?;
    let order = order.max(G_ORDER + 1);
    let v = u_o_x(xi).sqrt();
    let b = b_coeffs(order / 2 + 1);
    let mut d = vec![0.0; order + 1];
    for (h, dh) in d.iter_mut().enumerate().skip(1) {
        if h % 4 == 0 {
            *dh = 4.0 / h as f64;
        } else if h % 2 == 1 {
            let n = (h - 1) / 2;
            *dh = -2.0 * SQRT_2 * xi * b[n] / h as f64;
        }
    }
    let mut rot = C64::new(1.0, 0.0);
    let d_prime: Vec<C64> = d
        .iter()
        .map(|&dh| {
            let out = dh * rot;
            rot *= C64::new(0.0, -1.0);
            out
        })
        .collect();

    // g_m = sum_h C(h, m) d_h v^{h-m}; the tail is bounded by the last term
    let tail = binom(order, G_ORDER) * v.powi((order - G_ORDER) as i32);
    if !(tail < 1e-15) {
        return Err(Error::Convergence(format!(
            "re-expansion at v = {v} needs more than {order} terms (tail {tail:e})"
        )));
    }
    let mut g = vec![0.0; G_ORDER + 1];
    let mut g_prime = vec![C64::new(0.0, 0.0); G_ORDER + 1];
    for m in 0..=G_ORDER {
        let mut c = 1.0;
        let mut vp = 1.0;
        for h in m..=order {
            if h > m {
                c *= h as f64 / (h - m) as f64;
                vp *= v;
            }
            g[m] += c * d[h] * vp;
            g_prime[m] += c * vp * d_prime[h];
        }
    }
    Ok(XTaylorCoeffs {
        xi,
        v,
        a2: g[2],
        a3: g[3],
        a4: g[4],
        a2p: g_prime[2],
        a3p: g_prime[3],
        a4p: g_prime[4],
        b,
        d,
        d_prime,
        g,
        g_prime,
    })
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

impl XTaylorCoeffs {
    /// `sum_m e^{i m beta} g_m t^m`, the value of `Psi_X` at
    /// `z = 1 - (v_o + e^{i beta} t)^4` while that point keeps `arg v` in
    /// `[-pi/4, 0]`.
    pub fn psi_bar(&self, beta: f64, t: f64) -> C64 {
        let w = C64::from_polar(t, beta);
        self.g.iter().rev().fold(C64::new(0.0, 0.0), |acc, &gm| acc * w + gm)
    }

    /// Same with the `g_prime` family (`arg v` in `[pi/4, pi/2]`).
    pub fn psi_bar_prime(&self, beta: f64, t: f64) -> C64 {
        let w = C64::from_polar(t, beta);
        self.g_prime.iter().rev().fold(C64::new(0.0, 0.0), |acc, &gm| acc * w + gm)
    }
}

/// Direct evaluation of `Psi_1(v) = 2 xi log(1 + v^2 - sqrt(2) v sqrt(1 + v^2)) - (xi+1) log(1 - v^4)`.
pub fn psi_tilde_1(v: C64, xi: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let v2 = v * v;
    let inner = one + v2 - SQRT_2 * v * (one + v2).sqrt();
    2.0 * xi * inner.ln() - (xi + 1.0) * (one - v2 * v2).ln()
}

/// Direct evaluation of `Psi_2(v) = 2 xi log(1 - v^2 + sqrt(2) i v sqrt(1 - v^2)) - (xi+1) log(1 - v^4)`.
pub fn psi_tilde_2(v: C64, xi: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let v2 = v * v;
    let inner = one - v2 + SQRT_2 * i * v * (one - v2).sqrt();
    2.0 * xi * inner.ln() - (xi + 1.0) * (one - v2 * v2).ln()
}

/// Whether `cos 2b`, `cos 3b` and `cos 4b` are all non-positive, which
/// makes the real parts of the leading Taylor terms decay along the ray.
pub fn beta_in_sector(beta: f64) -> bool {
    let tol = 1e-12;
    (2.0 * beta).cos() <= tol && (3.0 * beta).cos() <= tol && (4.0 * beta).cos() <= tol
}

/// The two sectors `[pi/4, 3pi/8]` and `[-3pi/8, -pi/4]`.
pub fn beta_sectors() -> [(f64, f64); 2] {
    let (lo, hi) = (FRAC_PI_2 / 2.0, 3.0 * FRAC_PI_2 / 4.0);
    [(lo, hi), (-hi, -lo)]
}
