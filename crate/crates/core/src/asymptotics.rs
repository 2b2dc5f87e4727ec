//! Closed-form and integral asymptotics for `p^{(2n)}` along both axes, and the
//! dispatcher that picks the formula for a given `xi = k/n`.
//!
//! Every estimate is `e^{n phi(xi)}` times a polynomial-size prefactor, carried
//! as a natural logarithm so nothing underflows.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::green::{GreenValues, C64};
use crate::quadrature;
use crate::saddle;
use crate::series::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    YBulk,
    YMid,
    YSmall,
    YTiny,
    XBulk,
    XMid,
    XCrossover,
    XSmall,
    XTiny,
    Local,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::YBulk => "Y_BULK",
            Regime::YMid => "Y_MID",
            Regime::YSmall => "Y_SMALL",
            Regime::YTiny => "Y_TINY",
            Regime::XBulk => "X_BULK",
            Regime::XMid => "X_MID",
            Regime::XCrossover => "X_CROSSOVER",
            Regime::XSmall => "X_SMALL",
            Regime::XTiny => "X_TINY",
            Regime::Local => "LOCAL",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Window parameters: `a` and `1 - c` bound the mid and bulk windows, `epsilon`
/// widens the windows around the `n^{-1/2}` and `n^{-3/4}` scales, and
/// `kappa` places the sign switch in the crossover integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimeParams {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub kappa: f64,
    /// Relative distance to a window edge within which the neighbouring
    /// formula is reported as well.
    pub boundary_band: f64,
}

/// `theta` at which the crossover contour changes direction, times `t`.
pub fn kappa_default() -> f64 {
    2f64.powf(7.0 / 6.0) * 3f64.sqrt() / (3f64.sqrt() - 1.0)
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams { a: 0.05, c: 0.05, alpha: 0.25, epsilon: 0.05, kappa: kappa_default(), boundary_band: 0.02 }
    }
}

impl RegimeParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.a > 0.0 && self.a <= 0.5) {
            return bad("a must lie in (0, 0.5]");
        }
        if !(self.c > 0.0 && self.c < 1.0 - self.a) {
            return bad("c must lie in (0, 1 - a)");
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.25) {
            return bad("alpha must lie in (0, 0.25]");
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.25) {
            return bad("epsilon must lie in (0, 0.25)");
        }
        if !(self.kappa > 0.0 && self.boundary_band >= 0.0 && self.boundary_band < 0.5) {
            return bad("kappa must be positive and boundary_band in [0, 0.5)");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    pub log_value: f64,
    pub value: f64,
    pub regime: Regime,
    pub formula_id: &'static str,
    /// The adjacent window's estimate when `xi` sits on a window edge.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<Box<EstimateResult>>,
}

impl EstimateResult {
    fn new(log_value: f64, regime: Regime, formula_id: &'static str) -> Self {
        EstimateResult { log_value, value: log_value.exp(), regime, formula_id, neighbor: None }
    }
}

/// `p^{(n)}(o, o)` on the `d`-comb for `n` even, zero for odd `n`.
pub fn local_limit(d: u32, n: u64) -> f64 {
    local_limit_pair(d, 2 * d, 0, n)
}

/// `p^{(n)}(x, y)` for fixed `x, y` at graph distance `dist`, `deg_y` the degree of `y`.
pub fn local_limit_pair(d: u32, deg_y: u32, dist: u64, n: u64) -> f64 {
    if (n + dist) % 2 == 1 || n == 0 {
        return 0.0;
    }
    let e = 0.5f64.powi(d as i32);
    2f64.powf(e - 1.0) * deg_y as f64 / gamma(e) * (n as f64).powf(e - 1.0)
}

/// `ln(sqrt 2 / Gamma(1/4))`, the common `xi = 0` constant of both axes.
fn ln_tiny_constant() -> f64 {
    0.5 * 2f64.ln() - ln_gamma(0.25)
}

const THETA_MAX_GAUSS: f64 = 9.0;
const THETA_MAX_QUARTIC: f64 = 3.2;
const QUAD_TOL: f64 = 1e-11;

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::integrate(f, a, b, QUAD_TOL).expect("smooth bounded integrand").value
}

/// `int_R e^{-theta^2/2} sqrt(sqrt(t^2 + theta^2/2) + t) dtheta`.
pub fn integral_y(t: f64) -> f64 {
    let f = |th: f64| (-th * th / 2.0).exp() * ((t * t + th * th / 2.0).sqrt() + t).sqrt();
    // the integrand grows like sqrt(theta), so truncate a little further out
    2.0 * quad(f, 0.0, THETA_MAX_GAUSS + 1.0)
}

/// The quartic-phase integral of the small-xi x-axis estimate, `t` in `[0, 1]`.
///
/// `Im int_0^inf -sqrt(2) e^{-i pi/4} w^2 e^{w^4 - w_o^4 - 2^{3/2} t^3 (w - w_o)} dtheta`
/// along `w = w_o + e^{-i pi/4} theta`, `w_o = 2^{-1/6} t`, written out in
/// real form. Both phase terms carry a minus sign.
pub fn integral_x(t: f64) -> f64 {
    integral_x_to(t, THETA_MAX_QUARTIC)
}

pub fn integral_x_to(t: f64, upper: f64) -> f64 {
    let c13 = 2f64.powf(4.0 / 3.0);
    let c23 = 3.0 * 2f64.powf(2.0 / 3.0);
    let cm = 2f64.powf(-1.0 / 3.0);
    let f = |th: f64| {
        let (th2, th3) = (th * th, th * th * th);
        let ph = -c23 * t * t * th2 - c13 * t * th3;
        (-c13 * t * th3 - th2 * th2).exp()
            * (ph.cos() * (cm * t * t + th2 + c13 * t * th) + ph.sin() * (th2 - cm * t * t))
    };
    quad(f, 0.0, upper)
}

/// `int_0^inf e^{-theta^2/2} cos(pi/6 - sqrt(3) theta^2 / 2) dtheta`, truncated at `upper`.
pub fn j_mid_to(upper: f64) -> f64 {
    let r3 = 3f64.sqrt();
    quad(|th| (-th * th / 2.0).exp() * (PI / 6.0 - r3 / 2.0 * th * th).cos(), 0.0, upper)
}

pub fn j_mid() -> f64 {
    j_mid_to(THETA_MAX_GAUSS)
}

/// Integral of the crossover estimate, `t = n^{-1/2} xi^{-2/3}`.
///
/// In the scaling limit `(1-z)^{1/4} = n^{-1/4} w` the x-axis integrand is
/// `sqrt(2/s) (-4 e^{i beta} w^3) e^{w^4 - 2^{3/2} t^{-3/2} sqrt(s) - phi}`
/// with `sqrt(s) = w` before the seam and `-i w` after it. The path leaves
/// `w_o = 2^{-1/6} t^{-1/2}` at angle `-pi/3` and turns to `+pi/3` at
/// `theta = kappa / t`, where `theta = sqrt(6) w_o r` is the Gaussian variable.
pub fn integral_x_crossover(t: f64, kappa: f64) -> f64 {
    integral_x_crossover_to(t, kappa, THETA_MAX_GAUSS + 3.0)
}

pub fn integral_x_crossover_to(t: f64, kappa: f64, tail: f64) -> f64 {
    let delta = t.powf(-0.5);
    let w0 = 2f64.powf(-1.0 / 6.0) * delta;
    let lam = 2.0 * SQRT_2 * delta.powi(3);
    let phi0 = w0.powi(4) - lam * w0;
    let sc = 1.0 / (6f64.sqrt() * w0);
    let piece = |beta: f64, seam: bool| {
        let e = C64::from_polar(1.0, beta);
        move |th: f64| {
            let w = w0 + e * (sc * th);
            let h = e * (sc * th);
            let (rs, expo) = if seam {
                let rs = C64::new(0.0, -1.0) * w;
                (rs, w.powu(4) - lam * rs - phi0)
            } else {
                // expanded about the saddle (4 w_o^3 = lam) to avoid cancellation
                (w, h * h * (6.0 * w0 * w0 + h * (4.0 * w0 + h)))
            };
            let v = SQRT_2 / rs * (-4.0 * e * w.powu(3)) * expo.exp() * sc;
            v.im
        }
    };
    let brk = kappa / t;
    let first = quad(piece(-PI / 3.0, false), 0.0, brk.min(tail));
    let second = if brk < tail { quad(piece(PI / 3.0, true), brk, brk + tail) } else { 0.0 };
    3f64.sqrt() / (2f64.powf(5.0 / 6.0) * delta) * (first + second)
}

/// `phi_X`, extended by its limit `0` at `xi = 0`.
fn phi_x0(xi: f64) -> Result<f64> {
    if xi == 0.0 {
        Ok(0.0)
    } else {
        saddle::phi_x(xi)
    }
}

fn g_real(z: f64) -> f64 {
    GreenValues::at(C64::new(z, 0.0), false).expect("z_o lies in (0, 1)").g.re
}

fn check_k(k: u64, n: u64, p: &RegimeParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let xi = k as f64 / n as f64;
    if xi > 1.0 - p.c {
        return Err(Error::NoRegime { xi, limit: 1.0 - p.c });
    }
    Ok(xi)
}

/// Gaussian saddle estimate `sqrt(2 xi / ((1 - xi^2)(1 + xi))) e^{n phi} / sqrt(pi n)`.
pub fn y_gaussian(xi: f64, n: u64) -> f64 {
    let n = n as f64;
    0.5 * (2.0 * xi / ((1.0 - xi * xi) * (1.0 + xi))).ln() - 0.5 * (PI * n).ln() + n * saddle::phi_y(xi)
}

pub fn y_small(xi: f64, n: u64) -> f64 {
    let nf = n as f64;
    nf * saddle::phi_y(xi) - (PI * SQRT_2).ln() + integral_y(nf.sqrt() * xi).ln() - 0.75 * nf.ln()
}

pub fn tiny(phi: f64, n: u64) -> f64 {
    let nf = n as f64;
    nf * phi + ln_tiny_constant() - 0.75 * nf.ln()
}

pub fn x_bulk(xi: f64, n: u64) -> Result<f64> {
    let sd = saddle::saddle_x(xi)?;
    let (z, nf) = (sd.z_o, n as f64);
    let pref = (2.0 / PI).sqrt() * (1.0 - z).sqrt() * g_real(z) / (1.0 + 2.0 * z - (1.0 - z).sqrt()).sqrt();
    Ok(nf * sd.phi + pref.ln() - 0.5 * nf.ln())
}

pub fn x_mid(xi: f64, n: u64) -> Result<f64> {
    let sd = saddle::saddle_x(xi)?;
    let v = sd.v_o.expect("x-axis saddle carries v_o");
    // a_2 = Psi''(z_o) (dz/dv)^2 / 2 with dz/dv = -4 v^3
    let a2 = 8.0 * v.powi(6) * sd.psi2;
    let (z, nf) = (sd.z_o, n as f64);
    let pref = 4.0 * v.powi(3) / (PI * a2.sqrt()) * g_real(z) / z * j_mid();
    Ok(nf * sd.phi + pref.ln() - 0.5 * nf.ln())
}

pub fn x_crossover(xi: f64, n: u64, kappa: f64) -> Result<f64> {
    let sd = saddle::saddle_x(xi)?;
    let (z, nf) = (sd.z_o, n as f64);
    let t = 1.0 / (nf.sqrt() * xi.powf(2.0 / 3.0));
    let i = integral_x_crossover(t, kappa);
    if !(i > 0.0) {
        return Err(Error::NonPositiveConstant(format!("crossover integral at t = {t} is {i}")));
    }
    let pref = 2f64.powf(1.0 / 6.0) * g_real(z) / (PI * 3f64.sqrt() * z);
    Ok(nf * sd.phi + pref.ln() + i.ln() + xi.powf(2.0 / 3.0).ln() - 0.5 * nf.ln())
}

pub fn x_small(xi: f64, n: u64) -> Result<f64> {
    let nf = n as f64;
    let delta = nf.powf(0.25) * xi.cbrt();
    let i = integral_x(delta);
    if !(i > 0.0) {
        return Err(Error::NonPositiveConstant(format!("small-xi integral at {delta} is {i}")));
    }
    Ok(nf * phi_x0(xi)? + (4.0 / PI).ln() + i.ln() - 0.75 * nf.ln())
}

/// Window edges in increasing order with the regime to the left of each.
fn windows(axis: Axis, n: u64, p: &RegimeParams) -> Vec<(f64, Regime)> {
    let nf = n as f64;
    match axis {
        Axis::Y => vec![
            (nf.powf(-0.5 - p.epsilon), Regime::YTiny),
            (nf.powf(-0.25), Regime::YSmall),
            (p.a, Regime::YMid),
            (1.0 - p.c, Regime::YBulk),
        ],
        Axis::X => vec![
            (nf.powf(-0.75 - p.epsilon), Regime::XTiny),
            (nf.powf(-0.75), Regime::XSmall),
            (nf.powf(-0.75 + p.epsilon), Regime::XCrossover),
            (p.a, Regime::XMid),
            (1.0 - p.c, Regime::XBulk),
        ],
    }
}

/// Regime whose window contains `xi`.
pub fn regime_of(axis: Axis, xi: f64, n: u64, p: &RegimeParams) -> Result<Regime> {
    let w = windows(axis, n, p);
    for (i, &(edge, r)) in w.iter().enumerate() {
        let last = i + 1 == w.len();
        if xi < edge || (last && xi <= edge) {
            return Ok(r);
        }
    }
    Err(Error::NoRegime { xi, limit: 1.0 - p.c })
}

/// Evaluates the formula of `regime` regardless of whether `xi` is in its window.
pub fn estimate_in(regime: Regime, k: u64, n: u64, p: &RegimeParams) -> Result<EstimateResult> {
    let xi = k as f64 / n as f64;
    Ok(match regime {
        Regime::YBulk => EstimateResult::new(y_gaussian(xi, n), regime, "y-gaussian-saddle"),
        Regime::YMid => EstimateResult::new(y_gaussian(xi, n), regime, "y-gaussian-u-plane"),
        Regime::YSmall => EstimateResult::new(y_small(xi, n), regime, "y-integral-sqrt"),
        Regime::YTiny => EstimateResult::new(tiny(saddle::phi_y(xi), n), regime, "tiny-gamma-quarter"),
        Regime::XBulk => EstimateResult::new(x_bulk(xi, n)?, regime, "x-gaussian-saddle"),
        Regime::XMid => EstimateResult::new(x_mid(xi, n)?, regime, "x-gaussian-v-plane"),
        Regime::XCrossover => EstimateResult::new(x_crossover(xi, n, p.kappa)?, regime, "x-integral-two-beta"),
        Regime::XSmall => EstimateResult::new(x_small(xi, n)?, regime, "x-integral-quartic"),
        Regime::XTiny => EstimateResult::new(tiny(phi_x0(xi)?, n), regime, "tiny-gamma-quarter"),
        Regime::Local => {
            let v = local_limit(2, 2 * n);
            EstimateResult::new(v.ln(), regime, "local-limit")
        }
    })
}

pub fn estimate_y(k: u64, n: u64, p: &RegimeParams) -> Result<EstimateResult> {
    dispatch(Axis::Y, k, n, p)
}

pub fn estimate_x(k: u64, n: u64, p: &RegimeParams) -> Result<EstimateResult> {
    dispatch(Axis::X, k, n, p)
}

/// `p^{(2n+1)}((0, 2k+1), o)` as the mean of its two even-time neighbours.
pub fn estimate_y_odd(k: u64, n: u64, p: &RegimeParams) -> Result<f64> {
    let lo = estimate_y(k, n, p)?.log_value;
    let hi = estimate_y(k + 1, n, p)?.log_value;
    let m = lo.max(hi);
    Ok(m + (0.5 * ((lo - m).exp() + (hi - m).exp())).ln())
}

/// Estimate for `p^{(2n)}` at axis distance `2k`, using the window that
/// contains `xi = k/n`. Near a window edge the neighbouring formula is
/// attached too.
pub fn dispatch(axis: Axis, k: u64, n: u64, p: &RegimeParams) -> Result<EstimateResult> {
    let xi = check_k(k, n, p)?;
    let regime = regime_of(axis, xi, n, p)?;
    let mut out = estimate_in(regime, k, n, p)?;
    let w = windows(axis, n, p);
    let idx = w.iter().position(|&(_, r)| r == regime).expect("regime comes from the table");
    let neighbour = if idx + 1 < w.len() && (xi / w[idx].0 - 1.0).abs() <= p.boundary_band {
        Some(w[idx + 1].1)
    } else if idx > 0 && (xi / w[idx - 1].0 - 1.0).abs() <= p.boundary_band {
        Some(w[idx - 1].1)
    } else {
        None
    };
    if let Some(r) = neighbour {
        out.neighbor = estimate_in(r, k, n, p).ok().map(Box::new);
    }
    Ok(out)
}
