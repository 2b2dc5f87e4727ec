//! Cauchy-integral oracle and the split contours of the saddle-point analysis.
//!
//! `p^{(2n)} = (1/2 pi i) \oint G F^{2k} z^{-n-1} dz`. A plain circle with the
//! trapezoidal rule gives an independent oracle. The split contours follow a
//! steepest-descent segment through the saddle (piece A) and close with a
//! circular arc of radius `|z(alpha)| > 1` (piece B):
//!
//! * `UPlaneHybrid`: `sqrt(1-z) = xi - i t`, `|t| <= alpha` (y-axis)
//! * `VPlaneQuarter`: `(1-z)^{1/4} = v_o + e^{-i pi/4} t`, plus its conjugate (x-axis)
//! * `VPlaneTwoBeta`: as above with angle `-pi/3` up to `t0 = 2 v_o/(sqrt 3 - 1)`
//!   and `+pi/3` after it; the seam touches the cut at `1 + |w|^4`
//!
//! All sums are accumulated relative to the largest log-modulus so nothing
//! overflows however small `e^{n phi}` is.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{GreenValues, C64};
use crate::quadrature::PanelRule;
use crate::saddle;
use crate::series::Axis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ContourKind {
    SaddleCircle,
    UPlaneHybrid,
    VPlaneQuarter,
    VPlaneTwoBeta,
}

impl std::str::FromStr for ContourKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "saddlecircle" | "circle" => Ok(ContourKind::SaddleCircle),
            "uplanehybrid" | "uplane" => Ok(ContourKind::UPlaneHybrid),
            "vplanequarter" | "quarter" => Ok(ContourKind::VPlaneQuarter),
            "vplanetwobeta" | "twobeta" => Ok(ContourKind::VPlaneTwoBeta),
            other => Err(Error::Domain(format!("unknown contour kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    A,
    B,
}

/// A straight piece `w(t) = base + e^{i beta} t`, `t` in `[from, to]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaPiece {
    pub from: f64,
    pub to: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub axis: Axis,
    pub xi: f64,
    pub alpha: f64,
    /// Minimum clearance `|z(xi, alpha)| - 1` demanded of the arc.
    pub eps0: f64,
    /// Panels (16-point Gauss-Legendre) on each straight piece; the arc gets
    /// proportionally more. Trapezoid node count for the circle.
    pub nodes: usize,
    pub pieces: Vec<BetaPiece>,
    pub t0: Option<f64>,
    /// Saddle in the parameter plane (`xi` for the u-plane, `v_o` for the v-plane).
    pub base: f64,
    pub radius: f64,
    /// Argument where the arc starts (it ends at `2 pi - arc_start`).
    pub arc_start: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub s: C64,
    pub z: C64,
    /// `z'(t)` times the quadrature weight.
    pub dz: C64,
    pub part: Part,
}

/// A closed, positively oriented contour sampled for quadrature.
#[derive(Clone, Debug)]
pub struct Contour {
    pub spec: ContourSpec,
    /// Nodes in traversal order.
    pub nodes: Vec<Node>,
}

/// `p = e^{log_scale} (part_a + part_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitResult {
    pub log_scale: f64,
    pub part_a: C64,
    pub part_b: C64,
}

impl SplitResult {
    pub fn total(&self) -> f64 {
        (self.part_a + self.part_b).re * self.log_scale.exp()
    }

    pub fn ln_total(&self) -> f64 {
        self.log_scale + (self.part_a + self.part_b).re.ln()
    }

    pub fn ratio_b_over_a(&self) -> f64 {
        self.part_b.norm() / self.part_a.norm()
    }

    /// Relative size of the imaginary part, which must vanish.
    pub fn imag_residual(&self) -> f64 {
        let t = self.part_a + self.part_b;
        t.im.abs() / t.re.abs()
    }
}

const GL_POINTS: usize = 16;

fn axis_for(kind: ContourKind, axis: Axis) -> Result<Axis> {
    match (kind, axis) {
        (ContourKind::SaddleCircle, a) => Ok(a),
        (ContourKind::UPlaneHybrid, Axis::Y) => Ok(Axis::Y),
        (ContourKind::VPlaneQuarter | ContourKind::VPlaneTwoBeta, Axis::X) => Ok(Axis::X),
        (k, a) => Err(Error::Contour(format!("{k:?} is not defined for the {a}-axis"))),
    }
}

/// Validates parameters and fixes the geometry of a contour.
pub fn contour_spec(kind: ContourKind, axis: Axis, xi: f64, alpha: f64, nodes: usize) -> Result<ContourSpec> {
    let axis = axis_for(kind, axis)?;
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!("alpha must lie in (0, 0.5], got {alpha}")));
    }
    let eps0 = alpha.powi(4) / 2.0;
    let mut spec = ContourSpec {
        kind,
        axis,
        xi,
        alpha,
        eps0,
        nodes: nodes.max(4),
        pieces: Vec::new(),
        t0: None,
        base: 0.0,
        radius: 0.0,
        arc_start: 0.0,
    };
    let end: C64;
    match kind {
        ContourKind::SaddleCircle => {
            spec.radius = saddle::saddle(axis, xi)?.z_o;
            return Ok(spec);
        }
        ContourKind::UPlaneHybrid => {
            if !(0.0..1.0).contains(&xi) {
                return Err(Error::Domain(format!("xi must lie in [0, 1), got {xi}")));
            }
            spec.base = xi;
            let s = C64::new(xi, -alpha);
            end = 1.0 - s * s;
        }
        ContourKind::VPlaneQuarter => {
            spec.base = if xi == 0.0 { 0.0 } else { saddle::u_o_x(xi).sqrt() };
            spec.pieces = vec![BetaPiece { from: 0.0, to: alpha, beta: -FRAC_PI_4 }];
            end = 1.0 - (spec.base + C64::from_polar(alpha, -FRAC_PI_4)).powu(4);
        }
        ContourKind::VPlaneTwoBeta => {
            spec.base = if xi == 0.0 { 0.0 } else { saddle::u_o_x(xi).sqrt() };
            let t0 = 2.0 * spec.base / (3f64.sqrt() - 1.0);
            if t0 >= alpha {
                return Err(Error::Contour(format!("breakpoint t0 = {t0} is not below alpha = {alpha}")));
            }
            spec.t0 = Some(t0);
            spec.pieces = vec![
                BetaPiece { from: 0.0, to: t0, beta: -FRAC_PI_3 },
                BetaPiece { from: t0, to: alpha, beta: FRAC_PI_3 },
            ];
            end = 1.0 - (spec.base + C64::from_polar(alpha, FRAC_PI_3)).powu(4);
        }
    }
    spec.radius = end.norm();
    spec.arc_start = end.arg();
    if spec.radius < 1.0 + eps0 {
        return Err(Error::Contour(format!(
            "|z(xi, alpha)| = {} is below 1 + eps0 = {}",
            spec.radius,
            1.0 + eps0
        )));
    }
    if !(spec.arc_start > 0.0 && spec.arc_start < PI) {
        return Err(Error::Contour(format!("segment ends at arg {} outside (0, pi)", spec.arc_start)));
    }
    Ok(spec)
}

/// Gauss-Legendre nodes on `[0, len]` graded as `t = len tau^2`, which
/// clusters them at the saddle end.
fn graded(rule: &PanelRule, len: f64, panels: usize) -> Vec<(f64, f64)> {
    rule.points(0.0, 1.0, panels)
        .into_iter()
        .map(|(tau, w)| (len * tau * tau, w * 2.0 * len * tau))
        .collect()
}

fn arc_nodes(rule: &PanelRule, radius: f64, from: f64, panels: usize) -> Vec<Node> {
    rule.points(from, 2.0 * PI - from, panels)
        .into_iter()
        .map(|(th, w)| {
            let z = C64::from_polar(radius, th);
            let s = crate::green::principal_sqrt(1.0 - z);
            Node { s, z, dz: C64::new(0.0, 1.0) * z * w, part: Part::B }
        })
        .collect()
}

/// Mirror image of an upper-half-plane path traversed back towards the real
/// axis: conjugate points, reversed direction.
fn mirrored(upper: &[Node]) -> Vec<Node> {
    upper
        .iter()
        .rev()
        .map(|n| Node { s: n.s.conj(), z: n.z.conj(), dz: -n.dz.conj(), part: n.part })
        .collect()
}

impl ContourSpec {
    /// Samples the contour. `arc_panels` is the panel count on the arc.
    pub fn build(&self, arc_panels: usize) -> Contour {
        let rule = PanelRule::new(GL_POINTS);
        let mut upper = Vec::new();
        match self.kind {
            ContourKind::SaddleCircle => {
                let m = self.nodes;
                let nodes = (0..m)
                    .map(|j| {
                        let th = -PI + 2.0 * PI * (j as f64 + 0.5) / m as f64;
                        let z = C64::from_polar(self.radius, th);
                        let s = crate::green::principal_sqrt(1.0 - z);
                        let part = if th.abs() <= self.alpha { Part::A } else { Part::B };
                        Node { s, z, dz: C64::new(0.0, 1.0) * z * (2.0 * PI / m as f64), part }
                    })
                    .collect();
                return Contour { spec: self.clone(), nodes };
            }
            ContourKind::UPlaneHybrid => {
                // s = xi - i t, z = 1 - s^2, dz/dt = 2 i s
                for (t, w) in graded(&rule, self.alpha, self.nodes) {
                    let s = C64::new(self.base, -t);
                    upper.push(Node { s, z: 1.0 - s * s, dz: 2.0 * C64::new(0.0, 1.0) * s * w, part: Part::A });
                }
            }
            ContourKind::VPlaneQuarter | ContourKind::VPlaneTwoBeta => {
                for (idx, piece) in self.pieces.iter().enumerate() {
                    let e = C64::from_polar(1.0, piece.beta);
                    let pts = if idx == 0 {
                        graded(&rule, piece.to - piece.from, self.nodes)
                    } else {
                        rule.points(0.0, piece.to - piece.from, self.nodes)
                    };
                    for (t, w) in pts {
                        let wv = self.base + e * (piece.from + t);
                        // past the seam arg w lies in (pi/4, pi/2) and sqrt(w^4) = -w^2
                        let s = if wv.arg() > FRAC_PI_4 { -wv * wv } else { wv * wv };
                        let dz = -4.0 * e * wv.powu(3) * w;
                        upper.push(Node { s, z: 1.0 - wv.powu(4), dz, part: Part::A });
                    }
                }
            }
        }
        let mut nodes = mirrored(&upper);
        nodes.extend(upper);
        nodes.extend(arc_nodes(&rule, self.radius, self.arc_start, arc_panels));
        Contour { spec: self.clone(), nodes }
    }
}

impl Contour {
    /// Winding number about the origin of the closed polygon through the nodes.
    pub fn winding_number(&self) -> i64 {
        let mut total = 0.0;
        for (i, n) in self.nodes.iter().enumerate() {
            let next = self.nodes[(i + 1) % self.nodes.len()].z;
            total += (next / n.z).arg();
        }
        (total / (2.0 * PI)).round() as i64
    }

    /// `(1/2 pi i) sum f(z_j) dz_j` over each part, in log space.
    pub fn integrate(&self, axis: Axis, k: u64, n: u64) -> SplitResult {
        let logs: Vec<(C64, Part)> = self
            .nodes
            .iter()
            .map(|node| {
                let gv = GreenValues::from_s(node.s);
                (gv.log_integrand(axis, k, n) + node.dz.ln(), node.part)
            })
            .collect();
        let m = logs.iter().map(|(l, _)| l.re).fold(f64::NEG_INFINITY, f64::max);
        let (mut a, mut b) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (l, part) in logs {
            let v = (l - m).exp();
            match part {
                Part::A => a += v,
                Part::B => b += v,
            }
        }
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        SplitResult { log_scale: m, part_a: a / two_pi_i, part_b: b / two_pi_i }
    }
}

/// Builds a contour whose geometry suits `(k, n)` and checks it winds once.
pub fn build_contour(kind: ContourKind, axis: Axis, xi: f64, alpha: f64, nodes: usize) -> Result<Contour> {
    let spec = contour_spec(kind, axis, xi, alpha, nodes)?;
    let c = spec.build(nodes.max(16));
    let w = c.winding_number();
    if w != 1 {
        return Err(Error::Contour(format!("winding number about 0 is {w}, expected 1")));
    }
    Ok(c)
}

/// Parts (A) and (B) of `p^{(2n)}` for the axis point at distance `2k`,
/// refined by doubling the sampling until the total settles.
pub fn split_integral(spec: &ContourSpec, k: u64, n: u64) -> Result<SplitResult> {
    let mut spec = spec.clone();
    let circle = spec.kind == ContourKind::SaddleCircle;
    if circle {
        spec.nodes = spec.nodes.max(4 * n as usize).max(64);
    } else {
        let width = (n as f64).powf(-0.25);
        spec.nodes = spec.nodes.max((4.0 * spec.alpha / width).ceil() as usize).max(8);
    }
    let arc = |s: &ContourSpec| if circle { 0 } else { s.nodes + n as usize / 2 + 16 };
    let first = spec.build(arc(&spec));
    if first.winding_number() != 1 {
        return Err(Error::Contour("contour does not wind once about 0".into()));
    }
    let mut prev = first.integrate(spec.axis, k, n);
    for _ in 0..8 {
        spec.nodes *= 2;
        let cur = spec.build(arc(&spec)).integrate(spec.axis, k, n);
        let scale = (cur.part_a + cur.part_b).norm() * cur.log_scale.exp();
        let diff = |x: C64, xs: f64, y: C64, ys: f64| (x * xs.exp() - y * ys.exp()).norm();
        let da = diff(cur.part_a, cur.log_scale, prev.part_a, prev.log_scale);
        let db = diff(cur.part_b, cur.log_scale, prev.part_b, prev.log_scale);
        prev = cur;
        if da <= 1e-11 * scale && db <= 1e-11 * scale {
            return Ok(prev);
        }
        // rescaling by exp() is safe here only when the scale is representable
        if !scale.is_finite() || scale == 0.0 {
            return Ok(prev);
        }
    }
    Err(Error::Convergence(format!("{:?} quadrature did not settle", spec.kind)))
}

/// Radius minimising `G(r) F^2(r)^k / r^n` on `(0, 1)`.
pub fn optimal_radius(axis: Axis, k: u64, n: u64) -> f64 {
    let f = |x: f64| {
        // x = -ln(1 - r)
        let r = -(-x).exp_m1();
        let gv = GreenValues::at(C64::new(r, 0.0), false).expect("inside the unit disc");
        gv.log_integrand(axis, k, n).re
    };
    // golden-section search on a unimodal function
    let (mut lo, mut hi) = (1e-6, 40.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    -(-(lo + hi) / 2.0).exp_m1()
}

/// Trapezoidal Cauchy integral on `|z| = radius` with `m` nodes; returns
/// `(ln p, relative imaginary residual)`.
pub fn cauchy_trapezoid(axis: Axis, k: u64, n: u64, radius: f64, m: usize) -> (f64, f64) {
    let mut logs = Vec::with_capacity(m);
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        let z = C64::from_polar(radius, th);
        let gv = GreenValues::at(z, false).expect("inside the unit disc");
        // dz / (2 pi i) = z dtheta / (2 pi)
        logs.push(gv.log_integrand(axis, k, n) + z.ln());
    }
    let mx = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let sum: C64 = logs.iter().map(|l| (l - mx).exp()).sum::<C64>() / m as f64;
    (mx + sum.re.ln(), sum.im.abs() / sum.re.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchyResult {
    pub ln_value: f64,
    pub nodes: usize,
    pub radius: f64,
    pub imag_residual: f64,
}

impl CauchyResult {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

/// `p^{(2n)}` by the trapezoidal rule on a circle, doubling nodes from
/// `max(4n, 64)` until the relative change is below `1e-12`.
pub fn cauchy_circle(axis: Axis, k: u64, n: u64, radius: Option<f64>) -> Result<CauchyResult> {
    let radius = radius.unwrap_or_else(|| optimal_radius(axis, k, n));
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {radius}")));
    }
    let mut m = (4 * n as usize).max(64);
    let (mut prev, _) = cauchy_trapezoid(axis, k, n, radius, m);
    while m < 1 << 22 {
        m *= 2;
        let (cur, imag) = cauchy_trapezoid(axis, k, n, radius, m);
        if (cur - prev).abs() < 1e-12 {
            if imag > 1e-8 {
                return Err(Error::Convergence(format!("imaginary residual {imag:e} at {m} nodes")));
            }
            return Ok(CauchyResult { ln_value: cur, nodes: m, radius, imag_residual: imag });
        }
        prev = cur;
    }
    Err(Error::Convergence(format!("trapezoidal rule on radius {radius} needs more than {m} nodes")))
}

/// Smallest power-of-two node count whose trapezoid value is within `tol`
/// (relative) of `exact`.
pub fn nodes_needed(axis: Axis, k: u64, n: u64, radius: f64, tol: f64, exact: f64) -> Option<usize> {
    let mut m = 8;
    while m <= 1 << 20 {
        let (ln, _) = cauchy_trapezoid(axis, k, n, radius, m);
        if (ln.exp() / exact - 1.0).abs() < tol {
            return Some(m);
        }
        m *= 2;
    }
    None
}
