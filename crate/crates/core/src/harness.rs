//! Oracle-versus-estimate sweeps, the x/y anisotropy table and the
//! dominated-modulus check for the generating functions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::asymptotics::{dispatch, EstimateResult, Regime, RegimeParams};
use crate::contour::cauchy_circle;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::green::{self, C64};
use crate::lattice::{CombVertex, LatticeOracle, DEFAULT_EXACT_CAP};
use crate::series::{green_series_origin, prob_coeff, Axis, Coeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum OracleKind {
    LatticeExact,
    SeriesExact,
    SeriesFloat,
    Contour,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::LatticeExact => "latticeExact",
            OracleKind::SeriesExact => "seriesExact",
            OracleKind::SeriesFloat => "seriesFloat",
            OracleKind::Contour => "contour",
        }
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latticeExact" | "lattice" => Ok(OracleKind::LatticeExact),
            "seriesExact" | "series" => Ok(OracleKind::SeriesExact),
            "seriesFloat" | "float" => Ok(OracleKind::SeriesFloat),
            "contour" | "circle" => Ok(OracleKind::Contour),
            _ => Err(Error::Domain(format!("unknown oracle {s:?}"))),
        }
    }
}

/// Size limits deciding which oracle computes `p^{(2n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OraclePolicy {
    /// Lattice steps the exact dynamic program may take.
    pub exact_cap: usize,
    pub series_exact_max_n: u64,
    pub series_float_max_n: u64,
}

impl Default for OraclePolicy {
    fn default() -> Self {
        OraclePolicy { exact_cap: DEFAULT_EXACT_CAP, series_exact_max_n: 600, series_float_max_n: 10_000 }
    }
}

impl OraclePolicy {
    pub fn choose(&self, n: u64) -> OracleKind {
        if 2 * n <= self.exact_cap as u64 {
            OracleKind::LatticeExact
        } else if n <= self.series_exact_max_n {
            OracleKind::SeriesExact
        } else if n <= self.series_float_max_n {
            OracleKind::SeriesFloat
        } else {
            OracleKind::Contour
        }
    }
}

fn axis_vertex(axis: Axis, k: u64) -> CombVertex {
    match axis {
        Axis::Y => CombVertex::new(0, 2 * k as i64),
        Axis::X => CombVertex::new(2 * k as i64, 0),
    }
}

/// `ln p^{(2n)}` at axis distance `2k` from a specific oracle.
pub fn oracle_log(kind: OracleKind, axis: Axis, k: u64, n: u64, exact_cap: usize) -> Result<f64> {
    if k > n {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(match kind {
        OracleKind::LatticeExact => LatticeOracle::new(exact_cap)
            .exact_prob(axis_vertex(axis, k), CombVertex::ORIGIN, 2 * n as usize)?
            .ln_abs(),
        OracleKind::SeriesExact => prob_coeff::<Dyadic>(axis, k, n as usize)?.ln_abs(),
        OracleKind::SeriesFloat => Coeff::to_f64(&prob_coeff::<TwoFloat>(axis, k, n as usize)?).ln(),
        OracleKind::Contour => cauchy_circle(axis, k, n, None)?.ln_value,
    })
}

const FLOAT_FLOOR_LN: f64 = -650.0;

/// `ln p^{(2n)}` from the cheapest oracle the policy allows.
pub fn exact_log(axis: Axis, k: u64, n: u64, policy: &OraclePolicy) -> Result<(f64, OracleKind)> {
    let kind = policy.choose(n);
    let v = oracle_log(kind, axis, k, n, policy.exact_cap)?;
    // Double-double coefficients underflow near 1e-308; the circle works in log space.
    if kind == OracleKind::SeriesFloat && k <= n && v < FLOAT_FLOOR_LN {
        return Ok((oracle_log(OracleKind::Contour, axis, k, n, policy.exact_cap)?, OracleKind::Contour));
    }
    Ok((v, kind))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRow {
    pub axis: Axis,
    pub n: u64,
    pub k: u64,
    pub xi: f64,
    pub exact_log: f64,
    pub estimate_log: f64,
    pub rel_error: f64,
    pub regime: Regime,
    pub oracle: OracleKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

pub const CSV_HEADER: &str = "axis,n,k,xi,exact_log,estimate_log,rel_error,regime,oracle";

impl ErrorTable {
    /// Largest relative error per `(regime, n)`.
    pub fn max_by_regime(&self) -> BTreeMap<(Regime, u64), f64> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            let e = out.entry((r.regime, r.n)).or_insert(0.0f64);
            *e = e.max(r.rel_error);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                r.axis,
                r.n,
                r.k,
                r.xi,
                r.exact_log,
                r.estimate_log,
                r.rel_error,
                r.regime,
                r.oracle.name()
            )
            .expect("writing to a String");
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialise")
    }
}

/// One row: oracle value, dispatched estimate and `|e^{est - exact} - 1|`.
pub fn compare_point(axis: Axis, k: u64, n: u64, params: &RegimeParams, policy: &OraclePolicy) -> Result<ErrorRow> {
    let est: EstimateResult = dispatch(axis, k, n, params)?;
    let (exact, oracle) = exact_log(axis, k, n, policy)?;
    Ok(ErrorRow {
        axis,
        n,
        k,
        xi: k as f64 / n as f64,
        exact_log: exact,
        estimate_log: est.log_value,
        rel_error: ((est.log_value - exact).exp() - 1.0).abs(),
        regime: est.regime,
        oracle,
    })
}

/// Compares every `(n, xi)` on the grid, with `k = round(xi n)`. Rows are
/// sorted by `(n, xi)`.
pub fn compare_grid(
    axis: Axis,
    n_list: &[u64],
    xi_grid: &[f64],
    params: &RegimeParams,
    policy: &OraclePolicy,
) -> Result<ErrorTable> {
    if n_list.is_empty() || xi_grid.is_empty() {
        return Err(Error::Domain("n and xi grids must be non-empty".into()));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        for &xi in xi_grid {
            if !(0.0..=1.0).contains(&xi) {
                return Err(Error::Domain(format!("xi must lie in [0, 1], got {xi}")));
            }
            let k = (xi * n as f64).round() as u64;
            rows.push(compare_point(axis, k, n, params, policy)?);
        }
    }
    rows.sort_by(|a, b| (a.n, a.xi).partial_cmp(&(b.n, b.xi)).expect("finite xi"));
    Ok(ErrorTable { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JonesRow {
    pub n: u64,
    pub k: u64,
    pub xi: f64,
    /// `ln(p_x / p_y)` from the estimators.
    pub log_ratio: f64,
    /// The same from an oracle, when `n` is small enough.
    pub oracle_log_ratio: Option<f64>,
    pub estimate_x: EstimateResult,
    pub estimate_y: EstimateResult,
}

/// `ln(p^{(2n)}((2k,0),o) / p^{(2n)}((0,2k),o))` along `xi_n = n^{-exponent}`.
pub fn jones_ratio(
    n_list: &[u64],
    exponent: f64,
    params: &RegimeParams,
    policy: &OraclePolicy,
    oracle_max_n: u64,
) -> Result<Vec<JonesRow>> {
    if !(exponent > 0.5 && exponent < 0.75) {
        return Err(Error::Domain(format!("exponent must lie in (1/2, 3/4), got {exponent}")));
    }
    let mut out = Vec::new();
    for &n in n_list {
        let k = ((n as f64).powf(1.0 - exponent)).round() as u64;
        let ex = dispatch(Axis::X, k, n, params)?;
        let ey = dispatch(Axis::Y, k, n, params)?;
        let oracle_log_ratio = if n <= oracle_max_n {
            Some(exact_log(Axis::X, k, n, policy)?.0 - exact_log(Axis::Y, k, n, policy)?.0)
        } else {
            None
        };
        out.push(JonesRow {
            n,
            k,
            xi: k as f64 / n as f64,
            log_ratio: ex.log_value - ey.log_value,
            oracle_log_ratio,
            estimate_x: ex,
            estimate_y: ey,
        });
    }
    Ok(out)
}

/// Spectral, fractal and walk dimensions of the 2-comb; the walk dimension
/// is the one the Einstein relation `d_s d_w = 2 d_f` would force.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EinsteinConstants {
    pub spectral: f64,
    pub fractal: f64,
    pub walk: f64,
}

pub fn einstein_constants() -> EinsteinConstants {
    let (spectral, fractal) = (1.5, 2.0);
    EinsteinConstants { spectral, fractal, walk: 2.0 * fractal / spectral }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationReport {
    pub samples: usize,
    pub violations: usize,
    /// Smallest `f(|z|) - |f(z)|` relative to `f(|z|)` over non-real samples.
    pub min_margin: f64,
    pub worst: Option<(String, f64, f64)>,
}

/// `|f(z)| <= f(|z|)` for `G`, `F_1^2`, `F_2^2` and a truncated series of `G`
/// at `samples` random points of the disc `|z| < 0.99`.
pub fn domination_check(samples: usize, seed: u64) -> Result<DominationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let partial = green_series_origin::<f64>(400)?;
    let eval_partial = |z: C64| partial.coeffs().iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let fns: [(&str, Box<dyn Fn(C64) -> Result<C64>>); 4] = [
        ("G", Box::new(green::eval_g)),
        ("F1^2", Box::new(green::eval_f1_sq)),
        ("F2^2", Box::new(green::eval_f2_sq)),
        ("G partial sum", Box::new(move |z| Ok(eval_partial(z)))),
    ];
    let mut report = DominationReport { samples, violations: 0, min_margin: f64::INFINITY, worst: None };
    for _ in 0..samples {
        let r = 0.99 * rng.gen::<f64>().sqrt();
        let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let z = C64::from_polar(r, th);
        for (name, f) in &fns {
            let at_abs = f(C64::new(r, 0.0))?.re;
            let at_z = f(z)?.norm();
            let margin = (at_abs - at_z) / at_abs;
            if margin < -1e-14 {
                report.violations += 1;
                report.worst = Some((name.to_string(), r, th));
            }
            if z.im != 0.0 {
                report.min_margin = report.min_margin.min(margin);
            }
        }
    }
    Ok(report)
}
