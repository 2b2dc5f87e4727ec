//! Command-line front end. Every command writes a CSV or JSON table; floats
//! use 17 significant digits in lowercase scientific notation so output is
//! reproducible byte for byte.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::asymptotics::{dispatch, RegimeParams};
use crate::config::{Format, RunConfig};
use crate::contour::{contour_spec, split_integral, ContourKind};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::green::{eval_gd, GreenValues, C64};
use crate::harness::{compare_grid, einstein_constants, jones_ratio, OracleKind};
use crate::lattice::{CombVertex, LatticeOracle};
use crate::saddle;
use crate::series::{prob_coeff, prob_series, Axis};

#[derive(Parser, Debug)]
#[command(name = "combwalk", version, about = "Transition probabilities of the simple random walk on the 2-comb")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalOpts {
    /// TOML file with [regime], [precision] and [output] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Lattice steps the exact dynamic program may take.
    #[arg(long, global = true)]
    pub exact_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact p^(2n) from (0,2k) or (2k,0) to the origin, as a rational.
    Exact {
        k: u64,
        n: u64,
        #[arg(long, default_value = "y")]
        axis: Axis,
    },
    /// Coefficients 0..=N of the generating function of p^(2n) at distance 2k.
    Series {
        k: u64,
        #[arg(value_name = "N")]
        order: usize,
        #[arg(long, default_value = "y")]
        axis: Axis,
    },
    /// Green function of the d-comb at a complex point ("re" or "re,im").
    Green {
        z: String,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Use the upper-continuity value on the cut z > 1.
        #[arg(long)]
        extend: bool,
    },
    /// Saddle point, rate function and derivatives at xi.
    Saddle {
        xi: f64,
        #[arg(long, default_value = "y")]
        axis: Axis,
    },
    /// Asymptotic estimate with the regime that applies.
    Asym {
        k: u64,
        n: u64,
        #[arg(long, default_value = "y")]
        axis: Axis,
    },
    /// Split of the Cauchy integral into the saddle piece (A) and the rest (B).
    Contour {
        #[arg(long)]
        kind: ContourKind,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Geometry parameter; defaults to k/n.
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long, default_value = "y")]
        axis: Axis,
        #[arg(long, default_value_t = 16)]
        nodes: usize,
    },
    /// Oracle versus estimate over an (n, xi) grid.
    Compare {
        #[arg(long, default_value = "y")]
        axis: Axis,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        xi: Vec<f64>,
        /// Exit with status 4 when any relative error exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// log(p_x / p_y) along xi_n = n^(-exponent).
    Jones {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        n: Vec<u64>,
        #[arg(long, default_value_t = 0.625)]
        exponent: f64,
        /// Also evaluate the ratio with an oracle for n up to this.
        #[arg(long, default_value_t = 1000)]
        oracle_max_n: u64,
    },
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::Domain(format!("cannot parse {p:?} as a number")));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::Domain(format!("complex point must be \"re\" or \"re,im\", got {s:?}"))),
    }
}

/// A table that renders as CSV or as a JSON array with the same keys.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<serde_json::Value>) {
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        let cell = |v: &serde_json::Value| match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) if n.is_f64() => f(n.as_f64().expect("f64")),
            serde_json::Value::Null => String::new(),
            other => other.to_string(),
        };
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(cell).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let arr: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: serde_json::Map<String, serde_json::Value> =
                            self.header.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect();
                        serde_json::Value::Object(m)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&arr).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

fn resolve(global: &GlobalOpts) -> Result<RunConfig> {
    let mut cfg = match &global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let r: &mut RegimeParams = &mut cfg.regime;
    for (slot, flag) in [
        (&mut r.a, global.a),
        (&mut r.c, global.c),
        (&mut r.alpha, global.alpha),
        (&mut r.epsilon, global.epsilon),
        (&mut r.kappa, global.kappa),
    ] {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    if let Some(cap) = global.exact_cap {
        cfg.precision.exact_cap = cap;
    }
    if let Some(fmt) = global.format {
        cfg.output.format = fmt;
    }
    if let Some(p) = &global.output {
        cfg.output.path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exact_rational(axis: Axis, k: u64, n: u64, cfg: &RunConfig) -> Result<(Dyadic, OracleKind)> {
    let start = match axis {
        Axis::Y => CombVertex::new(0, 2 * k as i64),
        Axis::X => CombVertex::new(2 * k as i64, 0),
    };
    if 2 * n as usize <= cfg.precision.exact_cap {
        let v = LatticeOracle::new(cfg.precision.exact_cap).exact_prob(start, CombVertex::ORIGIN, 2 * n as usize)?;
        return Ok((v, OracleKind::LatticeExact));
    }
    if n > cfg.precision.series_exact_max_n {
        return Err(Error::Infeasible(format!(
            "exact value at n = {n} exceeds the series limit {}",
            cfg.precision.series_exact_max_n
        )));
    }
    Ok((prob_coeff::<Dyadic>(axis, k, n as usize)?, OracleKind::SeriesExact))
}

/// Executes one parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<(String, RunConfig)> {
    let cfg = resolve(&cli.global)?;
    let fmt = cfg.output.format;
    let out = match &cli.command {
        Command::Exact { k, n, axis } => {
            let (v, oracle) = exact_rational(*axis, *k, *n, &cfg)?;
            let mut t = Table::new(&["axis", "n", "k", "probability", "log_value", "oracle"]);
            let ln = if v.is_zero() { f64::NEG_INFINITY } else { v.ln_abs() };
            t.push(vec![
                json!(axis.to_string()),
                json!(n),
                json!(k),
                json!(v.to_string()),
                if ln.is_finite() { json!(ln) } else { json!("-inf") },
                json!(oracle.name()),
            ]);
            t.render(fmt)
        }
        Command::Series { k, order, axis } => {
            let s = prob_series::<Dyadic>(*axis, *k, *order)?;
            let mut t = Table::new(&["n", "coefficient", "log_value"]);
            for (i, c) in s.coeffs().iter().enumerate().take(order + 1) {
                let ln = if c.is_zero() { json!("-inf") } else { json!(c.ln_abs()) };
                t.push(vec![json!(i), json!(c.to_string()), ln]);
            }
            t.render(fmt)
        }
        Command::Green { z, d, extend } => {
            let z = parse_complex(z)?;
            let mut t = Table::new(&["d", "z_re", "z_im", "re", "im"]);
            let v = if *d == 2 { GreenValues::at(z, *extend)?.g } else { eval_gd(*d, z)? };
            t.push(vec![json!(d), json!(z.re), json!(z.im), json!(v.re), json!(v.im)]);
            t.render(fmt)
        }
        Command::Saddle { xi, axis } => {
            let sd = saddle::saddle(*axis, *xi)?;
            let mut t = Table::new(&["axis", "xi", "z_o", "u_o", "v_o", "phi", "psi2", "psi3"]);
            t.push(vec![
                json!(axis.to_string()),
                json!(sd.xi),
                json!(sd.z_o),
                json!(sd.u_o),
                sd.v_o.map_or(serde_json::Value::Null, |v| json!(v)),
                json!(sd.phi),
                json!(sd.psi2),
                json!(sd.psi3),
            ]);
            t.render(fmt)
        }
        Command::Asym { k, n, axis } => {
            let e = dispatch(*axis, *k, *n, &cfg.regime)?;
            let mut t = Table::new(&["axis", "n", "k", "xi", "log_value", "value", "regime", "formula"]);
            let mut add = |e: &crate::asymptotics::EstimateResult| {
                t.push(vec![
                    json!(axis.to_string()),
                    json!(n),
                    json!(k),
                    json!(*k as f64 / *n as f64),
                    json!(e.log_value),
                    json!(e.value),
                    json!(e.regime.name()),
                    json!(e.formula_id),
                ]);
            };
            add(&e);
            if let Some(nb) = &e.neighbor {
                add(nb);
            }
            t.render(fmt)
        }
        Command::Contour { kind, n, k, xi, axis, nodes } => {
            let axis = match kind {
                ContourKind::UPlaneHybrid => Axis::Y,
                ContourKind::VPlaneQuarter | ContourKind::VPlaneTwoBeta => Axis::X,
                ContourKind::SaddleCircle => *axis,
            };
            let xi = xi.unwrap_or(*k as f64 / *n as f64);
            let spec = contour_spec(*kind, axis, xi, cfg.regime.alpha, *nodes)?;
            let r = split_integral(&spec, *k, *n)?;
            let mut t = Table::new(&[
                "axis", "n", "k", "xi", "log_scale", "part_a_re", "part_a_im", "part_b_re", "part_b_im", "log_total",
                "b_over_a",
            ]);
            t.push(vec![
                json!(axis.to_string()),
                json!(n),
                json!(k),
                json!(xi),
                json!(r.log_scale),
                json!(r.part_a.re),
                json!(r.part_a.im),
                json!(r.part_b.re),
                json!(r.part_b.im),
                json!(r.ln_total()),
                json!(r.ratio_b_over_a()),
            ]);
            t.render(fmt)
        }
        Command::Compare { axis, n, xi, tolerance } => {
            let table = compare_grid(*axis, n, xi, &cfg.regime, &cfg.precision)?;
            let text = match fmt {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json() + "\n",
            };
            if let Some(tol) = tolerance {
                if let Some(bad) = table.rows.iter().find(|r| r.rel_error > *tol) {
                    emit(&text, &cfg)?;
                    return Err(Error::Tolerance(format!(
                        "relative error {:.3e} at n = {}, k = {} exceeds {tol}",
                        bad.rel_error, bad.n, bad.k
                    )));
                }
            }
            text
        }
        Command::Jones { n, exponent, oracle_max_n } => {
            let rows = jones_ratio(n, *exponent, &cfg.regime, &cfg.precision, *oracle_max_n)?;
            let ec = einstein_constants();
            let mut t = Table::new(&[
                "n", "k", "xi", "log_ratio", "oracle_log_ratio", "regime_x", "regime_y", "d_s", "d_f", "d_w",
            ]);
            for r in rows {
                t.push(vec![
                    json!(r.n),
                    json!(r.k),
                    json!(r.xi),
                    json!(r.log_ratio),
                    r.oracle_log_ratio.map_or(serde_json::Value::Null, |v| json!(v)),
                    json!(r.estimate_x.regime.name()),
                    json!(r.estimate_y.regime.name()),
                    json!(ec.spectral),
                    json!(ec.fractal),
                    json!(ec.walk),
                ]);
            }
            t.render(fmt)
        }
    };
    Ok((out, cfg))
}

fn emit(text: &str, cfg: &RunConfig) -> Result<()> {
    match &cfg.output.path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|(text, cfg)| emit(&text, &cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("combwalk").chain(args.iter().copied())).unwrap();
        execute(&cli).map(|(s, _)| s)
    }

    #[test]
    fn exact_prints_rational() {
        let s = out(&["exact", "0", "1", "--axis", "y"]).unwrap();
        assert!(s.lines().nth(1).unwrap().contains(",3/8,"), "{s}");
    }

    #[test]
    fn asym_reports_regime() {
        let s = out(&["asym", "0", "100", "--axis", "x"]).unwrap();
        assert!(s.contains("X_TINY"));
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.1, -0.2").unwrap(), C64::new(0.1, -0.2));
        assert!(parse_complex("a,b,c").is_err());
    }

    #[test]
    fn formats_carry_same_numbers() {
        let csv = out(&["saddle", "0.5", "--axis", "x"]).unwrap();
        let json = out(&["saddle", "0.5", "--axis", "x", "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[5].parse::<f64>().unwrap(), v[0]["phi"].as_f64().unwrap());
    }

    #[test]
    fn validation_errors_map_to_codes() {
        assert_eq!(out(&["asym", "99", "100"]).unwrap_err().exit_code(), 2);
        assert_eq!(out(&["exact", "1", "1000"]).unwrap_err().exit_code(), 3);
        assert_eq!(out(&["asym", "1", "100", "--alpha", "0.3"]).unwrap_err().exit_code(), 2);
    }
}
