//! Acceptance checks. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use combwalk::asymptotics::{
    dispatch, estimate_in, integral_x, integral_y, local_limit, Regime, RegimeParams,
};
use combwalk::contour::{cauchy_circle, contour_spec, split_integral, ContourKind};
use combwalk::dyadic::Dyadic;
use combwalk::green::C64;
use combwalk::harness::{domination_check, exact_log, jones_ratio, oracle_log, OracleKind, OraclePolicy};
use combwalk::lattice::{degree, step, CombVertex, DistTable, LatticeOracle};
use combwalk::saddle::{
    complex_step_derivative, phi_x, phi_y, psi, psi_prime, psi_tilde_1, psi_tilde_2, saddle, x_taylor_coeffs,
    PHI_X_SMALL_XI,
};
use combwalk::series::{prob_series, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn axis_start(axis: Axis, k: u64) -> CombVertex {
    match axis {
        Axis::Y => CombVertex::new(0, 2 * k as i64),
        Axis::X => CombVertex::new(2 * k as i64, 0),
    }
}

fn rel(est_log: f64, exact_log: f64) -> f64 {
    (est_log - exact_log).exp_m1().abs()
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn triple_oracle() -> Outcome {
    let mut worst_circle: f64 = 0.0;
    let mut compared = 0;
    for axis in [Axis::Y, Axis::X] {
        for k in 0..=10u64 {
            let series = prob_series::<Dyadic>(axis, k, 60).map_err(|e| e.to_string())?;
            let mut dist = DistTable::delta(axis_start(axis, k));
            for n in 0..=60usize {
                if n > 0 {
                    dist = step(&step(&dist));
                }
                let lat = dist.get(CombVertex::ORIGIN);
                if &lat != series.coeff(n) {
                    return Err(format!("{axis} k={k} n={n}: lattice {lat} vs series {}", series.coeff(n)));
                }
                compared += 1;
                if lat.is_zero() {
                    continue;
                }
                let c = cauchy_circle(axis, k, n as u64, None).map_err(|e| e.to_string())?;
                worst_circle = worst_circle.max(rel(c.ln_value, lat.ln_abs()));
            }
        }
    }
    check(worst_circle < 1e-9, format!("{compared} rational matches, worst circle rel error {worst_circle:.2e}"))
}

fn local_limit_two() -> Outcome {
    let target = SQRT_2 / gamma(0.25);
    let mut errs = Vec::new();
    for m in [500u64, 1000, 2000, 5000] {
        let lp = oracle_log(OracleKind::SeriesFloat, Axis::Y, 0, m, 300).map_err(|e| e.to_string())?;
        errs.push(((m as f64).powf(0.75) * lp.exp() / target - 1.0).abs());
    }
    check(
        errs[3] < 0.05 && strictly_decreasing(&errs),
        format!("target {target:.6}, rel errors {}", sci(&errs)),
    )
}

fn saddle_residuals() -> Outcome {
    let mut worst: f64 = 0.0;
    for axis in [Axis::Y, Axis::X] {
        for j in 1..=200 {
            let xi = j as f64 / 201.0;
            let s = saddle(axis, xi).map_err(|e| e.to_string())?;
            let cs = complex_step_derivative(|w| psi(axis, w, xi).unwrap(), s.z_o).abs();
            let an = psi_prime(axis, C64::new(s.z_o, 0.0), xi).map_err(|e| e.to_string())?.norm();
            worst = worst.max(cs).max(an);
        }
    }
    check(worst < 1e-12, format!("max |Psi'(z_o)| = {worst:.2e} over 2 x 200 points"))
}

fn bulk_convergence() -> Outcome {
    let policy = OraclePolicy::default();
    let p = RegimeParams::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for axis in [Axis::Y, Axis::X] {
        let mut errs = Vec::new();
        for n in [100u64, 200, 400] {
            let (ex, _) = exact_log(axis, n / 2, n, &policy).map_err(|e| e.to_string())?;
            let est = dispatch(axis, n / 2, n, &p).map_err(|e| e.to_string())?;
            errs.push(rel(est.log_value, ex));
        }
        ok &= errs[2] < 0.1 && strictly_decreasing(&errs);
        lines.push(format!("{axis}: {}", sci(&errs)));
    }
    check(ok, lines.join("; "))
}

fn special_integrals() -> Outcome {
    let y0 = integral_y(0.0);
    let y0_err = (y0 - SQRT_2 * gamma(0.75)).abs();
    let big = integral_y(1e4) / (2.0 * (1e4 * PI).sqrt());
    let min_x = (0..=100).map(|j| integral_x(j as f64 / 100.0)).fold(f64::INFINITY, f64::min);
    let x0_err = (integral_x(0.0) - gamma(0.75) / 4.0).abs();
    check(
        y0_err < 1e-8 && (0.99..=1.01).contains(&big) && min_x > 0.0 && x0_err < 1e-8,
        format!("|I_Y(0) err| {y0_err:.1e}, I_Y ratio {big:.5}, min I_X {min_x:.4e}, |I_X(0) err| {x0_err:.1e}"),
    )
}

fn small_xi() -> Outcome {
    let p = RegimeParams::default();
    let n = 10_000;
    let mut lines = Vec::new();
    let mut ok = true;
    for (axis, regime) in [(Axis::Y, Regime::YTiny), (Axis::X, Regime::XTiny)] {
        let ex = oracle_log(OracleKind::SeriesFloat, axis, 1, n, 300).map_err(|e| e.to_string())?;
        let est = estimate_in(regime, 1, n, &p).map_err(|e| e.to_string())?;
        let e = rel(est.log_value, ex);
        ok &= e < 0.1;
        let zero = estimate_in(regime, 0, n, &p).map_err(|e| e.to_string())?;
        let reduce = (zero.value / local_limit(2, 2 * n) - 1.0).abs();
        ok &= reduce < 1e-12;
        lines.push(format!("{axis}: rel error {e:.3e}, k=0 vs local limit {reduce:.1e}"));
    }
    check(ok, lines.join("; "))
}

fn contour_split() -> Outcome {
    let mut ok = true;
    let mut y = Vec::new();
    for n in [100u64, 200, 400, 500] {
        let spec = contour_spec(ContourKind::UPlaneHybrid, Axis::Y, 0.2, 0.25, 16).map_err(|e| e.to_string())?;
        y.push(split_integral(&spec, n / 5, n).map_err(|e| e.to_string())?.ratio_b_over_a().abs());
    }
    ok &= y[3] < 0.01 && strictly_decreasing(&y);
    // The quarter path only closes outside the unit circle from n = 500 on at this xi.
    let mut x = Vec::new();
    for n in [500u64, 1000, 2000, 4000] {
        let nf = n as f64;
        let xi = 2.0 * nf.powf(-0.75);
        let k = (xi * nf).round() as u64;
        let spec = contour_spec(ContourKind::VPlaneQuarter, Axis::X, xi, 0.25, 16).map_err(|e| e.to_string())?;
        x.push(split_integral(&spec, k, n).map_err(|e| e.to_string())?.ratio_b_over_a().abs());
    }
    ok &= x[0] < 0.01 && strictly_decreasing(&x);
    check(ok, format!("y n=100..500 {}; x n=500..4000 {}", sci(&y), sci(&x)))
}

fn taylor_machinery() -> Outcome {
    let xi = 0.1;
    let tc = x_taylor_coeffs(xi, 200).map_err(|e| e.to_string())?;
    let (m, r) = (256, 0.5);
    let mut worst: f64 = 0.0;
    for h in 1..=12usize {
        let (mut c1, mut c2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            let v = C64::from_polar(r, th);
            let rot = C64::from_polar(1.0, -(h as f64) * th);
            c1 += psi_tilde_1(v, xi) * rot;
            c2 += psi_tilde_2(v, xi) * rot;
        }
        let scale = 1.0 / (m as f64 * r.powi(h as i32));
        let (c1, c2) = (c1 * scale, c2 * scale);
        let (d, dp) = (tc.d[h], tc.d_prime[h]);
        let e = if d == 0.0 {
            c1.norm().max(c2.norm())
        } else {
            ((c1 - d).norm() / d.abs()).max((c2 - dp).norm() / dp.norm())
        };
        worst = worst.max(e);
    }
    let small: f64 = 1e-4;
    let st = x_taylor_coeffs(small, 200).map_err(|e| e.to_string())?;
    let ratios = [
        st.a2 / (3.0 * 2f64.powf(2.0 / 3.0) * small.powf(2.0 / 3.0)),
        st.a3 / (2f64.powf(11.0 / 6.0) * small.powf(1.0 / 3.0)),
        st.a4,
    ];
    check(
        worst < 1e-6 && ratios.iter().all(|r| (r - 1.0).abs() < 0.05),
        format!("worst coefficient error {worst:.1e}, ratios {ratios:.4?}"),
    )
}

fn rate_laws() -> Outcome {
    let xi: f64 = 1e-3;
    let ry = phi_y(xi) / -(xi * xi);
    let c = phi_x(xi).map_err(|e| e.to_string())? / xi.powf(4.0 / 3.0);
    check(
        (ry - 1.0).abs() < 0.01 && c < 0.0 && (c / -PHI_X_SMALL_XI - 1.0).abs() < 0.01,
        format!("phiY/(-xi^2) = {ry:.5}, phiX/xi^(4/3) = {c:.5} vs C = {:.5}", -PHI_X_SMALL_XI),
    )
}

fn jones() -> Outcome {
    let rows = jones_ratio(&[1_000, 10_000, 100_000], 0.625, &RegimeParams::default(), &OraclePolicy::default(), 1_000)
        .map_err(|e| e.to_string())?;
    let est: Vec<f64> = rows.iter().map(|r| r.log_ratio).collect();
    let anchor = rows[0].oracle_log_ratio.ok_or("no oracle anchor at n = 1000")?;
    let anchored = [anchor, est[1], est[2]];
    check(
        strictly_decreasing(&est) && strictly_decreasing(&anchored) && est[2] < -10.0,
        format!("estimates {est:.4?}, oracle at 1e3 {anchor:.4}"),
    )
}

fn parity_and_identities() -> Outcome {
    let lattice = LatticeOracle::new(300);
    let mut d = DistTable::delta(CombVertex::ORIGIN);
    for n in 1..=50usize {
        d = step(&d);
        if let Some((v, _)) = d.entries.iter().find(|(v, _)| (v.x + v.y + n as i64).rem_euclid(2) == 1) {
            return Err(format!("mass at {v:?} after {n} steps"));
        }
    }
    for n in 0..=50usize {
        for k in 0..=n {
            let direct = lattice
                .exact_prob(CombVertex::new(0, 2 * k as i64 + 1), CombVertex::ORIGIN, 2 * n + 1)
                .map_err(|e| e.to_string())?;
            let via = lattice.odd_from_even_y(k, n).map_err(|e| e.to_string())?;
            if direct != via {
                return Err(format!("odd identity fails at k={k}, n={n}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let mut pick = || CombVertex::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let (u, v) = (pick(), pick());
        let steps = rng.gen_range(0..=30usize) * 2 + ((u.x + u.y + v.x + v.y).rem_euclid(2)) as usize;
        let shift = rng.gen_range(-20..=20);
        let uv = lattice.exact_prob(u, v, steps).map_err(|e| e.to_string())?;
        let vu = lattice.exact_prob(v, u, steps).map_err(|e| e.to_string())?;
        let lhs = &uv * &Dyadic::from_int(degree(u) as i64);
        let rhs = &vu * &Dyadic::from_int(degree(v) as i64);
        if lhs != rhs {
            return Err(format!("reversibility fails for {u:?} -> {v:?} in {steps}"));
        }
        let moved = lattice
            .exact_prob(CombVertex::new(u.x + shift, u.y), CombVertex::new(v.x + shift, v.y), steps)
            .map_err(|e| e.to_string())?;
        if moved != uv {
            return Err(format!("translation fails for {u:?} -> {v:?} by {shift}"));
        }
    }
    Ok("parity n <= 50, odd identity 1326 pairs, 100 random reversibility and translation pairs".into())
}

fn domination() -> Outcome {
    let r = domination_check(1000, 2024).map_err(|e| e.to_string())?;
    check(
        r.violations == 0 && r.min_margin > 0.0,
        format!("{} samples, {} violations, min margin {:.3e}", r.samples, r.violations, r.min_margin),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("triple oracle agreement", triple_oracle),
        ("local limit d = 2", local_limit_two),
        ("saddle residuals", saddle_residuals),
        ("bulk convergence", bulk_convergence),
        ("special integrals", special_integrals),
        ("small-xi corollaries", small_xi),
        ("contour split", contour_split),
        ("taylor machinery", taylor_machinery),
        ("rate-function laws", rate_laws),
        ("jones impossibility", jones),
        ("parity and identities", parity_and_identities),
        ("domination sweep", domination),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
