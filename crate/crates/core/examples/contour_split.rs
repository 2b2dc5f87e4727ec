//! Steepest-descent contours: the saddle piece A against the remainder B.

use combwalk::contour::{contour_spec, split_integral, ContourKind};
use combwalk::harness::{exact_log, OraclePolicy};
use combwalk::series::Axis;

fn main() -> combwalk::error::Result<()> {
    let policy = OraclePolicy::default();
    for n in [100u64, 200, 400] {
        let k = n / 5;
        let spec = contour_spec(ContourKind::UPlaneHybrid, Axis::Y, 0.2, 0.25, 16)?;
        let r = split_integral(&spec, k, n)?;
        let (ex, _) = exact_log(Axis::Y, k, n, &policy)?;
        println!("y n={n:<5} B/A = {:.3e}  ln total - ln exact = {:.1e}", r.ratio_b_over_a(), r.ln_total() - ex);
    }
    for n in [500u64, 1000, 2000, 4000] {
        let k = (2.0 * (n as f64).powf(0.25)).round() as u64;
        let xi = 2.0 * (n as f64).powf(-0.75);
        for kind in [ContourKind::VPlaneQuarter, ContourKind::VPlaneTwoBeta] {
            // The two-beta path needs its breakpoint below alpha, which fails for small n.
            match contour_spec(kind, Axis::X, xi, 0.25, 16).and_then(|s| split_integral(&s, k, n)) {
                Ok(r) => println!("x n={n:<5} {kind:?}: B/A = {:.3e}", r.ratio_b_over_a()),
                Err(e) => println!("x n={n:<5} {kind:?}: {e}"),
            }
        }
    }

    // Deep in the small-xi window both x-axis paths close and must agree.
    let (k, n) = (1u64, 2000u64);
    for kind in [ContourKind::VPlaneQuarter, ContourKind::VPlaneTwoBeta] {
        let r = split_integral(&contour_spec(kind, Axis::X, k as f64 / n as f64, 0.25, 8)?, k, n)?;
        println!("x k={k} n={n} {kind:?}: total {:.15e}", r.total());
    }
    println!("oracle:                 {:.15e}", exact_log(Axis::X, k, n, &policy)?.0.exp());
    Ok(())
}
