//! Power series of the Green function and of p^(2n) for fixed k, in exact
//! dyadic arithmetic and in double-double floats.

use combwalk::dyadic::Dyadic;
use combwalk::series::{green_series_origin, prob_series, Axis, GreenSeries};
use twofloat::TwoFloat;

fn main() -> combwalk::error::Result<()> {
    let g = green_series_origin::<Dyadic>(8)?;
    println!("G(z) = sum a_n z^n");
    for (n, c) in g.coeffs().iter().enumerate() {
        println!("  a_{n} = {c}");
    }

    let gs = GreenSeries::<Dyadic>::new(6)?;
    println!("F1^2 coefficients: {:?}", gs.f1_sq()?.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("F2^2 coefficients: {:?}", gs.f2_sq()?.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let exact = prob_series::<Dyadic>(Axis::X, 3, 60)?;
    let fast = prob_series::<TwoFloat>(Axis::X, 3, 60)?;
    let n = 60;
    let e = exact.coeff(n).to_f64();
    let f: f64 = fast.coeff(n).hi() + fast.coeff(n).lo();
    println!("p_x^(120), k = 3: exact {e:.17e}, double-double {f:.17e}, rel diff {:.1e}", ((e - f) / e).abs());
    Ok(())
}
