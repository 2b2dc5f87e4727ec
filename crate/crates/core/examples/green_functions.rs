//! Closed-form Green functions of the d-comb, checked against their series.

use combwalk::green::{eval_g, eval_gd, GreenValues, C64};
use combwalk::series::green_series_origin;

fn main() -> combwalk::error::Result<()> {
    let series = green_series_origin::<f64>(400)?;
    for x in [0.1, 0.5, 0.9] {
        let closed = eval_g(C64::new(x, 0.0))?.re;
        println!("G({x}) closed {closed:.15} series {:.15}", series.eval_f64(x));
    }

    for d in 2..=4 {
        let z = C64::new(0.4, 0.3);
        println!("G_{d}(0.4+0.3i) = {:.12}", eval_gd(d, z)?);
    }

    // On the cut the upper-continuity value must be requested explicitly.
    let z = C64::new(1.5, 0.0);
    assert!(eval_g(z).is_err());
    let v = GreenValues::at(z, true)?;
    println!("G(1.5 + i0) = {:.12}, F1^2 = {:.12}, F2^2 = {:.12}", v.g, v.f1_sq, v.f2_sq);
    Ok(())
}
