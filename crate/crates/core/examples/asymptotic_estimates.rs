//! The regime dispatcher against an oracle across several scales of k.

use combwalk::asymptotics::{dispatch, RegimeParams};
use combwalk::harness::{exact_log, OraclePolicy};
use combwalk::series::Axis;

fn main() -> combwalk::error::Result<()> {
    let params = RegimeParams::default();
    let policy = OraclePolicy::default();
    let n = 2000;
    println!("{:>4} {:>5} {:>12} {:>10} {:>9}", "axis", "k", "regime", "est/exact", "oracle");
    for axis in [Axis::Y, Axis::X] {
        for k in [0, 1, 5, 20, 60, 200, 600, 1200] {
            let est = dispatch(axis, k, n, &params)?;
            let (ex, oracle) = exact_log(axis, k, n, &policy)?;
            println!("{axis:>4} {k:>5} {:>12} {:>10.6} {:>9}", est.regime, (est.log_value - ex).exp(), oracle.name());
        }
    }
    Ok(())
}
