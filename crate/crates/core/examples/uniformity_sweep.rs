//! Worst relative error of the estimator per regime over a (n, xi) grid.
//! Pass `--csv` to print the full table.

use combwalk::asymptotics::RegimeParams;
use combwalk::harness::{compare_grid, OraclePolicy};
use combwalk::series::Axis;

fn main() -> combwalk::error::Result<()> {
    let ns = [200, 400, 600];
    let xis = [0.0, 0.01, 0.05, 0.1, 0.2, 0.4, 0.6, 0.9];
    let params = RegimeParams::default();
    let policy = OraclePolicy::default();
    for axis in [Axis::Y, Axis::X] {
        let table = compare_grid(axis, &ns, &xis, &params, &policy)?;
        if std::env::args().any(|a| a == "--csv") {
            print!("{}", table.to_csv());
        }
        for ((regime, n), err) in table.max_by_regime() {
            println!("{axis} {regime:<12} n={n:<4} max rel error {err:.3e}");
        }
    }
    Ok(())
}
