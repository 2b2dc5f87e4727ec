//! Backbone versus tooth starts at the same graph distance, with
//! k = n^(1-gamma) for gamma between 1/2 and 3/4.

use combwalk::asymptotics::RegimeParams;
use combwalk::harness::{einstein_constants, jones_ratio, OraclePolicy};

fn main() -> combwalk::error::Result<()> {
    let rows = jones_ratio(&[1_000, 10_000, 100_000, 1_000_000], 0.625, &RegimeParams::default(), &OraclePolicy::default(), 1_000)?;
    for r in rows {
        let oracle = r.oracle_log_ratio.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "n={:<8} k={:<5} log(p_x/p_y) = {:>9.4} (oracle {oracle}) [{} / {}]",
            r.n, r.k, r.log_ratio, r.estimate_x.regime, r.estimate_y.regime
        );
    }
    let c = einstein_constants();
    println!("d_s = {}, d_f = {}, d_w = {:.4}", c.spectral, c.fractal, c.walk);
    Ok(())
}
