//! Exact return probabilities on the comb, computed two independent ways.

use combwalk::dyadic::Dyadic;
use combwalk::lattice::{CombVertex, LatticeOracle};
use combwalk::series::{prob_coeff, Axis};

fn main() -> combwalk::error::Result<()> {
    let oracle = LatticeOracle::new(200);
    println!("{:>3} {:>3} {:>28} {:>28}", "n", "k", "lattice y", "series y");
    for n in [1usize, 2, 5, 10, 40] {
        for k in [0u64, 1, 3] {
            let lat = oracle.exact_prob(CombVertex::new(0, 2 * k as i64), CombVertex::ORIGIN, 2 * n)?;
            let ser: Dyadic = prob_coeff(Axis::Y, k, n)?;
            assert_eq!(lat, ser);
            println!("{n:>3} {k:>3} {:>28.20e} {:>28.20e}", lat.to_f64(), ser.to_f64());
        }
    }

    // Walks started on the backbone return less often than walks started on a tooth.
    let n = 50;
    let py = oracle.exact_prob(CombVertex::new(0, 8), CombVertex::ORIGIN, 2 * n)?;
    let px = oracle.exact_prob(CombVertex::new(8, 0), CombVertex::ORIGIN, 2 * n)?;
    println!("p_y = {:.6e}, p_x = {:.6e} at distance 8 after {} steps", py.to_f64(), px.to_f64(), 2 * n);
    println!("p^(2) from (0,0): {}", oracle.exact_prob(CombVertex::ORIGIN, CombVertex::ORIGIN, 2)?);
    Ok(())
}
