//! Saddle points and large-deviation rates for both start axes.

use combwalk::saddle::saddle;
use combwalk::series::Axis;

fn main() -> combwalk::error::Result<()> {
    println!("{:>5} {:>4} {:>12} {:>14} {:>12}", "xi", "axis", "z_o", "phi", "psi2");
    for xi in [0.01, 0.05, 0.1, 0.3, 0.5, 0.8] {
        for axis in [Axis::Y, Axis::X] {
            let s = saddle(axis, xi)?;
            println!("{xi:>5} {axis:>4} {:>12.8} {:>14.8} {:>12.4}", s.z_o, s.phi, s.psi2);
        }
    }
    Ok(())
}
