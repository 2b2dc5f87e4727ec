//! Complex evaluation of the comb Green functions.
//!
//! Everything is expressed through `s = sqrt(1 - z)`:
//!
//! * `G = sqrt(2) / sqrt(s^2 + s)`
//! * `F1^2 = z / (1 + s)^2`
//! * `F2^2 = z / (1 + s + sqrt(2) t)^2` with `t = sqrt(s^2 + s)`
//!
//! The last two are the rationalised forms of `(1 - s)/(1 + s)` and
//! `(1 + s - sqrt(2) t)^2 / z`; they avoid cancellation near `z = 0`.
//! Square roots take `arg w` in `[-pi, pi)`, so the functions are holomorphic
//! off the cut `[1, inf)`. On the cut the value continued from the upper
//! half plane is available on request.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square root with `arg w` taken in `[-pi, pi)`: negative reals map to the
/// negative imaginary axis whatever the sign of their zero imaginary part.
pub fn principal_sqrt(w: C64) -> C64 {
    if w.im == 0.0 && w.re < 0.0 {
        C64::new(0.0, -(-w.re).sqrt())
    } else {
        w.sqrt()
    }
}

/// `sqrt(1 - z)`. Points of `(1, inf)` are rejected unless `extend` asks for
/// the boundary value from the upper half plane.
pub fn sqrt_one_minus(z: C64, extend: bool) -> Result<C64> {
    if z.im == 0.0 && z.re > 1.0 {
        if !extend {
            return Err(Error::OnCut(z.re));
        }
        return Ok(C64::new(0.0, -(z.re - 1.0).sqrt()));
    }
    Ok(principal_sqrt(C64::new(1.0, 0.0) - z))
}

/// `G`, `F1^2` and `F2^2` at one point, together with the radicals used.
#[derive(Clone, Copy, Debug)]
pub struct GreenValues {
    pub z: C64,
    pub s: C64,
    pub t: C64,
    pub g: C64,
    pub f1_sq: C64,
    pub f2_sq: C64,
}

impl GreenValues {
    /// Evaluates from the radical `s`; `z = 1 - s^2`. Contours that are
    /// parametrised by `s` use this directly and never cross a branch.
    pub fn from_s(s: C64) -> Self {
        let one = C64::new(1.0, 0.0);
        let z = one - s * s;
        let t = principal_sqrt(s * s + s);
        let g = SQRT_2 / t;
        let a = one + s;
        let b = a + SQRT_2 * t;
        GreenValues { z, s, t, g, f1_sq: z / (a * a), f2_sq: z / (b * b) }
    }

    pub fn at(z: C64, extend: bool) -> Result<Self> {
        let mut v = GreenValues::from_s(sqrt_one_minus(z, extend)?);
        v.z = z;
        Ok(v)
    }

    /// `log G + k log F^2 - (n+1) log z` for the Cauchy integrand on the
    /// given axis. The log branch is irrelevant once exponentiated.
    pub fn log_integrand(&self, axis: crate::series::Axis, k: u64, n: u64) -> C64 {
        let f = match axis {
            crate::series::Axis::Y => self.f1_sq,
            crate::series::Axis::X => self.f2_sq,
        };
        let mut out = self.g.ln() - (n as f64 + 1.0) * self.z.ln();
        if k > 0 {
            out += k as f64 * f.ln();
        }
        out
    }
}

pub fn eval_g(z: C64) -> Result<C64> {
    Ok(GreenValues::at(z, false)?.g)
}

pub fn eval_f1_sq(z: C64) -> Result<C64> {
    Ok(GreenValues::at(z, false)?.f1_sq)
}

pub fn eval_f2_sq(z: C64) -> Result<C64> {
    Ok(GreenValues::at(z, false)?.f2_sq)
}

/// Return generating function of the d-comb by the recursion
/// `G_d = d / sqrt((1 + (d-1)/G_{d-1})^2 - z^2)`, `G_1 = 1/sqrt(1 - z^2)`.
pub fn eval_gd(d: u32, z: C64) -> Result<C64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let one = C64::new(1.0, 0.0);
    let z2 = z * z;
    if z2.im == 0.0 && z2.re > 1.0 {
        return Err(Error::OnCut(z2.re));
    }
    let mut g = one / principal_sqrt(one - z2);
    for k in 2..=d {
        let inner = one + (k as f64 - 1.0) / g;
        g = k as f64 / principal_sqrt(inner * inner - z2);
    }
    Ok(g)
}

/// Closed form of `G_3` obtained by unrolling the recursion twice.
pub fn eval_g3_closed(z: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let r = principal_sqrt(one - z * z);
    let inner = 3.0 * r * r + 2.0 * r + 2.0 * SQRT_2 * principal_sqrt(r * r + r);
    3.0 / principal_sqrt(inner)
}

/// Limit of `G_d(x) (1-x)^{1/2^d}` as `x -> 1-`.
pub fn singular_constant(d: u32) -> f64 {
    let e = 0.5f64.powi(d as i32);
    d as f64 * 2f64.powf(e - 1.0)
}

/// `G = (1-z)^{-1/4} H(z) + (1-z)^{1/4} K(z)` near `z = 1`, with `H` and `K`
/// holomorphic in `|1 - z| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularDecomposition {
    /// Coefficients of `H` in powers of `(1 - z)`.
    pub h: Vec<f64>,
    /// Coefficients of `K` in powers of `(1 - z)`.
    pub k: Vec<f64>,
}

/// `C(-1/2, j)` for `j = 0..len`.
fn binom_minus_half(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for j in 0..len {
        out.push(c);
        c *= (-0.5 - j as f64) / (j as f64 + 1.0);
    }
    out
}

pub fn singular_parts(order: usize) -> SingularDecomposition {
    let c = binom_minus_half(2 * order + 2);
    SingularDecomposition {
        h: (0..=order).map(|n| SQRT_2 * c[2 * n]).collect(),
        k: (0..=order).map(|n| SQRT_2 * c[2 * n + 1]).collect(),
    }
}

impl SingularDecomposition {
    fn horner(c: &[f64], w: C64) -> C64 {
        c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * w + a)
    }

    pub fn h_at(&self, z: C64) -> C64 {
        Self::horner(&self.h, C64::new(1.0, 0.0) - z)
    }

    pub fn k_at(&self, z: C64) -> C64 {
        Self::horner(&self.k, C64::new(1.0, 0.0) - z)
    }

    /// Recombines into `G`, using `(1-z)^{1/4} = sqrt(sqrt(1-z))`.
    pub fn recompose(&self, z: C64) -> Result<C64> {
        let q = principal_sqrt(sqrt_one_minus(z, false)?);
        Ok(self.h_at(z) / q + q * self.k_at(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{green_series_origin, GreenSeries};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    fn random_disc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
        let rho = r * rng.gen::<f64>().sqrt();
        C64::from_polar(rho, rng.gen_range(-PI..PI))
    }

    #[test]
    fn principal_branch() {
        assert_eq!(principal_sqrt(c(4.0, 0.0)), c(2.0, 0.0));
        assert_eq!(principal_sqrt(c(-1.0, 0.0)), c(0.0, -1.0));
        assert_eq!(principal_sqrt(c(-1.0, -0.0)), c(0.0, -1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let w = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let r = principal_sqrt(w);
            assert!(close(r * r, w, 1e-14));
            let arg = r.arg();
            assert!((-PI / 2.0..PI / 2.0).contains(&arg) || r.norm() == 0.0);
        }
    }

    #[test]
    fn cut_requires_extension() {
        assert_eq!(eval_g(c(2.0, 0.0)).unwrap_err(), Error::OnCut(2.0));
        let on = GreenValues::at(c(2.0, 0.0), true).unwrap();
        let above = GreenValues::at(c(2.0, 1e-12), false).unwrap();
        assert!(close(on.g, above.g, 1e-9));
        assert!(close(on.f2_sq, above.f2_sq, 1e-9));
    }

    #[test]
    fn values_at_special_points() {
        assert!(close(eval_g(c(0.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15));
        assert!(close(eval_f1_sq(c(1.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15));
        assert_eq!(eval_f2_sq(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn unrationalised_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let z = random_disc(&mut rng, 0.95);
            if z.norm() < 0.05 {
                continue;
            }
            let v = GreenValues::at(z, false).unwrap();
            let one = c(1.0, 0.0);
            let f1 = (2.0 - z - 2.0 * v.s) / z;
            let e = one + v.s - SQRT_2 * v.t;
            let f2 = e * e / z;
            let g = SQRT_2 / principal_sqrt(one - z + v.s);
            assert!(close(v.f1_sq, f1, 1e-12), "{z}");
            assert!(close(v.f2_sq, f2, 1e-11), "{z}");
            assert!(close(v.g, g, 1e-13), "{z}");
        }
    }

    #[test]
    fn closed_forms_match_series() {
        let gs = GreenSeries::<f64>::new(400).unwrap();
        let f1 = gs.f1_sq().unwrap();
        let f2 = gs.f2_sq().unwrap();
        for z in [0.3, -0.5, 0.6] {
            let v = GreenValues::at(c(z, 0.0), false).unwrap();
            assert!((v.g.re - gs.g.eval_f64(z)).abs() < 1e-12);
            assert!((v.f1_sq.re - f1.eval_f64(z)).abs() < 1e-12);
            assert!((v.f2_sq.re - f2.eval_f64(z)).abs() < 1e-12);
        }
        let g = green_series_origin::<f64>(2000).unwrap();
        let v = eval_g(c(0.9, 0.0)).unwrap().re;
        assert!((g.eval_f64(0.9) - v).abs() < 1e-12);
    }

    #[test]
    fn d_comb_recursion() {
        assert!(close(eval_gd(1, c(0.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let z = random_disc(&mut rng, 0.98);
            let g2 = eval_gd(2, z).unwrap();
            assert!(close(g2, eval_g(z * z).unwrap(), 1e-12), "{z}");
            assert!(close(eval_gd(3, z).unwrap(), eval_gd(3, -z).unwrap(), 1e-12));
        }
        for z in [c(0.5, 0.0), c(0.3, 0.4), c(-0.7, 0.1)] {
            assert!(close(eval_gd(3, z).unwrap(), eval_g3_closed(z), 1e-13), "{z}");
        }
    }

    #[test]
    fn singular_scaling() {
        for d in 1..=4u32 {
            let e = 0.5f64.powi(d as i32);
            let f = |j: i32| {
                let h = 10f64.powi(-j);
                eval_gd(d, c(1.0 - h, 0.0)).unwrap().re * h.powf(e)
            };
            // leading correction is of order (1-z)^{1/2^{d-1}}: one Richardson step
            let ratio = 10f64.powf(-2.0 * e);
            let extrapolated = (f(8) - ratio * f(7)) / (1.0 - ratio);
            let target = singular_constant(d);
            assert!((extrapolated / target - 1.0).abs() < 1e-3, "d={d}: {extrapolated} vs {target}");
            assert!((f(8) / target - 1.0).abs() < (f(4) / target - 1.0).abs());
        }
    }

    #[test]
    fn singular_decomposition() {
        let sd = singular_parts(80);
        assert!((sd.h_at(c(1.0, 0.0)).re - SQRT_2).abs() < 1e-15);
        assert!((sd.k_at(c(1.0, 0.0)).re + 1.0 / SQRT_2).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let z = c(1.0, 0.0) - random_disc(&mut rng, 0.5);
            if z.im == 0.0 && z.re > 1.0 {
                continue;
            }
            let g = eval_g(z).unwrap();
            assert!(close(sd.recompose(z).unwrap(), g, 1e-10), "{z}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.01..3.0));
            let a = GreenValues::at(z, false).unwrap();
            let b = GreenValues::at(z.conj(), false).unwrap();
            assert!(close(a.g.conj(), b.g, 1e-14));
            assert!(close(a.f1_sq.conj(), b.f1_sq, 1e-14));
            assert!(close(a.f2_sq.conj(), b.f2_sq, 1e-14));
        }
    }
}
