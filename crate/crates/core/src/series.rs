//! Truncated power series and the generating functions of the comb walk.
//!
//! With `s = sqrt(1 - z)` the return generating function at the origin is
//! `G = sqrt(2) / sqrt(1 - z + s)`, and the first-passage factors are
//! `F1^2 = (2 - z - 2s) / z` (one unit up a tooth, squared) and
//! `F2^2 = ((1+s)^2 + 2(1-z+s) - 2 sqrt(2 (1-z+s) (1+s)^2)) / z` (one unit
//! along the axis, squared). Every one of these has rational coefficients,
//! so the same code runs over exact dyadics and over floats.
//!
//! `[z^n] G (F1^2)^k = p^{(2n)}((0,2k), o)` and
//! `[z^n] G (F2^2)^k = p^{(2n)}((2k,0), o)`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Coefficient ring for [`PowerSeries`].
pub trait Coeff: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `None` if the quotient is not representable (or `rhs` is zero).
    fn div(&self, rhs: &Self) -> Option<Self>;
    /// `None` for negative input or, in exact rings, a non-square.
    fn sqrt(&self) -> Option<Self>;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Whether a term that must vanish by algebra actually does. Exact rings
    /// demand zero; float rings allow rounding relative to `scale`.
    fn vanishes(&self, scale: f64) -> bool;
}

impl Coeff for Dyadic {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Dyadic::from_int(v)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs)
    }
    fn sqrt(&self) -> Option<Self> {
        self.checked_sqrt()
    }
    fn is_positive(&self) -> bool {
        Dyadic::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(self)
    }
    fn vanishes(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
    fn sqrt(&self) -> Option<Self> {
        Some(BigRational::new(exact_isqrt(self.numer())?, exact_isqrt(self.denom())?))
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn vanishes(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn vanishes(&self, scale: f64) -> bool {
        self.abs() <= 64.0 * f64::EPSILON * scale
    }
}

impl Coeff for TwoFloat {
    fn zero() -> Self {
        TwoFloat::from(0.0)
    }
    fn one() -> Self {
        TwoFloat::from(1.0)
    }
    fn from_i64(v: i64) -> Self {
        TwoFloat::from(v)
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        (rhs.hi() != 0.0).then(|| *self / *rhs)
    }
    fn sqrt(&self) -> Option<Self> {
        (self.hi() >= 0.0).then(|| TwoFloat::sqrt(*self))
    }
    fn is_positive(&self) -> bool {
        self.hi() > 0.0
    }
    fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }
    fn vanishes(&self, scale: f64) -> bool {
        self.hi().abs() <= 1e-28 * scale
    }
}

/// Coefficients `c_0 .. c_N` of a series known modulo `z^{N+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> PowerSeries<T> {
    /// Pads or truncates `coeffs` to order `order`.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        PowerSeries { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        PowerSeries::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::constant(T::one(), order)
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        PowerSeries::new(vec![T::zero(), T::one()], order)
    }

    /// `1 + z + z^2 + ...`
    pub fn geometric(order: usize) -> Self {
        PowerSeries { coeffs: vec![T::one(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        PowerSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, T::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, T::sub)
    }

    pub fn scale(&self, c: &T) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        let n = self.order();
        let lo_a = self.coeffs.iter().position(|c| *c != T::zero()).unwrap_or(n + 1);
        let lo_b = rhs.coeffs.iter().position(|c| *c != T::zero()).unwrap_or(n + 1);
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().skip(lo_a) {
            if i + lo_b > n {
                break;
            }
            for j in lo_b..=(n - i) {
                out[i + j] = out[i + j].add(&a.mul(&rhs.coeffs[j]));
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `[z^n] (self * rhs)` without forming the whole product.
    pub fn product_coeff(&self, rhs: &Self, n: usize) -> T {
        (0..=n).fold(T::zero(), |acc, i| acc.add(&self.coeffs[i].mul(&rhs.coeffs[n - i])))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PowerSeries::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Square root with the positive root of the constant term.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !a0.is_positive() {
            return Err(Error::NonPositiveConstant(format!("{a0:?}")));
        }
        let s0 = a0
            .sqrt()
            .ok_or_else(|| Error::NotRepresentable(format!("sqrt of constant term {a0:?}")))?;
        let two_s0 = s0.add(&s0);
        let mut s = Vec::with_capacity(self.coeffs.len());
        s.push(s0);
        for n in 1..self.coeffs.len() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc = acc.sub(&s[k].mul(&s[n - k]));
            }
            let sn = acc
                .div(&two_s0)
                .ok_or_else(|| Error::NotRepresentable(format!("sqrt coefficient {n}")))?;
            s.push(sn);
        }
        Ok(PowerSeries { coeffs: s })
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn recip(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        let b0 = T::one()
            .div(a0)
            .ok_or_else(|| Error::NotRepresentable(format!("reciprocal of {a0:?}")))?;
        let mut b = Vec::with_capacity(self.coeffs.len());
        b.push(b0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = T::zero();
            for k in 1..=n {
                acc = acc.add(&self.coeffs[k].mul(&b[n - k]));
            }
            b.push(T::zero().sub(&acc.mul(&b0)));
        }
        Ok(PowerSeries { coeffs: b })
    }

    /// Divides by `z`, dropping one order. The constant term must vanish.
    pub fn div_z(&self) -> Result<Self> {
        let scale = self.coeffs.iter().take(3).map(|c| c.to_f64().abs()).fold(1.0, f64::max);
        if !self.coeffs[0].vanishes(scale) {
            return Err(Error::NotRepresentable(format!(
                "division by z with constant term {:?}",
                self.coeffs[0]
            )));
        }
        Ok(PowerSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// Horner evaluation of the truncated polynomial at a real point.
    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c.to_f64())
    }
}

fn half<T: Coeff>() -> T {
    T::one().div(&T::from_i64(2)).expect("1/2 is representable")
}

/// The building blocks `s = sqrt(1-z)` and `G`, both to order `order`.
pub struct GreenSeries<T> {
    pub s: PowerSeries<T>,
    pub g: PowerSeries<T>,
}

impl<T: Coeff> GreenSeries<T> {
    pub fn new(order: usize) -> Result<Self> {
        let one = PowerSeries::<T>::one(order);
        let z = PowerSeries::<T>::z(order);
        let s = one.sub(&z).sqrt()?;
        // G = 1/sqrt(w) with w = (1 - z + s)/2, which keeps the constant term at 1
        let w = one.sub(&z).add(&s).scale(&half());
        let g = w.sqrt()?.recip()?;
        Ok(GreenSeries { s, g })
    }

    pub fn order(&self) -> usize {
        self.g.order()
    }

    /// `F1^2` to order `order - 1`.
    pub fn f1_sq(&self) -> Result<PowerSeries<T>> {
        let n = self.order();
        let two = T::from_i64(2);
        PowerSeries::constant(two.clone(), n)
            .sub(&PowerSeries::z(n))
            .sub(&self.s.scale(&two))
            .div_z()
    }

    /// `F2^2` to order `order - 1`.
    pub fn f2_sq(&self) -> Result<PowerSeries<T>> {
        let n = self.order();
        let one = PowerSeries::<T>::one(n);
        let two = T::from_i64(2);
        let one_plus_s = one.add(&self.s);
        let sq = one_plus_s.mul(&one_plus_s);
        let t2 = one.sub(&PowerSeries::z(n)).add(&self.s);
        let cross = t2.mul(&sq).scale(&two).sqrt()?;
        sq.add(&t2.scale(&two)).sub(&cross.scale(&two)).div_z()
    }
}

/// Which line through the origin the start vertex lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Axis {
    /// Start at `(0, 2k)`, on the tooth through the origin.
    Y,
    /// Start at `(2k, 0)`, on the backbone.
    X,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::Y => "y",
            Axis::X => "x",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "y" => Ok(Axis::Y),
            "x" => Ok(Axis::X),
            other => Err(Error::Domain(format!("axis must be x or y, got {other:?}"))),
        }
    }
}

/// `G(z)` to order `order`.
pub fn green_series_origin<T: Coeff>(order: usize) -> Result<PowerSeries<T>> {
    Ok(GreenSeries::<T>::new(order)?.g)
}

/// `G (F^2)^k` to order `order`; coefficient `n` is `p^{(2n)}` from the
/// axis point at distance `2k`.
pub fn prob_series<T: Coeff>(axis: Axis, k: u64, order: usize) -> Result<PowerSeries<T>> {
    let gs = GreenSeries::<T>::new(order + 1)?;
    let g = PowerSeries::new(gs.g.coeffs()[..=order].to_vec(), order);
    if k == 0 {
        return Ok(g);
    }
    let f = match axis {
        Axis::Y => gs.f1_sq()?,
        Axis::X => gs.f2_sq()?,
    };
    Ok(g.mul(&f.pow(k)))
}

pub fn prob_series_y<T: Coeff>(k: u64, order: usize) -> Result<PowerSeries<T>> {
    prob_series(Axis::Y, k, order)
}

pub fn prob_series_x<T: Coeff>(k: u64, order: usize) -> Result<PowerSeries<T>> {
    prob_series(Axis::X, k, order)
}

/// A single coefficient `p^{(2n)}`, skipping the full final product.
pub fn prob_coeff<T: Coeff>(axis: Axis, k: u64, n: usize) -> Result<T> {
    let gs = GreenSeries::<T>::new(n + 1)?;
    let g = PowerSeries::new(gs.g.coeffs()[..=n].to_vec(), n);
    if k == 0 {
        return Ok(g.coeff(n).clone());
    }
    if k as usize > n {
        return Ok(T::zero());
    }
    let f = match axis {
        Axis::Y => gs.f1_sq()?,
        Axis::X => gs.f2_sq()?,
    };
    Ok(g.product_coeff(&f.pow(k), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CombVertex, LatticeOracle};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rat_series(c: &[(i64, i64)], order: usize) -> PowerSeries<BigRational> {
        PowerSeries::new(c.iter().map(|&(n, d)| q(n, d)).collect(), order)
    }

    #[test]
    fn products() {
        let a = rat_series(&[(1, 1), (1, 1)], 4);
        let b = rat_series(&[(1, 1), (-1, 1)], 4);
        assert_eq!(a.mul(&b), rat_series(&[(1, 1), (0, 1), (-1, 1)], 4));
        assert_eq!(a.mul(&PowerSeries::one(4)), a);
        let geo = PowerSeries::<BigRational>::geometric(10);
        let one_minus_z = rat_series(&[(1, 1), (-1, 1)], 10);
        assert_eq!(geo.mul(&one_minus_z), PowerSeries::one(10));
    }

    #[test]
    fn sqrt_of_one_minus_z_is_binomial() {
        assert_eq!(PowerSeries::<BigRational>::one(5).sqrt().unwrap(), PowerSeries::one(5));
        let s = rat_series(&[(1, 1), (-1, 1)], 12).sqrt().unwrap();
        // independent oracle: C(1/2, n) (-1)^n by the ratio recurrence
        let mut c = q(1, 1);
        for n in 0..=12i64 {
            assert_eq!(s.coeff(n as usize), &c, "n = {n}");
            c = c * q(2 * n - 1, 2 * (n + 1));
        }
        assert_eq!(s.coeff(3), &q(-1, 16));
    }

    #[test]
    fn sqrt_rejects_bad_constant() {
        let neg = rat_series(&[(-1, 1), (1, 1)], 3);
        assert!(matches!(neg.sqrt(), Err(Error::NonPositiveConstant(_))));
        let irrational = rat_series(&[(2, 1)], 3);
        assert!(matches!(irrational.sqrt(), Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn green_series_matches_lattice() {
        let g = green_series_origin::<Dyadic>(40).unwrap();
        assert_eq!(g.coeff(0).to_string(), "1");
        assert_eq!(g.coeff(1).to_string(), "3/8");
        let lat = LatticeOracle::default();
        for n in 0..=40 {
            assert_eq!(g.coeff(n), &lat.exact_prob(CombVertex::ORIGIN, CombVertex::ORIGIN, 2 * n).unwrap());
        }
    }

    #[test]
    fn first_passage_factors() {
        let gs = GreenSeries::<Dyadic>::new(10).unwrap();
        let f1 = gs.f1_sq().unwrap();
        assert!(f1.coeff(0).is_zero());
        assert_eq!(f1.coeff(1).to_string(), "1/4");
        let f2 = gs.f2_sq().unwrap();
        assert!(f2.coeff(0).is_zero());
        assert!(f2.coeff(1).is_positive());
        assert_eq!(prob_series_y::<Dyadic>(1, 3).unwrap().coeff(1).to_string(), "1/4");
        assert_eq!(prob_series_x::<Dyadic>(1, 3).unwrap().coeff(1).to_string(), "1/16");
    }

    #[test]
    fn axis_series_match_lattice() {
        let lat = LatticeOracle::default();
        for k in 0..=4u64 {
            let y = prob_series_y::<Dyadic>(k, 20).unwrap();
            let x = prob_series_x::<Dyadic>(k, 20).unwrap();
            for n in 0..=20 {
                let py = lat.exact_prob(CombVertex::new(0, 2 * k as i64), CombVertex::ORIGIN, 2 * n).unwrap();
                let px = lat.exact_prob(CombVertex::new(2 * k as i64, 0), CombVertex::ORIGIN, 2 * n).unwrap();
                assert_eq!(y.coeff(n), &py, "y k={k} n={n}");
                assert_eq!(x.coeff(n), &px, "x k={k} n={n}");
            }
        }
    }

    #[test]
    fn single_coefficient_matches_series() {
        for axis in [Axis::Y, Axis::X] {
            let s = prob_series::<Dyadic>(axis, 3, 25).unwrap();
            assert_eq!(&prob_coeff::<Dyadic>(axis, 3, 25).unwrap(), s.coeff(25));
            assert!(prob_coeff::<Dyadic>(axis, 30, 25).unwrap().is_zero());
        }
    }

    #[test]
    fn float_modes_track_exact() {
        let exact = prob_series_x::<Dyadic>(2, 60).unwrap();
        let f = prob_series_x::<f64>(2, 60).unwrap();
        let dd = prob_series_x::<TwoFloat>(2, 60).unwrap();
        for n in 2..=60 {
            let e = exact.coeff(n).to_f64();
            assert!((f.coeff(n) / e - 1.0).abs() < 1e-12);
            assert!((Coeff::to_f64(dd.coeff(n)) / e - 1.0).abs() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sqrt_round_trip(tail in proptest::collection::vec((-20i64..20, 0u32..6), 1..8)) {
            let mut c = vec![q(1, 1)];
            c.extend(tail.iter().map(|&(n, e)| q(n, 1 << e)));
            let s = PowerSeries::new(c, 10);
            let sq = s.mul(&s);
            prop_assert_eq!(sq.sqrt().unwrap(), s.clone());
            prop_assert_eq!(s.sqrt().unwrap().pow(2), s);
        }

        #[test]
        fn coefficients_are_probabilities(k in 0u64..6, axis_x in any::<bool>()) {
            let axis = if axis_x { Axis::X } else { Axis::Y };
            for c in prob_series::<Dyadic>(axis, k, 30).unwrap().coeffs() {
                prop_assert!(!c.is_negative());
                prop_assert!(c <= &Dyadic::from_int(1));
            }
        }
    }
}
