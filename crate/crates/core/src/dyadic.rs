//! Exact dyadic rationals `m * 2^e`.
//!
//! Every n-step probability of the comb walk has a power-of-two denominator,
//! and so do the power-series coefficients of its generating functions. A
//! dyadic number never needs a gcd, which keeps exact series arithmetic cheap.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact number `mantissa * 2^exponent` kept in canonical form
/// (odd mantissa, or zero with exponent zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// `numerator / 2^shift`.
    pub fn from_scaled(numerator: BigUint, shift: u64) -> Self {
        Dyadic::new(BigInt::from(numerator), -(shift as i64))
    }

    /// Converts a rational whose reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        if !den.is_positive() {
            return None;
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << (self.exponent as u64))
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << ((-self.exponent) as u64))
        }
    }

    /// Natural logarithm of |self|; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.mantissa.magnitude();
        let bits = mag.bits();
        let (top, dropped) = if bits > 64 {
            let drop = bits - 64;
            ((mag >> drop).to_f64().unwrap_or(f64::MAX), drop as i64)
        } else {
            (mag.to_f64().unwrap_or(f64::MAX), 0)
        };
        top.ln() + ((dropped + self.exponent) as f64) * std::f64::consts::LN_2
    }

    /// Nearest f64 (up to one rounding of the top 64 bits); underflows to 0.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mag = self.mantissa.magnitude();
        let drop = mag.bits().saturating_sub(64);
        let top = (mag >> drop).to_f64().unwrap_or(f64::MAX);
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * ldexp(top, drop as i64 + self.exponent)
    }

    /// Exact quotient when the divisor is `±2^j` times a divisor of the
    /// mantissa; `None` otherwise.
    pub fn checked_div(&self, other: &Dyadic) -> Option<Dyadic> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Dyadic::from_int(0));
        }
        let (q, r) = num_integer::Integer::div_rem(&self.mantissa, &other.mantissa);
        if !r.is_zero() {
            return None;
        }
        Some(Dyadic::new(q, self.exponent - other.exponent))
    }

    /// Exact square root when one exists.
    pub fn checked_sqrt(&self) -> Option<Dyadic> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        // exponent must be even once the mantissa is odd
        if self.exponent % 2 != 0 {
            return None;
        }
        let root = self.mantissa.magnitude().sqrt();
        if &(&root * &root) != self.mantissa.magnitude() {
            return None;
        }
        Some(Dyadic::new(BigInt::from(root), self.exponent / 2))
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }
}

fn aligned_sum(a: &Dyadic, b: &Dyadic, negate_b: bool) -> Dyadic {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b.clone() } else { b.clone() };
    }
    let e = a.exponent.min(b.exponent);
    let ma = &a.mantissa << ((a.exponent - e) as u64);
    let mb = &b.mantissa << ((b.exponent - e) as u64);
    let m = if negate_b { ma - mb } else { ma + mb };
    Dyadic::new(m, e)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        aligned_sum(self, rhs, false)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        aligned_sum(&self, &rhs, false)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        aligned_sum(self, rhs, true)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        aligned_sum(&self, &rhs, true)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic { mantissa: &self.mantissa * &rhs.mantissa, exponent: self.exponent + rhs.exponent }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        d.mantissa.sign().cmp(&Sign::NoSign)
    }
}

impl fmt::Display for Dyadic {
    /// Prints `num/den` in lowest terms (or just `num` for integers).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        if r.denom().is_one() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}
