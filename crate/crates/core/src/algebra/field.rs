//! Coefficient fields: arbitrary-precision rationals and the Mersenne prime field.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::Polynomial;

/// Exact rational numbers.
pub type Rational = BigRational;

/// The arithmetic every coefficient domain provides.
pub trait Field: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    /// Image of an exact rational; `None` when the denominator is not invertible.
    fn from_rational(q: &Rational) -> Option<Self>;

    fn add_assign(&mut self, rhs: &Self) {
        *self = Field::add(self, rhs);
    }

    /// Decides `p1 * q1 == p2 * q2`.
    fn products_equal(
        p1: &Polynomial<Self>,
        q1: &Polynomial<Self>,
        p2: &Polynomial<Self>,
        q2: &Polynomial<Self>,
    ) -> bool {
        p1.mul(q1) == p2.mul(q2)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.numer().is_one() && self.denom().is_one()
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
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn products_equal(
        p1: &Polynomial<Self>,
        q1: &Polynomial<Self>,
        p2: &Polynomial<Self>,
        q2: &Polynomial<Self>,
    ) -> bool {
        super::kernel::products_equal(p1, q1, p2, q2)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Closest `f64` to a rational (used only by the numeric discovery layer).
pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge operands: scale down both sides before dividing.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// The prime modulus 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// An element of the prime field of order 2^61 - 1, always kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const fn new_reduced(v: u64) -> Self {
        Fp(v)
    }

    pub fn new(v: u64) -> Self {
        Fp(reduce64(v))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn from_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("residue fits in u64"))
    }
}

#[inline]
fn reduce64(v: u64) -> u64 {
    let r = (v & MODULUS) + (v >> 61);
    if r >= MODULUS {
        r - MODULUS
    } else {
        r
    }
}

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let prod = (a as u128) * (b as u128);
    let lo = (prod as u64) & MODULUS;
    let hi = (prod >> 61) as u64;
    reduce64(lo + hi)
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^61-1)", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
    fn sub(&self, rhs: &Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MODULUS - rhs.0)
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(mul_mod(self.0, rhs.0))
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(MODULUS - self.0)
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(MODULUS - 2))
        }
    }
    fn from_i64(v: i64) -> Self {
        if v >= 0 {
            Fp::new(v as u64)
        } else {
            Fp::new(v.unsigned_abs()).neg()
        }
    }
    fn from_rational(q: &Rational) -> Option<Self> {
        let n = Fp::from_bigint(q.numer());
        let d = Fp::from_bigint(q.denom());
        d.inv().map(|di| n.mul(&di))
    }
}

impl Fp {
    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base);
            }
            base = mul_mod(base, base);
            e >>= 1;
        }
        Fp(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse_roundtrip() {
        for v in [1u64, 2, 3, 12345, MODULUS - 1, 1 << 60] {
            let x = Fp::new(v);
            assert_eq!(x.mul(&x.inv().unwrap()), Fp::one());
        }
        assert!(Fp::zero().inv().is_none());
    }

    #[test]
    fn prime_field_reduces_large_products() {
        let a = Fp::new(MODULUS - 1);
        // (-1)(-1) = 1
        assert_eq!(a.mul(&a), Fp::one());
        assert_eq!(Fp::from_i64(-1), a);
        assert_eq!(Fp::new(MODULUS), Fp::zero());
    }

    #[test]
    fn rational_embeds_into_prime_field() {
        let half = Fp::from_rational(&rational(1, 2)).unwrap();
        assert_eq!(half.add(&half), Fp::one());
        let q = rational(-5, 7);
        let x = Fp::from_rational(&q).unwrap();
        assert_eq!(x.mul(&Fp::from_i64(7)), Fp::from_i64(-5));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(rational_to_string(&rational(-5, 7)), "-5/7");
        assert_eq!(rational_to_string(&rational(4, 2)), "2");
        assert!((rational_to_f64(&rational(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
