//! Points of the projective line over a field.

use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Homogeneous coordinates `(u : v)`, not both zero; infinity is `(1 : 0)`.
#[derive(Clone)]
pub struct ProjPoint<F: Field> {
    u: F,
    v: F,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(u: F, v: F) -> Result<Self> {
        if u.is_zero() && v.is_zero() {
            return Err(Error::IndeterminatePoint("(0 : 0)".into()));
        }
        Ok(ProjPoint { u, v })
    }

    pub(crate) fn new_unchecked(u: F, v: F) -> Self {
        ProjPoint { u, v }
    }

    pub fn finite(x: F) -> Self {
        ProjPoint { u: x, v: F::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            u: F::one(),
            v: F::zero(),
        }
    }

    pub fn u(&self) -> &F {
        &self.u
    }

    pub fn v(&self) -> &F {
        &self.v
    }

    pub fn is_infinite(&self) -> bool {
        self.v.is_zero()
    }

    /// The affine coordinate `u / v`, or `None` at infinity.
    pub fn affine(&self) -> Option<F> {
        self.v.inv().map(|vi| self.u.mul(&vi))
    }

    /// Representative with `v = 1`, or `(1 : 0)` at infinity.
    pub fn normalized(&self) -> Self {
        match self.affine() {
            Some(x) => Self::finite(x),
            None => Self::infinity(),
        }
    }

    pub fn scaled(&self, k: &F) -> Self {
        ProjPoint {
            u: self.u.mul(k),
            v: self.v.mul(k),
        }
    }
}

impl<F: Field> PartialEq for ProjPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.u.mul(&other.v) == other.u.mul(&self.v)
    }
}

impl<F: Field> Eq for ProjPoint<F> {}

impl<F: Field> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some(x) => write!(f, "{x}"),
            None => f.write_str("inf"),
        }
    }
}

impl<F: Field> fmt::Debug for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.u, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Fp;

    #[test]
    fn equality_is_up_to_scaling() {
        let p = ProjPoint::new(Fp::from_i64(3), Fp::from_i64(5)).unwrap();
        let q = p.scaled(&Fp::from_i64(7));
        assert_eq!(p, q);
        assert_ne!(p, ProjPoint::infinity());
        assert_eq!(ProjPoint::<Fp>::infinity(), ProjPoint::new(Fp::from_i64(4), Fp::zero()).unwrap());
    }

    #[test]
    fn zero_zero_rejected() {
        assert!(ProjPoint::new(Fp::zero(), Fp::zero()).is_err());
    }
}
