//! Fast exact decision of `p1 * q1 == p2 * q2` over the rationals.
//!
//! Coefficients are cleared to integers and accumulated in `i128` when a
//! magnitude bound shows no overflow is possible; monomials are packed into
//! mixed-radix indices. Anything outside those limits falls back to plain
//! expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rustc_hash::FxHashMap;

use super::field::Rational;
use super::poly::Polynomial;

const DENSE_LIMIT: u128 = 1 << 22;

pub(crate) fn products_equal(
    p1: &Polynomial<Rational>,
    q1: &Polynomial<Rational>,
    p2: &Polynomial<Rational>,
    q2: &Polynomial<Rational>,
) -> bool {
    match packed_products_equal(p1, q1, p2, q2) {
        Some(v) => v,
        None => p1.mul(q1) == p2.mul(q2),
    }
}

struct Packed {
    terms: Vec<(u64, i128)>,
    max_abs: u128,
}

fn packed_products_equal(
    p1: &Polynomial<Rational>,
    q1: &Polynomial<Rational>,
    p2: &Polynomial<Rational>,
    q2: &Polynomial<Rational>,
) -> Option<bool> {
    let polys = [p1, q1, p2, q2];
    if polys.iter().any(|p| p.is_zero()) {
        return Some(p1.mul(q1) == p2.mul(q2));
    }
    let mut lcm = BigInt::one();
    for p in polys {
        for (_, c) in p.terms() {
            lcm = lcm.lcm(c.denom());
        }
    }

    let width = polys
        .iter()
        .map(|p| p.degree_vector().len())
        .max()
        .unwrap_or(0);
    let dv: Vec<Vec<u32>> = polys
        .iter()
        .map(|p| {
            let mut d = p.degree_vector();
            d.resize(width, 0);
            d
        })
        .collect();
    let mut strides = vec![0u64; width];
    let mut space: u128 = 1;
    for i in 0..width {
        let r = (dv[0][i] + dv[1][i]).max(dv[2][i] + dv[3][i]) as u128 + 1;
        strides[i] = u64::try_from(space).ok()?;
        space = space.checked_mul(r)?;
        if space > u64::MAX as u128 {
            return None;
        }
    }

    let pack = |p: &Polynomial<Rational>| -> Option<Packed> {
        let mut terms = Vec::with_capacity(p.len());
        let mut max_abs = 0u128;
        for (m, c) in p.terms() {
            let scaled = c.numer() * (&lcm / c.denom());
            let v = scaled.to_i128()?;
            max_abs = max_abs.max(v.unsigned_abs());
            let idx = m
                .exponents()
                .iter()
                .zip(&strides)
                .map(|(&e, &s)| e as u64 * s)
                .sum();
            terms.push((idx, v));
        }
        Some(Packed { terms, max_abs })
    };
    let [a1, b1, a2, b2] = [pack(p1)?, pack(q1)?, pack(p2)?, pack(q2)?];

    // Each output coefficient receives at most min(len) contributions.
    let bound = |a: &Packed, b: &Packed| -> Option<u128> {
        let n = a.terms.len().min(b.terms.len()) as u128;
        a.max_abs.checked_mul(b.max_abs)?.checked_mul(n)
    };
    let total = bound(&a1, &b1)?.checked_add(bound(&a2, &b2)?)?;
    if total >= 1u128 << 126 {
        return None;
    }

    if space <= DENSE_LIMIT {
        let mut acc = vec![0i128; space as usize];
        accumulate(&a1, &b1, 1, |i, v| acc[i as usize] += v);
        accumulate(&a2, &b2, -1, |i, v| acc[i as usize] += v);
        Some(acc.iter().all(|&v| v == 0))
    } else {
        let cap = (a1.terms.len() * b1.terms.len()).min(1 << 22);
        let mut acc: FxHashMap<u64, i128> =
            FxHashMap::with_capacity_and_hasher(cap, Default::default());
        accumulate(&a1, &b1, 1, |i, v| *acc.entry(i).or_insert(0) += v);
        accumulate(&a2, &b2, -1, |i, v| *acc.entry(i).or_insert(0) += v);
        Some(acc.values().all(|&v| v == 0))
    }
}

fn accumulate(a: &Packed, b: &Packed, sign: i128, mut add: impl FnMut(u64, i128)) {
    for &(ia, ca) in &a.terms {
        let ca = ca * sign;
        for &(ib, cb) in &b.terms {
            add(ia + ib, ca * cb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{rational, Field};
    use crate::algebra::symbol::Symbol;

    fn x() -> Polynomial<Rational> {
        Polynomial::var(Symbol::X)
    }
    fn y() -> Polynomial<Rational> {
        Polynomial::var(Symbol::Y)
    }

    #[test]
    fn agrees_with_expansion() {
        let half = Polynomial::constant(rational(1, 2));
        let p1 = x().add(&y()).mul(&half);
        let q1 = x().sub(&y());
        let p2 = x().mul(&x()).sub(&y().mul(&y()));
        let q2 = half.clone();
        assert!(products_equal(&p1, &q1, &p2, &q2));
        let q2b = Polynomial::constant(rational(1, 3));
        assert!(!products_equal(&p1, &q1, &p2, &q2b));
    }

    #[test]
    fn falls_back_on_huge_coefficients() {
        let big = Polynomial::constant(<Rational as Field>::from_i64(i64::MAX))
            .mul(&Polynomial::constant(<Rational as Field>::from_i64(i64::MAX)));
        let p = x().mul(&big);
        assert!(packed_products_equal(&p, &p, &p, &p).is_none());
        assert!(products_equal(&p, &p, &p, &p));
        assert!(!products_equal(&p, &p, &p, &x()));
    }
}
