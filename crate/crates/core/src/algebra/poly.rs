//! Sparse multivariate polynomials in canonical form.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::field::{Field, Rational};
use super::symbol::Symbol;

/// Exponent vector indexed by symbol id, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Self::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: u16) -> Self {
        let mut v: SmallVec<[u16; 8]> = SmallVec::from_elem(0, s.index() + 1);
        v[s.index()] = e;
        Monomial(v).trimmed()
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps)).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponent(&self, s: Symbol) -> u16 {
        self.0.get(s.index()).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.0.clone();
        for (i, e) in short.0.iter().enumerate() {
            v[i] = v[i].checked_add(*e).expect("exponent overflow");
        }
        Monomial(v)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            v[i] = v[i].checked_sub(*e)?;
        }
        Some(Monomial(v).trimmed())
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial((0..n).map(|i| self.0[i].min(other.0[i])).collect()).trimmed()
    }

    /// Splits into the part over the masked symbols and the rest.
    fn split(&self, mask: &[bool]) -> (Monomial, Monomial) {
        let mut inside = self.0.clone();
        let mut outside = self.0.clone();
        for i in 0..self.0.len() {
            if mask.get(i).copied().unwrap_or(false) {
                outside[i] = 0;
            } else {
                inside[i] = 0;
            }
        }
        (Monomial(inside).trimmed(), Monomial(outside).trimmed())
    }
}

/// Graded lexicographic order; `X > Y > Z > a > ...` among equal degrees.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    let a = self.0.get(i).copied().unwrap_or(0);
                    let b = other.0.get(i).copied().unwrap_or(0);
                    match a.cmp(&b) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let name = Symbol::from_index(i).name();
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial as a list of terms sorted by decreasing monomial, with no
/// zero coefficients. Two polynomials are equal iff their term lists are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    terms: Vec<(Monomial, F)>,
}

impl<F: Field> Default for Polynomial<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(F::from_i64(c))
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Monomial::var(s), F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(iter: I) -> Self {
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (m, c) in iter {
            match acc.get_mut(&m) {
                Some(e) => e.add_assign(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, F>) -> Self {
        let mut terms: Vec<(Monomial, F)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.as_slice() {
            [] => Some(F::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.total_degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(s) as u32).max().unwrap_or(0)
    }

    /// Largest exponent of every symbol, indexed by symbol id.
    pub fn degree_vector(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for (m, _) in &self.terms {
            if out.len() < m.exponents().len() {
                out.resize(m.exponents().len(), 0);
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                out[i] = out[i].max(e as u32);
            }
        }
        out
    }

    /// Symbols occurring with a nonzero exponent, in table order.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.degree_vector()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, _)| Symbol::from_index(i))
            .collect()
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.merge(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.merge(rhs, true)
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { t.1.neg() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { terms: out }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m).scale(c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, F> =
            HashMap::with_capacity(self.terms.len().max(rhs.terms.len()) * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => e.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
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

    /// Evaluates at a point given as values indexed by symbol id.
    /// Panics if a symbol of the polynomial has no value.
    pub fn eval(&self, values: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&values[i].pow(e as u32));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Maps coefficients into another field; `None` if some coefficient has
    /// no image.
    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Polynomial<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let g = f(c)?;
            if !g.is_zero() {
                terms.push((m.clone(), g));
            }
        }
        Some(Polynomial { terms })
    }

    /// Groups terms by their exponents over `syms`: returns pairs
    /// (monomial in `syms`, coefficient polynomial in the other symbols).
    pub fn collect_in(&self, syms: &[Symbol]) -> Vec<(Monomial, Polynomial<F>)> {
        let width = syms.iter().map(|s| s.index() + 1).max().unwrap_or(0);
        let mut mask = vec![false; width];
        for s in syms {
            mask[s.index()] = true;
        }
        let mut groups: HashMap<Monomial, Vec<(Monomial, F)>> = HashMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(&mask);
            groups.entry(inside).or_default().push((outside, c.clone()));
        }
        let mut out: Vec<(Monomial, Polynomial<F>)> = groups
            .into_iter()
            .map(|(k, ts)| {
                let mut ts = ts;
                ts.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                (k, Polynomial { terms: ts })
            })
            .collect();
        out.sort_by(|x, y| y.0.cmp(&x.0));
        out
    }

    /// Coefficients as a univariate polynomial in `s`, lowest degree first.
    pub fn univariate_coefficients(&self, s: Symbol) -> Vec<Polynomial<F>> {
        let d = self.degree_in(s) as usize;
        let mut out = vec![Polynomial::zero(); d + 1];
        for (k, coeff) in self.collect_in(&[s]) {
            out[k.exponent(s) as usize] = coeff;
        }
        out
    }

    pub fn derivative(&self, s: Symbol) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(s);
            if e == 0 {
                return None;
            }
            let mono = m.div(&Monomial::var(s)).expect("exponent positive");
            Some((mono, c.mul(&F::from_i64(e as i64))))
        });
        Self::from_terms(terms)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |g, (m, _)| g.gcd(m))
    }

    pub fn div_monomial(&self, mono: &Monomial) -> Option<Self> {
        let terms: Option<Vec<_>> = self
            .terms
            .iter()
            .map(|(m, c)| m.div(mono).map(|q| (q, c.clone())))
            .collect();
        terms.map(|terms| Polynomial { terms })
    }

    /// Exact division by `d`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, F)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let qm = rm.div(lm)?;
            let qc = rc.mul(&lc_inv);
            rem = rem.sub(&d.mul_monomial(&qm).scale(&qc));
            quot.push((qm, qc));
        }
        Some(Polynomial::from_terms(quot))
    }
}

impl Polynomial<Rational> {
    /// Primitive part: integer coefficients with gcd 1 and a positive leading
    /// coefficient. Returns the scalar `k` with `self = k * primitive`.
    pub fn primitive(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (<Rational as One>::one(), Self::zero());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut k = Rational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            k = -k;
        }
        let inv = k.recip();
        (k, self.scale(&inv))
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = mag == "1";
            if m.is_one() {
                f.write_str(&mag)?;
            } else if unit {
                write!(f, "{m}")?;
            } else if mag.contains('/') {
                write!(f, "({mag})*{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rational;

    type Q = Polynomial<Rational>;

    fn x() -> Q {
        Q::var(Symbol::X)
    }
    fn y() -> Q {
        Q::var(Symbol::Y)
    }
    fn a() -> Q {
        Q::var(Symbol::A)
    }
    fn b() -> Q {
        Q::var(Symbol::B)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        let rhs = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_identity() {
        let p = a().mul(&x()).sub(&b().mul(&y())).add(&Q::from_i64(3));
        assert_eq!(p.add(&Q::zero()), p);
    }

    #[test]
    fn cancellation() {
        let ax = a().mul(&x());
        let p = ax.sub(&b().mul(&y()));
        assert_eq!(p.sub(&ax), b().mul(&y()).neg());
    }

    #[test]
    fn grlex_order_is_degree_first() {
        let p = x().add(&y().mul(&y())).add(&Q::one());
        let degs: Vec<u32> = p.terms().iter().map(|(m, _)| m.total_degree()).collect();
        assert_eq!(degs, vec![2, 1, 0]);
        assert!(Monomial::var(Symbol::X) > Monomial::var(Symbol::Y));
        assert!(Monomial::var(Symbol::Y) > Monomial::var(Symbol::A));
    }

    #[test]
    fn primitive_part_sign_and_content() {
        let p = x().scale(&rational(-2, 3)).add(&Q::constant(rational(4, 9)));
        let (k, prim) = p.primitive();
        assert_eq!(k, rational(-2, 9));
        assert_eq!(prim, x().scale(&rational(3, 1)).sub(&Q::from_i64(2)));
    }

    #[test]
    fn exact_division() {
        let p = x().add(&y()).mul(&x().sub(&a()));
        assert_eq!(p.div_exact(&x().sub(&a())).unwrap(), x().add(&y()));
        assert!(p.div_exact(&x().sub(&b())).is_none());
    }

    #[test]
    fn univariate_view_and_derivative() {
        let p = a().mul(&x()).mul(&x()).add(&b().mul(&x())).add(&Q::one());
        let cs = p.univariate_coefficients(Symbol::X);
        assert_eq!(cs, vec![Q::one(), b(), a()]);
        assert_eq!(p.derivative(Symbol::X), a().mul(&x()).scale(&rational(2, 1)).add(&b()));
    }

    #[test]
    fn display_is_readable() {
        let p = a().mul(&x()).sub(&b().mul(&y()).scale(&rational(3, 2)));
        assert_eq!(p.to_string(), "X*a - (3/2)*Y*b");
    }
}
