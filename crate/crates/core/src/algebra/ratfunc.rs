//! Rational functions as unreduced numerator/denominator pairs.

use std::collections::HashMap;
use std::fmt;

use super::field::{Field, Rational};
use super::poly::{Monomial, Polynomial};
use super::proj::ProjPoint;
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// `num / den` with `den` never the zero polynomial. No gcd reduction is
/// performed; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction<F: Field> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

pub type RatFn = RationalFunction<Rational>;

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction { num, den }.normalized())
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(F::from_i64(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(Polynomial::var(s))
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial<F>, Polynomial<F>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels the common monomial factor and makes the denominator's
    /// leading coefficient one.
    fn normalized(self) -> Self {
        let RationalFunction { mut num, mut den } = self;
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).expect("content divides");
            den = den.div_monomial(&g).expect("content divides");
        }
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RationalFunction {
                num: self.num.add(&rhs.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        RationalFunction {
            num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
        .normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFunction {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        }
        .normalized()
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction {
            num: self.num.mul(&rhs.den),
            den: self.den.mul(&rhs.num),
        }
        .normalized())
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .normalized()
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Degree in `s` of numerator and denominator.
    pub fn degrees_in(&self, s: Symbol) -> (u32, u32) {
        (self.num.degree_in(s), self.den.degree_in(s))
    }

    /// Symbols occurring in numerator or denominator.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        v.extend(self.den.symbols());
        v.sort();
        v.dedup();
        v
    }

    pub fn mentions(&self, s: Symbol) -> bool {
        self.num.degree_in(s) > 0 || self.den.degree_in(s) > 0
    }

    /// `num_l * den_r - num_r * den_l`.
    pub fn cross_difference(&self, rhs: &Self) -> Polynomial<F> {
        self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den))
    }

    /// Exact equality by expanding both cross products.
    pub fn equals(&self, rhs: &Self) -> bool {
        if self.num == rhs.num && self.den == rhs.den {
            return true;
        }
        F::products_equal(&self.num, &rhs.den, &rhs.num, &self.den)
    }

    /// Simultaneous substitution of rational functions for symbols; symbols
    /// without a binding pass through unchanged.
    pub fn substitute(&self, bindings: &[(Symbol, RationalFunction<F>)]) -> Result<Self> {
        let homog: Vec<(Symbol, Polynomial<F>, Polynomial<F>)> = bindings
            .iter()
            .map(|(s, r)| (*s, r.num.clone(), r.den.clone()))
            .collect();
        self.substitute_homogeneous(&homog)
    }

    /// Like [`substitute`](Self::substitute) but each binding is a pair
    /// `(u, v)` read as `u / v` projectively; `v` may be zero, which binds the
    /// symbol to infinity.
    pub fn substitute_homogeneous(
        &self,
        bindings: &[(Symbol, Polynomial<F>, Polynomial<F>)],
    ) -> Result<Self> {
        let bindings: Vec<_> = bindings.iter().filter(|(s, _, _)| self.mentions(*s)).collect();
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        for (_, u, v) in &bindings {
            if u.is_zero() && v.is_zero() {
                return Err(Error::IndeterminatePoint("binding (0 : 0)".into()));
            }
        }

        // Bindings sharing a denominator are homogenized together, which
        // keeps the cleared denominators as small as possible.
        let mut groups: Vec<(Polynomial<F>, Vec<(Symbol, Polynomial<F>)>)> = Vec::new();
        for (s, u, v) in &bindings {
            match groups.iter_mut().find(|(d, _)| d == v) {
                Some((_, members)) => members.push((*s, u.clone())),
                None => groups.push((v.clone(), vec![(*s, u.clone())])),
            }
        }
        let syms: Vec<Symbol> = bindings.iter().map(|(s, _, _)| *s).collect();
        let num_parts = self.num.collect_in(&syms);
        let den_parts = self.den.collect_in(&syms);

        let group_degree = |members: &[(Symbol, Polynomial<F>)], m: &Monomial| -> u32 {
            members.iter().map(|(s, _)| m.exponent(*s) as u32).sum()
        };
        let homog_degrees: Vec<u32> = groups
            .iter()
            .map(|(_, members)| {
                num_parts
                    .iter()
                    .chain(den_parts.iter())
                    .map(|(m, _)| group_degree(members, m))
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let mut powers = PowerCache::default();
        let mut expand = |parts: &[(Monomial, Polynomial<F>)]| -> Polynomial<F> {
            let mut acc: Vec<Polynomial<F>> = Vec::with_capacity(parts.len());
            for (m, coeff) in parts {
                let mut factor = coeff.clone();
                for (gi, (den, members)) in groups.iter().enumerate() {
                    let mut k_total = 0u32;
                    for (s, u) in members {
                        let k = m.exponent(*s) as u32;
                        if k > 0 {
                            factor = factor.mul(powers.get(PowerKey::Num(*s), u, k));
                            k_total += k;
                        }
                    }
                    let rest = homog_degrees[gi] - k_total;
                    if rest > 0 && !den.is_one() {
                        factor = factor.mul(powers.get(PowerKey::Den(gi), den, rest));
                    }
                }
                acc.push(factor);
            }
            sum_all(acc)
        };
        let num = expand(&num_parts);
        let den = expand(&den_parts);
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::IndeterminatePoint(
                    "numerator and denominator both vanish".into(),
                ));
            }
            return Err(Error::SubstitutionCollapse);
        }
        Ok(RationalFunction { num, den }.normalized())
    }

    /// Homogeneous evaluation at projective points. Every symbol must be
    /// bound. Returns `(num_value : den_value)`.
    pub fn eval_projective(&self, point: &[(Symbol, ProjPoint<F>)]) -> Result<ProjPoint<F>> {
        let mut env: Vec<Option<ProjPoint<F>>> = Vec::new();
        for (s, p) in point {
            if env.len() <= s.index() {
                env.resize(s.index() + 1, None);
            }
            env[s.index()] = Some(p.clone());
        }
        let compiled = CompiledRational::new(self);
        compiled.eval(&env)
    }

    /// Maps coefficients into another field.
    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<RationalFunction<G>> {
        let num = self.num.try_map(&f)?;
        let den = self.den.try_map(&f)?;
        if den.is_zero() {
            return None;
        }
        Some(RationalFunction { num, den })
    }
}

impl RationalFunction<Rational> {
    /// Image in another field (the prime field for randomized checks).
    pub fn to_field<G: Field>(&self) -> Result<RationalFunction<G>> {
        self.try_map(G::from_rational)
            .ok_or_else(|| Error::NotEmbeddable(self.to_string()))
    }

    /// Numerator and denominator scaled to coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        let (kn, n) = self.num.primitive();
        let (kd, d) = self.den.primitive();
        let k = kn / kd;
        RationalFunction {
            num: n.scale(&k),
            den: d,
        }
    }
}

#[derive(Hash, PartialEq, Eq, Clone, Copy)]
enum PowerKey {
    Num(Symbol),
    Den(usize),
}

struct PowerCache<F: Field> {
    cache: HashMap<(PowerKey, u32), Polynomial<F>>,
}

impl<F: Field> Default for PowerCache<F> {
    fn default() -> Self {
        PowerCache {
            cache: HashMap::new(),
        }
    }
}

impl<F: Field> PowerCache<F> {
    fn get(&mut self, key: PowerKey, base: &Polynomial<F>, k: u32) -> &Polynomial<F> {
        if !self.cache.contains_key(&(key, k)) {
            let value = if k == 1 {
                base.clone()
            } else {
                let half = self.get(key, base, k / 2).clone();
                let sq = half.mul(&half);
                if k % 2 == 1 {
                    sq.mul(base)
                } else {
                    sq
                }
            };
            self.cache.insert((key, k), value);
        }
        &self.cache[&(key, k)]
    }
}

/// Sums many polynomials in a single accumulation pass.
fn sum_all<F: Field>(parts: Vec<Polynomial<F>>) -> Polynomial<F> {
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    Polynomial::from_terms(parts.into_iter().flat_map(|p| p.terms().to_vec()))
}

impl<F: Field> PartialEq for RationalFunction<F> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Polynomial<F>| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                let s = p.to_string();
                if s.contains('*') || s.contains('/') {
                    format!("({s})")
                } else {
                    s
                }
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A rational function prepared for repeated homogeneous evaluation: the
/// per-symbol homogenizing degrees are computed once.
#[derive(Clone, Debug)]
pub struct CompiledRational<F: Field> {
    num: Polynomial<F>,
    den: Polynomial<F>,
    degrees: Vec<u32>,
}

impl<F: Field> CompiledRational<F> {
    pub fn new(rf: &RationalFunction<F>) -> Self {
        let dn = rf.num.degree_vector();
        let dd = rf.den.degree_vector();
        let n = dn.len().max(dd.len());
        let degrees = (0..n)
            .map(|i| dn.get(i).copied().unwrap_or(0).max(dd.get(i).copied().unwrap_or(0)))
            .collect();
        CompiledRational {
            num: rf.num.clone(),
            den: rf.den.clone(),
            degrees,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, _)| Symbol::from_index(i))
    }

    /// Evaluates both homogenized components. `env` is indexed by symbol id.
    pub fn eval(&self, env: &[Option<ProjPoint<F>>]) -> Result<ProjPoint<F>> {
        let (u, v) = self.eval_components(env)?;
        if u.is_zero() && v.is_zero() {
            return Err(Error::IndeterminatePoint(
                "numerator and denominator both vanish".into(),
            ));
        }
        Ok(ProjPoint::new_unchecked(u, v))
    }

    pub fn eval_components(&self, env: &[Option<ProjPoint<F>>]) -> Result<(F, F)> {
        let mut pow_u: Vec<Vec<F>> = Vec::with_capacity(self.degrees.len());
        let mut pow_v: Vec<Vec<F>> = Vec::with_capacity(self.degrees.len());
        for (i, &d) in self.degrees.iter().enumerate() {
            if d == 0 {
                pow_u.push(Vec::new());
                pow_v.push(Vec::new());
                continue;
            }
            let p = env
                .get(i)
                .and_then(|p| p.as_ref())
                .ok_or_else(|| Error::UnboundSymbol(Symbol::from_index(i).name()))?;
            pow_u.push(power_table(p.u(), d));
            pow_v.push(power_table(p.v(), d));
        }
        let eval = |poly: &Polynomial<F>| -> F {
            let mut acc = F::zero();
            for (m, c) in poly.terms() {
                let mut t = c.clone();
                for (i, &d) in self.degrees.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let k = m.exponents().get(i).copied().unwrap_or(0) as usize;
                    t = t.mul(&pow_u[i][k]).mul(&pow_v[i][d as usize - k]);
                }
                acc.add_assign(&t);
            }
            acc
        };
        Ok((eval(&self.num), eval(&self.den)))
    }
}

fn power_table<F: Field>(x: &F, d: u32) -> Vec<F> {
    let mut out = Vec::with_capacity(d as usize + 1);
    out.push(F::one());
    for k in 1..=d as usize {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}
