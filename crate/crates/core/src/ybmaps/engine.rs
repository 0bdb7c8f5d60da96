//! One composition engine for every chain of `R_kl` and `K_j` factors.
//!
//! `R_kl` with sites `k`, `l` (in either order) replaces
//! `(X_k, X_l)` by `(f(X_k, X_l), g(X_k, X_l))` evaluated at the current
//! site parameters `(a_k, a_l)`. `K_j` replaces `(X_j, a_j)` by
//! `(h_{a_j}(X_j), sigma(a_j))`. Chains are listed in order of application.

use std::fmt;

use crate::algebra::{CompiledRational, Field, ProjPoint, RatFn, Symbol};
use crate::error::{Error, Result};

use super::family::YangBaxterMap;
use super::reflection::{ReflectionMap, Sigma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Plus,
    Minus,
}

/// Site indices are zero-based; `Display` prints them one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    R(usize, usize),
    K(usize, Boundary),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::R(k, l) => write!(f, "R{}{}", k + 1, l + 1),
            Factor::K(j, Boundary::Plus) => write!(f, "K{}+", j + 1),
            Factor::K(j, Boundary::Minus) => write!(f, "K{}-", j + 1),
        }
    }
}

/// Formats a chain in application order, e.g. `R12 K2+ R21 K1+`.
pub fn chain_to_string(chain: &[Factor]) -> String {
    chain.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Site<P, Q> {
    pub x: P,
    pub param: Q,
}

pub trait Domain {
    type Point: Clone;
    type Param: Clone;

    fn yb(
        &self,
        xk: &Self::Point,
        xl: &Self::Point,
        pk: &Self::Param,
        pl: &Self::Param,
    ) -> Result<(Self::Point, Self::Point)>;

    fn reflect(
        &self,
        side: Boundary,
        x: &Self::Point,
        p: &Self::Param,
    ) -> Result<(Self::Point, Self::Param)>;
}

/// Failure inside a chain: the position of the factor and the cause.
#[derive(Clone, Debug)]
pub struct ChainError {
    pub factor: usize,
    pub error: Error,
}

pub fn apply_factor<D: Domain>(
    d: &D,
    sites: &mut [Site<D::Point, D::Param>],
    factor: Factor,
) -> Result<()> {
    let n = sites.len();
    let check = |i: usize| {
        if i < n {
            Ok(())
        } else {
            Err(Error::InvalidSite { index: i, sites: n })
        }
    };
    match factor {
        Factor::R(k, l) => {
            check(k)?;
            check(l)?;
            if k == l {
                return Err(Error::InvalidSite { index: l, sites: n });
            }
            let (u, v) = d.yb(&sites[k].x, &sites[l].x, &sites[k].param, &sites[l].param)?;
            sites[k].x = u;
            sites[l].x = v;
        }
        Factor::K(j, side) => {
            check(j)?;
            let (x, p) = d.reflect(side, &sites[j].x, &sites[j].param)?;
            sites[j].x = x;
            sites[j].param = p;
        }
    }
    Ok(())
}

pub fn apply_chain<D: Domain>(
    d: &D,
    sites: &[Site<D::Point, D::Param>],
    chain: &[Factor],
) -> std::result::Result<Vec<Site<D::Point, D::Param>>, ChainError> {
    let mut state = sites.to_vec();
    for (i, &factor) in chain.iter().enumerate() {
        apply_factor(d, &mut state, factor).map_err(|error| ChainError { factor: i, error })?;
    }
    Ok(state)
}

/// Exact symbolic domain: points and parameters are rational functions.
pub struct SymbolicDomain<'a> {
    pub map: &'a YangBaxterMap,
    pub plus: Option<&'a ReflectionMap>,
    pub minus: Option<&'a ReflectionMap>,
}

fn boundary_map<'m>(
    plus: Option<&'m ReflectionMap>,
    minus: Option<&'m ReflectionMap>,
    side: Boundary,
) -> Result<&'m ReflectionMap> {
    match side {
        Boundary::Plus => plus,
        Boundary::Minus => minus,
    }
    .ok_or_else(|| Error::InvalidArgument(format!("no reflection map for side {side:?}")))
}

impl Domain for SymbolicDomain<'_> {
    type Point = RatFn;
    type Param = RatFn;

    fn yb(&self, xk: &RatFn, xl: &RatFn, pk: &RatFn, pl: &RatFn) -> Result<(RatFn, RatFn)> {
        let b = [
            (Symbol::X, xk.clone()),
            (Symbol::Y, xl.clone()),
            (Symbol::A, pk.clone()),
            (Symbol::B, pl.clone()),
        ];
        Ok((self.map.f.substitute(&b)?, self.map.g.substitute(&b)?))
    }

    fn reflect(&self, side: Boundary, x: &RatFn, p: &RatFn) -> Result<(RatFn, RatFn)> {
        boundary_map(self.plus, self.minus, side)?.apply(x, p)
    }
}

enum CompiledSigma<F: Field> {
    Identity,
    Mobius(CompiledRational<F>),
    /// Pairs `(p, sigma(p))` fixed per sample.
    Free,
}

struct CompiledReflection<F: Field> {
    h: CompiledRational<F>,
    sigma: CompiledSigma<F>,
}

impl<F: Field> CompiledReflection<F> {
    fn new(r: &ReflectionMap) -> Result<Self> {
        let sigma = match &r.sigma {
            Sigma::Identity => CompiledSigma::Identity,
            Sigma::Mobius(s) => CompiledSigma::Mobius(CompiledRational::new(&s.to_field::<F>()?)),
            Sigma::Free => CompiledSigma::Free,
        };
        Ok(CompiledReflection {
            h: CompiledRational::new(&r.h.to_field::<F>()?),
            sigma,
        })
    }
}

/// Numeric domain over a field: points are projective, parameters finite.
///
/// Evaluations that send finite inputs to infinity, or hit `0/0`, are
/// reported as [`Error::IndeterminatePoint`]: such samples lie on a
/// singular locus of the factor.
pub struct NumericDomain<F: Field> {
    f: CompiledRational<F>,
    g: CompiledRational<F>,
    plus: Option<CompiledReflection<F>>,
    minus: Option<CompiledReflection<F>>,
    env: Vec<Option<ProjPoint<F>>>,
    free_pairs: Vec<(F, F)>,
}

impl<F: Field> NumericDomain<F> {
    pub fn new(
        map: &YangBaxterMap,
        plus: Option<&ReflectionMap>,
        minus: Option<&ReflectionMap>,
    ) -> Result<Self> {
        let f = CompiledRational::new(&map.f.to_field::<F>()?);
        let g = CompiledRational::new(&map.g.to_field::<F>()?);
        let plus = plus.map(CompiledReflection::new).transpose()?;
        let minus = minus.map(CompiledReflection::new).transpose()?;
        Ok(NumericDomain {
            f,
            g,
            plus,
            minus,
            env: vec![None; crate::algebra::symbol::count()],
            free_pairs: Vec::new(),
        })
    }

    /// Binds a symbol other than the slot symbols (e.g. `mu`).
    pub fn bind(&mut self, s: Symbol, value: F) {
        if self.env.len() <= s.index() {
            self.env.resize(s.index() + 1, None);
        }
        self.env[s.index()] = Some(ProjPoint::finite(value));
    }

    /// Declares `sigma(p) = q` and `sigma(q) = p` for free sigma.
    pub fn set_free_pair(&mut self, p: F, q: F) {
        self.free_pairs.push((p, q));
    }

    pub fn clear_free_pairs(&mut self) {
        self.free_pairs.clear();
    }

    fn sigma_of(&self, r: &CompiledReflection<F>, p: &F) -> Result<F> {
        match &r.sigma {
            CompiledSigma::Identity => Ok(p.clone()),
            CompiledSigma::Mobius(s) => {
                let mut env = self.env.clone();
                env[Symbol::A.index()] = Some(ProjPoint::finite(p.clone()));
                s.eval(&env)?
                    .affine()
                    .ok_or_else(|| Error::IndeterminatePoint("sigma(a) is infinite".into()))
            }
            CompiledSigma::Free => self
                .free_pairs
                .iter()
                .find_map(|(u, v)| {
                    if u == p {
                        Some(v.clone())
                    } else if v == p {
                        Some(u.clone())
                    } else {
                        None
                    }
                })
                .ok_or_else(|| Error::InvalidArgument(format!("free sigma undefined at {p}"))),
        }
    }
}

fn finite_to_infinite<F: Field>(inputs_finite: bool, out: &ProjPoint<F>) -> Result<()> {
    if inputs_finite && out.is_infinite() {
        return Err(Error::IndeterminatePoint(
            "a denominator vanishes at finite arguments".into(),
        ));
    }
    Ok(())
}

impl<F: Field> Domain for NumericDomain<F> {
    type Point = ProjPoint<F>;
    type Param = F;

    fn yb(
        &self,
        xk: &ProjPoint<F>,
        xl: &ProjPoint<F>,
        pk: &F,
        pl: &F,
    ) -> Result<(ProjPoint<F>, ProjPoint<F>)> {
        let mut env = self.env.clone();
        env[Symbol::X.index()] = Some(xk.clone());
        env[Symbol::Y.index()] = Some(xl.clone());
        env[Symbol::A.index()] = Some(ProjPoint::finite(pk.clone()));
        env[Symbol::B.index()] = Some(ProjPoint::finite(pl.clone()));
        let u = self.f.eval(&env)?;
        let v = self.g.eval(&env)?;
        let finite = !xk.is_infinite() && !xl.is_infinite();
        finite_to_infinite(finite, &u)?;
        finite_to_infinite(finite, &v)?;
        Ok((u, v))
    }

    fn reflect(&self, side: Boundary, x: &ProjPoint<F>, p: &F) -> Result<(ProjPoint<F>, F)> {
        let r = match side {
            Boundary::Plus => self.plus.as_ref(),
            Boundary::Minus => self.minus.as_ref(),
        }
        .ok_or_else(|| Error::InvalidArgument(format!("no reflection map for side {side:?}")))?;
        let sp = self.sigma_of(r, p)?;
        let mut env = self.env.clone();
        env[Symbol::X.index()] = Some(x.clone());
        env[Symbol::A.index()] = Some(ProjPoint::finite(p.clone()));
        env[Symbol::SIGMA_A.index()] = Some(ProjPoint::finite(sp.clone()));
        let hx = r.h.eval(&env)?;
        finite_to_infinite(!x.is_infinite(), &hx)?;
        Ok((hx, sp))
    }
}

/// Applies `R(a, b)` to `(x, y)` projectively.
pub fn apply_yb<F: Field>(
    map: &YangBaxterMap,
    x: &ProjPoint<F>,
    y: &ProjPoint<F>,
    a: &F,
    b: &F,
) -> Result<(ProjPoint<F>, ProjPoint<F>)> {
    NumericDomain::<F>::new(map, None, None)?.yb(x, y, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Fp, Rational};
    use crate::ybmaps::family::{builtin_family, FamilyId};

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }
    fn pq(n: i64) -> ProjPoint<Rational> {
        ProjPoint::finite(q(n))
    }

    #[test]
    fn factor_display_is_one_based() {
        let chain = [Factor::R(0, 1), Factor::K(1, Boundary::Plus), Factor::R(1, 0)];
        assert_eq!(chain_to_string(&chain), "R12 K2+ R21");
    }

    #[test]
    fn fiii_application() {
        let m = builtin_family(FamilyId::F3).unwrap();
        let (u, v) = apply_yb(&m, &pq(2), &pq(3), &q(1), &q(2)).unwrap();
        assert_eq!((u, v), (pq(12), pq(4)));
    }

    #[test]
    fn fv_application() {
        let m = builtin_family(FamilyId::F5).unwrap();
        let (u, v) = apply_yb(&m, &pq(3), &pq(1), &q(5), &q(1)).unwrap();
        assert_eq!((u, v), (pq(3), pq(5)));
    }

    #[test]
    fn fiv_on_diagonal_is_indeterminate() {
        let m = builtin_family(FamilyId::F4).unwrap();
        let r = apply_yb(&m, &pq(2), &pq(2), &q(1), &q(3));
        assert!(matches!(r, Err(Error::IndeterminatePoint(_))));
    }

    #[test]
    fn reverse_factor_restores_fiii_point() {
        // R21 at parameters (b, a) = (2, 1) applied to (12, 4) on sites (1, 2).
        let m = builtin_family(FamilyId::F3).unwrap();
        let d = NumericDomain::<Rational>::new(&m, None, None).unwrap();
        let sites = vec![
            Site { x: pq(12), param: q(1) },
            Site { x: pq(4), param: q(2) },
        ];
        let out = apply_chain(&d, &sites, &[Factor::R(1, 0)]).unwrap();
        assert_eq!(out[0].x, pq(2));
        assert_eq!(out[1].x, pq(3));
    }

    #[test]
    fn chain_reports_failing_factor() {
        let m = builtin_family(FamilyId::F4).unwrap();
        let d = NumericDomain::<Fp>::new(&m, None, None).unwrap();
        let sites = vec![
            Site { x: ProjPoint::finite(Fp::new(5)), param: Fp::new(1) },
            Site { x: ProjPoint::finite(Fp::new(5)), param: Fp::new(2) },
        ];
        let err = apply_chain(&d, &sites, &[Factor::R(0, 1)]).unwrap_err();
        assert_eq!(err.factor, 0);
        let err = apply_chain(&d, &sites, &[Factor::K(0, Boundary::Plus)]).unwrap_err();
        assert!(matches!(err.error, Error::InvalidArgument(_)));
        let err = apply_chain(&d, &sites, &[Factor::R(0, 4)]).unwrap_err();
        assert!(matches!(err.error, Error::InvalidSite { index: 4, sites: 2 }));
    }

    #[test]
    fn symbolic_and_numeric_agree() {
        let m = builtin_family(FamilyId::F1).unwrap();
        let sd = SymbolicDomain { map: &m, plus: None, minus: None };
        let v = |s| RatFn::var(s);
        let sites = vec![
            Site { x: v(Symbol::X), param: v(Symbol::A) },
            Site { x: v(Symbol::Y), param: v(Symbol::B) },
        ];
        let chain = [Factor::R(0, 1), Factor::R(1, 0)];
        let out = apply_chain(&sd, &sites, &chain).unwrap();
        assert!(out[0].x.equals(&v(Symbol::X)));
        assert!(out[1].x.equals(&v(Symbol::Y)));
    }
}
