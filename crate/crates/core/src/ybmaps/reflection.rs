//! Reflection maps `(X, a) -> (h_a(X), sigma(a))` and involutive symmetries.

use std::fmt;

use crate::algebra::{Polynomial, RatFn, Rational, Symbol};
use crate::error::{Error, Result};

/// The parameter involution of a reflection map.
#[derive(Clone, Debug)]
pub enum Sigma {
    Identity,
    /// A rational function of `a` (and possibly `mu`).
    Mobius(RatFn),
    /// Unspecified: `sigma(a)` and `sigma(b)` become the free symbols `s_a`, `s_b`.
    Free,
}

impl Sigma {
    /// `sigma` applied to a symbolic parameter value.
    pub fn apply(&self, param: &RatFn) -> Result<RatFn> {
        match self {
            Sigma::Identity => Ok(param.clone()),
            Sigma::Mobius(s) => s.substitute(&[(Symbol::A, param.clone())]),
            Sigma::Free => free_image(param),
        }
    }

    /// The expression `sigma(a)`.
    pub fn of_a(&self) -> RatFn {
        match self {
            Sigma::Identity => RatFn::var(Symbol::A),
            Sigma::Mobius(s) => s.clone(),
            Sigma::Free => RatFn::var(Symbol::SIGMA_A),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Sigma::Free)
    }

    pub fn substitute(&self, bindings: &[(Symbol, RatFn)]) -> Result<Sigma> {
        Ok(match self {
            Sigma::Mobius(s) => Sigma::Mobius(s.substitute(bindings)?),
            other => other.clone(),
        })
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Identity => f.write_str("id"),
            Sigma::Mobius(s) => write!(f, "{s}"),
            Sigma::Free => f.write_str("free"),
        }
    }
}

// Free sigma is only defined on the bare parameters `a` and `b`, and on their
// images, where it acts as an involution.
fn free_image(param: &RatFn) -> Result<RatFn> {
    let pairs = [
        (Symbol::A, Symbol::SIGMA_A),
        (Symbol::B, Symbol::SIGMA_B),
    ];
    for (x, y) in pairs {
        if param.equals(&RatFn::var(x)) {
            return Ok(RatFn::var(y));
        }
        if param.equals(&RatFn::var(y)) {
            return Ok(RatFn::var(x));
        }
    }
    Err(Error::InvalidArgument(format!(
        "free sigma is undefined at {param}"
    )))
}

/// Splits a rational function that is Möbius in `s` into its four
/// coefficients `(alpha, beta, gamma, delta)` with `(alpha*s + beta)/(gamma*s + delta)`.
pub(crate) fn mobius_coefficients(
    r: &RatFn,
    s: Symbol,
) -> Option<[Polynomial<Rational>; 4]> {
    let (dn, dd) = r.degrees_in(s);
    if dn > 1 || dd > 1 {
        return None;
    }
    let split = |p: &Polynomial<Rational>| {
        let c = p.univariate_coefficients(s);
        let c0 = c.first().cloned().unwrap_or_else(Polynomial::zero);
        let c1 = c.get(1).cloned().unwrap_or_else(Polynomial::zero);
        (c1, c0)
    };
    let (alpha, beta) = split(r.num());
    let (gamma, delta) = split(r.den());
    Some([alpha, beta, gamma, delta])
}

/// `h` has X-degree at most one above and below and a nonzero determinant.
pub fn is_mobius_in(r: &RatFn, s: Symbol) -> bool {
    match mobius_coefficients(r, s) {
        Some([al, be, ga, de]) => !al.mul(&de).sub(&be.mul(&ga)).is_zero(),
        None => false,
    }
}

#[derive(Clone, Debug)]
pub struct ReflectionMap {
    pub h: RatFn,
    pub sigma: Sigma,
    pub name: String,
}

impl ReflectionMap {
    /// Validates that `h` is Möbius in `X`.
    pub fn new(h: RatFn, sigma: Sigma) -> Result<Self> {
        if !is_mobius_in(&h, Symbol::X) {
            return Err(Error::NotMobius(h.to_string()));
        }
        if let Sigma::Mobius(s) = &sigma {
            if s.mentions(Symbol::X) {
                return Err(Error::InvalidArgument(format!(
                    "sigma must not depend on X: {s}"
                )));
            }
        }
        Ok(ReflectionMap {
            h,
            sigma,
            name: String::new(),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `h = X`, `sigma = id`.
    pub fn identity() -> Self {
        ReflectionMap {
            h: RatFn::var(Symbol::X),
            sigma: Sigma::Identity,
            name: "identity".into(),
        }
    }

    /// `h_p(x)` where `sigma(p)` is `sp`.
    pub fn h_at(&self, x: &RatFn, p: &RatFn, sp: &RatFn) -> Result<RatFn> {
        self.h.substitute(&[
            (Symbol::X, x.clone()),
            (Symbol::A, p.clone()),
            (Symbol::SIGMA_A, sp.clone()),
        ])
    }

    /// Symbolic action on one site.
    pub fn apply(&self, x: &RatFn, p: &RatFn) -> Result<(RatFn, RatFn)> {
        let sp = self.sigma.apply(p)?;
        let hx = self.h_at(x, p, &sp)?;
        Ok((hx, sp))
    }

    /// Replaces symbols (typically `mu`) by values in both `h` and `sigma`.
    pub fn specialize(&self, bindings: &[(Symbol, RatFn)]) -> Result<Self> {
        Ok(ReflectionMap {
            h: self.h.substitute(bindings)?,
            sigma: self.sigma.substitute(bindings)?,
            name: self.name.clone(),
        })
    }

    /// Every symbol of `h` and `sigma` other than `X`, `a`, `s_a`.
    pub fn free_symbols(&self) -> Vec<Symbol> {
        let mut out = self.h.symbols();
        if let Sigma::Mobius(s) = &self.sigma {
            out.extend(s.symbols());
        }
        out.retain(|s| ![Symbol::X, Symbol::A, Symbol::SIGMA_A].contains(s));
        out.sort();
        out.dedup();
        out
    }
}

/// An involution `s(a)` of the variable, written in `X` and `a`.
#[derive(Clone, Debug)]
pub struct SymmetryMap {
    pub s: RatFn,
}

impl SymmetryMap {
    /// Rejects maps with `s(a)(s(a)(X)) != X`.
    pub fn new(s: RatFn) -> Result<Self> {
        let twice = s.substitute(&[(Symbol::X, s.clone())])?;
        if !twice.equals(&RatFn::var(Symbol::X)) {
            return Err(Error::NotASymmetry(format!("{s} is not an involution")));
        }
        Ok(SymmetryMap { s })
    }

    pub fn identity() -> Self {
        SymmetryMap {
            s: RatFn::var(Symbol::X),
        }
    }

    /// `s(p)(x)`.
    pub fn apply(&self, x: &RatFn, p: &RatFn) -> Result<RatFn> {
        self.s
            .substitute(&[(Symbol::X, x.clone()), (Symbol::A, p.clone())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFn {
        RatFn::var(Symbol::X)
    }
    fn a() -> RatFn {
        RatFn::var(Symbol::A)
    }
    fn mu() -> RatFn {
        RatFn::var(Symbol::MU)
    }

    #[test]
    fn rejects_non_mobius_h() {
        let sq = x().mul(&x());
        assert!(matches!(
            ReflectionMap::new(sq, Sigma::Identity),
            Err(Error::NotMobius(_))
        ));
        // (aX + a)/(X + 1) is a constant in X
        let degenerate = a().mul(&x()).add(&a()).div(&x().add(&RatFn::one())).unwrap();
        assert!(ReflectionMap::new(degenerate, Sigma::Identity).is_err());
        assert!(ReflectionMap::new(x(), Sigma::Identity).is_ok());
    }

    #[test]
    fn sigma_application() {
        let s = Sigma::Mobius(mu().mul(&mu()).div(&a()).unwrap());
        let b = RatFn::var(Symbol::B);
        let sb = s.apply(&b).unwrap();
        assert!(sb.equals(&mu().mul(&mu()).div(&b).unwrap()));
        assert!(s.apply(&sb).unwrap().equals(&b));
        assert!(Sigma::Free.apply(&b).unwrap().equals(&RatFn::var(Symbol::SIGMA_B)));
        assert!(Sigma::Free.apply(&RatFn::var(Symbol::SIGMA_A)).unwrap().equals(&a()));
        assert!(Sigma::Free.apply(&mu()).is_err());
    }

    #[test]
    fn symmetry_must_be_involutive() {
        assert!(SymmetryMap::new(x().neg()).is_ok());
        let inv = RatFn::one().div(&x()).unwrap();
        assert!(SymmetryMap::new(inv).is_ok());
        assert!(matches!(
            SymmetryMap::new(x().add(&RatFn::one())),
            Err(Error::NotASymmetry(_))
        ));
    }

    #[test]
    fn specialize_mu() {
        let r = ReflectionMap::new(
            a().mul(&x()).neg().div(&mu()).unwrap(),
            Sigma::Mobius(mu().mul(&mu()).div(&a()).unwrap()),
        )
        .unwrap();
        assert_eq!(r.free_symbols(), vec![Symbol::MU]);
        let r2 = r.specialize(&[(Symbol::MU, RatFn::from_i64(2))]).unwrap();
        assert!(r2.free_symbols().is_empty());
        let half = RatFn::from_i64(1).div(&RatFn::from_i64(2)).unwrap();
        assert!(r2.h.equals(&a().mul(&x()).neg().mul(&half)));
    }
}
