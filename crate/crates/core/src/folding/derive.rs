//! `h_a(X) = g_{a sigma(a)}(X, phi_a(X))` and its reduction to Möbius form.

use crate::algebra::{Polynomial, RatFn, Rational, Symbol};
use crate::error::{Error, Result};
use crate::ybmaps::{Sigma, YangBaxterMap};

/// A folding map `phi_a`, possibly the constant infinity.
#[derive(Clone, Debug)]
pub enum Phi {
    Map(RatFn),
    Infinity,
}

impl Phi {
    /// Homogeneous pair `(u, v)` with `phi = u / v`.
    pub fn homogeneous(&self) -> (Polynomial<Rational>, Polynomial<Rational>) {
        match self {
            Phi::Map(r) => (r.num().clone(), r.den().clone()),
            Phi::Infinity => (Polynomial::one(), Polynomial::zero()),
        }
    }

    pub fn as_map(&self) -> Option<&RatFn> {
        match self {
            Phi::Map(r) => Some(r),
            Phi::Infinity => None,
        }
    }
}

impl std::fmt::Display for Phi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phi::Map(r) => write!(f, "{r}"),
            Phi::Infinity => f.write_str("inf"),
        }
    }
}

/// `g_{a sigma(a)}(X, y)` with `y` given homogeneously, before reduction.
pub fn fold_g(
    map: &YangBaxterMap,
    sigma: &Sigma,
    y: (Polynomial<Rational>, Polynomial<Rational>),
) -> Result<RatFn> {
    let sa = sigma.of_a();
    map.g.substitute_homogeneous(&[
        (Symbol::Y, y.0, y.1),
        (Symbol::B, sa.num().clone(), sa.den().clone()),
    ])
}

/// Derives `h_a` from `(sigma, phi_a)` and reduces it to Möbius form.
pub fn derive_h(map: &YangBaxterMap, sigma: &Sigma, phi: &Phi) -> Result<RatFn> {
    let raw = fold_g(map, sigma, phi.homogeneous())?;
    reduce_mobius(&raw)
}

type UPoly = Vec<RatFn>;

fn to_upoly(p: &Polynomial<Rational>) -> UPoly {
    let mut out: UPoly = p
        .univariate_coefficients(Symbol::X)
        .into_iter()
        .map(RatFn::from_poly)
        .collect();
    trim(&mut out);
    out
}

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree(p: &UPoly) -> u32 {
    p.len().saturating_sub(1) as u32
}

/// Quotient and remainder of univariate division over the coefficient field.
fn divrem(a: &UPoly, b: &UPoly) -> Result<(UPoly, UPoly)> {
    let lead = b.last().ok_or(Error::ZeroDenominator)?;
    let mut r = a.clone();
    let mut q = vec![RatFn::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty").div(lead)?;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(bc));
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    Ok((q, r))
}

fn gcd(a: &UPoly, b: &UPoly) -> Result<UPoly> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

/// Coefficients `[alpha, beta, gamma, delta]` of
/// `(alpha X + beta)/(gamma X + delta)` in normal form: `gamma = 1` when
/// nonzero, otherwise `delta = 1`.
pub fn mobius_normal_form(h: &RatFn) -> Result<[RatFn; 4]> {
    let (n, d) = (to_upoly(h.num()), to_upoly(h.den()));
    if n.len() > 2 || d.len() > 2 {
        return Err(Error::NotMobius(h.to_string()));
    }
    normal_form(&n, &d)
}

fn normal_form(n: &UPoly, d: &UPoly) -> Result<[RatFn; 4]> {
    let at = |p: &UPoly, i: usize| p.get(i).cloned().unwrap_or_else(RatFn::zero);
    let (alpha, beta, gamma, delta) = (at(n, 1), at(n, 0), at(d, 1), at(d, 0));
    if alpha.mul(&delta).sub(&beta.mul(&gamma)).is_zero() {
        return Err(Error::NotMobius("determinant vanishes".into()));
    }
    let scale = if gamma.is_zero() { delta.clone() } else { gamma.clone() };
    Ok([
        alpha.div(&scale)?,
        beta.div(&scale)?,
        gamma.div(&scale)?,
        delta.div(&scale)?,
    ])
}

/// Builds `(alpha X + beta)/(gamma X + delta)`.
pub fn mobius_from_coefficients(c: &[RatFn; 4]) -> Result<RatFn> {
    let x = RatFn::var(Symbol::X);
    let num = c[0].mul(&x).add(&c[1]);
    let den = c[2].mul(&x).add(&c[3]);
    num.div(&den)
}

/// Cancels the monic gcd in `X` of numerator and denominator and returns
/// the Möbius normal form.
pub fn reduce_mobius(r: &RatFn) -> Result<RatFn> {
    let (mut n, mut d) = (to_upoly(r.num()), to_upoly(r.den()));
    if n.len() > 2 || d.len() > 2 {
        let g = gcd(&n, &d)?;
        if g.len() > 1 {
            n = divrem(&n, &g)?.0;
            d = divrem(&d, &g)?.0;
        }
        if n.len() > 2 || d.len() > 2 {
            return Err(Error::MobiusReductionFailure {
                num_degree: degree(&n),
                den_degree: degree(&d),
            });
        }
    }
    let c = normal_form(&n, &d)?;
    mobius_from_coefficients(&c)
}
