use std::fmt;
use std::time::Instant;

use crate::algebra::{RatFn, Rational, Symbol};
use crate::error::{Error, Result};
use crate::expr::{MapSpec, PhiSpec};
use crate::ybmaps::{
    check_rf_identity, CheckOptions, CheckReport, FamilyId, ReflectionMap, Sigma, YangBaxterMap,
};

use super::derive::{fold_g, mobius_from_coefficients, mobius_normal_form, Phi};

/// The special value a degenerate folding pins `phi_a` to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularValue {
    Zero,
    One,
    Infinity,
    SigmaA,
}

impl fmt::Display for SingularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularValue::Zero => "0",
            SingularValue::One => "1",
            SingularValue::Infinity => "inf",
            SingularValue::SigmaA => "sigma(a)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FoldingSolution {
    pub family: FamilyId,
    pub label: String,
    pub sigma: Sigma,
    pub phi: Phi,
    pub h: RatFn,
    pub degenerate: bool,
    pub mu_present: bool,
    pub singular: Option<SingularValue>,
}

fn singular_of(phi: &Phi) -> Option<SingularValue> {
    match phi {
        Phi::Infinity => Some(SingularValue::Infinity),
        Phi::Map(r) if r.equals(&RatFn::zero()) => Some(SingularValue::Zero),
        Phi::Map(r) if r.equals(&RatFn::one()) => Some(SingularValue::One),
        Phi::Map(r) if r.equals(&RatFn::var(Symbol::SIGMA_A)) => Some(SingularValue::SigmaA),
        Phi::Map(_) => None,
    }
}

impl FoldingSolution {
    pub fn new(family: FamilyId, label: impl Into<String>, sigma: Sigma, phi: Phi, h: RatFn) -> Self {
        let degenerate = sigma.is_free();
        let mut syms = h.symbols();
        if let Phi::Map(p) = &phi {
            syms.extend(p.symbols());
        }
        if let Sigma::Mobius(s) = &sigma {
            syms.extend(s.symbols());
        }
        FoldingSolution {
            family,
            label: label.into(),
            singular: if degenerate { singular_of(&phi) } else { None },
            sigma,
            phi,
            h,
            degenerate,
            mu_present: syms.contains(&Symbol::MU),
        }
    }

    /// A reflection spec with a `phi` field.
    pub fn from_spec(spec: &MapSpec) -> Result<Self> {
        let refl = spec.to_reflection()?;
        let phi = match spec.phi() {
            Some(PhiSpec::Map(r)) => Phi::Map(r),
            Some(PhiSpec::Infinity) => Phi::Infinity,
            None => return Err(Error::Spec("missing field phi".into())),
        };
        let family = spec
            .family
            .ok_or_else(|| Error::Spec("missing header family".into()))?;
        Ok(Self::new(family, spec.name.clone(), refl.sigma, phi, refl.h))
    }

    pub fn reflection_map(&self) -> Result<ReflectionMap> {
        Ok(ReflectionMap::new(self.h.clone(), self.sigma.clone())?.named(self.label.clone()))
    }

    /// The dual solution with `phi` and `h` exchanged.
    pub fn swapped(&self) -> Result<Self> {
        let phi = match &self.phi {
            Phi::Map(p) => p.clone(),
            Phi::Infinity => {
                return Err(Error::InvalidArgument("cannot swap phi = inf into h".into()))
            }
        };
        Ok(Self::new(
            self.family,
            format!("{} (swapped)", self.label),
            self.sigma.clone(),
            Phi::Map(self.h.clone()),
            phi,
        ))
    }

    /// Substitutes values (usually for `mu`) everywhere.
    pub fn specialize(&self, bindings: &[(Symbol, RatFn)]) -> Result<Self> {
        let phi = match &self.phi {
            Phi::Map(p) => Phi::Map(p.substitute(bindings)?),
            Phi::Infinity => Phi::Infinity,
        };
        Ok(Self::new(
            self.family,
            self.label.clone(),
            self.sigma.substitute(bindings)?,
            phi,
            self.h.substitute(bindings)?,
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "label": self.label,
            "sigma": self.sigma.to_string(),
            "phi": self.phi.to_string(),
            "h": self.h.to_string(),
            "degenerate": self.degenerate,
            "mu_present": self.mu_present,
            "singular": self.singular,
        })
    }
}

/// `x -> m_p(x)` for a Möbius map `m` in `(X, a)` with `sigma(a)` known.
fn compose(m: &RatFn, x: &RatFn, p: &RatFn, sp: &RatFn) -> Result<RatFn> {
    m.substitute(&[
        (Symbol::X, x.clone()),
        (Symbol::A, p.clone()),
        (Symbol::SIGMA_A, sp.clone()),
    ])
}

fn involution(name: &str, m: &RatFn, sigma: &Sigma, opts: &CheckOptions) -> CheckReport {
    let a = RatFn::var(Symbol::A);
    let x = RatFn::var(Symbol::X);
    let twice = (|| {
        let sa = sigma.apply(&a)?;
        let once = compose(m, &x, &a, &sa)?;
        compose(m, &once, &sa, &sigma.apply(&sa)?)
    })();
    match twice {
        Ok(t) => check_rf_identity(name, &t, &x, opts),
        Err(e) => CheckReport::new(name, crate::ybmaps::Status::Fail, opts.method).with_note(e.to_string()),
    }
}

/// Folding constraints: `h = g_{a sigma(a)}(X, phi)`, the involutions of
/// `phi` and `h`, and the dual relation `phi = g_{a sigma(a)}(X, h)`.
/// Degenerate solutions are checked on the first relation and the
/// involution of `h` only.
pub fn check_constraints(map: &YangBaxterMap, sol: &FoldingSolution) -> CheckReport {
    check_constraints_with(map, sol, &CheckOptions::exact())
}

pub fn check_constraints_with(
    map: &YangBaxterMap,
    sol: &FoldingSolution,
    opts: &CheckOptions,
) -> CheckReport {
    let start = Instant::now();
    let mut parts = Vec::new();
    match fold_g(map, &sol.sigma, sol.phi.homogeneous()) {
        Ok(rhs) => parts.push(check_rf_identity("constraint_h", &sol.h, &rhs, opts)),
        Err(e) => parts.push(
            CheckReport::new("constraint_h", crate::ybmaps::Status::Fail, opts.method)
                .with_note(e.to_string()),
        ),
    }
    if !sol.degenerate {
        if let Sigma::Mobius(s) = &sol.sigma {
            let ss = s.substitute(&[(Symbol::A, s.clone())]);
            match ss {
                Ok(ss) => parts.push(check_rf_identity("sigma_involution", &ss, &RatFn::var(Symbol::A), opts)),
                Err(e) => parts.push(
                    CheckReport::new("sigma_involution", crate::ybmaps::Status::Fail, opts.method)
                        .with_note(e.to_string()),
                ),
            }
        }
        if let Phi::Map(p) = &sol.phi {
            parts.push(involution("phi_involution", p, &sol.sigma, opts));
            let dual = fold_g(map, &sol.sigma, (sol.h.num().clone(), sol.h.den().clone()));
            match dual {
                Ok(rhs) => parts.push(check_rf_identity("constraint_phi", p, &rhs, opts)),
                Err(e) => parts.push(
                    CheckReport::new("constraint_phi", crate::ybmaps::Status::Fail, opts.method)
                        .with_note(e.to_string()),
                ),
            }
        }
    }
    parts.push(involution("h_involution", &sol.h, &sol.sigma, opts));
    let mut r = CheckReport::combine(format!("{}: constraints", sol.label), opts.method, parts);
    r.timing = start.elapsed();
    r
}

/// Unknown coefficients of the ansatz
/// `phi_a = (p1 X + p2)/(p3 X + p4)`, `h_a = (q1 X + q2)/(q3 X + q4)`,
/// `p_j = p_j0 + p_j1 a`, `q_j = q_j0 + q_j1 a`,
/// `sigma(a) = (c1 a + c2)/(c3 a - c1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusAnsatz {
    pub p: [(Rational, Rational); 4],
    pub q: [(Rational, Rational); 4],
    /// `None` for the identity involution.
    pub c: Option<[Rational; 3]>,
}

impl MobiusAnsatz {
    /// Cancels a factor `a + l` common to all four coefficients.
    fn reduced(coeffs: &[(Rational, Rational); 4]) -> [(Rational, Rational); 4] {
        let zero = Rational::from_integer(0.into());
        let Some(k) = coeffs.iter().position(|(_, c1)| *c1 != zero) else {
            return coeffs.clone();
        };
        let l = &coeffs[k].0 / &coeffs[k].1;
        if coeffs.iter().all(|(c0, c1)| *c0 == &l * c1) {
            coeffs.clone().map(|(_, c1)| (c1, zero.clone()))
        } else {
            coeffs.clone()
        }
    }

    fn map_of(coeffs: &[(Rational, Rational); 4]) -> Result<RatFn> {
        let coeffs = &Self::reduced(coeffs);
        let a = RatFn::var(Symbol::A);
        let x = RatFn::var(Symbol::X);
        let lin = |(c0, c1): &(Rational, Rational)| {
            RatFn::constant(c0.clone()).add(&RatFn::constant(c1.clone()).mul(&a))
        };
        let num = lin(&coeffs[0]).mul(&x).add(&lin(&coeffs[1]));
        let den = lin(&coeffs[2]).mul(&x).add(&lin(&coeffs[3]));
        num.div(&den)
    }

    /// All coefficients in storage order.
    pub fn key(&self) -> Vec<Rational> {
        self.p
            .iter()
            .chain(&self.q)
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .chain(self.c.iter().flatten().cloned())
            .collect()
    }

    pub fn phi(&self) -> Result<RatFn> {
        Self::map_of(&self.p)
    }

    pub fn h(&self) -> Result<RatFn> {
        Self::map_of(&self.q)
    }

    pub fn sigma(&self) -> Result<Sigma> {
        match &self.c {
            None => Ok(Sigma::Identity),
            Some([c1, c2, c3]) => {
                let a = RatFn::var(Symbol::A);
                let k = |c: &Rational| RatFn::constant(c.clone());
                let num = k(c1).mul(&a).add(&k(c2));
                let den = k(c3).mul(&a).sub(&k(c1));
                Ok(Sigma::Mobius(num.div(&den)?))
            }
        }
    }

    /// Both maps have a determinant that is not identically zero in `a`.
    pub fn is_nondegenerate(&self) -> bool {
        let det_nonzero = |m: Result<RatFn>| {
            m.map(|r| crate::ybmaps::reflection::is_mobius_in(&r, Symbol::X))
                .unwrap_or(false)
        };
        let sigma_ok = match &self.c {
            None => true,
            Some([c1, c2, c3]) => {
                // (c1 a + c2)/(c3 a - c1) is constant iff -c1^2 - c2 c3 = 0
                let d = -(c1 * c1) - c2 * c3;
                d != Rational::from_integer(0.into())
            }
        };
        det_nonzero(self.phi()) && det_nonzero(self.h()) && sigma_ok
    }

    pub fn to_solution(&self, family: FamilyId, label: impl Into<String>) -> Result<FoldingSolution> {
        let canon = |m: RatFn| mobius_from_coefficients(&mobius_normal_form(&m)?);
        Ok(FoldingSolution::new(
            family,
            label,
            self.sigma()?,
            Phi::Map(canon(self.phi()?)?),
            canon(self.h()?)?,
        ))
    }
}
