//! Parametric Yang-Baxter maps and the built-in quadrirational families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{RatFn, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    #[serde(rename = "F_I")]
    F1,
    #[serde(rename = "F_II")]
    F2,
    #[serde(rename = "F_III")]
    F3,
    #[serde(rename = "F_IV")]
    F4,
    #[serde(rename = "F_V")]
    F5,
    #[serde(rename = "custom")]
    Custom,
}

impl FamilyId {
    pub const BUILTIN: [FamilyId; 5] = [
        FamilyId::F1,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F4,
        FamilyId::F5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::F1 => "F_I",
            FamilyId::F2 => "F_II",
            FamilyId::F3 => "F_III",
            FamilyId::F4 => "F_IV",
            FamilyId::F5 => "F_V",
            FamilyId::Custom => "custom",
        }
    }

    /// Short tag used in file names and on the command line (`F3`).
    pub fn short(self) -> &'static str {
        match self {
            FamilyId::F1 => "F1",
            FamilyId::F2 => "F2",
            FamilyId::F3 => "F3",
            FamilyId::F4 => "F4",
            FamilyId::F5 => "F5",
            FamilyId::Custom => "custom",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Accepts `F3`, `F_III`, `FIII`, `f_iii` and `custom`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s
            .chars()
            .filter(|c| *c != '_')
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match t.as_str() {
            "F1" | "FI" => FamilyId::F1,
            "F2" | "FII" => FamilyId::F2,
            "F3" | "FIII" => FamilyId::F3,
            "F4" | "FIV" => FamilyId::F4,
            "F5" | "FV" => FamilyId::F5,
            "CUSTOM" => FamilyId::Custom,
            _ => return Err(Error::UnknownFamily(s.to_string())),
        })
    }
}

/// `R(a,b): (X, Y) -> (f_ab(X, Y), g_ab(X, Y))`, with `f`, `g` rational in
/// `X, Y, a, b`.
#[derive(Clone, Debug)]
pub struct YangBaxterMap {
    pub f: RatFn,
    pub g: RatFn,
    pub family: FamilyId,
    pub parametric: bool,
}

impl YangBaxterMap {
    pub fn custom(f: RatFn, g: RatFn) -> Self {
        let parametric = [&f, &g]
            .iter()
            .any(|r| r.mentions(Symbol::A) || r.mentions(Symbol::B));
        YangBaxterMap {
            f,
            g,
            family: FamilyId::Custom,
            parametric,
        }
    }

    /// `R(X, Y) = (X, Y)`.
    pub fn identity() -> Self {
        Self::custom(RatFn::var(Symbol::X), RatFn::var(Symbol::Y))
    }

    /// `R(X, Y) = (Y, X)`.
    pub fn permutation() -> Self {
        Self::custom(RatFn::var(Symbol::Y), RatFn::var(Symbol::X))
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    /// The same map with `f` and `g` replaced.
    pub fn with_components(&self, f: RatFn, g: RatFn) -> Self {
        YangBaxterMap {
            f,
            g,
            family: FamilyId::Custom,
            parametric: self.parametric,
        }
    }
}

fn v(s: Symbol) -> RatFn {
    RatFn::var(s)
}

fn k(c: i64) -> RatFn {
    RatFn::from_i64(c)
}

fn quotient(num: RatFn, den: RatFn) -> RatFn {
    num.div(&den).expect("nonzero kernel denominator")
}

/// The kernel `P` of each family.
pub fn family_kernel(id: FamilyId) -> Result<RatFn> {
    let (x, y, a, b) = (v(Symbol::X), v(Symbol::Y), v(Symbol::A), v(Symbol::B));
    let x_minus_y = x.sub(&y);
    Ok(match id {
        FamilyId::F1 => {
            // ((1-b)X + b - a + (a-1)Y) / (b(1-a)X + (a-b)XY + a(b-1)Y)
            let num = k(1)
                .sub(&b)
                .mul(&x)
                .add(&b)
                .sub(&a)
                .add(&a.sub(&k(1)).mul(&y));
            let den = b
                .mul(&k(1).sub(&a))
                .mul(&x)
                .add(&a.sub(&b).mul(&x).mul(&y))
                .add(&a.mul(&b.sub(&k(1))).mul(&y));
            quotient(num, den)
        }
        FamilyId::F2 => quotient(a.mul(&x).sub(&b.mul(&y)).add(&b).sub(&a), x_minus_y),
        FamilyId::F3 => quotient(a.mul(&x).sub(&b.mul(&y)), x_minus_y),
        FamilyId::F4 => k(1).add(&quotient(b.sub(&a), x_minus_y)),
        FamilyId::F5 => quotient(a.sub(&b), x_minus_y),
        FamilyId::Custom => return Err(Error::UnknownFamily("custom".into())),
    })
}

/// Built-in family with `f`, `g` assembled from the kernel.
pub fn builtin_family(id: FamilyId) -> Result<YangBaxterMap> {
    let p = family_kernel(id)?;
    let (x, y, a, b) = (v(Symbol::X), v(Symbol::Y), v(Symbol::A), v(Symbol::B));
    let (f, g) = match id {
        FamilyId::F1 => (a.mul(&y).mul(&p), b.mul(&x).mul(&p)),
        FamilyId::F2 | FamilyId::F3 => (
            quotient(y, a).mul(&p),
            quotient(x, b).mul(&p),
        ),
        FamilyId::F4 => (y.mul(&p), x.mul(&p)),
        FamilyId::F5 => (y.add(&p), x.add(&p)),
        FamilyId::Custom => unreachable!("rejected by family_kernel"),
    };
    Ok(YangBaxterMap {
        f,
        g,
        family: id,
        parametric: true,
    })
}
