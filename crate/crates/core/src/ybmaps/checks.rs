//! Exact and randomized verification of the defining identities.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::algebra::identity::{random_fp, rational_witness};
use crate::algebra::{
    rf_equal_randomized, Fp, ProjPoint, RatFn, Rational, Symbol, MODULUS,
};
use crate::algebra::field::rational_to_string;
use crate::error::{Error, Result};

use super::engine::{
    apply_chain, Boundary, Factor, NumericDomain, Site, SymbolicDomain,
};
use super::family::YangBaxterMap;
use super::reflection::{ReflectionMap, Sigma, SymmetryMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Randomized,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Randomized => "randomized",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "randomized" => Ok(Method::Randomized),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub method: Method,
    pub trials: usize,
    pub seed: u64,
}

impl CheckOptions {
    pub fn exact() -> Self {
        CheckOptions {
            method: Method::Exact,
            trials: 20,
            seed: 0,
        }
    }

    pub fn randomized(trials: usize, seed: u64) -> Self {
        CheckOptions {
            method: Method::Randomized,
            trials,
            seed,
        }
    }
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self::exact()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// A sample point. Values are exact rationals (`p/q`) or residues modulo
/// [`MODULUS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub modulus: Option<u64>,
    pub point: Vec<(String, String)>,
}

impl Witness {
    pub fn rational(values: &[(Symbol, Rational)]) -> Self {
        Witness {
            modulus: None,
            point: values
                .iter()
                .map(|(s, v)| (s.name(), rational_to_string(v)))
                .collect(),
        }
    }

    pub fn prime(values: Vec<(String, Fp)>) -> Self {
        Witness {
            modulus: Some(MODULUS),
            point: values.into_iter().map(|(n, v)| (n, v.to_string())).collect(),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        match self.modulus {
            Some(p) => m.serialize_entry("field", &format!("GF({p})"))?,
            None => m.serialize_entry("field", "Q")?,
        }
        let point: serde_json::Map<String, serde_json::Value> = self
            .point
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        m.serialize_entry("point", &point)?;
        m.end()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        match self.modulus {
            Some(p) => write!(f, "{} (mod {p})", body.join(", ")),
            None => f.write_str(&body.join(", ")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub status: Status,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub timing: Duration,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, status: Status, method: Method) -> Self {
        CheckReport {
            check_name: name.into(),
            status,
            method,
            witness: None,
            timing: Duration::ZERO,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.check_name = name.into();
        self
    }

    /// Combines sub-reports: passes iff all pass; the first failure supplies
    /// the witness.
    pub fn combine(name: impl Into<String>, method: Method, parts: Vec<CheckReport>) -> Self {
        let mut out = CheckReport::new(name, Status::Pass, method);
        for p in parts {
            out.timing += p.timing;
            if !p.passed() && out.passed() {
                out.status = Status::Fail;
                out.witness = p.witness.clone();
                out.notes.push(format!("{} failed", p.check_name));
            }
            out.notes.extend(p.notes);
        }
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.check_name, self.method, self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " at {w}")?;
        }
        Ok(())
    }
}

fn timed(start: Instant, mut r: CheckReport) -> CheckReport {
    r.timing = start.elapsed();
    r
}

/// Two factor chains that should act identically on `sites` sites.
#[derive(Clone, Debug)]
pub struct ChainIdentity {
    pub name: String,
    pub sites: usize,
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

/// Variable and parameter symbols for site `i`: `(X, a)`, `(Y, b)`, `(Z, c)`,
/// then `(X_4, a_4)` onwards.
pub fn site_symbols(n: usize) -> Vec<(Symbol, Symbol)> {
    (0..n)
        .map(|i| match i {
            0 => (Symbol::X, Symbol::A),
            1 => (Symbol::Y, Symbol::B),
            2 => (Symbol::Z, Symbol::C),
            _ => (
                Symbol::intern(&format!("X_{}", i + 1)),
                Symbol::intern(&format!("a_{}", i + 1)),
            ),
        })
        .collect()
}

/// Symbols (besides slot variables and parameters) that a numeric sample
/// must bind, such as `mu`.
fn extra_symbols(map: &YangBaxterMap, refl: &[&ReflectionMap]) -> Vec<Symbol> {
    let slots = [
        Symbol::X,
        Symbol::Y,
        Symbol::A,
        Symbol::B,
        Symbol::SIGMA_A,
        Symbol::SIGMA_B,
    ];
    let mut out = map.f.symbols();
    out.extend(map.g.symbols());
    for r in refl {
        out.extend(r.free_symbols());
    }
    out.retain(|s| !slots.contains(s));
    out.sort();
    out.dedup();
    out
}

pub fn check_chain_identity(
    map: &YangBaxterMap,
    plus: Option<&ReflectionMap>,
    minus: Option<&ReflectionMap>,
    id: &ChainIdentity,
    opts: &CheckOptions,
) -> CheckReport {
    let start = Instant::now();
    let r = match opts.method {
        Method::Exact => chain_exact(map, plus, minus, id, opts.seed),
        Method::Randomized => chain_randomized(map, plus, minus, id, opts),
    };
    timed(start, r)
}

fn chain_exact(
    map: &YangBaxterMap,
    plus: Option<&ReflectionMap>,
    minus: Option<&ReflectionMap>,
    id: &ChainIdentity,
    seed: u64,
) -> CheckReport {
    let d = SymbolicDomain { map, plus, minus };
    let sites: Vec<Site<RatFn, RatFn>> = site_symbols(id.sites)
        .into_iter()
        .map(|(x, p)| Site {
            x: RatFn::var(x),
            param: RatFn::var(p),
        })
        .collect();
    let fail = |note: String| CheckReport::new(&id.name, Status::Fail, Method::Exact).with_note(note);
    let l = match apply_chain(&d, &sites, &id.lhs) {
        Ok(s) => s,
        Err(e) => return fail(format!("lhs factor {} ({}): {}", e.factor + 1, id.lhs[e.factor], e.error)),
    };
    let r = match apply_chain(&d, &sites, &id.rhs) {
        Ok(s) => s,
        Err(e) => return fail(format!("rhs factor {} ({}): {}", e.factor + 1, id.rhs[e.factor], e.error)),
    };
    for (i, (ls, rs)) in l.iter().zip(&r).enumerate() {
        for (what, lv, rv) in [("variable", &ls.x, &rs.x), ("parameter", &ls.param, &rs.param)] {
            if !lv.equals(rv) {
                let mut rep = fail(format!("site {} {what} differs", i + 1));
                rep.witness = rational_witness(lv, rv, seed).map(|w| Witness::rational(&w));
                return rep;
            }
        }
    }
    CheckReport::new(&id.name, Status::Pass, Method::Exact)
}

fn chain_randomized(
    map: &YangBaxterMap,
    plus: Option<&ReflectionMap>,
    minus: Option<&ReflectionMap>,
    id: &ChainIdentity,
    opts: &CheckOptions,
) -> CheckReport {
    let fail = |note: String| {
        CheckReport::new(&id.name, Status::Fail, Method::Randomized).with_note(note)
    };
    if opts.trials == 0 {
        return fail("trials must be at least 1".into());
    }
    let mut domain = match NumericDomain::<Fp>::new(map, plus, minus) {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let refl: Vec<&ReflectionMap> = plus.into_iter().chain(minus).collect();
    let free = refl.iter().any(|r| r.sigma.is_free());
    let extras = extra_symbols(map, &refl);
    let names = site_symbols(id.sites);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut valid = 0;
    let mut misses = 0;
    while valid < opts.trials {
        let mut point: Vec<(String, Fp)> = Vec::new();
        let mut sites = Vec::with_capacity(id.sites);
        for (xs, ps) in &names {
            let (x, p) = (random_fp(&mut rng), random_fp(&mut rng));
            point.push((xs.name(), x));
            point.push((ps.name(), p));
            sites.push(Site {
                x: ProjPoint::finite(x),
                param: p,
            });
        }
        for s in &extras {
            let v = random_fp(&mut rng);
            domain.bind(*s, v);
            point.push((s.name(), v));
        }
        if free {
            domain.clear_free_pairs();
            for (site, (_, ps)) in sites.iter().zip(&names) {
                let v = random_fp(&mut rng);
                domain.set_free_pair(site.param, v);
                point.push((format!("sigma({})", ps.name()), v));
            }
        }
        let l = apply_chain(&domain, &sites, &id.lhs);
        let r = apply_chain(&domain, &sites, &id.rhs);
        let (l, r) = match (l, r) {
            (Ok(l), Ok(r)) => (l, r),
            _ => {
                misses += 1;
                if misses >= 100 * opts.trials {
                    let mut rep = fail(Error::SampleExhaustion(misses).to_string());
                    rep.witness = Some(Witness::prime(point));
                    return rep;
                }
                continue;
            }
        };
        misses = 0;
        if let Some(i) = l.iter().zip(&r).position(|(a, b)| a != b) {
            let mut rep = fail(format!("site {} differs", i + 1));
            rep.witness = Some(Witness::prime(point));
            return rep;
        }
        valid += 1;
    }
    CheckReport::new(&id.name, Status::Pass, Method::Randomized)
}

/// Compares two rational functions by the chosen method.
pub fn check_rf_identity(
    name: &str,
    lhs: &RatFn,
    rhs: &RatFn,
    opts: &CheckOptions,
) -> CheckReport {
    let start = Instant::now();
    let rep = match opts.method {
        Method::Exact => {
            if lhs.equals(rhs) {
                CheckReport::new(name, Status::Pass, Method::Exact)
            } else {
                let mut r = CheckReport::new(name, Status::Fail, Method::Exact);
                r.witness = rational_witness(lhs, rhs, opts.seed).map(|w| Witness::rational(&w));
                r
            }
        }
        Method::Randomized => match rf_equal_randomized(lhs, rhs, opts.trials, opts.seed) {
            Ok(v) if v.equal => CheckReport::new(name, Status::Pass, Method::Randomized),
            Ok(v) => {
                let mut r = CheckReport::new(name, Status::Fail, Method::Randomized);
                r.witness = v
                    .witness
                    .map(|w| Witness::prime(w.into_iter().map(|(s, x)| (s.name(), x)).collect()));
                r
            }
            Err(e) => CheckReport::new(name, Status::Fail, Method::Randomized).with_note(e.to_string()),
        },
    };
    timed(start, rep)
}

pub fn yang_baxter_identity() -> ChainIdentity {
    ChainIdentity {
        name: "yang_baxter".into(),
        sites: 3,
        lhs: vec![Factor::R(1, 2), Factor::R(0, 2), Factor::R(0, 1)],
        rhs: vec![Factor::R(0, 1), Factor::R(0, 2), Factor::R(1, 2)],
    }
}

pub fn reversibility_identity() -> ChainIdentity {
    ChainIdentity {
        name: "reversibility".into(),
        sites: 2,
        lhs: vec![Factor::R(0, 1), Factor::R(1, 0)],
        rhs: vec![],
    }
}

/// The reflection equation for the given boundary, in application order.
pub fn reflection_identity(side: Boundary) -> ChainIdentity {
    let (r, s) = match side {
        Boundary::Plus => (Factor::R(0, 1), Factor::R(1, 0)),
        Boundary::Minus => (Factor::R(1, 0), Factor::R(0, 1)),
    };
    let (k1, k2) = (Factor::K(0, side), Factor::K(1, side));
    ChainIdentity {
        name: match side {
            Boundary::Plus => "reflection".into(),
            Boundary::Minus => "reflection_minus".into(),
        },
        sites: 2,
        lhs: vec![r, k2, s, k1],
        rhs: vec![k1, r, k2, s],
    }
}

pub fn check_yang_baxter(map: &YangBaxterMap, opts: &CheckOptions) -> CheckReport {
    check_chain_identity(map, None, None, &yang_baxter_identity(), opts)
}

pub fn check_reversibility(map: &YangBaxterMap, opts: &CheckOptions) -> CheckReport {
    check_chain_identity(map, None, None, &reversibility_identity(), opts)
}

/// `f_ab(X, Y) = g_ba(Y, X)`.
pub fn check_pi_symmetry(map: &YangBaxterMap, opts: &CheckOptions) -> CheckReport {
    let swapped = map.g.substitute(&[
        (Symbol::X, RatFn::var(Symbol::Y)),
        (Symbol::Y, RatFn::var(Symbol::X)),
        (Symbol::A, RatFn::var(Symbol::B)),
        (Symbol::B, RatFn::var(Symbol::A)),
    ]);
    match swapped {
        Ok(g) => check_rf_identity("pi_symmetry", &map.f, &g, opts),
        Err(e) => CheckReport::new("pi_symmetry", Status::Fail, opts.method).with_note(e.to_string()),
    }
}

pub fn check_reflection(
    map: &YangBaxterMap,
    refl: &ReflectionMap,
    opts: &CheckOptions,
) -> CheckReport {
    check_chain_identity(map, Some(refl), None, &reflection_identity(Boundary::Plus), opts)
}

/// The right-boundary equation `K1 R12 K2 R21 = R12 K2 R21 K1`.
pub fn check_reflection_minus(
    map: &YangBaxterMap,
    refl: &ReflectionMap,
    opts: &CheckOptions,
) -> CheckReport {
    check_chain_identity(map, None, Some(refl), &reflection_identity(Boundary::Minus), opts)
}

/// `sigma(sigma(a)) = a` and `h_{sigma(a)}(h_a(X)) = X`.
pub fn check_involutive_reflection(refl: &ReflectionMap, opts: &CheckOptions) -> CheckReport {
    let start = Instant::now();
    let name = "involutive_reflection";
    let a = RatFn::var(Symbol::A);
    let x = RatFn::var(Symbol::X);
    let composed = (|| -> Result<(RatFn, RatFn)> {
        let (hx, sa) = refl.apply(&x, &a)?;
        let (hhx, ssa) = refl.apply(&hx, &sa)?;
        Ok((hhx, ssa))
    })();
    let (hhx, ssa) = match composed {
        Ok(v) => v,
        Err(e) => {
            return timed(start, CheckReport::new(name, Status::Fail, opts.method).with_note(e.to_string()))
        }
    };
    let mut parts = Vec::new();
    if !matches!(refl.sigma, Sigma::Free) {
        parts.push(check_rf_identity("sigma_involution", &ssa, &a, opts));
    }
    parts.push(check_rf_identity("h_involution", &hhx, &x, opts));
    timed(start, CheckReport::combine(name, opts.method, parts))
}

/// `R^s(a, b) = (s(a) x Id) R(a, b) (Id x s(b))`, after checking that
/// `s(a) x s(b)` commutes with `R(a, b)`.
pub fn symmetry_conjugate(map: &YangBaxterMap, s: &SymmetryMap) -> Result<YangBaxterMap> {
    let (x, y) = (RatFn::var(Symbol::X), RatFn::var(Symbol::Y));
    let (a, b) = (RatFn::var(Symbol::A), RatFn::var(Symbol::B));
    let sx = s.apply(&x, &a)?;
    let sy = s.apply(&y, &b)?;
    let inner = [(Symbol::X, sx.clone()), (Symbol::Y, sy.clone())];
    let f_s = map.f.substitute(&inner)?;
    let g_s = map.g.substitute(&inner)?;
    let sf = s.apply(&map.f, &a)?;
    let sg = s.apply(&map.g, &b)?;
    if !f_s.equals(&sf) || !g_s.equals(&sg) {
        return Err(Error::NotASymmetry(format!(
            "s(a) x s(b) does not commute with {}",
            map.name()
        )));
    }
    let fy = map.f.substitute(&[(Symbol::Y, sy.clone())])?;
    let f = s.apply(&fy, &a)?;
    let g = map.g.substitute(&[(Symbol::Y, sy)])?;
    Ok(YangBaxterMap {
        f,
        g,
        family: map.family,
        parametric: map.parametric,
    })
}
