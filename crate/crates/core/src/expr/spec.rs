//! Line-oriented map-spec files.
//!
//! ```text
//! # comment
//! kind: reflection
//! name: F_III
//! family: F3
//! symbols: t
//! h = -a*X/mu
//! sigma = mu^2/a
//! phi = a*X/mu
//! ```
//!
//! Headers are `key: value`; fields are `key = expression`. `sigma` also
//! accepts the keywords `id` and `free`, `phi` accepts `inf`.

use std::fs;
use std::path::Path;

use crate::algebra::{RatFn, Symbol};
use crate::error::{Error, Result};
use crate::ybmaps::reflection::is_mobius_in;
use crate::ybmaps::{FamilyId, ReflectionMap, Sigma, SymmetryMap, YangBaxterMap};

use super::parser::parse_expression;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    YangBaxter,
    Reflection,
    Symmetry,
}

impl SpecKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "yang_baxter" => Ok(SpecKind::YangBaxter),
            "reflection" => Ok(SpecKind::Reflection),
            "symmetry" => Ok(SpecKind::Symmetry),
            _ => Err(Error::Spec(format!("unknown kind `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecKind::YangBaxter => "yang_baxter",
            SpecKind::Reflection => "reflection",
            SpecKind::Symmetry => "symmetry",
        }
    }

    fn fields(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            SpecKind::YangBaxter => (&["f", "g"], &[]),
            SpecKind::Reflection => (&["h", "sigma"], &["phi"]),
            SpecKind::Symmetry => (&["s"], &[]),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FieldValue {
    Expr { text: String, value: RatFn },
    Keyword(String),
}

impl FieldValue {
    pub fn text(&self) -> &str {
        match self {
            FieldValue::Expr { text, .. } => text,
            FieldValue::Keyword(k) => k,
        }
    }
}

/// The folding value attached to a reflection spec.
#[derive(Clone, Debug)]
pub enum PhiSpec {
    Map(RatFn),
    Infinity,
}

#[derive(Clone, Debug)]
pub struct MapSpec {
    pub kind: SpecKind,
    pub name: String,
    pub family: Option<FamilyId>,
    pub declared_symbols: Vec<String>,
    pub fields: Vec<(String, FieldValue)>,
}

fn keywords(field: &str) -> &'static [&'static str] {
    match field {
        "sigma" => &["id", "free"],
        "phi" => &["inf"],
        _ => &[],
    }
}

pub fn parse_map_spec(text: &str) -> Result<MapSpec> {
    let mut kind = None;
    let mut name = String::new();
    let mut family = None;
    let mut declared: Vec<String> = Vec::new();
    let mut raw: Vec<(usize, String, String)> = Vec::new();

    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let eq = line.find('=');
        let colon = line.find(':');
        let is_field = match (eq, colon) {
            (Some(e), Some(c)) => e < c,
            (Some(_), None) => true,
            _ => false,
        };
        if let (true, Some((k, v))) = (is_field, line.split_once('=')) {
            let k = k.trim().to_string();
            if raw.iter().any(|(_, r, _)| *r == k) {
                return Err(Error::Spec(format!("line {lineno}: duplicate field {k}")));
            }
            raw.push((lineno, k, v.trim().to_string()));
        } else if let Some((k, v)) = line.split_once(':') {
            let v = v.trim();
            match k.trim() {
                "kind" => kind = Some(SpecKind::parse(v)?),
                "name" => name = v.to_string(),
                "family" => family = Some(v.parse::<FamilyId>()?),
                "symbols" => {
                    for s in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let ok = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                        if !ok {
                            return Err(Error::Spec(format!("line {lineno}: bad symbol name `{s}`")));
                        }
                        declared.push(s.to_string());
                    }
                }
                other => return Err(Error::Spec(format!("line {lineno}: unknown header `{other}`"))),
            }
        } else {
            return Err(Error::Spec(format!(
                "line {lineno}: expected `key: value` or `key = expression`"
            )));
        }
    }

    let kind = kind.ok_or_else(|| Error::Spec("missing header kind".into()))?;
    let (required, optional) = kind.fields();
    for (lineno, k, _) in &raw {
        if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
            return Err(Error::Spec(format!(
                "line {lineno}: field {k} is not valid for kind {}",
                kind.name()
            )));
        }
    }
    for r in required {
        if !raw.iter().any(|(_, k, _)| k == r) {
            return Err(Error::Spec(format!("missing field {r}")));
        }
    }

    let mut fields = Vec::new();
    for (lineno, k, v) in raw {
        let value = if keywords(&k).contains(&v.as_str()) {
            FieldValue::Keyword(v)
        } else {
            let ast = parse_expression(&v).map_err(|e| match e {
                Error::Parse { offset, expected, found } => Error::Spec(format!(
                    "line {lineno}, field {k}: parse error at byte {offset}: expected {}, found {found}",
                    expected.join(" or ")
                )),
                other => other,
            })?;
            let value = ast.lower_with(&declared).map_err(|e| match e {
                Error::UndeclaredSymbol(_) => e,
                other => Error::Spec(format!("field {k}: {other}")),
            })?;
            FieldValue::Expr { text: v, value }
        };
        fields.push((k, value));
    }

    let spec = MapSpec {
        kind,
        name,
        family,
        declared_symbols: declared,
        fields,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_map_spec(path: impl AsRef<Path>) -> Result<MapSpec> {
    let text = fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_map_spec(&text)
}

impl MapSpec {
    pub fn field(&self, name: &str) -> Option<&FieldValue> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn expr(&self, name: &str) -> Result<RatFn> {
        match self.field(name) {
            Some(FieldValue::Expr { value, .. }) => Ok(value.clone()),
            Some(FieldValue::Keyword(k)) => {
                Err(Error::Spec(format!("field {name} is the keyword `{k}`, not an expression")))
            }
            None => Err(Error::Spec(format!("missing field {name}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            SpecKind::YangBaxter => Ok(()),
            SpecKind::Reflection => {
                self.sigma()?;
                self.to_reflection().map(|_| ())
            }
            SpecKind::Symmetry => self.to_symmetry().map(|_| ()),
        }
    }

    pub fn sigma(&self) -> Result<Sigma> {
        match self.field("sigma") {
            Some(FieldValue::Keyword(k)) if k == "id" => Ok(Sigma::Identity),
            Some(FieldValue::Keyword(_)) => Ok(Sigma::Free),
            Some(FieldValue::Expr { value, .. }) => {
                if value.mentions(Symbol::X) || !is_mobius_in(value, Symbol::A) {
                    return Err(Error::Spec(format!(
                        "field sigma: `{value}` is not a Möbius map in a"
                    )));
                }
                Ok(Sigma::Mobius(value.clone()))
            }
            None => Err(Error::Spec("missing field sigma".into())),
        }
    }

    pub fn phi(&self) -> Option<PhiSpec> {
        match self.field("phi")? {
            FieldValue::Keyword(_) => Some(PhiSpec::Infinity),
            FieldValue::Expr { value, .. } => Some(PhiSpec::Map(value.clone())),
        }
    }

    fn require(&self, kind: SpecKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Spec(format!(
                "expected kind {}, found {}",
                kind.name(),
                self.kind.name()
            )));
        }
        Ok(())
    }

    pub fn to_yang_baxter(&self) -> Result<YangBaxterMap> {
        self.require(SpecKind::YangBaxter)?;
        let mut m = YangBaxterMap::custom(self.expr("f")?, self.expr("g")?);
        if let Some(id) = self.family {
            m.family = id;
        }
        Ok(m)
    }

    pub fn to_reflection(&self) -> Result<ReflectionMap> {
        self.require(SpecKind::Reflection)?;
        let h = self.expr("h")?;
        let r = ReflectionMap::new(h, self.sigma()?)
            .map_err(|e| Error::Spec(format!("field h: {e}")))?;
        Ok(r.named(self.name.clone()))
    }

    pub fn to_symmetry(&self) -> Result<SymmetryMap> {
        self.require(SpecKind::Symmetry)?;
        SymmetryMap::new(self.expr("s")?).map_err(|e| Error::Spec(format!("field s: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F3: &str = "kind: reflection\nname: F_III\nfamily: F3\n\
                      h = -a*X/mu   # table entry\nsigma = mu^2/a\nphi = a*X/mu\n";

    #[test]
    fn parses_reflection_spec() {
        let s = parse_map_spec(F3).unwrap();
        assert_eq!(s.kind, SpecKind::Reflection);
        assert_eq!(s.family, Some(FamilyId::F3));
        assert_eq!(s.field("h").unwrap().text(), "-a*X/mu");
        let r = s.to_reflection().unwrap();
        assert_eq!(r.name, "F_III");
        assert!(matches!(s.phi(), Some(PhiSpec::Map(_))));
        let s = parse_map_spec("kind: reflection\nname: h, phi = 1\nh = X\nsigma = id\n").unwrap();
        assert_eq!(s.name, "h, phi = 1");
    }

    #[test]
    fn keywords() {
        let s = parse_map_spec("kind: reflection\nh = X\nsigma = free\nphi = inf\n").unwrap();
        assert!(matches!(s.sigma().unwrap(), Sigma::Free));
        assert!(matches!(s.phi(), Some(PhiSpec::Infinity)));
        let s = parse_map_spec("kind: reflection\nh = X\nsigma = id\n").unwrap();
        assert!(matches!(s.sigma().unwrap(), Sigma::Identity));
    }

    #[test]
    fn spec_errors() {
        let e = parse_map_spec("kind: yang_baxter\nf = X\n").unwrap_err();
        assert_eq!(e, Error::Spec("missing field g".into()));
        let e = parse_map_spec("kind: yang_baxter\nf = t*X\ng = Y\n").unwrap_err();
        assert_eq!(e, Error::UndeclaredSymbol("t".into()));
        assert!(parse_map_spec("kind: yang_baxter\nsymbols: t\nf = t*X\ng = Y\n").is_ok());
        assert!(parse_map_spec("f = X\ng = Y\n").is_err());
        assert!(parse_map_spec("kind: reflection\nh = X^2\nsigma = id\n").is_err());
        assert!(parse_map_spec("kind: reflection\nh = X\nsigma = a^2\n").is_err());
        assert!(parse_map_spec("kind: symmetry\ns = X + 1\n").is_err());
        assert!(parse_map_spec("kind: yang_baxter\nf = X\ng = Y\nh = X\n").is_err());
        assert!(parse_map_spec("kind: yang_baxter\nf = X\nf = Y\ng = Y\n").is_err());
        assert!(matches!(
            parse_map_spec("kind: yang_baxter\nf = (X\ng = Y\n"),
            Err(Error::Spec(m)) if m.contains("line 2")
        ));
        assert!(matches!(load_map_spec("/nonexistent/x.map"), Err(Error::Io(_))));
    }
}
