//! Run configuration: flat `[section]` blocks of `key = value` lines.
//!
//! ```text
//! [field]
//! descriptor = GF(5)
//!
//! [curve]
//! a = 1
//! b = 1
//! delta = T^3 + T + 1
//!
//! [params]
//! N = 2
//! ```
//!
//! Mathematical values are strings in the polynomial grammar. Lines starting
//! with `#` or `;` are comments.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{parse_ratfunc, AlgebraError, FieldDescriptor, PrimeField, Rationals, DEFAULT_ENUMERATION_GUARD};

use super::model::Model;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },
    #[error("cannot read config: {0}")]
    Io(String),
}

pub(crate) fn invalid(field: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::Validation { field: field.to_string(), reason: reason.to_string() }
}

/// The field the curve lives over: a constant field, or `k(T)` over one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub base: FieldDescriptor,
    pub function_field: bool,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if self.function_field {
            f.write_str("(T)")?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match text.strip_suffix("(T)") {
            Some(base) => Ok(Self { base: base.parse()?, function_field: true }),
            None => Ok(Self { base: text.parse()?, function_field: false }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSpec {
    /// `y² = x³ + ax + b`, or its twist by `delta` over `k(T)`.
    Short { a: String, b: String, delta: Option<String> },
    /// `[a1, a2, a3, a4, a6]`.
    General([String; 5]),
}

impl CurveSpec {
    pub fn delta(&self) -> Option<&str> {
        match self {
            Self::Short { delta, .. } => delta.as_deref(),
            Self::General(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpec {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Grid {
    #[default]
    Square,
    Diagonal,
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grid::Square => "square",
            Grid::Diagonal => "diagonal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Params {
    pub n_max: Option<u64>,
    pub big_n: Option<usize>,
    pub m_max: Option<u64>,
    pub search_bound: Option<u64>,
    pub base_n: Option<u64>,
    pub i: Option<u32>,
    pub grid: Option<Grid>,
}

pub const DEFAULT_DEGREE_GUARD: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Ceiling on projected polynomial degrees.
    pub degree: u64,
    /// Ceiling on `p^N` when enumerating primes.
    pub enumeration: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Self { degree: DEFAULT_DEGREE_GUARD, enumeration: DEFAULT_ENUMERATION_GUARD }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub field: Option<FieldSpec>,
    pub curve: Option<CurveSpec>,
    pub point: Option<PointSpec>,
    pub curve2: Option<CurveSpec>,
    pub point2: Option<PointSpec>,
    pub point_q: Option<PointSpec>,
    /// `(a, b)` for the multiplicative-group scan, over Q(T).
    pub gm: Option<(String, String)>,
    pub params: Params,
    pub guards: Guards,
    /// Expected sha256 of the emitted rows.
    pub rows_digest: Option<String>,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    entries: Vec<Entry>,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn syntax(line: usize, column: usize, message: &str) -> ConfigError {
    ConfigError::Syntax { line, column, message: message.to_string() }
}

fn lex(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let indent = raw.len() - raw.trim_start().len();
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') || body.starts_with(';') {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(syntax(line, indent + body.len(), "expected ']'"));
            };
            if let Some(bad) = name.chars().position(|c| !is_ident(c)) {
                return Err(syntax(line, indent + 2 + bad, "invalid character in section name"));
            }
            if name.is_empty() {
                return Err(syntax(line, indent + 2, "empty section name"));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(syntax(line, indent + 1, "duplicate section"));
            }
            sections.push(Section { name: name.to_string(), entries: Vec::new() });
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(syntax(line, indent + body.len() + 1, "expected 'key = value'"));
        };
        let key = body[..eq].trim_end();
        if key.is_empty() {
            return Err(syntax(line, indent + 1, "missing key"));
        }
        if let Some(bad) = key.chars().position(|c| !is_ident(c)) {
            return Err(syntax(line, indent + 1 + bad, "invalid character in key"));
        }
        let mut value = body[eq + 1..].trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        }
        let Some(section) = sections.last_mut() else {
            return Err(syntax(line, indent + 1, "key outside of any section"));
        };
        if section.entries.iter().any(|e| e.key == key) {
            return Err(syntax(line, indent + 1, "duplicate key"));
        }
        section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    Ok(sections)
}

/// Takes the recognized keys out of a section, rejecting the rest.
struct Reader<'a> {
    section: &'a str,
    entries: Vec<&'a Entry>,
}

impl<'a> Reader<'a> {
    fn new(section: &'a Section, allowed: &[&str]) -> Result<Self, ConfigError> {
        for e in &section.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(invalid(
                    &format!("{}.{}", section.name, e.key),
                    format!("unknown key on line {}", e.line),
                ));
            }
            if e.value.is_empty() {
                return Err(invalid(&format!("{}.{}", section.name, e.key), "empty value"));
            }
        }
        Ok(Self { section: &section.name, entries: section.entries.iter().collect() })
    }

    fn name(&self, key: &str) -> String {
        format!("{}.{}", self.section, key)
    }

    fn get(&self, key: &str) -> Option<String> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.value.clone())
    }

    fn require(&self, key: &str) -> Result<String, ConfigError> {
        self.get(key).ok_or_else(|| invalid(&self.name(key), "missing"))
    }

    fn number<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| invalid(&self.name(key), format!("'{v}' is not a valid number"))))
            .transpose()
    }

    fn positive<T: FromStr + PartialOrd + Default>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        let v = self.number::<T>(key)?;
        if v.as_ref().is_some_and(|v| *v <= T::default()) {
            return Err(invalid(&self.name(key), "must be positive"));
        }
        Ok(v)
    }
}

fn read_curve(r: &Reader) -> Result<CurveSpec, ConfigError> {
    let general = ["a1", "a2", "a3", "a4", "a6"];
    if general.iter().any(|k| r.get(k).is_some()) {
        if r.get("a").is_some() || r.get("b").is_some() || r.get("delta").is_some() {
            return Err(invalid(&r.name("a"), "give either a, b[, delta] or a1..a6"));
        }
        let c = |k: &str| r.get(k).unwrap_or_else(|| "0".to_string());
        return Ok(CurveSpec::General([c("a1"), c("a2"), c("a3"), c("a4"), c("a6")]));
    }
    Ok(CurveSpec::Short { a: r.require("a")?, b: r.require("b")?, delta: r.get("delta") })
}

fn read_point(r: &Reader) -> Result<PointSpec, ConfigError> {
    Ok(PointSpec { x: r.require("x")?, y: r.require("y")? })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let sections = lex(text)?;
        let mut cfg = RunConfig::default();
        let mut p_alias: Option<u64> = None;
        for s in &sections {
            match s.name.as_str() {
                "field" => {
                    let r = Reader::new(s, &["descriptor"])?;
                    let d = r.require("descriptor")?;
                    cfg.field = Some(d.parse().map_err(|e| invalid("field.descriptor", e))?);
                }
                "curve" | "curve2" => {
                    let r = Reader::new(s, &["a", "b", "delta", "p", "a1", "a2", "a3", "a4", "a6"])?;
                    if s.name == "curve" {
                        p_alias = r.number("p")?;
                    } else if r.get("p").is_some() {
                        return Err(invalid("curve2.p", "the characteristic is set once, in [field] or [curve]"));
                    }
                    let c = read_curve(&r)?;
                    if s.name == "curve" {
                        cfg.curve = Some(c);
                    } else {
                        cfg.curve2 = Some(c);
                    }
                }
                "point" | "point2" | "point_q" => {
                    let pt = read_point(&Reader::new(s, &["x", "y"])?)?;
                    match s.name.as_str() {
                        "point" => cfg.point = Some(pt),
                        "point2" => cfg.point2 = Some(pt),
                        _ => cfg.point_q = Some(pt),
                    }
                }
                "gm" => {
                    let r = Reader::new(s, &["a", "b"])?;
                    cfg.gm = Some((r.require("a")?, r.require("b")?));
                }
                "params" => {
                    let r = Reader::new(s, &["n_max", "N", "m_max", "search_bound", "base_n", "i", "grid"])?;
                    cfg.params = Params {
                        n_max: r.positive("n_max")?,
                        big_n: r.positive("N")?,
                        m_max: r.positive("m_max")?,
                        search_bound: r.positive("search_bound")?,
                        base_n: r.positive("base_n")?,
                        i: r.number("i")?,
                        grid: r
                            .get("grid")
                            .map(|g| match g.as_str() {
                                "square" => Ok(Grid::Square),
                                "diagonal" => Ok(Grid::Diagonal),
                                _ => Err(invalid("params.grid", "expected 'square' or 'diagonal'")),
                            })
                            .transpose()?,
                    };
                }
                "guards" => {
                    let r = Reader::new(s, &["degree", "enumeration"])?;
                    let d = Guards::default();
                    cfg.guards = Guards {
                        degree: r.positive("degree")?.unwrap_or(d.degree),
                        enumeration: r.positive("enumeration")?.unwrap_or(d.enumeration),
                    };
                }
                "expect" => {
                    let r = Reader::new(s, &["rows_digest"])?;
                    cfg.rows_digest = r.get("rows_digest");
                }
                other => return Err(invalid(other, "unknown section")),
            }
        }
        if let Some(p) = p_alias {
            let from_p = FieldSpec { base: FieldDescriptor::PrimeField(p), function_field: true };
            match &cfg.field {
                Some(f) if f.base != from_p.base => {
                    return Err(invalid("curve.p", format!("conflicts with field descriptor {f}")))
                }
                Some(_) => {}
                None => {
                    if p < 5 {
                        return Err(invalid("curve.p", "characteristic p >= 5 is required"));
                    }
                    PrimeField::new(p).map_err(|e| invalid("curve.p", e))?;
                    cfg.field = Some(from_p);
                }
            }
        }
        cfg.canonicalize()?;
        Ok(cfg)
    }

    /// Validates every value and rewrites polynomials in canonical form.
    pub fn canonicalize(&mut self) -> Result<(), ConfigError> {
        self.validate()?;
        let model = Model::build(self)?;
        model.canonicalize_into(self);
        if let Some((a, b)) = &mut self.gm {
            *a = canonical_ratfunc(a, "gm.a")?;
            *b = canonical_ratfunc(b, "gm.b")?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.curve2.is_some() && self.curve.is_none() {
            return Err(invalid("curve", "missing; [curve2] requires [curve]"));
        }
        if let (Some(f), Some(_)) = (&self.field, &self.curve) {
            let p = f.base.characteristic();
            if p == 2 || p == 3 {
                return Err(invalid("field.descriptor", "characteristic p >= 5 is required"));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn write_inputs(&self, out: &mut String) {
        let mut section = |name: &str, entries: Vec<(&str, String)>| {
            let _ = writeln!(out, "[{name}]");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
            out.push('\n');
        };
        if let Some(f) = &self.field {
            section("field", vec![("descriptor", f.to_string())]);
        }
        let curve_entries = |c: &CurveSpec| match c {
            CurveSpec::Short { a, b, delta } => {
                let mut v = vec![("a", a.clone()), ("b", b.clone())];
                if let Some(d) = delta {
                    v.push(("delta", d.clone()));
                }
                v
            }
            CurveSpec::General(cs) => ["a1", "a2", "a3", "a4", "a6"].into_iter().zip(cs.iter().cloned()).collect(),
        };
        let point_entries = |p: &PointSpec| vec![("x", p.x.clone()), ("y", p.y.clone())];
        if let Some(c) = &self.curve {
            section("curve", curve_entries(c));
        }
        if let Some(p) = &self.point {
            section("point", point_entries(p));
        }
        if let Some(c) = &self.curve2 {
            section("curve2", curve_entries(c));
        }
        if let Some(p) = &self.point2 {
            section("point2", point_entries(p));
        }
        if let Some(p) = &self.point_q {
            section("point_q", point_entries(p));
        }
        if let Some((a, b)) = &self.gm {
            section("gm", vec![("a", a.clone()), ("b", b.clone())]);
        }
        let p = &self.params;
        let mut params = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                params.push((k, v));
            }
        };
        push("n_max", p.n_max.map(|v| v.to_string()));
        push("N", p.big_n.map(|v| v.to_string()));
        push("m_max", p.m_max.map(|v| v.to_string()));
        push("search_bound", p.search_bound.map(|v| v.to_string()));
        push("base_n", p.base_n.map(|v| v.to_string()));
        push("i", p.i.map(|v| v.to_string()));
        push("grid", p.grid.map(|v| v.to_string()));
        if !params.is_empty() {
            section("params", params);
        }
        section(
            "guards",
            vec![("degree", self.guards.degree.to_string()), ("enumeration", self.guards.enumeration.to_string())],
        );
    }

    /// sha256 of the canonical inputs, excluding `[expect]`.
    pub fn digest(&self) -> String {
        let mut text = String::new();
        self.write_inputs(&mut text);
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn canonical_ratfunc(s: &str, name: &str) -> Result<String, ConfigError> {
    parse_ratfunc(s, &Rationals).map(|r| r.to_string()).map_err(|e| invalid(name, e))
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = String::new();
        self.write_inputs(&mut text);
        if let Some(d) = &self.rows_digest {
            let _ = writeln!(text, "[expect]\nrows_digest = {d}");
        }
        f.write_str(text.trim_end())?;
        f.write_str("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWIST: &str = "[field]\ndescriptor = GF(5)\n\n[curve]\na = 1\nb = 1\ndelta = T^3+T+1\n";

    #[test]
    fn twist_config_loads_and_round_trips() {
        let cfg = RunConfig::parse(TWIST).unwrap();
        assert_eq!(cfg.field.as_ref().unwrap().to_string(), "GF(5)(T)");
        assert_eq!(cfg.curve.as_ref().unwrap().delta(), Some("T^3 + T + 1"));
        assert_eq!(RunConfig::parse(&cfg.to_string()).unwrap(), cfg);
    }

    #[test]
    fn p_alias() {
        let cfg = RunConfig::parse("[curve]\np = 5\na = 1\nb = 1\ndelta = \"T^3+T+1\"\n").unwrap();
        assert_eq!(cfg, RunConfig::parse(TWIST).unwrap());
        let err = RunConfig::parse("[curve]\np = 3\na = 1\nb = 1\ndelta = T^3+T+1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "curve.p"), "{err}");
    }

    #[test]
    fn rejections_name_the_field() {
        let err = RunConfig::parse(&TWIST.replace("T^3+T+1", "1")).unwrap_err();
        match err {
            ConfigError::Validation { field, reason } => {
                assert_eq!(field, "curve.delta");
                assert!(reason.contains("trivial twist"));
            }
            other => panic!("{other:?}"),
        }
        let err = RunConfig::parse(&TWIST.replace("GF(5)", "GF(3)")).unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, ref reason } if field == "field.descriptor" && reason.contains("p >= 5")));
        let err = RunConfig::parse("[params]\nn_max = 0\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "params.n_max"));
        let err = RunConfig::parse("[params]\nnmax = 3\n").unwrap_err();
        assert!(matches!(err, ConfigError::Validation { ref field, .. } if field == "params.nmax"));
    }

    #[test]
    fn syntax_errors_have_positions() {
        assert_eq!(
            RunConfig::parse("[field]\ndescriptor Q\n").unwrap_err(),
            ConfigError::Syntax { line: 2, column: 13, message: "expected 'key = value'".into() }
        );
        assert!(matches!(RunConfig::parse("a = 1\n"), Err(ConfigError::Syntax { line: 1, column: 1, .. })));
        assert!(matches!(RunConfig::parse("[fi eld]\n"), Err(ConfigError::Syntax { line: 1, column: 4, .. })));
        assert!(matches!(RunConfig::parse("[params\n"), Err(ConfigError::Syntax { line: 1, .. })));
    }

    #[test]
    fn digest_ignores_layout_and_expectations() {
        let a = RunConfig::parse(TWIST).unwrap();
        let b = RunConfig::parse(&format!("# comment\n{}\n[expect]\nrows_digest = abc\n", TWIST.replace(" = ", "=")))
            .unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a, b);
    }
}
