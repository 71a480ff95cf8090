//! Tuple specification files.
//!
//! ```text
//! file     = { line } ;
//! line     = blank | comment | header | pair ;
//! comment  = "#" { any } ;
//! header   = "[settings]" | "[number]" ;
//! pair     = key "=" value ;
//! value    = integer | rational | list | string | word ;
//! list     = "[" [ integer { "," integer } ] "]" ;
//! rational = integer "/" digits ;
//! string   = '"' { any - '"' } '"' ;
//! ```
//!
//! `[settings]` accepts `t_max`, `burn_in`, `depth_cap`,
//! `max_compare_depth` and `out_dir`, at most once. Each `[number]` block
//! has a `name` and a `kind`:
//!
//! * `periodic`: `preperiod = [a0, a1, ...]`, `period = [...]`
//! * `finite`: `coefficients = [a0, a1, ...]`
//! * `surd`: `rational = p/q`, `root = p/q`, `radicand = D` (square-free)

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cf::{ContinuedFraction, QuadraticSurd, SurdError};
use crate::perm::{AnalysisConfig, Member};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{entity}: {message}")]
    Semantic { entity: String, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    pub t_max: Option<u64>,
    pub burn_in: Option<u64>,
    pub depth_cap: Option<usize>,
    pub max_compare_depth: Option<usize>,
    pub out_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// `preperiod[0]` is `a_0`; with an empty preperiod the period starts at `a_0`.
    Periodic { preperiod: Vec<i64>, period: Vec<i64> },
    /// `coefficients[0]` is `a_0`.
    Finite { coefficients: Vec<i64> },
    Surd { rational: BigRational, root: BigRational, radicand: u64 },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Periodic { .. } => "periodic",
            Payload::Finite { .. } => "finite",
            Payload::Surd { .. } => "surd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberSpec {
    pub name: String,
    pub payload: Payload,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TupleSpec {
    pub settings: Settings,
    pub numbers: Vec<NumberSpec>,
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Int(BigInt),
    Ratio(BigRational),
    List(Vec<i64>),
    Text(String),
}

struct Entry {
    key: String,
    value: Value,
    line: usize,
    column: usize,
}

struct Block {
    settings: bool,
    line: usize,
    entries: Vec<Entry>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(entity: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Semantic {
        entity: entity.into(),
        message: message.into(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Character column (1-based) of byte offset `at` in `raw`.
fn column(raw: &str, at: usize) -> usize {
    raw[..at].chars().count() + 1
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_value(raw: &str, at: usize, line: usize) -> Result<Value, SpecError> {
    let text = raw[at..].trim_end();
    let err = |offset: usize, msg: &str| syntax(line, column(raw, at + offset), msg);
    if text.is_empty() {
        return Err(err(0, "missing value"));
    }
    if let Some(body) = text.strip_prefix('[') {
        let Some(body) = body.strip_suffix(']') else {
            return Err(err(text.len(), "expected ']'"));
        };
        let mut items = Vec::new();
        if body.trim().is_empty() {
            return Ok(Value::List(items));
        }
        let mut offset = 1;
        for piece in body.split(',') {
            let lead = piece.len() - piece.trim_start().len();
            let item = piece.trim();
            let n = parse_integer(item)
                .and_then(|n| i64::try_from(n).ok())
                .ok_or_else(|| err(offset + lead, "expected an integer list element"))?;
            items.push(n);
            offset += piece.len() + 1;
        }
        return Ok(Value::List(items));
    }
    if let Some(body) = text.strip_prefix('"') {
        return match body.strip_suffix('"') {
            Some(s) if !s.contains('"') => Ok(Value::Text(s.to_string())),
            _ => Err(err(0, "unterminated string")),
        };
    }
    if let Some(p) = text.split_once('/').and_then(|(p, _)| parse_integer(p.trim())) {
        let q = &text[text.find('/').unwrap() + 1..];
        let q = parse_integer(q.trim())
            .filter(|q| q > &BigInt::zero())
            .ok_or_else(|| err(text.find('/').unwrap() + 1, "expected a positive denominator"))?;
        return Ok(Value::Ratio(BigRational::new(p, q)));
    }
    if let Some(n) = parse_integer(text) {
        return Ok(Value::Int(n));
    }
    if text.chars().any(char::is_whitespace) {
        return Err(err(0, "unexpected whitespace in value"));
    }
    Ok(Value::Text(text.to_string()))
}

fn lex(text: &str) -> Result<Vec<Block>, SpecError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut seen_settings = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lead = raw.len() - raw.trim_start().len();
        if trimmed.starts_with('[') {
            let settings = match trimmed {
                "[settings]" => true,
                "[number]" => false,
                _ => return Err(syntax(line, column(raw, lead), "unknown block header")),
            };
            if settings {
                if seen_settings {
                    return Err(syntax(line, column(raw, lead), "duplicate [settings] block"));
                }
                seen_settings = true;
            }
            blocks.push(Block {
                settings,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return Err(syntax(line, column(raw, lead), "expected 'key = value'"));
        };
        let key = raw[..eq].trim();
        if !is_identifier(key) {
            return Err(syntax(line, column(raw, lead), "expected a key"));
        }
        let Some(block) = blocks.last_mut() else {
            return Err(syntax(line, column(raw, lead), "key outside of a block"));
        };
        if block.entries.iter().any(|e| e.key == key) {
            return Err(syntax(line, column(raw, lead), format!("duplicate key '{key}'")));
        }
        let after = eq + 1;
        let at = after + (raw[after..].len() - raw[after..].trim_start().len());
        let value = parse_value(raw, at, line)?;
        block.entries.push(Entry {
            key: key.to_string(),
            value,
            line,
            column: column(raw, lead),
        });
    }
    Ok(blocks)
}

fn take<'a>(block: &'a Block, key: &str) -> Option<&'a Entry> {
    block.entries.iter().find(|e| e.key == key)
}

fn expect_unsigned(e: &Entry) -> Result<u64, SpecError> {
    match &e.value {
        Value::Int(n) => u64::try_from(n.clone())
            .map_err(|_| syntax(e.line, e.column, format!("'{}' must be a non-negative integer", e.key))),
        _ => Err(syntax(e.line, e.column, format!("'{}' must be an integer", e.key))),
    }
}

fn expect_list(e: &Entry) -> Result<Vec<i64>, SpecError> {
    match &e.value {
        Value::List(v) => Ok(v.clone()),
        _ => Err(syntax(e.line, e.column, format!("'{}' must be a list", e.key))),
    }
}

fn expect_rational(e: &Entry) -> Result<BigRational, SpecError> {
    match &e.value {
        Value::Int(n) => Ok(BigRational::from_integer(n.clone())),
        Value::Ratio(r) => Ok(r.clone()),
        _ => Err(syntax(e.line, e.column, format!("'{}' must be a rational", e.key))),
    }
}

fn expect_text(e: &Entry) -> Result<String, SpecError> {
    match &e.value {
        Value::Text(s) => Ok(s.clone()),
        _ => Err(syntax(e.line, e.column, format!("'{}' must be a word or string", e.key))),
    }
}

fn check_keys(block: &Block, allowed: &[&str], entity: &str) -> Result<(), SpecError> {
    match block.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
        Some(e) => Err(semantic(entity, format!("unexpected key '{}'", e.key))),
        None => Ok(()),
    }
}

fn parse_settings(block: &Block) -> Result<Settings, SpecError> {
    check_keys(block, &["t_max", "burn_in", "depth_cap", "max_compare_depth", "out_dir"], "settings")?;
    let size = |key: &str| -> Result<Option<usize>, SpecError> {
        take(block, key)
            .map(|e| expect_unsigned(e).map(|n| n as usize))
            .transpose()
    };
    Ok(Settings {
        t_max: take(block, "t_max").map(expect_unsigned).transpose()?,
        burn_in: take(block, "burn_in").map(expect_unsigned).transpose()?,
        depth_cap: size("depth_cap")?,
        max_compare_depth: size("max_compare_depth")?,
        out_dir: take(block, "out_dir").map(expect_text).transpose()?,
    })
}

fn check_quotients(entity: &str, key: &str, values: &[i64]) -> Result<(), SpecError> {
    match values.iter().position(|&a| a <= 0) {
        Some(i) => Err(semantic(
            entity,
            format!("{key}[{i}] = {} is not a positive partial quotient", values[i]),
        )),
        None => Ok(()),
    }
}

fn parse_number(block: &Block, ordinal: usize) -> Result<NumberSpec, SpecError> {
    let fallback = format!("number #{ordinal} (line {})", block.line);
    let name = match take(block, "name") {
        Some(e) => {
            let name = expect_text(e)?;
            if !is_identifier(&name) {
                return Err(semantic(&fallback, format!("'{name}' is not an identifier")));
            }
            name
        }
        None => return Err(semantic(&fallback, "missing 'name'")),
    };
    let kind = take(block, "kind")
        .map(expect_text)
        .transpose()?
        .ok_or_else(|| semantic(&name, "missing 'kind'"))?;
    let required = |key: &str| take(block, key).ok_or_else(|| semantic(&name, format!("missing '{key}'")));
    let payload = match kind.as_str() {
        "periodic" => {
            check_keys(block, &["name", "kind", "preperiod", "period"], &name)?;
            let preperiod = take(block, "preperiod").map(expect_list).transpose()?.unwrap_or_default();
            let period = expect_list(required("period")?)?;
            if period.is_empty() {
                return Err(semantic(&name, "period must not be empty"));
            }
            if !preperiod.is_empty() {
                check_quotients(&name, "preperiod", &preperiod[1..])?;
            }
            check_quotients(&name, "period", &period)?;
            Payload::Periodic { preperiod, period }
        }
        "finite" => {
            check_keys(block, &["name", "kind", "coefficients"], &name)?;
            let coefficients = expect_list(required("coefficients")?)?;
            if coefficients.len() < 2 {
                return Err(semantic(&name, "coefficients need a0 and at least one partial quotient"));
            }
            check_quotients(&name, "coefficients", &coefficients[1..])?;
            Payload::Finite { coefficients }
        }
        "surd" => {
            check_keys(block, &["name", "kind", "rational", "root", "radicand"], &name)?;
            let rational = expect_rational(required("rational")?)?;
            let root = expect_rational(required("root")?)?;
            let radicand = expect_unsigned(required("radicand")?)?;
            let surd = QuadraticSurd::new(rational.clone(), root.clone(), radicand)
                .map_err(|e| semantic(&name, e.to_string()))?;
            if surd.radicand() != radicand {
                return Err(semantic(&name, format!("radicand {radicand} is not square-free")));
            }
            Payload::Surd { rational, root, radicand }
        }
        other => return Err(semantic(&name, format!("unknown kind '{other}'"))),
    };
    Ok(NumberSpec { name, payload })
}

pub fn parse_spec(text: &str) -> Result<TupleSpec, SpecError> {
    let mut spec = TupleSpec::default();
    let mut names = HashSet::new();
    for block in lex(text)? {
        if block.settings {
            spec.settings = parse_settings(&block)?;
        } else {
            let number = parse_number(&block, spec.numbers.len() + 1)?;
            if !names.insert(number.name.clone()) {
                return Err(semantic(&number.name, "duplicate name"));
            }
            spec.numbers.push(number);
        }
    }
    let s = &spec.settings;
    if s.t_max == Some(0) {
        return Err(semantic("settings", "t_max must be at least 1"));
    }
    if s.burn_in == Some(0) {
        return Err(semantic("settings", "burn_in must be at least 1"));
    }
    if let (Some(t), Some(b)) = (s.t_max, s.burn_in) {
        if b > t {
            return Err(semantic("settings", format!("burn_in {b} exceeds t_max {t}")));
        }
    }
    Ok(spec)
}

fn fmt_list(v: &[i64]) -> String {
    let items: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl TupleSpec {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let s = &self.settings;
        if *s != Settings::default() {
            out.push_str("[settings]\n");
            let mut put = |k: &str, v: Option<String>| {
                if let Some(v) = v {
                    writeln!(out, "{k} = {v}").unwrap();
                }
            };
            put("t_max", s.t_max.map(|v| v.to_string()));
            put("burn_in", s.burn_in.map(|v| v.to_string()));
            put("depth_cap", s.depth_cap.map(|v| v.to_string()));
            put("max_compare_depth", s.max_compare_depth.map(|v| v.to_string()));
            put("out_dir", s.out_dir.as_ref().map(|v| format!("\"{v}\"")));
        }
        for n in &self.numbers {
            if !out.is_empty() {
                out.push('\n');
            }
            writeln!(out, "[number]\nname = {}\nkind = {}", n.name, n.payload.kind()).unwrap();
            match &n.payload {
                Payload::Periodic { preperiod, period } => {
                    writeln!(out, "preperiod = {}\nperiod = {}", fmt_list(preperiod), fmt_list(period)).unwrap();
                }
                Payload::Finite { coefficients } => {
                    writeln!(out, "coefficients = {}", fmt_list(coefficients)).unwrap();
                }
                Payload::Surd { rational, root, radicand } => {
                    writeln!(out, "rational = {}\nroot = {}\nradicand = {radicand}", fmt_ratio(rational), fmt_ratio(root))
                        .unwrap();
                }
            }
        }
        out
    }

    /// Settings with defaults filled in.
    pub fn config(&self) -> AnalysisConfig {
        let d = AnalysisConfig::default();
        AnalysisConfig {
            t_max: self.settings.t_max.unwrap_or(d.t_max),
            burn_in: self.settings.burn_in,
            max_compare_depth: self.settings.max_compare_depth.unwrap_or(d.max_compare_depth),
            screening_depth: d.screening_depth,
        }
    }

    pub fn members(&self, depth_cap: Option<usize>) -> Result<Vec<Member>, SpecError> {
        let cap = depth_cap.or(self.settings.depth_cap);
        self.numbers.iter().map(|n| n.to_member(cap)).collect()
    }
}

impl NumberSpec {
    pub fn to_member(&self, depth_cap: Option<usize>) -> Result<Member, SpecError> {
        let err = |e: String| semantic(&self.name, e);
        let member = match &self.payload {
            Payload::Periodic { preperiod, period } => {
                let period: Vec<u64> = period.iter().map(|&a| a as u64).collect();
                let cf = ContinuedFraction::from_words(preperiod, &period).map_err(|e| err(e.to_string()))?;
                Member::from_cf(&self.name, cf)
            }
            Payload::Finite { coefficients } => {
                let rest: Vec<u64> = coefficients[1..].iter().map(|&a| a as u64).collect();
                let cf = ContinuedFraction::finite(coefficients[0], &rest).map_err(|e| err(e.to_string()))?;
                Member::from_cf(&self.name, cf)
            }
            Payload::Surd { rational, root, radicand } => {
                let surd = QuadraticSurd::new(rational.clone(), root.clone(), *radicand)
                    .map_err(|e: SurdError| err(e.to_string()))?;
                Member::from_surd(&self.name, surd).map_err(|e| err(e.to_string()))?
            }
        };
        Ok(match depth_cap {
            Some(cap) => Member {
                cf: member.cf.with_depth_cap(cap),
                ..member
            },
            None => member,
        })
    }
}
