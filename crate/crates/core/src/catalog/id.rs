use std::fmt;

use crate::error::{GermError, Result};
use crate::scalar::{format_scalar, Scalar};
use crate::series::{Jet1, Jet2};

/// Rows of the table of semicomplete germs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    R1a,
    R1b,
    R1c,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
}

/// Families of commuting pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Row(Row),
    Pair(PairKind),
}

const ROWS: [(Row, &str); 15] = [
    (Row::R1a, "1a"),
    (Row::R1b, "1b"),
    (Row::R1c, "1c"),
    (Row::R2, "2"),
    (Row::R3, "3"),
    (Row::R4, "4"),
    (Row::R5, "5"),
    (Row::R6, "6"),
    (Row::R7, "7"),
    (Row::R8, "8"),
    (Row::R9, "9"),
    (Row::R10, "10"),
    (Row::R11, "11"),
    (Row::R12, "12"),
    (Row::R13, "13"),
];

const PAIRS: [(PairKind, &str); 7] = [
    (PairKind::I, "i"),
    (PairKind::II, "ii"),
    (PairKind::III, "iii"),
    (PairKind::IV, "iv"),
    (PairKind::V, "v"),
    (PairKind::VI, "vi"),
    (PairKind::VII, "vii"),
];

impl Row {
    pub fn all() -> impl Iterator<Item = Row> {
        ROWS.iter().map(|r| r.0)
    }

    pub fn label(self) -> &'static str {
        ROWS.iter().find(|r| r.0 == self).map(|r| r.1).unwrap()
    }
}

impl PairKind {
    pub fn all() -> impl Iterator<Item = PairKind> {
        PAIRS.iter().map(|r| r.0)
    }

    pub fn label(self) -> &'static str {
        PAIRS.iter().find(|r| r.0 == self).map(|r| r.1).unwrap()
    }
}

impl Family {
    /// Canonical parameter order in identifiers.
    fn key_order(self) -> &'static [&'static str] {
        match self {
            Family::Row(Row::R1a | Row::R1b) => &["a"],
            Family::Row(Row::R1c) => &["a", "g1", "g2"],
            Family::Row(Row::R2 | Row::R11 | Row::R13) => &["n", "f"],
            Family::Row(Row::R3) => &["f"],
            Family::Row(Row::R10) => &["m", "n", "p", "lambda"],
            Family::Row(Row::R12) => &["m", "n", "a", "b", "f"],
            Family::Row(_) => &["a", "f"],
            Family::Pair(PairKind::I) => &["n", "alpha", "r", "s", "b"],
            Family::Pair(PairKind::III) => &["n", "c1", "c2"],
            Family::Pair(PairKind::IV) => &["n", "g1", "g2"],
            Family::Pair(PairKind::V) => &["n"],
            Family::Pair(PairKind::VII) => &["m", "n", "a", "b", "amu", "bmu", "k1", "u1", "u2"],
            Family::Pair(_) => &[],
        }
    }
}

/// A parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum Param<S> {
    Int(i64),
    /// A scalar or a series in one variable `z`.
    Uni { jet: Jet1<S>, text: String },
    /// A series in `(x, y)`.
    Bi { jet: Jet2<S>, text: String },
}

impl<S: Scalar> Param<S> {
    pub fn uni(jet: Jet1<S>) -> Self {
        let text = format_jet1(&jet);
        Param::Uni { jet, text }
    }

    pub fn bi(jet: Jet2<S>) -> Self {
        let text = format_jet2(&jet);
        Param::Bi { jet, text }
    }

    fn text(&self) -> String {
        match self {
            Param::Int(k) => k.to_string(),
            Param::Uni { text, .. } | Param::Bi { text, .. } => text.clone(),
        }
    }
}

fn term(c: &str, mono: String) -> String {
    match (c, mono.is_empty()) {
        (_, true) => c.to_string(),
        ("1", false) => mono,
        ("-1", false) => format!("-{mono}"),
        _ if c.contains(['+', 'i']) || c[1..].contains('-') => format!("({c})*{mono}"),
        _ => format!("{c}*{mono}"),
    }
}

fn join(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(t);
        }
    }
    out
}

fn power(var: &str, k: u32) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// Polynomial text of a one-variable jet in `z`.
pub fn format_jet1<S: Scalar>(j: &Jet1<S>) -> String {
    join(j.terms().map(|(k, c)| term(&format_scalar(c), power("z", k))).collect())
}

/// Polynomial text of a two-variable jet in `x, y`.
pub fn format_jet2<S: Scalar>(j: &Jet2<S>) -> String {
    join(
        j.terms()
            .map(|(i, k, c)| {
                let mono = [power("x", i), power("y", k)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*");
                term(&format_scalar(c), mono)
            })
            .collect(),
    )
}

/// A normal form identifier such as `table:2[n=1]` or `mt:vii[m=2,n=3,a=2,b=1,k1=0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormId<S> {
    pub family: Family,
    params: Vec<(String, Param<S>)>,
}

impl<S: Scalar> NormalFormId<S> {
    pub fn new(family: Family) -> Self {
        NormalFormId { family, params: Vec::new() }
    }

    pub fn row(row: Row) -> Self {
        Self::new(Family::Row(row))
    }

    pub fn pair(kind: PairKind) -> Self {
        Self::new(Family::Pair(kind))
    }

    /// Adds or replaces a parameter, keeping the canonical order.
    pub fn with(mut self, key: &str, value: Param<S>) -> Self {
        self.params.retain(|(k, _)| k != key);
        self.params.push((key.to_string(), value));
        let order = self.family.key_order();
        let rank = |k: &str| order.iter().position(|o| *o == k).unwrap_or(order.len());
        self.params.sort_by(|a, b| rank(&a.0).cmp(&rank(&b.0)).then_with(|| a.0.cmp(&b.0)));
        self
    }

    pub fn with_int(self, key: &str, value: i64) -> Self {
        self.with(key, Param::Int(value))
    }

    pub fn params(&self) -> &[(String, Param<S>)] {
        &self.params
    }

    pub fn get(&self, key: &str) -> Option<&Param<S>> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn int(&self, key: &str) -> Result<Option<i64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Param::Int(k)) => Ok(Some(*k)),
            Some(_) => Err(GermError::BadParams(format!("parameter {key} must be an integer"))),
        }
    }

    pub fn int_or(&self, key: &str, default: i64) -> Result<i64> {
        Ok(self.int(key)?.unwrap_or(default))
    }

    /// A one-variable series parameter; integers are read as constants.
    pub fn uni(&self, key: &str, degree: u32) -> Result<Option<Jet1<S>>> {
        Ok(match self.get(key) {
            None => None,
            Some(Param::Int(k)) => Some(Jet1::constant(S::from_i64(*k), degree)),
            Some(Param::Uni { jet, .. }) => Some(jet.clone()),
            Some(Param::Bi { .. }) => {
                return Err(GermError::BadParams(format!("parameter {key} must be a series in z")));
            }
        })
    }

    /// A two-variable series parameter; integers and series in `z` are read as constants.
    pub fn bi(&self, key: &str, degree: u32) -> Result<Option<Jet2<S>>> {
        Ok(match self.get(key) {
            None => None,
            Some(Param::Int(k)) => Some(Jet2::constant(S::from_i64(*k), degree)),
            Some(Param::Uni { jet, .. }) => {
                if jet.terms().any(|(k, _)| k > 0) {
                    return Err(GermError::BadParams(format!("parameter {key} must be a series in x, y")));
                }
                Some(Jet2::constant(jet.coeff(0), degree))
            }
            Some(Param::Bi { jet, .. }) => Some(jet.clone()),
        })
    }

    /// Parses an identifier; non-integer values are handed to `series`.
    pub fn parse_with(text: &str, mut series: impl FnMut(&str, &str) -> Result<Param<S>>) -> Result<Self> {
        let bad = |msg: &str| GermError::BadParams(format!("{msg} in identifier {text:?}"));
        let (head, body) = match text.find('[') {
            Some(i) => {
                let body = text[i + 1..].strip_suffix(']').ok_or_else(|| bad("missing ']'"))?;
                (&text[..i], Some(body))
            }
            None => (text, None),
        };
        let (prefix, label) = head.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let family = match prefix.trim() {
            "table" => ROWS.iter().find(|r| r.1 == label.trim()).map(|r| Family::Row(r.0)),
            "mt" => PAIRS.iter().find(|r| r.1 == label.trim()).map(|r| Family::Pair(r.0)),
            _ => None,
        }
        .ok_or_else(|| bad("unknown family"))?;
        let mut id = Self::new(family);
        if let Some(body) = body {
            for item in split_top_level(body) {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (k, v) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                let (k, v) = (k.trim(), v.trim());
                let value = match v.parse::<i64>() {
                    Ok(n) => Param::Int(n),
                    Err(_) => series(k, v)?,
                };
                id = id.with(k, value);
            }
        }
        Ok(id)
    }

    /// Parses an identifier with integer parameters only.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, |k, _| {
            Err(GermError::BadParams(format!("parameter {k} is not an integer; series values need the expression parser")))
        })
    }

    /// `self` has the family of `other` and agrees with it on every integer parameter it carries.
    pub fn matches(&self, other: &Self) -> bool {
        self.family == other.family
            && self.params.iter().all(|(k, v)| match v {
                Param::Int(a) => match other.get(k) {
                    Some(Param::Int(b)) => a == b,
                    _ => false,
                },
                _ => true,
            })
    }
}

fn split_top_level(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&body[start..]);
    out
}

impl<S: Scalar> fmt::Display for NormalFormId<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Row(r) => write!(f, "table:{}", r.label())?,
            Family::Pair(p) => write!(f, "mt:{}", p.label())?,
        }
        if !self.params.is_empty() {
            let body: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", v.text())).collect();
            write!(f, "[{}]", body.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat as Q;

    #[test]
    fn round_trip() {
        for s in ["table:2[n=1]", "mt:vii[m=2,n=3,a=2,b=1,k1=0]", "table:3", "mt:vi", "table:12[m=2,n=1,a=1,b=1]"] {
            let id = NormalFormId::<Q>::parse(s).unwrap();
            assert_eq!(id.to_string(), s);
        }
        let id = NormalFormId::<Q>::parse("table:12[b=1,a=1,n=1,m=2]").unwrap();
        assert_eq!(id.to_string(), "table:12[m=2,n=1,a=1,b=1]");
        assert!(NormalFormId::<Q>::parse("table:14").is_err());
        assert!(NormalFormId::<Q>::parse("table:2[n=z^2]").is_err());
    }

    #[test]
    fn polynomial_text() {
        let j = Jet1::<Q>::from_coeffs(vec![Q::from_i64(1), Q::from_i64(0), Q::from_ratio(-1, 2)], 4);
        assert_eq!(format_jet1(&j), "1-1/2*z^2");
        let j = Jet2::<Q>::from_int_terms(4, &[(0, 0, 1), (1, 1, -1), (2, 0, 3)]);
        assert_eq!(format_jet2(&j), "1+3*x^2-x*y");
    }
}
