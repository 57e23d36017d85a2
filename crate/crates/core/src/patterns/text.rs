//! Human-readable model format:
//!
//! ```text
//! IF (x1 = a AND x2 <= 2.0)
//! OR (1.5 <= x3 <= 4.0)
//! THEN 1 ELSE 0
//! ```
//!
//! An empty model is written `IF (FALSE)`, the all-match pattern `TRUE`.

use super::{Literal, OAModel, Pattern};
use crate::dataset::{AttributeKind, Schema};
use crate::error::{Error, Result};

const TAIL: &str = "THEN 1 ELSE 0";

fn real(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn literal_text(lit: &Literal, schema: &Schema) -> String {
    match *lit {
        Literal::Categorical { attr, category } => {
            let a = schema.attribute(attr);
            format!("{} = {}", a.name, a.category_name(category).unwrap_or("?"))
        }
        Literal::Numeric { attr, lower, upper } => {
            let name = &schema.attribute(attr).name;
            match (lower, upper) {
                (Some(l), Some(u)) => format!("{} <= {} <= {}", real(l), name, real(u)),
                (None, Some(u)) => format!("{} <= {}", name, real(u)),
                (Some(l), None) => format!("{} >= {}", name, real(l)),
                (None, None) => "TRUE".to_string(),
            }
        }
    }
}

pub(crate) fn pattern_text(z: &Pattern, schema: &Schema) -> String {
    if z.is_empty() {
        return "TRUE".to_string();
    }
    z.literals()
        .iter()
        .map(|l| literal_text(l, schema))
        .collect::<Vec<_>>()
        .join(" AND ")
}

/// Writes the pattern set of `m`; parameters are not part of this format.
pub fn serialize_model(m: &OAModel, schema: &Schema) -> String {
    let mut lines = Vec::with_capacity(m.patterns.len() + 1);
    if m.patterns.is_empty() {
        lines.push("IF (FALSE)".to_string());
    }
    for (k, z) in m.patterns.iter().enumerate() {
        let kw = if k == 0 { "IF" } else { "OR" };
        lines.push(format!("{kw} ({})", pattern_text(z, schema)));
    }
    lines.push(TAIL.to_string());
    lines.join("\n")
}

fn perr(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.into(),
    }
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| perr(line, s, "expected a finite real number"))
}

fn attr_index(schema: &Schema, name: &str, line: usize) -> Result<usize> {
    schema
        .index_of(name)
        .ok_or_else(|| perr(line, name, "unknown attribute"))
}

fn parse_literal(s: &str, schema: &Schema, line: usize) -> Result<Literal> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    match tokens.as_slice() {
        [lo, "<=", name, "<=", hi] => {
            let j = attr_index(schema, name, line)?;
            if !schema.attribute(j).is_numeric() {
                return Err(perr(line, name, "range on a categorical attribute"));
            }
            let (l, u) = (parse_real(lo, line)?, parse_real(hi, line)?);
            if l > u {
                return Err(perr(line, hi, "upper bound below lower bound"));
            }
            Ok(Literal::numeric(j, Some(l), Some(u)))
        }
        [name, op @ ("<=" | ">="), value] => {
            let j = attr_index(schema, name, line)?;
            if !schema.attribute(j).is_numeric() {
                return Err(perr(line, op, "comparison on a categorical attribute"));
            }
            let x = parse_real(value, line)?;
            Ok(if *op == "<=" {
                Literal::numeric(j, None, Some(x))
            } else {
                Literal::numeric(j, Some(x), None)
            })
        }
        [name, "=", value] => {
            let j = attr_index(schema, name, line)?;
            match &schema.attribute(j).kind {
                AttributeKind::Categorical { .. } => {
                    let v = schema
                        .attribute(j)
                        .category_index(value)
                        .ok_or_else(|| perr(line, value, "unknown category"))?;
                    Ok(Literal::category(j, v))
                }
                AttributeKind::Numeric { .. } => {
                    Err(perr(line, "=", "equality on a numeric attribute"))
                }
            }
        }
        [_, op, _] => Err(perr(line, op, "expected '=', '<=' or '>='")),
        [_, "<=", _, op, _] => Err(perr(line, op, "expected '<='")),
        [op, ..] if tokens.len() == 5 => Err(perr(line, op, "malformed range")),
        _ => Err(perr(line, s, "malformed literal")),
    }
}

fn parse_conjunction(body: &str, schema: &Schema, line: usize) -> Result<Pattern> {
    if body.trim() == "TRUE" {
        return Ok(Pattern::empty());
    }
    let lits = body
        .split(" AND ")
        .map(|s| parse_literal(s.trim(), schema, line))
        .collect::<Result<Vec<_>>>()?;
    Pattern::new(lits).map_err(|e| perr(line, body, e.to_string()))
}

/// Parses the pattern list of a text model against `schema`.
pub fn parse_model(text: &str, schema: &Schema) -> Result<Vec<Pattern>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(((last_no, last), body)) = lines.split_last() else {
        return Err(perr(1, "", "empty model text"));
    };
    if *last != TAIL {
        return Err(perr(
            *last_no,
            last.split_whitespace().next().unwrap_or(""),
            "expected 'THEN 1 ELSE 0'",
        ));
    }
    if body.is_empty() {
        return Err(perr(*last_no, "THEN", "expected 'IF (' before 'THEN'"));
    }
    let mut patterns = Vec::with_capacity(body.len());
    for (k, &(line_no, l)) in body.iter().enumerate() {
        let kw = if k == 0 { "IF" } else { "OR" };
        let first = l.split_whitespace().next().unwrap_or("");
        let inner = l
            .strip_prefix(kw)
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| {
                perr(
                    line_no,
                    first,
                    format!("expected '{kw} (<literal> [AND <literal>]*)'"),
                )
            })?;
        if k == 0 && inner.trim() == "FALSE" {
            if body.len() > 1 {
                return Err(perr(line_no, "FALSE", "an empty model has no OR lines"));
            }
            return Ok(Vec::new());
        }
        patterns.push(parse_conjunction(inner, schema, line_no)?);
    }
    Ok(patterns)
}
