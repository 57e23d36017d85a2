//! The Or-of-Ands model algebra: literals, patterns, prediction, supports,
//! the regularized objective and coverage matrices.

mod coverage;
mod model;
mod text;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Schema, Value};
use crate::error::{Error, Result};

pub use coverage::{coverage_matrix, pattern_coverage, CoverageMatrix};
pub use model::{
    objective, objective_terms, objective_value, predict, ModelFile, OAModel, ObjectiveTerms,
    Provenance,
};
pub use text::{parse_model, serialize_model};

/// One condition on one attribute. Numeric bounds are closed; an absent
/// bound is inactive (equivalent to `L_j` or `U_j`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Literal {
    Numeric {
        attr: usize,
        lower: Option<f64>,
        upper: Option<f64>,
    },
    Categorical {
        attr: usize,
        category: u32,
    },
}

impl Literal {
    pub fn numeric(attr: usize, lower: Option<f64>, upper: Option<f64>) -> Self {
        Literal::Numeric { attr, lower, upper }
    }

    pub fn category(attr: usize, category: u32) -> Self {
        Literal::Categorical { attr, category }
    }

    pub fn attr(&self) -> usize {
        match *self {
            Literal::Numeric { attr, .. } | Literal::Categorical { attr, .. } => attr,
        }
    }

    /// A literal is substantive when it can exclude some value.
    pub fn is_substantive(&self) -> bool {
        match self {
            Literal::Numeric { lower, upper, .. } => lower.is_some() || upper.is_some(),
            Literal::Categorical { .. } => true,
        }
    }

    /// Drops bounds that sit at or beyond the attribute's observed range.
    pub fn normalized(&self, schema: &Schema) -> Literal {
        match *self {
            Literal::Numeric { attr, lower, upper } => {
                let (lo, hi) = schema
                    .attribute(attr)
                    .range()
                    .unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
                Literal::Numeric {
                    attr,
                    lower: lower.filter(|&l| l > lo),
                    upper: upper.filter(|&u| u < hi),
                }
            }
            ref c => c.clone(),
        }
    }

    /// Closed-bound membership; a missing cell never matches.
    #[inline]
    pub fn to_text(&self, schema: &Schema) -> String {
        text::literal_text(self, schema)
    }

    pub fn matches(&self, row: &[Value]) -> bool {
        match *self {
            Literal::Numeric { attr, lower, upper } => match row[attr] {
                Value::Num(x) => lower.is_none_or(|l| x >= l) && upper.is_none_or(|u| x <= u),
                _ => false,
            },
            Literal::Categorical { attr, category } => row[attr] == Value::Cat(category),
        }
    }

    /// Conjunction of two literals on the same attribute; `None` when the
    /// conjunction is unsatisfiable.
    pub fn intersect(&self, other: &Literal) -> Result<Option<Literal>> {
        if self.attr() != other.attr() {
            return Err(Error::invalid(
                "intersecting literals on different attributes",
            ));
        }
        match (self, other) {
            (
                Literal::Categorical { category: a, .. },
                Literal::Categorical { category: b, .. },
            ) => Ok((a == b).then(|| self.clone())),
            (
                Literal::Numeric {
                    attr,
                    lower: l1,
                    upper: u1,
                },
                Literal::Numeric {
                    lower: l2,
                    upper: u2,
                    ..
                },
            ) => {
                let lower = match (l1, l2) {
                    (Some(a), Some(b)) => Some(a.max(*b)),
                    (a, b) => a.or(*b),
                };
                let upper = match (u1, u2) {
                    (Some(a), Some(b)) => Some(a.min(*b)),
                    (a, b) => a.or(*b),
                };
                if let (Some(l), Some(u)) = (lower, upper) {
                    if l > u {
                        return Ok(None);
                    }
                }
                Ok(Some(Literal::Numeric {
                    attr: *attr,
                    lower,
                    upper,
                }))
            }
            _ => Err(Error::invalid(format!(
                "attribute {} used as both numeric and categorical",
                self.attr()
            ))),
        }
    }

    fn key(&self) -> (usize, u8, u32) {
        match *self {
            Literal::Categorical { attr, category } => (attr, 0, category),
            Literal::Numeric { attr, .. } => (attr, 1, 0),
        }
    }
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Literal {}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (
                Literal::Numeric {
                    attr: a1,
                    lower: l1,
                    upper: u1,
                },
                Literal::Numeric {
                    attr: a2,
                    lower: l2,
                    upper: u2,
                },
            ) if a1 == a2 => {
                let c = |x: &Option<f64>, y: &Option<f64>| match (x, y) {
                    (None, None) => Ordering::Equal,
                    (None, Some(_)) => Ordering::Less,
                    (Some(_), None) => Ordering::Greater,
                    (Some(a), Some(b)) => a.total_cmp(b),
                };
                c(l1, l2).then_with(|| c(u1, u2))
            }
            _ => self.key().cmp(&other.key()),
        }
    }
}

impl Hash for Literal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match *self {
            Literal::Categorical { attr, category } => (0u8, attr, category).hash(state),
            Literal::Numeric { attr, lower, upper } => {
                (1u8, attr, lower.map(f64::to_bits), upper.map(f64::to_bits)).hash(state)
            }
        }
    }
}

/// A conjunction of literals, at most one per attribute, kept sorted by
/// attribute index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    literals: Vec<Literal>,
}

impl Pattern {
    /// Builds a pattern; non-substantive literals are dropped and two
    /// literals on one attribute are rejected.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut literals: Vec<Literal> = literals
            .into_iter()
            .filter(Literal::is_substantive)
            .collect();
        literals.sort();
        for w in literals.windows(2) {
            if w[0].attr() == w[1].attr() {
                return Err(Error::invalid(format!(
                    "pattern has two literals on attribute {}",
                    w[0].attr()
                )));
            }
        }
        Ok(Pattern { literals })
    }

    /// The all-match pattern (vacuous conjunction).
    pub fn empty() -> Self {
        Pattern {
            literals: Vec::new(),
        }
    }

    /// Conjunction of arbitrary literals: same-attribute literals are merged
    /// (intervals intersected), `None` when the result is unsatisfiable.
    pub fn conjunction<'a>(
        literals: impl IntoIterator<Item = &'a Literal>,
    ) -> Result<Option<Self>> {
        let mut merged: Vec<Literal> = Vec::new();
        for lit in literals {
            match merged.iter_mut().find(|m| m.attr() == lit.attr()) {
                Some(m) => match m.intersect(lit)? {
                    Some(x) => *m = x,
                    None => return Ok(None),
                },
                None => merged.push(lit.clone()),
            }
        }
        Pattern::new(merged).map(Some)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Number of substantive literals `l_z`.
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn satisfies(&self, row: &[Value]) -> bool {
        self.literals.iter().all(|l| l.matches(row))
    }

    /// `literals(self) ⊆ literals(other)`
    pub fn is_literal_subset_of(&self, other: &Pattern) -> bool {
        self.literals.iter().all(|l| other.literals.contains(l))
    }

    /// Row of the `P` matrix: which attributes the pattern constrains.
    pub fn attribute_mask(&self, n_attributes: usize) -> Vec<bool> {
        let mut m = vec![false; n_attributes];
        for l in &self.literals {
            m[l.attr()] = true;
        }
        m
    }

    pub fn to_text(&self, schema: &Schema) -> String {
        text::pattern_text(self, schema)
    }
}

pub fn matches(lit: &Literal, row: &[Value]) -> bool {
    lit.matches(row)
}

pub fn satisfies(z: &Pattern, row: &[Value]) -> bool {
    z.satisfies(row)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Support {
    pub pos: usize,
    pub neg: usize,
}

impl Support {
    pub fn total(&self) -> usize {
        self.pos + self.neg
    }
}

pub fn support(z: &Pattern, d: &Dataset) -> Support {
    let mut s = Support::default();
    for (row, label) in d.rows().zip(d.labels()) {
        if z.satisfies(row) {
            if label.is_positive() {
                s.pos += 1;
            } else {
                s.neg += 1;
            }
        }
    }
    s
}
