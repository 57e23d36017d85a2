use serde::{Deserialize, Serialize};

use super::{Literal, Pattern};
use crate::dataset::{AttributeKind, Dataset, Schema, Value};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Ooax,
    Ooa,
    Converted,
}

/// The classifier `f_A`: predicts 1 iff some pattern in `A` is satisfied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OAModel {
    pub patterns: Vec<Pattern>,
    pub c1: f64,
    pub c2: f64,
    pub pattern_cap: usize,
    pub provenance: Provenance,
}

impl OAModel {
    pub fn new(
        patterns: Vec<Pattern>,
        c1: f64,
        c2: f64,
        pattern_cap: usize,
        provenance: Provenance,
    ) -> Result<Self> {
        let m = OAModel {
            patterns,
            c1,
            c2,
            pattern_cap,
            provenance,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pattern_cap == 0 {
            return Err(Error::invalid("pattern cap must be >= 1"));
        }
        if self.patterns.len() > self.pattern_cap {
            return Err(Error::invalid(format!(
                "{} patterns exceed the cap {}",
                self.patterns.len(),
                self.pattern_cap
            )));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(Error::invalid("C1 and C2 must be non-negative"));
        }
        // converted trees may hold the all-match pattern of a depth-0 tree
        if self.provenance != Provenance::Converted && self.patterns.iter().any(Pattern::is_empty) {
            return Err(Error::invalid(
                "model patterns must have at least one literal",
            ));
        }
        Ok(())
    }

    /// A model holding the all-match pattern predicts 1 everywhere.
    pub fn is_degenerate(&self) -> bool {
        self.patterns.iter().any(Pattern::is_empty)
    }

    pub fn predict(&self, row: &[Value]) -> u8 {
        predict(self, row)
    }

    pub fn total_literals(&self) -> usize {
        self.patterns.iter().map(Pattern::len).sum()
    }

    pub fn average_length(&self) -> f64 {
        if self.patterns.is_empty() {
            0.0
        } else {
            self.total_literals() as f64 / self.patterns.len() as f64
        }
    }

    pub fn errors(&self, d: &Dataset) -> usize {
        d.rows()
            .zip(d.labels())
            .filter(|(row, y)| self.predict(row) != y.as_prediction())
            .count()
    }

    pub fn accuracy(&self, d: &Dataset) -> f64 {
        if d.is_empty() {
            return 0.0;
        }
        1.0 - self.errors(d) as f64 / d.len() as f64
    }
}

pub fn predict(m: &OAModel, row: &[Value]) -> u8 {
    u8::from(m.patterns.iter().any(|z| z.satisfies(row)))
}

/// The integer ingredients of `L(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ObjectiveTerms {
    pub errors: usize,
    pub literals: usize,
    pub patterns: usize,
}

impl ObjectiveTerms {
    pub fn value(&self, n: usize, c1: f64, c2: f64) -> f64 {
        objective_value(self.errors, self.literals, self.patterns, n, c1, c2)
    }
}

/// `errors / N + C1 * literals + C2 * patterns`, evaluated in this order
/// everywhere so equal terms give bitwise-equal objectives.
#[inline]
pub fn objective_value(
    errors: usize,
    literals: usize,
    patterns: usize,
    n: usize,
    c1: f64,
    c2: f64,
) -> f64 {
    errors as f64 / n as f64 + c1 * literals as f64 + c2 * patterns as f64
}

pub fn objective_terms(m: &OAModel, d: &Dataset) -> ObjectiveTerms {
    ObjectiveTerms {
        errors: m.errors(d),
        literals: m.total_literals(),
        patterns: m.patterns.len(),
    }
}

/// `L(A)` on `d`.
pub fn objective(m: &OAModel, d: &Dataset) -> f64 {
    objective_terms(m, d).value(d.len(), m.c1, m.c2)
}

/// A trained model together with the schema it was trained on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema: Schema,
    pub model: OAModel,
}

impl ModelFile {
    pub fn new(schema: Schema, model: OAModel) -> Self {
        ModelFile { schema, model }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.schema.validate()?;
        file.model.validate()?;
        for z in &file.model.patterns {
            for lit in z.literals() {
                let ok = lit.attr() < file.schema.len()
                    && match (lit, &file.schema.attribute(lit.attr()).kind) {
                        (Literal::Numeric { .. }, AttributeKind::Numeric { .. }) => true,
                        (
                            Literal::Categorical { category, .. },
                            AttributeKind::Categorical { categories },
                        ) => (*category as usize) < categories.len(),
                        _ => false,
                    };
                if !ok {
                    return Err(Error::invalid(
                        "model literal does not fit the stored schema",
                    ));
                }
            }
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Literal;
    use crate::test_fixtures::fixture;

    fn model(ps: Vec<Pattern>) -> OAModel {
        OAModel::new(ps, 0.01, 0.02, 5, Provenance::Ooax).unwrap()
    }

    #[test]
    fn predict_examples() {
        let a = Pattern::new([Literal::category(0, 0)]).unwrap();
        let ge3 = Pattern::new([Literal::numeric(1, Some(3.0), None)]).unwrap();
        let m = model(vec![a.clone()]);
        assert_eq!(m.predict(&[Value::Cat(0), Value::Num(1.0)]), 1);
        assert_eq!(model(vec![]).predict(&[Value::Cat(0), Value::Num(1.0)]), 0);
        let m2 = model(vec![a, ge3]);
        assert_eq!(m2.predict(&[Value::Cat(1), Value::Num(4.0)]), 1);
    }

    #[test]
    fn objective_examples() {
        let d = fixture();
        assert_eq!(objective(&model(vec![]), &d), 0.5);
        let a = Pattern::new([Literal::category(0, 0)]).unwrap();
        assert!((objective(&model(vec![a]), &d) - 0.03).abs() < 1e-12);
        let le2 = Pattern::new([Literal::numeric(1, None, Some(2.0))]).unwrap();
        let m = model(vec![le2]);
        assert_eq!(m.errors(&d), 2);
        assert!((objective(&m, &d) - 0.53).abs() < 1e-12);
    }

    #[test]
    fn cap_and_empty_pattern_are_checked() {
        let a = Pattern::new([Literal::category(0, 0)]).unwrap();
        assert!(OAModel::new(vec![a.clone(), a], 0.0, 0.0, 1, Provenance::Ooax).is_err());
        assert!(OAModel::new(vec![Pattern::empty()], 0.0, 0.0, 1, Provenance::Ooax).is_err());
        let conv =
            OAModel::new(vec![Pattern::empty()], 0.0, 0.0, 1, Provenance::Converted).unwrap();
        assert!(conv.is_degenerate());
    }

    #[test]
    fn model_file_round_trip() {
        let d = crate::test_fixtures::fixture();
        let z = Pattern::new([
            Literal::category(0, 0),
            Literal::numeric(1, None, Some(2.0)),
        ])
        .unwrap();
        let m = OAModel::new(vec![z], 0.01, 0.02, 3, Provenance::Ooax).unwrap();
        let file = ModelFile::new(d.schema().clone(), m);
        let back = ModelFile::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(back, file);
        let bad = file
            .to_json()
            .unwrap()
            .replace("\"category\": 0", "\"category\": 7");
        assert!(ModelFile::from_json(&bad).is_err());
        assert!(matches!(ModelFile::from_json("{"), Err(Error::Json(_))));
    }
}
