//! Direct OOA learning: up to `K` pattern boxes are built jointly from
//! per-attribute literal choices.
//!
//! Numeric bounds are restricted to midpoints between adjacent observed
//! values plus the observed extremes. Moving a bound inside the gap between
//! two observed values changes no example's literal indicators, so this
//! loses nothing for the training objective.
//!
//! The search runs in two levels. Boxes are enumerated attribute by
//! attribute, dropping partial boxes whose positive coverage cannot pay for
//! their literals; boxes with identical coverage collapse to the shortest.
//! The surviving catalog is then searched for the best set of at most `K`
//! boxes by the selector's branch-and-bound, which visits box sets in a
//! single canonical order and so never revisits a permutation.

use std::collections::HashMap;
use std::fmt;
use std::time::Duration;

use crate::bits::BitVec;
use crate::dataset::{AttributeKind, Dataset, Value};
use crate::error::{Error, Result};
use crate::patterns::{coverage_matrix, CoverageMatrix, Literal, OAModel, Pattern, Provenance};
use crate::selector::{default_pattern_cap, solve, SelectionProblem, Solution};

/// Candidate bound values for numeric attribute `j`: the observed minimum,
/// midpoints between adjacent distinct values, and the observed maximum.
pub fn enumerate_thresholds(d: &Dataset, j: usize) -> Result<Vec<f64>> {
    if !d.schema().attribute(j).is_numeric() {
        return Err(Error::invalid(format!(
            "attribute '{}' is not numeric",
            d.schema().attribute(j).name
        )));
    }
    let mut values = d.numeric_values(j);
    values.dedup();
    let (Some(&lo), Some(&hi)) = (values.first(), values.last()) else {
        return Ok(Vec::new());
    };
    let mut out = vec![lo];
    out.extend(values.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    if hi > lo {
        out.push(hi);
    }
    Ok(out)
}

/// One box's decision for one attribute.
#[derive(Clone, Debug, PartialEq)]
pub enum AttributeChoice {
    /// Bound pair `l <= x <= u`; `(L_j, U_j)` is inactive.
    Numeric { lower: f64, upper: f64 },
    /// Picked category, if any.
    Categorical(Option<u32>),
}

/// `boxes[k][j]` is box `k`'s choice for attribute `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxAssignment {
    pub boxes: Vec<Vec<AttributeChoice>>,
}

/// Indicator variables implied by an assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedVariables {
    /// `[k][j]`: box `k` constrains attribute `j`.
    pub substantive: Vec<Vec<bool>>,
    /// `[n][k]`: example `n` satisfies box `k`.
    pub satisfied: Vec<Vec<bool>>,
    /// `[n]`: example `n` is misclassified.
    pub error: Vec<bool>,
    /// `[k]`: box `k` is in use.
    pub active: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape(String),
    /// Lower bound above upper bound.
    BoundOrder {
        box_index: usize,
        attr: usize,
    },
    /// A bound that is not a candidate threshold.
    OffGrid {
        box_index: usize,
        attr: usize,
        value: f64,
    },
    /// Choice kind does not match the attribute type.
    WrongKind {
        box_index: usize,
        attr: usize,
    },
    Substantive {
        box_index: usize,
        attr: usize,
    },
    /// `attr` names an unsatisfied literal when the flag is set, `None`
    /// when the flag is clear although every literal holds.
    Satisfied {
        row: usize,
        box_index: usize,
        attr: Option<usize>,
    },
    Error {
        row: usize,
    },
    Active {
        box_index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(m) => write!(f, "shape: {m}"),
            Violation::BoundOrder { box_index, attr } => {
                write!(
                    f,
                    "box {box_index} attribute {attr}: lower bound above upper"
                )
            }
            Violation::OffGrid {
                box_index,
                attr,
                value,
            } => {
                write!(
                    f,
                    "box {box_index} attribute {attr}: {value} is not a candidate threshold"
                )
            }
            Violation::WrongKind { box_index, attr } => {
                write!(
                    f,
                    "box {box_index} attribute {attr}: choice does not match attribute type"
                )
            }
            Violation::Substantive { box_index, attr } => {
                write!(
                    f,
                    "box {box_index} attribute {attr}: substantive flag inconsistent"
                )
            }
            Violation::Satisfied {
                row,
                box_index,
                attr: Some(j),
            } => {
                write!(
                    f,
                    "row {row} box {box_index}: marked satisfied but attribute {j} fails"
                )
            }
            Violation::Satisfied {
                row,
                box_index,
                attr: None,
            } => {
                write!(f, "row {row} box {box_index}: satisfied but not marked")
            }
            Violation::Error { row } => write!(f, "row {row}: error flag inconsistent"),
            Violation::Active { box_index } => {
                write!(f, "box {box_index}: activation flag inconsistent")
            }
        }
    }
}

/// The direct formulation on one dataset.
#[derive(Clone, Debug)]
pub struct MipInstance<'a> {
    pub dataset: &'a Dataset,
    pub boxes: usize,
    pub c1: f64,
    pub c2: f64,
    /// Candidate bounds per attribute; empty for categorical ones.
    pub thresholds: Vec<Vec<f64>>,
}

impl<'a> MipInstance<'a> {
    pub fn new(dataset: &'a Dataset, boxes: usize, c1: f64, c2: f64) -> Result<Self> {
        let schema = dataset.schema();
        let thresholds = (0..schema.len())
            .map(|j| {
                if schema.attribute(j).is_numeric() {
                    enumerate_thresholds(dataset, j)
                } else {
                    Ok(Vec::new())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MipInstance {
            dataset,
            boxes,
            c1,
            c2,
            thresholds,
        })
    }

    fn extremes(&self, j: usize) -> (f64, f64) {
        let t = &self.thresholds[j];
        match (t.first(), t.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Literal encoded by a choice; `None` when inactive.
    fn literal(&self, j: usize, c: &AttributeChoice) -> Option<Literal> {
        match *c {
            AttributeChoice::Numeric { lower, upper } => {
                let (lo, hi) = self.extremes(j);
                let lit = Literal::numeric(
                    j,
                    (lower > lo).then_some(lower),
                    (upper < hi).then_some(upper),
                );
                lit.is_substantive().then_some(lit)
            }
            AttributeChoice::Categorical(pick) => pick.map(|v| Literal::category(j, v)),
        }
    }

    pub fn decode(&self, a: &BoxAssignment) -> Vec<Pattern> {
        a.boxes
            .iter()
            .filter_map(|b| {
                let lits: Vec<Literal> = b
                    .iter()
                    .enumerate()
                    .filter_map(|(j, c)| self.literal(j, c))
                    .collect();
                (!lits.is_empty()).then(|| Pattern::new(lits).expect("one literal per attribute"))
            })
            .collect()
    }

    /// Box `k` holds pattern `k`; unused boxes are inactive.
    pub fn encode(&self, patterns: &[Pattern]) -> Result<BoxAssignment> {
        if patterns.len() > self.boxes {
            return Err(Error::invalid(format!(
                "{} patterns do not fit in {} boxes",
                patterns.len(),
                self.boxes
            )));
        }
        let schema = self.dataset.schema();
        let inactive: Vec<AttributeChoice> = (0..schema.len())
            .map(|j| match schema.attribute(j).kind {
                AttributeKind::Numeric { .. } => {
                    let (lo, hi) = self.extremes(j);
                    AttributeChoice::Numeric {
                        lower: lo,
                        upper: hi,
                    }
                }
                AttributeKind::Categorical { .. } => AttributeChoice::Categorical(None),
            })
            .collect();
        let mut boxes = vec![inactive.clone(); self.boxes];
        for (k, z) in patterns.iter().enumerate() {
            for lit in z.literals() {
                let j = lit.attr();
                boxes[k][j] = match *lit {
                    Literal::Numeric { lower, upper, .. } => {
                        let (lo, hi) = self.extremes(j);
                        AttributeChoice::Numeric {
                            lower: lower.unwrap_or(lo),
                            upper: upper.unwrap_or(hi),
                        }
                    }
                    Literal::Categorical { category, .. } => {
                        AttributeChoice::Categorical(Some(category))
                    }
                };
            }
        }
        Ok(BoxAssignment { boxes })
    }

    /// The indicator values an assignment forces.
    pub fn derive(&self, a: &BoxAssignment) -> DerivedVariables {
        let d = self.dataset;
        let lits: Vec<Vec<Option<Literal>>> = a
            .boxes
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .map(|(j, c)| self.literal(j, c))
                    .collect()
            })
            .collect();
        let substantive: Vec<Vec<bool>> = lits
            .iter()
            .map(|b| b.iter().map(Option::is_some).collect())
            .collect();
        let active: Vec<bool> = substantive.iter().map(|b| b.iter().any(|&s| s)).collect();
        let satisfied: Vec<Vec<bool>> = (0..d.len())
            .map(|n| {
                lits.iter()
                    .zip(&active)
                    .map(|(b, &on)| on && b.iter().flatten().all(|l| l.matches(d.row(n))))
                    .collect()
            })
            .collect();
        let error = (0..d.len())
            .map(|n| satisfied[n].iter().any(|&s| s) != d.label(n).is_positive())
            .collect();
        DerivedVariables {
            substantive,
            satisfied,
            error,
            active,
        }
    }

    pub fn objective(&self, a: &BoxAssignment) -> f64 {
        let v = self.derive(a);
        let errors = v.error.iter().filter(|&&e| e).count();
        let literals = v.substantive.iter().flatten().filter(|&&s| s).count();
        let patterns = v.active.iter().filter(|&&s| s).count();
        crate::patterns::objective_value(
            errors,
            literals,
            patterns,
            self.dataset.len(),
            self.c1,
            self.c2,
        )
    }
}

fn on_grid(t: &[f64], x: f64) -> bool {
    t.contains(&x)
}

/// Checks an assignment and its indicator values against the constraints
/// of the formulation; returns every violation found.
pub fn check_feasibility(
    inst: &MipInstance,
    a: &BoxAssignment,
    v: &DerivedVariables,
) -> (bool, Vec<Violation>) {
    let d = inst.dataset;
    let schema = d.schema();
    let j_count = schema.len();
    let mut out = Vec::new();
    let shape_ok = a.boxes.len() == inst.boxes
        && a.boxes.iter().all(|b| b.len() == j_count)
        && v.substantive.len() == inst.boxes
        && v.substantive.iter().all(|b| b.len() == j_count)
        && v.active.len() == inst.boxes
        && v.satisfied.len() == d.len()
        && v.satisfied.iter().all(|r| r.len() == inst.boxes)
        && v.error.len() == d.len();
    if !shape_ok {
        out.push(Violation::Shape(format!(
            "expected {} boxes over {} attributes and {} rows",
            inst.boxes,
            j_count,
            d.len()
        )));
        return (false, out);
    }
    for (k, b) in a.boxes.iter().enumerate() {
        for (j, c) in b.iter().enumerate() {
            let (lo, hi) = inst.extremes(j);
            let substantive = match (c, &schema.attribute(j).kind) {
                (AttributeChoice::Numeric { lower, upper }, AttributeKind::Numeric { .. }) => {
                    if lower > upper {
                        out.push(Violation::BoundOrder {
                            box_index: k,
                            attr: j,
                        });
                    }
                    for &x in [lower, upper] {
                        if !on_grid(&inst.thresholds[j], x) {
                            out.push(Violation::OffGrid {
                                box_index: k,
                                attr: j,
                                value: x,
                            });
                        }
                    }
                    *upper < hi || *lower > lo
                }
                (AttributeChoice::Categorical(pick), AttributeKind::Categorical { categories }) => {
                    if pick.is_some_and(|p| p as usize >= categories.len()) {
                        out.push(Violation::WrongKind {
                            box_index: k,
                            attr: j,
                        });
                    }
                    pick.is_some()
                }
                _ => {
                    out.push(Violation::WrongKind {
                        box_index: k,
                        attr: j,
                    });
                    false
                }
            };
            if v.substantive[k][j] != substantive {
                out.push(Violation::Substantive {
                    box_index: k,
                    attr: j,
                });
            }
        }
        if v.active[k] != v.substantive[k].iter().any(|&s| s) {
            out.push(Violation::Active { box_index: k });
        }
    }
    for n in 0..d.len() {
        let row = d.row(n);
        for (k, b) in a.boxes.iter().enumerate() {
            let failing = b
                .iter()
                .enumerate()
                .find(|(j, c)| inst.literal(*j, c).is_some_and(|l| !l.matches(row)))
                .map(|(j, _)| j);
            let holds = v.active[k] && failing.is_none();
            if v.satisfied[n][k] && !holds {
                out.push(Violation::Satisfied {
                    row: n,
                    box_index: k,
                    attr: failing,
                });
            } else if !v.satisfied[n][k] && holds {
                out.push(Violation::Satisfied {
                    row: n,
                    box_index: k,
                    attr: None,
                });
            }
        }
        let covered = v.satisfied[n].iter().any(|&s| s);
        if v.error[n] != (covered != d.label(n).is_positive()) {
            out.push(Violation::Error { row: n });
        }
    }
    (out.is_empty(), out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OoaConfig {
    /// Box count `K`; defaults to the cardinality bound capped at 5.
    pub boxes: Option<usize>,
    pub max_rows: usize,
    pub max_attributes: usize,
    /// Limit on partial boxes visited while building the catalog.
    pub max_catalog_nodes: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl Default for OoaConfig {
    fn default() -> Self {
        OoaConfig {
            boxes: None,
            max_rows: 500,
            max_attributes: 12,
            max_catalog_nodes: 5_000_000,
            time_limit: None,
            node_limit: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OoaOutput {
    pub model: OAModel,
    pub solution: Solution,
    /// Distinct-coverage boxes searched.
    pub catalog_size: usize,
}

/// Per attribute, every substantive literal over the candidate grid.
pub fn literal_options(d: &Dataset) -> Result<Vec<Vec<Literal>>> {
    let schema = d.schema();
    (0..schema.len())
        .map(|j| match &schema.attribute(j).kind {
            AttributeKind::Categorical { categories } => {
                let seen: Vec<bool> = (0..categories.len() as u32)
                    .map(|v| d.rows().any(|r| r[j] == Value::Cat(v)))
                    .collect();
                Ok((0..categories.len() as u32)
                    .filter(|&v| seen[v as usize])
                    .map(|v| Literal::category(j, v))
                    .collect())
            }
            AttributeKind::Numeric { .. } => {
                let t = enumerate_thresholds(d, j)?;
                let mut lits = Vec::new();
                if t.len() < 2 {
                    return Ok(lits);
                }
                let last = t.len() - 1;
                for a in 0..last {
                    for b in (a + 1)..=last {
                        if a == 0 && b == last {
                            continue;
                        }
                        lits.push(Literal::numeric(
                            j,
                            (a > 0).then_some(t[a]),
                            (b < last).then_some(t[b]),
                        ));
                    }
                }
                Ok(lits)
            }
        })
        .collect()
}

/// Every pattern expressible over the candidate grid, at most one literal
/// per attribute, shortest first. Exponential in the attribute count.
pub fn full_catalog(d: &Dataset) -> Result<Vec<Pattern>> {
    let options = literal_options(d)?;
    let mut out: Vec<Vec<Literal>> = vec![Vec::new()];
    for opts in &options {
        let mut next = Vec::with_capacity(out.len() * (opts.len() + 1));
        for base in &out {
            next.push(base.clone());
            for lit in opts {
                let mut p = base.clone();
                p.push(lit.clone());
                next.push(p);
            }
        }
        out = next;
    }
    let mut patterns: Vec<Pattern> = out
        .into_iter()
        .filter(|l| !l.is_empty())
        .map(Pattern::new)
        .collect::<Result<_>>()?;
    patterns.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(patterns)
}

struct CatalogBuilder<'a> {
    options: Vec<Vec<(Literal, BitVec)>>,
    positives: &'a BitVec,
    n: f64,
    c1: f64,
    c2: f64,
    visited: usize,
    limit: usize,
    by_coverage: HashMap<BitVec, Pattern>,
}

impl CatalogBuilder<'_> {
    fn grow(&mut self, j: usize, cov: &BitVec, lits: &mut Vec<Literal>) -> Result<()> {
        if j == self.options.len() {
            if !lits.is_empty() {
                let z = Pattern::new(lits.iter().cloned())?;
                let keep = match self.by_coverage.get(cov) {
                    Some(old) => (z.len(), &z) < (old.len(), old),
                    None => true,
                };
                if keep {
                    self.by_coverage.insert(cov.clone(), z);
                }
            }
            return Ok(());
        }
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::Guard(format!(
                "box catalog exceeded {} partial boxes; use the mined-pattern learner",
                self.limit
            )));
        }
        self.grow(j + 1, cov, lits)?;
        for o in 0..self.options[j].len() {
            let mut next = cov.clone();
            next.and_assign(&self.options[j][o].1);
            let pos = next.count_and(self.positives);
            let cost = self.c1 * (lits.len() + 1) as f64 + self.c2;
            // adding literals only shrinks coverage: no completion can pay
            if pos == 0 || (pos as f64 / self.n - cost) < -1e-12 {
                continue;
            }
            lits.push(self.options[j][o].0.clone());
            self.grow(j + 1, &next, lits)?;
            lits.pop();
        }
        Ok(())
    }
}

/// Boxes that could belong to an optimal set, one per distinct coverage.
fn box_catalog(d: &Dataset, c1: f64, c2: f64, limit: usize) -> Result<Vec<Pattern>> {
    let positives = d.positive_mask();
    let options = literal_options(d)?
        .into_iter()
        .map(|opts| {
            opts.into_iter()
                .map(|l| {
                    let cov = BitVec::from_fn(d.len(), |n| l.matches(d.row(n)));
                    (l, cov)
                })
                .collect()
        })
        .collect();
    let mut b = CatalogBuilder {
        options,
        positives: &positives,
        n: d.len() as f64,
        c1,
        c2,
        visited: 0,
        limit,
        by_coverage: HashMap::new(),
    };
    b.grow(0, &BitVec::ones(d.len()), &mut Vec::new())?;
    let mut out: Vec<Pattern> = b.by_coverage.into_values().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Exact OOA on desk-scale data.
pub fn solve_ooa(d: &Dataset, c1: f64, c2: f64, cfg: &OoaConfig) -> Result<OoaOutput> {
    if d.len() > cfg.max_rows || d.schema().len() > cfg.max_attributes {
        return Err(Error::Guard(format!(
            "{} rows / {} attributes exceed the direct solver's limit of {} / {}; use --mode ooax",
            d.len(),
            d.schema().len(),
            cfg.max_rows,
            cfg.max_attributes
        )));
    }
    if d.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    if !(c1 >= 0.0 && c2 >= 0.0) {
        return Err(Error::invalid("C1 and C2 must be non-negative"));
    }
    let k = match cfg.boxes {
        Some(0) => return Err(Error::invalid("box count must be >= 1")),
        Some(k) => k,
        None => default_pattern_cap(d.len(), d.n_positive(), c1, c2),
    };
    if k == 0 {
        // no pattern can pay for itself
        let w = coverage_matrix(&[], d);
        let solution = solve(&SelectionProblem::new(w, c1, c2, 1)?)?;
        return Ok(OoaOutput {
            model: OAModel::new(Vec::new(), c1, c2, 1, Provenance::Ooa)?,
            solution,
            catalog_size: 0,
        });
    }
    let catalog = box_catalog(d, c1, c2, cfg.max_catalog_nodes)?;
    let w: CoverageMatrix = coverage_matrix(&catalog, d);
    let problem = SelectionProblem::new(w, c1, c2, k)?
        .with_time_limit(cfg.time_limit)
        .with_node_limit(cfg.node_limit);
    let solution = solve(&problem)?;
    let patterns = solution
        .chosen
        .iter()
        .map(|&i| catalog[i].clone())
        .collect();
    Ok(OoaOutput {
        model: OAModel::new(patterns, c1, c2, k, Provenance::Ooa)?,
        solution,
        catalog_size: catalog.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_csv_from_reader, LoadOptions};
    use crate::patterns::{objective, serialize_model};
    use crate::test_fixtures::fixture;

    fn load(text: &str) -> Dataset {
        load_csv_from_reader(text.as_bytes(), &LoadOptions::default()).unwrap()
    }

    fn line() -> Dataset {
        load("x,y\n1.0,1\n2.0,1\n4.0,-1\n5.0,-1\n")
    }

    #[test]
    fn threshold_examples() {
        let d = load("x,y\n1.0,1\n2.0,1\n3.0,-1\n4.0,-1\n");
        assert_eq!(
            enumerate_thresholds(&d, 0).unwrap(),
            vec![1.0, 1.5, 2.5, 3.5, 4.0]
        );
        let d = load("x,y\n7.0,1\n7.0,-1\n");
        assert_eq!(enumerate_thresholds(&d, 0).unwrap(), vec![7.0]);
        assert!(literal_options(&d).unwrap()[0].is_empty());
        let d = load("x,y\n0,1\n1,-1\n");
        assert_eq!(enumerate_thresholds(&d, 0).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(enumerate_thresholds(&fixture(), 0).is_err());
    }

    #[test]
    fn one_dimensional_split_at_midpoint() {
        let d = line();
        let cfg = OoaConfig {
            boxes: Some(1),
            ..OoaConfig::default()
        };
        let out = solve_ooa(&d, 0.01, 0.02, &cfg).unwrap();
        assert_eq!(
            serialize_model(&out.model, d.schema()),
            "IF (x <= 3.0)\nTHEN 1 ELSE 0"
        );
        assert_eq!(out.model.errors(&d), 0);
        assert!((objective(&out.model, &d) - 0.03).abs() < 1e-12);
        assert!(out.solution.proven_optimal);
    }

    #[test]
    fn heavy_regularization_gives_empty_model() {
        let d = line();
        let out = solve_ooa(&d, 0.3, 0.3, &OoaConfig::default()).unwrap();
        assert!(out.model.patterns.is_empty());
        assert_eq!(objective(&out.model, &d), 0.5);
    }

    #[test]
    fn fixture_matches_selector_over_full_catalog() {
        let d = fixture();
        let cfg = OoaConfig {
            boxes: Some(2),
            ..OoaConfig::default()
        };
        let out = solve_ooa(&d, 0.01, 0.02, &cfg).unwrap();
        assert!((out.solution.objective - 0.03).abs() < 1e-12);
        let all = full_catalog(&d).unwrap();
        let p = SelectionProblem::new(coverage_matrix(&all, &d), 0.01, 0.02, 2).unwrap();
        assert_eq!(solve(&p).unwrap().objective, out.solution.objective);
    }

    #[test]
    fn scale_guard() {
        let d = line();
        let cfg = OoaConfig {
            max_rows: 3,
            ..OoaConfig::default()
        };
        let err = solve_ooa(&d, 0.01, 0.02, &cfg).unwrap_err();
        assert!(matches!(err, Error::Guard(ref m) if m.contains("ooax")));
        let cfg = OoaConfig {
            boxes: Some(0),
            ..OoaConfig::default()
        };
        assert!(solve_ooa(&d, 0.01, 0.02, &cfg).is_err());
    }

    #[test]
    fn consistent_assignment_is_feasible() {
        let d = fixture();
        let inst = MipInstance::new(&d, 2, 0.01, 0.02).unwrap();
        let z = Pattern::new([Literal::category(0, 0)]).unwrap();
        let a = inst.encode(std::slice::from_ref(&z)).unwrap();
        let v = inst.derive(&a);
        let (ok, violations) = check_feasibility(&inst, &a, &v);
        assert!(ok, "{violations:?}");
        assert_eq!(inst.decode(&a), vec![z]);
        assert!((inst.objective(&a) - 0.03).abs() < 1e-12);
        assert_eq!(v.active, vec![true, false]);
    }

    #[test]
    fn planted_inconsistencies_are_reported() {
        let d = fixture();
        let inst = MipInstance::new(&d, 1, 0.01, 0.02).unwrap();
        let a = inst
            .encode(&[Pattern::new([Literal::category(0, 0)]).unwrap()])
            .unwrap();
        let mut v = inst.derive(&a);
        // row 2 has x1 = b
        v.satisfied[2][0] = true;
        let (ok, violations) = check_feasibility(&inst, &a, &v);
        assert!(!ok);
        assert!(violations.contains(&Violation::Satisfied {
            row: 2,
            box_index: 0,
            attr: Some(0)
        }));

        let mut v = inst.derive(&a);
        v.active[0] = false;
        let (_, violations) = check_feasibility(&inst, &a, &v);
        assert!(violations.contains(&Violation::Active { box_index: 0 }));

        let mut bad = a.clone();
        bad.boxes[0][1] = AttributeChoice::Numeric {
            lower: 3.5,
            upper: 1.5,
        };
        let v = inst.derive(&bad);
        let (_, violations) = check_feasibility(&inst, &bad, &v);
        assert!(violations.contains(&Violation::BoundOrder {
            box_index: 0,
            attr: 1
        }));

        let mut off = a;
        off.boxes[0][1] = AttributeChoice::Numeric {
            lower: 1.0,
            upper: 2.2,
        };
        let v = inst.derive(&off);
        let (_, violations) = check_feasibility(&inst, &off, &v);
        assert!(violations
            .iter()
            .any(|x| matches!(x, Violation::OffGrid { value, .. } if *value == 2.2)));
    }
}
