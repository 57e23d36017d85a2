//! Mixed-type tabular data: schema, CSV loading, binarization and
//! stratified folds.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::patterns::Literal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AttributeKind {
    /// `range` holds the observed `(L_j, U_j)`; `None` until data is seen.
    Numeric {
        range: Option<(f64, f64)>,
    },
    Categorical {
        categories: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric { range: None },
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        categories: impl IntoIterator<Item = S>,
    ) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Categorical {
                categories: categories.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric { .. })
    }

    /// Number of categories `V_j`, zero for numeric attributes.
    pub fn category_count(&self) -> usize {
        match &self.kind {
            AttributeKind::Categorical { categories } => categories.len(),
            AttributeKind::Numeric { .. } => 0,
        }
    }

    pub fn category_index(&self, value: &str) -> Option<u32> {
        match &self.kind {
            AttributeKind::Categorical { categories } => {
                categories.iter().position(|c| c == value).map(|i| i as u32)
            }
            AttributeKind::Numeric { .. } => None,
        }
    }

    pub fn category_name(&self, index: u32) -> Option<&str> {
        match &self.kind {
            AttributeKind::Categorical { categories } => {
                categories.get(index as usize).map(String::as_str)
            }
            AttributeKind::Numeric { .. } => None,
        }
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        match self.kind {
            AttributeKind::Numeric { range } => range,
            AttributeKind::Categorical { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub attributes: Vec<Attribute>,
    pub label_column: String,
    pub positive_label: String,
}

impl Schema {
    pub fn new(
        attributes: Vec<Attribute>,
        label_column: impl Into<String>,
        positive_label: impl Into<String>,
    ) -> Result<Self> {
        let schema = Schema {
            attributes,
            label_column: label_column.into(),
            positive_label: positive_label.into(),
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for a in &self.attributes {
            if !names.insert(a.name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute '{}'", a.name)));
            }
            match &a.kind {
                AttributeKind::Categorical { categories } => {
                    if categories.is_empty() {
                        return Err(Error::Schema(format!(
                            "categorical attribute '{}' has no categories",
                            a.name
                        )));
                    }
                    let uniq: BTreeSet<_> = categories.iter().collect();
                    if uniq.len() != categories.len() {
                        return Err(Error::Schema(format!(
                            "attribute '{}' repeats a category",
                            a.name
                        )));
                    }
                }
                AttributeKind::Numeric {
                    range: Some((lo, hi)),
                } if lo > hi => {
                    return Err(Error::Schema(format!(
                        "attribute '{}' has L > U ({lo} > {hi})",
                        a.name
                    )));
                }
                AttributeKind::Numeric { .. } => {}
            }
        }
        if names.contains(self.label_column.as_str()) {
            return Err(Error::Schema(format!(
                "label column '{}' is also an attribute",
                self.label_column
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn attribute(&self, j: usize) -> &Attribute {
        &self.attributes[j]
    }

    /// Parses the line-oriented schema format:
    ///
    /// ```text
    /// age:numeric
    /// color:categorical=red|green|blue
    /// label=class:positive=yes
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut attributes = Vec::new();
        let mut label = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::SchemaFile {
                line: line_no,
                message: message.to_string(),
            };
            if label.is_some() {
                return Err(err("the label line must be the last line"));
            }
            if let Some(rest) = line.strip_prefix("label=") {
                let (name, pos) = rest
                    .split_once(":positive=")
                    .ok_or_else(|| err("expected 'label=<name>:positive=<value>'"))?;
                if name.is_empty() || pos.is_empty() {
                    return Err(err("empty label name or positive value"));
                }
                label = Some((name.to_string(), pos.to_string()));
                continue;
            }
            let (name, kind) = line
                .split_once(':')
                .ok_or_else(|| err("expected '<name>:numeric' or '<name>:categorical=...'"))?;
            if name.is_empty() {
                return Err(err("empty attribute name"));
            }
            if kind == "numeric" {
                attributes.push(Attribute::numeric(name));
            } else if let Some(values) = kind.strip_prefix("categorical=") {
                attributes.push(Attribute::categorical(name, values.split('|')));
            } else {
                return Err(err(&format!("unknown attribute kind '{kind}'")));
            }
        }
        let (label_column, positive_label) = label.ok_or_else(|| Error::SchemaFile {
            line: text.lines().count(),
            message: "missing final 'label=<name>:positive=<value>' line".into(),
        })?;
        Schema::new(attributes, label_column, positive_label)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.attributes {
            match &a.kind {
                AttributeKind::Numeric { .. } => out.push_str(&format!("{}:numeric\n", a.name)),
                AttributeKind::Categorical { categories } => out.push_str(&format!(
                    "{}:categorical={}\n",
                    a.name,
                    categories.join("|")
                )),
            }
        }
        out.push_str(&format!(
            "label={}:positive={}\n",
            self.label_column, self.positive_label
        ));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    /// `+1` / `-1`
    pub fn sign(self) -> i8 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }

    /// The `{1, 0}` prediction that agrees with this label.
    pub fn as_prediction(self) -> u8 {
        match self {
            Label::Positive => 1,
            Label::Negative => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Num(f64),
    Cat(u32),
    Missing,
}

impl Value {
    pub fn is_missing(self) -> bool {
        matches!(self, Value::Missing)
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    schema: Arc<Schema>,
    rows: Vec<Vec<Value>>,
    labels: Vec<Label>,
}

fn is_missing_cell(s: &str) -> bool {
    let s = s.trim();
    s.is_empty() || s == "?"
}

impl Dataset {
    /// Builds a dataset, checking every cell against the schema.
    pub fn new(schema: Arc<Schema>, rows: Vec<Vec<Value>>, labels: Vec<Label>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::MalformedRow {
                    row: n,
                    column: String::new(),
                    message: format!("expected {} values, found {}", schema.len(), row.len()),
                });
            }
            for (attr, v) in schema.attributes.iter().zip(row) {
                let bad = |message: String| Error::MalformedRow {
                    row: n,
                    column: attr.name.clone(),
                    message,
                };
                match (&attr.kind, v) {
                    (_, Value::Missing) => {}
                    (AttributeKind::Numeric { range }, Value::Num(x)) => {
                        if !x.is_finite() {
                            return Err(bad(format!("non-finite value {x}")));
                        }
                        if let Some((lo, hi)) = range {
                            if x < lo || x > hi {
                                return Err(bad(format!("value {x} outside [{lo}, {hi}]")));
                            }
                        }
                    }
                    (AttributeKind::Categorical { categories }, Value::Cat(c))
                        if (*c as usize) < categories.len() => {}
                    _ => return Err(bad(format!("value {v:?} does not fit the attribute kind"))),
                }
            }
        }
        Ok(Dataset {
            schema,
            rows,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn shared_schema(&self) -> Arc<Schema> {
        Arc::clone(&self.schema)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, n: usize) -> &[Value] {
        &self.rows[n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Value]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, n: usize) -> Label {
        self.labels[n]
    }

    pub fn n_positive(&self) -> usize {
        self.labels.iter().filter(|l| l.is_positive()).count()
    }

    pub fn n_negative(&self) -> usize {
        self.len() - self.n_positive()
    }

    /// Bit vector of positive rows.
    pub fn positive_mask(&self) -> BitVec {
        BitVec::from_fn(self.len(), |n| self.labels[n].is_positive())
    }

    /// Rows `idx` (in that order), sharing this dataset's schema.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            schema: Arc::clone(&self.schema),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Sorted non-missing values of numeric attribute `j`.
    pub fn numeric_values(&self, j: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .filter_map(|r| match r[j] {
                Value::Num(x) => Some(x),
                _ => None,
            })
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Options for [`load_csv`].
#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Strict schema; when absent the schema is inferred from the file.
    pub schema: Option<Schema>,
    /// Label column when inferring; defaults to the last column.
    pub label_column: Option<String>,
    /// Positive label when inferring; `1` is assumed for `{1,-1}` / `{1,0}`.
    pub positive_label: Option<String>,
}

pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_csv_from_reader(file, opts)
}

pub fn load_csv_from_reader<R: Read>(reader: R, opts: &LoadOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(Error::Schema("missing header row".into()));
    }
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        // data rows are numbered from 1; the header is row 0
        let row_no = i + 1;
        if rec.len() != header.len() {
            return Err(Error::MalformedRow {
                row: row_no,
                column: header.get(rec.len()).cloned().unwrap_or_default(),
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        records.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
    }

    let schema = match &opts.schema {
        Some(s) => {
            s.validate()?;
            s.clone()
        }
        None => infer_schema(&header, &records, opts)?,
    };

    let label_idx = header
        .iter()
        .position(|h| *h == schema.label_column)
        .ok_or_else(|| {
            Error::Schema(format!(
                "label column '{}' not in header",
                schema.label_column
            ))
        })?;
    let attr_cols: Vec<usize> = schema
        .attributes
        .iter()
        .map(|a| {
            header
                .iter()
                .position(|h| *h == a.name)
                .ok_or_else(|| Error::UnknownAttribute(a.name.clone()))
        })
        .collect::<Result<_>>()?;

    let mut label_values = BTreeSet::new();
    let mut rows = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let row_no = i + 1;
        let mut row = Vec::with_capacity(attr_cols.len());
        for (attr, &c) in schema.attributes.iter().zip(&attr_cols) {
            let cell = rec[c].as_str();
            if is_missing_cell(cell) {
                row.push(Value::Missing);
                continue;
            }
            let v = parse_cell(attr, cell, row_no)?;
            row.push(v);
        }
        let lab = rec[label_idx].as_str();
        if is_missing_cell(lab) {
            return Err(Error::MalformedRow {
                row: row_no,
                column: schema.label_column.clone(),
                message: "missing label".into(),
            });
        }
        label_values.insert(lab.to_string());
        labels.push(if lab == schema.positive_label {
            Label::Positive
        } else {
            Label::Negative
        });
        rows.push(row);
    }
    let negatives: Vec<_> = label_values
        .iter()
        .filter(|v| **v != schema.positive_label)
        .collect();
    if negatives.len() > 1 {
        return Err(Error::Labels(format!(
            "labels {:?} do not form a binary partition around positive label '{}'",
            label_values, schema.positive_label
        )));
    }

    let mut schema = schema;
    fill_numeric_ranges(&mut schema, &rows);
    Dataset::new(Arc::new(schema), rows, labels)
}

fn parse_cell(attr: &Attribute, cell: &str, row_no: usize) -> Result<Value> {
    match &attr.kind {
        AttributeKind::Numeric { .. } => {
            let x: f64 = cell.parse().map_err(|_| Error::MalformedRow {
                row: row_no,
                column: attr.name.clone(),
                message: format!("'{cell}' is not a number"),
            })?;
            Ok(Value::Num(x))
        }
        AttributeKind::Categorical { .. } => {
            Ok(Value::Cat(attr.category_index(cell).ok_or_else(|| {
                Error::MalformedRow {
                    row: row_no,
                    column: attr.name.clone(),
                    message: format!("unknown category '{cell}'"),
                }
            })?))
        }
    }
}

/// Attribute rows of a CSV read against `schema`; a label column is not
/// required and is ignored when present.
pub fn load_rows(path: impl AsRef<Path>, schema: &Schema) -> Result<Vec<Vec<Value>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_rows_from_reader(file, schema)
}

pub fn load_rows_from_reader<R: Read>(reader: R, schema: &Schema) -> Result<Vec<Vec<Value>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let attr_cols: Vec<usize> = schema
        .attributes
        .iter()
        .map(|a| {
            header
                .iter()
                .position(|h| *h == a.name)
                .ok_or_else(|| Error::UnknownAttribute(a.name.clone()))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row_no = i + 1;
        if rec.len() != header.len() {
            return Err(Error::MalformedRow {
                row: row_no,
                column: header.get(rec.len()).cloned().unwrap_or_default(),
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let row = schema
            .attributes
            .iter()
            .zip(&attr_cols)
            .map(|(attr, &c)| {
                let cell = &rec[c];
                if is_missing_cell(cell) {
                    Ok(Value::Missing)
                } else {
                    parse_cell(attr, cell, row_no)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn fill_numeric_ranges(schema: &mut Schema, rows: &[Vec<Value>]) {
    for (j, attr) in schema.attributes.iter_mut().enumerate() {
        if let AttributeKind::Numeric { range } = &mut attr.kind {
            if range.is_some() {
                continue;
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for r in rows {
                if let Value::Num(x) = r[j] {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            if lo <= hi {
                *range = Some((lo, hi));
            }
        }
    }
}

fn infer_schema(header: &[String], records: &[Vec<String>], opts: &LoadOptions) -> Result<Schema> {
    let label_column = match &opts.label_column {
        Some(l) => l.clone(),
        None => header
            .last()
            .cloned()
            .ok_or_else(|| Error::Schema("empty header".into()))?,
    };
    let label_idx = header
        .iter()
        .position(|h| *h == label_column)
        .ok_or_else(|| Error::Schema(format!("label column '{label_column}' not in header")))?;

    let mut attributes = Vec::new();
    for (c, name) in header.iter().enumerate() {
        if c == label_idx {
            continue;
        }
        let cells: Vec<&str> = records
            .iter()
            .map(|r| r[c].as_str())
            .filter(|s| !is_missing_cell(s))
            .collect();
        let numeric = cells.iter().all(|s| s.parse::<f64>().is_ok());
        if numeric {
            attributes.push(Attribute::numeric(name.clone()));
        } else {
            let cats: BTreeSet<&str> = cells.into_iter().collect();
            attributes.push(Attribute::categorical(name.clone(), cats));
        }
    }

    let positive_label = match &opts.positive_label {
        Some(p) => p.clone(),
        None => {
            let values: BTreeSet<&str> = records
                .iter()
                .map(|r| r[label_idx].as_str())
                .filter(|s| !is_missing_cell(s))
                .collect();
            let numeric_pm = values.iter().all(|v| matches!(*v, "1" | "-1" | "0" | "+1"));
            if values.is_empty() || numeric_pm {
                "1".to_string()
            } else {
                return Err(Error::Labels(format!(
                    "cannot infer the positive label from {values:?}; declare one"
                )));
            }
        }
    };
    Schema::new(attributes, label_column, positive_label)
}

/// The binary coding of a dataset: one column per literal.
#[derive(Clone, Debug)]
pub struct BinarizedDataset {
    pub columns: Vec<Literal>,
    /// `bits[b]` holds the rows satisfying `columns[b]`.
    pub bits: Vec<BitVec>,
    pub n_rows: usize,
}

impl BinarizedDataset {
    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, n: usize, b: usize) -> bool {
        self.bits[b].get(n)
    }

    /// Column ids set in row `n`, ascending.
    pub fn row_items(&self, n: usize) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&b| self.bits[b].get(n))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BinMode {
    #[default]
    Quantile,
    EqualWidth,
}

/// Distinct sorted values and the chosen cut gaps; gap `g` separates
/// `distinct[g]` from `distinct[g + 1]`.
fn cut_gaps(values: &[f64], bins: usize, mode: BinMode) -> (Vec<f64>, Vec<usize>) {
    let mut distinct: Vec<f64> = Vec::new();
    // below[g] = number of values <= distinct[g]
    let mut below: Vec<usize> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        if distinct.last() != Some(&x) {
            if !distinct.is_empty() {
                below.push(i);
            }
            distinct.push(x);
        }
    }
    if distinct.len() < 2 {
        return (distinct, Vec::new());
    }
    let n = values.len() as f64;
    let (lo, hi) = (distinct[0], distinct[distinct.len() - 1]);
    let mut gaps = BTreeSet::new();
    for k in 1..bins {
        let gap = match mode {
            BinMode::Quantile => {
                let target = k as f64 * n / bins as f64;
                let mut best = 0;
                for (g, &cnt) in below.iter().enumerate() {
                    if (cnt as f64 - target).abs() < (below[best] as f64 - target).abs() {
                        best = g;
                    }
                }
                best
            }
            BinMode::EqualWidth => {
                let theta = lo + k as f64 * (hi - lo) / bins as f64;
                let left = distinct.partition_point(|&d| d <= theta);
                left.saturating_sub(1).min(distinct.len() - 2)
            }
        };
        gaps.insert(gap);
    }
    (distinct, gaps.into_iter().collect())
}

/// Codes every attribute into substantive literal columns.
///
/// Categorical attributes give one equality literal per category. Numeric
/// attributes are cut at quantile (or equal-width) positions; each cut sits
/// in the gap between two adjacent distinct observed values, and the
/// emitted literals are written with the observed values bordering the
/// gaps: `x <= first`, the closed intervals between consecutive cuts, and
/// `x >= last`. Columns matching no row or every row are dropped.
pub fn binarize(d: &Dataset, bins_per_numeric: usize, mode: BinMode) -> Result<BinarizedDataset> {
    if d.is_empty() {
        return Err(Error::invalid("cannot binarize an empty dataset"));
    }
    if bins_per_numeric == 0 {
        return Err(Error::invalid("bins_per_numeric must be >= 1"));
    }
    let mut columns = Vec::new();
    for (j, attr) in d.schema().attributes.iter().enumerate() {
        if d.rows().all(|r| r[j].is_missing()) {
            return Err(Error::AllMissing(attr.name.clone()));
        }
        match &attr.kind {
            AttributeKind::Categorical { categories } => {
                for v in 0..categories.len() {
                    columns.push(Literal::category(j, v as u32));
                }
            }
            AttributeKind::Numeric { .. } => {
                let values = d.numeric_values(j);
                let (distinct, gaps) = cut_gaps(&values, bins_per_numeric, mode);
                if let (Some(&first), Some(&last)) = (gaps.first(), gaps.last()) {
                    columns.push(Literal::numeric(j, None, Some(distinct[first])));
                    for w in gaps.windows(2) {
                        columns.push(Literal::numeric(
                            j,
                            Some(distinct[w[0] + 1]),
                            Some(distinct[w[1]]),
                        ));
                    }
                    columns.push(Literal::numeric(j, Some(distinct[last + 1]), None));
                }
            }
        }
    }
    let n = d.len();
    let mut kept_cols = Vec::with_capacity(columns.len());
    let mut bits = Vec::with_capacity(columns.len());
    for lit in columns {
        let b = BitVec::from_fn(n, |i| lit.matches(d.row(i)));
        let c = b.count_ones();
        if c > 0 && c < n {
            kept_cols.push(lit);
            bits.push(b);
        }
    }
    Ok(BinarizedDataset {
        columns: kept_cols,
        bits,
        n_rows: n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldAssignment {
    pub fold_of: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    /// `(train, test)` row indices for fold `f`.
    pub fn split(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..self.fold_of.len()).partition(|&n| self.fold_of[n] == f);
        (train, test)
    }
}

/// Stratified assignment of rows to `k` folds. Each class is shuffled with
/// a seeded ChaCha stream and dealt round-robin, negatives continuing where
/// the positives stopped so fold sizes stay balanced.
pub fn stratified_folds(d: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::invalid("need at least 2 folds"));
    }
    let (np, nn) = (d.n_positive(), d.n_negative());
    if k > np.min(nn) {
        return Err(Error::invalid(format!(
            "{k} folds exceed min(N+ = {np}, N- = {nn})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..d.len()).filter(|&n| d.label(n).is_positive()).collect();
    let mut neg: Vec<usize> = (0..d.len())
        .filter(|&n| !d.label(n).is_positive())
        .collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut fold_of = vec![0; d.len()];
    for (i, &n) in pos.iter().chain(&neg).enumerate() {
        fold_of[n] = i % k;
    }
    Ok(FoldAssignment { fold_of, k, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::{fixture, FIXTURE_CSV};

    fn load(text: &str) -> Result<Dataset> {
        load_csv_from_reader(text.as_bytes(), &LoadOptions::default())
    }

    #[test]
    fn loads_fixture() {
        let d = fixture();
        assert_eq!(d.len(), 4);
        assert_eq!(d.n_positive(), 2);
        assert_eq!(d.schema().attribute(1).range(), Some((1.0, 4.0)));
        assert_eq!(d.schema().attribute(0).category_count(), 2);
        assert_eq!(d.schema().positive_label, "1");
    }

    #[test]
    fn header_only_is_empty_dataset() {
        let d = load("x1,x2,y\n").unwrap();
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn short_row_names_row() {
        match load("x1,x2,y\na,1.0,1\na,2.0\n") {
            Err(Error::MalformedRow { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn label_encodings() {
        let d = load("x,y\n1,1\n2,0\n").unwrap();
        assert_eq!(d.labels(), &[Label::Positive, Label::Negative]);
        assert!(matches!(load("x,y\n1,yes\n2,no\n"), Err(Error::Labels(_))));
        let opts = LoadOptions {
            positive_label: Some("yes".into()),
            ..Default::default()
        };
        let d = load_csv_from_reader("x,y\n1,yes\n2,no\n".as_bytes(), &opts).unwrap();
        assert_eq!(d.n_positive(), 1);
        let bad = load_csv_from_reader("x,y\n1,yes\n2,no\n3,maybe\n".as_bytes(), &opts);
        assert!(matches!(bad, Err(Error::Labels(_))));
    }

    #[test]
    fn strict_schema_rejects_unknown_category() {
        let schema = Schema::parse("x1:categorical=a\nx2:numeric\nlabel=y:positive=1\n").unwrap();
        let opts = LoadOptions {
            schema: Some(schema),
            ..Default::default()
        };
        match load_csv_from_reader(FIXTURE_CSV.as_bytes(), &opts) {
            Err(Error::MalformedRow { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "x1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_cells_and_inference() {
        let d = load("x1,x2,y\n?,1.5,1\nb,,-1\n").unwrap();
        assert_eq!(d.row(0)[0], Value::Missing);
        assert_eq!(d.row(1)[1], Value::Missing);
        assert!(d.schema().attribute(1).is_numeric());
        assert!(!d.schema().attribute(0).is_numeric());
    }

    #[test]
    fn schema_file_round_trip() {
        let text = "x1:categorical=a|b\nx2:numeric\nlabel=y:positive=1\n";
        let s = Schema::parse(text).unwrap();
        assert_eq!(s.to_text(), text);
        assert!(matches!(
            Schema::parse("x1:categorical=a\n"),
            Err(Error::SchemaFile { .. })
        ));
        assert!(matches!(
            Schema::parse("x1:blob\nlabel=y:positive=1"),
            Err(Error::SchemaFile { line: 1, .. })
        ));
        assert!(Schema::parse("x:numeric\nx:numeric\nlabel=y:positive=1").is_err());
    }

    #[test]
    fn binarize_fixture() {
        let d = fixture();
        let b = binarize(&d, 2, BinMode::Quantile).unwrap();
        assert_eq!(
            b.columns,
            vec![
                Literal::category(0, 0),
                Literal::category(0, 1),
                Literal::numeric(1, None, Some(2.0)),
                Literal::numeric(1, Some(3.0), None),
            ]
        );
        assert_eq!(
            (0..4).map(|n| b.get(n, 0)).collect::<Vec<_>>(),
            vec![true, true, false, false]
        );
    }

    #[test]
    fn binarize_constant_and_categorical_columns() {
        let d = load("c,k,y\nr,5,1\ng,5,-1\nb,5,1\n").unwrap();
        let b = binarize(&d, 4, BinMode::Quantile).unwrap();
        // constant numeric column yields nothing; three categories, one each
        assert_eq!(b.columns.len(), 3);
        assert!(b.columns.iter().all(|l| l.attr() == 0));
    }

    #[test]
    fn binarize_all_missing_errors() {
        let d = load("c,k,y\nr,?,1\ng,?,-1\n").unwrap();
        assert!(
            matches!(binarize(&d, 2, BinMode::Quantile), Err(Error::AllMissing(a)) if a == "k")
        );
    }

    #[test]
    fn binarize_intervals_and_equal_width() {
        let csv: String = std::iter::once("x,y".to_string())
            .chain((1..=8).map(|i| format!("{i},{}", i % 2)))
            .collect::<Vec<_>>()
            .join("\n");
        let d = load(&csv).unwrap();
        let q = binarize(&d, 4, BinMode::Quantile).unwrap();
        assert_eq!(
            q.columns,
            vec![
                Literal::numeric(0, None, Some(2.0)),
                Literal::numeric(0, Some(3.0), Some(4.0)),
                Literal::numeric(0, Some(5.0), Some(6.0)),
                Literal::numeric(0, Some(7.0), None),
            ]
        );
        let w = binarize(&d, 2, BinMode::EqualWidth).unwrap();
        assert_eq!(
            w.columns,
            vec![
                Literal::numeric(0, None, Some(4.0)),
                Literal::numeric(0, Some(5.0), None)
            ]
        );
    }

    #[test]
    fn folds_are_stratified_and_deterministic() {
        let d = fixture();
        let f = stratified_folds(&d, 2, 7).unwrap();
        for fold in 0..2 {
            let (_, test) = f.split(fold);
            let pos = test.iter().filter(|&&n| d.label(n).is_positive()).count();
            assert_eq!((test.len(), pos), (2, 1));
        }
        assert_eq!(f, stratified_folds(&d, 2, 7).unwrap());
        assert!(stratified_folds(&d, 3, 7).is_err());
    }
}
