//! Tree and forest conversion, efficient sets and VC dimension.

use std::fmt::Write as _;

use crate::bits::BitVec;
use crate::dataset::{Attribute, AttributeKind, Dataset, Schema, Value};
use crate::error::{Error, Result};
use crate::patterns::{Literal, OAModel, Pattern, Provenance};
use crate::screening::info_gain_counts;

pub const FOREST_GUARD: u128 = 1_000_000;
pub const DOMAIN_GUARD: usize = 20;
pub const EFFICIENT_SET_GUARD: usize = 20;
pub const VC_PATTERN_GUARD: usize = 12;
pub const VC_DOMAIN_GUARD: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum TreeTest {
    /// `x_attr = category`
    Equals { attr: usize, category: u32 },
    /// `x_attr <= threshold`
    AtMost { attr: usize, threshold: f64 },
}

impl TreeTest {
    /// Missing values take the false branch.
    pub fn holds(&self, row: &[Value]) -> bool {
        match *self {
            TreeTest::Equals { attr, category } => row[attr] == Value::Cat(category),
            TreeTest::AtMost { attr, threshold } => {
                matches!(row[attr], Value::Num(x) if x <= threshold)
            }
        }
    }

    fn attr(&self) -> usize {
        match *self {
            TreeTest::Equals { attr, .. } | TreeTest::AtMost { attr, .. } => attr,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode {
    Leaf(bool),
    Split {
        test: TreeTest,
        yes: Box<TreeNode>,
        no: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(positive: bool) -> Self {
        TreeNode::Leaf(positive)
    }

    pub fn split(test: TreeTest, yes: TreeNode, no: TreeNode) -> Self {
        TreeNode::Split {
            test,
            yes: Box::new(yes),
            no: Box::new(no),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn predict(&self, row: &[Value]) -> bool {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf(y) => return *y,
                TreeNode::Split { test, yes, no } => {
                    node = if test.holds(row) { yes } else { no };
                }
            }
        }
    }

    pub fn positive_leaves(&self) -> usize {
        fn count(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf(y) => usize::from(*y),
                TreeNode::Split { yes, no, .. } => count(yes) + count(no),
            }
        }
        count(&self.root)
    }

    pub fn to_text(&self, schema: &Schema) -> String {
        fn write(n: &TreeNode, depth: usize, schema: &Schema, out: &mut String) {
            let pad = "  ".repeat(depth);
            match n {
                TreeNode::Leaf(y) => {
                    let _ = writeln!(out, "{pad}leaf {}", u8::from(*y));
                }
                TreeNode::Split { test, yes, no } => {
                    let _ = match *test {
                        TreeTest::Equals { attr, category } => {
                            let a = schema.attribute(attr);
                            writeln!(
                                out,
                                "{pad}split {} = {}",
                                a.name,
                                a.category_name(category).unwrap_or("?")
                            )
                        }
                        TreeTest::AtMost { attr, threshold } => {
                            writeln!(
                                out,
                                "{pad}split {} <= {threshold:?}",
                                schema.attribute(attr).name
                            )
                        }
                    };
                    write(yes, depth + 1, schema, out);
                    write(no, depth + 1, schema, out);
                }
            }
        }
        let mut out = String::new();
        write(&self.root, 0, schema, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Forest {
    pub trees: Vec<DecisionTree>,
}

impl Forest {
    pub fn new(trees: Vec<DecisionTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidTree(
                "a forest needs at least one tree".into(),
            ));
        }
        Ok(Forest { trees })
    }

    /// Votes needed for a positive prediction.
    pub fn majority(&self) -> usize {
        self.trees.len() / 2 + 1
    }

    pub fn predict(&self, row: &[Value]) -> bool {
        self.trees.iter().filter(|t| t.predict(row)).count() >= self.majority()
    }
}

fn perr(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token: token.to_string(),
        message: message.into(),
    }
}

struct TreeLine<'a> {
    no: usize,
    indent: usize,
    words: Vec<&'a str>,
}

fn parse_node(lines: &[TreeLine], at: &mut usize, schema: &Schema) -> Result<TreeNode> {
    let line = &lines[*at];
    *at += 1;
    match line.words.as_slice() {
        ["leaf", y] => match *y {
            "1" => Ok(TreeNode::Leaf(true)),
            "0" => Ok(TreeNode::Leaf(false)),
            _ => Err(perr(line.no, y, "leaf label must be 0 or 1")),
        },
        ["split", name, op, value] => {
            let j = schema
                .index_of(name)
                .ok_or_else(|| perr(line.no, name, "unknown attribute"))?;
            let a = schema.attribute(j);
            let test = match (*op, &a.kind) {
                ("=", AttributeKind::Categorical { .. }) => TreeTest::Equals {
                    attr: j,
                    category: a
                        .category_index(value)
                        .ok_or_else(|| perr(line.no, value, "unknown category"))?,
                },
                ("<=", AttributeKind::Numeric { .. }) => TreeTest::AtMost {
                    attr: j,
                    threshold: value
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| perr(line.no, value, "expected a finite real number"))?,
                },
                ("=" | "<=", _) => {
                    return Err(perr(
                        line.no,
                        op,
                        "operator does not fit the attribute type",
                    ))
                }
                _ => return Err(perr(line.no, op, "expected '=' or '<='")),
            };
            let mut children = Vec::with_capacity(2);
            for _ in 0..2 {
                match lines.get(*at) {
                    Some(c) if c.indent > line.indent => {
                        children.push(parse_node(lines, at, schema)?)
                    }
                    _ => {
                        return Err(perr(
                            line.no,
                            "split",
                            "a split needs two indented children",
                        ))
                    }
                }
            }
            let no = children.pop().expect("two children");
            let yes = children.pop().expect("two children");
            Ok(TreeNode::split(test, yes, no))
        }
        [first, ..] => Err(perr(
            line.no,
            first,
            "expected 'split <attr> <op> <value>' or 'leaf <0|1>'",
        )),
        [] => unreachable!("blank lines are skipped"),
    }
}

fn tree_lines(text: &str, first_line: usize) -> Vec<TreeLine<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| TreeLine {
            no: first_line + i,
            indent: l.len() - l.trim_start().len(),
            words: l.split_whitespace().collect(),
        })
        .collect()
}

fn parse_tree_at(text: &str, first_line: usize, schema: &Schema) -> Result<DecisionTree> {
    let lines = tree_lines(text, first_line);
    if lines.is_empty() {
        return Err(perr(first_line, "", "empty tree"));
    }
    let mut at = 0;
    let root = parse_node(&lines, &mut at, schema)?;
    if let Some(extra) = lines.get(at) {
        return Err(perr(
            extra.no,
            extra.words[0],
            "trailing node after the tree",
        ));
    }
    Ok(DecisionTree { root })
}

/// Parses the indented tree format: each `split` line is followed by its
/// true branch, then its false branch, both indented deeper.
pub fn parse_tree(text: &str, schema: &Schema) -> Result<DecisionTree> {
    parse_tree_at(text, 1, schema)
}

/// Trees separated by `---` lines.
pub fn parse_forest(text: &str, schema: &Schema) -> Result<Forest> {
    let mut trees = Vec::new();
    let mut chunk = String::new();
    let mut chunk_start = 1;
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            trees.push(parse_tree_at(&chunk, chunk_start, schema)?);
            chunk.clear();
            chunk_start = i + 2;
        } else {
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    if !chunk.trim().is_empty() || trees.is_empty() {
        trees.push(parse_tree_at(&chunk, chunk_start, schema)?);
    }
    Forest::new(trees)
}

/// Region of one attribute allowed along a path.
#[derive(Clone, Debug)]
enum Region {
    Any,
    Interval {
        lower: Option<f64>,
        upper: Option<f64>,
    },
    Categories(Vec<bool>),
}

/// Conjunctions equivalent to the path constraints. Excluded categories
/// are expressed by enumerating the allowed ones, so an attribute with
/// more than two categories can turn one path into several patterns.
fn path_patterns(regions: &[Region]) -> Vec<Pattern> {
    let mut out: Vec<Vec<Literal>> = vec![Vec::new()];
    for (j, r) in regions.iter().enumerate() {
        match r {
            Region::Any => {}
            Region::Interval { lower, upper } => {
                for p in &mut out {
                    p.push(Literal::numeric(j, *lower, *upper));
                }
            }
            Region::Categories(allowed) => {
                if allowed.iter().all(|&a| a) {
                    continue;
                }
                let cats: Vec<u32> = (0..allowed.len() as u32)
                    .filter(|&v| allowed[v as usize])
                    .collect();
                out = out
                    .into_iter()
                    .flat_map(|p| {
                        cats.iter().map(move |&v| {
                            let mut q = p.clone();
                            q.push(Literal::category(j, v));
                            q
                        })
                    })
                    .collect();
            }
        }
    }
    out.into_iter()
        .map(|l| Pattern::new(l).expect("one literal per attribute"))
        .collect()
}

fn restrict(region: &Region, test: &TreeTest, branch: bool, schema: &Schema) -> Option<Region> {
    match *test {
        TreeTest::Equals { attr, category } => {
            let mut allowed = match region {
                Region::Categories(a) => a.clone(),
                _ => vec![true; schema.attribute(attr).category_count()],
            };
            for (v, a) in allowed.iter_mut().enumerate() {
                if (v as u32 == category) != branch {
                    *a = false;
                }
            }
            allowed
                .iter()
                .any(|&a| a)
                .then_some(Region::Categories(allowed))
        }
        TreeTest::AtMost { threshold, .. } => {
            let (mut lower, mut upper) = match region {
                Region::Interval { lower, upper } => (*lower, *upper),
                _ => (None, None),
            };
            if branch {
                upper = Some(upper.map_or(threshold, |u| u.min(threshold)));
            } else {
                // x > t as a closed bound
                let l = threshold.next_up();
                lower = Some(lower.map_or(l, |x| x.max(l)));
            }
            match (lower, upper) {
                (Some(l), Some(u)) if l > u => None,
                _ => Some(Region::Interval { lower, upper }),
            }
        }
    }
}

fn collect_positive_paths(
    node: &TreeNode,
    regions: &mut Vec<Region>,
    schema: &Schema,
    out: &mut Vec<Pattern>,
) -> Result<()> {
    match node {
        TreeNode::Leaf(false) => Ok(()),
        TreeNode::Leaf(true) => {
            out.extend(path_patterns(regions));
            Ok(())
        }
        TreeNode::Split { test, yes, no } => {
            let j = test.attr();
            let kind_ok = match (test, &schema.attribute(j).kind) {
                (TreeTest::Equals { category, .. }, AttributeKind::Categorical { categories }) => {
                    (*category as usize) < categories.len()
                }
                (TreeTest::AtMost { .. }, AttributeKind::Numeric { .. }) => true,
                _ => false,
            };
            if !kind_ok {
                return Err(Error::InvalidTree(format!(
                    "test on '{}' does not fit its type",
                    schema.attribute(j).name
                )));
            }
            for (branch, child) in [(true, yes), (false, no)] {
                let saved = regions[j].clone();
                regions[j] = restrict(&saved, test, branch, schema).ok_or_else(|| {
                    Error::InvalidTree(format!(
                        "contradictory path on attribute '{}'",
                        schema.attribute(j).name
                    ))
                })?;
                collect_positive_paths(child, regions, schema, out)?;
                regions[j] = saved;
            }
            Ok(())
        }
    }
}

/// The positive-leaf patterns of a tree, in leaf order.
pub fn tree_patterns(t: &DecisionTree, schema: &Schema) -> Result<Vec<Pattern>> {
    let mut regions = vec![Region::Any; schema.len()];
    let mut out = Vec::new();
    collect_positive_paths(&t.root, &mut regions, schema, &mut out)?;
    Ok(out)
}

fn converted(patterns: Vec<Pattern>) -> Result<OAModel> {
    let cap = patterns.len().max(1);
    OAModel::new(patterns, 0.0, 0.0, cap, Provenance::Converted)
}

/// One pattern per positive leaf (for binary-valued categorical tests).
pub fn tree_to_oa(t: &DecisionTree, schema: &Schema) -> Result<OAModel> {
    converted(tree_patterns(t, schema)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestConversion {
    /// Sum over majority-size tree subsets of the product of their
    /// positive pattern counts.
    pub bound: u128,
    /// Satisfiable conjunctions before simplification.
    pub conjunctions: usize,
    pub patterns: usize,
}

/// Sum over size-`m` subsets of the product of their counts.
pub fn forest_bound(counts: &[usize], m: usize) -> u128 {
    // e[s] = sum over subsets of size s seen so far
    let mut e = vec![0u128; m + 1];
    e[0] = 1;
    for &c in counts {
        for s in (1..=m).rev() {
            e[s] = e[s].saturating_add(e[s - 1].saturating_mul(c as u128));
        }
    }
    e[m]
}

fn combinations(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, m, cur, out);
            cur.pop();
        }
    }
    rec(0, k, m, &mut cur, &mut out);
    out
}

/// Majority vote as an OA model: every conjunction of one positive
/// pattern from each of exactly `floor(K/2) + 1` trees.
pub fn forest_to_oa(f: &Forest, schema: &Schema) -> Result<(OAModel, ForestConversion)> {
    let per_tree: Vec<Vec<Pattern>> = f
        .trees
        .iter()
        .map(|t| tree_patterns(t, schema))
        .collect::<Result<_>>()?;
    let counts: Vec<usize> = per_tree.iter().map(Vec::len).collect();
    let m = f.majority();
    let bound = forest_bound(&counts, m);
    if bound > FOREST_GUARD {
        return Err(Error::Guard(format!(
            "forest conversion would form {bound} conjunctions (limit {FOREST_GUARD})"
        )));
    }
    let mut raw: Vec<Pattern> = Vec::new();
    for pi in combinations(f.trees.len(), m) {
        let mut picks = vec![0usize; m];
        'product: loop {
            if pi.iter().all(|&k| !per_tree[k].is_empty()) {
                let lits = pi
                    .iter()
                    .zip(&picks)
                    .flat_map(|(&k, &i)| per_tree[k][i].literals());
                if let Some(z) = Pattern::conjunction(lits)? {
                    raw.push(z);
                }
            } else {
                break;
            }
            // next element of the product
            for slot in (0..m).rev() {
                picks[slot] += 1;
                if picks[slot] < per_tree[pi[slot]].len() {
                    continue 'product;
                }
                picks[slot] = 0;
            }
            break;
        }
    }
    let conjunctions = raw.len();
    let patterns = simplify(&raw);
    let report = ForestConversion {
        bound,
        conjunctions,
        patterns: patterns.len(),
    };
    Ok((converted(patterns)?, report))
}

fn is_contradictory(z: &Pattern) -> bool {
    z.literals()
        .iter()
        .any(|l| matches!(l, Literal::Numeric { lower: Some(a), upper: Some(b), .. } if a > b))
}

/// Drops contradictory patterns and any pattern whose literal set contains
/// another's. Output is ordered by length, then literal order.
pub fn simplify(patterns: &[Pattern]) -> Vec<Pattern> {
    let mut sorted: Vec<&Pattern> = patterns.iter().filter(|z| !is_contradictory(z)).collect();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sorted.dedup();
    let mut kept: Vec<Pattern> = Vec::new();
    for z in sorted {
        if !kept.iter().any(|k| k.is_literal_subset_of(z)) {
            kept.push(z.clone());
        }
    }
    kept
}

/// [`simplify`] over raw literal lists, merging same-attribute literals and
/// discarding unsatisfiable conjunctions.
pub fn simplify_conjunctions(raw: &[Vec<Literal>]) -> Result<Vec<Pattern>> {
    let mut merged = Vec::with_capacity(raw.len());
    for lits in raw {
        if let Some(z) = Pattern::conjunction(lits)? {
            merged.push(z);
        }
    }
    Ok(simplify(&merged))
}

/// All points of `{0,1}^J`, attributes named `x1..xJ` with categories
/// `0` and `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDomain {
    pub dims: usize,
}

impl FiniteDomain {
    pub fn new(dims: usize) -> Result<Self> {
        Self::with_guard(dims, DOMAIN_GUARD)
    }

    fn with_guard(dims: usize, guard: usize) -> Result<Self> {
        if dims > guard {
            return Err(Error::Guard(format!(
                "domain of {dims} binary attributes exceeds the enumeration limit of {guard}"
            )));
        }
        Ok(FiniteDomain { dims })
    }

    pub fn schema(&self) -> Schema {
        let attributes = (1..=self.dims)
            .map(|i| Attribute::categorical(format!("x{i}"), ["0", "1"]))
            .collect();
        Schema::new(attributes, "y", "1").expect("valid domain schema")
    }

    pub fn n_points(&self) -> usize {
        1 << self.dims
    }

    /// Point `p`: attribute `i` takes bit `i` of `p`.
    pub fn point(&self, p: usize) -> Vec<Value> {
        (0..self.dims)
            .map(|i| Value::Cat(((p >> i) & 1) as u32))
            .collect()
    }

    /// Points satisfying `z`.
    pub fn support(&self, z: &Pattern) -> BitVec {
        BitVec::from_fn(self.n_points(), |p| z.satisfies(&self.point(p)))
    }
}

fn check_patterns(patterns: &[Pattern], dom: &FiniteDomain) -> Result<()> {
    for z in patterns {
        for l in z.literals() {
            let ok = l.attr() < dom.dims
                && matches!(l, Literal::Categorical { category, .. } if *category < 2);
            if !ok {
                return Err(Error::invalid("pattern does not fit the binary domain"));
            }
        }
    }
    Ok(())
}

fn efficient(supports: &[&BitVec]) -> bool {
    (0..supports.len()).all(|i| {
        let mut private = supports[i].clone();
        for (k, s) in supports.iter().enumerate() {
            if k != i {
                private = private.and_not(s);
            }
        }
        private.count_ones() > 0
    })
}

/// Every member covers some point that no other member covers.
pub fn is_efficient_set(patterns: &[Pattern], dom: &FiniteDomain) -> Result<bool> {
    check_patterns(patterns, dom)?;
    let supports: Vec<BitVec> = patterns.iter().map(|z| dom.support(z)).collect();
    Ok(efficient(&supports.iter().collect::<Vec<_>>()))
}

/// Largest efficient subset, as sorted indices into `patterns`; among
/// equally large ones the lexicographically smallest.
pub fn max_efficient_set(patterns: &[Pattern], dom: &FiniteDomain) -> Result<Vec<usize>> {
    if patterns.len() > EFFICIENT_SET_GUARD {
        return Err(Error::Guard(format!(
            "{} patterns exceed the efficient-set limit of {EFFICIENT_SET_GUARD}",
            patterns.len()
        )));
    }
    check_patterns(patterns, dom)?;
    let supports: Vec<BitVec> = patterns.iter().map(|z| dom.support(z)).collect();

    // efficiency is inherited by subsets, so only efficient sets are grown
    fn grow(start: usize, cur: &mut Vec<usize>, supports: &[BitVec], best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for i in start..supports.len() {
            if cur.len() + (supports.len() - i) <= best.len() {
                return;
            }
            cur.push(i);
            let members: Vec<&BitVec> = cur.iter().map(|&k| &supports[k]).collect();
            if efficient(&members) {
                grow(i + 1, cur, supports, best);
            }
            cur.pop();
        }
    }
    let mut best = Vec::new();
    grow(0, &mut Vec::new(), &supports, &mut best);
    Ok(best)
}

/// VC dimension of the OA classifiers built from subsets of `patterns`,
/// by searching for the largest shattered point set.
pub fn vc_dim_bruteforce(patterns: &[Pattern], dom: &FiniteDomain) -> Result<usize> {
    if patterns.len() > VC_PATTERN_GUARD {
        return Err(Error::Guard(format!(
            "{} patterns exceed the shattering limit of {VC_PATTERN_GUARD}",
            patterns.len()
        )));
    }
    FiniteDomain::with_guard(dom.dims, VC_DOMAIN_GUARD)?;
    check_patterns(patterns, dom)?;
    let k = patterns.len();
    // a point is seen by the classifiers only through the set of patterns
    // it satisfies
    let mut signatures: Vec<u32> = (0..dom.n_points())
        .map(|p| {
            let x = dom.point(p);
            (0..k)
                .filter(|&i| patterns[i].satisfies(&x))
                .fold(0u32, |m, i| m | 1 << i)
        })
        .filter(|&s| s != 0)
        .collect();
    signatures.sort_unstable();
    signatures.dedup();
    let all: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };

    // can some subset A label exactly `ones` positive within `points`?
    let realizable = |points: &[u32], ones: u32| {
        let forbidden = points
            .iter()
            .enumerate()
            .filter(|(i, _)| ones >> i & 1 == 0)
            .fold(0u32, |m, (_, &s)| m | s);
        let chosen = all & !forbidden;
        points
            .iter()
            .enumerate()
            .filter(|(i, _)| ones >> i & 1 == 1)
            .all(|(_, &s)| s & chosen != 0)
    };
    let shattered = |points: &[u32]| (0..1u32 << points.len()).all(|ones| realizable(points, ones));

    fn grow(
        start: usize,
        cur: &mut Vec<u32>,
        sigs: &[u32],
        limit: usize,
        best: &mut usize,
        shattered: &dyn Fn(&[u32]) -> bool,
    ) {
        *best = (*best).max(cur.len());
        if *best >= limit {
            return;
        }
        for i in start..sigs.len() {
            cur.push(sigs[i]);
            if shattered(cur) {
                grow(i + 1, cur, sigs, limit, best, shattered);
            }
            cur.pop();
            if *best >= limit {
                return;
            }
        }
    }
    let limit = k.min(signatures.len());
    let mut best = 0;
    grow(
        0,
        &mut Vec::new(),
        &signatures,
        limit,
        &mut best,
        &shattered,
    );
    Ok(best)
}

fn majority_leaf(n_pos: usize, n_neg: usize) -> TreeNode {
    TreeNode::Leaf(n_pos >= n_neg)
}

fn candidate_tests(d: &Dataset, rows: &[usize]) -> Vec<TreeTest> {
    let schema = d.schema();
    let mut tests = Vec::new();
    for j in 0..schema.len() {
        match &schema.attribute(j).kind {
            AttributeKind::Categorical { categories } => {
                tests.extend((0..categories.len() as u32).map(|v| TreeTest::Equals {
                    attr: j,
                    category: v,
                }));
            }
            AttributeKind::Numeric { .. } => {
                let mut v: Vec<f64> = rows
                    .iter()
                    .filter_map(|&n| match d.row(n)[j] {
                        Value::Num(x) => Some(x),
                        _ => None,
                    })
                    .collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                tests.extend(v.windows(2).map(|w| TreeTest::AtMost {
                    attr: j,
                    threshold: (w[0] + w[1]) / 2.0,
                }));
            }
        }
    }
    tests
}

fn grow_tree(d: &Dataset, rows: &[usize], depth: usize) -> TreeNode {
    let n_pos = rows.iter().filter(|&&n| d.label(n).is_positive()).count();
    let n_neg = rows.len() - n_pos;
    if depth == 0 || n_pos == 0 || n_neg == 0 {
        return majority_leaf(n_pos, n_neg);
    }
    let mut best: Option<(f64, TreeTest)> = None;
    for test in candidate_tests(d, rows) {
        let (mut sp, mut sn) = (0, 0);
        for &n in rows {
            if test.holds(d.row(n)) {
                if d.label(n).is_positive() {
                    sp += 1;
                } else {
                    sn += 1;
                }
            }
        }
        let gain = info_gain_counts(n_pos, n_neg, sp, sn);
        if gain > 1e-12 && best.as_ref().is_none_or(|(g, _)| gain > *g) {
            best = Some((gain, test));
        }
    }
    let Some((_, test)) = best else {
        return majority_leaf(n_pos, n_neg);
    };
    let (yes, no): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&n| test.holds(d.row(n)));
    TreeNode::split(
        test,
        grow_tree(d, &yes, depth - 1),
        grow_tree(d, &no, depth - 1),
    )
}

/// Greedy information-gain tree used to produce conversion inputs.
pub fn fit_fixture_tree(d: &Dataset, max_depth: usize) -> DecisionTree {
    let rows: Vec<usize> = (0..d.len()).collect();
    DecisionTree {
        root: grow_tree(d, &rows, max_depth),
    }
}
