//! Exact pattern-set selection.
//!
//! Given candidate coverages, find the subset `A` (at most `pattern_cap`
//! patterns) minimizing
//!
//! ```text
//! f(A) = (uncovered positives + covered negatives) / N
//!        + C1 * total literals + C2 * |A|
//! ```
//!
//! Ties in `f` go to fewer patterns, then to the lexicographically smallest
//! sorted index list. [`solve`] is a depth-first branch-and-bound over a
//! set-enumeration tree; [`brute_force_solve`] enumerates every subset and
//! serves as its oracle.

use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::patterns::{objective_value, CoverageMatrix, ObjectiveTerms};

/// Slack used when pruning on float bounds. Anything within it of the
/// incumbent is explored and settled by the exact tie-break.
const PRUNE_SLACK: f64 = 1e-9;
const TIME_CHECK_EVERY: u64 = 4096;
const BRUTE_FORCE_MAX: usize = 20;

#[derive(Clone, Debug)]
pub struct SelectionProblem {
    pub coverage: CoverageMatrix,
    pub c1: f64,
    pub c2: f64,
    pub pattern_cap: usize,
    pub time_limit: Option<Duration>,
    /// Deterministic alternative to `time_limit`.
    pub node_limit: Option<u64>,
}

impl SelectionProblem {
    pub fn new(coverage: CoverageMatrix, c1: f64, c2: f64, pattern_cap: usize) -> Result<Self> {
        let p = SelectionProblem {
            coverage,
            c1,
            c2,
            pattern_cap,
            time_limit: None,
            node_limit: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn with_node_limit(mut self, limit: Option<u64>) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pattern_cap == 0 {
            return Err(Error::invalid("pattern cap must be >= 1"));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::invalid("C1 and C2 must be finite and non-negative"));
        }
        if self.coverage.n_rows() == 0 {
            return Err(Error::invalid("selection needs at least one example"));
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.coverage.n_rows()
    }

    pub fn n_candidates(&self) -> usize {
        self.coverage.n_patterns()
    }

    /// Objective terms of choosing `chosen`.
    pub fn evaluate(&self, chosen: &[usize]) -> ObjectiveTerms {
        reduce(self).terms(chosen)
    }

    pub fn objective(&self, chosen: &[usize]) -> f64 {
        self.evaluate(chosen).value(self.n_rows(), self.c1, self.c2)
    }

    /// Bound for every completion of a partial assignment: `prefix[k]`
    /// fixes candidate `k`, candidates past the prefix are free.
    /// Counts negatives already covered, positives no chosen-or-free
    /// candidate can reach, and the regularization already committed.
    pub fn lower_bound(&self, prefix: &[bool]) -> f64 {
        let r = reduce(self);
        let mut covered_neg = BitVec::zeros(r.n);
        let mut reachable = BitVec::zeros(r.n);
        let mut reg = 0.0;
        for k in 0..r.pos.len() {
            match prefix.get(k) {
                Some(true) => {
                    covered_neg.or_assign(&r.neg[k]);
                    reachable.or_assign(&r.pos[k]);
                    reg += r.reg[k];
                }
                Some(false) => {}
                None => reachable.or_assign(&r.pos[k]),
            }
        }
        let unreachable = r.n_pos - reachable.count_ones();
        (covered_neg.count_ones() + unreachable) as f64 / r.n as f64 + reg
    }
}

/// `floor((N+/N) / (C1 + C2))`, the most patterns an optimal model can
/// hold; `None` without regularization.
pub fn cardinality_bound(n: usize, n_pos: usize, c1: f64, c2: f64) -> Option<usize> {
    let reg = c1 + c2;
    if reg <= 0.0 || n == 0 {
        return None;
    }
    let bound = (n_pos as f64 / n as f64) / reg;
    Some((bound + 1e-9).floor() as usize)
}

/// `min(5, cardinality bound)`, or 5 without regularization.
/// May be 0, in which case the empty model is optimal.
pub fn default_pattern_cap(n: usize, n_pos: usize, c1: f64, c2: f64) -> usize {
    const DEFAULT_CAP: usize = 5;
    cardinality_bound(n, n_pos, c1, c2).map_or(DEFAULT_CAP, |b| b.min(DEFAULT_CAP))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Sorted candidate indices.
    pub chosen: Vec<usize>,
    pub objective: f64,
    pub errors: usize,
    pub literals: usize,
    pub patterns: usize,
    pub proven_optimal: bool,
    /// Incumbent minus the best global lower bound.
    pub gap: f64,
    pub nodes: u64,
    pub runtime: Duration,
}

impl Solution {
    fn from_terms(chosen: Vec<usize>, t: ObjectiveTerms, objective: f64) -> Self {
        Solution {
            chosen,
            objective,
            errors: t.errors,
            literals: t.literals,
            patterns: t.patterns,
            proven_optimal: false,
            gap: f64::INFINITY,
            nodes: 0,
            runtime: Duration::ZERO,
        }
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objective={:?}", self.objective)?;
        writeln!(f, "gap={:?}", self.gap)?;
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "runtime_ms={}", self.runtime.as_millis())?;
        write!(f, "optimal={}", self.proven_optimal)
    }
}

/// Coverage split by class, with per-candidate regularization cost.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub n: usize,
    pub n_pos: usize,
    pub pos: Vec<BitVec>,
    pub neg: Vec<BitVec>,
    pub lengths: Vec<usize>,
    /// `C1 * length + C2`
    pub reg: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
}

/// Eliminates the per-row error variables: a positive row is an error iff
/// no chosen pattern covers it, a negative row iff some chosen one does.
pub fn reduce(p: &SelectionProblem) -> Reduced {
    let w = &p.coverage;
    let n = w.n_rows();
    let posmask = BitVec::from_fn(n, |i| w.labels[i].is_positive());
    Reduced {
        n,
        n_pos: posmask.count_ones(),
        pos: w.columns.iter().map(|c| c.and(&posmask)).collect(),
        neg: w.columns.iter().map(|c| c.and_not(&posmask)).collect(),
        lengths: w.lengths.clone(),
        reg: w.lengths.iter().map(|&l| p.c1 * l as f64 + p.c2).collect(),
        c1: p.c1,
        c2: p.c2,
    }
}

impl Reduced {
    pub fn terms(&self, chosen: &[usize]) -> ObjectiveTerms {
        let mut upos = BitVec::zeros(self.n);
        let mut uneg = BitVec::zeros(self.n);
        for &k in chosen {
            upos.or_assign(&self.pos[k]);
            uneg.or_assign(&self.neg[k]);
        }
        ObjectiveTerms {
            errors: self.n_pos - upos.count_ones() + uneg.count_ones(),
            literals: chosen.iter().map(|&k| self.lengths[k]).sum(),
            patterns: chosen.len(),
        }
    }

    pub fn f(&self, chosen: &[usize]) -> f64 {
        self.terms(chosen).value(self.n, self.c1, self.c2)
    }

    fn value(&self, errors: usize, literals: usize, patterns: usize) -> f64 {
        objective_value(errors, literals, patterns, self.n, self.c1, self.c2)
    }
}

/// Total order on candidate solutions: objective, then size, then the
/// sorted index list.
fn canonical_cmp(fa: f64, a: &[usize], fb: f64, b: &[usize]) -> Ordering {
    fa.total_cmp(&fb)
        .then(a.len().cmp(&b.len()))
        .then_with(|| a.cmp(b))
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Adds the most improving candidate until none improves or the cap is hit.
pub fn greedy_warm_start(p: &SelectionProblem) -> Solution {
    let r = reduce(p);
    greedy(&r, p.pattern_cap, &(0..r.pos.len()).collect::<Vec<_>>())
}

fn greedy(r: &Reduced, cap: usize, pool: &[usize]) -> Solution {
    let mut chosen = Vec::new();
    let mut upos = BitVec::zeros(r.n);
    let mut uneg = BitVec::zeros(r.n);
    let mut lits = 0;
    let mut cur = r.value(r.n_pos, 0, 0);
    while chosen.len() < cap {
        let mut best: Option<(f64, usize)> = None;
        for &k in pool {
            if chosen.contains(&k) {
                continue;
            }
            let errors = r.n_pos - upos.count_ones() - r.pos[k].count_and_not(&upos)
                + uneg.count_ones()
                + r.neg[k].count_and_not(&uneg);
            let f = r.value(errors, lits + r.lengths[k], chosen.len() + 1);
            if f < cur && best.is_none_or(|(bf, _)| f < bf) {
                best = Some((f, k));
            }
        }
        let Some((f, k)) = best else { break };
        upos.or_assign(&r.pos[k]);
        uneg.or_assign(&r.neg[k]);
        lits += r.lengths[k];
        chosen.push(k);
        cur = f;
    }
    let chosen = sorted(&chosen);
    let t = r.terms(&chosen);
    Solution::from_terms(chosen, t, cur)
}

/// Drops `t` when an earlier candidate covers a superset of its positives,
/// a subset of its negatives, with no more literals: swapping it in never
/// loses under the canonical order.
fn undominated(r: &Reduced, items: &[usize]) -> Vec<usize> {
    let pos_count: Vec<usize> = r.pos.iter().map(BitVec::count_ones).collect();
    let neg_count: Vec<usize> = r.neg.iter().map(BitVec::count_ones).collect();
    let mut kept: Vec<usize> = Vec::with_capacity(items.len());
    'outer: for &t in items {
        for &s in &kept {
            if pos_count[s] >= pos_count[t]
                && neg_count[s] <= neg_count[t]
                && r.lengths[s] <= r.lengths[t]
                && r.pos[t].is_subset(&r.pos[s])
                && r.neg[s].is_subset(&r.neg[t])
            {
                continue 'outer;
            }
        }
        kept.push(t);
    }
    kept
}

struct Search<'a> {
    r: &'a Reduced,
    cap: usize,
    best_f: f64,
    best: Vec<usize>,
    nodes: u64,
    start: Instant,
    time_limit: Option<Duration>,
    node_limit: Option<u64>,
    aborted: bool,
    /// Lower bounds of the nodes on the current path.
    path_bounds: Vec<f64>,
    abort_bound: f64,
}

struct Node {
    chosen: Vec<usize>,
    upos: BitVec,
    uneg: BitVec,
    literals: usize,
}

impl Search<'_> {
    fn consider(&mut self, f: f64, chosen: &[usize]) {
        let c = sorted(chosen);
        if canonical_cmp(f, &c, self.best_f, &self.best) == Ordering::Less {
            self.best_f = f;
            self.best = c;
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.node_limit.is_some_and(|l| self.nodes >= l) {
            return true;
        }
        if let Some(limit) = self.time_limit {
            if self.nodes.is_multiple_of(TIME_CHECK_EVERY) && self.start.elapsed() >= limit {
                return true;
            }
        }
        false
    }

    fn abort(&mut self) {
        self.aborted = true;
        let path_min = self
            .path_bounds
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        self.abort_bound = path_min.min(self.best_f);
    }

    /// Visits the set `node.chosen`, then every extension by candidates
    /// of `free` (in order).
    fn visit(&mut self, node: &Node, free: &[usize]) {
        if self.aborted {
            return;
        }
        if self.out_of_budget() {
            self.abort();
            return;
        }
        self.nodes += 1;
        let r = self.r;
        let covered_neg = node.uneg.count_ones();
        let uncovered_pos = r.n_pos - node.upos.count_ones();
        let f_here = r.value(
            uncovered_pos + covered_neg,
            node.literals,
            node.chosen.len(),
        );
        self.consider(f_here, &node.chosen);

        let room = self.cap - node.chosen.len();
        if room == 0 || free.is_empty() {
            return;
        }

        let n = r.n as f64;
        let reg_here = f_here - (uncovered_pos + covered_neg) as f64 / n;
        let limit = self.best_f + PRUNE_SLACK;
        // a completion containing t costs at least its committed negatives,
        // the unreachable positives and the regularization
        let entry_cost = |new_neg: usize, unreachable: usize, t: usize| {
            (covered_neg + new_neg + unreachable) as f64 / n + reg_here + r.reg[t]
        };

        // (candidate, new positives, new negatives)
        let mut useful: Vec<(usize, usize, usize)> = Vec::with_capacity(free.len());
        for &t in free {
            let new_pos = r.pos[t].count_and_not(&node.upos);
            if new_pos == 0 || (new_pos as f64 / n - r.reg[t]) < -1e-12 {
                continue;
            }
            let new_neg = r.neg[t].count_and_not(&node.uneg);
            if entry_cost(new_neg, 0, t) > limit {
                continue;
            }
            useful.push((t, new_pos, new_neg));
        }
        let mut unreachable;
        loop {
            let mut reach = node.upos.clone();
            for &(t, _, _) in &useful {
                reach.or_assign(&r.pos[t]);
            }
            unreachable = r.n_pos - reach.count_ones();
            let before = useful.len();
            useful.retain(|&(t, _, new_neg)| entry_cost(new_neg, unreachable, t) <= limit);
            if useful.len() == before {
                break;
            }
        }
        if useful.is_empty() {
            return;
        }

        let gains: Vec<f64> = useful
            .iter()
            .map(|&(t, m, nn)| m as f64 / n - r.reg[t] - nn as f64 / (room as f64 * n))
            .collect();
        let new_pos: Vec<f64> = useful.iter().map(|&(_, m, _)| m as f64).collect();
        let cheapest = useful
            .iter()
            .map(|&(t, _, nn)| nn as f64 / n + r.reg[t])
            .fold(f64::INFINITY, f64::min);
        let left_over = |covered: f64| (uncovered_pos as f64 - covered).max(unreachable as f64);
        let bound_cover =
            (covered_neg as f64 + left_over(top_sum(&new_pos, room))) / n + reg_here + cheapest;
        let bound_gain = f_here - top_sum(&gains, room);
        let bound = bound_cover.max(bound_gain);
        if bound > limit {
            return;
        }

        // best (room - 1) values strictly after each position
        let suffix_gain = suffix_top_sums(&gains, room - 1);
        let suffix_pos = suffix_top_sums(&new_pos, room - 1);
        self.path_bounds.push(bound);
        for (p, &(t, m, nn)) in useful.iter().enumerate() {
            let by_gain = f_here - gains[p] - suffix_gain[p + 1];
            let by_cover = (covered_neg + nn) as f64 / n
                + left_over(m as f64 + suffix_pos[p + 1]) / n
                + reg_here
                + r.reg[t];
            if by_gain.max(by_cover) > self.best_f + PRUNE_SLACK {
                continue;
            }
            let mut chosen = node.chosen.clone();
            chosen.push(t);
            let mut upos = node.upos.clone();
            upos.or_assign(&r.pos[t]);
            let mut uneg = node.uneg.clone();
            uneg.or_assign(&r.neg[t]);
            let child = Node {
                chosen,
                upos,
                uneg,
                literals: node.literals + r.lengths[t],
            };
            let rest: Vec<usize> = useful[p + 1..].iter().map(|&(t, _, _)| t).collect();
            self.visit(&child, &rest);
            if self.aborted {
                break;
            }
        }
        self.path_bounds.pop();
    }
}

/// Sum of the `k` largest positive values.
fn top_sum(values: &[f64], k: usize) -> f64 {
    let mut top: Vec<f64> = Vec::with_capacity(k + 1);
    for &v in values {
        push_top(&mut top, v, k);
    }
    top.iter().sum()
}

fn push_top(top: &mut Vec<f64>, v: f64, k: usize) {
    if k == 0 || v <= 0.0 {
        return;
    }
    let at = top.partition_point(|&x| x >= v);
    if at < k {
        top.insert(at, v);
        top.truncate(k);
    }
}

/// `out[p]` = sum of the `k` largest positive values in `values[p..]`.
fn suffix_top_sums(values: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; values.len() + 1];
    let mut top: Vec<f64> = Vec::with_capacity(k + 1);
    for p in (0..values.len()).rev() {
        push_top(&mut top, values[p], k);
        out[p] = top.iter().sum();
    }
    out
}

/// Exact branch-and-bound. On hitting a limit returns the incumbent with
/// `proven_optimal = false` and a non-negative gap.
pub fn solve(p: &SelectionProblem) -> Result<Solution> {
    p.validate()?;
    let start = Instant::now();
    let r = reduce(p);
    let k = r.pos.len();
    let empty_f = r.value(r.n_pos, 0, 0);

    // root order: most improving single additions first
    let mut order: Vec<(f64, usize)> = (0..k)
        .filter(|&t| r.pos[t].count_ones() > 0)
        .map(|t| {
            let errors = r.n_pos - r.pos[t].count_ones() + r.neg[t].count_ones();
            (r.value(errors, r.lengths[t], 1) - empty_f, t)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let by_index = undominated(
        &r,
        &sorted(&order.iter().map(|&(_, t)| t).collect::<Vec<_>>()),
    );
    let items: Vec<usize> = order
        .iter()
        .map(|&(_, t)| t)
        .filter(|t| by_index.binary_search(t).is_ok())
        .collect();

    let warm = greedy(&r, p.pattern_cap, &items);
    let mut search = Search {
        r: &r,
        cap: p.pattern_cap,
        best_f: empty_f,
        best: Vec::new(),
        nodes: 0,
        start,
        time_limit: p.time_limit,
        node_limit: p.node_limit,
        aborted: false,
        path_bounds: Vec::new(),
        abort_bound: f64::NEG_INFINITY,
    };
    search.consider(warm.objective, &warm.chosen);
    let root = Node {
        chosen: Vec::new(),
        upos: BitVec::zeros(r.n),
        uneg: BitVec::zeros(r.n),
        literals: 0,
    };
    search.visit(&root, &items);

    let chosen = search.best.clone();
    let t = r.terms(&chosen);
    let mut sol = Solution::from_terms(chosen, t, search.best_f);
    sol.nodes = search.nodes;
    sol.proven_optimal = !search.aborted;
    sol.gap = if search.aborted {
        (search.best_f - search.abort_bound).max(0.0)
    } else {
        0.0
    };
    sol.runtime = start.elapsed();
    Ok(sol)
}

/// Enumerates every subset within the cap. Refuses more than 20 candidates.
pub fn brute_force_solve(p: &SelectionProblem) -> Result<Solution> {
    p.validate()?;
    let k = p.n_candidates();
    if k > BRUTE_FORCE_MAX {
        return Err(Error::Guard(format!(
            "brute force is limited to {BRUTE_FORCE_MAX} candidates, got {k}"
        )));
    }
    let start = Instant::now();
    let r = reduce(p);
    let mut best: Vec<usize> = Vec::new();
    let mut best_f = r.f(&best);
    let mut nodes = 0u64;
    for mask in 1u32..(1u32 << k) {
        if mask.count_ones() as usize > p.pattern_cap {
            continue;
        }
        nodes += 1;
        let set: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let f = r.f(&set);
        if canonical_cmp(f, &set, best_f, &best) == Ordering::Less {
            best_f = f;
            best = set;
        }
    }
    let t = r.terms(&best);
    let mut sol = Solution::from_terms(best, t, best_f);
    sol.proven_optimal = true;
    sol.gap = 0.0;
    sol.nodes = nodes;
    sol.runtime = start.elapsed();
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Label;
    use crate::patterns::{coverage_matrix, Literal, Pattern};
    use crate::test_fixtures::fixture;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture_problem(cap: usize) -> SelectionProblem {
        let d = fixture();
        let ps = vec![
            Pattern::new([Literal::category(0, 0)]).unwrap(),
            Pattern::new([Literal::numeric(1, None, Some(2.0))]).unwrap(),
        ];
        SelectionProblem::new(coverage_matrix(&ps, &d), 0.01, 0.02, cap).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn reduce_examples() {
        let p = fixture_problem(5);
        assert!(close(p.objective(&[0]), 0.03));
        assert_eq!(p.objective(&[]), 0.5);
        let t = p.evaluate(&[0, 1]);
        assert_eq!(t.errors, 1);
        assert!(close(p.objective(&[0, 1]), 0.31));
    }

    #[test]
    fn greedy_examples() {
        let p = fixture_problem(5);
        let g = greedy_warm_start(&p);
        assert_eq!(g.chosen, vec![0]);
        assert!(close(g.objective, 0.03));
        assert!(!g.proven_optimal);

        // only the harmful candidate
        let d = fixture();
        let harmful = vec![Pattern::new([Literal::category(0, 1)]).unwrap()];
        let p = SelectionProblem::new(coverage_matrix(&harmful, &d), 0.01, 0.02, 5).unwrap();
        let g = greedy_warm_start(&p);
        assert!(g.chosen.is_empty());
        assert_eq!(g.objective, 0.5);
    }

    #[test]
    fn greedy_respects_cap() {
        let p = two_halves(0.0, 0.0, 1);
        assert_eq!(greedy_warm_start(&p).chosen.len(), 1);
    }

    #[test]
    fn lower_bound_examples() {
        let p = fixture_problem(5);
        assert!(close(p.lower_bound(&[true, false]), p.objective(&[0])));
        assert!(close(p.lower_bound(&[true, true]), p.objective(&[0, 1])));
        assert_eq!(p.lower_bound(&[]), 0.0);
        // a positive no candidate covers
        let d = fixture();
        let only_row0 = vec![Pattern::new([Literal::numeric(1, None, Some(1.0))]).unwrap()];
        let p = SelectionProblem::new(coverage_matrix(&only_row0, &d), 0.0, 0.0, 5).unwrap();
        assert!(p.lower_bound(&[]) >= 0.25);
    }

    #[test]
    fn solve_fixture() {
        let p = fixture_problem(5);
        let s = solve(&p).unwrap();
        assert_eq!(s.chosen, vec![0]);
        assert!(close(s.objective, 0.03));
        assert!(s.proven_optimal);
        assert_eq!(s.gap, 0.0);
        assert_eq!(
            s,
            Solution {
                runtime: s.runtime,
                nodes: s.nodes,
                ..brute_force_solve(&p).unwrap()
            }
        );
    }

    /// Six rows, four positive; candidate 0 covers rows 0..3, candidate 1
    /// rows 1..4, both length 1, no negatives.
    fn two_halves(c1: f64, c2: f64, cap: usize) -> SelectionProblem {
        let labels = vec![
            Label::Positive,
            Label::Positive,
            Label::Positive,
            Label::Positive,
            Label::Negative,
            Label::Negative,
        ];
        let cols = vec![
            BitVec::from_fn(6, |i| i < 3),
            BitVec::from_fn(6, |i| (1..4).contains(&i)),
        ];
        let w = CoverageMatrix::from_columns(cols, vec![1, 1], labels);
        SelectionProblem::new(w, c1, c2, cap).unwrap()
    }

    #[test]
    fn second_pattern_added_iff_worth_a_row() {
        // 1/N = 0.1667
        let s = solve(&two_halves(0.05, 0.05, 5)).unwrap();
        assert_eq!(s.chosen, vec![0, 1]);
        let s = solve(&two_halves(0.1, 0.1, 5)).unwrap();
        assert_eq!(s.chosen.len(), 1);
        assert_eq!(s.chosen, vec![0]);
    }

    #[test]
    fn zero_cap_and_empty_candidates() {
        let p = fixture_problem(5);
        assert!(SelectionProblem::new(p.coverage.clone(), 0.01, 0.02, 0).is_err());
        let d = fixture();
        let empty = SelectionProblem::new(coverage_matrix(&[], &d), 0.01, 0.02, 5).unwrap();
        let s = solve(&empty).unwrap();
        assert!(s.chosen.is_empty());
        assert_eq!(s.objective, 0.5);
        assert!(s.proven_optimal);
        assert_eq!(
            brute_force_solve(&empty).unwrap().chosen,
            Vec::<usize>::new()
        );
    }

    #[test]
    fn brute_force_guard() {
        let d = fixture();
        let ps = vec![Pattern::new([Literal::category(0, 0)]).unwrap(); 21];
        let p = SelectionProblem::new(coverage_matrix(&ps, &d), 0.0, 0.0, 21).unwrap();
        assert!(matches!(brute_force_solve(&p), Err(Error::Guard(_))));
    }

    #[test]
    fn default_cap_examples() {
        assert_eq!(default_pattern_cap(4, 2, 0.0, 0.0), 5);
        assert_eq!(default_pattern_cap(4, 2, 0.05, 0.05), 5);
        assert_eq!(default_pattern_cap(4, 2, 0.1, 0.1), 2);
        assert_eq!(default_pattern_cap(4, 2, 0.3, 0.3), 0);
        assert_eq!(default_pattern_cap(10, 5, 0.05, 0.05), 5);
    }

    /// A random instance with `n` rows and `k` candidates.
    fn random_problem(rng: &mut ChaCha8Rng, n: usize, k: usize) -> SelectionProblem {
        let labels: Vec<Label> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Label::Positive
                } else {
                    Label::Negative
                }
            })
            .collect();
        let cols: Vec<BitVec> = (0..k)
            .map(|_| {
                let density = rng.gen_range(0.05..0.6);
                let pos_bias = rng.gen_range(0.0..1.0);
                BitVec::from_fn(n, |i| {
                    let p: f64 = if labels[i].is_positive() {
                        density + pos_bias * 0.4
                    } else {
                        density
                    };
                    rng.gen_bool(p.min(1.0))
                })
            })
            .collect();
        let lengths = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let c = [0.0, 0.001, 0.005, 0.01, 0.02, 0.05];
        let c1 = c[rng.gen_range(0..c.len())];
        let c2 = c[rng.gen_range(0..c.len())];
        let cap = rng.gen_range(1..=k.max(1));
        SelectionProblem::new(
            CoverageMatrix::from_columns(cols, lengths, labels),
            c1,
            c2,
            cap,
        )
        .unwrap()
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..300 {
            let n = rng.gen_range(1..=60);
            let k = rng.gen_range(0..=15);
            let p = random_problem(&mut rng, n, k);
            let fast = solve(&p).unwrap();
            let slow = brute_force_solve(&p).unwrap();
            assert_eq!(fast.chosen, slow.chosen, "case {case}");
            assert_eq!(
                fast.objective.to_bits(),
                slow.objective.to_bits(),
                "case {case}"
            );
            assert!(fast.proven_optimal);
        }
    }

    #[test]
    fn duplicate_candidates_keep_lowest_index() {
        let d = fixture();
        let a = Pattern::new([Literal::category(0, 0)]).unwrap();
        let p = SelectionProblem::new(coverage_matrix(&[a.clone(), a.clone(), a], &d), 0.0, 0.0, 3)
            .unwrap();
        assert_eq!(solve(&p).unwrap().chosen, vec![0]);
        assert_eq!(brute_force_solve(&p).unwrap().chosen, vec![0]);
    }

    #[test]
    fn limits_give_incumbent_and_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let p = random_problem(&mut rng, 60, 15);
            let exact = solve(&p).unwrap();
            let cut = solve(&p.clone().with_node_limit(Some(3))).unwrap();
            assert!(cut.gap >= 0.0);
            assert!(cut.objective >= exact.objective);
            assert!(cut.objective <= p.objective(&[]));
            if !cut.proven_optimal {
                assert!(cut.objective - cut.gap <= exact.objective + 1e-12);
            }
            assert!(close(p.objective(&cut.chosen), cut.objective));
        }
    }

    #[test]
    fn stats_text() {
        let s = solve(&fixture_problem(5)).unwrap();
        let text = s.to_string();
        assert!(text.starts_with("objective=0.03"));
        assert!(text.ends_with("optimal=true"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn theorem_bounds_hold_on_optimal_output(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=60);
            let k = rng.gen_range(1..=15);
            let p = random_problem(&mut rng, n, k);
            let s = solve(&p).unwrap();
            prop_assert!(s.proven_optimal);
            let r = reduce(&p);
            let reg = p.c1 + p.c2;
            let ceiling = r.n_pos as f64 - n as f64 * reg;
            for &t in &s.chosen {
                prop_assert!(r.neg[t].count_ones() as f64 <= ceiling);
            }
            if reg > 0.0 {
                prop_assert!(s.chosen.len() as f64 <= (r.n_pos as f64 / n as f64) / reg);
            }
            prop_assert!(close(s.objective, p.objective(&s.chosen)));
        }

        #[test]
        fn lower_bound_is_admissible(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=40);
            let k = rng.gen_range(0..=12);
            let p = random_problem(&mut rng, n, k);
            for _ in 0..160 {
                let fixed = rng.gen_range(0..=k);
                let prefix: Vec<bool> = (0..fixed).map(|_| rng.gen_bool(0.5)).collect();
                let bound = p.lower_bound(&prefix);
                let completion: Vec<usize> = (0..k)
                    .filter(|&i| if i < fixed { prefix[i] } else { rng.gen_bool(0.5) })
                    .collect();
                prop_assert!(bound <= p.objective(&completion) + 1e-12);
            }
        }
    }
}
