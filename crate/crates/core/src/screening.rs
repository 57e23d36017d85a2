//! Candidate scoring and support-bound pruning.

use std::cmp::Ordering;

use crate::bits::BitVec;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::patterns::{pattern_coverage, Pattern};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreeningConfig {
    /// Length penalty per literal.
    pub gamma: f64,
    /// Number of candidates kept.
    pub top_k: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for ScreeningConfig {
    fn default() -> Self {
        ScreeningConfig {
            gamma: 0.0,
            top_k: 2000,
            c1: 0.0,
            c2: 0.0,
        }
    }
}

impl ScreeningConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::invalid("candidate count must be >= 1"));
        }
        if !(self.gamma >= 0.0 && self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(Error::invalid("gamma, C1 and C2 must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredPattern {
    pub pattern: Pattern,
    pub supp_pos: usize,
    pub supp_neg: usize,
    pub info_gain: f64,
    pub score: f64,
    /// Rows satisfying the pattern.
    pub coverage: BitVec,
}

impl ScoredPattern {
    pub fn new(pattern: Pattern, coverage: BitVec, positives: &BitVec, gamma: f64) -> Self {
        let n = coverage.len();
        let n_pos = positives.count_ones();
        let supp_pos = coverage.count_and(positives);
        let supp_neg = coverage.count_ones() - supp_pos;
        let info_gain = info_gain_counts(n_pos, n - n_pos, supp_pos, supp_neg);
        let score = info_gain - gamma * pattern.len() as f64;
        ScoredPattern {
            pattern,
            supp_pos,
            supp_neg,
            info_gain,
            score,
            coverage,
        }
    }

    pub fn from_dataset(pattern: Pattern, d: &Dataset, gamma: f64) -> Self {
        let cov = pattern_coverage(&pattern, d);
        ScoredPattern::new(pattern, cov, &d.positive_mask(), gamma)
    }
}

fn plogp(count: usize, total: usize) -> f64 {
    if count == 0 || count == total {
        return 0.0;
    }
    let p = count as f64 / total as f64;
    -p * p.log2()
}

/// Binary entropy in bits of a `pos`/`neg` split.
pub fn entropy(pos: usize, neg: usize) -> f64 {
    let total = pos + neg;
    if total == 0 {
        return 0.0;
    }
    plogp(pos, total) + plogp(neg, total)
}

/// Gain of splitting `(n_pos, n_neg)` into rows that satisfy a pattern
/// (`s_pos`, `s_neg`) and rows that do not.
pub fn info_gain_counts(n_pos: usize, n_neg: usize, s_pos: usize, s_neg: usize) -> f64 {
    let n = n_pos + n_neg;
    let s = s_pos + s_neg;
    if s == 0 || s == n {
        return 0.0;
    }
    let h = entropy(n_pos, n_neg);
    let inside = s as f64 / n as f64 * entropy(s_pos, s_neg);
    let outside = (n - s) as f64 / n as f64 * entropy(n_pos - s_pos, n_neg - s_neg);
    (h - inside - outside).clamp(0.0, h)
}

pub fn info_gain(z: &Pattern, d: &Dataset) -> f64 {
    ScoredPattern::from_dataset(z.clone(), d, 0.0).info_gain
}

pub fn score(z: &Pattern, d: &Dataset, gamma: f64) -> f64 {
    info_gain(z, d) - gamma * z.len() as f64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneReport {
    /// Dropped for positive support at or below `(C1 + C2) N`.
    pub low_positive_support: usize,
    /// Dropped for negative support above `N+ - (C1 + C2) N`.
    pub high_negative_support: usize,
}

impl PruneReport {
    pub fn total(&self) -> usize {
        self.low_positive_support + self.high_negative_support
    }
}

/// Positive-support floor and negative-support ceiling.
pub fn support_bounds(n: usize, n_pos: usize, c1: f64, c2: f64) -> (f64, f64) {
    let floor = (c1 + c2) * n as f64;
    (floor, n_pos as f64 - floor)
}

/// Drops candidates that no optimal pattern set can contain.
pub fn prune_scored(
    scored: Vec<ScoredPattern>,
    n: usize,
    n_pos: usize,
    c1: f64,
    c2: f64,
) -> (Vec<ScoredPattern>, PruneReport) {
    let (floor, ceiling) = support_bounds(n, n_pos, c1, c2);
    let mut report = PruneReport::default();
    let kept = scored
        .into_iter()
        .filter(|s| {
            if s.supp_pos as f64 <= floor {
                report.low_positive_support += 1;
                false
            } else if s.supp_neg as f64 > ceiling {
                report.high_negative_support += 1;
                false
            } else {
                true
            }
        })
        .collect();
    (kept, report)
}

pub fn prune(patterns: &[Pattern], d: &Dataset, c1: f64, c2: f64) -> (Vec<Pattern>, PruneReport) {
    let scored = patterns
        .iter()
        .map(|z| ScoredPattern::from_dataset(z.clone(), d, 0.0))
        .collect();
    let (kept, report) = prune_scored(scored, d.len(), d.n_positive(), c1, c2);
    (kept.into_iter().map(|s| s.pattern).collect(), report)
}

fn rank(a: &ScoredPattern, b: &ScoredPattern) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.pattern.len().cmp(&b.pattern.len()))
        .then(b.supp_pos.cmp(&a.supp_pos))
        .then_with(|| a.pattern.cmp(&b.pattern))
}

/// The `top_k` best candidates, best first.
pub fn select_top(mut scored: Vec<ScoredPattern>, top_k: usize) -> Vec<ScoredPattern> {
    scored.sort_by(rank);
    scored.truncate(top_k);
    scored
}
