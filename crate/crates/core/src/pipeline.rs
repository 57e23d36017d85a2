//! End-to-end training and nested cross-validation.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::dataset::{binarize, stratified_folds, BinMode, Dataset};
use crate::error::{Error, Result};
use crate::mining::{effective_min_support, mine, transaction_rows, MiningScope};
use crate::ooa_mip::{solve_ooa, OoaConfig};
use crate::patterns::{CoverageMatrix, OAModel, Provenance};
use crate::screening::{prune_scored, select_top, PruneReport, ScoredPattern};
use crate::selector::{cardinality_bound, solve, SelectionProblem, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Ooax,
    Ooa,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub mode: Mode,
    pub min_support: f64,
    pub max_len: usize,
    pub scope: MiningScope,
    pub bins: usize,
    pub bin_mode: BinMode,
    pub gamma: f64,
    pub top_k: usize,
    pub c1: f64,
    pub c2: f64,
    /// Upper limit on the pattern count; further lowered by the
    /// cardinality bound implied by `C1 + C2`.
    pub max_patterns: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            mode: Mode::Ooax,
            min_support: 0.05,
            max_len: 3,
            scope: MiningScope::PositivesOnly,
            bins: 4,
            bin_mode: BinMode::Quantile,
            gamma: 0.0,
            top_k: 2000,
            c1: 0.001,
            c2: 0.001,
            max_patterns: 5,
            time_limit: None,
            node_limit: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(Error::invalid("min support must be in (0, 1]"));
        }
        if self.max_len == 0 || self.bins == 0 || self.top_k == 0 || self.max_patterns == 0 {
            return Err(Error::invalid(
                "max length, bins, candidate count and pattern cap must be >= 1",
            ));
        }
        if !(self.gamma >= 0.0 && self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(Error::invalid("gamma, C1 and C2 must be non-negative"));
        }
        Ok(())
    }

    /// The cap actually used on `d`: never above `max_patterns`, never
    /// below 1.
    pub fn effective_cap(&self, d: &Dataset) -> usize {
        let bound =
            cardinality_bound(d.len(), d.n_positive(), self.c1, self.c2).unwrap_or(usize::MAX);
        self.max_patterns.min(bound).max(1)
    }
}

/// Counts from the mining and screening stages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub mined: usize,
    pub pruned_low_positive: usize,
    pub pruned_high_negative: usize,
    pub candidates: usize,
}

#[derive(Clone, Debug)]
pub struct Trained {
    pub model: OAModel,
    pub solution: Solution,
    pub stages: StageCounts,
}

/// Mined and scored patterns for one training set, reusable across
/// `(C1, C2)` settings.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    pub scored: Vec<ScoredPattern>,
    pub n: usize,
    pub n_pos: usize,
    pub labels: Vec<crate::dataset::Label>,
}

/// Binarizes, mines with threshold `min_support`, and scores.
pub fn candidate_pool(d: &Dataset, cfg: &TrainConfig, min_support: f64) -> Result<CandidatePool> {
    let b = binarize(d, cfg.bins, cfg.bin_mode)?;
    let mined = mine(&b, d.labels(), min_support, cfg.max_len, cfg.scope);
    let positives = d.positive_mask();
    let mut scored = Vec::with_capacity(mined.len());
    for m in &mined {
        let mut cov = b.bits[m.items[0]].clone();
        for &i in &m.items[1..] {
            cov.and_assign(&b.bits[i]);
        }
        scored.push(ScoredPattern::new(
            m.to_pattern(&b)?,
            cov,
            &positives,
            cfg.gamma,
        ));
    }
    Ok(CandidatePool {
        scored,
        n: d.len(),
        n_pos: d.n_positive(),
        labels: d.labels().to_vec(),
    })
}

/// Prunes, screens and solves the selection problem for one `(C1, C2)`.
pub fn select_from_pool(
    pool: &CandidatePool,
    c1: f64,
    c2: f64,
    cap: usize,
    cfg: &TrainConfig,
) -> Result<Trained> {
    let (kept, report): (Vec<ScoredPattern>, PruneReport) =
        prune_scored(pool.scored.clone(), pool.n, pool.n_pos, c1, c2);
    let top = select_top(kept, cfg.top_k);
    let w = CoverageMatrix::from_columns(
        top.iter().map(|s| s.coverage.clone()).collect(),
        top.iter().map(|s| s.pattern.len()).collect(),
        pool.labels.clone(),
    );
    let problem = SelectionProblem::new(w, c1, c2, cap)?
        .with_time_limit(cfg.time_limit)
        .with_node_limit(cfg.node_limit);
    let solution = solve(&problem)?;
    let patterns = solution
        .chosen
        .iter()
        .map(|&k| top[k].pattern.clone())
        .collect();
    let model = OAModel::new(patterns, c1, c2, cap, Provenance::Ooax)?;
    Ok(Trained {
        model,
        solution,
        stages: StageCounts {
            mined: pool.scored.len(),
            pruned_low_positive: report.low_positive_support,
            pruned_high_negative: report.high_negative_support,
            candidates: top.len(),
        },
    })
}

pub fn train_ooax(d: &Dataset, cfg: &TrainConfig) -> Result<Trained> {
    cfg.validate()?;
    if d.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    let n_tx = transaction_rows(d.labels(), cfg.scope).len();
    let support =
        effective_min_support(cfg.min_support, cfg.c1, cfg.c2, d.len(), n_tx, cfg.scope).min(1.0);
    let pool = candidate_pool(d, cfg, support)?;
    select_from_pool(&pool, cfg.c1, cfg.c2, cfg.effective_cap(d), cfg)
}

pub fn train_ooa(d: &Dataset, cfg: &TrainConfig) -> Result<Trained> {
    cfg.validate()?;
    let ooa = OoaConfig {
        boxes: Some(cfg.effective_cap(d)),
        time_limit: cfg.time_limit,
        node_limit: cfg.node_limit,
        ..OoaConfig::default()
    };
    let out = solve_ooa(d, cfg.c1, cfg.c2, &ooa)?;
    Ok(Trained {
        model: out.model,
        solution: out.solution,
        stages: StageCounts::default(),
    })
}

pub fn train(d: &Dataset, cfg: &TrainConfig) -> Result<Trained> {
    match cfg.mode {
        Mode::Ooax => train_ooax(d, cfg),
        Mode::Ooa => train_ooa(d, cfg),
    }
}

pub const DEFAULT_GRID: [f64; 5] = [0.0001, 0.001, 0.005, 0.01, 0.05];

#[derive(Clone, Debug, PartialEq)]
pub struct CvConfig {
    pub train: TrainConfig,
    pub folds: usize,
    pub seed: u64,
    pub c1_grid: Vec<f64>,
    pub c2_grid: Vec<f64>,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            train: TrainConfig::default(),
            folds: 5,
            seed: 0,
            c1_grid: DEFAULT_GRID.to_vec(),
            c2_grid: DEFAULT_GRID.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub c1: f64,
    pub c2: f64,
    pub accuracy: f64,
    pub patterns: usize,
    pub average_length: f64,
    pub total_literals: usize,
    pub objective: f64,
    pub optimal: bool,
    pub nodes: u64,
    /// Only set for proven-optimal solves.
    pub theorem_violations: usize,
    pub model: OAModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub patterns_mean: f64,
    pub average_length_mean: f64,
    pub total_literals_mean: f64,
    pub all_optimal: bool,
    pub total_nodes: u64,
    pub folds: Vec<FoldResult>,
}

impl EvalReport {
    pub fn from_folds(folds: Vec<FoldResult>) -> Self {
        let k = folds.len().max(1) as f64;
        let acc: Vec<f64> = folds.iter().map(|f| f.accuracy).collect();
        let mean = acc.iter().sum::<f64>() / k;
        let var = if folds.len() > 1 {
            acc.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        EvalReport {
            accuracy_mean: mean,
            accuracy_std: var.sqrt(),
            patterns_mean: folds.iter().map(|f| f.patterns as f64).sum::<f64>() / k,
            average_length_mean: folds.iter().map(|f| f.average_length).sum::<f64>() / k,
            total_literals_mean: folds.iter().map(|f| f.total_literals as f64).sum::<f64>() / k,
            all_optimal: folds.iter().all(|f| f.optimal),
            total_nodes: folds.iter().map(|f| f.nodes).sum(),
            folds,
        }
    }

    /// Deterministic plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "accuracy {:.4} ({:.4})\npatterns {:.2}\naverage_length {:.2}\ntotal_literals {:.2}\nall_optimal {}\nnodes {}\n",
            self.accuracy_mean,
            self.accuracy_std,
            self.patterns_mean,
            self.average_length_mean,
            self.total_literals_mean,
            self.all_optimal,
            self.total_nodes
        );
        for f in &self.folds {
            out.push_str(&format!(
                "fold {} c1={} c2={} accuracy={:.4} patterns={} literals={} optimal={} nodes={}\n",
                f.fold, f.c1, f.c2, f.accuracy, f.patterns, f.total_literals, f.optimal, f.nodes
            ));
        }
        out
    }
}

/// Counts chosen patterns breaking the negative-support ceiling, plus one
/// if the pattern count exceeds the cardinality bound. Zero for
/// non-optimal solutions, which carry no such guarantee.
pub fn theorem_violations(model: &OAModel, solution: &Solution, d: &Dataset) -> usize {
    if !solution.proven_optimal {
        return 0;
    }
    let n = d.len() as f64;
    let reg = model.c1 + model.c2;
    let ceiling = d.n_positive() as f64 - n * reg;
    let mut bad = model
        .patterns
        .iter()
        .filter(|z| crate::patterns::support(z, d).neg as f64 > ceiling)
        .count();
    if reg > 0.0 && model.patterns.len() as f64 > (d.n_positive() as f64 / n) / reg {
        bad += 1;
    }
    bad
}

fn fold_result(fold: usize, t: &Trained, train: &Dataset, test: &Dataset) -> FoldResult {
    FoldResult {
        fold,
        c1: t.model.c1,
        c2: t.model.c2,
        accuracy: t.model.accuracy(test),
        patterns: t.model.patterns.len(),
        average_length: t.model.average_length(),
        total_literals: t.model.total_literals(),
        objective: t.solution.objective,
        optimal: t.solution.proven_optimal,
        nodes: t.solution.nodes,
        theorem_violations: theorem_violations(&t.model, &t.solution, train),
        model: t.model.clone(),
    }
}

/// Picks `(C1, C2)` by inner cross-validation on `d`: highest mean
/// validation accuracy, then fewest mean literals, then grid order.
pub fn tune(d: &Dataset, cfg: &CvConfig, seed: u64) -> Result<(f64, f64)> {
    let grid: Vec<(f64, f64)> = cfg
        .c1_grid
        .iter()
        .flat_map(|&a| cfg.c2_grid.iter().map(move |&b| (a, b)))
        .collect();
    if grid.is_empty() {
        return Err(Error::invalid("tuning grid is empty"));
    }
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    let inner_k = (cfg.folds - 1).max(2);
    let folds = stratified_folds(d, inner_k, seed)?;
    let mut acc = vec![0.0; grid.len()];
    let mut lits = vec![0usize; grid.len()];
    for f in 0..inner_k {
        let (tr, va) = folds.split(f);
        let (train, valid) = (d.subset(&tr), d.subset(&va));
        let pool = candidate_pool(&train, &cfg.train, cfg.train.min_support)?;
        for (g, &(c1, c2)) in grid.iter().enumerate() {
            let tc = TrainConfig {
                c1,
                c2,
                ..cfg.train.clone()
            };
            let t = select_from_pool(&pool, c1, c2, tc.effective_cap(&train), &tc)?;
            acc[g] += t.model.accuracy(&valid);
            lits[g] += t.model.total_literals();
        }
    }
    let mut best = 0;
    for g in 1..grid.len() {
        if acc[g] > acc[best] + 1e-12
            || ((acc[g] - acc[best]).abs() <= 1e-12 && lits[g] < lits[best])
        {
            best = g;
        }
    }
    Ok(grid[best])
}

/// Nested stratified cross-validation. With a single grid cell the inner
/// loop is skipped.
pub fn cross_validate(d: &Dataset, cfg: &CvConfig) -> Result<EvalReport> {
    cfg.train.validate()?;
    let folds = stratified_folds(d, cfg.folds, cfg.seed)?;
    let mut results = Vec::with_capacity(cfg.folds);
    for f in 0..cfg.folds {
        let (tr, te) = folds.split(f);
        let (train, test) = (d.subset(&tr), d.subset(&te));
        let (c1, c2) = match cfg.train.mode {
            Mode::Ooax => tune(&train, cfg, cfg.seed.wrapping_add(1 + f as u64))?,
            Mode::Ooa => (cfg.c1_grid[0], cfg.c2_grid[0]),
        };
        let tc = TrainConfig {
            c1,
            c2,
            ..cfg.train.clone()
        };
        let t = train_fold(&train, &tc)?;
        results.push(fold_result(f, &t, &train, &test));
    }
    Ok(EvalReport::from_folds(results))
}

fn train_fold(train: &Dataset, tc: &TrainConfig) -> Result<Trained> {
    match tc.mode {
        Mode::Ooax => {
            let pool = candidate_pool(train, tc, tc.min_support)?;
            select_from_pool(&pool, tc.c1, tc.c2, tc.effective_cap(train), tc)
        }
        Mode::Ooa => train_ooa(train, tc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::serialize_model;
    use crate::test_fixtures::fixture;

    #[test]
    fn fixture_end_to_end() {
        let d = fixture();
        let t = train_ooax(&d, &TrainConfig::default()).unwrap();
        assert_eq!(
            serialize_model(&t.model, d.schema()),
            "IF (x1 = a)\nTHEN 1 ELSE 0"
        );
        assert_eq!(t.model.accuracy(&d), 1.0);
        assert!(t.solution.proven_optimal);
    }

    #[test]
    fn effective_cap_follows_regularization() {
        let d = fixture();
        let cfg = TrainConfig {
            c1: 0.3,
            c2: 0.3,
            ..TrainConfig::default()
        };
        assert_eq!(cfg.effective_cap(&d), 1);
        let cfg = TrainConfig {
            c1: 0.0,
            c2: 0.0,
            max_patterns: 8,
            ..TrainConfig::default()
        };
        assert_eq!(cfg.effective_cap(&d), 8);
        let t = train_ooax(
            &d,
            &TrainConfig {
                c1: 0.3,
                c2: 0.3,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert!(t.model.patterns.is_empty());
    }

    #[test]
    fn report_statistics() {
        let mk = |acc: f64| FoldResult {
            fold: 0,
            c1: 0.0,
            c2: 0.0,
            accuracy: acc,
            patterns: 2,
            average_length: 1.5,
            total_literals: 3,
            objective: 0.0,
            optimal: true,
            nodes: 1,
            theorem_violations: 0,
            model: OAModel::new(Vec::new(), 0.0, 0.0, 1, Provenance::Ooax).unwrap(),
        };
        let r = EvalReport::from_folds(vec![mk(1.0), mk(0.5)]);
        assert_eq!(r.accuracy_mean, 0.75);
        assert!((r.accuracy_std - 0.5f64.sqrt() * 0.5).abs() < 1e-12);
        assert_eq!(r.total_literals_mean, 3.0);
        assert_eq!(r.to_text(), r.clone().to_text());
    }
}
