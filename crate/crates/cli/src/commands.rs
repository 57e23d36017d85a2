use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use oalearn::analysis::{
    forest_to_oa, max_efficient_set, parse_forest, vc_dim_bruteforce, FiniteDomain,
    VC_DOMAIN_GUARD, VC_PATTERN_GUARD,
};
use oalearn::mining::{mine, MiningScope};
use oalearn::patterns::{objective_terms, parse_model, serialize_model};
use oalearn::pipeline::{cross_validate, train, CvConfig, Mode, TrainConfig};
use oalearn::{
    binarize, load_csv, load_rows, BinMode, Dataset, Error, LoadOptions, ModelFile, Schema,
};

use crate::{
    Command, ConvertArgs, CvArgs, DataArgs, MineArgs, MiningArgs, ModeArg, PredictArgs, ScopeArg,
    SolverArgs, TrainArgs, VcdimArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Mine(a) => cmd_mine(a),
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Cv(a) => cmd_cv(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Vcdim(a) => cmd_vcdim(a),
    }
}

/// 1 for bad arguments, 3 for guards, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::InvalidArgument(_)) => 1,
        Some(Error::Guard(_)) => 3,
        _ => 2,
    }
}

/// The error chain joined by `: `, skipping causes already quoted by the
/// message before them.
pub fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_data(a: &DataArgs) -> Result<Dataset> {
    let schema = match &a.schema {
        Some(p) => {
            Some(Schema::parse(&read(p)?).with_context(|| format!("schema {}", p.display()))?)
        }
        None => None,
    };
    let opts = LoadOptions {
        schema,
        label_column: a.label.clone(),
        positive_label: a.positive.clone(),
    };
    load_csv(&a.input, &opts).with_context(|| format!("loading {}", a.input.display()))
}

fn scope(s: ScopeArg) -> MiningScope {
    match s {
        ScopeArg::Positives => MiningScope::PositivesOnly,
        ScopeArg::All => MiningScope::AllRows,
    }
}

fn train_config(m: &MiningArgs, s: &SolverArgs, c1: f64, c2: f64) -> Result<TrainConfig> {
    let time_limit = match s.time_limit {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err(Error::InvalidArgument(
                "time limit must be a positive number of seconds".into(),
            )
            .into())
        }
        t => t.map(Duration::from_secs_f64),
    };
    let cfg = TrainConfig {
        mode: match s.mode {
            ModeArg::Ooax => Mode::Ooax,
            ModeArg::Ooa => Mode::Ooa,
        },
        min_support: m.min_support,
        max_len: m.max_len,
        scope: scope(m.scope),
        bins: m.bins,
        bin_mode: BinMode::Quantile,
        gamma: s.gamma,
        top_k: s.topk,
        c1,
        c2,
        max_patterns: s.max_patterns,
        time_limit,
        node_limit: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn warn_unregularized(c1: f64, c2: f64) {
    if c1 == 0.0 && c2 == 0.0 {
        eprintln!(
            "warning: C1 = C2 = 0 disables support-bound pruning and the automatic pattern cap"
        );
    }
}

fn cmd_mine(a: MineArgs) -> Result<()> {
    let d = load_data(&a.data)?;
    let m = &a.mining;
    if !(m.min_support > 0.0 && m.min_support <= 1.0) {
        return Err(Error::InvalidArgument("min support must be in (0, 1]".into()).into());
    }
    if m.bins == 0 {
        return Err(Error::InvalidArgument("bins must be >= 1".into()).into());
    }
    let b = binarize(&d, m.bins, BinMode::Quantile).context("binarize")?;
    let mined = mine(&b, d.labels(), m.min_support, m.max_len, scope(m.scope));
    let mut text = String::new();
    for p in &mined {
        let lits: Vec<String> = p
            .items
            .iter()
            .map(|&i| b.columns[i].to_text(d.schema()))
            .collect();
        let _ = writeln!(text, "{}\t{}", p.count, lits.join(","));
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let d = load_data(&a.data)?;
    let cfg = train_config(&a.mining, &a.solver, a.c1, a.c2)?;
    warn_unregularized(cfg.c1, cfg.c2);
    let t = train(&d, &cfg).context("train")?;
    let terms = objective_terms(&t.model, &d);
    let mut text = serialize_model(&t.model, d.schema());
    text.push('\n');
    let mode = match cfg.mode {
        Mode::Ooax => "ooax",
        Mode::Ooa => "ooa",
    };
    let _ = write!(
        text,
        "mode {mode}\nc1 {}\nc2 {}\npattern_cap {}\nmined {}\npruned_low_positive {}\npruned_high_negative {}\n\
         candidates {}\nobjective {:?}\noptimal {}\ngap {:?}\nnodes {}\ntrain_accuracy {:.4}\ntrain_errors {}\n\
         patterns {}\naverage_length {:.2}\ntotal_literals {}\n",
        cfg.c1,
        cfg.c2,
        t.model.pattern_cap,
        t.stages.mined,
        t.stages.pruned_low_positive,
        t.stages.pruned_high_negative,
        t.stages.candidates,
        t.solution.objective,
        t.solution.proven_optimal,
        t.solution.gap,
        t.solution.nodes,
        t.model.accuracy(&d),
        terms.errors,
        t.model.patterns.len(),
        t.model.average_length(),
        t.model.total_literals(),
    );
    print!("{text}");
    eprintln!("runtime_ms {}", t.solution.runtime.as_millis());
    if let Some(p) = &a.out {
        let file = ModelFile::new(d.schema().clone(), t.model);
        emit(Some(p), &file.to_json()?)?;
    }
    Ok(())
}

fn load_model(path: &Path) -> Result<ModelFile> {
    ModelFile::from_json(&read(path)?).with_context(|| format!("model {}", path.display()))
}

fn cmd_predict(a: PredictArgs) -> Result<()> {
    let file = load_model(&a.model)?;
    let rows = load_rows(&a.input, &file.schema)
        .with_context(|| format!("loading {}", a.input.display()))?;
    let mut text = String::new();
    for row in &rows {
        let _ = writeln!(text, "{}", file.model.predict(row));
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_evaluate(a: PredictArgs) -> Result<()> {
    let file = load_model(&a.model)?;
    let opts = LoadOptions {
        schema: Some(file.schema.clone()),
        ..LoadOptions::default()
    };
    let d = load_csv(&a.input, &opts).with_context(|| format!("loading {}", a.input.display()))?;
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (row, label) in d.rows().zip(d.labels()) {
        match (file.model.predict(row) == 1, label.is_positive()) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let accuracy = if d.is_empty() {
        0.0
    } else {
        (tp + tn) as f64 / d.len() as f64
    };
    let text = format!(
        "rows {}\naccuracy {accuracy:.4}\ntrue_positive {tp}\nfalse_positive {fp}\ntrue_negative {tn}\nfalse_negative {fn_}\n",
        d.len()
    );
    emit(a.out.as_deref(), &text)
}

fn cmd_cv(a: CvArgs) -> Result<()> {
    let d = load_data(&a.data)?;
    let train = train_config(&a.mining, &a.solver, a.c1[0], a.c2[0])?;
    if a.c1.iter().chain(&a.c2).any(|&c| c == 0.0) {
        eprintln!("warning: a zero regularization weight weakens support-bound pruning");
    }
    let cfg = CvConfig {
        train,
        folds: a.folds,
        seed: a.seed,
        c1_grid: a.c1,
        c2_grid: a.c2,
    };
    let report = cross_validate(&d, &cfg).context("cross-validation")?;
    print!("{}", report.to_text());
    if let Some(p) = &a.out {
        emit(Some(p), &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<()> {
    let schema = match (&a.schema, a.dims) {
        (Some(p), _) => {
            Schema::parse(&read(p)?).with_context(|| format!("schema {}", p.display()))?
        }
        (None, Some(j)) => FiniteDomain::new(j)?.schema(),
        (None, None) => unreachable!("clap requires --schema or --dims"),
    };
    let forest = parse_forest(&read(&a.input)?, &schema)
        .with_context(|| format!("trees {}", a.input.display()))?;
    let (model, report) = forest_to_oa(&forest, &schema).context("convert")?;
    let mut text = serialize_model(&model, &schema);
    text.push('\n');
    let _ = writeln!(text, "trees {}", forest.trees.len());
    if forest.trees.len() > 1 {
        let _ = writeln!(text, "bound {}, achieved {}", report.bound, report.patterns);
    }
    let _ = writeln!(text, "patterns {}", model.patterns.len());
    print!("{text}");
    if let Some(p) = &a.out {
        emit(Some(p), &ModelFile::new(schema, model).to_json()?)?;
    }
    Ok(())
}

fn cmd_vcdim(a: VcdimArgs) -> Result<()> {
    let dom = FiniteDomain::new(a.dims)?;
    let patterns = parse_model(&read(&a.patterns)?, &dom.schema())
        .with_context(|| format!("patterns {}", a.patterns.display()))?;
    let efficient = max_efficient_set(&patterns, &dom)?;
    let mut text = format!(
        "patterns {}\nmax_efficient_set {}\n",
        patterns.len(),
        efficient.len()
    );
    if patterns.len() <= VC_PATTERN_GUARD && a.dims <= VC_DOMAIN_GUARD {
        let _ = writeln!(text, "vc_dimension {}", vc_dim_bruteforce(&patterns, &dom)?);
    } else {
        let _ = writeln!(text, "vc_dimension {}", efficient.len());
    }
    print!("{text}");
    Ok(())
}
