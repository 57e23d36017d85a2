//! Workload generators shared by the benchmarks.

use std::path::{Path, PathBuf};

use oalearn::selector::SelectionProblem;
use oalearn::{BitVec, CoverageMatrix, Dataset, Label, LoadOptions, Schema};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random selection instance with `n` rows and `k` candidates.
pub fn random_problem(n: usize, k: usize, seed: u64) -> SelectionProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Label> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                Label::Positive
            } else {
                Label::Negative
            }
        })
        .collect();
    let columns: Vec<BitVec> = (0..k)
        .map(|_| {
            let p = rng.gen_range(0.05..0.5);
            BitVec::from_fn(n, |_| rng.gen_bool(p))
        })
        .collect();
    let lengths = (0..k).map(|_| rng.gen_range(1..=3)).collect();
    SelectionProblem::new(
        CoverageMatrix::from_columns(columns, lengths, labels),
        0.005,
        0.005,
        5,
    )
    .expect("valid instance")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/uci")
}

/// One of the bundled UCI datasets, e.g. `tictactoe`.
pub fn uci(name: &str) -> Dataset {
    let dir = data_dir();
    let schema = Schema::parse(
        &std::fs::read_to_string(dir.join(format!("{name}.schema"))).expect("schema file"),
    )
    .expect("valid schema");
    let opts = LoadOptions {
        schema: Some(schema),
        ..LoadOptions::default()
    };
    oalearn::load_csv(dir.join(format!("{name}.csv")), &opts).expect("dataset loads")
}
