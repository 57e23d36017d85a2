use criterion::{criterion_group, criterion_main, Criterion};
use oalearn::mining::{mine, MiningScope};
use oalearn::pipeline::{candidate_pool, TrainConfig};
use oalearn::{binarize, BinMode};
use oalearn_bench::uci;

fn mining(c: &mut Criterion) {
    let d = uci("tictactoe");
    let b = binarize(&d, 4, BinMode::Quantile).expect("binarize");
    c.bench_function("mine tictactoe", |bench| {
        bench.iter(|| mine(&b, d.labels(), 0.05, 3, MiningScope::PositivesOnly))
    });
    let cfg = TrainConfig::default();
    c.bench_function("candidate pool tictactoe", |bench| {
        bench.iter(|| candidate_pool(&d, &cfg, cfg.min_support).expect("pool"))
    });
}

criterion_group!(benches, mining);
criterion_main!(benches);
