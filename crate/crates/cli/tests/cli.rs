use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURE: &str = "x1,x2,y\na,1.0,1\na,3.0,1\nb,2.0,-1\nb,4.0,-1\n";
const FIXTURE_SCHEMA: &str = "x1:categorical=a|b\nx2:numeric\nlabel=y:positive=1\n";

fn oalearn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oalearn"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("fixture.csv"), FIXTURE).unwrap();
    fs::write(dir.path().join("fixture.schema"), FIXTURE_SCHEMA).unwrap();
    dir
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[test]
fn train_predict_evaluate_round_trip() {
    let dir = workspace();
    let o = oalearn(&["train", "fixture.csv", "--out", "model.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("IF (x1 = a)\nTHEN 1 ELSE 0\n"), "{text}");
    assert!(text.contains("train_accuracy 1.0000\n"));
    assert!(text.contains("optimal true\n"));

    let o = oalearn(&["predict", "model.json", "fixture.csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n1\n0\n0\n");

    let o = oalearn(&["evaluate", "model.json", "fixture.csv"], dir.path());
    assert_eq!(
        stdout(&o),
        "rows 4\naccuracy 1.0000\ntrue_positive 2\nfalse_positive 0\ntrue_negative 2\nfalse_negative 0\n"
    );
}

#[test]
fn predict_without_label_column() {
    let dir = workspace();
    assert!(
        oalearn(&["train", "fixture.csv", "--out", "m.json"], dir.path())
            .status
            .success()
    );
    fs::write(dir.path().join("rows.csv"), "x2,x1\n5,b\n0,a\n").unwrap();
    let o = oalearn(&["predict", "m.json", "rows.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0\n1\n");
}

#[test]
fn predict_reports_missing_attribute() {
    let dir = workspace();
    assert!(
        oalearn(&["train", "fixture.csv", "--out", "m.json"], dir.path())
            .status
            .success()
    );
    fs::write(dir.path().join("short.csv"), "x1,y\na,1\n").unwrap();
    let o = oalearn(&["predict", "m.json", "short.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'x2'"), "{}", stderr(&o));
}

#[test]
fn empty_model_predicts_zero() {
    let dir = workspace();
    fs::write(dir.path().join("neg.tree"), "leaf 0\n").unwrap();
    let o = oalearn(
        &[
            "convert",
            "neg.tree",
            "--schema",
            "fixture.schema",
            "--out",
            "empty.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("IF (FALSE)\n"));
    let o = oalearn(&["predict", "empty.json", "fixture.csv"], dir.path());
    assert_eq!(stdout(&o), "0\n0\n0\n0\n");
}

#[test]
fn unregularized_training_warns() {
    let dir = workspace();
    let o = oalearn(
        &["train", "fixture.csv", "--c1", "0", "--c2", "0"],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning: C1 = C2 = 0"));
}

#[test]
fn mine_dump_format() {
    let dir = workspace();
    let o = oalearn(
        &[
            "mine",
            "fixture.csv",
            "--schema",
            "fixture.schema",
            "--min-support",
            "0.5",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.lines().next().unwrap().starts_with("2\tx1 = a"),
        "{text}"
    );
    for line in text.lines() {
        let (count, lits) = line.split_once('\t').unwrap();
        assert!(count.parse::<usize>().unwrap() >= 1);
        assert!(!lits.is_empty());
    }
}

#[test]
fn ooa_mode_trains_small_data_and_guards_large() {
    let dir = workspace();
    let o = oalearn(&["train", "fixture.csv", "--mode", "ooa"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("train_accuracy 1.0000"));

    let mut big = String::from("x1,x2,y\n");
    for n in 0..600 {
        big.push_str(&format!(
            "{},{}.5,{}\n",
            if n % 2 == 0 { "a" } else { "b" },
            n,
            if n % 3 == 0 { 1 } else { -1 }
        ));
    }
    fs::write(dir.path().join("big.csv"), big).unwrap();
    let o = oalearn(&["train", "big.csv", "--mode", "ooa"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--mode ooax"), "{}", stderr(&o));
}

#[test]
fn convert_forest_reports_bound() {
    let dir = workspace();
    let forest = "split x1 = 1\n  leaf 1\n  split x2 = 1\n    leaf 1\n    leaf 0\n---\n\
                  split x3 = 1\n  leaf 1\n  leaf 0\n---\n\
                  split x1 = 0\n  split x2 = 0\n    leaf 1\n    leaf 0\n  leaf 1\n";
    fs::write(dir.path().join("forest.txt"), forest).unwrap();
    let o = oalearn(&["convert", "forest.txt", "--dims", "3"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("bound ")).unwrap();
    assert!(line.starts_with("bound 8, achieved "), "{line}");
    let achieved: usize = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(achieved <= 8);
}

#[test]
fn convert_single_tree() {
    let dir = workspace();
    fs::write(
        dir.path().join("t.tree"),
        "split x1 = a\n  leaf 1\n  split x2 <= 2.0\n    leaf 1\n    leaf 0\n",
    )
    .unwrap();
    let o = oalearn(
        &["convert", "t.tree", "--schema", "fixture.schema"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "IF (x1 = a)\nOR (x1 = b AND x2 <= 2.0)\nTHEN 1 ELSE 0\ntrees 1\npatterns 2\n"
    );
}

#[test]
fn vcdim_report_and_guard() {
    let dir = workspace();
    fs::write(
        dir.path().join("p.txt"),
        "IF (x1 = 1)\nOR (x2 = 1)\nTHEN 1 ELSE 0\n",
    )
    .unwrap();
    let o = oalearn(&["vcdim", "p.txt", "--dims", "3"], dir.path());
    assert_eq!(
        stdout(&o),
        "patterns 2\nmax_efficient_set 2\nvc_dimension 2\n"
    );
    let o = oalearn(&["vcdim", "p.txt", "--dims", "25"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("guard"));
}

#[test]
fn exit_codes() {
    let dir = workspace();
    assert_eq!(oalearn(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(oalearn(&["train"], dir.path()).status.code(), Some(1));
    assert_eq!(
        oalearn(&["train", "fixture.csv", "--min-support", "0"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        oalearn(&["train", "missing.csv"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(oalearn(&["--help"], dir.path()).status.code(), Some(0));
    fs::write(dir.path().join("ragged.csv"), "x1,y\na,1,extra\n").unwrap();
    let o = oalearn(&["train", "ragged.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 1"));
}

#[test]
fn cv_is_deterministic_and_consistent() {
    let dir = workspace();
    let monks = data_dir().join("uci/monks1.csv");
    let schema = data_dir().join("uci/monks1.schema");
    let args = [
        "cv",
        monks.to_str().unwrap(),
        "--schema",
        schema.to_str().unwrap(),
        "--c1",
        "0.001,0.01",
        "--c2",
        "0.001",
        "--folds",
        "3",
        "--seed",
        "7",
    ];
    let a = oalearn(&[&args[..], &["--out", "a.json"]].concat(), dir.path());
    let b = oalearn(&[&args[..], &["--out", "b.json"]].concat(), dir.path());
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let ja = fs::read_to_string(dir.path().join("a.json")).unwrap();
    assert_eq!(ja, fs::read_to_string(dir.path().join("b.json")).unwrap());

    let report: serde_json::Value = serde_json::from_str(&ja).unwrap();
    let folds = report["folds"].as_array().unwrap();
    assert_eq!(folds.len(), 3);
    let mut literal_sum = 0.0;
    for f in folds {
        let patterns = f["model"]["patterns"].as_array().unwrap();
        let literals: usize = patterns
            .iter()
            .map(|z| z["literals"].as_array().unwrap().len())
            .sum();
        assert_eq!(f["patterns"].as_u64().unwrap() as usize, patterns.len());
        assert_eq!(f["total_literals"].as_u64().unwrap() as usize, literals);
        literal_sum += literals as f64;
    }
    let mean = report["total_literals_mean"].as_f64().unwrap();
    assert!((mean - literal_sum / 3.0).abs() < 1e-12);
    assert!(stdout(&a).starts_with("accuracy "));
}
