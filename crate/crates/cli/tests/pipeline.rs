use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tabgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tabgraph"))
        .args(args)
        .env("TABGRAPH_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = tabgraph(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path, n: usize) -> PathBuf {
    ok(&["synth", "--n", &n.to_string(), "--seed", "3", "--out-dir", s(dir)]);
    dir.join("synth.labels.json")
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn full_pipeline_runs_and_writes_manifests() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let labels = synth(d, 8);
    let tokens = d.join("synth.tokens.json");
    let vocab = d.join("vocab.bin");
    let graphs = d.join("graphs.bin");
    let model = d.join("model.ckpt");
    let pred = d.join("pred.json");
    let metrics = d.join("metrics.json");

    ok(&["repr-train", "--tables", s(&d.join("synth.tables.json")), "--out", s(&vocab), "--dim", "16", "--epochs", "2"]);
    ok(&["build-graphs", "--labels", s(&labels), "--vocab", s(&vocab), "--prune-islands", "2", "--out", s(&graphs)]);
    ok(&[
        "gnn-train", "--graphs", s(&graphs), "--sizing", "scaled", "--p-no", "5000", "--epochs", "5",
        "--out", s(&model),
    ]);
    ok(&["infer", "--model", s(&model), "--tokens", s(&tokens), "--vocab", s(&vocab), "--out", s(&pred)]);
    let out = ok(&["eval", "--gold", s(&labels), "--pred", s(&pred), "--out", s(&metrics)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("cell F1"));
    ok(&["render", "--labels", s(&pred), "--out-dir", s(&d.join("svg")), "--mode", "components"]);

    let loss: Value = serde_json::from_slice(&fs::read(d.join("model.ckpt.loss.json")).unwrap()).unwrap();
    assert_eq!(loss["loss_curve"].as_array().unwrap().len(), 5);
    let p: Value = serde_json::from_slice(&fs::read(&pred).unwrap()).unwrap();
    for page in p["pages"].as_array().unwrap() {
        let probs = page["probabilities"].as_array().unwrap();
        assert_eq!(probs.len(), page["labels"].as_array().unwrap().len());
        assert!(probs.iter().all(|x| (0.0..=1.0).contains(&x.as_f64().unwrap())));
    }
    assert_eq!(listing(&d.join("svg")).iter().filter(|f| f.ends_with(".svg")).count(), 8);

    let m: Value = serde_json::from_slice(&fs::read(d.join("model.ckpt.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["status"], "success");
    assert_eq!(m["command"], "gnn-train");
    assert_eq!(m["inputs"].as_array().unwrap().len(), 1);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    assert!(m["format_versions"]["checkpoint"].is_u64());
}

#[test]
fn eval_of_gold_against_itself_is_perfect() {
    let tmp = tempfile::tempdir().unwrap();
    let labels = synth(tmp.path(), 3);
    let metrics = tmp.path().join("m.json");
    ok(&["eval", "--gold", s(&labels), "--pred", s(&labels), "--out", s(&metrics)]);
    let m: Value = serde_json::from_slice(&fs::read(&metrics).unwrap()).unwrap();
    assert_eq!(m["accuracy"].as_f64(), Some(1.0));
    assert_eq!(m["macro_f1"].as_f64(), Some(1.0));
}

#[test]
fn label_reproduces_synthetic_labels() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let labels = synth(d, 6);
    let out = d.join("relabeled.json");
    ok(&[
        "label", "--tokens", s(&d.join("synth.tokens.json")), "--annotations",
        s(&d.join("synth.annotations.json")), "--out", s(&out),
    ]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&labels).unwrap());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        let labels = synth(d, 4);
        ok(&[
            "gnn-train", "--labels", s(&labels), "--features", "bbox", "--sizing", "scaled", "--p-no",
            "3000", "--epochs", "3", "--out", s(&d.join("m.ckpt")),
        ]);
    }
    for f in ["synth.tokens.json", "synth.labels.json", "synth.tables.json", "m.ckpt", "m.ckpt.loss.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn failures_leave_no_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let labels = synth(d, 3);
    let before = listing(d);

    let out = tabgraph(&["gnn-train", "--labels", s(&labels), "--features", "bbox+repr", "--out", s(&d.join("m.ckpt"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--vocab"));

    fs::write(d.join("bad.json"), "{not json").unwrap();
    let before_bad = listing(d);
    let out = tabgraph(&["eval", "--gold", s(&labels), "--pred", s(&d.join("bad.json")), "--out", s(&d.join("m.json"))]);
    assert!(!out.status.success());
    assert_eq!(listing(d), before_bad);

    let out = tabgraph(&["infer", "--model", s(&labels), "--tokens", s(&d.join("synth.tokens.json")), "--out", s(&d.join("p.json"))]);
    assert!(!out.status.success());
    assert!(before.iter().all(|f| listing(d).contains(f)));
    assert!(!d.join("p.json").exists() && !d.join("m.ckpt").exists());
}

#[test]
fn inputs_are_never_overwritten() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    synth(d, 3);
    let tokens = d.join("synth.tokens.json");
    let original = fs::read(&tokens).unwrap();
    let out = tabgraph(&["label", "--tokens", s(&tokens), "--annotations", s(&d.join("synth.annotations.json")), "--out", s(&tokens)]);
    assert!(!out.status.success());
    assert_eq!(fs::read(&tokens).unwrap(), original);
}
