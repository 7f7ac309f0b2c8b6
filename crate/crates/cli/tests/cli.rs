use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_deckforge");

fn run(dir: &Path, args: &[&str]) -> std::process::Output {
    let out = Command::new(BIN).args(args).current_dir(dir).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

/// Runs the whole file pipeline in `dir` and returns the files it wrote.
fn pipeline(dir: &Path) -> Vec<PathBuf> {
    std::fs::write(dir.join("targets.txt"), "# uniform over hands\n1 Pair\n1 Two Pair\n1 High Card\n").unwrap();
    run(dir, &["simulate", "--preset", "omaha-hl", "--rounds", "5", "--seed", "3", "--out", "sim.ndjson"]);
    run(dir, &[
        "datagen", "--preset", "texas", "--rounds", "40", "--mode", "nsp,dsp", "--balance", "targets.txt", "--seed", "3",
        "--out", "corpus.ndjson", "--stats", "stats.json",
    ]);
    run(dir, &["datagen", "--variants", "6", "--rounds", "12", "--seed", "1", "--samples", "200", "--out", "var.ndjson"]);
    run(dir, &["oracle", "--gold", "corpus.ndjson", "--mode", "dsp", "--out", "pred.ndjson"]);
    run(dir, &[
        "eval", "--gold", "corpus.ndjson", "--pred", "pred.ndjson", "--mode", "dsp", "--report", "report.txt", "--json",
        "report.json",
    ]);
    ["sim.ndjson", "corpus.ndjson", "stats.json", "var.ndjson", "pred.ndjson", "report.txt", "report.json"]
        .iter()
        .map(|f| dir.join(f))
        .collect()
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (x, y) in pipeline(a.path()).iter().zip(pipeline(b.path())) {
        let (x_bytes, y_bytes) = (std::fs::read(x).unwrap(), std::fs::read(&y).unwrap());
        assert!(!x_bytes.is_empty(), "{}", x.display());
        assert!(x_bytes == y_bytes, "{} differs", x.display());
    }
    let report = std::fs::read_to_string(a.path().join("report.txt")).unwrap();
    assert!(report.contains("rounds    40/40 (100.0%)"), "{report}");
    assert_eq!(std::fs::read_to_string(a.path().join("var.ndjson")).unwrap().lines().count(), 200);
}

#[test]
fn seeds_change_the_output() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["simulate", "--preset", "badugi", "--rounds", "2", "--seed", "1", "--out", "a.ndjson"]);
    run(dir.path(), &["simulate", "--preset", "badugi", "--rounds", "2", "--seed", "2", "--out", "b.ndjson"]);
    assert_ne!(std::fs::read(dir.path().join("a.ndjson")).unwrap(), std::fs::read(dir.path().join("b.ndjson")).unwrap());
}

#[test]
fn bad_arguments_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["simulate", "--preset", "canasta", "--out", "x.ndjson"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset `canasta`"));

    std::fs::write(dir.path().join("t.txt"), "1 Royal Something\n").unwrap();
    let out = Command::new(BIN)
        .args(["datagen", "--preset", "texas", "--rounds", "3", "--balance", "t.txt", "--out", "c.ndjson"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Royal Something"));

    let out = Command::new(BIN).args(["presets"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 17);
}
