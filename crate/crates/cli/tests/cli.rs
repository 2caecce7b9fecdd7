use std::path::Path;
use std::process::{Command, Output};

fn oclearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oclearn")).args(args).output().expect("spawn oclearn")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path) -> std::path::PathBuf {
    let inst = dir.join("inst.toml");
    let out = oclearn(&["gen", "--generator", "ecoc", "--d", "2", "--classes", "3", "--margin", "0.2", "--seed", "4", "--out", s(&inst)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    inst
}

#[test]
fn repeated_runs_write_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path());
    let mut csvs = Vec::new();
    for k in 0..2 {
        let out_dir = dir.path().join(format!("run{k}"));
        let out = oclearn(&[
            "run", "--instance", s(&inst), "--algo", "hier", "--n", "2000", "--t", "20", "--eta", "0.05",
            "--seed", "11", "--repetitions", "3", "--heldout", "2000", "--out", s(&out_dir),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        for f in ["results.csv", "timings.csv", "summary.txt", "config.toml"] {
            assert!(out_dir.join(f).exists(), "missing {f}");
        }
        csvs.push(std::fs::read(out_dir.join("results.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn sample_writes_labeled_rows() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path());
    let csv = dir.path().join("s.csv");
    let out = oclearn(&["sample", "--instance", s(&inst), "--n", "50", "--seed", "1", "--out", s(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path());

    let out = oclearn(&["verify", "--samples", "20000", "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    // One label cannot reach a 1% error on three classes.
    let out = oclearn(&[
        "run", "--instance", s(&inst), "--algo", "hier", "--n", "500", "--t", "1", "--target-error", "0.01",
        "--out", s(&dir.path().join("fail")),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = oclearn(&["run", "--instance", s(&inst), "--algo", "sl", "--n", "100", "--out", s(&dir.path().join("x"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--rc"));

    // A missing instance fails every repetition rather than the config.
    let out = oclearn(&["run", "--instance", s(&dir.path().join("absent.toml")), "--algo", "hier", "--n", "10", "--t", "1", "--out", s(&dir.path().join("y"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repetition 0 failed"));
}
