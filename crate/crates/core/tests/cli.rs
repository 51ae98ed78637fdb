use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use tempfile::tempdir;

fn wili() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wili"));
    cmd.env_remove("WILI_DATA_DIR");
    cmd
}

fn write_split(dir: &Path, name: &str, rows: &[(&str, &str)]) -> String {
    let x = dir.join(format!("x_{name}.txt"));
    let y = dir.join(format!("y_{name}.txt"));
    let mut xs = String::new();
    let mut ys = String::new();
    for (t, l) in rows {
        xs.push_str(t);
        xs.push('\n');
        ys.push_str(l);
        ys.push('\n');
    }
    fs::write(&x, xs).unwrap();
    fs::write(&y, ys).unwrap();
    format!("{},{}", x.display(), y.display())
}

fn fixture(dir: &Path) -> (String, String) {
    let train = write_split(
        dir,
        "train",
        &[
            ("the cat sat on the mat with the hat", "eng"),
            ("the dog and the fox went to the shop", "eng"),
            ("der hund und die katze sind zu hause", "deu"),
            ("die kinder spielen in dem garten heute", "deu"),
            ("кошка сидит на окне и смотрит на улицу", "rus"),
            ("собака бежит по дороге к дому быстро", "rus"),
        ],
    );
    let test = write_split(
        dir,
        "test",
        &[
            ("the man and the hat", "eng"),
            ("die katze und der hund", "deu"),
            ("кошка и собака дома", "rus"),
        ],
    );
    (train, test)
}

#[test]
fn freq_train_then_evaluate() {
    let dir = tempdir().unwrap();
    let (train, test) = fixture(dir.path());
    let model = dir.path().join("freq.model");
    let status = wili()
        .args([
            "train-freq",
            "--corpus",
            &train,
            "--theta",
            "0.9",
            "--model",
        ])
        .arg(&model)
        .status()
        .unwrap();
    assert!(status.success());

    let report = dir.path().join("report.csv");
    let cm = dir.path().join("cm.csv");
    let supported = dir.path().join("supported.txt");
    fs::write(&supported, "eng\ndeu\n").unwrap();
    let out = wili()
        .args(["evaluate", "--test", &test, "--timings", "--model"])
        .arg(&model)
        .arg("--report")
        .arg(&report)
        .arg("--cm")
        .arg(&cm)
        .arg("--supported")
        .arg(&supported)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ms mean"), "{stderr}");
    assert!(stderr.contains("reduced accuracy"), "{stderr}");
    let report = fs::read_to_string(report).unwrap();
    assert!(report.starts_with("label,precision,recall,f1,support\n"));
    assert!(report.contains("\naccuracy,"));
    assert!(fs::read_to_string(cm)
        .unwrap()
        .starts_with("truth\\pred,deu,eng,rus,UNKNOWN\n"));
}

#[test]
fn textcat_and_mlp_predict_from_stdin() {
    let dir = tempdir().unwrap();
    let (train, _) = fixture(dir.path());
    let tc = dir.path().join("tc.model");
    let mlp = dir.path().join("mlp.model");
    assert!(wili()
        .args(["train-textcat", "--corpus", &train, "--model"])
        .arg(&tc)
        .status()
        .unwrap()
        .success());
    assert!(wili()
        .args([
            "train-mlp",
            "--corpus",
            &train,
            "--epochs",
            "40",
            "--batch",
            "2",
            "--hidden",
            "16",
            "--min-count",
            "1",
            "--model"
        ])
        .arg(&mlp)
        .stderr(Stdio::null())
        .status()
        .unwrap()
        .success());
    for (model, check) in [(&tc, true), (&mlp, false)] {
        let mut child = wili()
            .args(["predict", "--text", "-", "--model"])
            .arg(model)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child
            .stdin
            .take()
            .unwrap()
            .write_all("the cat and the hat\nсобака дома\n".as_bytes())
            .unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success());
        let lines: Vec<String> = String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(String::from)
            .collect();
        assert_eq!(lines.len(), 2);
        if check {
            assert_eq!(lines, ["eng", "rus"]);
        }
    }
}

#[test]
fn build_corpus_and_stats() {
    let dir = tempdir().unwrap();
    let docs = dir.path().join("docs");
    fs::create_dir(&docs).unwrap();
    let long = "word ".repeat(40);
    fs::write(
        docs.join("eng.txt"),
        format!("short line\n{long}\nISBN {long}\n"),
    )
    .unwrap();
    fs::write(docs.join("deu.txt"), format!("{long}\r\n{long}x\n")).unwrap();
    let pair = format!(
        "{},{}",
        dir.path().join("x.csv").display(),
        dir.path().join("y.csv").display()
    );
    assert!(wili()
        .args(["build-corpus", "--in"])
        .arg(&docs)
        .args(["--out", &pair])
        .status()
        .unwrap()
        .success());
    assert_eq!(
        fs::read_to_string(dir.path().join("y.csv")).unwrap(),
        "deu\ndeu\neng\n"
    );

    let stats = dir.path().join("stats.csv");
    assert!(wili()
        .args(["stats", "--corpus", &pair, "--out"])
        .arg(&stats)
        .status()
        .unwrap()
        .success());
    let s = fs::read_to_string(&stats).unwrap();
    assert!(s.starts_with("label,c99_size,mean_len\ndeu,"), "{s}");

    let blocks = dir.path().join("blocks.csv");
    assert!(wili()
        .args(["blocks", "--corpus", &pair, "--out"])
        .arg(&blocks)
        .status()
        .unwrap()
        .success());
    assert_eq!(fs::read_to_string(&blocks).unwrap().lines().count(), 24);
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let (train, _) = fixture(dir.path());
    // missing required flag
    assert_eq!(
        wili()
            .args(["train-freq", "--corpus", &train])
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code(),
        Some(1)
    );
    // no corpus and no WILI_DATA_DIR
    let m = dir.path().join("m");
    assert_eq!(
        wili()
            .args(["train-freq", "--model"])
            .arg(&m)
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code(),
        Some(1)
    );
    // bad metric
    assert_eq!(
        wili()
            .args([
                "train-freq",
                "--corpus",
                &train,
                "--metric",
                "nope",
                "--model"
            ])
            .arg(&m)
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code(),
        Some(1)
    );
    // unreadable model
    let junk = dir.path().join("junk");
    fs::write(&junk, "not a model\n").unwrap();
    assert_eq!(
        wili()
            .args(["predict", "--text", "-", "--model"])
            .arg(&junk)
            .stdin(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code(),
        Some(2)
    );
    assert_eq!(
        wili()
            .arg("--help")
            .stdout(Stdio::null())
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    assert_eq!(wili::cli::run(["wili", "predict"]), 1);
}
