use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn effred(out: &Path, args: &[&str]) -> (i32, Value) {
    let o = Command::new(env!("CARGO_BIN_EXE_effred"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("EFFRED_OUT")
        .output()
        .expect("binary runs");
    let summary = std::fs::read_to_string(out.join("summary.json"))
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok());
    (
        o.status.code().unwrap_or(-1),
        summary.unwrap_or(Value::Null),
    )
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn dyadic_presentations_are_isomorphic() {
    let t = tempfile::tempdir().unwrap();
    let (code, s) = effred(t.path(), &["compare", "--a", "2:inf", "--b", "2:inf@5"]);
    assert_eq!(code, 0);
    assert_eq!(s["results"]["verdict"]["value"], "Isomorphic");
    let (_, s) = effred(
        &t.path().join("z"),
        &["compare", "--a", "2:inf", "--b", "*:0"],
    );
    assert_eq!(s["results"]["verdict"]["value"], "NonIsomorphic");
}

#[test]
fn compare_reads_diagram_files() {
    let t = tempfile::tempdir().unwrap();
    effred(&t.path().join("g"), &["e0", "--stream", "1|0"]);
    let f = format!("file:{}", t.path().join("g/group.jsonl").display());
    let (code, s) = effred(&t.path().join("c"), &["compare", "--a", &f, "--b", "*:0"]);
    assert_eq!(code, 0);
    assert_eq!(s["results"]["verdict"]["value"], "Isomorphic");
}

#[test]
fn cyclotomic_fields() {
    let t = tempfile::tempdir().unwrap();
    let (_, s) = effred(t.path(), &["compare", "--a", "cyclo:3", "--b", "cyclo:5"]);
    assert_eq!(s["results"]["verdict"]["value"], "NonIsomorphic");
}

#[test]
fn exit_codes() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(
        effred(t.path(), &["e0", "--stages", "0", "--stream", "|0"]).0,
        2
    );
    assert_eq!(effred(t.path(), &["e0"]).0, 2);
    assert_eq!(effred(t.path(), &["scott", "--structure", "Q(i)"]).0, 2);
    assert_eq!(
        effred(
            t.path(),
            &["reduce-sigma3", "--relation", "custom", "--program", "x <"]
        )
        .0,
        2
    );
    let bad = t.path().join("bad.jsonl");
    std::fs::write(
        &bad,
        "{\"stage\": 0, \"fact\": {\"sym\": \"+\", \"args\": [0], \"res\": 1}, \"bit\": 3}\n",
    )
    .unwrap();
    assert_eq!(
        effred(
            &t.path().join("a"),
            &["audit", "--file", bad.to_str().unwrap()]
        )
        .0,
        3
    );
    let missing = t.path().join("nope.txt");
    assert_eq!(
        effred(
            &t.path().join("b"),
            &["reduce-sigma3", "--oracles", missing.to_str().unwrap()]
        )
        .0,
        3
    );
}

#[test]
fn audit_accepts_emitted_diagrams() {
    let t = tempfile::tempdir().unwrap();
    effred(
        &t.path().join("f"),
        &["inf-field", "--set", "finite:1", "--stages", "300"],
    );
    let f = t.path().join("f/field.jsonl");
    let (code, s) = effred(
        &t.path().join("a"),
        &["audit", "--file", f.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!(s["results"]["signature"], "FIELD");
    assert_eq!(s["results"]["clean"], true);
}

#[test]
fn config_file_reproduces_a_run() {
    let t = tempfile::tempdir().unwrap();
    let a = t.path().join("a");
    effred(
        &a,
        &[
            "cof",
            "--set",
            "cofinite:0,3",
            "--stages",
            "500",
            "--seed",
            "9",
        ],
    );
    let cfg = a.join("config.toml");
    let b = t.path().join("b");
    let (code, _) = effred(&b, &["cof", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(files(&a), files(&b));
    // flags override the file
    let c = t.path().join("c");
    effred(
        &c,
        &["cof", "--config", cfg.to_str().unwrap(), "--stages", "400"],
    );
    assert!(std::fs::read_to_string(c.join("config.toml"))
        .unwrap()
        .contains("stages = 400"));
    assert_eq!(
        effred(
            &t.path().join("d"),
            &["e0", "--config", cfg.to_str().unwrap()]
        )
        .0,
        2
    );
}

#[test]
fn custom_program_matches_builtin_e0() {
    let t = tempfile::tempdir().unwrap();
    let common = ["--stages", "1500", "--indices", "4", "--k-bound", "3"];
    let a = t.path().join("a");
    let b = t.path().join("b");
    let mut args = vec![
        "reduce-sigma3",
        "--relation",
        "custom",
        "--program",
        "y <= x || a(y) == b(y)",
    ];
    args.extend(common);
    effred(&a, &args);
    let mut args = vec!["reduce-sigma3", "--relation", "e0"];
    args.extend(common);
    effred(&b, &args);
    let (fa, fb) = (files(&a), files(&b));
    for name in [
        "chips.log",
        "triples.json",
        "profiles.json",
        "G_0.jsonl",
        "G_3.jsonl",
    ] {
        assert_eq!(fa[name], fb[name], "{name}");
    }
}

#[test]
fn scott_reports_unknown_with_warning() {
    let t = tempfile::tempdir().unwrap();
    let (code, s) = effred(
        t.path(),
        &[
            "scott",
            "--structure",
            "Z",
            "--against",
            "Z,Z[1/2]",
            "--stages",
            "120",
            "--generator-bound",
            "6",
            "--witness-bound",
            "4",
        ],
    );
    assert_eq!(code, 0);
    assert!(!s["results"]["verdicts"]["Z"]
        .as_str()
        .unwrap()
        .contains("false"));
    assert!(s["warnings"].as_array().is_some());
}
