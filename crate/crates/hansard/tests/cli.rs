use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hansard::core::fixture::{generate_fixture, FixtureSpec};
use hansard::core::xml::SchemaEra;
use serde_json::Value;

fn hansard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hansard"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Write fixture days for the given eras/seeds into `dir`; returns paths.
fn fixture_days(dir: &Path, specs: &[(SchemaEra, u64)]) -> Vec<PathBuf> {
    specs
        .iter()
        .map(|&(era, seed)| {
            let o = hansard(&["fixtures", "--era", era.as_str(), "--seed", &seed.to_string(), "--out", s(dir)]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
            let fx = generate_fixture(&FixtureSpec::new(era, seed)).unwrap();
            dir.join(format!("{}.xml", fx.date.format("%Y-%m-%d")))
        })
        .collect()
}

fn manifest(out: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(out.join("run_manifest.json")).unwrap()).unwrap()
}

fn reference_args(fx: &Path) -> Vec<String> {
    vec![
        "--politicians".into(),
        fx.join("politicians.csv").to_string_lossy().into_owned(),
        "--partyfacts".into(),
        fx.join("partyfacts.csv").to_string_lossy().into_owned(),
    ]
}

fn run_with(cmd: &str, files: &[PathBuf], out: &Path, fx: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![cmd.into(), "--out".into(), s(out).into(), "--no-timestamp".into()];
    args.extend(reference_args(fx));
    args.extend(extra.iter().map(|e| e.to_string()));
    args.push("--files".into());
    args.extend(files.iter().map(|f| s(f).to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    hansard(&refs)
}

#[test]
fn fixtures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = hansard(&["fixtures", "--era", "LegacyInline", "--seed", "3", "--out", s(d.path())]);
        assert_eq!(code(&o), 0);
    }
    let mut names: Vec<_> = walk(a.path());
    names.sort();
    assert!(names.iter().any(|n| n.ends_with("politicians.csv")));
    assert!(names.iter().any(|n| n.ends_with("partyfacts.csv")));
    for n in names {
        let rel = n.strip_prefix(a.path()).unwrap();
        assert_eq!(std::fs::read(&n).unwrap(), std::fs::read(b.path().join(rel)).unwrap(), "{}", rel.display());
    }
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn one_day_gives_both_formats_and_an_ok_manifest() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::ModernFedChamb, 4)]);
    let o = run_with("parse", &days, out.path(), fx.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let date = days[0].file_stem().unwrap().to_str().unwrap();
    assert!(out.path().join(format!("hansard_{date}.csv")).is_file());
    assert!(out.path().join(format!("hansard_{date}.parquet")).is_file());
    let m = manifest(out.path());
    assert_eq!(m["days"][0]["status"], "ok");
    assert_eq!(m["exit_code"], 0);
    assert!(m.get("generated_unix").is_none());
    let truth = std::fs::read(fx.path().join("truth").join(format!("hansard_{date}.csv"))).unwrap();
    assert_eq!(std::fs::read(out.path().join(format!("hansard_{date}.csv"))).unwrap(), truth);
}

#[test]
fn malformed_day_is_isolated() {
    let fx = tempfile::tempdir().unwrap();
    let days = fixture_days(
        fx.path(),
        &[(SchemaEra::LegacyEarly, 1), (SchemaEra::LegacyInline, 2), (SchemaEra::ModernMainComm, 3)],
    );
    let clean = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_with("parse", &days, clean.path(), fx.path(), &["--formats", "csv"])), 0);

    let text = std::fs::read_to_string(&days[1]).unwrap();
    std::fs::write(&days[1], &text[..text.len() / 2]).unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = run_with("parse", &days, out.path(), fx.path(), &["--formats", "csv", "--jobs", "3"]);
    assert_eq!(code(&o), 3);
    let m = manifest(out.path());
    let statuses: Vec<_> = m["days"].as_array().unwrap().iter().map(|d| d["status"].as_str().unwrap()).collect();
    assert_eq!(statuses.iter().filter(|s| **s == "ok").count(), 2);
    assert_eq!(statuses.iter().filter(|s| **s == "failed").count(), 1);
    for (i, d) in days.iter().enumerate() {
        let name = format!("hansard_{}.csv", d.file_stem().unwrap().to_str().unwrap());
        if i == 1 {
            assert!(!out.path().join(&name).exists());
        } else {
            assert_eq!(
                std::fs::read(out.path().join(&name)).unwrap(),
                std::fs::read(clean.path().join(&name)).unwrap()
            );
        }
    }
}

#[test]
fn every_day_failing_is_total_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("2004-06-01.xml");
    std::fs::write(&bad, "<hansard>").unwrap();
    let o = run_with("parse", &[bad], dir.path(), dir.path(), &[]);
    assert_eq!(code(&o), 2, "reference files are missing");
    let o = hansard(&["parse", "--out", s(dir.path()), "--files", s(&dir.path().join("2004-06-01.xml"))]);
    assert_eq!(code(&o), 4);
}

#[test]
fn rerun_skips_unless_forced() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::LegacyInline, 7), (SchemaEra::ModernFedChamb, 7)]);
    assert_eq!(code(&run_with("parse", &days, out.path(), fx.path(), &[])), 0);
    let first = std::fs::read(out.path().join("run_manifest.json")).unwrap();
    assert_eq!(code(&run_with("parse", &days, out.path(), fx.path(), &[])), 0);
    let m = manifest(out.path());
    assert!(m["days"].as_array().unwrap().iter().all(|d| d["status"] == "skipped"));
    assert_eq!(code(&run_with("parse", &days, out.path(), fx.path(), &["--force"])), 0);
    assert_eq!(std::fs::read(out.path().join("run_manifest.json")).unwrap(), first);
}

#[test]
fn validate_clean_fixtures() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::ModernFedChamb, 1), (SchemaEra::LegacyEarly, 5)]);
    let o = run_with("validate", &days, out.path(), fx.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: Value = serde_json::from_slice(&std::fs::read(out.path().join("validation_report.json")).unwrap()).unwrap();
    let findings: usize = report["tests"].as_array().unwrap().iter().map(|t| t["findings"].as_array().unwrap().len()).sum();
    assert_eq!(findings, 0);
    assert_eq!(report["tests"].as_array().unwrap().len(), 8);
}

#[test]
fn validate_catches_a_wrong_header_date() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::ModernFedChamb, 2)]);
    let renamed = fx.path().join("2020-03-03.xml");
    std::fs::rename(&days[0], &renamed).unwrap();
    let o = run_with("validate", &[renamed], out.path(), fx.path(), &[]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("2020-03-03"));
}

#[test]
fn corpus_then_stats() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let stats = hansard(&["stats", "--out", s(out.path())]);
    assert_eq!(code(&stats), 2, "stats needs a corpus");

    let days = fixture_days(
        fx.path(),
        &[(SchemaEra::LegacyEarly, 8), (SchemaEra::LegacyInline, 8), (SchemaEra::ModernFedChamb, 8)],
    );
    assert_eq!(code(&run_with("parse", &days, out.path(), fx.path(), &[])), 0);
    let o = hansard(&["corpus", "--out", s(out.path()), "--no-timestamp"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let corpus = hansard::output::read_corpus(&out.path().join("hansard_corpus.parquet")).unwrap();
    assert_eq!(corpus.days.len(), 3);
    let mut args = vec!["stats", "--out", s(out.path())];
    let pf = fx.path().join("partyfacts.csv");
    args.extend(["--partyfacts", s(&pf)]);
    let o = hansard(&args);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["days"], 3);
    assert_eq!(v["rows"].as_u64().unwrap() as usize, corpus.row_count());
    assert!(v["party_totals"].get("LIB").is_some());
}

#[test]
fn corpus_rejects_duplicate_dates() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::LegacyInline, 9)]);
    assert_eq!(code(&run_with("parse", &days, out.path(), fx.path(), &[])), 0);
    let stem = days[0].file_stem().unwrap().to_str().unwrap();
    let csv = out.path().join(format!("hansard_{stem}.csv"));
    let pq = out.path().join(format!("hansard_{stem}.parquet"));
    let o = hansard(&["corpus", "--out", s(out.path()), "--files", s(&csv), s(&pq)]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("claim"));
}

#[test]
fn topics_and_divisions_subcommands() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::LegacyInline, 1), (SchemaEra::LegacyEarly, 2)]);
    assert_eq!(code(&run_with("topics", &days, out.path(), fx.path(), &[])), 0);
    let topics = hansard::output::read_topics_csv(&out.path().join("all_debate_topics.csv")).unwrap();
    assert!(!topics.is_empty());
    assert_eq!(code(&run_with("divisions", &days, out.path(), fx.path(), &[])), 0);
    assert!(out.path().join("division_data.parquet").is_file());
    assert!(out.path().join("division_votes.csv").is_file());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hansard(&["frobnicate"])), 2);
    assert_eq!(code(&hansard(&["parse", "--out", s(dir.path())])), 2);
    let o = hansard(&["parse", "--out", s(dir.path()), "--formats", "csv,xlsx", "--from", "2020-02-25"]);
    assert_eq!(code(&o), 2);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "nothing written before the format check");
    let o = hansard(&["parse", "--out", s(dir.path()), "--from", "2020-02-26", "--to", "2020-02-25"]);
    assert_eq!(code(&o), 2);
    let o = hansard(&["parse", "--out", s(dir.path()), "--qa-heuristics", "/no/such/file", "--from", "2020-02-25"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn custom_qa_heuristics_file_is_used() {
    let fx = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let days = fixture_days(fx.path(), &[(SchemaEra::ModernFedChamb, 6)]);
    let rules = fx.path().join("qa.txt");
    std::fs::write(&rules, "# none\nQ>A a phrase that never occurs\n").unwrap();
    let stages = fx.path().join("stage.txt");
    std::fs::write(&stages, "Question agreed to.\nBill read a second time.\n").unwrap();
    let o = run_with(
        "parse",
        &days,
        out.path(),
        fx.path(),
        &["--qa-heuristics", s(&rules), "--stage-directions", s(&stages), "--formats", "csv"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&rules, "Q?A nonsense\n").unwrap();
    let o = run_with("parse", &days, out.path(), fx.path(), &["--qa-heuristics", s(&rules), "--force"]);
    assert_eq!(code(&o), 2);
}
