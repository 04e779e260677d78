use std::path::Path;
use std::process::Command;

use symfam::family::io::read_family;
use symfam::symmetry::verify_symmetric_witness;
use symfam_cli::report::{CommandReport, SCHEMA};
use symfam_cli::{run_command, Outcome, EXIT_BUDGET, EXIT_INVALID, EXIT_OK};

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["symfam"];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn json(args: &[&str]) -> (i32, CommandReport) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = run(&a);
    let report: CommandReport = serde_json::from_str(&out.stdout).expect("schema-conformant report");
    assert_eq!(report.schema, SCHEMA);
    assert_eq!(report.exit_code, out.exit_code);
    (out.exit_code, report)
}

fn value(r: &CommandReport, record: &str, key: &str) -> serde_json::Value {
    r.record(record).unwrap().get(key).unwrap().value.clone()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).exit_code, EXIT_OK);
    assert_eq!(run(&["--version"]).exit_code, EXIT_OK);
    assert_eq!(run(&["no-such-command"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["oracle", "s-cyclic", "7"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["oracle", "s-cyclic", "7", "9"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["geom", "pg-flats", "1", "6"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["cover", "verify", "7", "--set", "0,9"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["cover", "min", "100", "--budget", "1000"]).exit_code, EXIT_BUDGET);
    assert_eq!(run(&["runs", "count", "60", "30", "--method", "sweep", "--budget", "1e6"]).exit_code, EXIT_BUDGET);
    assert_eq!(run(&["bounds", "lemma22-sweep", "--n-max", "30"]).exit_code, EXIT_INVALID);
    assert_eq!(run(&["cover", "min", "43"]).exit_code, EXIT_OK);
}

#[test]
fn reports_round_trip_through_the_schema() {
    let (code, r) = json(&["oracle", "s-cyclic", "13", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&r, "oracle.s-cyclic", "value"), 13);
    assert_eq!(r.record("oracle.s-cyclic").unwrap().get("value").unwrap().provenance, "exact");
    let again: CommandReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(again, r);

    let (_, r) = json(&["cover", "min", "100", "--budget", "1000"]);
    assert_eq!(r.record("cover.min").unwrap().get("h").unwrap().provenance, "non-exhaustive");

    let mut doc: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    doc["extra"] = serde_json::Value::Bool(true);
    assert!(serde_json::from_value::<CommandReport>(doc).is_err());
}

#[test]
fn free_constants_are_echoed() {
    let (_, r) = json(&["bounds", "main", "100", "25", "--c", "1"]);
    let rec = &r.records[0];
    assert_eq!(rec.get("c").unwrap().value, 1.0);
    assert!(rec.get("factor").is_some());
    let (_, r) = json(&["bounds", "main", "100", "25", "--c", "1", "--trace", "--c0", "1", "--density", "0.1"]);
    assert_eq!(r.records.len(), 2);
    assert_eq!(run(&["bounds", "main", "100", "25", "--c", "1", "--trace"]).exit_code, EXIT_INVALID);
}

fn build(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut a = vec!["family", "build"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert_eq!(run(&a).exit_code, EXIT_OK, "{args:?}");
    path
}

#[test]
fn built_families_verify_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("tr.json", vec!["translates", "7", "--set", "0,1,3"]),
        ("runs.json", vec!["runs", "11", "5"]),
        ("pg.json", vec!["pg", "1", "3"]),
        ("da.json", vec!["da", "1", "3"]),
        ("singer.json", vec!["singer", "4"]),
    ];
    for (name, args) in &cases {
        let p = build(dir.path(), name, args);
        let bytes = std::fs::read_to_string(&p).unwrap();
        let (f, w) = read_family(&p).unwrap();
        assert!(verify_symmetric_witness(&f, w.as_ref().unwrap()).unwrap(), "{name}");
        let (_, r) = json(&["family", "verify", "--in", p.to_str().unwrap()]);
        assert_eq!(value(&r, "family.verify", "intersecting"), true, "{name}");
        assert_eq!(value(&r, "family.verify", "symmetric"), true, "{name}");
        // rewriting gives identical bytes
        let q = dir.path().join(format!("again-{name}"));
        symfam::family::io::write_family(&q, &f, w.as_ref()).unwrap();
        assert_eq!(std::fs::read_to_string(&q).unwrap(), bytes, "{name}");
    }
    let pg = dir.path().join("pg.json");
    let fano = build(dir.path(), "fano.json", &["pg", "1", "2"]);
    let t = build(dir.path(), "t.json", &["tensor", fano.to_str().unwrap(), pg.to_str().unwrap()]);
    let (f, w) = read_family(&t).unwrap();
    assert_eq!((f.n(), f.len(), f.k()), (91, 91, Some(12)));
    assert!(f.is_intersecting() && verify_symmetric_witness(&f, &w.unwrap()).unwrap());

    let e = build(dir.path(), "e.json", &["extend", fano.to_str().unwrap(), "4"]);
    let (f, _) = read_family(&e).unwrap();
    assert_eq!(f.len(), 28);

    let (_, r) = json(&["geom", "maximal", "--family", fano.to_str().unwrap()]);
    assert_eq!(value(&r, "geom.maximal", "maximal"), true);
}

#[test]
fn malformed_family_files_are_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"n": 3, "k": 2, "sets": [[1, 4]]}"#).unwrap();
    assert_eq!(run(&["family", "verify", "--in", p.to_str().unwrap()]).exit_code, EXIT_INVALID);
    std::fs::write(&p, r#"{"n": 3, "k": 2, "sets": [], "colour": 1}"#).unwrap();
    assert_eq!(run(&["family", "verify", "--in", p.to_str().unwrap()]).exit_code, EXIT_INVALID);
    let missing = dir.path().join("missing.json");
    assert_ne!(run(&["family", "verify", "--in", missing.to_str().unwrap()]).exit_code, EXIT_OK);
}

#[test]
fn oracle_table_csv() {
    let out = run(&["oracle", "table", "7"]);
    assert_eq!(out.exit_code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["n", "k", "s_cyclic", "exact_flag"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 28);
    let r73 = rows.iter().find(|r| &r[0] == "7" && &r[1] == "3").unwrap();
    assert_eq!((&r73[2], &r73[3]), ("7", "true"));
}

#[test]
fn compare_table_csv() {
    let out = run(&["compare", "--n-min", "7", "--n-max", "13", "--primes-only", "--c", "1"]);
    assert_eq!(out.exit_code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_bytes());
    assert_eq!(rdr.headers().unwrap().len(), 10);
    for row in rdr.records() {
        let row = row.unwrap();
        let n: u64 = row[0].parse().unwrap();
        assert!(matches!(n, 7 | 11 | 13));
        // the run family never beats the rotation-invariant optimum
        let f: u64 = row[2].parse().unwrap();
        let s: u64 = row[4].parse().unwrap();
        assert!(f <= s);
    }
    let out = run(&["compare", "--n-min", "9", "--n-max", "3"]);
    assert_eq!(out.exit_code, EXIT_INVALID);
}

#[test]
fn seeded_commands_are_reproducible() {
    let a = json(&["bounds", "averaging", "23", "6", "--seed", "5"]).1;
    let b = json(&["bounds", "averaging", "23", "6", "--seed", "5"]).1;
    assert_eq!(a.records, b.records);
    assert_eq!(value(&a, "bound.averaging", "equal"), true);
    let (_, r) = json(&["bounds", "lemma22-sweep", "--trials", "20"]);
    assert_eq!(value(&r, "bound.lemma22-sweep", "all_held"), true);
    assert_eq!(value(&r, "bound.lemma22-sweep", "inapplicable"), 0);
}

#[test]
fn binary_honours_thread_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_symfam"))
        .args(["oracle", "s-cyclic", "7", "3", "--json"])
        .env("SYMFAM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: CommandReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value(&r, "oracle.s-cyclic", "value"), 7);

    let out = Command::new(env!("CARGO_BIN_EXE_symfam"))
        .args(["cover", "min", "100", "--budget", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
}
