use std::path::Path;
use std::process::{Command, Output};

use kummer_cli::render::{BernoulliOut, ScanOut};
use kummer_core::modforms::QExpansion;
use kummer_core::ribetlat::{LatticeSearch, Outcome};

fn kummer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummer"))
        .args(args)
        .env_remove("KUMMER_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kummer(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    kummer(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn golden_text_outputs() {
    assert_eq!(stdout(&["bernoulli", "12"]), "-691/2730\n");
    assert_eq!(stdout(&["staudt-clausen", "12"]), "1\n");
    assert_eq!(
        stdout(&["irregular", "scan", "--min", "3", "--max", "100"]),
        "37,32\n59,44\n67,58\n"
    );
}

#[test]
fn csv_header_is_opt_in() {
    assert_eq!(stdout(&["--format", "csv", "bernoulli", "10"]), "10,5,66\n");
    assert_eq!(
        stdout(&["--format", "csv", "--header", "bernoulli", "10"]),
        "k,numerator,denominator\n10,5,66\n"
    );
}

#[test]
fn json_is_a_single_document() {
    let text = stdout(&[
        "--format",
        "json",
        "irregular",
        "scan",
        "--min",
        "30",
        "--max",
        "60",
    ]);
    assert_eq!(text.lines().count(), 1);
    let scan: ScanOut = serde_json::from_str(&text).unwrap();
    assert_eq!(scan.pairs.len(), 2);
    let b: BernoulliOut =
        serde_json::from_str(&stdout(&["--format", "json", "bernoulli", "20"])).unwrap();
    assert_eq!(
        (b.numerator.as_str(), b.denominator.as_str()),
        ("-174611", "330")
    );
}

#[test]
fn scan_independent_of_workers() {
    let one = stdout(&[
        "irregular",
        "scan",
        "--min",
        "2",
        "--max",
        "400",
        "--workers",
        "1",
    ]);
    let many = stdout(&[
        "irregular",
        "scan",
        "--min",
        "2",
        "--max",
        "400",
        "--workers",
        "7",
    ]);
    assert_eq!(one, many);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["frobnicate"]), 64);
    assert_eq!(code(&["bernoulli"]), 64);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["staudt-clausen", "7"]), 2);
    assert_eq!(code(&["teichmuller", "10", "5", "3"]), 2);
    assert_eq!(code(&["cusp-congruent", "691", "16"]), 2);
    assert_eq!(code(&["irregular", "scan", "--min", "10", "--max", "5"]), 2);
    assert_eq!(code(&["hecke", "2", "--form", "/nonexistent/form.json"]), 1);
}

#[test]
fn hecke_on_a_form_file() {
    let dir = tempfile::tempdir().unwrap();
    let e4 = stdout(&["--format", "json", "eisenstein", "4", "--prec", "20"]);
    let path = write(dir.path(), "e4.json", &e4);
    let t2 = stdout(&[
        "--format", "json", "hecke", "2", "--weight", "4", "--form", &path,
    ]);
    let t2: QExpansion = serde_json::from_str(&t2).unwrap();
    let e4: QExpansion = serde_json::from_str(&e4).unwrap();
    assert_eq!(t2.prec(), 10);
    assert_eq!(t2, e4.truncate(10).scale(&9.into()));
    assert_eq!(code(&["hecke", "2", "--weight", "6", "--form", &path]), 2);
    assert_eq!(code(&["hecke", "2", "--prec", "11", "--form", &path]), 2);
}

#[test]
fn ribet_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write(
        dir.path(),
        "r.json",
        r#"{"p":"5","N":"6","generators":[["1","25","5","1"]]}"#,
    );
    let reduce = stdout(&["ribet", "reduce", "--rep", &rep]);
    assert!(reduce.starts_with("type: diagonal\n"), "{reduce}");
    let search = stdout(&[
        "--format",
        "json",
        "ribet",
        "search",
        "--rep",
        &rep,
        "--max-iter",
        "5",
    ]);
    let search: LatticeSearch = serde_json::from_str(&search).unwrap();
    assert_eq!(
        (search.outcome, search.iteration),
        (Outcome::NonSplitUpper, 2)
    );
    assert_eq!(code(&["ribet", "pconj", "--rep", &rep]), 0);
    assert_eq!(
        code(&["ribet", "search", "--rep", &rep, "--max-iter", "7"]),
        2
    );
    assert_eq!(
        code(&["ribet", "search", "--rep", &rep, "--order", "3"]),
        64
    );
    let lower = write(
        dir.path(),
        "l.json",
        r#"{"p":"5","N":"6","generators":[["1","0","1","1"]]}"#,
    );
    assert_eq!(code(&["ribet", "cocycle", "--rep", &lower]), 2);
    let unit = write(
        dir.path(),
        "u.json",
        r#"{"p":"5","N":"6","generators":[["1","1","0","1"]]}"#,
    );
    assert_eq!(code(&["ribet", "pconj", "--rep", &unit]), 2);
    assert_eq!(
        stdout(&["--format", "csv", "ribet", "cocycle", "--rep", &unit]),
        "0,1,1,1\n"
    );
    let bad = write(
        dir.path(),
        "b.json",
        r#"{"p":"5","N":"6","generators":[["5","0","0","1"]]}"#,
    );
    assert_eq!(code(&["ribet", "reduce", "--rep", &bad]), 1);
}

#[test]
fn config_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("bernoulli.tsv");
    let cfg = write(
        dir.path(),
        "kummer.conf",
        &format!("cache_path = {}\nprecision = 3\n", cache.display()),
    );
    assert_eq!(stdout(&["--config", &cfg, "teichmuller", "2", "5"]), "57\n");
    assert_eq!(
        stdout(&["--config", &cfg, "bernoulli", "40"]),
        "-261082718496449122051/13530\n"
    );
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().count() >= 41);
    // cached table is read back on the next run
    assert_eq!(
        stdout(&["--config", &cfg, "bernoulli", "40"]),
        "-261082718496449122051/13530\n"
    );

    let out = Command::new(env!("CARGO_BIN_EXE_kummer"))
        .args(["teichmuller", "2", "5"])
        .env("KUMMER_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "57\n");

    std::fs::write(&cache, "0\t1\t1\n1\t1\t2\n").unwrap();
    assert_eq!(code(&["--config", &cfg, "bernoulli", "4"]), 1);

    let broken = write(dir.path(), "broken.conf", "workers = none\n");
    assert_eq!(code(&["--config", &broken, "bernoulli", "4"]), 1);
    let absent = dir.path().join("absent.conf");
    assert_eq!(
        stdout(&["--config", absent.to_str().unwrap(), "bernoulli", "4"]),
        "-1/30\n"
    );
}
