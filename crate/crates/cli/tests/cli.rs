use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/fixture.conll");

fn hodep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodep"))
        .args(args)
        .env_remove("HODEP_THREADS")
        .env("RUST_LOG", "info")
        .output()
        .expect("run hodep")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn train(dir: &Path, name: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let model = dir.join(name);
    let mut args = vec!["train", "--train", FIXTURE, "--model-out", model.to_str().unwrap()];
    args.extend_from_slice(extra);
    (hodep(&args), model)
}

fn value(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

#[test]
fn train_dep1_writes_model_with_finite_objective() {
    let dir = tempfile::tempdir().unwrap();
    let (o, model) = train(dir.path(), "m", &["--factorization", "dep1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(model.exists());
    let objective: f64 = value(&stdout(&o), "objective").parse().unwrap();
    assert!(objective.is_finite());
}

#[test]
fn gsib3_header_records_factorization() {
    let dir = tempfile::tempdir().unwrap();
    let (o, model) = train(dir.path(), "m", &["--factorization", "gsib3", "--lang-profile", "english"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(model).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("factorization=gsib3"), "{header}");
    assert!(header.contains("profile=english"), "{header}");
}

#[test]
fn max_len_logs_one_exclusion() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = train(dir.path(), "m", &["--factorization", "dep1", "--max-len", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stderr(&o).matches("excluding training sentence").count(), 1);
    assert_eq!(value(&stdout(&o), "excluded"), "1");
}

#[test]
fn overfit_parse_and_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (o, model) = train(dir.path(), "m", &["--factorization", "sib2", "--lang-profile", "english", "--dev", FIXTURE]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dev_uas: f64 = value(&stdout(&o), "dev_uas").parse().unwrap();
    assert!(dev_uas >= 99.0, "{dev_uas}");

    let pred = dir.path().join("pred.conll");
    let p = hodep(&["parse", "--model", model.to_str().unwrap(), "--input", FIXTURE, "--output", pred.to_str().unwrap()]);
    assert!(p.status.success(), "{}", stderr(&p));
    let e = hodep(&["eval", "--gold", FIXTURE, "--pred", pred.to_str().unwrap(), "--punct", "english"]);
    assert!(e.status.success(), "{}", stderr(&e));
    let uas: f64 = value(&stdout(&e), "uas").parse().unwrap();
    assert!(uas >= 99.0, "{uas}");

    let again = hodep(&["parse", "--model", model.to_str().unwrap(), "--input", FIXTURE, "--output", "-"]);
    assert_eq!(again.stdout, fs::read(&pred).unwrap());
    let third = hodep(&["parse", "--model", model.to_str().unwrap(), "--input", FIXTURE]);
    assert_eq!(again.stdout, third.stdout);
}

#[test]
fn single_word_sentences_attach_to_root() {
    let dir = tempfile::tempdir().unwrap();
    let (_, model) = train(dir.path(), "m", &["--factorization", "gch2"]);
    let input = dir.path().join("one.conll");
    fs::write(&input, "1\tHello\t_\tUH\tUH\t_\t0\t_\t_\t_\n\n1\tunseen\t_\tZZ\tZZ\t_\t0\t_\t_\t_\n\n").unwrap();
    let o = hodep(&["parse", "--model", model.to_str().unwrap(), "--input", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let heads: Vec<&str> = out.lines().filter(|l| !l.is_empty()).map(|l| l.split('\t').nth(6).unwrap()).collect();
    assert_eq!(heads, vec!["0", "0"]);
}

#[test]
fn thread_count_does_not_change_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let (a, ma) = train(dir.path(), "a", &["--factorization", "gch2", "--threads", "1"]);
    let (b, mb) = train(dir.path(), "b", &["--factorization", "gch2", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(fs::read(ma).unwrap(), fs::read(mb).unwrap());
}

#[test]
fn eval_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.conll");
    let pred = dir.path().join("pred.conll");
    let line = |id: usize, pos: &str, head: usize| format!("{id}\tw{id}\t_\t{pos}\t{pos}\t_\t{head}\t_\t_\t_\n");
    fs::write(&gold, [line(1, "NN", 2), line(2, "VB", 0), line(3, ",", 2), line(4, "NN", 2)].concat() + "\n").unwrap();
    fs::write(&pred, [line(1, "NN", 2), line(2, "VB", 0), line(3, ",", 1), line(4, "NN", 1)].concat() + "\n").unwrap();
    let o = hodep(&["eval", "--gold", gold.to_str().unwrap(), "--pred", pred.to_str().unwrap(), "--punct", "english"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!((value(&out, "uas").parse::<f64>().unwrap() - 200.0 / 3.0).abs() < 1e-3);
    assert_eq!(value(&out, "ra"), "100.0000");
    assert_eq!(value(&out, "cm"), "0.0000");
    assert_eq!(value(&out, "tokens"), "3");
    assert!(out.contains("UAS"));

    let same = hodep(&["eval", "--gold", gold.to_str().unwrap(), "--pred", gold.to_str().unwrap()]);
    assert_eq!(value(&stdout(&same), "uas"), "100.0000");
    let short = hodep(&["eval", "--gold", gold.to_str().unwrap(), "--pred", FIXTURE]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = hodep(&["verify", "--max-n", "4", "--trials", "20", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let worst: f64 = value(&stdout(&a), "max_logz_rel_error").parse().unwrap();
    assert!(worst < 1e-9);
    let b = hodep(&["verify", "--max-n", "4", "--trials", "20", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(hodep(&["verify", "--max-n", "9"]).status.code(), Some(1));
    assert_eq!(hodep(&[]).status.code(), Some(1));
    assert_eq!(hodep(&["--help"]).status.code(), Some(0));
    assert_eq!(hodep(&["train", "--train", FIXTURE]).status.code(), Some(1));
    let missing = hodep(&["parse", "--model", "/nonexistent/model", "--input", FIXTURE]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conll");
    fs::write(&bad, "1\ta\t_\tX\tX\t_\t5\t_\t_\t_\n\n").unwrap();
    let model = dir.path().join("m");
    let o = hodep(&["train", "--train", bad.to_str().unwrap(), "--model-out", model.to_str().unwrap(), "--factorization", "dep1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}
