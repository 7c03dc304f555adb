use std::path::Path;
use std::process::{Command, Output};

fn misp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_misp")).current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn gen(dir: &Path, family: &str, size: &str, seed: &str, file: &str) {
    let out = misp(dir, &["gen", "--family", family, "--size", size, "--seed", seed, "-o", file]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "random-graph", "8", "3", "a.json");
    gen(dir.path(), "random-graph", "8", "3", "b.json");
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    let stdout = misp(dir.path(), &["gen", "--family", "random-graph", "--size", "8", "--seed", "3"]).stdout;
    assert_eq!(stdout, a);
}

#[test]
fn run_writes_reports_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "bipartite-matching-intersection", "6", "1", "bip6.json");
    let args = ["run", "--instance", "bip6.json", "--algo", "combine-opt", "--trials", "400", "--seed", "7"];
    let first = misp(dir.path(), &args);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let summary = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(summary.contains("bound       0.003906"), "{summary}");
    assert!(summary.contains("pass"), "{summary}");
    let json = std::fs::read(dir.path().join("bip6.combine-opt.s7.json")).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("bip6.combine-opt.s7.csv")).unwrap();
    assert!(csv.starts_with("trial,ratio,accepted_ids,seed\n0,"));
    assert_eq!(csv.lines().count(), 401);

    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    let second = misp(dir.path(), &threaded);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read(dir.path().join("bip6.combine-opt.s7.json")).unwrap(), json);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "random-partition", "6", "2", "part.json");
    let config = r#"{"instance": "part.json", "algo": "generalized-partition", "trials": 50, "seed": 1,
                     "out_json": "r.json", "out_csv": "r.csv"}"#;
    std::fs::write(dir.path().join("c.json"), config).unwrap();
    let out = misp(dir.path(), &["run", "--config", "c.json", "--trials", "30", "-p", "0.4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["trials"], 30);
    assert_eq!(report["seed"], 1);
    assert_eq!(report["algorithm"]["p"], 0.4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"instance\": ").unwrap();
    assert_eq!(code(&misp(dir.path(), &["run", "--config", "broken.json"])), 2);
    assert_eq!(code(&misp(dir.path(), &["run", "--instance", "missing.json", "--algo", "greedy"])), 2);

    gen(dir.path(), "random-graph", "6", "1", "g.json");
    assert_eq!(code(&misp(dir.path(), &["run", "--instance", "g.json", "--algo", "graphic", "-p", "1.5"])), 2);
    assert_eq!(code(&misp(dir.path(), &["run", "--instance", "g.json", "--algo", "transversal"])), 2);

    gen(dir.path(), "random-graph", "24", "1", "big.json");
    let out = misp(dir.path(), &["run", "--instance", "big.json", "--algo", "graphic", "--trials", "5"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = misp(dir.path(), &["verify", "6"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS  6 "), "{text}");
    assert!(text.ends_with("acceptance: 1 passed, 0 failed\n"));
    assert_eq!(code(&misp(dir.path(), &["verify", "99"])), 2);
}
