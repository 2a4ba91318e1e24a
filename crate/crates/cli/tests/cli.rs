use std::process::{Command, Output};

use serde_json::Value;

/// Run the binary with whitespace-separated arguments.
fn run(args: &str) -> Output {
    run_args(args.split_whitespace())
}

fn run_args<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_cliquenorm"))
        .args(args)
        .env_remove("CLIQUENORM_SEED")
        .output()
        .expect("binary runs")
}

fn code(args: &str) -> Option<i32> {
    run(args).status.code()
}

fn json(args: &str) -> Value {
    let out = run(args);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "{args}: {stderr}");
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn floats(v: &Value) -> Vec<f64> {
    let items = v.as_array().expect("array");
    items.iter().map(|x| x.as_f64().expect("number")).collect()
}

fn value(v: &Value, i: usize) -> f64 {
    v["result"][i]["value"].as_f64().expect("bound value")
}

#[test]
fn clique_moments() {
    let v = json("moments --kind clique --n 3 --d 2 --p 0.5");
    assert_eq!(floats(&v["result"]["mean"]), [1.5, 0.125]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["run_spec"]["subcommand"], "moments");
    assert_eq!(v["run_spec"]["stat"]["n"], 3);
}

#[test]
fn critical_moments_at_p_one() {
    let v = json("moments --kind critical --n 3 --d 1 --p 1.0");
    assert_eq!(floats(&v["result"]["mean"]), [0.0]);
}

#[test]
fn critical_tail_bounds() {
    let v = json("moments --kind critical --n 30 --d 2 --p 0.5 --K 10");
    let tails = floats(&v["result"]["tail_bounds"]);
    assert_eq!(tails.len(), 2);
    assert!((tails[0] - 60.0 * 0.75f64.powi(10)).abs() < 1e-9);
}

#[test]
fn infeasible_link_is_a_usage_error() {
    let out = run("moments --kind link --n 2 --t-size 3 --d 1 --p 0.5");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(code("moments --kind widget --n 3 --d 1 --p 0.5"), Some(2));
    assert_eq!(
        code("moments --kind critical --n 3 --d 1 --p 0.5 --K 0"),
        Some(2)
    );
    assert_eq!(code("bounds --theorem clique --d 1"), Some(2));
    assert_eq!(
        code("bounds --theorem clique --n 10 --d 1 --p 1.5"),
        Some(2)
    );
    assert_eq!(
        code("simulate --kind clique --n 5 --d 1 --p 0.5 --replicates 1"),
        Some(2)
    );
}

#[test]
fn clique_bound_value() {
    let v = json("bounds --theorem clique --d 1 --p 0.5 --n 100");
    assert!((value(&v, 0) - 32.0 / 300.0).abs() < 1e-12);
    assert_eq!(v["result"][0]["vacuous"], false);
    assert_eq!(v["result"][1]["name"], "clique-convex");
}

#[test]
fn convex_transfer_of_zero() {
    let v = json("bounds --theorem convex --d 1 --smooth-b 0");
    assert_eq!(value(&v, 0), 0.0);
}

#[test]
fn link_bound_is_vacuous() {
    let v = json("bounds --theorem link --d 1 --t-size 1 --p 0.5 --n 50");
    assert!(value(&v, 0).is_finite() && value(&v, 0) > 0.0);
    assert_eq!(v["result"][0]["vacuous"], true);
}

#[test]
fn ustat_bounds() {
    let a = value(&json("bounds --theorem ustat --k 1 --alpha 4 --beta 3"), 0);
    let b = value(
        &json("bounds --theorem ustat-no-x --k 1 --alpha 4 --beta 3"),
        0,
    );
    assert!((a - 4.0 * 3.0 / (3.0 * 8.0)).abs() < 1e-12);
    assert!((b - 8.0 * a).abs() < 1e-12);
}

#[test]
fn verify_suites_pass() {
    for args in [
        "verify --suite figure2",
        "verify --suite oracle --n-max 4",
        "verify --suite morse-equivalence --graphs 200 --n 12 --seed 1",
        "verify --suite morse-exhaustive --n 5",
    ] {
        let v = json(args);
        assert_eq!(v["result"]["passed"], true, "{args}");
        let gates = v["result"]["gates"].as_array().unwrap();
        assert!(!gates.is_empty());
        assert!(gates.iter().all(|g| g["verdict"] == "PASS"));
    }
}

#[test]
fn verify_rejects_oversized_enumeration() {
    assert_eq!(code("verify --suite oracle --n-max 9"), Some(2));
}

#[test]
fn morse_demo_reproduces_example() {
    let out = run("morse-demo");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let expected =
        "2 -> 1,2\n3 -> 2,3\n4 -> 1,4\n5 -> 3,5\n4,5 -> 3,4,5\ncritical 1\ncritical 3,4\n";
    assert_eq!(text, expected);
}

#[test]
fn morse_demo_reads_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.txt");
    std::fs::write(&path, "3\n1 2\n1 3\n2 3\n").unwrap();
    let out = run_args(["morse-demo".as_ref(), "--graph".as_ref(), path.as_os_str()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2,3 -> 1,2,3"));
    assert!(text.ends_with("critical 1\n"));
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let args = "simulate --kind clique --n 12 --d 2 --p 0.5 --replicates 300 --seed 5";
    let (a, b) = (run(args), run(args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["verdicts"].as_array().unwrap().len(), 2);
    assert_eq!(v["run_spec"]["seed"], 5);
}

#[test]
fn seed_comes_from_environment() {
    let args = "simulate --kind link --n 10 --t-size 1 --d 1 --p 0.5 --replicates 50 --format csv";
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_cliquenorm"))
            .args(args.split_whitespace())
            .env("CLIQUENORM_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let explicit = run(&format!("{args} --seed 9")).stdout;
    assert_eq!(with_env("9"), explicit);
    assert_ne!(with_env("10"), explicit);
}

#[test]
fn csv_output_and_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let report = dir.path().join("report.json");
    let mut args: Vec<std::ffi::OsString> =
        "simulate --kind critical --n 10 --d 2 --p 0.5 --replicates 40 --samples"
            .split_whitespace()
            .map(Into::into)
            .collect();
    args.extend([
        samples.clone().into(),
        "--out".into(),
        report.clone().into(),
    ]);
    let out = run_args(args);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "{stderr}");
    let table = std::fs::read_to_string(&samples).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("T2,T3,W1,W2"));
    assert_eq!(lines.count(), 40);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["result"]["config"]["replicates"], 40);
}

#[test]
fn thread_cap_is_accepted() {
    let v = json("--threads 1 moments --kind link --n 4 --t-size 1 --d 1 --p 0.5");
    assert_eq!(floats(&v["result"]["mean"]), [1.5]);
}
