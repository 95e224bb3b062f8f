use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn entcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn estimate_point_mass_counts() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.tsv", "7\t100\n");
    let out = entcert(&[
        "estimate", "--input", &input, "--format", "counts", "--alpha", "2", "--h", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.ends_with(b"\n"));
    let v = json(&out);
    assert_eq!(f(&v, "estimate"), 0.0);
    let l1 = 0.2 + 6.0 * (80f64.ln() / 200.0).sqrt();
    let radius = 8f64.sqrt() * l1.sqrt();
    assert!((f(&v, "radius") - radius).abs() <= 1e-14 * radius);
    assert_eq!(v["n"], 100);
    let pre = v["preconditions"].as_array().unwrap();
    assert!(pre.iter().all(|p| p[1] == Value::Bool(true)));
}

#[test]
fn estimate_rejects_small_samples_with_min_n() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.txt", "1\n1\n2\n3\n");
    let out = entcert(&["estimate", "--input", &input, "--alpha", "2", "--h", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "insufficient_samples");
    assert_eq!(v["min_n"], 9);
}

#[test]
fn estimate_parse_error_names_the_line() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.txt", "1\n2\nabc\n");
    let out = entcert(&["estimate", "--input", &input, "--alpha", "2", "--h", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "parse");
    assert_eq!(v["line"], 3);
}

#[test]
fn estimate_alpha_grid_reports_candidates() {
    let dir = TempDir::new().unwrap();
    let body: String = (0..200).map(|i| format!("{}\n", i % 7)).collect();
    let input = write(&dir, "s.txt", &body);
    let out = entcert(&[
        "estimate",
        "--input",
        &input,
        "--alpha-grid",
        "2,4",
        "--h-table",
        "2=20,4=400",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    let candidates = v["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 2);
    let best = f(&v, "radius");
    for c in candidates {
        assert!(best <= c[2].as_f64().unwrap());
    }
}

#[test]
fn estimate_needs_exactly_one_h_source() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.txt", &"1\n".repeat(50));
    let none = entcert(&["estimate", "--input", &input, "--alpha", "2"]);
    assert_eq!(none.status.code(), Some(2));
    let both = entcert(&[
        "estimate",
        "--input",
        &input,
        "--alpha",
        "2",
        "--h",
        "1",
        "--h-from-support",
        "10",
    ]);
    assert_eq!(both.status.code(), Some(2));
    let support = entcert(&[
        "estimate",
        "--input",
        &input,
        "--alpha",
        "2",
        "--h-from-support",
        "10",
    ]);
    assert_eq!(support.status.code(), Some(0));
    let expected = 10f64.ln().powi(2) + (2.0 / std::f64::consts::E).powi(2);
    assert!((f(&json(&support), "h") - expected).abs() < 1e-12);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.txt", &"3\n".repeat(40));
    let config = write(
        &dir,
        "run.cfg",
        &format!("# certificate\ninput = {input}\nalpha = 2\nh = 5\ndelta = 0.05\n"),
    );
    let base = json(&entcert(&["estimate", "--config", &config]));
    let over = json(&entcert(&["estimate", "--config", &config, "--h", "50"]));
    assert_eq!(f(&base, "h"), 5.0);
    assert_eq!(f(&over, "h"), 50.0);
    assert!(f(&over, "radius") > f(&base, "radius"));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("table.csv");
    let out = entcert(&[
        "maxent",
        "--k-list",
        "2,3",
        "--alpha-list",
        "2",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(Path::new(&target)).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn maxent_rows_are_sandwiched() {
    let out = entcert(&["maxent", "--k-list", "2..20", "--alpha-list", "1,2.5"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap(),
        vec!["K", "alpha", "lower", "exact", "upper"]
    );
    let mut rows = 0;
    for record in reader.records() {
        let r = record.unwrap();
        let x: Vec<f64> = r.iter().map(|s| s.parse().unwrap()).collect();
        assert!(x[2] <= x[3] && x[3] <= x[4], "{x:?}");
        rows += 1;
    }
    assert_eq!(rows, 38);
    assert_eq!(entcert(&["maxent", "--k-list", "1"]).status.code(), Some(2));
}

#[test]
fn rates_csv_matches_library() {
    let out = entcert(&[
        "rates",
        "--family",
        "zeta",
        "--n-grid",
        "1000:100000:3",
        "--seed",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let zeta = entcert::dist::AnalyticDistribution::zeta(2.0).unwrap();
    let mut ns = Vec::new();
    for record in reader.records() {
        let r = record.unwrap();
        assert_eq!(&r[0], "zeta");
        assert_eq!(&r[1], "OUR");
        let n: u64 = r[2].parse().unwrap();
        let value: f64 = r[3].parse().unwrap();
        let direct = entcert::bounds::our_rate_bound(&zeta, None, n)
            .unwrap()
            .value;
        assert_eq!(value, direct);
        assert!(r[4].contains("seed=4"));
        ns.push(n);
    }
    assert_eq!(ns, vec![1000, 10_000, 100_000]);
    assert_eq!(
        entcert(&["rates", "--family", "uniform"]).status.code(),
        Some(2)
    );
}

#[test]
fn coverage_is_deterministic() {
    let args = [
        "coverage", "--family", "mixture", "--n", "300", "--trials", "40", "--seed", "11",
    ];
    let a = entcert(&args);
    let b = entcert(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for key in [
        "trials",
        "violations",
        "violation_rate",
        "delta",
        "radius_mean",
        "radius_stddev",
        "seed",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["seed"], 11);
}

#[test]
fn lowerbound_reports() {
    let noemp = entcert(&["lowerbound", "--kind", "noemp", "--h", "1.5", "--n", "4"]);
    assert_eq!(noemp.status.code(), Some(0));
    let v = json(&noemp);
    assert_eq!(v["s"], 7989);
    assert!((f(&v, "kl") - (8f64 / 7.0).ln()).abs() < 1e-15);
    assert_eq!(v["gap_at_least_half_h"], true);

    let minimax = json(&entcert(&[
        "lowerbound",
        "--kind",
        "minimax",
        "--alpha",
        "1",
        "--n",
        "100",
    ]));
    assert!((f(&minimax, "h") - 3.0 * 100f64.ln()).abs() < 1e-13);
    assert!(f(&minimax, "no_collision") >= 0.5);

    let huge = entcert(&["lowerbound", "--kind", "noemp", "--h", "30", "--n", "8"]);
    assert_eq!(huge.status.code(), Some(2));
    assert_eq!(json(&huge)["error"], "unrepresentable");
}

#[test]
fn usage_errors_are_json() {
    for args in [&["bogus"][..], &["estimate", "--nope", "1"][..]] {
        let out = entcert(args);
        assert_eq!(out.status.code(), Some(2));
        assert_eq!(json(&out)["error"], "usage");
    }
    assert_eq!(entcert(&["--help"]).status.code(), Some(0));
}
