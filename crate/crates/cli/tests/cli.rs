use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newton-resolve")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().unwrap(), doc)
}

#[test]
fn analyze_examples() {
    let (code, d) = json(&["analyze", "-n", "2", "x1^2+x2^3"]);
    assert_eq!(code, 0);
    assert_eq!((d["d"].as_str(), d["k"].as_u64(), d["case"].as_str()), (Some("6/5"), Some(1), Some("a")));
    assert_eq!(d["result"]["prediction"]["certainty"], "exact");

    let (_, d) = json(&["analyze", "-n", "2", "x1*x2"]);
    assert_eq!((d["d"].as_str(), d["k"].as_u64()), (Some("1"), Some(0)));

    let (_, d) = json(&["analyze", "-n", "2", "x1^2-2*x1*x2+x2^2"]);
    assert_eq!(d["case"], "c");
    assert_eq!(d["result"]["prediction"]["s"], "2");
}

#[test]
fn charts_examples() {
    let (code, d) = json(&["charts", "-n", "2", "x1^2+x2^3"]);
    assert_eq!(code, 0);
    assert_eq!(d["chart_count"], 3);
    let checks = d["report"]["checks"].as_array().unwrap();
    let ratio = |s: &str| -> f64 {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap()
    };
    for c in checks {
        for r in c["distance"]["ratios"].as_array().unwrap() {
            assert!(ratio(r.as_str().unwrap()) <= 1.2 + 1e-12);
        }
    }
    // every chart uses the ray (3, 2), so each attains n - k = 1 equality
    assert!(checks.iter().all(|c| c["distance"]["equality_count"] == 1));

    let (_, d) = json(&["charts", "-n", "2", "x1*x2"]);
    assert_eq!(d["chart_count"], 1);
    // the identity up to the order of the chart coordinates
    let map = d["atlas"]["charts"][0]["map"].as_array().unwrap().clone();
    assert!(map == serde_json::json!([[1, 0], [0, 1]]).as_array().unwrap().clone()
        || map == serde_json::json!([[0, 1], [1, 0]]).as_array().unwrap().clone());
    assert_eq!(d["report"]["checks"][0]["distance"]["ratios"], serde_json::json!(["1", "1"]));

    let (code, d) = json(&["charts", "-n", "1", "x1^3"]);
    assert_eq!((code, d["chart_count"].as_u64()), (0, Some(1)));
}

#[test]
fn resolve_examples() {
    let (code, d) = json(&["resolve", "-n", "2", "x2^2-x1^3"]);
    assert_eq!(code, 0);
    assert_eq!(d["partial"], false);
    assert_eq!(d["report"]["leaves"], d["report"]["leaves_passed"]);

    let (code, d) = json(&["resolve", "-n", "1", "x1"]);
    assert_eq!((code, d["report"]["leaves"].as_u64()), (0, Some(1)));

    // (x1 - x2)^2 + x2^3 needs a sub-resolution below the fan step
    let (code, d) = json(&["resolve", "-n", "2", "x1^2 - 2*x1*x2 + x2^2 + x2^3", "--depth", "1"]);
    assert_eq!(code, 1);
    assert_eq!((d["partial"].as_bool(), d["verdict"].as_str()), (Some(true), Some("FAIL")));
}

#[test]
fn verify_padic_examples() {
    let (code, d) = json(&["verify", "padic", "-n", "2", "x1^2+x2^3", "--prime", "3", "--levels", "7"]);
    assert_eq!(code, 0);
    let slope = d["fits"][0]["fit"]["slope"].as_f64().unwrap();
    assert!((slope + 5.0 / 6.0).abs() <= 0.05, "{slope}");
    assert_eq!(d["brute_force_check"]["mismatches"], serde_json::json!([]));
    assert_eq!(d["exponential_sums"]["identity"]["passed"], true);

    let (code, d) = json(&["verify", "padic", "-n", "1", "x1", "--prime", "5", "--levels", "6"]);
    assert_eq!(code, 0);
    let want: Vec<String> = (1..=6).map(|l| format!("1/{}", 5u64.pow(l))).collect();
    assert_eq!(d["series"]["n_l"], serde_json::json!(want));
    assert_eq!(d["verdict"], "PASS");

    // 5^l | 5 x1  iff  5^(l-1) | x1
    let (_, d) = json(&["verify", "padic", "-n", "1", "x1", "--prime", "5", "--levels", "3", "--prescale", "1"]);
    assert_eq!(d["series"]["n_l"], serde_json::json!(["1", "1/5", "1/25"]));
    assert_eq!(d["prescale"], serde_json::json!([1]));
}

#[test]
fn verify_real_example() {
    let (code, d) = json(&["verify", "real", "-n", "2", "x1^2*x2^2", "--eps-sweep"]);
    assert_eq!(code, 0, "{d}");
    let fit = &d["fits"][0]["fit"];
    assert!((fit["slope"].as_f64().unwrap() - 0.5).abs() <= 0.05);
    assert_eq!(fit["log_power"], 1.0);
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "real", "-n", "2", "x1^2+x2^3", "--samples", "20000", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["charts", "-n", "2", "x1^2*x2+x1*x2^3", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let a = Command::new(env!("CARGO_BIN_EXE_newton-resolve"))
        .args(["verify", "padic", "-n", "2", "x1*x2", "--levels", "6"])
        .env("NEWTON_RESOLVE_THREADS", "1")
        .output()
        .unwrap();
    let b = run(&["verify", "padic", "-n", "2", "x1*x2", "--levels", "6", "--threads", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_and_table_view() {
    let dir = std::env::temp_dir().join(format!("newton-resolve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("padic.json");
    let p = path.to_str().unwrap();
    let out = run(&["verify", "padic", "-n", "1", "x1^2", "--prime", "2", "--levels", "20", "--out", p]);
    assert!(out.status.success() && out.stdout.is_empty());
    let table = run(&["report", p]);
    assert!(table.status.success());
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("5\t1/8"), "{text}");
    assert!(text.ends_with("verdict\tPASS\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["analyze", "-n", "2", "x1^^2"],
        vec!["analyze", "-n", "1", "x2"],
        vec!["analyze", "-n", "2", "1 + x1"],
        vec!["analyze", "x1"],
        vec!["verify", "padic", "-n", "1", "x1/2"],
        vec!["verify", "padic", "-n", "1", "x1", "--prime", "2", "--levels", "70"],
        vec!["report", "/nonexistent/report.json"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
