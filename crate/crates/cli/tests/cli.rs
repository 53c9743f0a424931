use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bagley-torvik"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn default_solve_writes_two_hundred_rows_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("y.csv");
    let o = run(&["solve", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# bagley-torvik solve"));
    assert!(text.contains("# config-sha256 "));
    assert!(text.lines().any(|l| l == "t,y,yc,yf"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[199][0], 10.0);
    let meta = read_json(&dir.path().join("y.csv.json"));
    assert!(meta["wall_time"].as_f64().unwrap() >= 0.0);
    assert_eq!(meta["points"], 200);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (p, q) = (dir.path().join("p.csv"), dir.path().join("q.csv"));
    let args = ["solve", "--force", "besselj0:1", "--y0", "1", "--v0", "-0.5", "--n", "50"];
    for out in [&p, &q] {
        let mut a = args.to_vec();
        a.extend(["--out", path_str(out)]);
        assert_eq!(code(&run(&a)), 0);
    }
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
}

#[test]
fn zero_force_and_zero_data_give_zero() {
    let o = run(&["solve", "--force", "zero", "--n", "20"]);
    assert_eq!(code(&o), 0);
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r[1] == 0.0));
}

#[test]
fn malformed_config_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\"a\": 1.3, ").unwrap();
    let out = dir.path().join("y.csv");
    let o = run(&["solve", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn invalid_values_exit_two() {
    for args in [
        vec!["solve", "--a", "0"],
        vec!["solve", "--force", "sin:1"],
        vec!["solve", "--method", "euler"],
        vec!["solve", "--n", "0"],
        vec!["solve", "--method", "finite-difference", "--t-min", "1"],
        vec!["solve", "--method", "arora-series"],
    ] {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
}

#[test]
fn dumped_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("c1.json");
    let second = dir.path().join("c2.json");
    let o = run(&[
        "solve", "--c", "-2", "--force", "power:1,0,2,0.5", "--v0", "0.25", "--method", "podlubny-series",
        "--dump-config", "--out", path_str(&first),
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["solve", "--config", path_str(&first), "--dump-config", "--out", path_str(&second)]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(&first), read_json(&second));
    assert_eq!(read_json(&first)["c"], -2.0);
}

#[test]
fn config_file_keys_override_defaults_and_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"force": "constant:2", "grid": {"n_points": 7}}"#).unwrap();
    let o = run(&["solve", "--config", path_str(&cfg), "--n", "3", "--dump-config"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["force"], "constant:2");
    assert_eq!(v["grid"]["n_points"], 3);
    assert_eq!(v["grid"]["t_max"], 10.0);
}

#[test]
fn numerical_failure_exits_three_and_names_the_time() {
    let o = run(&["solve", "--method", "podlubny-series", "--n", "4"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("t = 10"));
}

#[test]
fn compare_needs_two_methods() {
    assert_eq!(code(&run(&["compare", "--method", "closed-form"])), 2);
}

#[test]
fn compare_against_finite_differences() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    let o = run(&[
        "compare", "--method", "closed-form,finite-difference", "--force", "besselj0:1", "--out", path_str(&out),
    ]);
    assert_eq!(code(&o), 0);
    let meta = read_json(&dir.path().join("cmp.csv.json"));
    let fd = &meta["methods"][1];
    assert_eq!(fd["method"], "finite-difference");
    assert!(fd["max_abs_deviation"].as_f64().unwrap() <= 2e-2);
    assert_eq!(data_rows(&std::fs::read_to_string(&out).unwrap())[0].len(), 3);

    let o = run(&["compare", "--method", "closed-form,finite-difference", "--force", "besselj0:1", "--y0", "1", "--v0", "1"]);
    let report = String::from_utf8(o.stdout).unwrap();
    let line = report.lines().find(|l| l.starts_with("finite-difference")).unwrap();
    let dev: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(dev > 0.1, "{line}");
    assert!(line.contains("nonzero initial conditions"));
}

#[test]
fn compare_flags_series_divergence() {
    let o = run(&[
        "compare", "--method", "closed-form,arora-series", "--force", "power:1,0,1,0.5", "--y0", "1", "--v0", "1",
    ]);
    assert_eq!(code(&o), 0);
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(report.contains("known divergence for t >~ 3"), "{report}");
}

#[test]
fn roots_report() {
    let o = run(&["roots"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for ell in ["0", "-1", "-2"] {
        assert!(v["weights"][ell].as_f64().unwrap().abs() <= 1e-10);
    }
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-12));
    assert!(v["intermediates"]["T_plus"]["re"].is_number());

    let o = run(&["roots", "--a", "1", "--b", "0", "--c", "-1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut got: Vec<(f64, f64)> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap()))
        .collect();
    got.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let want = [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)];
    for (g, w) in got.iter().zip(want) {
        assert!((g.0 - w.0).abs() < 1e-14 && (g.1 - w.1).abs() < 1e-14, "{got:?}");
    }

    assert_eq!(code(&run(&["roots", "--a", "0"])), 3);
}

#[test]
fn bench_orders_methods() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.json");
    let o = run(&["bench", "--force", "sin:1,2.5", "--t-max", "4", "--n", "8", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["y0"], 1.0);
    assert!(v["results"][0]["chi"].as_f64().unwrap() > 1.0);
    assert!(v["machine"]["os"].is_string());
    assert_eq!(code(&run(&["bench", "--force", "pulse:1,1"])), 2);
}

#[test]
fn asymptotics_columns() {
    let o = run(&["asymptotics", "--force", "constant:1", "--t-max", "100", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    let last = rows.last().unwrap();
    assert!(((last[3] - last[1]) / last[1]).abs() < 0.1);

    // no large-time form for a pulse; that column is NaN
    let o = run(&["asymptotics", "--force", "pulse:1,1", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().last().unwrap().ends_with("NaN"));
}
