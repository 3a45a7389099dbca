use std::process::{Command, Output};

use serde_json::Value;

fn racg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stderr(out)))
}

fn temp_path(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("racg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn profile_of_the_pentagon_has_one_exceptional_value() {
    let out = racg(&["profile", "--preset", "cycle(5)", "--range", "-4/1:-1/1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "profile");
    assert_eq!(report["config"]["graph"]["k"], 5);
    assert!(report["version_hash"]
        .as_str()
        .is_some_and(|h| h.len() == 16));
    let profile = &report["result"]["profile"];
    let exceptional = profile["exceptional"].as_array().unwrap();
    assert_eq!(exceptional.len(), 1);
    let golden = -(1.0 + 5f64.sqrt()) / 2.0;
    assert!((exceptional[0]["approx"].as_f64().unwrap() - golden).abs() < 1e-6);
    let segments = profile["segments"].as_array().unwrap();
    assert_eq!(segments.len(), 2);
    assert_ne!(segments[0]["signature"], segments[1]["signature"]);
    assert_eq!(report["result"]["suggested_interval"], segments[0]);
}

#[test]
fn profile_of_free3_has_no_exceptional_values() {
    let report = json(&racg(&["profile", "--preset", "free(3)"]));
    let profile = &report["result"]["profile"];
    assert!(profile["exceptional"].as_array().unwrap().is_empty());
    assert_eq!(profile["range"][1], "-1");
    assert_eq!(profile["segments"].as_array().unwrap().len(), 1);
}

#[test]
fn profile_csv_lists_segments() {
    let out = racg(&[
        "profile", "--preset", "cycle(5)", "--range", "-4:-1", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("lo,hi,"));
}

#[test]
fn usage_errors_exit_with_config_code() {
    for args in [
        &["profile", "--range", "1/x:2"][..],
        &["profile", "--range", "-1:-4"],
        &["rep", "--t", "abc"],
        &["verify", "--t", "-2"],
        &["bogus"],
        &[],
        &["coloring"],
        &["coloring", "--kgon", "6", "--120cell"],
        &["perron", "--format", "csv"],
        &["rep", "--t", "-2", "--word", "1.4"],
        &["profile", "--preset", "cycle(5)", "--graph", "x.json"],
        &["profile", "--graph", "/nonexistent/graph.json"],
        &["perron", "--preset", "complete2(3)"],
    ] {
        assert_eq!(code(&racg(args)), 3, "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&racg(&["--help"])), 0);
    assert_eq!(code(&racg(&["--version"])), 0);
    assert_eq!(code(&racg(&["verify", "--help"])), 0);
}

#[test]
fn verify_free3_passes() {
    let out = racg(&[
        "verify", "--preset", "free(3)", "--t", "-2/1", "--s", "-19/10", "--len", "6",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["verdict"], "pass");
    let result = &report["result"];
    for (name, verdict) in result["verdicts"].as_object().unwrap() {
        assert_eq!(verdict, "pass", "{name}");
    }
    assert!(result["map"]["max_ratio"].as_f64().unwrap() < 1.0);
    assert!(result["vector_field"]["max_ratio"].as_f64().unwrap() < 0.0);
    assert_eq!(result["orbit_size"], 190);
    assert_eq!(report["config"]["args"]["s"], "-19/10");
}

#[test]
fn verify_at_equal_parameters_warns_and_has_unit_ratios() {
    let out = racg(&["verify", "--t", "-2/1", "--s", "-2/1", "--len", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("t equals s"));
    let report = json(&out);
    assert!(!report["warnings"].as_array().unwrap().is_empty());
    let map = &report["result"]["map"];
    for key in ["max_ratio", "max_ratio_all"] {
        assert!((map[key].as_f64().unwrap() - 1.0).abs() < 1e-12, "{key}");
    }
    for pair in map["worst_pairs"].as_array().unwrap() {
        let ratio = pair["value"].as_f64().unwrap() / pair["d_before"].as_f64().unwrap();
        assert!((ratio - 1.0).abs() < 1e-12);
    }
}

#[test]
fn verify_refuses_straddling_parameters() {
    let out = racg(&[
        "verify", "--preset", "cycle(5)", "--t", "-2/1", "--s", "-3/2",
    ]);
    assert_eq!(code(&out), 3);
    let msg = stderr(&out);
    assert!(msg.contains("straddle"), "{msg}");
    // The isolating interval printed brackets the golden ratio.
    let interval = msg
        .split('[')
        .nth(1)
        .and_then(|r| r.split(']').next())
        .expect("interval printed");
    let ends: Vec<f64> = interval
        .split(", ")
        .map(|q| {
            let (n, d) = q.split_once('/').unwrap();
            n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
        })
        .collect();
    let golden = -(1.0 + 5f64.sqrt()) / 2.0;
    assert!(ends[0] < golden && golden < ends[1]);
}

#[test]
fn verify_rejects_reversed_and_exceptional_parameters() {
    assert_eq!(code(&racg(&["verify", "--t", "-19/10", "--s", "-2"])), 3);
    assert_eq!(code(&racg(&["verify", "--t", "-1/2", "--s", "-1/4"])), 3);
}

#[test]
fn small_orbit_is_a_numerical_failure() {
    let out = racg(&["verify", "--t", "-2", "--s", "-19/10", "--len", "1"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("orbit too small"));
}

#[test]
fn verify_reports_are_byte_identical() {
    let args = [
        "verify", "--preset", "cycle(5)", "--t", "-5/2", "--s", "-12/5", "--len", "4", "--seed",
        "7",
    ];
    let first = racg(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "1"]);
    let second = racg(&with_workers);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["config"]["common"]["seed"], 7);
}

#[test]
fn verify_writes_csv_and_svg() {
    let base = ["verify", "--t", "-2", "--s", "-19/10", "--len", "4"];
    let csv = racg(&[&base[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("kind,a,b,d_before,value\n"));
    assert!(text.lines().any(|l| l.starts_with("map,")));
    assert!(text.lines().any(|l| l.starts_with("vector_field,")));
    let path = temp_path("scatter.svg");
    let svg = racg(&[&base[..], &["--format", "svg", "--out", &path]].concat());
    assert_eq!(code(&svg), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("<circle"));
}

#[test]
fn coloring_120cell_counts() {
    let out = racg(&["coloring", "--120cell"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &json(&out)["result"];
    assert_eq!(result["vectors"], 120);
    assert_eq!(result["degree"], 12);
    assert_eq!(result["edges"], 720);
    assert_eq!(
        result["coloring"]["class_sizes"],
        serde_json::json!([24, 24, 24, 24, 24])
    );
}

#[test]
fn coloring_kgon_respects_the_lipschitz_bound() {
    let out = racg(&["coloring", "--kgon", "6", "--t", "0.3", "--s", "0.4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let result = &json(&out)["result"];
    let bound = 0.3f64.cosh() / 0.4f64.cosh();
    assert!((result["lipschitz_constant"].as_f64().unwrap() - bound).abs() < 1e-15);
    assert!(result["empirical_ratio"].as_f64().unwrap() <= bound + 1e-6);
    assert!(result["orthogonality_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn coloring_odd_kgon_is_obstructed() {
    let out = racg(&["coloring", "--kgon", "5"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("odd cycle"));
}

#[test]
fn coloring_margulis_passes() {
    let out = racg(&["coloring", "--margulis", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["report"]["verdict"], "pass");
}

#[test]
fn export_graph_round_trip_is_idempotent() {
    let first = racg(&["export", "graph", "--preset", "cycle(6)"]);
    let path = temp_path("graph.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = racg(&["export", "graph", "--graph", &path]);
    assert_eq!(first.stdout, second.stdout);
    let rep_preset = racg(&["export", "rep", "--preset", "cycle(6)", "--t", "-3"]);
    let rep_file = racg(&["export", "rep", "--graph", &path, "--t", "-3"]);
    assert_eq!(code(&rep_file), 0);
    assert_eq!(rep_preset.stdout, rep_file.stdout);
}

#[test]
fn export_identity_word_gives_identity_and_zero() {
    let rep = json(&racg(&["export", "rep", "--t", "-2", "--word", "e"]));
    assert_eq!(rep["schema"], 1);
    let k = 3;
    for i in 0..k {
        for j in 0..k {
            assert_eq!(rep["matrix"][i][j], if i == j { "1" } else { "0" });
            let x = rep["normalized"][i][j].as_f64().unwrap();
            assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    let cocycle = json(&racg(&["export", "cocycle", "--t", "-2", "--len", "2"]));
    assert_eq!(cocycle["schema"], 1);
    for row in cocycle["entries"]["e"].as_array().unwrap() {
        assert!(row
            .as_array()
            .unwrap()
            .iter()
            .all(|x| x.as_f64() == Some(0.0)));
    }
    assert_eq!(cocycle["entries"].as_object().unwrap().len(), 1 + 3 + 6);
}

#[test]
fn export_requires_a_parameter_for_matrices() {
    assert_eq!(code(&racg(&["export", "rep"])), 3);
    assert_eq!(code(&racg(&["export", "cocycle"])), 3);
}

#[test]
fn rep_perron_orbit_and_cocycle_reports() {
    let rep = json(&racg(&[
        "rep", "--preset", "cycle(5)", "--t", "-5/2", "--word", "1.3",
    ]));
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["result"]["signature"], serde_json::json!([2, 3]));
    let perron = json(&racg(&["perron"]));
    assert!((perron["result"]["lambda_pf"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let orbit = json(&racg(&["orbit", "--t", "-2", "--len", "2"]));
    assert_eq!(orbit["result"]["count"], 10);
    let cocycle = json(&racg(&["cocycle", "--t", "-2", "--len", "3"]));
    assert_eq!(cocycle["verdict"], "pass");
    assert!(cocycle["result"]["identity_residual"].as_f64().unwrap() < 1e-9);
}
