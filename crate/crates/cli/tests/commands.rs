use std::process::Command;

use qhmod_cli::{
    analyze, classify_batch, equiv, foliation_check, resolve, ClassRecord, ConventionArg, FoliationInput, OutputFormat,
    RunConfig,
};

fn cfg(format: OutputFormat) -> RunConfig {
    RunConfig {
        format,
        ..RunConfig::default()
    }
}

fn text() -> RunConfig {
    cfg(OutputFormat::Text)
}

#[test]
fn analyze_cusp() {
    let out = analyze("y^2-x^3", &cfg(OutputFormat::Json)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stratum_label"], "(2,3,1)");
    assert_eq!(v["graph"]["self_intersections"], serde_json::json!([-3, -1, -2]));
    assert_eq!(v["graph"]["principal"], 2);
}

#[test]
fn analyze_node() {
    let out = analyze("x*y", &cfg(OutputFormat::Json)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stratum"], serde_json::json!({"type": "Type11", "n": 2}));
    assert_eq!(v["graph"]["components"], 1);
    assert_eq!(v["points"][0]["re"], 0.0);
    assert_eq!(v["points"][1]["infinite"], true);
}

#[test]
fn analyze_rejects_mixed_weights() {
    let e = analyze("y^2-x^3-x^2", &text()).unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("not quasi-homogeneous"));
    assert_eq!(analyze("y^2-", &text()).unwrap_err().code, 2);
    assert_eq!(analyze("(y^2-x^3)^2", &text()).unwrap_err().code, 2);
}

#[test]
fn equiv_three_lines() {
    let o = equiv("x*(y-x)*(y+x)", "(y-2x)*(y-3x)*(y-5x)", &text());
    assert_eq!(o.code, 0, "{o:?}");
    assert!(o.stdout.starts_with("equivalent: true"));
}

#[test]
fn equiv_scaled_cusp() {
    let o = equiv("(y^2-x^3)", "(y^2-4x^3)", &text());
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("T(x, y) = (x, 2*y)"), "{}", o.stdout);
    assert!(o.stdout.contains("alpha: 4\n"));
}

#[test]
fn equiv_negative() {
    let o = equiv("(y^2-x^3)*(y^2-2x^3)", "(y^2-x^3)*(y^2-3x^3)", &text());
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("equivalent: false"));
}

#[test]
fn equiv_across_swap() {
    let o = equiv("x^2-y^3", "y^2-x^3", &cfg(OutputFormat::Json));
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["map"], serde_json::json!(["y", "x"]));
}

#[test]
fn equiv_ambiguity_has_own_code() {
    // roots 1e-8 apart in relative terms sit inside the ambiguity band
    let o = equiv(
        "(y^2-x^3)*(y^2-2x^3)",
        "(y^2-x^3)*(y^2-200000001/100000000*x^3)",
        &text(),
    );
    assert_eq!(o.code, 3, "{o:?}");
}

#[test]
fn resolve_formats() {
    let dot = resolve("y^2-x^3", &cfg(OutputFormat::Dot)).unwrap();
    assert!(dot.starts_with("graph resolution {"));
    assert!(dot.contains("D2 [shape=doublecircle"));
    let json = resolve("y^2-x^3", &cfg(OutputFormat::Json)).unwrap();
    let g = qhmod_core::resolution::parse_graph_json(&json).unwrap();
    assert_eq!(g.self_intersections(), vec![-3, -1, -2]);
    assert!(resolve("y^2-x^3", &text()).unwrap().contains("edges: D1-D2 D2-D3"));
}

#[test]
fn batch_examples() {
    let o = classify_batch("y^2-x^3\ny^2-4x^3\ny^2-x^5\n", &text());
    assert_eq!(o.code, 0);
    let records: Vec<ClassRecord> = o.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].members.len(), 2);

    let empty = classify_batch("", &text());
    assert_eq!((empty.stdout.as_str(), empty.code), ("", 0));

    let bad = classify_batch("# corpus\ny^2-x^3\ny^2-x^3-x^2\n", &text());
    assert_eq!(bad.code, 2);
    assert_eq!(bad.stderr, "line 3: not quasi-homogeneous\n");
    assert_eq!(bad.stdout.lines().count(), 1);
}

#[test]
fn batch_ignores_line_order() {
    let lines = [
        "y^2-x^3",
        "x*y*(y-x)",
        "y^3-x^4",
        "y^2-9x^3",
        "(y-x)*(y-2x)*(y-3x)*(y-4x)",
        "(y-x)*(y-2x)*(y-3x)*(y+x)",
    ];
    let forward = classify_batch(
        &lines.join("\n"),
        &RunConfig {
            jobs: Some(1),
            ..text()
        },
    );
    let mut rev = lines;
    rev.reverse();
    let backward = classify_batch(
        &rev.join("\n"),
        &RunConfig {
            jobs: Some(3),
            ..text()
        },
    );
    assert_eq!(forward, backward);
}

#[test]
fn foliation_examples() {
    let pair = foliation_check(&FoliationInput::Pair(2, 3), &text());
    assert_eq!(pair.code, 0);
    assert!(pair.stdout.ends_with("all checks pass\n"));
    let curve = foliation_check(&FoliationInput::Curve("y^2-x^3".into()), &text());
    assert_eq!(curve.stdout, pair.stdout);
    assert_eq!(foliation_check(&FoliationInput::Pair(2, 4), &text()).code, 2);
    let residue = RunConfig {
        cs_convention: ConventionArg::Residue,
        ..text()
    };
    assert_eq!(foliation_check(&FoliationInput::Pair(2, 3), &residue).code, 4);
}

fn qhmod(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_qhmod")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn binary_exit_codes() {
    assert_eq!(qhmod(&["analyze", "y^2-x^3"]).1, 0);
    assert_eq!(qhmod(&["analyze", "y^2-x^3-x^2"]).1, 2);
    assert_eq!(qhmod(&["equiv", "(y^2-x^3)*(y^2-2x^3)", "(y^2-x^3)*(y^2-3x^3)"]).1, 1);
    assert_eq!(qhmod(&["foliation-check", "--pq", "2", "4"]).1, 2);
    assert_eq!(qhmod(&["analyze", "y^2-x^3", "--order", "1"]).1, 2);
    assert_eq!(qhmod(&["analyze", "y^2-x^3", "--tolerance", "-1"]).1, 2);
    assert_eq!(qhmod(&["no-such-command"]).1, 2);
}

#[test]
fn binary_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cusp.dot");
    let (stdout, code) = qhmod(&[
        "resolve",
        "y^2-x^3",
        "--format",
        "dot",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!((stdout.as_str(), code), ("", 0));
    assert!(std::fs::read_to_string(&path).unwrap().contains("D1 -- D2;"));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qhmod"))
        .args(["equiv", "(y^2-x^3)*(y^2-2x^3)", "(y^2-x^3)*(y^2-2001/1000*x^3)"])
        .env("QHMOD_TOLERANCE", "0.1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
