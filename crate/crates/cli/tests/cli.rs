use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tropcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropcycle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn examples(dir: &Path, name: &str, n: &str) -> PathBuf {
    let out = dir.join(name);
    let o = tropcycle(&["examples", name, "--n", n, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn input(name: &str, path: &Path) -> String {
    format!("{name}={}", path.display())
}

const LINE: &str = r#"{"ambient": 2, "dim": 1, "cells": [
  {"poly": {"dim": 2, "ineqs": [["1","0","0"]], "eqs": [["0","1","0"]]}, "weight": 1},
  {"poly": {"dim": 2, "ineqs": [["0","1","0"]], "eqs": [["1","0","0"]]}, "weight": 1},
  {"poly": {"dim": 2, "ineqs": [["-1","0","0"]], "eqs": [["1","-1","0"]]}, "weight": 1}]}"#;

#[test]
fn selfintersection_degree_on_origin_component() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "selfintersection-n", "3");
    let curve = fx.join("curve.json");
    let o = tropcycle(&[
        "stable-intersect",
        "--in",
        &input("a", &curve),
        "--in",
        &input("b", &curve),
        "--component",
        "0,0",
        "--degree",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn selfinter_ex_component_degree() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "selfinter-ex", "1");
    let o = tropcycle(&[
        "stable-intersect",
        "--in",
        &input("a", &fx.join("curve.json")),
        "--in",
        &input("b", &fx.join("line.json")),
        "--component",
        "1,1",
        "--degree",
    ]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = tropcycle(&[
        "mw",
        "--op",
        "degree",
        "--in",
        &input("fan", &fx.join("fan.json")),
        "--in",
        &input("a", &fx.join("curve.json")),
        "--in",
        &input("b", &fx.join("line.json")),
    ]);
    assert_eq!(stdout(&o).trim(), "4");
    let expected: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fx.join("expected.json")).unwrap()).unwrap();
    assert_eq!(expected["expected"]["stable"], 2);
    assert_eq!(expected["expected"]["mw"], 4);
}

#[test]
fn axes_meet_once() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", r#"{"ambient": 2, "dim": 1, "cells": [{"poly": {"dim": 2, "eqs": [["0","1","0"]]}, "weight": 1}]}"#);
    let y = write(dir.path(), "y.json", r#"{"ambient": 2, "dim": 1, "cells": [{"poly": {"dim": 2, "eqs": [["1","0","0"]]}, "weight": 1}]}"#);
    let o = tropcycle(&["stable-intersect", "--in", &format!("x={x}"), "--in", &format!("y={y}")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 0);
    assert_eq!(v["cells"][0]["weight"], 1);
}

#[test]
fn tp3_compactified_degrees() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "tp3", "1");
    let run = |f: &str| {
        let o = tropcycle(&[
            "compactified",
            "--in",
            &input("gamma", &fx.join("line.json")),
            "--in",
            &input("S", &fx.join(f)),
            "--in",
            &input("fan", &fx.join("fan.json")),
            "--degree",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["frame"].as_array().unwrap().len(), 3);
        v["degree"].as_i64().unwrap()
    };
    assert_eq!(run("coordinate_plane.json"), 0);
    assert_eq!(run("plane.json"), 1);
}

#[test]
fn incompatible_boundary_exits_with_3() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "tp3", "1");
    let point = write(dir.path(), "p.json", r#"{"ambient": 2, "dim": 0, "cells": [{"poly": {"dim": 2, "eqs": [["1","0","0"],["0","1","0"]]}, "weight": 1}]}"#);
    let o = tropcycle(&[
        "compactified",
        "--in",
        &format!("gamma={point}"),
        "--in",
        &input("S", &fx.join("coordinate_plane.json")),
        "--in",
        &input("fan", &fx.join("fan.json")),
        "--tau",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["cone"].is_array());
    assert!(v["polyhedron"].is_object());
}

#[test]
fn zero_cone_matches_stable_intersect() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "bezout-2-2", "1");
    let stable = tropcycle(&[
        "stable-intersect",
        "--in",
        &input("a", &fx.join("first.json")),
        "--in",
        &input("b", &fx.join("second.json")),
    ]);
    let comp = tropcycle(&[
        "compactified",
        "--in",
        &input("gamma", &fx.join("first.json")),
        "--in",
        &input("S", &fx.join("second.json")),
        "--in",
        &input("fan", &fx.join("fan.json")),
    ]);
    let a: serde_json::Value = serde_json::from_str(&stdout(&stable)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&comp)).unwrap();
    assert_eq!(a, b["cycle"]);
}

#[test]
fn hypersurface_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"ambient": 2, "terms": [{"exp": ["1","0"], "val": "0"}, {"exp": ["0","1"], "val": "0"}, {"exp": ["0","0"], "val": "0"}]}"#,
    );
    let o = tropcycle(&["hypersurface", "--in", &format!("f={f}")]);
    assert!(o.status.success());
    let ours = write(dir.path(), "ours.json", &stdout(&o));
    let o = tropcycle(&["validate", "--in", &format!("c={ours}")]);
    assert!(o.status.success());
    let back = tropcycle::json::parse_cycle(&fs::read_to_string(&ours).unwrap()).unwrap();
    assert!(back.equals(&tropcycle::json::parse_cycle(LINE).unwrap()));

    let single = write(dir.path(), "s.json", r#"{"ambient": 2, "terms": [{"exp": ["1","1"], "val": "3"}]}"#);
    assert_eq!(tropcycle(&["hypersurface", "--in", &format!("f={single}")]).status.code(), Some(2));
}

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "line.json", LINE);
    let o = tropcycle(&["validate", "--in", &format!("c={good}")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"ok\": true"));

    let unbalanced = write(
        dir.path(),
        "two.json",
        r#"{"ambient": 2, "dim": 1, "cells": [
  {"poly": {"dim": 2, "ineqs": [["1","0","0"]], "eqs": [["0","1","0"]]}, "weight": 1},
  {"poly": {"dim": 2, "ineqs": [["0","1","0"]], "eqs": [["1","0","0"]]}, "weight": 1}]}"#,
    );
    let o = tropcycle(&["validate", "--in", &format!("c={unbalanced}")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("\"check\": \"balancing\""));

    let fan = write(dir.path(), "fan.json", r#"{"ambient": 2, "rays": [["1","0"],["0","1"]], "cones": [[], [0], [0, 1]]}"#);
    let o = tropcycle(&["validate", "--in", &format!("f={fan}")]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"][0]["check"], "face-closure");
    assert_eq!(v["checks"][0]["pass"], false);

    let numbers = write(dir.path(), "n.json", "{\"dim\": 1,\n \"ineqs\": [[1, 0]]}");
    let o = tropcycle(&["validate", "--in", &format!("p={numbers}")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn mw_commands() {
    let dir = TempDir::new().unwrap();
    let fan = write(
        dir.path(),
        "p2.json",
        r#"{"ambient": 2, "rays": [["1","0"],["0","1"],["-1","-1"]], "cones": [[], [0], [1], [2], [0,1], [1,2], [0,2]]}"#,
    );
    let line = write(dir.path(), "line.json", LINE);
    let o = tropcycle(&["mw", "--op", "from-cycle", "--in", &format!("fan={fan}"), "--in", &format!("l={line}")]);
    assert!(o.status.success());
    let class = write(dir.path(), "class.json", &stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["codim"], 1);
    assert!(v["values"].as_array().unwrap().iter().all(|x| x["w"] == 1));

    let o = tropcycle(&["mw", "--op", "degree", "--in", &format!("a={class}"), "--in", &format!("b={class}")]);
    assert_eq!(stdout(&o).trim(), "1");

    let other = write(
        dir.path(),
        "other.json",
        r#"{"fan": {"ambient": 2, "rays": [["1","0"],["-1","0"],["0","1"],["0","-1"]], "cones": [[], [0], [1], [2], [3], [0,2], [0,3], [1,2], [1,3]]}, "codim": 1, "values": [{"cone": [0], "w": 1}, {"cone": [1], "w": 1}]}"#,
    );
    let o = tropcycle(&["mw", "--op", "product", "--in", &format!("a={class}"), "--in", &format!("b={other}")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plot_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let fx = examples(dir.path(), "selfintersection-n", "2");
    let svg = dir.path().join("a.svg");
    let args = ["plot", "--in", &input("c", &fx.join("curve.json")), "--out", svg.to_str().unwrap()];
    assert!(tropcycle(&args).status.success());
    let first = fs::read_to_string(&svg).unwrap();
    assert!(tropcycle(&args).status.success());
    assert_eq!(first, fs::read_to_string(&svg).unwrap());
    assert!(first.contains(">2</text>"));
    assert!(first.contains("ray (0, 1)</title>"));

    let line = write(dir.path(), "line.json", LINE);
    let o = tropcycle(&["plot", "--in", &format!("a={line}"), "--in", &input("b", &fx.join("curve.json")), "--bbox", "-3,-3,3,3"]);
    let svg = stdout(&o);
    assert!(svg.contains("class=\"cycle-0\"") && svg.contains("class=\"cycle-1\""));

    let o = tropcycle(&["examples", "tp3", "--out", dir.path().join("tp3").to_str().unwrap()]);
    assert!(o.status.success());
    let o = tropcycle(&["plot", "--in", &input("p", &dir.path().join("tp3/plane.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixture_files_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in ["selfintersection-n", "selfinter-ex", "tp3", "bezout-2-2"] {
        let fx = examples(dir.path(), name, "2");
        for entry in fs::read_dir(&fx).unwrap() {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(tropcycle::json::to_canonical_string(&v), text, "{}", path.display());
        }
    }
    assert_eq!(tropcycle(&["examples", "nope"]).status.code(), Some(2));
}
