use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use trop_cli::run;
use trop_core::json::{ConewisePolyJson, WeightedFanJson};
use trop_core::polytope::PolytopeJson;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn trop(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_trop")).args(args).env_remove("TROP_SEED").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["trop"];
    full.extend_from_slice(args);
    let o = run(full);
    (o.status, serde_json::from_str(&o.output).unwrap_or(Value::Null))
}

#[test]
fn mixed_volume_of_segments() {
    let (code, out, _) = trop(&["mixed-volume", &fixture("segments.json")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!({"polarization": "1", "facet": "1", "delta": "1"}));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["polarization", "facet", "delta"]);
}

#[test]
fn plane_example_passes() {
    let (code, out, _) = trop(&["verify", "plane-example"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap(), serde_json::json!({"value": "-1", "pass": true}));
}

#[test]
fn balance_check_reports_violating_face() {
    let fan = r#"{"dim":2,"codim":1,"degree":0,"cones":[
        {"rays":[[1,0]],"frame":[[0,1]],"weight":{"monomials":[[[0,0],"1"]]}},
        {"rays":[[0,1]],"frame":[[1,0]],"weight":{"monomials":[[[0,0],"1"]]}}]}"#;
    let (code, v) = json_of(&["balance-check", fan]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], Value::Bool(false));
    let face = &v["violations"][0]["face"];
    assert_eq!(face["rays"], serde_json::json!([]));
}

#[test]
fn corner_locus_is_balanced_and_renders() {
    let (code, v) = json_of(&["corner-locus", &fixture("square_support.json")]);
    assert_eq!(code, 0, "{v}");
    assert!(!v["cones"].as_array().unwrap().is_empty());
    let s = serde_json::to_string(&v).unwrap();
    let (code, b) = json_of(&["balance-check", &s]);
    assert_eq!(code, 0, "{b}");
    let (code, svg, _) = trop(&["render", &s]);
    assert_eq!(code, 0);
    assert_eq!(svg.matches("<line ").count(), 4);
    assert_eq!(svg.matches(">1</text>").count(), 4);
}

#[test]
fn render_tropical_line_and_empty_fan() {
    let (code, svg, _) = trop(&["render", &fixture("tropical_line.json"), "--window=-2,-2,2,2"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<line ").count(), 3);
    assert!(svg.contains(r#"<line x1="0.000000" y1="0.000000" x2="2.000000" y2="-2.000000"/>"#));
    let (code, svg, _) = trop(&["render", &fixture("empty.json")]);
    assert_eq!(code, 0);
    assert!(svg.contains("<g class=\"fan\""));
    assert!(!svg.contains("<line"));
    assert!(svg.trim_end().ends_with("</svg>"));
    let (code, _, err) = trop(&["render", &fixture("plane_line.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("dimension"));
}

#[test]
fn malformed_input_exits_2_with_location() {
    let (code, _, err) = trop(&["mixed-volume", r#"[{"dim": 2, "vertices": [["0", "0"]"#]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1 column"), "{err}");
    let (code, _, err) = trop(&["mixed-volume", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/file.json"));
    let (code, _, _) = trop(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, _) = trop(&["mixed-volume", &fixture("segments.json"), "--dim", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_suites() {
    for cmd in ["gusev", "union", "bernstein"] {
        let (code, v) = json_of(&["verify", cmd, &fixture("triangles.json")]);
        assert_eq!(code, 0, "{cmd}: {v}");
        assert_eq!(v["pass"], Value::Bool(true));
        assert_eq!(v["left"], v["right"]);
    }
    let (code, v) = json_of(&[
        "verify",
        "differential",
        &fixture("plane_hypersurface.json"),
        &fixture("plane_line.json"),
        "[[1, 2, 0], [0, 1, 1]]",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["identity"], "differential");
}

#[test]
fn seeded_output_is_reproducible() {
    let args = ["intersect", &fixture("plane_hypersurface.json"), &fixture("plane_line.json")];
    let a = trop(&args);
    let b = trop(&args);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a, b);
    let seeded = Command::new(env!("CARGO_BIN_EXE_trop")).args(args).env("TROP_SEED", "7").output().unwrap();
    let flagged = Command::new(env!("CARGO_BIN_EXE_trop"))
        .args(args)
        .args(["--seed", "7"])
        .env("TROP_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(seeded.stdout, flagged.stdout);
}

#[test]
fn fixtures_round_trip() {
    for name in ["tropical_line.json", "empty.json", "plane_line.json", "plane_hypersurface.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let a: WeightedFanJson = serde_json::from_str(&text).unwrap();
        let b: WeightedFanJson = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let text = std::fs::read_to_string(fixture("square_support.json")).unwrap();
    let a: ConewisePolyJson = serde_json::from_str(&text).unwrap();
    let b: ConewisePolyJson = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(a, b);
    let text = std::fs::read_to_string(fixture("triangles.json")).unwrap();
    let a: Vec<PolytopeJson> = serde_json::from_str(&text).unwrap();
    let s = serde_json::to_string(&a).unwrap();
    let b: Vec<PolytopeJson> = serde_json::from_str(&s).unwrap();
    assert_eq!(s, serde_json::to_string(&b).unwrap());
}

#[test]
fn support_product_output_parses() {
    let (code, v) = json_of(&["support-product", &fixture("segments.json")]);
    assert_eq!(code, 0);
    let p: ConewisePolyJson = serde_json::from_value(v).unwrap();
    assert_eq!(p.dim, 2);
}
