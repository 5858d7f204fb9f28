use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn kideal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kideal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("kideal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn counterexample_fails_at_condition_iv() {
    let o = kideal(&["check-nt", &data("fx3.json"), &data("family_counterexample.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition (iv) fails at F={1}, witness u"));
    let o = kideal(&["check-nt", &data("fx3.json"), &data("family_counterexample.json"), "--oracle"]);
    assert_eq!(o.status.code(), Some(1));
    let o = kideal(&["check-nt", &data("fx3.json"), &data("family_counterexample.json"), "--explain"]);
    assert!(stdout(&o).contains("F={1}: H1={u, w} H2={u, w} H3={u, w} H_F={w}"));
}

#[test]
fn maximalised_counterexample_is_nt() {
    let o = kideal(&["maximalise", &data("fx3.json"), &data("family_counterexample.json")]);
    assert_eq!(o.status.code(), Some(0));
    let m = write_temp("max.json", &stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["components"]["1"], serde_json::json!(["u", "w"]));
    let g = data("fx3.json");
    for opts in [&[][..], &["--oracle"][..]] {
        let mut args = vec!["check-nt", &g[..], &m[..]];
        args.extend_from_slice(opts);
        assert_eq!(kideal(&args).status.code(), Some(0));
    }
}

#[test]
fn lattice_dot_is_byte_stable() {
    let a = kideal(&["lattice", &data("fx1-2.json"), "--format", "dot"]);
    let b = kideal(&["lattice", &data("fx1-2.json"), "--format", "dot"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.matches("[label=").count(), 6);
    assert_eq!(text.matches(" -> ").count(), 6);
    assert!(text.contains(r#"n2 [label="{2}→{v}\n{1,2}→{v}"];"#));
}

#[test]
fn lattice_json_lists_nodes_and_covers() {
    let o = kideal(&["lattice", &data("fx1-2.json"), "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(doc["covers"].as_array().unwrap().len(), 6);
    assert_eq!(doc["nodes"][1]["antichain"], serde_json::json!([[1, 2]]));
}

#[test]
fn enumerate_fx2() {
    let o = kideal(&["enumerate", &data("fx2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let docs: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let comps: Vec<(Vec<String>, Vec<String>)> = docs
        .as_array()
        .unwrap()
        .iter()
        .map(|d| {
            let get = |k: &str| serde_json::from_value(d["components"][k].clone()).unwrap();
            (get(""), get("1"))
        })
        .collect();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(
        comps,
        vec![
            (s(&[]), s(&[])),
            (s(&[]), s(&["u"])),
            (s(&["w"]), s(&["w"])),
            (s(&["u", "w"]), s(&["u", "w"])),
        ]
    );
    let oracle = kideal(&["enumerate", &data("fx2.json"), "--oracle"]);
    assert_eq!(oracle.stdout, o.stdout);
    let no = kideal(&["enumerate", &data("fx2.json"), "--no"]);
    let docs: serde_json::Value = serde_json::from_str(&stdout(&no)).unwrap();
    assert_eq!(docs.as_array().unwrap().len(), 2);
}

#[test]
fn documents_round_trip_through_the_cli() {
    let o = kideal(&["generate", "--seed", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let g = write_temp("gen.json", &stdout(&o));
    assert_eq!(kideal(&["validate", &g]).status.code(), Some(0));
    let q = kideal(&["quotient", &g, "--H", ""]);
    assert_eq!(q.stdout, o.stdout);
    let a = serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap();
    let again = write_temp("gen2.json", &serde_json::to_string(&a).unwrap());
    assert_eq!(kideal(&["quotient", &again, "--H", ""]).stdout, o.stdout);
}

#[test]
fn exit_codes() {
    let o = kideal(&["validate", &data("broken.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pair (l1, l2) unmatched"));
    let o = kideal(&["check-nt", &data("broken.json"), &data("family_counterexample.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty() && !o.stderr.is_empty());
    let o = kideal(&["tracing", &data("fx2.json"), "--F", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kideal(&["check-nt", &data("fx3.json"), "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kideal(&["enumerate", &data("fx3.json"), "--oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vertex_set_commands() {
    assert_eq!(stdout(&kideal(&["tracing", &data("fx2.json"), "--F", "1"])).trim(), "{u}");
    assert_eq!(stdout(&kideal(&["tracing", &data("fx2.json"), "--F", "1", "--oracle"])).trim(), "{u}");
    assert_eq!(stdout(&kideal(&["jf", &data("fx3.json"), "--F", "2", "--H0", ""])).trim(), "{u, w}");
    assert_eq!(stdout(&kideal(&["saturate", &data("fx2.json"), "--H", "w"])).trim(), "{u, w}");
}

#[test]
fn decision_commands() {
    let fam = write_temp("top.json", r#"{"components": {"": ["v"], "1": ["v"], "2": ["v"], "1,2": ["v"]}}"#);
    let g = data("fx1-2.json");
    assert_eq!(kideal(&["check-no", &g, &fam]).status.code(), Some(0));
    assert_eq!(kideal(&["check-no", &g, &fam, "--oracle"]).status.code(), Some(0));
    assert_eq!(kideal(&["check-m", &g, &fam]).status.code(), Some(1));
    assert_eq!(kideal(&["check-m", &g, &fam, "--oracle"]).status.code(), Some(1));
    let empty = write_temp("empty.json", r#"{"components": {}}"#);
    let o = kideal(&["check-no", &g, &empty, "--explain"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("tracing condition fails at F={1}, witness v"));
    assert_eq!(kideal(&["check-no", &g, &fam, "--relative", &empty]).status.code(), Some(0));
    assert_eq!(kideal(&["check-m", &g, &empty]).status.code(), Some(0));
    assert_eq!(kideal(&["regular-report", &g]).status.code(), Some(0));
    assert_eq!(kideal(&["rsy-report", &data("fx2.json")]).status.code(), Some(0));
}

#[test]
fn lattice_operations() {
    let g = data("fx1-2.json");
    let a = write_temp("a.json", r#"{"components": {"1": ["v"], "1,2": ["v"]}}"#);
    let b = write_temp("b.json", r#"{"components": {"2": ["v"], "1,2": ["v"]}}"#);
    let m: serde_json::Value = serde_json::from_str(&stdout(&kideal(&["meet", &g, &a, &b]))).unwrap();
    assert_eq!(m["components"]["1"], serde_json::json!([]));
    assert_eq!(m["components"]["1,2"], serde_json::json!(["v"]));
    let o = kideal(&["join", &g, &a, &b]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bounds"));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["components"]["2"], serde_json::json!(["v"]));
    let f: serde_json::Value =
        serde_json::from_str(&stdout(&kideal(&["join-formula", &g, &a, &b, "--H0", ""]))).unwrap();
    assert_eq!(f["family"], j);
}

#[test]
fn dynamics_commands() {
    let o = kideal(&["dynsys-validate", &data("noncommuting.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("do not commute at 1"));
    let o = kideal(&["dynsys-invariants", &data("swap.json")]);
    let sets: Vec<Vec<String>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sets, vec![vec![], vec!["1".to_string(), "2".to_string()]]);
    let oracle = kideal(&["dynsys-invariants", &data("swap.json"), "--oracle"]);
    assert_eq!(oracle.stdout, o.stdout);
    assert_eq!(kideal(&["dynsys-invariants", &data("collapse.json")]).status.code(), Some(2));
    let o = kideal(&["dynsys-check-nt", &data("collapse.json"), &data("collapse_family.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition (i) fails at F={1}, witness 2"));
    let o = kideal(&["dynsys-check-nt", &data("collapse.json"), &data("collapse_family.json"), "--oracle"]);
    assert_eq!(o.status.code(), Some(1));
}
