use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("matnet-cli-{}-{name}", std::process::id()))
}

fn write_spec(name: &str, spec: &Value) -> PathBuf {
    let path = temp_path(name);
    std::fs::write(&path, serde_json::to_string_pretty(spec).unwrap()).unwrap();
    path
}

fn matnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matnet"))
        .args(args)
        .env_remove("MATNET_BACKEND")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scalar_spec(n: usize, leaders: &[usize], edges: &[(usize, usize)]) -> Value {
    let edges: Vec<Value> = edges
        .iter()
        .map(|(i, j)| json!({"i": i, "j": j, "sign": "+", "weight": [[1]]}))
        .collect();
    json!({
        "d": 1,
        "n": n,
        "leaders": leaders,
        "edges": edges,
        "dynamics": {"a": [[0]], "b": [[1]], "k": [[1]], "c": [[1]]},
    })
}

#[test]
fn triangle_laplacian_has_degree_two_diagonal() {
    let path = write_spec(
        "triangle.json",
        &scalar_spec(3, &[1], &[(1, 2), (2, 3), (1, 3)]),
    );
    let out = matnet(&["laplacian", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], "matnet.report/v1");
    assert_eq!(
        report["laplacian"],
        json!([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    );
}

#[test]
fn edgeless_network_groups_all_followers() {
    let path = write_spec("edgeless.json", &scalar_spec(4, &[1], &[]));
    let lap = json_of(&matnet(&["laplacian", path.to_str().unwrap()]));
    assert_eq!(
        lap["laplacian"],
        json!([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    );
    let ep = json_of(&matnet(&["ep", path.to_str().unwrap()]));
    assert_eq!(ep["partition"]["display"], "1|2,3,4");
    let ctrb = json_of(&matnet(&["ctrb", path.to_str().unwrap()]));
    assert_eq!(ctrb["controllability"]["subspace_dim"], 1);
}

#[test]
fn path_led_from_an_end_is_controllable_and_observable() {
    let path = write_spec("path.json", &scalar_spec(3, &[1], &[(1, 2), (2, 3)]));
    let ctrb = json_of(&matnet(&["ctrb", path.to_str().unwrap()]));
    assert_eq!(ctrb["controllability"]["controllable"], true);
    assert_eq!(ctrb["bound"]["partition"]["display"], "1|2|3");
    let obsv = json_of(&matnet(&["obsv", path.to_str().unwrap()]));
    assert_eq!(obsv["observability"]["observable"], true);
}

#[test]
fn every_node_a_leader_is_observable() {
    let path = write_spec(
        "all-leaders.json",
        &scalar_spec(3, &[1, 2, 3], &[(1, 2), (2, 3), (1, 3)]),
    );
    let obsv = json_of(&matnet(&["obsv", path.to_str().unwrap()]));
    assert_eq!(obsv["observability"]["observable"], true);
    assert_eq!(obsv["partition"]["display"], "1|2|3");
}

#[test]
fn given_partition_that_is_not_equitable_reports_a_witness() {
    let path = write_spec("path-ep.json", &scalar_spec(3, &[1], &[(1, 2), (2, 3)]));
    let out = matnet(&["ep", path.to_str().unwrap(), "--partition", "1|2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let ep = json_of(&out);
    assert_eq!(ep["equitable"], false);
    assert!(ep["violation"].is_object());
}

#[test]
fn builtin_corpus_fails_only_the_switching_example() {
    let out = matnet(&["corpus"]);
    assert_eq!(out.status.code(), Some(3));
    let report = json_of(&out);
    assert_eq!(report["passed"], 5);
    assert_eq!(report["total"], 6);
    assert_eq!(
        report["failures"],
        json!([
            "example2 ctrb/bound/tight",
            "example2 ctrb/controllability/subspace_dim"
        ])
    );
}

#[test]
fn backend_env_var_selects_float() {
    let out = Command::new(env!("CARGO_BIN_EXE_matnet"))
        .arg("corpus")
        .env("MATNET_BACKEND", "float")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let report = json_of(&out);
    assert_eq!(report["backend"], "float");
    assert_eq!(
        report["failures"],
        json!([
            "example2 ctrb/bound/tight",
            "example2 ctrb/controllability/subspace_dim"
        ])
    );
    for ex in report["examples"].as_array().unwrap() {
        for run in ex["runs"].as_array().unwrap() {
            assert_eq!(run["backend"], "float");
        }
    }
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_matnet"))
        .args(["corpus", "--backend", "exact"])
        .env("MATNET_BACKEND", "float")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["backend"], "exact");
}

#[test]
fn float_entries_default_to_the_float_backend() {
    let mut spec = scalar_spec(3, &[1], &[(1, 2), (2, 3)]);
    spec["edges"][0]["weight"] = json!([[0.5]]);
    let path = write_spec("float-entries.json", &spec);
    assert_eq!(
        json_of(&matnet(&["ctrb", path.to_str().unwrap()]))["backend"],
        "float"
    );
    let forced = json_of(&matnet(&[
        "ctrb",
        path.to_str().unwrap(),
        "--backend",
        "exact",
    ]));
    assert_eq!(forced["backend"], "exact");
    assert_eq!(forced["controllability"]["controllable"], true);
}

#[test]
fn perturbed_expectation_is_a_regression() {
    let text = include_str!("../corpus/example4.json");
    let mut entry: Value = serde_json::from_str(text).unwrap();
    let ok = temp_path("example4.json");
    std::fs::write(&ok, text).unwrap();
    assert_eq!(
        matnet(&["corpus", ok.to_str().unwrap()]).status.code(),
        Some(0)
    );

    entry["runs"][0]["expected"]["/switched/controllability/subspace_dim"] = json!(5);
    let bad = write_spec("example4-perturbed.json", &entry);
    let out = matnet(&["corpus", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        json_of(&out)["failures"],
        json!(["example4 ctrb/switched/controllability/subspace_dim"])
    );
}

#[test]
fn invalid_specs_exit_with_validation_code_and_location() {
    let mut spec = scalar_spec(3, &[1], &[(1, 2)]);
    spec["edges"][0]["j"] = json!(7);
    let path = write_spec("bad-node.json", &spec);
    let out = matnet(&["ctrb", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges[0].j"));

    let broken = temp_path("broken.json");
    std::fs::write(&broken, "{\"d\": 1,\n  \"n\": }").unwrap();
    let out = matnet(&["laplacian", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn usage_errors_exit_with_validation_code() {
    let path = write_spec("usage.json", &scalar_spec(2, &[1], &[(1, 2)]));
    let p = path.to_str().unwrap();
    assert_eq!(
        matnet(&["ctrb", p, "--backend", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(matnet(&["ctrb"]).status.code(), Some(2));
    assert_eq!(
        matnet(&["ctrb", p, "--mode", "switching"]).status.code(),
        Some(2)
    );
    assert_eq!(
        matnet(&["ep", p, "--partition", "1|1,2"]).status.code(),
        Some(2)
    );
    assert_eq!(matnet(&["frobnicate", p]).status.code(), Some(2));
    assert_eq!(
        matnet(&["ctrb", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn dot_flag_writes_the_quotient_graph() {
    let path = write_spec("dot.json", &scalar_spec(3, &[1], &[(1, 2), (1, 3)]));
    let dot = temp_path("quotient.dot");
    let out = matnet(&["ep", path.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("doublecircle"));
    assert!(text.contains("->"));
}

#[test]
fn reports_are_byte_stable() {
    let path = write_spec(
        "stable.json",
        &scalar_spec(4, &[1], &[(1, 2), (1, 3), (2, 4), (3, 4)]),
    );
    for cmd in ["laplacian", "ep", "ctrb", "obsv"] {
        let a = matnet(&[cmd, path.to_str().unwrap()]);
        let b = matnet(&[cmd, path.to_str().unwrap()]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    assert_eq!(matnet(&["corpus"]).stdout, matnet(&["corpus"]).stdout);
}
