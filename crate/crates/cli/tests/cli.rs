use std::process::Command;

use serde_json::Value;

fn csa(args: &[&str]) -> (i32, String, String) {
    csa_env(args, &[])
}

fn csa_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut c = Command::new(env!("CARGO_BIN_EXE_csa"));
    c.args(args).env_remove("CSA_BUDGET");
    for (k, v) in env {
        c.env(k, v);
    }
    let o = c.output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = csa(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

#[test]
fn free_almost_triangle() {
    let (code, v) = json(&["free", "T:3,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "YES");
    assert_eq!(v["exponents"], serde_json::json!([1, 3, 4, 4]));
    assert_eq!(v["induction"]["status"], "CERTIFIED_YES");
    let (_, md, _) = csa(&["free", "T:3,1", "--out", "md"]);
    assert!(md.contains("| exp A' | α_H | exp A'' |"));
    assert!(md.contains("| 1,3,4,4 | | |"));
}

#[test]
fn free_refuted() {
    let (code, v) = json(&["free", "K:4", "--no-table"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "NO");
}

#[test]
fn kpi1_verdicts() {
    let (code, v) = json(&["kpi1", "K:4"]);
    assert_eq!((code, v["verdict"].as_str()), (2, Some("UNKNOWN")));
    let (code, v) = json(&["kpi1", "P:5"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("KNOWN_YES")));
    let (code, v) = json(&["kpi1", "G1"]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("KNOWN_NO")));
}

#[test]
fn regions_product() {
    let (code, v) = json(&["regions", "P:3", "--check-product"]);
    assert_eq!(code, 0);
    assert_eq!(v["product"]["verdict"], "YES");
    assert_eq!(v["product"]["factored"], "(1+t)(1+t+t^2)(1+t+t^2+t^3)");
    assert_eq!(v["chambers"], 24);
    let (code, csv, _) = csa(&["regions", "P:2", "--out", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 7);
    assert_eq!(csv.lines().next(), Some("signs,rank"));
}

#[test]
fn regions_base_search() {
    let (code, v) = json(&["regions", "T:3,1", "--check-product"]);
    assert_eq!(code, 2);
    assert_eq!(v["product"]["verdict"], "INCONCLUSIVE");
    let (code, v) = json(&["regions", "T:3,1", "--check-product", "--search-bases"]);
    assert_eq!(code, 0);
    assert_eq!(v["product"]["factored"], "(1+t)(1+t+t^2+t^3)(1+t+t^2+t^3+t^4)(1+t+t^2+t^3+t^4)");
}

#[test]
fn input_errors() {
    assert_eq!(csa(&["free", "Q:3"]).0, 3);
    assert_eq!(csa(&["nonsense"]).0, 3);
    assert_eq!(csa(&["lattice", "P:3", "--budget", "flats=x"]).0, 3);
    assert_eq!(csa(&["factor", "P:3", "--out", "csv"]).0, 3);
    assert_eq!(csa(&["reproduce-tables", "--target", "bn", "--n", "9"]).0, 3);
    assert_eq!(csa(&["ideal", "A:3,2", "--sets", "1,3"]).0, 3);
    assert_eq!(csa(&["--help"]).0, 0);
}

#[test]
fn budget_exit() {
    let (code, _, err) = csa_env(&["regions", "C:4"], &[("CSA_BUDGET", "chambers=10")]);
    assert_eq!(code, 4, "{err}");
    let (code, _, _) = csa(&["lattice", "K:5", "--budget", "flats=20"]);
    assert_eq!(code, 4);
    // the flag wins over the environment
    let (code, _, _) = csa_env(&["regions", "P:2", "--budget", "chambers=100"], &[("CSA_BUDGET", "chambers=1")]);
    assert_eq!(code, 0);
}

#[test]
fn json_graph_file() {
    let dir = std::env::temp_dir().join(format!("csa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("path.json");
    std::fs::write(&p, r#"{"n": 3, "edges": [[1, 2], [2, 3]]}"#).unwrap();
    let (code, v) = json(&["lattice", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["poincare_factors"], serde_json::json!([1, 2, 3]));
    std::fs::write(&p, r#"{"n": 3, "edges": [[1, 2]]}"#).unwrap();
    assert_eq!(csa(&["build", p.to_str().unwrap()]).0, 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn other_commands() {
    let (code, v) = json(&["build", "P:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 6);
    let (code, v) = json(&["mat", "A:4,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["block_sizes"], serde_json::json!([5, 4, 4, 3, 1]));
    let (code, v) = json(&["factor", "C:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "YES");
    let (code, v) = json(&["formal", "C:4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "YES");
    let (code, v) = json(&["ideal", "A:4,2", "--sets", "1;2;3;4;5;1,2;2,3;3,4;2,5;1,2,3;2,3,4;1,2,5;2,3,5;1,2,3,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 14);
    assert_eq!(v["exponent_candidates"], serde_json::json!([1, 3, 3, 3, 4]));
}

#[test]
fn report_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    let (c1, a) = json(&["report", "T:3,1"]);
    let (c2, b) = json(&["report", "T:3,1"]);
    assert_eq!((c1, c2), (0, 0));
    assert!(a["timings_ms"].is_object());
    assert_eq!(strip(a), strip(b));
    let (_, md1, _) = csa(&["report", "C:3", "--out", "md"]);
    let (_, md2, _) = csa(&["report", "C:3", "--out", "md"]);
    assert_eq!(md1, md2);
}

#[test]
fn reproduce_tables_goldens() {
    for n in 2..=7 {
        let (code, md, _) = csa(&["reproduce-tables", "--target", "bn", "--n", &n.to_string(), "--out", "md"]);
        assert_eq!(code, 0);
        let golden = std::fs::read_to_string(format!("{}/tests/golden/bn_{n}.md", env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert_eq!(md, golden, "B_{n}");
    }
    for n in 2..=6 {
        let (code, md, _) = csa(&["reproduce-tables", "--target", "delta", "--n", &n.to_string(), "--out", "md"]);
        assert_eq!(code, 0);
        let golden = std::fs::read_to_string(format!("{}/tests/golden/delta_{n}.md", env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert_eq!(md, golden, "Δ_{n}");
    }
    let (_, v) = json(&["reproduce-tables", "--target", "bn", "--n", "4"]);
    assert_eq!(v[0]["exponents"], serde_json::json!([1, 3, 4, 5]));
}
