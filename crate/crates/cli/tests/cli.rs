use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lame-qes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn energies(doc: &Value) -> Vec<f64> {
    doc["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["energy"].as_f64().unwrap())
        .collect()
}

#[test]
fn solve_two_one_reports_five_edges() {
    let doc = json(&["solve", "--a", "2", "--b", "1", "--m", "0.5", "--shift", "paper"]);
    let e = energies(&doc);
    assert_eq!(e.len(), 5);
    // m = 0.5: 5 - 3m ∓ 2√(4 - 3m) and 5 - 2m ∓ 2√(m² - 5m + 4).
    let (d1, d2) = (2.5f64.sqrt(), 1.75f64.sqrt());
    let expected = [0.0, 3.5 - 2.0 * d1, 4.0 - 2.0 * d2, 4.0 + 2.0 * d2, 3.5 + 2.0 * d1];
    let mut want = expected.to_vec();
    want.sort_by(f64::total_cmp);
    for (got, want) in e.iter().zip(&want) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    assert_eq!(doc["records"].as_array().unwrap().len(), 4);
    assert_eq!(doc["records"][0]["status"], "discarded");
    assert_eq!(doc["params"]["a"], "2");
    assert!(doc.get("verification").is_none());
    assert!(doc["solutions"].as_array().unwrap().iter().all(|s| s.get("degeneracy_group").is_none()));
}

#[test]
fn solve_seven_halves_groups_the_degenerate_pair() {
    let doc = json(&["solve", "--a", "7/2", "--b", "1/2", "--m", "0.5"]);
    let sols = doc["solutions"].as_array().unwrap();
    let grouped: Vec<&Value> = sols.iter().filter(|s| s.get("degeneracy_group").is_some()).collect();
    assert_eq!(grouped.len(), 2);
    assert_eq!(grouped[0]["degeneracy_group"], grouped[1]["degeneracy_group"]);
    let ids: Vec<u64> = grouped.iter().map(|s| s["set_id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [2, 4]);
    assert_eq!(doc["params"]["a"], "7/2");
}

#[test]
fn json_output_is_byte_stable() {
    let args = ["solve", "--a", "7/2", "--b", "1/2", "--m", "0.3", "--shift", "paper"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let text = String::from_utf8(run(&args).stdout).unwrap();
    assert!(text.contains("\"m\": 2.9999999999999999e-1"), "{text}");
}

#[test]
fn text_format_uses_the_same_numbers() {
    let j = json(&["solve", "--a", "2", "--b", "1", "--m", "0.5"]);
    let out = run(&["solve", "--a", "2", "--b", "1", "--m", "0.5", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let raw = serde_json::to_string(&j["solutions"][0]["energy"]).unwrap();
    let first = j["solutions"][0]["energy"].as_f64().unwrap();
    assert!(text.contains(&format!("{first:.16e}")), "{raw}\n{text}");
}

#[test]
fn mixed_case_is_rejected() {
    let out = run(&["solve", "--a", "2", "--b", "1/2", "--m", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mixed integer/half-integer"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        &["solve", "--a", "2", "--b", "1", "--m", "1.0"][..],
        &["solve", "--a", "2", "--b", "1", "--m", "-0.1"],
        &["solve", "--a", "2.5", "--b", "1", "--m", "0.5"],
        &["solve", "--a", "1", "--b", "2", "--m", "0.5"],
        &["solve", "--a", "3", "--b", "1", "--m", "0.5", "--shift", "paper"],
        &["solve", "--a", "2", "--b", "1", "--m", "0.5", "--shift", "x"],
        &["tables", "--which", "3", "--m", "0.5"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_on_published_case() {
    let out = run(&["verify", "--a", "2", "--b", "1", "--m", "0.5", "--shift", "paper"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verification"]["passed"], true);
    assert_eq!(doc["verification"]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn under_resolved_verify_explains_itself() {
    let out = run(&["verify", "--a", "2", "--b", "1", "--m", "0.5", "--steps", "500", "--format", "text"]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    assert!(String::from_utf8(out.stdout).unwrap().contains("resolution limit"));
}

#[test]
fn bands_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bands.csv");
    let out = run(&[
        "bands", "--a", "2", "--b", "1", "--m", "0.5", "--shift", "paper",
        "--emin", "-1", "--emax", "8", "--steps", "2000",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("energy,delta"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (e, d) = l.split_once(',').unwrap();
            (e.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1000);
    assert_eq!(rows[0].0, -1.0);
    assert_eq!(rows[999].0, 8.0);
    // Ground state at E = 0 is a periodic edge.
    let near_zero = rows.iter().min_by(|a, b| a.0.abs().total_cmp(&b.0.abs())).unwrap();
    assert!((near_zero.1 - 2.0).abs() < 0.1, "{near_zero:?}");
}

#[test]
fn bands_sample_count_and_unwritable_path() {
    let out = run(&["bands", "--a", "2", "--b", "1", "--m", "0.5", "--emin", "0", "--emax", "1", "--samples", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);

    let out = run(&[
        "bands", "--a", "2", "--b", "1", "--m", "0.5", "--emin", "0", "--emax", "1",
        "--out", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_four_lists_discarded_set() {
    let out = run(&["tables", "--which", "4", "--m", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let set1 = text.lines().find(|l| l.starts_with("1 ")).unwrap();
    assert!(set1.contains("-1"), "{set1}");
    assert!(text.contains("5-3m-2√(4-3m)") && text.contains("5-3m+2√(4-3m)"), "{text}");
    assert!(!text.contains(" ? "));
}

#[test]
fn table_five_has_three_set_four_rows() {
    let doc = json(&["tables", "--which", "5", "--m", "0.5", "--format", "json"]);
    let rows = doc["rows"].as_array().unwrap();
    let set4: Vec<&Value> = rows.iter().filter(|r| r["set_id"] == 4).collect();
    assert_eq!(set4.len(), 3);
    assert!(set4.iter().all(|r| r["eigenfunction"] == "dn(x)^{-1/2} P4(sn x)"));
    assert!(rows.iter().all(|r| r["energy_label"] != "?"));
}
