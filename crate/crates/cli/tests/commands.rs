use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use z2cover::construction::construct_family;
use z2cover_cli::{to_json, verify_report, OracleArgs};

fn z2cover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2cover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn construct(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut args = vec!["construct", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = z2cover(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Shifts the torsion part of `L_110` by `η₂`.
fn mutate(src: &Path, dst: &Path) {
    let mut v = read_json(src);
    let tors = v["L"]["110"]["pic0"]["tors"].as_array_mut().unwrap();
    tors[1] = Value::from((tors[1].as_u64().unwrap() + 1) % 2);
    std::fs::write(dst, serde_json::to_string_pretty(&v).unwrap()).unwrap();
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let out = z2cover(args);
    (code(&out), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn construct_writes_family_file() {
    let dir = TempDir::new().unwrap();
    let v = read_json(&construct(&dir, "f3.json", &["--n", "3"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["L"].as_object().unwrap().len(), 7);
    let d = v["D"].as_object().unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.values().all(|c| !c.as_array().unwrap().is_empty()));
}

#[test]
fn construct_rejects_small_n() {
    let out = z2cover(&["construct", "--n", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&z2cover(&[])), 2);
    assert_eq!(code(&z2cover(&["frobnicate"])), 2);
    assert_eq!(code(&z2cover(&["construct"])), 2);
    assert_eq!(code(&z2cover(&["construct", "--n", "3", "--halving", "1,0"])), 2);
    assert_eq!(code(&z2cover(&["construct", "--n", "3", "--halving", "1,0,4"])), 2);
    assert_eq!(code(&z2cover(&["verify", "/nonexistent/file.json"])), 2);
}

#[test]
fn alternate_halving_still_verifies() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "h.json", &["--n", "3", "--halving", "1,0,2"]);
    assert_eq!(read_json(&path)["family"]["halving"], serde_json::json!([1, 0, 2]));
    let (c, v) = json_of(&["verify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(v["invariants"]["k_squared"], 48);
    assert_eq!(v["canonical_map"]["degree"], 8);
}

#[test]
fn verify_family_passes() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let out = z2cover(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("degree=8"), "{text}");
    assert!(text.contains("result: PASS"));

    let (c, v) = json_of(&["verify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["relations"]["pairs_checked"], 28);
    assert_eq!(v["canonical_map"]["degree"], 8);
    assert_eq!(v["canonical_map"]["image_degree"], 6);
    assert!(v.get("oracle").is_none());
}

#[test]
fn verify_with_oracle() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let (c, v) = json_of(&["verify", path.to_str().unwrap(), "--oracle", "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(v["oracle"]["prime"], 9907);
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["oracle"]["relations_hold_realized"], true);

    // 7 is too small to host the data's coefficients.
    let (c, v) = json_of(&[
        "verify",
        path.to_str().unwrap(),
        "--oracle",
        "--oracle-prime",
        "7",
        "--oracle-a",
        "-1",
        "--oracle-b",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(c, 1);
    assert!(v["oracle"]["error"].is_string());
}

#[test]
fn verify_mutated_names_failing_pair() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let bad = dir.path().join("bad.json");
    mutate(&path, &bad);
    let out = z2cover(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL (L010, L100)"), "{}", stdout(&out));

    let (c, v) = json_of(&["verify", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 1);
    assert_eq!(v["ok"], false);
    let failures = v["relations"]["failures"].as_array().unwrap();
    assert!(failures
        .iter()
        .any(|f| f["chi"] == "010" && f["chi_prime"] == "100"));
    assert!(v["invariants"].is_null());
}

#[test]
fn malformed_files_exit_three() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let cases: Vec<(&str, String)> = vec![
        ("garbage.json", "not json".into()),
        ("unknown.json", r#"{"schema_version": 1, "extra": 0}"#.into()),
        ("version.json", {
            let mut v = read_json(&path);
            v["schema_version"] = 99.into();
            v.to_string()
        }),
        ("missing_l.json", {
            let mut v = read_json(&path);
            v["L"].as_object_mut().unwrap().remove("111");
            v.to_string()
        }),
        ("bad_bits.json", {
            let mut v = read_json(&path);
            let l = v["L"].as_object_mut().unwrap();
            let x = l.remove("111").unwrap();
            l.insert("1x1".into(), x);
            v.to_string()
        }),
    ];
    for (name, body) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        for cmd in ["verify", "table"] {
            let out = z2cover(&[cmd, p.to_str().unwrap()]);
            assert_eq!(code(&out), 3, "{cmd} {name}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn table_rows() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let (c, v) = json_of(&["table", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema_version"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["equal"] == true));
    assert_eq!(rows[0]["rhs_symbolic"], "6E + 2ΣF_ii");
    assert_eq!(rows[4]["rhs_symbolic"], "2E + 2ΣF_ii + η₃");

    let text = stdout(&z2cover(&["table", path.to_str().unwrap()]));
    assert_eq!(text.matches("[equal]").count(), 6);

    let p5 = construct(&dir, "f5.json", &["--n", "5"]);
    let (c, v) = json_of(&["table", p5.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(v["n"], 5);
    assert_eq!(v["rows"][0]["rhs"]["degree"], 10);
    assert_eq!(v["rows"][3]["rhs_symbolic"], "2E + 2ΣF_ii");

    let bad = dir.path().join("bad.json");
    mutate(&path, &bad);
    let (c, v) = json_of(&["table", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(c, 1);
    assert!(v["rows"].as_array().unwrap().iter().any(|r| r["equal"] == false));
    assert!(stdout(&z2cover(&["table", bad.to_str().unwrap()])).contains("UNEQUAL"));
}

fn row_tuple(r: &Value) -> (i64, i64, i64, i64, i64, bool) {
    (
        r["k_squared"].as_i64().unwrap(),
        r["p_g"].as_i64().unwrap(),
        r["q"].as_i64().unwrap(),
        r["image_degree"].as_i64().unwrap(),
        r["degree"].as_i64().unwrap(),
        r["base_point_free"].as_bool().unwrap(),
    )
}

#[test]
fn sweep_rows() {
    let (c, v) = json_of(&["sweep", "--n-min", "3", "--n-max", "6", "--format", "json"]);
    assert_eq!(c, 0);
    let rows: Vec<_> = v["rows"].as_array().unwrap().iter().map(row_tuple).collect();
    assert_eq!(
        rows,
        [
            (48, 6, 1, 6, 8, true),
            (64, 8, 1, 8, 8, true),
            (80, 10, 1, 10, 8, true),
            (96, 12, 1, 12, 8, true)
        ]
    );

    let (c, v) = json_of(&["sweep", "--n-min", "2", "--n-max", "2", "--format", "json"]);
    assert_eq!(c, 0);
    assert_eq!(row_tuple(&v["rows"][0]), (32, 4, 1, 2, 16, true));

    assert_eq!(code(&z2cover(&["sweep", "--n-min", "5", "--n-max", "3"])), 2);
    assert_eq!(code(&z2cover(&["sweep", "--n-min", "1", "--n-max", "3"])), 2);
    assert_eq!(code(&z2cover(&["sweep", "--n-min", "3", "--n-max", "65"])), 2);
}

#[test]
fn out_flag_writes_report() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "f3.json", &["--n", "3"]);
    let report = dir.path().join("report.json");
    let out = z2cover(&[
        "verify",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "verify: PASS\n");
    assert_eq!(read_json(&report)["canonical_map"]["degree"], 8);
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    for n in [2, 3, 7] {
        let path = construct(&dir, &format!("f{n}.json"), &["--n", &n.to_string()]);
        let bd = construct_family(n, None).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), bd.to_json() + "\n");

        let out = z2cover(&["verify", path.to_str().unwrap(), "--format", "json"]);
        let in_memory = to_json(&verify_report(&bd, &OracleArgs::default()).unwrap());
        assert_eq!(stdout(&out), in_memory);

        let oracle = OracleArgs {
            oracle: true,
            ..OracleArgs::default()
        };
        let out = z2cover(&["verify", path.to_str().unwrap(), "--oracle", "--format", "json"]);
        assert_eq!(stdout(&out), to_json(&verify_report(&bd, &oracle).unwrap()));
    }
}
