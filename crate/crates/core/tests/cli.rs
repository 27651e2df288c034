use std::process::{Command, Output};

use omv_core::report::AnalysisReport;

fn omv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omv"))
        .args(args)
        .env_remove("OMV_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_json_round_trips() {
    let o = omv(&["analyze", "U^2 + A1(-13)", "--json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(r.schema_version, "1");
    assert_eq!((r.invariants.d, r.invariants.n, r.invariants.k.as_str()), (26, 52, "5/2"));
    assert!(r.coefficient.c10.starts_with("-15.5294117"));
    assert_eq!(serde_json::to_string_pretty(&r).unwrap(), text.trim_end());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "UNIRULED_COEFFICIENT");
    for key in ["schema_version", "input", "invariants", "bound", "coefficient", "verdict"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn boundary_lattice() {
    let o = omv(&["analyze", "U^2 + E8(-1) + A1(-39)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"]["holds"], false);
    assert_eq!(v["coefficient"]["holds"], true);
    let o = omv(&["analyze", "U^2 + E8(-1) + A1(-38)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "UNIRULED_BOUND");
}

#[test]
fn asserted_planes() {
    let o = omv(&["analyze", "U(2)^2 + A1(-1)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariants"]["u_count"], 0);
    assert_eq!(v["bound"]["holds"], serde_json::Value::Null);
    let o = omv(&["analyze", "U(2)^2 + A1(-1)", "--json", "--assert-u", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariants"]["u_count_source"], "asserted");
    assert!(v["bound"]["holds"].is_boolean());
}

#[test]
fn exit_codes() {
    assert_eq!(omv(&["analyze", "U^2 + Q"]).status.code(), Some(2));
    assert_eq!(omv(&["analyze", "E9"]).status.code(), Some(2));
    assert_eq!(omv(&["analyze", "E8"]).status.code(), Some(3));
    assert_eq!(omv(&["analyze", "U + U(-1)"]).status.code(), Some(3));
    let o = omv(&["analyze", "E8"]);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("signature"));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_omv"))
        .args(["coeff", "U^2 + A1(-13)", "--json"])
        .env("OMV_PREC", "12")
        .output()
        .unwrap();
    let lo: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let hi: serde_json::Value = serde_json::from_slice(&omv(&["coeff", "U^2 + A1(-13)", "--json", "--prec", "40"]).stdout).unwrap();
    assert!(lo["error"].as_f64().unwrap() > hi["error"].as_f64().unwrap());
    assert_eq!(hi["local_factors"][0]["n10"], "4224");
}

#[test]
fn r_values_csv() {
    let o = omv(&["table", "1", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("b,k,value,truncated,half_even,printed,matches"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows[0].starts_with("3,5/2,45.254833995939,45.254,45.255,45.254,true"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn family_scan_json_and_text() {
    let o = omv(&["table", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    let d39 = rows.iter().find(|r| r["expr"] == "U^2 + E8(-1) + A1(-39)").unwrap();
    assert_eq!(d39["holds"], false);
    let text = stdout(&omv(&["table", "2"]));
    assert!(text.contains("U^2+E_6^s") && text.contains("reproduced"));
}

#[test]
fn surrogate_command() {
    let o = omv(&["surrogate", "--rank", "19", "--det", "20", "--sig8", "7", "--form-from", "S4", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], 19);
    assert_eq!(v["det"], "20");
    assert!(v["c10"].as_str().unwrap().starts_with("-71.8466167"));
    // the negated form has Gauss sum exponent 1, not 7
    let o = omv(&["surrogate", "--rank", "19", "--det", "20", "--sig8", "7", "--form-from", "S4", "--flip"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn picard_csv_has_all_rows() {
    let o = omv(&["table", "nv", "--csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 56);
    assert!(text.lines().next().unwrap().starts_with("id,name,expr,printed_triple,triple,"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}
