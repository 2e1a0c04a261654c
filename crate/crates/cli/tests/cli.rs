mod common;

use common::*;

#[test]
fn classify_examples() {
    let cases = [
        ("1", "0", "sub-extremal", Some(2.0), &[3.0][..]),
        ("1", "1", "extremal", Some(1.0), &[2.0][..]),
        ("0.5", "1", "super-extremal", None, &[][..]),
    ];
    for (m, q, regime, r_h, ps) in cases {
        let out = run(&["classify", "--n", "3", "--m", m, "--q", q]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let r = &out.json()["results"];
        assert_eq!(r["regime"], regime);
        assert_eq!(r["r_h"].as_f64(), r_h);
        let got: Vec<f64> = r["photon_spheres"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(got.len(), ps.len());
        for (g, e) in got.iter().zip(ps) {
            assert!((g - e).abs() <= 1e-12 * e, "{g} vs {e}");
        }
    }
}

#[test]
fn classify_two_photon_spheres_reports_both_extremalities() {
    let out = run(&["classify", "--m", "1", "--q", "1.05"]);
    assert_eq!(out.code, 0);
    let r = &out.json()["results"];
    assert_eq!(r["case"], "two");
    let roots = r["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    for root in roots {
        assert!(root["q1_residual"].as_f64().unwrap().abs() <= 1e-9);
    }
}

#[test]
fn classify_rejects_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "rn.tsv", &rn_table(3, 1.0, 0.5, 2.2, 40.0, 200, |_| 0.0));
    assert_eq!(run(&["classify", "--profile", &table]).code, 2);
}

#[test]
fn verify_rn_passes_every_tag() {
    let out = run(&["verify", "--n", "3", "--m", "1", "--q", "0.5"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let j = out.json();
    assert_eq!(j["verdict"], "pass");
    let entries = j["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 16);
    for e in entries {
        assert_eq!(e["passed"], true, "{e}");
        assert!(e.get("worst_at").is_some());
    }
}

#[test]
fn verify_boundary_at_schwarzschild_photon_sphere() {
    let out = run(&["verify", "--n", "3", "--m", "1", "--q", "0", "--boundary", "3"]);
    assert_eq!(out.code, 0);
    let j = out.json();
    let te2 = j["results"]["entries"].as_array().unwrap().iter().find(|e| e["tag"] == "TE2").unwrap().clone();
    assert_eq!(te2["passed"], true);
    assert!(te2["max_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(j["results"]["boundary_source"], "flag");
}

#[test]
fn verify_off_photon_sphere_boundary_fails() {
    let out = run(&["verify", "--m", "1", "--boundary", "4"]);
    assert_eq!(out.code, 1);
    let failed = out.json()["results"]["failed"].clone();
    assert!(failed.as_array().unwrap().contains(&"TE2".into()), "{failed}");
}

#[test]
fn verify_sampled_rn_table_passes() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "rn.tsv", &rn_table(3, 1.0, 0.5, 3.0, 40.0, 400, |_| 0.0));
    let out = run(&["verify", "--profile", &table]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let j = out.json();
    assert_eq!(j["tolerances"]["identity"].as_f64(), Some(1e-5));
    assert_eq!(j["params"]["source"]["kind"], "profile");
    assert_eq!(j["params"]["source"]["has_psi"], true);
}

#[test]
fn verify_perturbed_table_flags_e1() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "bad.tsv", &rn_table(3, 1.0, 0.5, 2.2, 40.0, 400, bump(6.0, 2.0, 1e-2)));
    let out = run(&["verify", "--profile", &table]);
    assert_eq!(out.code, 1);
    let j = out.json();
    assert_eq!(j["verdict"], "fail");
    assert!(j["results"]["failed"].as_array().unwrap().contains(&"E1".into()));
}

#[test]
fn functional_rn_is_critical_with_slope_two() {
    let out = run(&["functional", "--n", "3", "--m", "1", "--q", "0.5", "--annulus", "3", "6"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = &out.json()["results"];
    let slope = r["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() <= 0.2, "{slope}");
    assert_eq!(r["critical"], true);
    assert_eq!(r["gradient_check"], true);
    assert!(r["ladder"].as_array().unwrap().len() >= 3);
}

#[test]
fn functional_schwarzschild_pohozaev() {
    let out = run(&["functional", "--n", "3", "--m", "1", "--q", "0", "--annulus", "3", "6"]);
    assert_eq!(out.code, 0);
    assert!(out.json()["results"]["pohozaev"]["residual"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn functional_perturbed_profile_is_not_critical() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "bad.tsv", &rn_table(3, 1.0, 0.5, 2.2, 40.0, 400, bump(4.5, 1.5, 1e-2)));
    let out = run(&["functional", "--profile", &table, "--annulus", "3", "6"]);
    assert_eq!(out.json()["tolerances"]["quadrature"].as_f64(), Some(1e-5));
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
    let r = &out.json()["results"];
    assert_eq!(r["critical"], false);
    assert!(r["richardson"].as_f64().unwrap().abs() > r["threshold"].as_f64().unwrap());
}

#[test]
fn functional_sampled_rn_is_critical() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "rn.tsv", &rn_table(3, 1.0, 0.5, 2.2, 40.0, 400, |_| 0.0));
    let out = run(&["functional", "--profile", &table, "--annulus", "3", "6"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let slope = out.json()["results"]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() <= 0.2, "{slope}");
}

#[test]
fn exit_codes_for_usage_and_domain_errors() {
    assert_eq!(run(&["verify"]).code, 2);
    assert_eq!(run(&["classify", "--m", "1", "--n", "2"]).code, 2);
    assert_eq!(run(&["verify", "--m", "1", "--grid-count", "1"]).code, 2);
    assert_eq!(run(&["verify", "--m", "1", "--grid-lo", "5", "--grid-hi", "3"]).code, 2);
    assert_eq!(run(&["verify", "--m", "1", "--tol-identity", "0"]).code, 2);
    assert_eq!(run(&["verify", "--m", "1", "--lambda", "0.1"]).code, 2);
    assert_eq!(run(&["functional", "--m", "1", "--annulus", "3", "2"]).code, 2);
    assert_eq!(run(&["functional", "--m", "1", "--annulus", "1", "3"]).code, 3);
    assert_eq!(run(&["verify", "--m", "1", "--grid-lo", "1.5"]).code, 3);
    assert_eq!(run(&["verify", "--profile", "/nonexistent/table.tsv"]).code, 3);
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.tsv", "1 2 three 4\n");
    let out = run(&["verify", "--profile", &junk]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("junk.tsv"));
}

#[test]
fn env_tolerance_overrides_default_but_not_flag() {
    let args = ["verify", "--m", "1", "--q", "0.5"];
    let tight = run_env(&args, Some("1e-30"));
    assert_eq!(tight.code, 1);
    let echoed = tight.json()["tolerances"]["identity"].as_f64().unwrap();
    assert!((echoed / 1e-30 - 1.0).abs() < 1e-12, "{echoed}");
    let flag = run_env(&[&args[..], &["--tol-identity", "1e-8"]].concat(), Some("1e-30"));
    assert_eq!(flag.code, 0);
    assert_eq!(flag.json()["tolerances"]["identity"].as_f64(), Some(1e-8));
    assert_eq!(run_env(&args, Some("loose")).code, 2);
    assert_eq!(run_env(&args, Some("-1")).code, 2);
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["classify", "--m", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "classify");
    let text = run(&["classify", "--m", "1", "--format", "text"]);
    assert!(text.stdout.contains("regime: sub-extremal"));
    assert_eq!(run(&["classify", "--m", "1", "-o", "/nonexistent/dir/x.json"]).code, 3);
}

#[test]
fn reports_echo_conventions_and_envelope() {
    for args in [
        vec!["classify", "--m", "1"],
        vec!["verify", "--m", "1"],
        vec!["functional", "--m", "1", "--annulus", "3", "6"],
    ] {
        let j = run(&args).json();
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["command", "params", "results", "tolerances", "verdict"]);
        let c = &j["params"]["conventions"];
        assert_eq!(c["charge_constant"].as_f64(), Some(1.0));
        assert_eq!(c["lambda_default"].as_f64(), Some(0.0));
        assert!(c["normal"].as_str().unwrap().contains("increasing r"));
    }
}

#[test]
fn repeated_invocations_are_byte_identical() {
    for args in [
        vec!["classify", "--m", "1", "--q", "1.05"],
        vec!["verify", "--n", "4", "--m", "1", "--q", "0.5"],
        vec!["functional", "--m", "1", "--q", "0.5", "--annulus", "3", "6"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}
