use std::path::Path;
use std::process::{Command, Output};

use rankin_cli::report::{render_json, Report};

fn rankin(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rankin"));
    cmd.args(args).env_remove("RANKIN_CACHE_DIR");
    match cache {
        Some(dir) => cmd.arg("--cache").arg(dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (String, serde_json::Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let text = stdout(&rankin(&full, None));
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn dl_of_d4_is_three() {
    let text = stdout(&rankin(&["dl", "--family", "parity_check", "--n", "4", "--q", "2", "--l", "2"], None));
    assert!(text.contains("d_2: 3\n"), "{text}");
    assert!(text.contains("witness rows:"));
    let (json_text, v) = json(&["dl", "--family", "parity_check", "--n", "4", "--q", "2", "--l", "2"]);
    assert_eq!(v["d_l"], 3);
    assert_eq!(v["certificate"]["witness"]["rows"].as_array().unwrap().len(), 2);
    assert_eq!(json_text, golden("dl_parity_n4_q2_l2.json"));
}

#[test]
fn gamma_of_reed_muller_1_3() {
    let (_, v) = json(&["gamma", "--family", "reed_muller", "--r", "1", "--m", "3", "--l", "1"]);
    let g = &v["gamma"];
    assert_eq!((g["exact"]["num"].as_str(), g["exact"]["den"].as_str(), g["exact"]["root"].as_u64()), (Some("2"), Some("1"), Some(1)));
    assert_eq!(g["decimal"], "2");
}

#[test]
fn gamma_prime_paths_agree_on_self_dual_code() {
    let base = ["gamma-prime", "--family", "reed_muller", "--r", "1", "--m", "3", "--l", "2"];
    let (_, short) = json(&base);
    let mut generic_args = base.to_vec();
    generic_args.push("--no-shortcut");
    let (_, generic) = json(&generic_args);
    assert_eq!(short["shortcut_used"], true);
    assert_eq!(generic["shortcut_used"], false);
    assert_eq!(short["gamma_prime"], generic["gamma_prime"]);
    assert_eq!(short["gamma_prime"]["form"], "3");
}

#[test]
fn bounds_row_for_gamma_prime_5_2() {
    let text = stdout(&rankin(&["bounds", "--n-max", "7"], None));
    assert!(text.contains("gamma'_{5,2}: [3^(1/2), 2] ≈ [1.73205, 2]\n"), "{text}");
    let (_, v) = json(&["bounds", "--n-max", "7"]);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["cell"] == "gamma'_{5,2}").unwrap();
    assert_eq!(row["lower"]["form"], "3^(1/2)");
    assert_eq!(row["upper"]["form"], "2");
    assert!(row["upper_provenance"].as_array().unwrap().iter().any(|p| p.as_str().unwrap().contains("rule 5b")));
}

#[test]
fn rm_table_golden() {
    let text = stdout(&rankin(&["rm-table", "--m-max", "5", "--format", "csv"], None));
    assert_eq!(text, golden("rm_table_m5.csv"));
    assert!(text.contains("5,2,16,1073741824,4294967296,4294967296\n"));
}

#[test]
fn rank_deficient_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("flat.json");
    std::fs::write(&spec, r#"{"n": 3, "rows": [[1, 0, 0], [2, 0, 0], [0, 1, 0]]}"#).unwrap();
    let out = rankin(&["dl", "--spec", spec.to_str().unwrap(), "--l", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rank deficient: rank 2, expected 3"), "{err}");

    std::fs::write(&spec, r#"{"q": 2, "n": 4, "family": "parity_check", "generators": [[1,1,0,0]]}"#).unwrap();
    let out = rankin(&["build", "--spec", spec.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let out = rankin(&["dl", "--family", "parity_check", "--n", "4", "--q", "2", "--l", "5"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn candidate_cap_exits_3() {
    let out = rankin(&["dl", "--family", "reed_muller", "--r", "1", "--m", "4", "--l", "2", "--max-candidates", "5"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn spec_files_and_flags_agree() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("code.json");
    std::fs::write(&spec, "{\n  \"q\": 2,\n  \"n\": 4,\n  \"family\": \"parity_check\"\n}\n").unwrap();
    let from_file = stdout(&rankin(&["gamma", "--spec", spec.to_str().unwrap(), "--l", "2"], None));
    let from_flags = stdout(&rankin(&["gamma", "--family", "parity_check", "--n", "4", "--q", "2", "--l", "2"], None));
    assert_eq!(from_file, from_flags);
    assert!(from_file.contains("gamma_{4,2}: 3/2 ≈ 1.5\n"), "{from_file}");
}

#[test]
fn cached_and_cold_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gamma-prime", "--family", "parity_check", "--n", "6", "--q", "3", "--l", "2", "--format", "json"];
    let cold = rankin(&args, Some(dir.path()));
    let warm = rankin(&args, Some(dir.path()));
    assert_eq!(stdout(&cold), stdout(&warm));
    assert!(!String::from_utf8_lossy(&cold.stderr).contains("cache: hit"));
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cache: hit"));
    assert_eq!(stdout(&cold), stdout(&rankin(&args, None)));

    // Corrupt every entry: warned about, ignored, recomputed.
    let mut entries = 0;
    for sub in std::fs::read_dir(dir.path()).unwrap() {
        for f in std::fs::read_dir(sub.unwrap().path()).unwrap() {
            std::fs::write(f.unwrap().path(), "{\"key\": 1").unwrap();
            entries += 1;
        }
    }
    assert_eq!(entries, 2);
    let again = rankin(&args, Some(dir.path()));
    assert_eq!(stdout(&again), stdout(&cold));
    let err = String::from_utf8_lossy(&again.stderr);
    assert!(err.contains("warning: ignoring cache entry"), "{err}");
    assert!(!err.contains("cache: hit"));
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        vec!["dl", "--family", "extended_hamming", "--l", "3"],
        vec!["gamma-prime", "--family", "parity_check", "--n", "5", "--q", "3", "--l", "2"],
    ] {
        let runs: Vec<String> = ["1", "2", "4"]
            .iter()
            .map(|t| {
                let mut a = args.clone();
                a.extend(["--threads", t, "--format", "json"]);
                stdout(&rankin(&a, None))
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn json_output_round_trips() {
    let cases: &[&[&str]] = &[
        &["build", "--family", "reed_muller", "--r", "1", "--m", "3"],
        &["dl", "--family", "parity_check", "--n", "5", "--q", "3", "--l", "2"],
        &["gamma", "--family", "parity_check", "--n", "5", "--q", "2", "--l", "1"],
        &["gamma-prime", "--family", "parity_check", "--n", "4", "--q", "3", "--l", "1"],
        &["bounds", "--n-max", "8", "--rules", "all"],
        &["rm-table", "--m-max", "4"],
        &["verify", "o-a2-gamma-prime"],
        &["asymptotic", "--k", "7", "--digits", "15"],
    ];
    for args in cases {
        let (text, _) = json(args);
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(render_json(&report), text, "{args:?}");
    }
}

#[test]
fn verify_reports_open_constants() {
    let text = stdout(&rankin(&["verify", "z-open"], None));
    assert!(text.starts_with("SKIP z-open-constants"), "{text}");
    assert!(text.contains("open"));
    let out = rankin(&["verify", "no-such-check"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_only_changes_decimals() {
    let a = json(&["gamma", "--family", "parity_check", "--n", "5", "--q", "2", "--l", "1", "--precision", "3"]).1;
    let b = json(&["gamma", "--family", "parity_check", "--n", "5", "--q", "2", "--l", "1", "--precision", "20"]).1;
    assert_eq!(a["gamma"]["exact"], b["gamma"]["exact"]);
    assert_eq!(a["gamma"]["decimal"], "1.52");
    assert_eq!(b["gamma"]["decimal"], "1.5157165665103980823");
}
