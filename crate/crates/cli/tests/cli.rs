use std::process::{Command, Output};

fn bfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfc"))
        .args(args)
        .env_remove("BFC_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn act_examples() {
    let o = bfc(&["act", "--r", "1", "--n", "6", "--word", "X:2 D:3", "--schur", "[3]"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("oracle:    1*S[2]"), "{out}");
    assert!(out.contains("series:    1*S[2]"), "{out}");

    let o = bfc(&["act", "--r", "1", "--n", "6", "--word", "X:2 D:3", "--schur", "[4]"]);
    let out = stdout(&o);
    assert!(out.contains("oracle:    0\n") && out.contains("series:    0\n"), "{out}");

    let o = bfc(&["act", "--r", "2", "--n", "4", "--word", "", "--schur", "[2,1]"]);
    assert!(stdout(&o).contains("series:    1*S[2,1]"));
}

#[test]
fn act_normal_orders_and_handles_infinity() {
    // D:1 X:1 = 1 - X:1 D:1
    let o = bfc(&["act", "--r", "2", "--n", "inf", "--word", "D:1 X:1", "--schur", "[1]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("agree"));
}

#[test]
fn usage_errors_exit_2() {
    let o = bfc(&["act", "--r", "1", "--n", "6", "--word", "Y:2", "--schur", "[3]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bfc(&["act", "--r", "1", "--n", "6", "--word", "X:2", "--schur", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bfc(&["series", "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bfc(&["series", "--r", "5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn series_rank_one() {
    let o = bfc(&["series", "--r", "1", "--h", "1", "--k", "1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // (1 - t^4 w^-4) / ((1 - c1 z)(1 - t/w)): s_(j)(t) w^-j for j < 4
    assert!(out.contains("z1^2 w1^-3 s[3](t): 1*S[2]\n"), "{out}");
    assert!(!out.contains("w1^-4"), "{out}");
}

#[test]
fn series_negative_m_is_zero() {
    let o = bfc(&["series", "--r", "0", "--h", "0", "--k", "1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# r + h - k < 0: the series is zero\n0\n");
}

#[test]
fn series_vacuum_wedge() {
    let o = bfc(&["series", "--r", "0", "--h", "1", "--k", "0", "--n", "3"]);
    assert_eq!(stdout(&o), "s[](t): 1*S[]\nz1^1 s[](t): 1*S[1]\nz1^2 s[](t): 1*S[2]\n");
}

#[test]
fn series_json_round_trips() {
    let dir = std::env::temp_dir().join(format!("bfc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let o = bfc(&[
        "series", "--r", "2", "--h", "1", "--k", "1", "--n", "4", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let back = bfc::GenSeries::from_json(&v).unwrap();
    let direct = bfc::main_series(&back.params, None, &bfc::Conventions::RESOLVED).unwrap();
    assert_eq!(back.to_json(), direct.to_json());
    assert_eq!(back.to_json(), v);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn series_infinite_mode_with_degrees() {
    let o = bfc(&["series", "--r", "1", "--n", "inf", "--zdeg", "1", "--wdeg", "2", "--tdeg", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("w1^-2 s[2](t): 1*S[]"), "{out}");
    assert!(!out.contains("z1^2"), "{out}");
}

#[test]
fn verify_small_and_negative_control() {
    let o = bfc(&["verify", "--max-n", "2", "--max-r", "2", "--no-suites", "--jobs", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 mismatches"));

    let o = bfc(&["verify", "--max-n", "3", "--max-r", "2", "--no-suites", "--flip-sign", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["mismatches"].as_array().unwrap().is_empty());
    assert!(v["mismatches"][0]["expected"].is_string());

    let o = bfc(&["verify", "--max-n", "2", "--max-r", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reads_job_count_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_bfc"))
        .args(["verify", "--max-n", "2", "--no-suites", "--max-r", "1", "--format", "json"])
        .env("BFC_JOBS", "1")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["jobs"], 1);
}

#[test]
fn b24_report() {
    let o = bfc(&["b24"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("z^0 w^-0 s[1]: 1*S[1] | c1 | 1*S[1]"), "{out}");
    assert!(out.contains("z^1 w^-1 s[]: 1*S[] | 1 | 1*S[]"), "{out}");
    assert!(out.contains("paper-typo-suspect (exponent c2^4)"), "{out}");
    assert!(out.contains("0 oracle mismatches"));
    let o = bfc(&["b24", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["oracle_mismatches"], 0);
}
