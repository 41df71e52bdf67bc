use std::process::{Command, Output};

use serde_json::Value;

use twogen_cli::{
    bench_words, cmd_bench, cmd_decide, cmd_embed, cmd_extract, cmd_fuzz, cmd_member, FuzzFamily,
};
use twogen_core::{parse_cs_word, DelayModel};

fn twogen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twogen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (Output, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full = args.to_vec();
    let path_text = path.to_str().unwrap().to_string();
    full.extend(["--json", &path_text]);
    let output = twogen(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| "null".to_string());
    (output, serde_json::from_str(&text).unwrap())
}

fn without_timing(mut report: Value) -> Value {
    report.as_object_mut().unwrap().remove("elapsed_ms");
    report
}

fn embed(hword: &str) -> String {
    cmd_embed(hword).unwrap().value.unwrap()
}

#[test]
fn decide_examples() {
    assert_eq!(cmd_decide("c c^-1", "free").unwrap().verdict, Some(true));
    assert_eq!(cmd_decide("s", "free").unwrap().verdict, Some(false));
    assert_eq!(
        cmd_decide(&embed("a1"), "free-abelian").unwrap().verdict,
        Some(false)
    );
    assert_eq!(
        cmd_decide(&embed("a1"), "trivial").unwrap().verdict,
        Some(true)
    );
}

#[test]
fn member_examples() {
    let report = cmd_member(&embed("a1"), "free").unwrap();
    assert_eq!(report.verdict, Some(true));
    assert_eq!(report.value.as_deref(), Some("a1"));

    let report = cmd_member("c", "free").unwrap();
    assert_eq!(report.verdict, Some(false));
    assert_eq!(report.value, None);

    let report = cmd_member("", "free").unwrap();
    assert_eq!(report.verdict, Some(true));
    assert_eq!(report.value.as_deref(), Some(""));
}

#[test]
fn extract_requires_membership() {
    let report = cmd_extract(&embed("a2 a1^-1"), "free").unwrap();
    assert_eq!(report.value.as_deref(), Some("a2 a1^-1"));
    assert!(cmd_extract("c", "free").is_err());
}

#[test]
fn embed_examples() {
    assert_eq!(embed("a1"), "c s c s^-1 c^-1 s c^-1 s^-1");
    assert_eq!(embed(""), "");
    let forward = parse_cs_word(&embed("a2")).unwrap();
    assert_eq!(embed("a2^-1"), forward.inverse().to_string());
    assert_eq!(embed("a2^-1"), "s^3 c s^-3 c s^3 c^-1 s^-3 c^-1");
}

#[test]
fn bad_input_is_an_error() {
    assert!(cmd_decide("c t", "free").is_err());
    assert!(cmd_decide("c", "hyperbolic").is_err());
    assert!(cmd_member("c", "cyclic:1").is_err());
    assert!(cmd_embed("a0").is_err());
    assert!(cmd_fuzz(0, 10, 1, "free", FuzzFamily::Mixed).is_err());
}

#[test]
fn fuzz_free_agrees() {
    let report = cmd_fuzz(1000, 40, 7, "free", FuzzFamily::Mixed).unwrap();
    let fuzz = report.fuzz.as_ref().unwrap();
    assert_eq!(fuzz.agreements, 1000);
    assert_eq!(fuzz.disagreements, 0);
    assert_eq!(fuzz.bound_violations, 0);
    assert!(fuzz.trivial_words > 0 && fuzz.member_words > fuzz.trivial_words);
    assert!(report.passed());
}

#[test]
fn fuzz_uniform_blocks_agree() {
    let report = cmd_fuzz(1000, 40, 7, "free", FuzzFamily::Uniform).unwrap();
    assert_eq!(report.fuzz.as_ref().unwrap().agreements, 1000);
    assert!(report.passed());
}

#[test]
fn fuzz_torsion_base_agrees() {
    for family in [FuzzFamily::Mixed, FuzzFamily::Uniform] {
        let report = cmd_fuzz(500, 60, 11, "cyclic:2", family).unwrap();
        assert_eq!(report.fuzz.as_ref().unwrap().agreements, 500);
        assert!(report.passed());
    }
}

#[test]
fn fuzz_single_empty_word() {
    let report = cmd_fuzz(1, 0, 123, "free-abelian", FuzzFamily::Mixed).unwrap();
    let fuzz = report.fuzz.as_ref().unwrap();
    assert_eq!(fuzz.agreements, 1);
    assert_eq!(fuzz.trivial_words, 1);
    assert_eq!(report.stats.query_count, 0);
}

#[test]
fn bench_rows_respect_bounds() {
    for oracle in ["free", "trivial", "cyclic:3"] {
        let report = cmd_bench(1024, oracle, DelayModel::Linear).unwrap();
        let bench = report.bench.as_ref().unwrap();
        assert_eq!(bench.rows.len(), 9);
        assert_eq!(bench.rows[0].n, 0);
        assert_eq!(bench.rows[0].query_count, 0);
        assert_eq!(bench.rows[0].simulated_cost, 0);
        for (row, n) in bench
            .rows
            .iter()
            .skip(1)
            .zip([8, 16, 32, 64, 128, 256, 512, 1024])
        {
            assert_eq!(row.n, n);
            assert!(row.pass);
            assert!(row.query_count <= row.query_bound);
            assert!(row.member_query_count <= row.member_query_bound);
            assert!(row.max_code_length <= row.code_length_bound.unwrap());
        }
        assert!(report.passed());
    }
}

#[test]
fn bench_delay_models_order_costs() {
    let cost = |model| {
        let report = cmd_bench(256, "free", model).unwrap();
        report
            .bench
            .unwrap()
            .rows
            .iter()
            .map(|r| r.simulated_cost)
            .sum::<u128>()
    };
    let (c, l, q) = (
        cost(DelayModel::Const),
        cost(DelayModel::Linear),
        cost(DelayModel::Quad),
    );
    assert!(c > 0 && c <= l && l <= q);
}

#[test]
fn bench_word_lengths_double() {
    let lengths: Vec<String> = bench_words(64)
        .iter()
        .map(|w| w.letter_length().to_string())
        .collect();
    assert_eq!(lengths, ["0", "8", "16", "32", "64"]);
    assert_eq!(bench_words(7).len(), 1);
}

#[test]
fn binary_exit_codes() {
    let ok = twogen(&["decide", "c c^-1"]);
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("trivial: true"));

    let embedded = twogen(&["embed", "a1"]);
    assert_eq!(
        String::from_utf8_lossy(&embedded.stdout).trim(),
        "c s c s^-1 c^-1 s c^-1 s^-1"
    );

    let bad_word = twogen(&["decide", "c q"]);
    assert!(!bad_word.status.success());
    assert!(String::from_utf8_lossy(&bad_word.stderr).contains("cannot parse"));

    assert!(!twogen(&["member", "c", "--oracle", "nope"])
        .status
        .success());
    assert!(!twogen(&["extract", "c"]).status.success());
    assert!(!twogen(&["fuzz", "--count", "0"]).status.success());
    assert!(twogen(&["fuzz", "--count", "50", "--seed", "3"])
        .status
        .success());
    assert!(twogen(&["bench", "--max-len", "128", "--delay", "quad"])
        .status
        .success());
}

#[test]
fn json_report_schema() {
    let (output, report) = json_report(&["member", &embed("a1 a3"), "--oracle", "free"]);
    assert!(output.status.success());
    for key in [
        "command",
        "input",
        "verdict",
        "value",
        "stats",
        "bounds",
        "elapsed_ms",
    ] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["command"], "member");
    assert_eq!(report["verdict"], true);
    assert_eq!(report["value"], "a1 a3");
    for key in [
        "query_count",
        "max_code_length",
        "total_code_length",
        "max_generator_index",
    ] {
        assert!(report["stats"][key].is_u64(), "missing stats.{key}");
    }
    for bound in report["bounds"].as_array().unwrap() {
        assert_eq!(bound["pass"], true);
        assert!(bound["observed"].as_u64() <= bound["limit"].as_u64());
    }

    let (_, report) = json_report(&["decide", "s"]);
    assert_eq!(report["verdict"], false);
    assert!(report.get("value").is_none());
}

#[test]
fn json_reports_are_deterministic() {
    for args in [
        vec!["decide", "c s c^-1 s^-1 c", "--oracle", "free-abelian"],
        vec![
            "fuzz",
            "--count",
            "200",
            "--max-len",
            "30",
            "--seed",
            "99",
            "--oracle",
            "cyclic:2",
        ],
        vec!["bench", "--max-len", "256", "--delay", "linear"],
    ] {
        let (_, first) = json_report(&args);
        let (_, second) = json_report(&args);
        assert_eq!(without_timing(first), without_timing(second), "{args:?}");
    }
}

#[test]
fn fuzz_json_carries_summary() {
    let (output, report) = json_report(&["fuzz", "--count", "100", "--seed", "5"]);
    assert!(output.status.success());
    let fuzz = &report["fuzz"];
    assert_eq!(fuzz["seed"], 5);
    assert_eq!(fuzz["agreements"], 100);
    assert_eq!(fuzz["failures"].as_array().unwrap().len(), 0);
}
