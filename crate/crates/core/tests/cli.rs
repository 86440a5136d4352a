use std::path::Path;
use std::process::Command;

use serde_json::Value;
use vresample::cli::run_cli_with;
use vresample::ingest::{write_binary_f64, Report, ReportPayload};
use vresample::limitdist::CdfModel;
use vresample::montecarlo::sample_distribution;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("vresample").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn chi_square_file(dir: &Path, n: usize) -> String {
    let path = dir.join("sample.bin");
    let values = sample_distribution(&CdfModel::chi_square(6).unwrap(), n, 31).unwrap();
    write_binary_f64(&path, &values).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn quantile_prints_value() {
    let (code, out, _) = run(&["quantile", "--law", "ks", "--alpha", "0.05"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["result"]["value"]["value"].as_f64().unwrap() - 1.358).abs() < 5e-4);
    let (_, out, _) = run(&["quantile", "--law", "cvm", "--alpha", "0.05"]);
    assert!((json(&out)["result"]["value"]["value"].as_f64().unwrap() - 0.4614).abs() < 2e-3);
}

#[test]
fn subsample_is_seeded() {
    let args = [
        "subsample",
        "--n",
        "1000",
        "--rule",
        "pow:0.5",
        "--seed",
        "3",
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let report = Report::from_json(&first).unwrap();
    let ReportPayload::Subsample(w) = report.result else {
        panic!("wrong payload")
    };
    assert_eq!(w.draw_count(), 32);
    assert_eq!(w.population_size(), 1000);
    assert_eq!(report.seeds, vec![3]);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = chi_square_file(dir.path(), 100);
    let (code, _, err) = run(&["band", "--input", &input, "--rule", "fixed:10"]);
    assert_eq!(code, 2);
    assert!(err.contains("--seed"));
    assert_eq!(run(&["quantile", "--law", "ks", "--alpha", "1.5"]).0, 2);
    assert_eq!(
        run(&["subsample", "--n", "10", "--rule", "pow:-1", "--seed", "1"]).0,
        2
    );
    assert_eq!(run(&["frobnicate"]).0, 2);
    let (code, _, _) = run(&[
        "band", "--input", &input, "--rule", "fixed:10", "--seed", "1", "--target", "f", "--theta",
        "1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn data_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = chi_square_file(dir.path(), 100);
    let (code, _, err) = run(&[
        "band", "--input", &input, "--n", "200", "--rule", "fixed:10", "--seed", "1",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
    let missing = dir.path().join("nope.bin");
    let (code, _, _) = run(&[
        "band",
        "--input",
        missing.to_str().unwrap(),
        "--rule",
        "fixed:10",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 1);
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "1.0\nabc\n2.0\n").unwrap();
    let (code, _, _) = run(&[
        "band",
        "--input",
        csv.to_str().unwrap(),
        "--rule",
        "frac:1",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn band_half_width_for_large_sample() {
    let dir = tempfile::tempdir().unwrap();
    let input = chi_square_file(dir.path(), 36_000);
    let plot = dir.path().join("plot.csv");
    let (code, out, _) = run(&[
        "band",
        "--input",
        &input,
        "--format",
        "bin",
        "--n",
        "36000",
        "--rule",
        "fixed:6000",
        "--target",
        "f",
        "--alpha",
        "0.05",
        "--seed",
        "7",
        "--truth",
        "chisq:6",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    let band = &v["result"]["value"]["band"];
    assert!((band["half_width"].as_f64().unwrap() - 0.018_936).abs() < 1e-5);
    assert!(v["result"]["value"]["covers_truth"].is_boolean());
    let rows = std::fs::read_to_string(&plot).unwrap();
    assert!(rows.starts_with("x,lower,upper,center"));
    assert_eq!(
        rows.lines().count() - 1,
        band["jump_points"].as_array().unwrap().len()
    );

    let (code, out, _) = run(&[
        "band",
        "--input",
        &input,
        "--rule",
        "fixed:6000",
        "--target",
        "fn",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    let hw = json(&out)["result"]["value"]["band"]["half_width"]
        .as_f64()
        .unwrap();
    assert!((hw - 0.017_533).abs() < 1e-5);
}

#[test]
fn gof_accepts_every_null_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = chi_square_file(dir.path(), 2000);
    let table = dir.path().join("null.txt");
    let points: String = (0..=400)
        .map(|k| {
            let x = k as f64 * 0.1;
            let p = if k == 400 {
                1.0
            } else {
                CdfModel::chi_square(6).unwrap().cdf(x)
            };
            format!("{x},{p}\n")
        })
        .collect();
    std::fs::write(&table, format!("# chi-square 6\n{points}")).unwrap();
    let table_arg = format!("table:{}", table.display());
    for null in [
        "uniform",
        "normal:6,3.4",
        "chisq:6",
        "t:5",
        table_arg.as_str(),
    ] {
        for family in ["ks", "cvm"] {
            for theta in ["0", "-1", "2"] {
                let (code, out, err) = run(&[
                    "gof", "--input", &input, "--null", null, "--family", family, "--theta", theta,
                    "--rule", "pow:0.9", "--seed", "4",
                ]);
                assert_eq!(code, 0, "{null} {family} {theta}: {err}");
                let v = json(&out);
                let p = v["result"]["value"]["p_value"].as_f64().unwrap();
                assert!((0.0..=1.0).contains(&p));
                if null == "uniform" {
                    assert_eq!(v["result"]["value"]["reject"], Value::Bool(true));
                }
            }
        }
    }
}

#[test]
fn ci_variants() {
    let dir = tempfile::tempdir().unwrap();
    let input = chi_square_file(dir.path(), 5000);
    let median = "5.348";
    let cases: &[&[&str]] = &[
        &["--target", "fn", "--variance", "fmn"],
        &["--target", "fn", "--variance", "fn"],
        &["--target", "f", "--variance", "truth", "--truth", "chisq:6"],
        &["--target", "f", "--theta", "-1", "--variance", "fmn"],
        &["--target", "f", "--theta", "3", "--variance", "fn"],
    ];
    for extra in cases {
        let mut args = vec![
            "ci", "--input", &input, "--x", median, "--rule", "pow:0.9", "--seed", "8",
        ];
        args.extend_from_slice(extra);
        let (code, out, err) = run(&args);
        assert_eq!(code, 0, "{extra:?}: {err}");
        let v = &json(&out)["result"]["value"];
        let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
        assert!(lo < 0.5 && 0.5 < hi, "{extra:?}: [{lo}, {hi}]");
    }
    let (code, _, _) = run(&[
        "ci",
        "--input",
        &input,
        "--x",
        "1",
        "--rule",
        "pow:0.9",
        "--seed",
        "8",
        "--variance",
        "truth",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_writes_report_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sim.json");
    let (code, text, _) = run(&[
        "simulate",
        "--table",
        "1",
        "--dist",
        "chisq:1",
        "--n",
        "50",
        "--rules",
        "pow:0.5,pow:1",
        "--reps",
        "50",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("classical"));
    let report = Report::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let ReportPayload::Coverage(cov) = report.result else {
        panic!("wrong payload")
    };
    assert_eq!(cov.rows.len(), 2);

    let (code, out, _) = run(&[
        "simulate", "--table", "gof", "--n", "100", "--reps", "40", "--family", "cvm", "--theta",
        "0,-1,2", "--seed", "2",
    ]);
    assert_eq!(code, 0);
    let report = Report::from_json(&out).unwrap();
    let ReportPayload::Level(level) = report.result else {
        panic!("wrong payload")
    };
    assert_eq!(level.rows.len(), 3);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_vresample");
    let ok = Command::new(exe)
        .args(["quantile", "--law", "normal", "--alpha", "0.025"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v = json(std::str::from_utf8(&ok.stdout).unwrap());
    assert!((v["result"]["value"]["value"].as_f64().unwrap() - 1.959_964).abs() < 1e-6);
    let bad = Command::new(exe)
        .args(["subsample", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
