//! End-to-end runs of the command line binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofic-gibbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("stderr is a JSON line")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn out_dir(tmp: &tempfile::TempDir, name: &str) -> PathBuf {
    tmp.path().join(name)
}

#[test]
fn info_reports_magic_word_and_specification_length() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_dir(&tmp, "even");
    let o = run(&["info", "--subshift", &data("even_shift.json"), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let info = read_json(&out.join("info.json"));
    assert_eq!(info["info"]["magic_word"], "1", "{info}");
    assert_eq!(info["info"]["specification_length"], 2);

    let out = out_dir(&tmp, "full");
    let o = run(&["info", "--subshift", &data("full_shift.json"), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read_json(&out.join("info.json"))["info"]["specification_length"], 0);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\n  \"alphabet\": [\"0\", \"1\"],\n  \"forbidden\": [\"11\"\n}\n").unwrap();
    let o = run(&["info", "--subshift", bad.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["code"], "ParseError");
    assert_eq!(e["context"]["command"], "info");
    assert!(e["context"]["line"].as_u64().unwrap() >= 3);
}

#[test]
fn converge_writes_one_row_per_order() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_dir(&tmp, "conv");
    let o = run(&[
        "converge",
        "--subshift",
        &data("even_shift.json"),
        "--m-range",
        "1..6",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_json(&out.join("convergence.json"));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["m"], i + 1);
        assert!(r["pressure_gap_lo"].as_f64().unwrap() >= 0.0);
    }
    assert!(doc["pressure_fit"]["slope"].as_f64().unwrap() < 0.0);
    assert_eq!(doc["provenance"]["command"], "converge");

    let o = run(&[
        "converge",
        "--subshift",
        &data("even_shift.json"),
        "--n",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pressure_summary_on_the_golden_mean() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_dir(&tmp, "p");
    let o = run(&[
        "pressure",
        "--subshift",
        &data("golden_mean.json"),
        "--m",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.4812"), "{}", stdout(&o));
    let csv = fs::read_to_string(out.join("pressure.csv")).unwrap();
    assert!(csv.starts_with("m,n,value,lo,hi,radius"));
    let meta = read_json(&out.join("pressure.meta.json"));
    assert_eq!(meta["provenance"]["inputs"]["subshift"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn mixing_with_overlapping_cylinders_uses_direct_summation() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_dir(&tmp, "mix");
    let o = run(&[
        "mixing",
        "--subshift",
        &data("golden_mean.json"),
        "--a",
        "01",
        "--b",
        "0",
        "--s",
        "1,4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("mixing.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with("direct"), "{csv}");
    assert!(lines[2].ends_with("markov"), "{csv}");
}

#[test]
fn outputs_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let out = out_dir(&tmp, &format!("run{k}"));
        let o = run(&[
            "entropy",
            "--subshift",
            &data("even_shift.json"),
            "--potential",
            &data("holder.json"),
            "--m-range",
            "1..3",
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        texts.push(fs::read(out.join("entropy.json")).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    fs::copy(data("golden_mean.json"), tmp.path().join("golden.json")).unwrap();
    let cfg = tmp.path().join("run.json");
    fs::write(
        &cfg,
        r#"{ "subshift": "golden.json", "m_range": "1..2", "out": "results" }"#,
    )
    .unwrap();
    let o = run(&["pressure", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(tmp.path().join("results/pressure.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let o = run(&["pressure", "--config", cfg.to_str().unwrap(), "--m-range", "4"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(tmp.path().join("results/pressure.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("4,"));
}

#[test]
fn exceeding_the_budget_exits_with_code_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&[
        "pressure",
        "--subshift",
        &data("even_shift.json"),
        "--m",
        "12",
        "--max-words",
        "50",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stderr_json(&o)["code"], "BudgetExceeded");
}
