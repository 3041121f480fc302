//! End-to-end runs of the `simon32` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use simon32_core::pddt::load_pddt;

fn simon32(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simon32"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SIMON32_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

#[test]
fn ten_round_trail_prints_weight_17() {
    let dir = tempfile::tempdir().unwrap();
    let o = simon32(
        dir.path(),
        &[
            "trail", "--dl", "0x8000", "--dr", "0x8000", "--rounds", "10",
        ],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.starts_with("round,dL,dR,log2p\n0,0xa000,0x8000,-1\n"),
        "{text}"
    );
    assert!(text.ends_with("total,,,-17\n"), "{text}");
}

#[test]
fn small_word_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let common = ["--word-size", "4", "--trials", "3"];
    let run = |cmd: &str| simon32(out, &[&[cmd][..], &common[..]].concat());

    let o = run("pddt");
    assert!(o.status.success());
    let table = load_pddt(out.join("pddt.bin")).unwrap();
    assert!(stdout(&o).contains(&format!("pddt: {} entries", table.len())));

    let o = run("sort");
    assert!(o.status.success());
    let sig = load_pddt(out.join("significant.bin")).unwrap();
    let non = load_pddt(out.join("non_significant.bin")).unwrap();
    assert_eq!(sig.len() + non.len(), table.len());
    assert!(sig.entries().iter().all(|t| t.weight <= 1));
    assert!(non.entries().iter().all(|t| t.weight > 1));

    let o = run("experiment");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("ttest.csv").exists());
    // Heatmap bins 16-bit words only.
    assert!(!out.join("heatmap.csv").exists());

    let o = run("extract");
    assert!(o.status.success());
    let o = run("trails");
    assert!(o.status.success());
    let report = data_lines(&out.join("trail_report.csv"));
    let promising = data_lines(&out.join("promising.csv"));
    assert_eq!(report.len(), promising.len());
    assert_eq!(data_lines(&out.join("comparison.csv")).len(), 1 + 8 + 1);
}

#[test]
fn empty_pddt_gives_empty_files_and_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = simon32(out, &["run-all", "--pddt-threshold", "2.0"]);
    assert_eq!(
        o.status.code(),
        Some(5),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("pddt: 0 entries"));
    assert!(load_pddt(out.join("significant.bin")).unwrap().is_empty());
    assert!(load_pddt(out.join("non_significant.bin"))
        .unwrap()
        .is_empty());
    let tt = fs::read_to_string(out.join("ttest.csv")).unwrap();
    assert!(tt.contains("# note not computed"), "{tt}");
    assert_eq!(data_lines(&out.join("promising.csv")), ["a,b,c,hw"]);

    let o = simon32(out, &["trails"]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(data_lines(&out.join("trail_report.csv")).len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = simon32(out, &["pddt", "--sig-threshold", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = simon32(out, &["pddt", "--word-size", "40"]);
    assert_eq!(o.status.code(), Some(2));

    let o = simon32(out, &["sort", "--input", "/nonexistent/pddt.bin"]);
    assert_eq!(o.status.code(), Some(3));

    fs::write(out.join("pddt.bin"), b"PDDT1\x10\x03garbage").unwrap();
    let o = simon32(out, &["sort"]);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn json_format_and_env_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_simon32"))
        .args(["pddt", "--word-size", "4", "--csv", "--format", "json"])
        .env("SIMON32_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("pddt.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["word_size"], 4);
    assert_eq!(doc["config"]["format"], "json");
    assert_eq!(doc["columns"], serde_json::json!(["a", "b", "c", "log2p"]));
    assert_eq!(doc["rows"][0]["a"], "0x0000");
}

#[test]
fn full_run_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = simon32(out, &["run-all"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(data_lines(&out.join("heatmap.csv")).len(), 1 + 4096);
    let cmp = data_lines(&out.join("comparison.csv"));
    assert_eq!(cmp.last().unwrap(), "SIMON32,20,2^-32,-32,,computed");
    let tt = data_lines(&out.join("ttest.csv"));
    assert_eq!(tt[0], "t,p,df");
    let p: f64 = tt[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(p < 1e-6);
    for name in [
        "heatmap.svg",
        "boxplot.svg",
        "histogram_significant.svg",
        "histogram_sample.svg",
    ] {
        let svg = fs::read_to_string(out.join(name)).unwrap();
        assert!(svg.starts_with("<!-- simon32 "), "{name}");
        assert!(svg.trim_end().ends_with("</svg>"), "{name}");
    }
    let trails = fs::read_dir(out.join("trails")).unwrap().count();
    assert_eq!(trails, data_lines(&out.join("promising.csv")).len() - 1);
    let text = fs::read_to_string(out.join("comparison.txt")).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("SIMON32  20") && l.ends_with("computed")));
}
