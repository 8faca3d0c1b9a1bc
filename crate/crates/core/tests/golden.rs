//! `derive` reports for the valid corpus, compared line by line with the
//! files under `tests/golden`. Set `HOMFIELD_BLESS=1` to rewrite them.

use std::fs;
use std::path::Path;

use homfield::driver::{cmd_derive, load_model, ReportFormat};

/// Drops the version header.
fn body(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("# homfield")).map(|l| format!("{l}\n")).collect()
}

#[test]
fn derive_reports_match_golden_files() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let bless = std::env::var_os("HOMFIELD_BLESS").is_some();
    let mut seen = 0;
    for entry in fs::read_dir(root.join("corpus/valid")).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let model = load_model(&fs::read_to_string(&path).unwrap()).unwrap();
        let report = body(&cmd_derive(&model, ReportFormat::Text).unwrap());
        let golden = root.join("golden").join(format!("{stem}.txt"));
        if bless {
            fs::write(&golden, &report).unwrap();
        }
        let expected = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing {}", golden.display()));
        assert_eq!(report, expected, "{stem}");
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn reports_are_deterministic() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/valid");
    for entry in fs::read_dir(root).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        let a = cmd_derive(&load_model(&text).unwrap(), ReportFormat::Json).unwrap();
        let b = cmd_derive(&load_model(&text).unwrap(), ReportFormat::Json).unwrap();
        assert_eq!(a, b);
    }
}
