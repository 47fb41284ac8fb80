use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn triloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen_sp(path: &Path) {
    let out = triloc(&[
        "gen", "product", "--left", "split:2:1", "--right", "split:2:1", "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generated_files_validate_and_are_deterministic() {
    let a = scratch("sp_a.json");
    let b = scratch("sp_b.json");
    gen_sp(&a);
    gen_sp(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = triloc(&["validate", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["objects"], 16);
}

#[test]
fn corrupted_composition_fails_validation() {
    let path = scratch("sp_bad.json");
    gen_sp(&path);
    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    // Perturb the first nonzero-target composition tensor entry.
    let compose = doc["compose"].as_array_mut().unwrap();
    let entry = compose
        .iter_mut()
        .find(|e| e["tensor"].as_array().is_some_and(|t| !t.is_empty()))
        .unwrap();
    let cell = &mut entry["tensor"][0][0][0];
    *cell = serde_json::json!(cell.as_i64().unwrap() + 1);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = triloc(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_file_reports_location() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"objects\": [\"a\",\n  }").unwrap();
    let out = triloc(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn seeded_check_is_reproducible() {
    let path = scratch("sp_check.json");
    gen_sp(&path);
    let run = || {
        triloc(&[
            "check", "--cat", path.to_str().unwrap(), "--thick", "e1o0xe0o0,e0o1xe0o0",
            "--suite", "ore", "--seed", "7",
        ])
    };
    let (x, y) = (run(), run());
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn hom_commands_report_closed_forms() {
    let path = scratch("sp_hom.json");
    gen_sp(&path);
    let cat = path.to_str().unwrap();
    let thick = "e1o0xe0o0,e0o1xe0o0";
    for (cmd, factors) in [("loc-hom", [2]), ("coloc-hom", [2])] {
        let out = triloc(&[cmd, "--cat", cat, "--thick", thick, "--src", "e1o0xe1o0", "--dst", "e1o0xe1o0"]);
        assert_eq!(out.status.code(), Some(0));
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["group"]["factors"], serde_json::json!(factors));
    }
    let out = triloc(&[
        "les", "--cat", cat, "--thick", thick, "--functor", "hom:e1o0xe1o0", "--object", "e1o1xe0o1",
        "--window", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["exact"], true);
}
