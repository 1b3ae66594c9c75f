use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-cells")).args(args).env_remove("HECKE_CELLS_CACHE").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn cells_json_lists_h3() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["cells", "H3", "--format", "json"])).unwrap();
    let sizes: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["size"].as_str().unwrap()).collect();
    assert_eq!(sizes, ["1", "18", "25", "32", "25", "18", "1"]);
}

#[test]
fn output_does_not_depend_on_jobs() {
    for args in [["table", "B4"], ["fusion", "D4"], ["cellmatrix", "F4"]] {
        let mut a = args.to_vec();
        if args[0] == "fusion" {
            a.extend(["2", "--pf", "--graph"]);
        } else if args[0] == "cellmatrix" {
            a.push("5");
        }
        let one = stdout(&[a.as_slice(), &["--jobs", "1"]].concat());
        let three = stdout(&[a.as_slice(), &["--jobs", "3"]].concat());
        assert_eq!(one, three, "{a:?}");
    }
}

#[test]
fn budget_and_type_errors_exit_nonzero() {
    let out = run(&["cells", "B6"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = run(&["cells", "Q7"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
    let out = run(&["cellmatrix", "A3", "9"]);
    assert!(!out.status.success());
}

#[test]
fn verify_selects_checks() {
    let out = stdout(&["verify", "B3", "--props", "P2,P5,P7,magic", "--format", "tsv"]);
    let ids: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert!(ids.iter().all(|i| ["P2", "P5", "P7", "magic"].contains(i)));
    assert!(ids.contains(&"P7"));
    assert!(out.lines().skip(1).all(|l| l.ends_with("\t0")));
}

#[test]
fn cache_env_overrides_flag() {
    let flag_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_hecke-cells");
    let out = Command::new(bin)
        .args(["cells", "A3", "--cache", flag_dir.path().to_str().unwrap()])
        .env("HECKE_CELLS_CACHE", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
    let again = Command::new(bin).args(["cells", "A3"]).env("HECKE_CELLS_CACHE", env_dir.path()).output().unwrap();
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn fusion_reports_golden_ratio_for_h3() {
    let out = stdout(&["fusion", "H3", "1", "--pf"]);
    assert!(out.contains("1.618033988750"));
}

#[test]
fn classify_prints_module_counts() {
    let out = stdout(&["classify", "A3"]);
    assert!(out.contains("strongly regular"));
    assert!(out.contains("cell 0: 1 classes"));
}
