use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn growthlab(config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, body).unwrap();
    path
}

const THEOREM_A: &str = r#"
experiment = "theorem_a"

[group]
kind = "free"
rank = 2

[subgroups]
h = ["a"]
k = ["a"]

[parameters]
r0 = 0

[radius]
r_min = 4
r_max = 10
"#;

#[test]
fn theorem_a_run_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), THEOREM_A);
    let out = dir.path().join("run");
    let output = growthlab(&config, &out, &[]);
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let mut names: Vec<String> =
        fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["manifest.toml", "table.csv", "verdict.txt"]);
    let verdict = fs::read_to_string(out.join("verdict.txt")).unwrap();
    assert!(verdict.contains("status=PASS"), "{verdict}");
    let manifest: toml::Table = fs::read_to_string(out.join("manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["experiment"].as_str(), Some("theorem_a"));
    let bytes = fs::read(&config).unwrap();
    use sha2::Digest;
    assert_eq!(manifest["config_sha256"].as_str().unwrap(), hex::encode(sha2::Sha256::digest(bytes)));
}

#[test]
fn finite_index_subgroup_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &THEOREM_A.replace("h = [\"a\"]", "h = [\"aa\", \"b\", \"abA\"]"));
    let output = growthlab(&config, &dir.path().join("run"), &[]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("finite index"), "{stderr}");
}

#[test]
fn ball_budget_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &format!("{THEOREM_A}\n[budgets]\nball_cap = 1000\n"));
    let output = growthlab(&config, &dir.path().join("run"), &["--experiment", "growth"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("budget"), "{stderr}");
}

#[test]
fn unknown_field_names_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &THEOREM_A.replace("r0 = 0", "r0 = 0\nbogus = 1"));
    let output = growthlab(&config, &dir.path().join("run"), &[]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), THEOREM_A);
    for experiment in ["growth", "theorem_a", "calibration"] {
        let (a, b) = (dir.path().join(format!("{experiment}-a")), dir.path().join(format!("{experiment}-b")));
        for out in [&a, &b] {
            let output = growthlab(&config, out, &["--experiment", experiment, "--seed", "3", "--radius", "8"]);
            // A failing verdict also exits with 1, so check for the diagnostic instead.
            assert!(output.stderr.is_empty(), "{}", String::from_utf8_lossy(&output.stderr));
        }
        for file in ["table.csv", "verdict.txt"] {
            assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{experiment}/{file}");
        }
    }
}

#[test]
fn degenerate_run_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = "experiment = \"barrier_stats\"\n[group]\nkind = \"free\"\nrank = 2\n[elements]\nbarrier = \"ab\"\n[parameters]\nepsilon = 1\n[radius]\nr_max = 3\n";
    let config = write_config(dir.path(), body);
    let output = growthlab(&config, &dir.path().join("run"), &[]);
    assert_eq!(output.status.code(), Some(2));
}
