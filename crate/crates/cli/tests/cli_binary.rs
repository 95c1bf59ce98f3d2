use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fairwpt"))
}

#[test]
fn run_writes_files_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--iterations", "120", "--seed", "4", "--allocator", "trpm", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("ssep_log_trpm_walk0.03.csv").exists());
    assert!(dir.path().join("summary.csv").exists());
}

#[test]
fn config_file_and_set_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(&cfg, "iterations = 80\nbatch_size = 20\nselector = round_robin\n").unwrap();
    let out = bin()
        .args(["run", "--set", "allocator=epd", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = fs::read_to_string(dir.path().join("o/round_robin_log_epd_walk0.03.csv")).unwrap();
    assert_eq!(trace.lines().count(), 5);
}

#[test]
fn bad_value_exits_nonzero_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--set", "e_c=-1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("e_c"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn fit_subcommand_reads_samples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let mut text = String::from("input_mW,output_mW\n");
    for i in 1..=30 {
        let x = 0.1 * i as f64;
        text.push_str(&format!("{x},{}\n", 0.0319 * (3.6169 * x).ln_1p()));
    }
    fs::write(&path, text).unwrap();
    let out = bin().args(["fit", "--samples"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("a = 3.19"), "{stdout}");
    assert!(stdout.contains("b = 3.6169"), "{stdout}");
}
