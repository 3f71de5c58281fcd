//! The command-line front end: subcommands, exit codes, config precedence.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn armey(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_armey"))
        .args(args)
        .current_dir(dir)
        .env_remove("ARMEY_OUTPUT_DIR")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_arg() -> String {
    fixture_csv().display().to_string()
}

#[test]
fn analysis_subcommands_succeed_on_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_arg();
    for (cmd, expect) in [
        ("ingest-check", "sha256"),
        ("unitroot", "GGDP"),
        ("fit", "Model I (GFCF)"),
        ("diagnose", "Breusch"),
        ("cusum", "CUSUM"),
        ("armey", "GFCF"),
        ("robustness", "PGFCF1"),
    ] {
        let o = armey(dir.path(), &[cmd, "--data", &data]);
        assert_eq!(code(&o), 0, "{cmd}: {}", stderr(&o));
        assert!(stdout(&o).contains(expect), "{cmd} output lacks `{expect}`:\n{}", stdout(&o));
    }
}

#[test]
fn replicate_writes_reports_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let o = armey(dir.path(), &["replicate", "--data", &data_arg(), "--output-dir", "run"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in ["report.txt", "report.kv", "scatter_gfcf.svg", "scatter_gfce.svg", "cusum_gfcf.svg", "cusum_gfce.svg"] {
        assert!(dir.path().join("run").join(f).is_file(), "{f} missing");
    }
    assert!(stdout(&o).contains("effective n"));
}

#[test]
fn assert_mode_reports_mismatches_with_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    let o = armey(dir.path(), &["replicate", "--assert", "--data", &data_arg()]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("FAIL model.gfcf.beta3"));
    assert!(out.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).count() >= 20);
}

#[test]
fn missing_data_path_names_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let o = armey(dir.path(), &["replicate"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("stage `ingest`"), "{}", stderr(&o));
    let o = armey(dir.path(), &["fit", "--data", ""]);
    assert_eq!(code(&o), 2);
}

#[test]
fn invalid_configuration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_arg();
    for args in [
        vec!["unitroot", "--data", &data, "--za-trim", "0.7"],
        vec!["diagnose", "--data", &data, "--levels", "7"],
        vec!["fit", "--data", &data, "--model", "tax"],
        vec!["fit", "--data", &data, "--set", "no.such.key=1"],
    ] {
        let o = armey(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("stage `config`"), "{}", stderr(&o));
    }
}

#[test]
fn data_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = armey(dir.path(), &["fit", "--data", "no_such_file.csv"]);
    assert_eq!(code(&o), 3);
    std::fs::write(dir.path().join("gap.csv"), "year,gdp\n1971,1\n1973,2\n").unwrap();
    let o = armey(dir.path(), &["ingest-check", "--data", "gap.csv"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("gap"), "{}", stderr(&o));
    std::fs::write(dir.path().join("dup.csv"), "year,gdp\n1980,1\n1980,2\n").unwrap();
    let o = armey(dir.path(), &["ingest-check", "--data", "dup.csv"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn too_few_years_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture_csv()).unwrap();
    let short: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.path().join("short.csv"), short).unwrap();
    let o = armey(dir.path(), &["fit", "--data", "short.csv"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("stage `fit`"));

    // Plots fall back to the observations alone.
    let o = armey(dir.path(), &["plot-scatter", "--data", "short.csv", "--out", "s.svg"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = std::fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    assert_eq!(svg.matches("<path").count(), 0);
}

#[test]
fn plots_are_written_where_asked() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_arg();
    let o = armey(dir.path(), &["plot-scatter", "--data", &data, "--model", "gfce", "--out", "figs/a.svg"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = std::fs::read_to_string(dir.path().join("figs/a.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 44);
    assert_eq!(svg.matches("<path class=\"fit\"").count(), 1);

    let o = armey(dir.path(), &["plot-cusum", "--data", &data, "--cusum-level", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let svg = std::fs::read_to_string(dir.path().join("out/cusum_gfcf.svg")).unwrap();
    assert!(svg.contains("band: 1% level"));
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.kv"), "output_dir = from_file\nseed = 7\n").unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_armey"));
        c.args(["simulate", "--config", "run.kv"]).current_dir(dir.path()).env_remove("ARMEY_OUTPUT_DIR");
        if let Some(e) = env {
            c.env("ARMEY_OUTPUT_DIR", e);
        }
        if let Some(f) = flag {
            c.args(["--output-dir", f]);
        }
        let o = c.output().unwrap();
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        stdout(&o)
    };
    // The config file's output_dir is relative to the current directory.
    assert!(run(None, None).contains("from_file/synthetic.csv"));
    assert!(run(Some("from_env"), None).contains("from_env/synthetic.csv"));
    assert!(run(Some("from_env"), Some("from_flag")).contains("from_flag/synthetic.csv"));
    let a = std::fs::read(dir.path().join("from_file/synthetic.csv")).unwrap();
    let b = std::fs::read(dir.path().join("from_flag/synthetic.csv")).unwrap();
    assert_eq!(a, b, "same seed from the config file");
    assert_ne!(a, std::fs::read(fixture_csv()).unwrap(), "seed 7 differs from the default");
}

#[test]
fn simulate_reproduces_the_bundled_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let o = armey(dir.path(), &["simulate", "--output-dir", "."]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let root = workspace_root();
    for f in ["synthetic.csv", "synthetic.truth.kv"] {
        assert_eq!(
            std::fs::read(dir.path().join(f)).unwrap(),
            std::fs::read(root.join("data").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn schema_file_renames_columns() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture_csv()).unwrap();
    std::fs::write(dir.path().join("src.csv"), text.replacen("gdp,", "NY.GDP.MKTP.KD,", 1)).unwrap();
    std::fs::write(
        dir.path().join("schema.kv"),
        "[columns]\ngdp = NY.GDP.MKTP.KD\ngfcf = gfcf\ngfce_share = gfce_share\nexports = exports\npop_growth = pop_growth\n",
    )
    .unwrap();
    let o = armey(dir.path(), &["fit", "--data", "src.csv", "--schema", "schema.kv", "--model", "gfcf"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let direct = armey(dir.path(), &["fit", "--data", &data_arg(), "--model", "gfcf"]);
    assert_eq!(stdout(&o), stdout(&direct));
}
