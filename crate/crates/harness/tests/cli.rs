use std::path::PathBuf;
use std::process::{Command, Output};

fn ddchan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddchan")).args(args).output().expect("spawn ddchan")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ddchan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const CONFIG: &str = r#"
preset = "cli"
trials = 2
system.K = 64
system.N = 80
system.L = 8
pilots.count = 48
estimators.kinds = ["basic"]
estimators.solvers = ["omp"]
sweep.axis = "snr"
sweep.values = [15.0]
"#;

#[test]
fn run_then_plot() {
    let cfg = scratch("run.toml");
    std::fs::write(&cfg, CONFIG).unwrap();
    let csv = scratch("run.csv");
    let out = ddchan(&["run", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap(), "--seed", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().ends_with(",5"));

    let svg = scratch("run.svg");
    let out = ddchan(&["plot", "--in", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("basic/dft/omp"));
}

#[test]
fn bad_config_gives_error_line() {
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, format!("{CONFIG}\nsweep.colour = 1\n")).unwrap();
    let out = ddchan(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    let line = err.lines().last().unwrap();
    assert!(line.starts_with("error: kind=config msg=\""), "{line}");
    assert!(line.contains("colour"));
}

#[test]
fn missing_file_gives_io_error() {
    let out = ddchan(&["run", "--config", "/nonexistent/x.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: kind=io msg="));
}

#[test]
fn usage_errors_exit_two() {
    let out = ddchan(&["preset", "--name", "fig9-desk"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: kind=usage msg="));
    let out = ddchan(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn preset_show_prints_toml() {
    let out = ddchan(&["preset", "--name", "fig4-desk", "--show"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sweep.axis = \"pilots\""));
}

#[test]
fn diag_reports_bounds() {
    let out = ddchan(&["diag", "--preset", "fig3-desk"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("D = 64, J = 8, pilots = 256"), "{text}");
    assert!(text.contains("coherence") && text.contains("pilot bound"));
}
