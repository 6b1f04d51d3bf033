use ddchan_harness::output::{parse_csv, to_csv_bytes, HEADER};
use ddchan_harness::plot::render_svg;
use ddchan_harness::sweep::trial_rng;
use ddchan_harness::{run_sweep, summarize, ExperimentConfig, Row};
use rand::Rng;

const SMALL: &str = r#"
preset = "small"
seed = 3
trials = 3
system.K = 64
system.N = 80
system.L = 8
pilots.count = 48
estimators.kinds = ["basic", "generalized", "dd"]
estimators.solvers = ["omp", "lasso"]
estimators.rounds = [0, 1]
basis.max_iter = 10
basis.inner_iter = 50
sweep.axis = "snr"
sweep.values = [10.0, 25.0]
"#;

fn row(trial: usize, mse_db: f64) -> Row {
    Row {
        preset: "p".into(),
        axis: "snr".into(),
        axis_value: 17.5,
        trial,
        estimator: "basic".into(),
        basis: "dft".into(),
        solver: "omp".into(),
        num_pilots: 64,
        mse_db,
        ber: 0.125,
        ref_ber: 0.0,
        seconds: None,
        seed: 9,
    }
}

#[test]
fn csv_round_trip() {
    let mut rows = vec![row(0, -12.345678901234567), row(1, -100.0)];
    rows[1].seconds = Some(0.25);
    let bytes = to_csv_bytes(&rows).unwrap();
    assert_eq!(parse_csv(&bytes).unwrap(), rows);
}

#[test]
fn csv_single_row_has_two_lines() {
    let bytes = to_csv_bytes(&[row(0, -3.0)]).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], HEADER.join(","));
    assert_eq!(lines[1], "p,snr,17.5,0,basic,dft,omp,64,-3,0.125,0,,9");
}

#[test]
fn csv_empty_is_an_error() {
    assert!(to_csv_bytes(&[]).is_err());
}

#[test]
fn csv_rejects_foreign_header() {
    assert!(parse_csv(b"a,b,c\n1,2,3\n").is_err());
    let bad = format!("{}\np,snr,x,0,basic,dft,omp,64,-3,0.1,0,,9\n", HEADER.join(","));
    assert!(parse_csv(bad.as_bytes()).is_err());
}

#[test]
fn trial_streams_are_independent() {
    let a: u64 = trial_rng(1, 0, 0).random();
    let b: u64 = trial_rng(1, 0, 1).random();
    let c: u64 = trial_rng(1, 1, 0).random();
    let a2: u64 = trial_rng(1, 0, 0).random();
    assert_eq!(a, a2);
    assert!(a != b && a != c && b != c);
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    let one = run_sweep(&cfg, Some(1)).unwrap();
    let two = run_sweep(&cfg, Some(2)).unwrap();
    assert_eq!(to_csv_bytes(&one.rows).unwrap(), to_csv_bytes(&two.rows).unwrap());
    assert_eq!(one.aborted, 0);
    assert_eq!(one.attempted, 6);
    // 2 points x 3 trials x (basic + generalized + 2 dd rounds) x 2 solvers
    assert_eq!(one.rows.len(), 2 * 3 * 4 * 2);
}

#[test]
fn sweep_rows_are_sane() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    let res = run_sweep(&cfg, Some(1)).unwrap();
    for r in &res.rows {
        assert_eq!(r.preset, "small");
        assert_eq!(r.seed, 3);
        assert!(r.seconds.is_none());
        assert!(r.mse_db.is_finite() && r.mse_db >= -100.0);
        assert!((0.0..=1.0).contains(&r.ber));
    }
    let labels: Vec<String> = summarize(&res.rows).iter().map(|s| s.label()).collect();
    for want in ["basic/dft/omp", "generalized/optimized/lasso", "dd_R0/dft-dpss/omp", "dd_R1/dft-dpss/lasso"] {
        assert!(labels.iter().any(|l| l == want), "{want} missing from {labels:?}");
    }
    // more SNR, lower error
    let s = summarize(&res.rows);
    let at = |v: f64| s.iter().find(|x| x.axis_value == v && x.label() == "basic/dft/omp").unwrap().mse_db;
    assert!(at(25.0) < at(10.0));
}

#[test]
fn seed_changes_the_output() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    let mut other = cfg.clone();
    other.seed = 4;
    let a = run_sweep(&cfg, Some(1)).unwrap();
    let b = run_sweep(&other, Some(1)).unwrap();
    assert_ne!(to_csv_bytes(&a.rows).unwrap(), to_csv_bytes(&b.rows).unwrap());
}

#[test]
fn identity_channel_is_recovered_exactly() {
    let text = SMALL
        .replace("estimators.kinds = [\"basic\", \"generalized\", \"dd\"]", "estimators.kinds = [\"basic\"]")
        .replace("pilots.count = 48", "pilots.count = 128\nchannel.kind = \"identity\"\nchannel.noise = false");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    let res = run_sweep(&cfg, Some(1)).unwrap();
    for r in res.rows.iter().filter(|r| r.solver == "omp") {
        assert!(r.mse_db <= -80.0, "{}", r.mse_db);
        assert_eq!(r.ber, 0.0);
    }
}

#[test]
fn svg_has_every_series() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    let res = run_sweep(&cfg, Some(1)).unwrap();
    let svg = render_svg(&res.rows).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("generalized/optimized/omp"));
    assert!(svg.contains("known channel, one-tap"));
    assert!(render_svg(&[]).is_err());
}
