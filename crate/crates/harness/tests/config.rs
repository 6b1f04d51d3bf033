use ddchan_harness::config::{Axis, ChannelKind, EstimatorKind, SolverKind};
use ddchan_harness::{presets, ExperimentConfig, HarnessError};

const MINIMAL: &str = r#"
trials = 2
system.K = 64
system.N = 80
system.L = 4
pilots.count = 32
estimators.kinds = ["basic"]
estimators.solvers = ["omp"]
sweep.axis = "snr"
sweep.values = [10.0, 20.0]
"#;

#[test]
fn minimal_config_fills_defaults() {
    let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
    assert_eq!(cfg.preset, "custom");
    assert_eq!(cfg.system.delta_k, 4);
    assert_eq!(cfg.system.delta_l, 1);
    assert_eq!(cfg.channel.kind, ChannelKind::Ensemble);
    assert_eq!(cfg.estimators.kinds, vec![EstimatorKind::Basic]);
    assert_eq!(cfg.estimators.solvers, vec![SolverKind::Omp]);
    assert_eq!(cfg.estimators.rounds, vec![0]);
    assert_eq!(cfg.sweep.axis, Axis::Snr);
    assert_eq!(cfg.delay_span(), 16);
    assert_eq!(cfg.pilot_count(10.0), 32);
    assert_eq!(cfg.snr_db(10.0), 10.0);
}

#[test]
fn partial_channel_section_is_accepted() {
    let text = format!("{MINIMAL}\nchannel.max_doppler = 0.1\n");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.channel.max_doppler, 0.1);
    assert_eq!(cfg.channel.min_doppler, 0.0);
}

#[test]
fn unknown_key_is_rejected() {
    let text = format!("{MINIMAL}\nchannel.max_dopler = 0.1\n");
    match ExperimentConfig::from_toml(&text) {
        Err(HarnessError::Config(msg)) => assert!(msg.contains("max_dopler"), "{msg}"),
        other => panic!("expected config error, got {other:?}"),
    }
}

#[test]
fn unknown_top_level_key_is_rejected() {
    let text = format!("{MINIMAL}\ntrails = 3\n");
    assert!(matches!(ExperimentConfig::from_toml(&text), Err(HarnessError::Config(_))));
}

#[test]
fn bad_sweeps_are_rejected() {
    for values in ["[]", "[20.0, 10.0]", "[10.0, 10.0]", "[nan]"] {
        let text = MINIMAL.replace("[10.0, 20.0]", values);
        assert!(ExperimentConfig::from_toml(&text).is_err(), "{values}");
    }
    let zero = MINIMAL.replace("trials = 2", "trials = 0");
    assert!(ExperimentConfig::from_toml(&zero).is_err());
    let pilots = MINIMAL.replace("\"snr\"", "\"pilots\"").replace("[10.0, 20.0]", "[8.5, 16.0]");
    assert!(ExperimentConfig::from_toml(&pilots).is_err());
}

#[test]
fn fraction_sets_pilot_count() {
    let text = MINIMAL.replace("pilots.count = 32", "pilots.fraction = 0.125");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.pilot_count(10.0), 32);
    let bad = MINIMAL.replace("pilots.count = 32", "pilots.fraction = 1.5");
    assert!(ExperimentConfig::from_toml(&bad).is_err());
}

#[test]
fn doppler_axis_overrides_channel() {
    let text = MINIMAL.replace("\"snr\"", "\"doppler\"").replace("[10.0, 20.0]", "[0.03, 0.2]");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.max_doppler(0.2), 0.2);
    assert_eq!(cfg.snr_db(0.2), 20.0);
}

#[test]
fn every_preset_parses() {
    for name in presets::NAMES {
        let cfg = presets::preset(name).unwrap();
        assert_eq!(cfg.preset, name);
        assert!(presets::preset_text(name).unwrap().contains(name));
    }
    assert!(presets::preset("fig6-desk").is_err());
}

#[test]
fn desk_presets_match_the_experiment_shapes() {
    let f3 = presets::preset("fig3-desk").unwrap();
    assert_eq!((f3.system.k, f3.system.l, f3.system.delta_k, f3.system.delta_l), (256, 8, 4, 1));
    assert_eq!(f3.pilot_count(20.0), 256);
    assert_eq!(f3.trials, 50);
    assert!(f3.sweep.values.contains(&20.0));

    let f4 = presets::preset("fig4-desk").unwrap();
    assert_eq!(f4.sweep.axis, Axis::Pilots);
    assert_eq!(f4.sweep.values, vec![64.0, 128.0, 256.0, 512.0]);
    assert_eq!(f4.sweep.snr_db, 17.0);

    let f5 = presets::preset("fig5-desk").unwrap();
    assert_eq!((f5.system.k, f5.system.l), (256, 4));
    assert_eq!(f5.pilot_count(0.2), 32);
    assert_eq!(f5.sweep.values, vec![0.03, 0.1, 0.2]);
    assert_eq!(f5.dd.k_max, 3);
    assert_eq!(f5.dd.equalizer_iters, 15);
    assert!(f5.estimators.rounds.contains(&5) && f5.estimators.rounds.contains(&9));
}

#[test]
fn error_line_escapes_quotes() {
    let e = HarnessError::Config("bad \"value\"\nnext".into());
    assert_eq!(e.error_line(), r#"error: kind=config msg="bad \"value\" next""#);
}
