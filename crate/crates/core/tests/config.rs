use kleinlab::config::{load_preset, preset, ConfigError, ExperimentConfig, PRESETS};

#[test]
fn every_preset_parses() {
    for (name, _) in PRESETS {
        let loaded = load_preset(name).unwrap();
        assert_eq!(loaded.config.name, *name);
        assert_eq!(loaded.hash.len(), 64);
    }
}

#[test]
fn group_presets_build_groups() {
    for name in ["fuchsian", "thin", "octahedral", "symmetric"] {
        let g = load_preset(name).unwrap().config.group().unwrap();
        assert!(g.rank() >= 2);
    }
    assert!(load_preset("fuchsian").unwrap().config.group().unwrap().is_fuchsian());
    assert!(!load_preset("octahedral").unwrap().config.group().unwrap().is_fuchsian());
}

#[test]
fn unknown_keys_are_rejected() {
    let text = format!("{}\nmystery = 3\n", preset("symmetric").unwrap());
    assert!(matches!(ExperimentConfig::parse(&text), Err(ConfigError::Parse(_))));
}

#[test]
fn out_of_range_values_name_their_field() {
    let base = preset("symmetric").unwrap();
    for (line, field) in [("rho = 1.5", "rho"), ("rings = 0", "rings"), ("hopf_times = [50.0, 25.0]", "hopf_times")] {
        let text = format!("{line}\n{base}");
        match ExperimentConfig::parse(&text) {
            Err(ConfigError::Field { field: f, .. }) => assert_eq!(f, field),
            other => panic!("{line}: {other:?}"),
        }
    }
}

#[test]
fn overlapping_disks_are_a_config_error() {
    let text = r#"
[[pairs]]
center1 = "0"
radius1 = "1"
center2 = "0.5"
radius2 = "1"

[[pairs]]
center1 = "5"
radius1 = "1"
center2 = "-5"
radius2 = "1"
"#;
    assert!(matches!(ExperimentConfig::parse(text), Err(ConfigError::Field { field: "pairs", .. })));
}

#[test]
fn hash_follows_source_bytes() {
    let a = ExperimentConfig::parse(preset("symmetric").unwrap()).unwrap();
    let b = ExperimentConfig::parse(&format!("{}\n", preset("symmetric").unwrap())).unwrap();
    assert_eq!(a.config, b.config);
    assert_ne!(a.hash, b.hash);
}
