use kleinlab::cli::main_with;
use kleinlab::config::preset;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kleinlab").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn missing_config_exits_with_two() {
    let (code, _, err) = run(&["estimate-delta", "--config", "/nonexistent/config.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("configuration error"));
}

#[test]
fn sampling_without_seed_exits_with_two() {
    let (code, _, err) = run(&["shadow", "--config", "symmetric"]);
    assert_eq!(code, 2);
    assert!(err.contains("--seed"));
}

#[test]
fn escape_needs_a_fuchsian_group() {
    assert_eq!(run(&["escape", "--config", "symmetric", "--seed", "1"]).0, 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["no-such-command"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("estimate-delta"));
}

#[test]
fn non_injective_box_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.toml");
    std::fs::write(&path, format!("rho = 0.99\ndt = 0.05\n{}", preset("symmetric").unwrap())).unwrap();
    let (code, _, err) = run(&["flow", "--config", path.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("MeasureError"));
}

#[test]
fn single_atom_eigenfunction_check_runs() {
    let (code, out, _) = run(&["phi0-check", "--config", "single_atom", "--seed", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["name"], "phi0-check");
    assert!(v["numbers"]["residual"].as_f64().unwrap() < 1.1e-5);
    let r = v["numbers"]["richardson"].as_f64().unwrap();
    assert!((3.5..=4.5).contains(&r));
}

#[test]
fn same_seed_gives_identical_files_across_thread_counts() {
    let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, threads) in dirs.iter().zip(["1", "2"]) {
        let (code, _, err) =
            run(&["shadow", "--config", "symmetric", "--seed", "7", "--threads", threads, "--out", d.path().to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 2);
    for n in names {
        assert_eq!(std::fs::read(dirs[0].path().join(&n)).unwrap(), std::fs::read(dirs[1].path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn csv_format_prints_the_first_table() {
    let (code, out, _) = run(&["estimate-delta", "--config", "symmetric", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# "));
}
