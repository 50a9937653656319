use std::path::Path;
use std::process::{Command, Output};

fn floquet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(args)
        .current_dir(dir)
        .env_remove("FLOQUET_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn verify_all_passes_on_two_by_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = floquet(&["verify", "all", "--periods", "2,3", "--pattern", "1,1", "--seed", "7", "--trials", "50"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn translate_is_isospectral_and_perturbation_is_not() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", r#"{"periods":[2,3],"lattice":"hypercubic","values":[0.3,-0.2,0.7,0.1,0.5,-0.4]}"#);
    // b(n) = a(n + (1, 2))
    write(dir.path(), "b.json", r#"{"periods":[2,3],"lattice":"hypercubic","values":[-0.4,0.1,0.5,0.7,0.3,-0.2]}"#);
    write(dir.path(), "c.json", r#"{"periods":[2,3],"lattice":"hypercubic","values":[-0.4,0.1,0.5,0.7,0.3,-0.25]}"#);
    assert_eq!(code(&floquet(&["isospectral", "a.json", "b.json"], dir.path())), 0);
    assert_eq!(code(&floquet(&["isospectral", "a.json", "c.json"], dir.path())), 1);
}

#[test]
fn planted_potential_is_rejected_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = floquet(&["gen", "--periods", "2,3", "--mode", "nonseparable", "--pattern", "1,1", "--seed", "4", "--output", "v.json"], dir.path());
    assert_eq!(code(&o), 0);
    let o = floquet(&["separable", "v.json", "--pattern", "1,1"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness"));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["witness"].is_array());

    floquet(&["gen", "--periods", "2,3", "--mode", "separable", "--seed", "4", "--output", "s.json"], dir.path());
    assert_eq!(code(&floquet(&["separable", "s.json"], dir.path())), 0);
    assert_eq!(code(&floquet(&["split", "s.json"], dir.path())), 0);
    assert_eq!(code(&floquet(&["split", "v.json"], dir.path())), 1);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        floquet(&["gen", "--periods", "2,3", "--mode", "complex", "--seed", "11", "--output", "v.json"], dir.path());
        let charpoly = stdout(&floquet(&["charpoly", "v.json", "--tilde"], dir.path()));
        let report = stdout(&floquet(&["verify", "main3", "--periods", "2,3", "--trials", "2", "--seed", "1"], dir.path()));
        (std::fs::read(dir.path().join("v.json")).unwrap(), charpoly, report)
    };
    assert_eq!(run(), run());
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let with_env = Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(["gen", "--periods", "3"])
        .env("FLOQUET_SEED", "9")
        .output()
        .unwrap();
    let with_flag = floquet(&["gen", "--periods", "3", "--seed", "9"], dir.path());
    assert_eq!(with_env.stdout, with_flag.stdout);
    assert_ne!(with_flag.stdout, floquet(&["gen", "--periods", "3"], dir.path()).stdout);
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "run.json", r#"{"periods":[2,2],"seed":5}"#);
    let from_config = floquet(&["--config", "run.json", "gen"], dir.path());
    assert_eq!(from_config.stdout, floquet(&["gen", "--periods", "2,2", "--seed", "5"], dir.path()).stdout);
    let overridden = floquet(&["--config", "run.json", "gen", "--seed", "6"], dir.path());
    assert_eq!(overridden.stdout, floquet(&["gen", "--periods", "2,2", "--seed", "6"], dir.path()).stdout);
    write(dir.path(), "typo.json", r#"{"perods":[2,2]}"#);
    assert_eq!(code(&floquet(&["--config", "typo.json", "gen"], dir.path())), 2);
}

#[test]
fn usage_errors_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"periods":[2,3],"values":[1,2]}"#);
    write(dir.path(), "broken.json", "{");
    for args in [
        &["dft", "bad.json", "--output", "out.json"][..],
        &["dft", "broken.json", "--output", "out.json"],
        &["dft", "missing.json", "--output", "out.json"],
        &["gen", "--output", "out.json"],
        &["gen", "--periods", "2,3", "--unknown-flag"],
        &["verify", "main2", "--periods", "2,3", "--pattern", "1,2", "--output", "out.json"],
        &["verify", "main2", "--periods", "2,3", "--iso-tol", "-1", "--output", "out.json"],
    ] {
        let o = floquet(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!dir.path().join("out.json").exists(), "{args:?}");
        assert_eq!(String::from_utf8_lossy(&o.stderr).trim().lines().next().map(|l| l.starts_with("error")), Some(true));
    }
}

#[test]
fn spectrum_csv_for_real_and_coefficients_for_complex() {
    let dir = tempfile::tempdir().unwrap();
    floquet(&["gen", "--periods", "2,3", "--seed", "1", "--output", "r.json"], dir.path());
    floquet(&["gen", "--periods", "2,3", "--mode", "complex", "--seed", "1", "--output", "c.json"], dir.path());
    let csv = stdout(&floquet(&["spectrum", "r.json", "--k", "0.1,-0.4", "--grid", "2"], dir.path()));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k1,k2,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6");
    assert_eq!(lines.len(), 6);
    let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[..2], [0.1, -0.4]);
    assert!(row[2..].windows(2).all(|w| w[0] <= w[1]));
    let csv = stdout(&floquet(&["spectrum", "c.json"], dir.path()));
    assert!(csv.starts_with("k1,k2,c0_re,c0_im"));
}

#[test]
fn fermi_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", r#"{"periods":[2,3],"values":[0.3,-0.2,0.7,0.1,0.5,-0.4]}"#);
    write(dir.path(), "b.json", r#"{"periods":[2,3],"values":[-0.4,0.1,0.5,0.7,0.3,-0.2]}"#);
    write(dir.path(), "c.json", r#"{"periods":[2,3],"values":[-0.3,0.1,0.5,0.7,0.3,-0.2]}"#);
    assert_eq!(code(&floquet(&["fermi", "a.json", "b.json", "--lambda", "-0.5,0.2"], dir.path())), 0);
    assert_eq!(code(&floquet(&["fermi", "a.json", "c.json", "--lambda", "0.5"], dir.path())), 1);
    assert_eq!(code(&floquet(&["invariants", "a.json", "b.json", "--pattern", "1,1"], dir.path())), 0);
    assert_eq!(code(&floquet(&["invariants", "a.json", "c.json"], dir.path())), 1);
    let text = stdout(&floquet(&["invariants", "a.json", "--pattern", "1,1", "--format", "text"], dir.path()));
    assert!(text.starts_with("mean 1.6666666666666666e-1"), "{text}");
}

#[test]
fn charpoly_dump_and_extract() {
    let dir = tempfile::tempdir().unwrap();
    floquet(&["gen", "--periods", "2,3", "--mode", "separable", "--seed", "2", "--output", "s.json"], dir.path());
    let dump = stdout(&floquet(&["charpoly", "s.json"], dir.path()));
    assert!(dump.lines().all(|l| l.split(' ').count() == 5));
    let o = floquet(&["extract", "s.json", "--component", "2"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().all(|l| l.split(' ').count() == 4));
    assert_eq!(code(&floquet(&["extract", "s.json", "--component", "3"], dir.path())), 2);
    floquet(&["gen", "--periods", "2,3", "--mode", "nonseparable", "--seed", "2", "--output", "n.json"], dir.path());
    assert_eq!(code(&floquet(&["extract", "n.json", "--component", "1"], dir.path())), 1);
    let routes = ["dual", "substitute", "cross-check"].map(|r| stdout(&floquet(&["charpoly", "s.json", "--tilde", "--route", r, "--format", "json"], dir.path())));
    assert!(routes.iter().all(|r| r.contains("\"terms\"")));
}

#[test]
fn key_pair_and_triangular_suites() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", r#"{"periods":[2,3],"values":[0.3,-0.2,0.7,0.1,0.5,-0.4]}"#);
    write(dir.path(), "b.json", r#"{"periods":[2,3],"values":[-0.4,0.1,0.5,0.7,0.3,-0.2]}"#);
    assert_eq!(code(&floquet(&["verify", "key", "--pair", "a.json", "b.json"], dir.path())), 0);
    let o = floquet(&["verify", "tri", "--periods", "2,3", "--trials", "3", "--format", "text"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("triangular: PASS"));
    let o = floquet(&["verify", "main3", "--periods", "2,3", "--trials", "2", "--constants", "0.3,-0.3"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(code(&floquet(&["verify", "main3", "--periods", "2,3", "--constants", "0.3,0.3"], dir.path())), 2);
}
