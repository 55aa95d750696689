use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn photonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photonic")).args(args).env_remove("PHOTONIC_CONFIG_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn basis_listing_contains_activation_elements() {
    let o = photonic(&["basis", &data("one_photon_basis.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for notation in [
        "A|j0 k0⟩ ⊗ |1_w⟩",
        "A|j0 k0; 1_w⟩",
        "A|j1 k0; 0_w⟩",
        "B1|j2 k0 ⊗ j3 k0⟩ ⊗ |0_w⟩",
        "B2|j4 k0 ⊗ j5 k0⟩ ⊗ |0_w⟩",
        "C|j6 k0 ⊗ j7 k0 ⊗ j8 k0⟩ ⊗ |0_w⟩",
    ] {
        assert!(text.lines().any(|l| l.ends_with(notation)), "missing {notation}");
    }
    assert!(stderr(&o).contains("20 elements"));
}

#[test]
fn basis_without_modes_is_vacuum_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bare.json");
    std::fs::write(
        &cfg,
        r#"{"levels":[{"j":0,"k":0,"energy":0},{"j":1,"k":0,"energy":1}],
            "partitions":[{"name":"A","blocks":[[1]],"levels":[[{"j":0,"k":0},{"j":1,"k":0}]]}]}"#,
    )
    .unwrap();
    let o = photonic(&["basis", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(!text.contains('_'));
}

#[test]
fn malformed_config_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\n  \"levels\": [\n    {\"j\": 0, \"k\": 0}\n  ]\n}").unwrap();
    let o = photonic(&["basis", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.json:3:"), "{err}");
    assert!(err.contains("energy"), "{err}");
}

#[test]
fn halted_light_matches_shipped_templates() {
    let o = photonic(&["run", &data("halted_light.json"), "--expect", &data("halted_light.expect.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("record,step,time,index,re,im,mode,x,y,z\n"));
    assert!(stderr(&o).contains("templates match"));
}

#[test]
fn wrong_template_exits_1() {
    let text = std::fs::read_to_string(data("halted_light.expect.json")).unwrap();
    let mut specs: serde_json::Value = serde_json::from_str(&text).unwrap();
    specs[0]["nonzero"] = serde_json::json!(["1p|j0 k0; 1_w20⟩"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.json");
    std::fs::write(&path, specs.to_string()).unwrap();
    let o = photonic(&["run", &data("halted_light.json"), "--expect", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("5a"), "{}", stderr(&o));
}

#[test]
fn stochastic_without_seed_exits_2() {
    let o = photonic(&["run", &data("halted_light.json"), "--mode", "stochastic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn failing_step_exits_3_with_index() {
    let text = std::fs::read_to_string(data("lambda.json")).unwrap();
    let mut script: serde_json::Value = serde_json::from_str(&text).unwrap();
    script["steps"].as_array_mut().unwrap().insert(1, serde_json::json!({"kind": "wait", "duration": -1.0}));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, script.to_string()).unwrap();
    let o = photonic(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("step 1"), "{}", stderr(&o));
}

#[test]
fn builtin_runs_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let o = photonic(&["run", "--builtin", "dissociation", "--outcome", "zero-zero", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("\nemission,"));
}

#[test]
fn secular_defaults_pass() {
    let o = photonic(&["secular", &data("four_state.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("argsort,1,2,3,0"), "{text}");
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn secular_ground_anchor_swaps_channels() {
    let o = photonic(&["secular", &data("four_state.json"), "--anchor", "E0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("argsort,")).unwrap();
    let order: Vec<&str> = line.split(',').skip(1).filter(|&x| x != "0").collect();
    let p2 = order.iter().position(|&x| x == "2").unwrap();
    let p3 = order.iter().position(|&x| x == "3").unwrap();
    assert!(p3 < p2, "{line}");
    assert!(text.trim_end().ends_with("FAIL"));
}

#[test]
fn secular_zero_couplings_report_na() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("zero.json");
    std::fs::write(&p, r#"{"energies":[0,10,9.5,7],"v01":0,"v12":0,"v13":0}"#).unwrap();
    let o = photonic(&["secular", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ratio_C2_C3,N/A"));
}

#[test]
fn secular_non_hermitian_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nh.json");
    let z = "[0,0]";
    let row = |a: &str, b: &str, cc: &str, d: &str| format!("[{a},{b},{cc},{d}]");
    let m = format!(
        r#"{{"matrix":[{},{},{},{}]}}"#,
        row("[0,0]", "[1,0]", z, z),
        row("[2,0]", "[10,0]", z, z),
        row(z, z, "[9,0]", z),
        row(z, z, z, "[7,0]")
    );
    std::fs::write(&p, m).unwrap();
    let o = photonic(&["secular", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("Hermitian"));
}

#[test]
fn spin_atto_slits_print() {
    let o = photonic(&["spin"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("permute_both,-1.00000000000e0")).count(), 4);

    let o = photonic(&["atto", &data("atto.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("index,mode,omega,re,im,notation\n"));

    let o = photonic(&["slits", "--c1", "0.6", "--c2", "0.8", "--samples", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 12);
    assert!(stderr(&o).contains("visibility 9.60000000000e-1"), "{}", stderr(&o));

    let o = photonic(&["slits", "--c1", "0.6", "--c2", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_dir_env_resolves_relative_paths() {
    let o = Command::new(env!("CARGO_BIN_EXE_photonic"))
        .args(["basis", "one_photon_basis.json"])
        .env("PHOTONIC_CONFIG_DIR", data(""))
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(photonic(&["run", &data("halted_light.json"), "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(photonic(&["run", &data("halted_light.json"), "--mode", "sometimes"]).status.code(), Some(2));
    assert_eq!(photonic(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn inputs_are_not_modified() {
    let path = PathBuf::from(data("halted_light.json"));
    let before = std::fs::read(&path).unwrap();
    let o = photonic(&["run", path.to_str().unwrap(), "--seed", "3", "--mode", "stochastic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), before);
}
