//! Byte-for-byte comparisons against files under `data/`. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use photonic::cli::{builtin_script, Builtin};
use photonic::config::{load_json, BasisConfig};
use photonic::dynamics::FourStateModel;
use photonic::protocol::script::Script;
use photonic::protocol::Outcome;

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn check(name: &str, actual: &str) {
    let p = path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&p, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    assert!(expected == actual, "{name} differs from the golden file; rerun with UPDATE_GOLDEN=1 if intended");
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

#[test]
fn shipped_scripts_match_builtins() {
    for (b, stem) in [(Builtin::HaltedLight, "halted_light"), (Builtin::Lambda, "lambda")] {
        let (script, templates) = builtin_script(b, Outcome::ReEmission).unwrap();
        check(&format!("{stem}.json"), &pretty(&script));
        check(&format!("{stem}.expect.json"), &pretty(&templates));
    }
}

#[test]
fn halted_light_trace() {
    let script: Script = load_json(&path("halted_light.json")).unwrap();
    let trace = script.compile().unwrap().run(None, None).unwrap();
    check("golden/halted_light.trace.csv", &trace.to_csv());
}

#[test]
fn lambda_trace() {
    let script: Script = load_json(&path("lambda.json")).unwrap();
    let trace = script.compile().unwrap().run(None, None).unwrap();
    check("golden/lambda.trace.csv", &trace.to_csv());
}

#[test]
fn one_photon_basis_listing() {
    let cfg: BasisConfig = load_json(&path("one_photon_basis.json")).unwrap();
    let (basis, _) = cfg.build().unwrap();
    check("golden/one_photon_basis.listing.json", &(basis.to_json() + "\n"));
}

#[test]
fn secular_report() {
    let m: FourStateModel = load_json(&path("four_state.json")).unwrap();
    check("golden/four_state.report.csv", &m.report(m.energies[1]).unwrap().render());
}
