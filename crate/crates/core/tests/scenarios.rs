use photonic::labels::norm3;
use photonic::protocol::{
    check_templates, halted_light_scenario, lambda_scenario, one_photon_dissociation_scenario, run, DissociationParams,
    HaltedLightParams, LambdaParams, Outcome, RunMode, Scenario,
};

fn trace_of(s: &Scenario) -> photonic::protocol::Trace {
    run(&s.initial, &s.steps, &s.models, s.mode, s.seed).unwrap()
}

fn assert_conforms(s: &Scenario) {
    let t = trace_of(s);
    assert_eq!(t.len(), s.steps.len() + 1);
    assert_eq!(s.templates.len(), t.len(), "one template per record");
    let bad = check_templates(&t, &s.templates);
    assert!(bad.is_empty(), "{}: {bad:?}", s.name);
}

#[test]
fn lambda_templates() {
    let s = lambda_scenario(&LambdaParams::default()).unwrap();
    assert_conforms(&s);
    let t = trace_of(&s);
    assert_eq!(t.emissions.len(), 1);
    assert!(t.last().support().is_empty());
}

#[test]
fn halted_light_templates_and_flash() {
    let p = HaltedLightParams::default();
    let s = halted_light_scenario(&p).unwrap();
    assert_conforms(&s);
    let t = trace_of(&s);
    assert_eq!(t.emissions.len(), 1);
    let rec = &t.emissions[0];
    let fwd = p.forward.unwrap();
    let omega20 = p.levels[1] - p.levels[0];
    for (d, f) in rec.direction.iter().zip(fwd) {
        assert!((d - omega20 * f).abs() < 1e-12);
    }
    assert!((rec.mode.omega() - omega20).abs() < 1e-12);
    assert!(norm3(&t.last().ledger) < 1e-12);
}

#[test]
fn halted_light_without_revival_stays_stored() {
    let p = HaltedLightParams { revive: false, minus: None, ..HaltedLightParams::default() };
    let s = halted_light_scenario(&p).unwrap();
    assert_conforms(&s);
    let t = trace_of(&s);
    assert!(t.emissions.is_empty());
    assert!(t.last().stored);
}

#[test]
fn halted_light_requires_modes() {
    assert!(halted_light_scenario(&HaltedLightParams { plus: None, ..Default::default() }).is_err());
    assert!(halted_light_scenario(&HaltedLightParams { minus: None, ..Default::default() }).is_err());
}

#[test]
fn dissociation_outcomes() {
    for outcome in [Outcome::ReEmission, Outcome::LowFrequency, Outcome::ZeroZero, Outcome::Dissociation] {
        let s = one_photon_dissociation_scenario(&DissociationParams { outcome, ..Default::default() }).unwrap();
        assert_conforms(&s);
        let t = trace_of(&s);
        match outcome {
            Outcome::Dissociation => {
                assert!(t.emissions.is_empty());
                let b1 = t.last().support().into_iter().filter(|&i| s.basis.elements()[i].partition().name() == "B1");
                assert!(b1.count() >= 2);
            }
            _ => assert_eq!(t.emissions.len(), 1),
        }
    }
}

#[test]
fn dissociation_idle_window_is_invariant() {
    let s = one_photon_dissociation_scenario(&DissociationParams::default()).unwrap();
    let t = trace_of(&s);
    assert_eq!(t.entries[1].state.amps(), s.initial.amps());
    assert!(t.entries[1].state.time() > s.initial.time());
}

#[test]
fn dissociation_requires_partitions() {
    let p = DissociationParams { partitions: vec![], ..Default::default() };
    assert!(one_photon_dissociation_scenario(&p).is_err());
}

#[test]
fn stochastic_runs_repeat() {
    let s = halted_light_scenario(&HaltedLightParams::default()).unwrap();
    let a = run(&s.initial, &s.steps, &s.models, RunMode::Stochastic, Some(11)).unwrap();
    let b = run(&s.initial, &s.steps, &s.models, RunMode::Stochastic, Some(11)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let c = run(&s.initial, &s.steps, &s.models, RunMode::Stochastic, Some(12)).unwrap();
    assert_ne!(a.to_csv(), c.to_csv());
}
