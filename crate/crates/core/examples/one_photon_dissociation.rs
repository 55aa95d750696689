//! Activation of a chromophore followed by each of the four outcomes.

use photonic::protocol::{one_photon_dissociation_scenario, run, DissociationParams, Outcome};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for outcome in [Outcome::ReEmission, Outcome::LowFrequency, Outcome::ZeroZero, Outcome::Dissociation] {
        let s = one_photon_dissociation_scenario(&DissociationParams { outcome, ..Default::default() })?;
        let trace = run(&s.initial, &s.steps, &s.models, s.mode, s.seed)?;
        println!("== {outcome:?}");
        for (e, t) in trace.entries.iter().zip(&s.templates) {
            let names: Vec<String> = e.support().iter().map(|&i| s.basis.elements()[i].to_string()).collect();
            println!("  {:<10} {}", t.label, names.join(" + "));
        }
        for rec in &trace.emissions {
            println!("  emission {} gap {}", rec.mode.id(), rec.gap);
        }
    }
    Ok(())
}
