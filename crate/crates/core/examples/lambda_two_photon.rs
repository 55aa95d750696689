//! Λ system: pump, switch-off, perpendicular probe, induced transfer and
//! spontaneous emission. Prints the support after every step.

use photonic::protocol::{check_templates, lambda_scenario, run, LambdaParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = lambda_scenario(&LambdaParams::default())?;
    let trace = run(&s.initial, &s.steps, &s.models, s.mode, s.seed)?;
    for (entry, t) in trace.entries.iter().zip(&s.templates) {
        let names: Vec<String> = entry.support().iter().map(|&i| s.basis.elements()[i].to_string()).collect();
        println!("{:<8} {}", t.label, if names.is_empty() { "(emitted)".into() } else { names.join("  +  ") });
    }
    for rec in &trace.emissions {
        println!("emitted {} (gap {}) towards {:?}", rec.mode.id(), rec.gap, rec.direction);
    }
    let bad = check_templates(&trace, &s.templates);
    println!("{} of {} patterns match", s.templates.len() - bad.len(), s.templates.len());
    Ok(())
}
