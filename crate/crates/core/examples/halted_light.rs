//! Halted light: store a forward pulse, hold it, revive it with the k− beam
//! and watch the momentum ledger close.
//!
//! `cargo run --example halted_light [--no-revival]`

use photonic::protocol::{halted_light_scenario, run, HaltedLightParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let revive = !std::env::args().any(|a| a == "--no-revival");
    let p = HaltedLightParams { revive, ..HaltedLightParams::default() };
    let s = halted_light_scenario(&p)?;
    let trace = run(&s.initial, &s.steps, &s.models, s.mode, s.seed)?;
    for e in &trace.entries {
        println!(
            "t={:<5} stored={:<5} ledger={:?} support={:?}  {}",
            e.state.time(),
            e.stored,
            e.ledger,
            e.support(),
            e.note.as_deref().unwrap_or("initial window")
        );
    }
    for rec in &trace.emissions {
        println!("flash: mode {} direction {:?}", rec.mode.id(), rec.direction);
    }
    Ok(())
}
