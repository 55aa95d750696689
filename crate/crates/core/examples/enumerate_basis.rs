//! Enumerates the one-photon activation basis from the shipped registry.
//!
//! `cargo run --example enumerate_basis [config.json]`

use photonic::config::{load_json, BasisConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/one_photon_basis.json").to_string());
    let cfg: BasisConfig = load_json(path.as_ref())?;
    let (basis, _) = cfg.build()?;
    for (i, e) in basis.elements().iter().enumerate() {
        println!("{i:>3}  {e}");
    }
    println!("{} elements", basis.len());
    Ok(())
}
