//! The four base elements generated by one level pair and one mode.

use photonic::basis::{fourfold_manifold, Basis};
use photonic::labels::{EnLabel, ModeLabel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = EnLabel::new(0, 0, 0.0)?;
    let excited = EnLabel::new(1, 0, 2.0)?;
    let w = ModeLabel::new("w", 2.0, [0.0, 0.0, 1.0])?;
    let basis = Basis::from_elements(fourfold_manifold(&root, &excited, &w)?.to_vec())?;
    for (i, e) in basis.elements().iter().enumerate() {
        println!("{i}  level {:>4}  {e}", e.level());
    }
    Ok(())
}
