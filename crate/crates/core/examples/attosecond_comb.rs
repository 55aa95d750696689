//! Comb state imprinted by a short pulse on the root level.

use photonic::labels::EnLabel;
use photonic::protocol::{attosecond_init, AttoParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = AttoParams::default();
    let root = EnLabel::new(0, 0, 0.0)?;
    let excited = [EnLabel::new(1, 0, p.center)?];
    let s = attosecond_init(&p, root, &excited)?;
    for (i, e) in s.basis().elements().iter().enumerate() {
        println!("{:+.6}  {e}", s.amp(i).re);
    }
    println!("norm {}", s.norm());
    Ok(())
}
