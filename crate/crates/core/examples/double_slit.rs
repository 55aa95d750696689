//! Two-path superposition on a screen: fringe visibility against
//! `2|C1||C2| / (|C1|² + |C2|²)`.

use num_complex::Complex64 as C64;
use photonic::dynamics::{double_slit_pattern, visibility, SlitGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = SlitGeometry::default();
    for p in [0.5f64, 0.7, 0.9, 1.0] {
        let (c1, c2) = (C64::new(p.sqrt(), 0.0), C64::new((1.0 - p).sqrt(), 0.0));
        let v = visibility(c1, c2, &g, 801)?;
        let expected = 2.0 * c1.norm() * c2.norm();
        println!("|C1|²={p:.1}  visibility {v:.9}  expected {expected:.9}");
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pattern = double_slit_pattern(C64::new(h, 0.0), C64::new(h, 0.0), &g, 9)?;
    for (x, i) in pattern {
        println!("{x:>6.2} {}", "#".repeat((i * 20.0).round() as usize));
    }
    Ok(())
}
