//! A photon leaves the working space: residual and detected branches, the
//! emission record and the energy check.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use photonic::basis::{fourfold_manifold, Basis, BasisElement, PhotonSlot};
use photonic::labels::{EnLabel, ModeLabel};
use photonic::qstate::QState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = EnLabel::new(0, 0, 0.0)?;
    let x = EnLabel::new(1, 0, 1.5)?;
    let w = ModeLabel::new("w", 1.5, [1.0, 0.0, 0.0])?;
    let mut els = fourfold_manifold(&g, &x, &w)?.to_vec();
    els.push(BasisElement::simple(g, vec![PhotonSlot::product(&w, 0)])?);
    let basis = Arc::new(Basis::from_elements(els)?);
    let emit = basis.find_notation("1p|j0 k0⟩ ⊗ |1_w⟩").ok_or("missing element")?;
    let target = basis.find_notation("1p|j0 k0⟩ ⊗ |0_w⟩").ok_or("missing element")?;
    let other = basis.find_notation("1p|j1 k0; 0_w⟩").ok_or("missing element")?;

    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    amps[emit] = C64::new(0.6, 0.0);
    amps[other] = C64::new(0.0, 0.8);
    let s = QState::new(basis, amps, 0.0)?;
    let d = s.decohere(emit, target, [0.0, 0.0, 3.0])?;
    println!("residual norm² {:.3}", d.residual.norm_sqr());
    println!("emitted amplitude {:.3}", d.record.amplitude);
    println!("gap {} = ω {}", d.record.gap, d.record.mode.omega());
    println!("detected branch support {:?}", d.emitted.support(1e-10));
    Ok(())
}
