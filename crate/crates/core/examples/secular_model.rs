//! Four-state secular model: channel ordering at the excited and ground
//! anchors, and the first-order limit as couplings shrink.

use photonic::dynamics::{perturbative_amplitudes, FourStateModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = FourStateModel::default();
    println!("anchor E1\n{}", m.report(m.energies[1])?.render());
    println!("anchor E0\n{}", m.report(m.energies[0])?.render());
    for k in 0..4 {
        let mk = m.scaled(0.5f64.powi(k));
        let r = mk.report(mk.energies[1])?;
        let first = perturbative_amplitudes(&mk.hamiltonian()?, 1)?;
        println!("V×2^-{k}: |C2| {:.6e} vs first order {:.6e}", r.magnitudes[2], first[2].norm());
    }
    Ok(())
}
