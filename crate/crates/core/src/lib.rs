//! Photonic base-state simulator.
//!
//! Builds photon ⊗ electronuclear bases, evolves amplitude vectors over them
//! through experimental protocol steps, and analyses small secular models.
//! See the `examples/` directory for one program per capability.

pub mod basis;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod labels;
pub mod linalg;
pub mod protocol;
pub mod qstate;
pub mod spin;

/// Fixed 12-significant-digit rendering with `-0` folded to `0`.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}
