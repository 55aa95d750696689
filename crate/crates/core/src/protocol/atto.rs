//! Initial state imprinted by a short pulse: a Gaussian-weighted comb of
//! modes, each entangled with the root level.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::basis::{Basis, BasisElement, PhotonSlot};
use crate::labels::{is_resonant, EnLabel, ModeLabel, Vec3, RESONANCE_TOL};
use crate::qstate::QState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttoParams {
    /// Carrier frequency `ω0`.
    pub center: f64,
    /// Envelope width `δω`; should stay below `ω0/10`.
    pub width: f64,
    /// Comb spacing `Δ`.
    pub spacing: f64,
    /// Odd count, centred on `ω0`.
    pub n_harmonics: usize,
    #[serde(default = "default_direction")]
    pub direction: Vec3,
}

fn default_direction() -> Vec3 {
    [0.0, 0.0, 1.0]
}

impl Default for AttoParams {
    fn default() -> Self {
        AttoParams { center: 20.0, width: 0.5, spacing: 0.5, n_harmonics: 5, direction: default_direction() }
    }
}

impl AttoParams {
    /// Harmonic offsets `−(N−1)/2 ..= (N−1)/2`.
    pub fn offsets(&self) -> Vec<i64> {
        let h = (self.n_harmonics as i64 - 1) / 2;
        (-h..=h).collect()
    }

    /// `exp(−(ω_n − ω0)² / (2 δω²))`.
    pub fn envelope(&self, n: i64) -> f64 {
        let d = n as f64 * self.spacing;
        (-(d * d) / (2.0 * self.width * self.width)).exp()
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.center) || !positive(self.width) || !positive(self.spacing) {
            return Err(ScenarioError::BadLevels("center, width and spacing positive"));
        }
        if self.n_harmonics == 0 || self.n_harmonics.is_multiple_of(2) {
            return Err(ScenarioError::BadLevels("an odd number of harmonics"));
        }
        let lowest = self.center - (self.n_harmonics as f64 - 1.0) / 2.0 * self.spacing;
        if lowest <= 0.0 {
            return Err(ScenarioError::BadLevels("every comb frequency positive"));
        }
        if self.width >= self.center / 10.0 {
            log::warn!("pulse width {} is not much smaller than the carrier {}", self.width, self.center);
        }
        Ok(())
    }
}

/// Mode id of harmonic `n`, e.g. `c+0`, `c-2`.
pub fn comb_id(n: i64) -> String {
    format!("c{n:+}")
}

/// Normalized comb state entangled with `root`. Every level in `excited`
/// resonant with some comb mode enters the basis with zero amplitude.
pub fn attosecond_init(p: &AttoParams, root: EnLabel, excited: &[EnLabel]) -> Result<QState, ScenarioError> {
    p.validate()?;
    let mut elements = Vec::new();
    let mut weights = Vec::new();
    for n in p.offsets() {
        let mode = ModeLabel::new(comb_id(n), p.center + n as f64 * p.spacing, p.direction)?;
        elements.push(BasisElement::simple(root, vec![PhotonSlot::entangled(&mode, 1)])?);
        weights.push(p.envelope(n));
        for x in excited {
            if x.key() != root.key() && is_resonant(&root, x, &mode, RESONANCE_TOL) {
                elements.push(BasisElement::simple(*x, vec![PhotonSlot::entangled(&mode, 0)])?);
                weights.push(0.0);
            }
        }
    }
    let basis = Arc::new(Basis::from_elements(elements.clone())?);
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
    for (e, w) in elements.iter().zip(&weights) {
        amps[basis.canonical_index(e)?] = C64::new(w / norm, 0.0);
    }
    Ok(QState::new(basis, amps, 0.0).expect("finite amplitudes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root() -> EnLabel {
        EnLabel::new(0, 0, 0.0).unwrap()
    }

    fn comb_amp(s: &QState, n: i64) -> f64 {
        let i =
            s.basis().elements().iter().position(|e| e.en_labels()[0].j == 0 && e.slot(&comb_id(n)).is_some()).unwrap();
        s.amp(i).re
    }

    #[test]
    fn single_harmonic_is_window() {
        let p = AttoParams { n_harmonics: 1, ..AttoParams::default() };
        let s = attosecond_init(&p, root(), &[]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.amp(0), C64::new(1.0, 0.0));
    }

    #[test]
    fn gaussian_ratios() {
        let p = AttoParams { width: 0.5, spacing: 0.5, n_harmonics: 5, ..AttoParams::default() };
        let s = attosecond_init(&p, root(), &[]).unwrap();
        let c0 = comb_amp(&s, 0);
        assert!((comb_amp(&s, 1) / c0 - (-0.5f64).exp()).abs() < 1e-12);
        assert!((comb_amp(&s, -2) / c0 - (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(comb_amp(&s, 2), comb_amp(&s, -2));
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_excited_levels_have_zero_amplitude() {
        let p = AttoParams::default();
        let hit = EnLabel::new(3, 0, 20.5).unwrap();
        let miss = EnLabel::new(4, 0, 20.2).unwrap();
        let s = attosecond_init(&p, root(), &[hit, miss]).unwrap();
        assert_eq!(s.len(), 6);
        let i = s.basis().elements().iter().position(|e| e.en_labels()[0].j == 3).unwrap();
        assert_eq!(s.amp(i), C64::new(0.0, 0.0));
    }

    #[test]
    fn invalid_parameters() {
        for p in [
            AttoParams { width: 0.0, ..AttoParams::default() },
            AttoParams { n_harmonics: 4, ..AttoParams::default() },
            AttoParams { center: 1.0, spacing: 1.0, n_harmonics: 5, ..AttoParams::default() },
        ] {
            assert!(attosecond_init(&p, root(), &[]).is_err());
        }
    }
}
