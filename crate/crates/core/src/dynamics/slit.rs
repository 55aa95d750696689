//! Two-path superposition `C1·V1|Φ⟩ + C2·V2|Φ⟩` seen on a distant screen.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// Slits at `x = ±d/2`, screen at distance `l`, sampled over
/// `[−half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    pub d: f64,
    pub l: f64,
    pub kappa: f64,
    pub half_width: f64,
}

impl Default for SlitGeometry {
    /// Wide enough that the relative phase sweeps several periods.
    fn default() -> Self {
        SlitGeometry { d: 1.0, l: 10.0, kappa: 20.0, half_width: 10.0 }
    }
}

impl SlitGeometry {
    fn validate(&self) -> Result<(), DynamicsError> {
        for (v, what) in [
            (self.d, "slit separation must be positive"),
            (self.l, "screen distance must be positive"),
            (self.kappa, "wavenumber must be positive"),
            (self.half_width, "screen half-width must be positive"),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(DynamicsError::BadGeometry(what));
            }
        }
        Ok(())
    }

    fn paths(&self, x: f64) -> (f64, f64) {
        let r1 = (self.l * self.l + (x - self.d / 2.0).powi(2)).sqrt();
        let r2 = (self.l * self.l + (x + self.d / 2.0).powi(2)).sqrt();
        (r1, r2)
    }

    /// `|C1 e^{iκ r1} + C2 e^{iκ r2}|²` at screen position `x`.
    pub fn intensity(&self, c1: C64, c2: C64, x: f64) -> f64 {
        let (r1, r2) = self.paths(x);
        (c1 * C64::from_polar(1.0, self.kappa * r1) + c2 * C64::from_polar(1.0, self.kappa * r2)).norm_sqr()
    }
}

fn check_amplitudes(c1: C64, c2: C64) -> Result<(), DynamicsError> {
    let n = c1.norm_sqr() + c2.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(DynamicsError::NotNormalized(n));
    }
    Ok(())
}

/// `(x, I(x))` at `samples` evenly spaced screen points, ends included.
pub fn double_slit_pattern(
    c1: C64,
    c2: C64,
    geometry: &SlitGeometry,
    samples: usize,
) -> Result<Vec<(f64, f64)>, DynamicsError> {
    check_amplitudes(c1, c2)?;
    geometry.validate()?;
    if samples < 2 {
        return Err(DynamicsError::BadGeometry("need at least two samples"));
    }
    let w = geometry.half_width;
    Ok((0..samples)
        .map(|i| {
            let x = -w + 2.0 * w * i as f64 / (samples - 1) as f64;
            (x, geometry.intensity(c1, c2, x))
        })
        .collect())
}

/// `(I_max − I_min)/(I_max + I_min)` over the screen. Sampled extrema are
/// refined by golden-section search between their neighbours.
pub fn visibility(c1: C64, c2: C64, geometry: &SlitGeometry, samples: usize) -> Result<f64, DynamicsError> {
    let pattern = double_slit_pattern(c1, c2, geometry, samples)?;
    let f = |x: f64| geometry.intensity(c1, c2, x);
    let bracket = |i: usize| {
        let lo = pattern[i.saturating_sub(1)].0;
        let hi = pattern[(i + 1).min(pattern.len() - 1)].0;
        (lo, hi)
    };
    let imax = (0..pattern.len()).max_by(|&a, &b| pattern[a].1.total_cmp(&pattern[b].1)).unwrap_or(0);
    let imin = (0..pattern.len()).min_by(|&a, &b| pattern[a].1.total_cmp(&pattern[b].1)).unwrap_or(0);
    let (a, b) = bracket(imax);
    let hi = f(golden(|x| -f(x), a, b)).max(pattern[imax].1);
    let (a, b) = bracket(imin);
    let lo = f(golden(f, a, b)).min(pattern[imin].1);
    if hi + lo == 0.0 {
        return Ok(0.0);
    }
    Ok((hi - lo) / (hi + lo))
}

/// Minimiser of a unimodal `f` on `[a, b]` by golden-section search.
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_amplitudes_bright_centre() {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let g = SlitGeometry::default();
        let p = double_slit_pattern(h, h, &g, 2001).unwrap();
        let centre = p[1000];
        assert_eq!(centre.0, 0.0);
        assert!((centre.1 - 2.0).abs() < 1e-12);
        assert!((visibility(h, h, &g, 2001).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_path_is_flat() {
        let g = SlitGeometry::default();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        for (_, i) in double_slit_pattern(one, zero, &g, 101).unwrap() {
            assert!((i - 1.0).abs() < 1e-12);
        }
        assert!(visibility(one, zero, &g, 101).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unequal_weights() {
        let g = SlitGeometry::default();
        let v = visibility(C64::new(0.9f64.sqrt(), 0.0), C64::new(0.1f64.sqrt(), 0.0), &g, 2001).unwrap();
        assert!((v - 0.6).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = SlitGeometry::default();
        let one = C64::new(1.0, 0.0);
        assert!(matches!(double_slit_pattern(one, one, &g, 10), Err(DynamicsError::NotNormalized(_))));
        let flat = SlitGeometry { l: 0.0, ..g };
        assert!(matches!(double_slit_pattern(one, C64::new(0.0, 0.0), &flat, 10), Err(DynamicsError::BadGeometry(_))));
    }
}
