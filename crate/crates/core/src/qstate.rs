//! Complex amplitude vectors over a fixed basis.
//!
//! A [`QState`] shares its [`Basis`] through an `Arc`; operations return new
//! states and never touch the basis.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::basis::{Basis, BasisElement, BasisError, Guise};
use crate::labels::{dot3, ModeLabel, Vec3, RESONANCE_TOL};

/// Default magnitude threshold separating zero from nonzero amplitudes.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("index {index} out of range for basis of size {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("amplitude vector has length {got}, basis has {want} elements")]
    LengthMismatch { got: usize, want: usize },
    #[error("amplitude {0} is not finite")]
    NonFinite(usize),
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
    #[error("states live on different bases")]
    BasisMismatch,
    #[error("element {0} is not in the coherence support")]
    NotInSupport(usize),
    #[error("element {0} holds no product-guise photon to emit")]
    NoPhoton(usize),
    #[error("element {target} is not an emission target of element {emit}")]
    BadTarget { emit: usize, target: usize },
}

/// Amplitudes `C_i(t − t0)` over a shared basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    basis: Arc<Basis>,
    amps: Vec<C64>,
    time: f64,
}

impl QState {
    pub fn new(basis: Arc<Basis>, amps: Vec<C64>, time: f64) -> Result<Self, QStateError> {
        if amps.len() != basis.len() {
            return Err(QStateError::LengthMismatch { got: amps.len(), want: basis.len() });
        }
        if let Some(i) = amps.iter().position(|a| !a.is_finite()) {
            return Err(QStateError::NonFinite(i));
        }
        Ok(QState { basis, amps, time })
    }

    pub fn zero(basis: Arc<Basis>) -> Self {
        let amps = vec![C64::new(0.0, 0.0); basis.len()];
        QState { basis, amps, time: 0.0 }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Protocol clock, `t − t0`.
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(C64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<QState, QStateError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(QStateError::ZeroNorm);
        }
        Ok(QState { basis: self.basis.clone(), amps: self.amps.iter().map(|a| a / n).collect(), time: self.time })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QState) -> Result<C64, QStateError> {
        if !Arc::ptr_eq(&self.basis, &other.basis) && self.basis != other.basis {
            return Err(QStateError::BasisMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Replaces the amplitudes, keeping basis and clock.
    pub fn with_amps(&self, amps: Vec<C64>) -> Result<QState, QStateError> {
        QState::new(self.basis.clone(), amps, self.time)
    }

    /// Indices with `|amp| > tol`, ascending.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        assert!(tol >= 0.0, "support tolerance must be non-negative");
        self.amps.iter().enumerate().filter(|(_, a)| a.norm() > tol).map(|(i, _)| i).collect()
    }

    /// Zeroes the listed amplitudes. Renormalizing a vector that became zero
    /// is an error.
    pub fn erase(&self, indices: &[usize], renormalize: bool) -> Result<QState, QStateError> {
        let mut amps = self.amps.clone();
        for &i in indices {
            self.check_index(i)?;
            amps[i] = C64::new(0.0, 0.0);
        }
        let out = QState { basis: self.basis.clone(), amps, time: self.time };
        if renormalize {
            out.normalized()
        } else {
            Ok(out)
        }
    }

    fn check_index(&self, index: usize) -> Result<(), QStateError> {
        if index >= self.amps.len() {
            return Err(QStateError::OutOfRange { index, len: self.amps.len() });
        }
        Ok(())
    }

    /// Splits off the amplitude at `emit` as a photon leaving the working
    /// space, detected around `r`.
    ///
    /// `target` must carry the same partition and block labels as `emit`,
    /// with one product-guise quantum fewer in a single mode. Other modes keep
    /// their occupation and guise, except that vacuum slots may be absent from
    /// the target.
    pub fn decohere(&self, emit: usize, target: usize, r: Vec3) -> Result<Decoherence, QStateError> {
        self.check_index(emit)?;
        self.check_index(target)?;
        let a = self.amps[emit];
        if a.norm() <= SUPPORT_TOL {
            return Err(QStateError::NotInSupport(emit));
        }
        let src = &self.basis.elements()[emit];
        if !src.has_free_photon() {
            return Err(QStateError::NoPhoton(emit));
        }
        let dst = &self.basis.elements()[target];
        let mode = emitted_mode(src, dst).ok_or(QStateError::BadTarget { emit, target })?;
        let gap = src.level() - dst.level();
        debug_assert!((gap - mode.omega()).abs() <= RESONANCE_TOL);

        let phase = C64::from_polar(1.0, dot3(&mode.k(), &r));
        let record = EmissionRecord {
            direction: mode.k(),
            location: r,
            amplitude: a * phase,
            gap,
            source_index: emit,
            target_index: target,
            mode: mode.clone(),
        };
        let mut amps = self.amps.clone();
        amps[emit] = C64::new(0.0, 0.0);
        let residual = QState { basis: self.basis.clone(), amps, time: self.time };
        let mut detected = vec![C64::new(0.0, 0.0); self.amps.len()];
        detected[target] = a / a.norm();
        let emitted = QState { basis: self.basis.clone(), amps: detected, time: self.time };
        Ok(Decoherence { residual, emitted, record })
    }
}

/// The mode whose quantum leaves when going from `src` to `dst`, if `dst` is
/// a valid emission target.
fn emitted_mode<'a>(src: &'a BasisElement, dst: &BasisElement) -> Option<&'a ModeLabel> {
    if src.partition() != dst.partition() || src.en_labels() != dst.en_labels() {
        return None;
    }
    src.photons().iter().filter(|s| s.guise == Guise::Product && s.n() >= 1).map(|s| s.mode()).find(|m| {
        let ids: BTreeSet<&str> = src.photons().iter().chain(dst.photons()).map(|s| s.mode().id()).collect();
        ids.into_iter().all(|id| {
            let want = src.occupation(id) - u32::from(id == m.id());
            match (src.slot(id), dst.slot(id)) {
                (_, None) => want == 0,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => b.n() == want && a.guise == b.guise && a.mode() == b.mode(),
            }
        })
    })
}

/// The two branches of a decoherence event.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoherence {
    /// Input state with the emitting amplitude removed, not renormalized.
    pub residual: QState,
    /// State conditioned on detection: unit amplitude on the target.
    pub emitted: QState,
    pub record: EmissionRecord,
}

/// A photon that left the working space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionRecord {
    pub mode: ModeLabel,
    /// Wavevector of the emitted photon.
    pub direction: Vec3,
    /// Detection location `R`.
    pub location: Vec3,
    /// `a · exp(i k·R)`.
    pub amplitude: C64,
    /// Level difference discharged by the emission.
    pub gap: f64,
    pub source_index: usize,
    pub target_index: usize,
}

/// Unit amplitude on `e`.
pub fn window_state(basis: &Arc<Basis>, e: &BasisElement) -> Result<QState, QStateError> {
    let i = basis.canonical_index(e)?;
    window_index(basis, i)
}

pub fn window_index(basis: &Arc<Basis>, index: usize) -> Result<QState, QStateError> {
    let mut s = QState::zero(basis.clone());
    s.check_index(index)?;
    s.amps[index] = C64::new(1.0, 0.0);
    Ok(s)
}
