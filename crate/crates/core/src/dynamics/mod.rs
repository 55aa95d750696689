//! Hamiltonians over a basis, unitary propagation and eigen-analysis.
//!
//! The diagonal of every Hamiltonian is the photonic energy level of each
//! element. Off-diagonal entries only come from explicit [`Drive`]s: the
//! formalism has no spontaneous coupling between base states.

mod secular;
mod slit;

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{Basis, BasisElement};
use crate::labels::{CouplingModel, LabelError};
use crate::linalg::{eigh, CMatrix};
use crate::qstate::QState;

pub use secular::{FourStateModel, SecularReport};
pub use slit::{double_slit_pattern, visibility, SlitGeometry};

/// Degeneracy guard for first-order amplitudes.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("drive index {index} out of range for basis of size {len}")]
    DriveOutOfRange { index: usize, len: usize },
    #[error("drive couples element {0} to itself")]
    DiagonalDrive(usize),
    #[error("drive strength between {a} and {b} is not finite")]
    NonFiniteDrive { a: usize, b: usize },
    #[error("matrix is not Hermitian (defect {0:e})")]
    NonHermitian(f64),
    #[error("state and Hamiltonian live on different bases")]
    BasisMismatch,
    #[error("time step {0} is not finite")]
    BadStep(f64),
    #[error("levels {root} and {other} are degenerate but coupled")]
    Degenerate { root: usize, other: usize },
    #[error("root index {0} out of range")]
    BadRoot(usize),
    #[error("amplitudes are not normalized: |C1|² + |C2|² = {0}")]
    NotNormalized(f64),
    #[error("invalid slit geometry: {0}")]
    BadGeometry(&'static str),
}

/// External coupling between two basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub a: usize,
    pub b: usize,
    /// Field strength; `H[a][b] = strength · gate`, `H[b][a]` its conjugate.
    pub strength: C64,
    /// Effective two-photon coupling; not gated by a single transition integral.
    #[serde(default)]
    pub two_photon: bool,
}

impl Drive {
    pub fn new(a: usize, b: usize, strength: f64) -> Self {
        Drive { a, b, strength: C64::new(strength, 0.0), two_photon: false }
    }

    pub fn two_photon(a: usize, b: usize, strength: f64) -> Self {
        Drive { two_photon: true, ..Self::new(a, b, strength) }
    }
}

/// Transition-integral factor for a one-photon drive between `x` and `y`:
/// `T(x, y)` when they share a partition and differ in exactly one block
/// label, otherwise 1. Transitions missing from `cm` are dark.
pub fn transition_gate(cm: &CouplingModel, x: &BasisElement, y: &BasisElement) -> C64 {
    if x.partition() != y.partition() {
        return C64::new(1.0, 0.0);
    }
    let diff: Vec<_> = x.en_labels().iter().zip(y.en_labels()).filter(|(p, q)| p.key() != q.key()).collect();
    match diff.as_slice() {
        [(p, q)] => cm.transition(p.key(), q.key()),
        _ => C64::new(1.0, 0.0),
    }
}

/// Dense Hermitian Hamiltonian tied to a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    basis: Arc<Basis>,
    matrix: CMatrix,
}

impl Hamiltonian {
    /// Wraps an explicit matrix. Must be Hermitian to 1e-12.
    pub fn from_matrix(basis: Arc<Basis>, matrix: CMatrix) -> Result<Self, DynamicsError> {
        assert_eq!(basis.len(), matrix.dim(), "matrix dimension must match basis");
        let defect = matrix.hermitian_defect();
        if defect > 1e-12 {
            return Err(DynamicsError::NonHermitian(defect));
        }
        Ok(Hamiltonian { basis, matrix })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// `H[i][i]` is the level of element `i`; each drive adds a gated
/// off-diagonal pair.
pub fn build_hamiltonian(
    basis: &Arc<Basis>,
    cm: &CouplingModel,
    drives: &[Drive],
) -> Result<Hamiltonian, DynamicsError> {
    cm.validate()?;
    let levels: Vec<f64> = basis.elements().iter().map(BasisElement::level).collect();
    let mut h = CMatrix::from_diagonal(&levels);
    let len = basis.len();
    for d in drives {
        for index in [d.a, d.b] {
            if index >= len {
                return Err(DynamicsError::DriveOutOfRange { index, len });
            }
        }
        if d.a == d.b {
            return Err(DynamicsError::DiagonalDrive(d.a));
        }
        if !d.strength.is_finite() {
            return Err(DynamicsError::NonFiniteDrive { a: d.a, b: d.b });
        }
        let gate = if d.two_photon {
            C64::new(1.0, 0.0)
        } else {
            transition_gate(cm, &basis.elements()[d.a], &basis.elements()[d.b])
        };
        let v = d.strength * gate;
        h[(d.a, d.b)] += v;
        h[(d.b, d.a)] += v.conj();
    }
    Ok(Hamiltonian { basis: basis.clone(), matrix: h })
}

/// Cached `exp(−i H dt)` for repeated application.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: Arc<Basis>,
    dt: f64,
    u: CMatrix,
}

impl Propagator {
    pub fn new(h: &Hamiltonian, dt: f64) -> Result<Self, DynamicsError> {
        if !dt.is_finite() {
            return Err(DynamicsError::BadStep(dt));
        }
        Ok(Propagator { basis: h.basis.clone(), dt, u: unitary(h.matrix(), dt) })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn apply(&self, s: &QState) -> Result<QState, DynamicsError> {
        if !same_basis(&self.basis, s.basis()) {
            return Err(DynamicsError::BasisMismatch);
        }
        let amps = self.u.mul_vec(s.amps());
        Ok(s.with_amps(amps).expect("unitary image keeps length and finiteness").with_time(s.time() + self.dt))
    }
}

fn same_basis(a: &Arc<Basis>, b: &Arc<Basis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `V · diag(e^{−iλ dt}) · V†`; `dt = 0` returns the identity exactly.
///
/// One Newton–Schulz step `U (3 − U†U) / 2` follows, so that long chains of
/// composed steps stay unitary to rounding.
pub fn unitary(h: &CMatrix, dt: f64) -> CMatrix {
    let n = h.dim();
    if dt == 0.0 {
        return CMatrix::identity(n);
    }
    let e = eigh(h);
    let mut vd = e.vectors.clone();
    for (j, &lam) in e.values.iter().enumerate() {
        let ph = C64::from_polar(1.0, -lam * dt);
        for i in 0..n {
            vd[(i, j)] *= ph;
        }
    }
    let u = &vd * &e.vectors.adjoint();
    let defect = CMatrix::identity(n).scale(C64::new(3.0, 0.0)).sub(&(&u.adjoint() * &u));
    (&u * &defect).scale(C64::new(0.5, 0.0))
}

/// `exp(−i H dt) · s`, advancing the clock by `dt`.
pub fn propagate(s: &QState, h: &Hamiltonian, dt: f64) -> Result<QState, DynamicsError> {
    Propagator::new(h, dt)?.apply(s)
}

/// Full eigendecomposition with a distinguished root.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularSolution {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
    /// Eigenpair nearest the anchor; ties go to the lower index.
    pub root_index: usize,
}

impl SecularSolution {
    pub fn root_vector(&self) -> Vec<C64> {
        self.eigenvectors.column(self.root_index)
    }

    pub fn root_value(&self) -> f64 {
        self.eigenvalues[self.root_index]
    }
}

pub fn solve_secular(h: &Hamiltonian, anchor: f64) -> SecularSolution {
    let e = eigh(h.matrix());
    let mut root_index = 0;
    for (i, &lam) in e.values.iter().enumerate() {
        if (lam - anchor).abs() < (e.values[root_index] - anchor).abs() {
            root_index = i;
        }
    }
    SecularSolution { eigenvalues: e.values, eigenvectors: e.vectors, root_index }
}

/// First-order amplitudes `C_i = H[i][root] / (E_root − E_i)`, with
/// `C_root = 1`. Not normalized.
pub fn perturbative_amplitudes(h: &Hamiltonian, root: usize) -> Result<Vec<C64>, DynamicsError> {
    let m = h.matrix();
    if root >= m.dim() {
        return Err(DynamicsError::BadRoot(root));
    }
    let e_root = m[(root, root)].re;
    (0..m.dim())
        .map(|i| {
            if i == root {
                return Ok(C64::new(1.0, 0.0));
            }
            let v = m[(i, root)];
            let gap = e_root - m[(i, i)].re;
            if v == C64::new(0.0, 0.0) {
                Ok(v)
            } else if gap.abs() <= DEGENERACY_TOL {
                Err(DynamicsError::Degenerate { root, other: i })
            } else {
                Ok(v / gap)
            }
        })
        .collect()
}
