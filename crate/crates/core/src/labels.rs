//! Label algebra: radiation modes, photon occupations, electronuclear levels,
//! partition schemes and the transition integrals that couple levels.
//!
//! Everything here is an immutable value. Energies and frequencies share one
//! unit (ħ = 1), and a mode's wavevector carries magnitude ω so that momentum
//! bookkeeping is a plain vector sum.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cartesian 3-vector.
pub type Vec3 = [f64; 3];

/// Default tolerance for resonance tests.
pub const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabelError {
    #[error("mode `{id}`: frequency must be finite and positive, got {omega}")]
    BadFrequency { id: String, omega: f64 },
    #[error("mode `{id}`: direction must be a finite non-zero vector")]
    BadDirection { id: String },
    #[error("level (j={j}, k={k}): energy must be finite")]
    BadEnergy { j: u32, k: u32 },
    #[error("mode `{0}` appears more than once")]
    DuplicateMode(String),
    #[error("partition `{name}`: {reason}")]
    BadPartition { name: String, reason: String },
    #[error("transition integrals are not Hermitian at ({a}, {b})")]
    NonHermitian { a: EnKey, b: EnKey },
}

pub fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A radiation mode: a frequency together with a propagation direction.
///
/// The stored wavevector is `omega` times the unit direction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ModeRepr", into = "ModeRepr")]
pub struct ModeLabel {
    id: String,
    omega: f64,
    k: Vec3,
}

#[derive(Serialize, Deserialize)]
struct ModeRepr {
    id: String,
    omega: f64,
    dir: Vec3,
}

impl TryFrom<ModeRepr> for ModeLabel {
    type Error = LabelError;
    fn try_from(r: ModeRepr) -> Result<Self, LabelError> {
        ModeLabel::new(r.id, r.omega, r.dir)
    }
}

impl From<ModeLabel> for ModeRepr {
    fn from(m: ModeLabel) -> Self {
        let dir = m.unit_direction();
        ModeRepr { id: m.id, omega: m.omega, dir }
    }
}

impl ModeLabel {
    pub fn new(id: impl Into<String>, omega: f64, direction: Vec3) -> Result<Self, LabelError> {
        let id = id.into();
        if !(omega.is_finite() && omega > 0.0) {
            return Err(LabelError::BadFrequency { id, omega });
        }
        let len = norm3(&direction);
        if !(len.is_finite() && len > 0.0) {
            return Err(LabelError::BadDirection { id });
        }
        let k = [omega * direction[0] / len, omega * direction[1] / len, omega * direction[2] / len];
        Ok(ModeLabel { id, omega, k })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Wavevector, magnitude `omega`.
    pub fn k(&self) -> Vec3 {
        self.k
    }

    pub fn unit_direction(&self) -> Vec3 {
        [self.k[0] / self.omega, self.k[1] / self.omega, self.k[2] / self.omega]
    }
}

impl PartialEq for ModeLabel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ModeLabel {}

impl PartialOrd for ModeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id
            .cmp(&other.id)
            .then(self.omega.total_cmp(&other.omega))
            .then(self.k[0].total_cmp(&other.k[0]))
            .then(self.k[1].total_cmp(&other.k[1]))
            .then(self.k[2].total_cmp(&other.k[2]))
    }
}

impl Hash for ModeLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
        self.omega.to_bits().hash(state);
        for c in self.k {
            c.to_bits().hash(state);
        }
    }
}

/// Photon occupation of one mode. `n == 0` is the colored vacuum `|0_ω⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockLabel {
    pub mode: ModeLabel,
    pub n: u32,
}

impl FockLabel {
    pub fn new(mode: ModeLabel, n: u32) -> Self {
        FockLabel { mode, n }
    }

    pub fn vacuum(mode: ModeLabel) -> Self {
        FockLabel { mode, n: 0 }
    }
}

/// Quantum-number key of an electronuclear level: electronic `j` and the
/// subsidiary label `k(j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnKey {
    pub j: u32,
    pub k: u32,
}

impl EnKey {
    pub const fn new(j: u32, k: u32) -> Self {
        EnKey { j, k }
    }
}

impl fmt::Display for EnKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j{} k{}", self.j, self.k)
    }
}

/// Electronuclear level `|j k(j)⟩` with its energy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnLabel {
    pub j: u32,
    pub k: u32,
    pub energy: f64,
}

impl EnLabel {
    pub fn new(j: u32, k: u32, energy: f64) -> Result<Self, LabelError> {
        if !energy.is_finite() {
            return Err(LabelError::BadEnergy { j, k });
        }
        Ok(EnLabel { j, k, energy })
    }

    pub fn key(&self) -> EnKey {
        EnKey::new(self.j, self.k)
    }
}

impl PartialEq for EnLabel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EnLabel {}

impl PartialOrd for EnLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EnLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then(self.energy.total_cmp(&other.energy))
    }
}

impl Hash for EnLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
        self.energy.to_bits().hash(state);
    }
}

/// True iff `|ΔE| − ω` vanishes within `tol`, where `ΔE` is the upper level
/// minus the lower one. The test is symmetric in `a` and `b`.
///
/// Panics if `tol` is negative or NaN.
pub fn is_resonant(a: &EnLabel, b: &EnLabel, mode: &ModeLabel, tol: f64) -> bool {
    assert!(tol >= 0.0, "resonance tolerance must be non-negative");
    ((a.energy - b.energy).abs() - mode.omega()).abs() <= tol
}

/// Energy level of an electronuclear state dressed with the given photon
/// occupations: `E + Σ n·ω`. Zero-point terms are omitted; only level
/// differences carry meaning.
pub fn photonic_level(en: &EnLabel, focks: &[FockLabel]) -> Result<f64, LabelError> {
    let mut seen = BTreeSet::new();
    let mut level = en.energy;
    for f in focks {
        if !seen.insert(f.mode.id()) {
            return Err(LabelError::DuplicateMode(f.mode.id().to_string()));
        }
        level += f64::from(f.n) * f.mode.omega();
    }
    Ok(level)
}

/// Ordered partition of constituents `1..=m` into partite blocks.
///
/// Schemes order by block count first, then name, then block layout, so a
/// 1-partite scheme precedes every bipartite one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct PartitionScheme {
    name: String,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    name: String,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for PartitionScheme {
    type Error = LabelError;
    fn try_from(r: PartitionRepr) -> Result<Self, LabelError> {
        PartitionScheme::new(r.name, r.blocks)
    }
}

impl From<PartitionScheme> for PartitionRepr {
    fn from(p: PartitionScheme) -> Self {
        PartitionRepr { name: p.name, blocks: p.blocks }
    }
}

impl PartitionScheme {
    /// Blocks must be non-empty, disjoint, and cover `1..=m` exactly.
    /// Constituents inside each block are sorted.
    pub fn new(name: impl Into<String>, blocks: Vec<Vec<usize>>) -> Result<Self, LabelError> {
        let name = name.into();
        let bad = |reason: &str| LabelError::BadPartition { name: name.clone(), reason: reason.into() };
        if blocks.is_empty() {
            return Err(bad("no blocks"));
        }
        let mut blocks = blocks;
        let mut all = BTreeSet::new();
        let mut total = 0;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(bad("empty block"));
            }
            b.sort_unstable();
            total += b.len();
            all.extend(b.iter().copied());
        }
        if all.len() != total {
            return Err(bad("blocks overlap"));
        }
        let m = all.len();
        if all.iter().copied().ne(1..=m) {
            return Err(bad("blocks must cover constituents 1..m"));
        }
        Ok(PartitionScheme { name, blocks })
    }

    /// Single block holding all `m` constituents.
    pub fn one_partite(name: impl Into<String>, m: usize) -> Result<Self, LabelError> {
        Self::new(name, vec![(1..=m).collect()])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Number of elementary constituents `m`.
    pub fn constituents(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

impl PartialOrd for PartitionScheme {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PartitionScheme {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks
            .len()
            .cmp(&other.blocks.len())
            .then_with(|| self.name.cmp(&other.name))
            .then_with(|| self.blocks.cmp(&other.blocks))
    }
}

/// Transition integrals between electronuclear levels.
///
/// Absent entries are zero: a dark transition. [`CouplingModel::set`] stores
/// both directions so the map is Hermitian by construction;
/// [`CouplingModel::set_directed`] exists for loaders that receive each
/// direction separately and must be checked with [`CouplingModel::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CouplingModel {
    transitions: BTreeMap<(EnKey, EnKey), C64>,
}

impl CouplingModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, a: EnKey, b: EnKey, value: C64) -> &mut Self {
        self.transitions.insert((a, b), value);
        self.transitions.insert((b, a), value.conj());
        self
    }

    pub fn set_directed(&mut self, a: EnKey, b: EnKey, value: C64) -> &mut Self {
        self.transitions.insert((a, b), value);
        self
    }

    /// Transition integral `T(a, b)`. A one-directional entry is read as the
    /// conjugate of its partner.
    pub fn transition(&self, a: EnKey, b: EnKey) -> C64 {
        if let Some(v) = self.transitions.get(&(a, b)) {
            *v
        } else if let Some(v) = self.transitions.get(&(b, a)) {
            v.conj()
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn is_dark(&self, a: EnKey, b: EnKey) -> bool {
        self.transition(a, b) == C64::new(0.0, 0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (EnKey, EnKey, C64)> + '_ {
        self.transitions.iter().map(|(&(a, b), &v)| (a, b, v))
    }

    /// Checks `T(a,b) == conj(T(b,a))` for every pair stored in both directions.
    pub fn validate(&self) -> Result<(), LabelError> {
        for (&(a, b), &v) in &self.transitions {
            if let Some(w) = self.transitions.get(&(b, a)) {
                if (v - w.conj()).norm() > 1e-12 * (1.0 + v.norm()) {
                    return Err(LabelError::NonHermitian { a, b });
                }
            }
        }
        Ok(())
    }
}

/// Named collection of levels and modes, plus the transition integrals
/// between levels. Level keys and mode ids are unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    levels: BTreeMap<EnKey, EnLabel>,
    modes: BTreeMap<String, ModeLabel>,
    pub couplings: CouplingModel,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error("level ({0}) registered twice")]
    DuplicateLevel(EnKey),
    #[error("mode `{0}` registered twice")]
    DuplicateMode(String),
    #[error("unknown level ({0})")]
    UnknownLevel(EnKey),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_level(&mut self, level: EnLabel) -> Result<&mut Self, RegistryError> {
        if self.levels.insert(level.key(), level).is_some() {
            return Err(RegistryError::DuplicateLevel(level.key()));
        }
        Ok(self)
    }

    pub fn add_mode(&mut self, mode: ModeLabel) -> Result<&mut Self, RegistryError> {
        let id = mode.id().to_string();
        if self.modes.insert(id.clone(), mode).is_some() {
            return Err(RegistryError::DuplicateMode(id));
        }
        Ok(self)
    }

    pub fn level(&self, key: EnKey) -> Result<&EnLabel, RegistryError> {
        self.levels.get(&key).ok_or(RegistryError::UnknownLevel(key))
    }

    pub fn mode(&self, id: &str) -> Result<&ModeLabel, RegistryError> {
        self.modes.get(id).ok_or_else(|| RegistryError::UnknownMode(id.to_string()))
    }

    pub fn levels(&self) -> impl Iterator<Item = &EnLabel> {
        self.levels.values()
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeLabel> {
        self.modes.values()
    }
}
