//! Photonic basis elements and ordered basis sets.
//!
//! An element combines a partitioned electronuclear part with per-mode photon
//! occupations, each carried either as a direct product `|j k⟩ ⊗ |n_ω⟩` or
//! entangled `|j k; n_ω⟩`. A [`Basis`] keeps its elements in one canonical
//! total order, independent of construction order:
//!
//! 1. partition scheme (block count, then name, then layout),
//! 2. block labels, lexicographic by `(j, k)`,
//! 3. per-mode occupation, higher photon numbers first,
//! 4. guise, product before entangled,
//! 5. phase tag.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labels::{EnKey, EnLabel, FockLabel, LabelError, ModeLabel, PartitionScheme, Registry, RegistryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("partition `{partition}` has {blocks} blocks but {labels} block labels were given")]
    BlockCount { partition: String, blocks: usize, labels: usize },
    #[error("root and excited labels coincide ({0})")]
    DegenerateLabels(EnKey),
    #[error("duplicate basis element {0}")]
    Duplicate(String),
    #[error("element {0} is not in the basis")]
    NotInBasis(String),
    #[error("mode id `{0}` refers to two different modes")]
    ConflictingMode(String),
    #[error("partitions cover different constituent counts ({0} vs {1})")]
    ConstituentMismatch(usize, usize),
    #[error("no partitions given")]
    NoPartitions,
}

/// How a photon occupation is attached to the matter part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Guise {
    /// `|j k⟩ ⊗ |n_ω⟩`: the quanta are available for exchange.
    Product,
    /// `|j k; n_ω⟩`: non-separable, no quantum heralded for exchange.
    Entangled,
}

/// Incoming/outgoing tag, `exp(∓ i k·x)`. Metadata only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseDir {
    Incoming,
    Outgoing,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhotonSlot {
    pub fock: FockLabel,
    pub guise: Guise,
}

impl PhotonSlot {
    pub fn product(mode: &ModeLabel, n: u32) -> Self {
        PhotonSlot { fock: FockLabel::new(mode.clone(), n), guise: Guise::Product }
    }

    pub fn entangled(mode: &ModeLabel, n: u32) -> Self {
        PhotonSlot { fock: FockLabel::new(mode.clone(), n), guise: Guise::Entangled }
    }

    pub fn mode(&self) -> &ModeLabel {
        &self.fock.mode
    }

    pub fn n(&self) -> u32 {
        self.fock.n
    }
}

/// One photonic base state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    partition: PartitionScheme,
    en: Vec<EnLabel>,
    photons: Vec<PhotonSlot>,
    phase_dir: Option<PhaseDir>,
}

impl BasisElement {
    /// `en` holds one label per partition block, in block order. Photon slots
    /// are re-ordered by mode id; a mode may appear only once.
    pub fn new(partition: PartitionScheme, en: Vec<EnLabel>, mut photons: Vec<PhotonSlot>) -> Result<Self, BasisError> {
        if en.len() != partition.n_blocks() {
            return Err(BasisError::BlockCount {
                partition: partition.name().to_string(),
                blocks: partition.n_blocks(),
                labels: en.len(),
            });
        }
        photons.sort_by(|a, b| a.mode().id().cmp(b.mode().id()));
        for w in photons.windows(2) {
            if w[0].mode().id() == w[1].mode().id() {
                return Err(LabelError::DuplicateMode(w[0].mode().id().to_string()).into());
            }
        }
        Ok(BasisElement { partition, en, photons, phase_dir: None })
    }

    /// Single-block element over the one-constituent scheme `"1p"`.
    pub fn simple(en: EnLabel, photons: Vec<PhotonSlot>) -> Result<Self, BasisError> {
        Self::new(PartitionScheme::one_partite("1p", 1)?, vec![en], photons)
    }

    pub fn with_phase(mut self, dir: PhaseDir) -> Self {
        self.phase_dir = Some(dir);
        self
    }

    pub fn partition(&self) -> &PartitionScheme {
        &self.partition
    }

    pub fn en_labels(&self) -> &[EnLabel] {
        &self.en
    }

    pub fn photons(&self) -> &[PhotonSlot] {
        &self.photons
    }

    pub fn phase_dir(&self) -> Option<PhaseDir> {
        self.phase_dir
    }

    pub fn slot(&self, mode_id: &str) -> Option<&PhotonSlot> {
        self.photons.iter().find(|s| s.mode().id() == mode_id)
    }

    /// Photon number in a mode; modes not listed count as vacuum.
    pub fn occupation(&self, mode_id: &str) -> u32 {
        self.slot(mode_id).map_or(0, PhotonSlot::n)
    }

    /// Matter energy: the sum of block energies.
    pub fn en_energy(&self) -> f64 {
        self.en.iter().map(|e| e.energy).sum()
    }

    /// Photonic energy level, `Σ E_block + Σ n·ω`.
    pub fn level(&self) -> f64 {
        self.en_energy() + self.photons.iter().map(|s| f64::from(s.n()) * s.mode().omega()).sum::<f64>()
    }

    /// True when some product-guise slot holds at least one quantum.
    pub fn has_free_photon(&self) -> bool {
        self.photons.iter().any(|s| s.guise == Guise::Product && s.n() > 0)
    }

    fn occupation_key(&self) -> Vec<(&str, Reverse<u32>)> {
        self.photons.iter().map(|s| (s.mode().id(), Reverse(s.n()))).collect()
    }

    fn guise_key(&self) -> Vec<Guise> {
        self.photons.iter().map(|s| s.guise).collect()
    }
}

impl PartialOrd for BasisElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partition
            .cmp(&other.partition)
            .then_with(|| self.en.cmp(&other.en))
            .then_with(|| self.occupation_key().cmp(&other.occupation_key()))
            .then_with(|| self.guise_key().cmp(&other.guise_key()))
            .then_with(|| self.photons.iter().map(PhotonSlot::mode).cmp(other.photons.iter().map(PhotonSlot::mode)))
            .then_with(|| self.phase_dir.cmp(&other.phase_dir))
    }
}

impl fmt::Display for BasisElement {
    /// `A0|j0 k0; 1_w⟩ ⊗ |0_v⟩`: entangled slots sit inside the ket after
    /// `;`, product slots follow as separate kets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.partition.name())?;
        for (i, e) in self.en.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "j{} k{}", e.j, e.k)?;
        }
        let mut first = true;
        for s in self.photons.iter().filter(|s| s.guise == Guise::Entangled) {
            write!(f, "{} {}_{}", if first { ";" } else { "," }, s.n(), s.mode().id())?;
            first = false;
        }
        write!(f, "⟩")?;
        for s in self.photons.iter().filter(|s| s.guise == Guise::Product) {
            write!(f, " ⊗ |{}_{}⟩", s.n(), s.mode().id())?;
        }
        match self.phase_dir {
            Some(PhaseDir::Incoming) => write!(f, " (in)"),
            Some(PhaseDir::Outgoing) => write!(f, " (out)"),
            None => Ok(()),
        }
    }
}

/// The four members generated by one level pair and one mode, in the order
/// `[root ⊗ |1⟩, |root; 1⟩, excited ⊗ |0⟩, |excited; 0⟩]`.
///
/// Resonance is not required; off-resonant manifolds are legal.
pub fn fourfold_manifold(root: &EnLabel, excited: &EnLabel, mode: &ModeLabel) -> Result<[BasisElement; 4], BasisError> {
    if root.key() == excited.key() {
        return Err(BasisError::DegenerateLabels(root.key()));
    }
    Ok([
        BasisElement::simple(*root, vec![PhotonSlot::product(mode, 1)])?,
        BasisElement::simple(*root, vec![PhotonSlot::entangled(mode, 1)])?,
        BasisElement::simple(*excited, vec![PhotonSlot::product(mode, 0)])?,
        BasisElement::simple(*excited, vec![PhotonSlot::entangled(mode, 0)])?,
    ])
}

/// A partition scheme together with the levels each block may take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub scheme: PartitionScheme,
    /// Allowed level keys, one list per block.
    pub levels: Vec<Vec<EnKey>>,
}

impl Channel {
    pub fn new(scheme: PartitionScheme, levels: Vec<Vec<EnKey>>) -> Self {
        Channel { scheme, levels }
    }
}

/// Fixed, canonically ordered set of basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    elements: Vec<BasisElement>,
    modes: BTreeMap<String, ModeLabel>,
    n_max: Option<u32>,
}

impl Basis {
    /// Sorts into canonical order. Rejects duplicates, mode ids bound to two
    /// different modes, and partitions with differing constituent counts.
    pub fn from_elements(mut elements: Vec<BasisElement>) -> Result<Self, BasisError> {
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(BasisError::Duplicate(w[0].to_string()));
            }
        }
        let mut modes: BTreeMap<String, ModeLabel> = BTreeMap::new();
        let mut m = None;
        for e in &elements {
            for s in e.photons() {
                match modes.get(s.mode().id()) {
                    Some(existing) if existing != s.mode() => {
                        return Err(BasisError::ConflictingMode(s.mode().id().to_string()))
                    }
                    Some(_) => {}
                    None => {
                        modes.insert(s.mode().id().to_string(), s.mode().clone());
                    }
                }
            }
            let c = e.partition().constituents();
            match m {
                None => m = Some(c),
                Some(prev) if prev != c => return Err(BasisError::ConstituentMismatch(prev, c)),
                Some(_) => {}
            }
        }
        Ok(Basis { elements, modes, n_max: None })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> Option<&BasisElement> {
        self.elements.get(index)
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeLabel> {
        self.modes.values()
    }

    pub fn mode(&self, id: &str) -> Option<&ModeLabel> {
        self.modes.get(id)
    }

    /// Occupation bound used during enumeration, if any.
    pub fn n_max(&self) -> Option<u32> {
        self.n_max
    }

    /// Zero-based position of `e` in canonical order.
    pub fn canonical_index(&self, e: &BasisElement) -> Result<usize, BasisError> {
        self.elements.binary_search(e).map_err(|_| BasisError::NotInBasis(e.to_string()))
    }

    pub fn contains(&self, e: &BasisElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// Index of the element whose notation equals `notation`.
    pub fn find_notation(&self, notation: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.to_string() == notation)
    }

    /// Deterministic JSON listing of the basis.
    pub fn to_json(&self) -> String {
        let rows: Vec<ElementRow<'_>> = self
            .elements
            .iter()
            .enumerate()
            .map(|(index, e)| ElementRow {
                index,
                partition: e.partition().name(),
                blocks: e.partition().blocks(),
                labels: e.en_labels().iter().map(|l| [l.j, l.k]).collect(),
                occupations: e.photons().iter().map(|s| (s.mode().id(), s.n())).collect(),
                guises: e.photons().iter().map(|s| s.guise).collect(),
                phase: e.phase_dir(),
                level: e.level(),
                notation: e.to_string(),
            })
            .collect();
        let listing = Listing { n_max: self.n_max, modes: self.modes.values().collect(), elements: rows };
        serde_json::to_string_pretty(&listing).expect("basis listing serializes")
    }
}

#[derive(Serialize)]
struct Listing<'a> {
    n_max: Option<u32>,
    modes: Vec<&'a ModeLabel>,
    elements: Vec<ElementRow<'a>>,
}

#[derive(Serialize)]
struct ElementRow<'a> {
    index: usize,
    partition: &'a str,
    blocks: &'a [Vec<usize>],
    labels: Vec<[u32; 2]>,
    occupations: Vec<(&'a str, u32)>,
    guises: Vec<Guise>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<PhaseDir>,
    level: f64,
    notation: String,
}

/// Every combination of channel block labels, per-mode occupation in
/// `0..=n_max`, and per-mode guise, exactly once, in canonical order.
///
/// With no modes the result holds one photon-free element per label
/// combination.
pub fn enumerate_basis(
    registry: &Registry,
    channels: &[Channel],
    modes: &[ModeLabel],
    n_max: u32,
) -> Result<Basis, BasisError> {
    if channels.is_empty() {
        return Err(BasisError::NoPartitions);
    }
    let mut seen = BTreeSet::new();
    for m in modes {
        if !seen.insert(m.id()) {
            return Err(LabelError::DuplicateMode(m.id().to_string()).into());
        }
    }

    // One entry per mode: (n, guise) choices.
    let per_mode: Vec<(u32, Guise)> = (0..=n_max).flat_map(|n| [(n, Guise::Product), (n, Guise::Entangled)]).collect();
    let photon_parts = cartesian(&vec![per_mode.len(); modes.len()]);

    let mut elements = Vec::new();
    for ch in channels {
        if ch.levels.len() != ch.scheme.n_blocks() {
            return Err(BasisError::BlockCount {
                partition: ch.scheme.name().to_string(),
                blocks: ch.scheme.n_blocks(),
                labels: ch.levels.len(),
            });
        }
        let mut block_levels = Vec::with_capacity(ch.levels.len());
        for keys in &ch.levels {
            let mut lv = keys.iter().map(|k| registry.level(*k).copied()).collect::<Result<Vec<_>, _>>()?;
            lv.sort();
            lv.dedup();
            block_levels.push(lv);
        }
        let sizes: Vec<usize> = block_levels.iter().map(Vec::len).collect();
        for label_pick in cartesian(&sizes) {
            let en: Vec<EnLabel> = label_pick.iter().zip(&block_levels).map(|(&i, lv)| lv[i]).collect();
            for photon_pick in &photon_parts {
                let photons = photon_pick
                    .iter()
                    .zip(modes)
                    .map(|(&i, mode)| {
                        let (n, guise) = per_mode[i];
                        PhotonSlot { fock: FockLabel::new(mode.clone(), n), guise }
                    })
                    .collect();
                elements.push(BasisElement::new(ch.scheme.clone(), en.clone(), photons)?);
            }
        }
    }
    let mut basis = Basis::from_elements(elements)?;
    basis.n_max = Some(n_max);
    Ok(basis)
}

/// Mixed-radix counter over `sizes`; a zero-length `sizes` yields one empty pick.
fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    if sizes.contains(&0) {
        return Vec::new();
    }
    let total: usize = sizes.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; sizes.len()];
    for _ in 0..total {
        out.push(digits.clone());
        for (d, &s) in digits.iter_mut().zip(sizes).rev() {
            *d += 1;
            if *d < s {
                break;
            }
            *d = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lvl(j: u32, e: f64) -> EnLabel {
        EnLabel::new(j, 0, e).unwrap()
    }

    fn mode(id: &str, omega: f64) -> ModeLabel {
        ModeLabel::new(id, omega, [1.0, 0.0, 0.0]).unwrap()
    }

    fn pair_registry() -> Registry {
        let mut r = Registry::new();
        r.add_level(lvl(0, 0.0)).unwrap().add_level(lvl(1, 1.0)).unwrap();
        r
    }

    #[test]
    fn fourfold_order_and_guises() {
        let w = mode("w10", 1.0);
        let f = fourfold_manifold(&lvl(0, 0.0), &lvl(1, 1.0), &w).unwrap();
        let occ: Vec<u32> = f.iter().map(|e| e.occupation("w10")).collect();
        let guise: Vec<Guise> = f.iter().map(|e| e.photons()[0].guise).collect();
        assert_eq!(occ, [1, 1, 0, 0]);
        assert_eq!(guise, [Guise::Product, Guise::Entangled, Guise::Product, Guise::Entangled]);
        assert_eq!(f[0].en_labels()[0].j, 0);
        assert_eq!(f[3].en_labels()[0].j, 1);
    }

    #[test]
    fn fourfold_resonant_levels_coincide() {
        let w = mode("w", 1.0);
        let f = fourfold_manifold(&lvl(0, 0.25), &lvl(1, 1.25), &w).unwrap();
        for e in &f {
            assert!((e.level() - 1.25).abs() < 1e-12);
        }
    }

    #[test]
    fn fourfold_off_resonance_inside_gap() {
        let w = mode("w", 0.6);
        let f = fourfold_manifold(&lvl(0, 0.0), &lvl(1, 1.0), &w).unwrap();
        let entangled_root = f[1].level();
        assert!(entangled_root > 0.0 && entangled_root < 1.0);
    }

    #[test]
    fn fourfold_rejects_same_labels() {
        let w = mode("w", 1.0);
        assert!(matches!(fourfold_manifold(&lvl(0, 0.0), &lvl(0, 0.0), &w), Err(BasisError::DegenerateLabels(_))));
    }

    #[test]
    fn enumerate_pair_one_mode() {
        let r = pair_registry();
        let ch =
            Channel::new(PartitionScheme::one_partite("A", 1).unwrap(), vec![vec![EnKey::new(0, 0), EnKey::new(1, 0)]]);
        let b = enumerate_basis(&r, &[ch], &[mode("w", 1.0)], 1).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(b.n_max(), Some(1));
        // within one label: ⊗1, ;1, ⊗0, ;0
        let first: Vec<String> = b.elements()[..4].iter().map(|e| e.to_string()).collect();
        assert_eq!(first, ["A|j0 k0⟩ ⊗ |1_w⟩", "A|j0 k0; 1_w⟩", "A|j0 k0⟩ ⊗ |0_w⟩", "A|j0 k0; 0_w⟩"]);
    }

    #[test]
    fn enumerate_vacuum_only() {
        let mut r = Registry::new();
        r.add_level(lvl(0, 0.0)).unwrap();
        let ch = Channel::new(PartitionScheme::one_partite("A", 1).unwrap(), vec![vec![EnKey::new(0, 0)]]);
        let b = enumerate_basis(&r, std::slice::from_ref(&ch), &[mode("w", 1.0)], 0).unwrap();
        assert_eq!(b.len(), 2);
        let no_modes = enumerate_basis(&r, &[ch], &[], 3).unwrap();
        assert_eq!(no_modes.len(), 1);
        assert!(no_modes.elements()[0].photons().is_empty());
    }

    #[test]
    fn enumerate_unknown_label() {
        let r = pair_registry();
        let ch = Channel::new(PartitionScheme::one_partite("A", 1).unwrap(), vec![vec![EnKey::new(7, 0)]]);
        let err = enumerate_basis(&r, &[ch], &[], 0).unwrap_err();
        assert!(matches!(err, BasisError::Registry(RegistryError::UnknownLevel(_))));
    }

    #[test]
    fn enumerate_rejects_mixed_constituent_counts() {
        let r = pair_registry();
        let a = Channel::new(PartitionScheme::one_partite("A", 2).unwrap(), vec![vec![EnKey::new(0, 0)]]);
        let b = Channel::new(PartitionScheme::one_partite("B", 3).unwrap(), vec![vec![EnKey::new(1, 0)]]);
        assert!(matches!(enumerate_basis(&r, &[a, b], &[], 0), Err(BasisError::ConstituentMismatch(2, 3))));
    }

    #[test]
    fn canonical_index_roundtrip() {
        let r = pair_registry();
        let ch =
            Channel::new(PartitionScheme::one_partite("A", 1).unwrap(), vec![vec![EnKey::new(1, 0), EnKey::new(0, 0)]]);
        let b = enumerate_basis(&r, &[ch], &[mode("w", 1.0), mode("v", 0.5)], 1).unwrap();
        assert_eq!(b.canonical_index(&b.elements()[0]).unwrap(), 0);
        for (i, e) in b.elements().iter().enumerate() {
            assert_eq!(b.canonical_index(e).unwrap(), i);
        }
        let stranger = BasisElement::simple(lvl(0, 0.0), vec![PhotonSlot::product(&mode("w", 1.0), 5)]).unwrap();
        assert!(matches!(b.canonical_index(&stranger), Err(BasisError::NotInBasis(_))));
    }

    #[test]
    fn duplicates_rejected() {
        let e = BasisElement::simple(lvl(0, 0.0), vec![]).unwrap();
        assert!(matches!(Basis::from_elements(vec![e.clone(), e]), Err(BasisError::Duplicate(_))));
    }

    #[test]
    fn conflicting_mode_ids_rejected() {
        let a = BasisElement::simple(lvl(0, 0.0), vec![PhotonSlot::product(&mode("w", 1.0), 1)]).unwrap();
        let b = BasisElement::simple(lvl(1, 1.0), vec![PhotonSlot::product(&mode("w", 2.0), 1)]).unwrap();
        assert!(matches!(Basis::from_elements(vec![a, b]), Err(BasisError::ConflictingMode(_))));
    }

    #[test]
    fn element_rejects_duplicate_mode() {
        let w = mode("w", 1.0);
        let err = BasisElement::simple(lvl(0, 0.0), vec![PhotonSlot::product(&w, 1), PhotonSlot::entangled(&w, 0)]);
        assert!(err.is_err());
    }

    #[test]
    fn mixed_guise_notation() {
        let e = BasisElement::simple(
            lvl(1, 1.0),
            vec![PhotonSlot::product(&mode("w12", 0.3), 1), PhotonSlot::entangled(&mode("w10", 1.0), 0)],
        )
        .unwrap();
        assert_eq!(e.to_string(), "1p|j1 k0; 0_w10⟩ ⊗ |1_w12⟩");
        assert!((e.level() - 1.3).abs() < 1e-12);
        assert!(e.has_free_photon());
    }

    #[test]
    fn cartesian_counts() {
        assert_eq!(cartesian(&[]), vec![Vec::<usize>::new()]);
        assert_eq!(cartesian(&[2, 3]).len(), 6);
        assert!(cartesian(&[2, 0]).is_empty());
    }
}
