//! JSON input formats shared by the CLI and the script loader.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{enumerate_basis, Basis, BasisElement, BasisError, Channel, Guise, PhaseDir, PhotonSlot};
use crate::labels::{
    CouplingModel, EnKey, EnLabel, FockLabel, LabelError, ModeLabel, PartitionScheme, Registry, RegistryError,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("unknown partition `{0}`")]
    UnknownPartition(String),
    #[error("partition `{0}` lists no levels and no explicit elements are given")]
    NoLevels(String),
    #[error("element `{0}` not found in the basis")]
    UnknownElement(String),
    #[error("element index {index} out of range for basis of size {len}")]
    ElementOutOfRange { index: usize, len: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Reads and parses a JSON file; parse errors carry line and column.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub a: EnKey,
    pub b: EnKey,
    /// Transition integral `T(a, b)`; `T(b, a)` is its conjugate.
    pub t: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub t_im: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionConfig {
    pub name: String,
    pub blocks: Vec<Vec<usize>>,
    /// Allowed levels per block, used for enumeration.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<Vec<EnKey>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonSpec {
    pub mode: String,
    pub n: u32,
    pub guise: Guise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub partition: String,
    pub labels: Vec<EnKey>,
    #[serde(default)]
    pub photons: Vec<PhotonSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseDir>,
}

/// Levels, modes, transition integrals and partitions. With `elements` the
/// basis is exactly that list; otherwise it is enumerated up to `n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub levels: Vec<EnLabel>,
    #[serde(default)]
    pub modes: Vec<ModeLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<TransitionSpec>,
    pub partitions: Vec<PartitionConfig>,
    #[serde(default)]
    pub n_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementSpec>>,
}

impl BasisConfig {
    pub fn registry(&self) -> Result<Registry, ConfigError> {
        let mut r = Registry::new();
        for l in &self.levels {
            r.add_level(*l)?;
        }
        for m in &self.modes {
            r.add_mode(m.clone())?;
        }
        for t in &self.transitions {
            r.level(t.a)?;
            r.level(t.b)?;
            r.couplings.set(t.a, t.b, C64::new(t.t, t.t_im));
        }
        Ok(r)
    }

    fn schemes(&self) -> Result<BTreeMap<&str, PartitionScheme>, ConfigError> {
        self.partitions
            .iter()
            .map(|p| Ok((p.name.as_str(), PartitionScheme::new(p.name.clone(), p.blocks.clone())?)))
            .collect()
    }

    pub fn element(&self, registry: &Registry, spec: &ElementSpec) -> Result<BasisElement, ConfigError> {
        let schemes = self.schemes()?;
        element_from(&schemes, registry, spec)
    }

    pub fn build(&self) -> Result<(Arc<Basis>, Registry), ConfigError> {
        let registry = self.registry()?;
        let schemes = self.schemes()?;
        let basis = match &self.elements {
            Some(specs) => {
                let els = specs.iter().map(|s| element_from(&schemes, &registry, s)).collect::<Result<Vec<_>, _>>()?;
                Basis::from_elements(els)?
            }
            None => {
                let mut channels = Vec::new();
                for p in &self.partitions {
                    if p.levels.is_empty() {
                        return Err(ConfigError::NoLevels(p.name.clone()));
                    }
                    channels.push(Channel::new(schemes[p.name.as_str()].clone(), p.levels.clone()));
                }
                enumerate_basis(&registry, &channels, &self.modes, self.n_max)?
            }
        };
        Ok((Arc::new(basis), registry))
    }

    /// Explicit configuration reproducing `basis`; `extra_modes` covers modes
    /// used only by drives.
    pub fn from_basis(basis: &Basis, extra_modes: &[ModeLabel], couplings: &CouplingModel) -> Self {
        let mut levels: BTreeMap<EnKey, EnLabel> = BTreeMap::new();
        let mut parts: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        for e in basis.elements() {
            for l in e.en_labels() {
                levels.insert(l.key(), *l);
            }
            parts.insert(e.partition().name().to_string(), e.partition().blocks().to_vec());
        }
        let mut modes: BTreeMap<String, ModeLabel> = basis.modes().map(|m| (m.id().to_string(), m.clone())).collect();
        for m in extra_modes {
            modes.entry(m.id().to_string()).or_insert_with(|| m.clone());
        }
        let transitions = couplings
            .entries()
            .filter(|(a, b, _)| a < b)
            .map(|(a, b, t)| TransitionSpec { a, b, t: t.re, t_im: t.im })
            .collect();
        let elements = basis
            .elements()
            .iter()
            .map(|e| ElementSpec {
                partition: e.partition().name().to_string(),
                labels: e.en_labels().iter().map(EnLabel::key).collect(),
                photons: e
                    .photons()
                    .iter()
                    .map(|s| PhotonSpec { mode: s.mode().id().to_string(), n: s.n(), guise: s.guise })
                    .collect(),
                phase: e.phase_dir(),
            })
            .collect();
        BasisConfig {
            levels: levels.into_values().collect(),
            modes: modes.into_values().collect(),
            transitions,
            partitions: parts
                .into_iter()
                .map(|(name, blocks)| PartitionConfig { name, blocks, levels: Vec::new() })
                .collect(),
            n_max: 0,
            elements: Some(elements),
        }
    }
}

fn element_from(
    schemes: &BTreeMap<&str, PartitionScheme>,
    registry: &Registry,
    spec: &ElementSpec,
) -> Result<BasisElement, ConfigError> {
    let scheme =
        schemes.get(spec.partition.as_str()).ok_or_else(|| ConfigError::UnknownPartition(spec.partition.clone()))?;
    let en = spec.labels.iter().map(|k| registry.level(*k).copied()).collect::<Result<Vec<_>, _>>()?;
    let photons = spec
        .photons
        .iter()
        .map(|p| Ok(PhotonSlot { fock: FockLabel::new(registry.mode(&p.mode)?.clone(), p.n), guise: p.guise }))
        .collect::<Result<Vec<_>, ConfigError>>()?;
    let mut e = BasisElement::new(scheme.clone(), en, photons)?;
    if let Some(dir) = spec.phase {
        e = e.with_phase(dir);
    }
    Ok(e)
}

/// A basis element named by index, by notation or by full specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Notation(String),
    Spec(ElementSpec),
}

impl ElementRef {
    pub fn resolve(&self, basis: &Basis, cfg: &BasisConfig, registry: &Registry) -> Result<usize, ConfigError> {
        match self {
            ElementRef::Index(i) => {
                if *i >= basis.len() {
                    return Err(ConfigError::ElementOutOfRange { index: *i, len: basis.len() });
                }
                Ok(*i)
            }
            ElementRef::Notation(s) => basis.find_notation(s).ok_or_else(|| ConfigError::UnknownElement(s.clone())),
            ElementRef::Spec(spec) => {
                let e = cfg.element(registry, spec)?;
                basis.canonical_index(&e).map_err(|_| ConfigError::UnknownElement(e.to_string()))
            }
        }
    }

    /// Notation reference to element `i`.
    pub fn notation(basis: &Basis, i: usize) -> Self {
        ElementRef::Notation(basis.elements()[i].to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = r#"{
        "levels": [{"j":0,"k":0,"energy":0.0},{"j":1,"k":0,"energy":1.0}],
        "modes": [{"id":"w","omega":1.0,"dir":[1,0,0]}],
        "transitions": [{"a":{"j":0,"k":0},"b":{"j":1,"k":0},"t":1.0}],
        "partitions": [{"name":"A","blocks":[[1]],"levels":[[{"j":0,"k":0},{"j":1,"k":0}]]}],
        "n_max": 1
    }"#;

    #[test]
    fn enumerated_config() {
        let cfg: BasisConfig = parse_json(DEMO, "demo").unwrap();
        let (b, r) = cfg.build().unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(r.couplings.transition(EnKey::new(1, 0), EnKey::new(0, 0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn explicit_roundtrip() {
        let cfg: BasisConfig = parse_json(DEMO, "demo").unwrap();
        let (b, r) = cfg.build().unwrap();
        let exported = BasisConfig::from_basis(&b, &[], &r.couplings);
        let (b2, _) = exported.build().unwrap();
        assert_eq!(b.elements(), b2.elements());
        for i in 0..b.len() {
            assert_eq!(ElementRef::notation(&b, i).resolve(&b2, &exported, &r).unwrap(), i);
        }
    }

    #[test]
    fn parse_error_has_position() {
        let err = parse_json::<BasisConfig>("{\n  \"levels\": [\n  {\"j\": 0}\n]}", "bad.json").unwrap_err();
        match err {
            ConfigError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("k"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_references() {
        let cfg: BasisConfig = parse_json(DEMO, "demo").unwrap();
        let (b, r) = cfg.build().unwrap();
        assert!(matches!(ElementRef::Index(99).resolve(&b, &cfg, &r), Err(ConfigError::ElementOutOfRange { .. })));
        assert!(ElementRef::Notation("nope".into()).resolve(&b, &cfg, &r).is_err());
        let spec = ElementSpec { partition: "Z".into(), labels: vec![], photons: vec![], phase: None };
        assert!(matches!(ElementRef::Spec(spec).resolve(&b, &cfg, &r), Err(ConfigError::UnknownPartition(_))));
    }
}
