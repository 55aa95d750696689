//! Protocol script files and expected-support files.
//!
//! A script is a JSON object `{basis, initial, mode, seed, lifetime_rate,
//! steps}`; each step carries a `kind` tag. Elements may be referenced by
//! index, by notation string or by full specification.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{run, Keep, Models, ProtocolError, ProtocolStep, RunMode, Scenario, Step, Template, Trace};
use crate::basis::Basis;
use crate::config::{BasisConfig, ConfigError, ElementRef};
use crate::dynamics::Drive;
use crate::labels::{Registry, Vec3};
use crate::qstate::{window_index, QState};

fn default_rate() -> f64 {
    1.0
}

fn default_keep() -> Keep {
    Keep::Remainder
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub a: ElementRef,
    pub b: ElementRef,
    pub strength: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub strength_im: f64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub two_photon: bool,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSpec {
    Prepare {
        element: ElementRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    LaserOn {
        mode: String,
        drives: Vec<DriveSpec>,
        duration: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Wait {
        #[serde(default)]
        duration: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    InduceTransition {
        pairs: Vec<(ElementRef, ElementRef)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Erase {
        elements: Vec<ElementRef>,
        #[serde(default)]
        renormalize: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Decohere {
        emit: ElementRef,
        target: ElementRef,
        #[serde(default)]
        r: Vec3,
        #[serde(default = "default_keep")]
        keep: Keep,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub basis: BasisConfig,
    pub initial: ElementRef,
    #[serde(default)]
    pub mode: RunMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_rate")]
    pub lifetime_rate: f64,
    pub steps: Vec<StepSpec>,
}

/// A script resolved against its basis.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub basis: Arc<Basis>,
    pub registry: Registry,
    pub initial: QState,
    pub steps: Vec<ProtocolStep>,
    pub models: Models,
    pub mode: RunMode,
    pub seed: Option<u64>,
    config: BasisConfig,
}

impl Compiled {
    /// `seed` overrides the script's own seed.
    pub fn run(&self, seed: Option<u64>, mode: Option<RunMode>) -> Result<Trace, ProtocolError> {
        run(&self.initial, &self.steps, &self.models, mode.unwrap_or(self.mode), seed.or(self.seed))
    }

    pub fn resolve(&self, r: &ElementRef) -> Result<usize, ConfigError> {
        r.resolve(&self.basis, &self.config, &self.registry)
    }

    pub fn templates(&self, specs: &[TemplateSpec]) -> Result<Vec<Template>, ConfigError> {
        specs
            .iter()
            .map(|t| {
                let mut nonzero = t.nonzero.iter().map(|r| self.resolve(r)).collect::<Result<Vec<_>, _>>()?;
                nonzero.sort_unstable();
                Ok(Template { record: t.record, label: t.label.clone(), nonzero })
            })
            .collect()
    }
}

impl Script {
    pub fn compile(&self) -> Result<Compiled, ConfigError> {
        let (basis, registry) = self.basis.build()?;
        let ix = |r: &ElementRef| r.resolve(&basis, &self.basis, &registry);
        let initial = window_index(&basis, ix(&self.initial)?).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for spec in &self.steps {
            let (kind, note) = match spec {
                StepSpec::Prepare { element, note } => (Step::Prepare { element: ix(element)? }, note),
                StepSpec::LaserOn { mode, drives, duration, note } => {
                    let mode = registry.mode(mode)?.clone();
                    let drives = drives
                        .iter()
                        .map(|d| {
                            Ok(Drive {
                                a: ix(&d.a)?,
                                b: ix(&d.b)?,
                                strength: C64::new(d.strength, d.strength_im),
                                two_photon: d.two_photon,
                            })
                        })
                        .collect::<Result<Vec<_>, ConfigError>>()?;
                    (Step::LaserOn { mode, drives, duration: *duration }, note)
                }
                StepSpec::Wait { duration, note } => (Step::Wait { duration: *duration }, note),
                StepSpec::InduceTransition { pairs, note } => {
                    let pairs = pairs.iter().map(|(a, b)| Ok((ix(a)?, ix(b)?))).collect::<Result<_, ConfigError>>()?;
                    (Step::InduceTransition { pairs }, note)
                }
                StepSpec::Erase { elements, renormalize, note } => {
                    let indices = elements.iter().map(ix).collect::<Result<_, _>>()?;
                    (Step::Erase { indices, renormalize: *renormalize }, note)
                }
                StepSpec::Decohere { emit, target, r, keep, note } => {
                    (Step::Decohere { emit: ix(emit)?, target: ix(target)?, r: *r, keep: *keep }, note)
                }
            };
            steps.push(ProtocolStep { kind, note: note.clone() });
        }
        Ok(Compiled {
            models: Models { couplings: registry.couplings.clone(), lifetime_rate: self.lifetime_rate },
            basis,
            registry,
            initial,
            steps,
            mode: self.mode,
            seed: self.seed,
            config: self.basis.clone(),
        })
    }

    /// Script reproducing a built-in scenario, with elements named by
    /// notation. The initial state must be a window.
    pub fn from_scenario(s: &Scenario) -> Self {
        let b = &s.basis;
        let n = |i: usize| ElementRef::notation(b, i);
        let initial = s.initial.support(0.0);
        assert_eq!(initial.len(), 1, "scenario must start from a window state");
        let steps = s
            .steps
            .iter()
            .map(|st| {
                let note = st.note.clone();
                match &st.kind {
                    Step::Prepare { element } => StepSpec::Prepare { element: n(*element), note },
                    Step::LaserOn { mode, drives, duration } => StepSpec::LaserOn {
                        mode: mode.id().to_string(),
                        drives: drives
                            .iter()
                            .map(|d| DriveSpec {
                                a: n(d.a),
                                b: n(d.b),
                                strength: d.strength.re,
                                strength_im: d.strength.im,
                                two_photon: d.two_photon,
                            })
                            .collect(),
                        duration: *duration,
                        note,
                    },
                    Step::Wait { duration } => StepSpec::Wait { duration: *duration, note },
                    Step::InduceTransition { pairs } => {
                        StepSpec::InduceTransition { pairs: pairs.iter().map(|&(a, c)| (n(a), n(c))).collect(), note }
                    }
                    Step::Erase { indices, renormalize } => StepSpec::Erase {
                        elements: indices.iter().map(|&i| n(i)).collect(),
                        renormalize: *renormalize,
                        note,
                    },
                    Step::Decohere { emit, target, r, keep } => {
                        StepSpec::Decohere { emit: n(*emit), target: n(*target), r: *r, keep: *keep, note }
                    }
                }
            })
            .collect();
        Script {
            basis: BasisConfig::from_basis(b, &s.modes, &s.models.couplings),
            initial: n(initial[0]),
            mode: s.mode,
            seed: s.seed,
            lifetime_rate: s.models.lifetime_rate,
            steps,
        }
    }
}

/// Expected support at one trace record, elements by reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSpec {
    pub record: usize,
    pub label: String,
    pub nonzero: Vec<ElementRef>,
}

pub fn template_specs(basis: &Basis, templates: &[Template]) -> Vec<TemplateSpec> {
    templates
        .iter()
        .map(|t| TemplateSpec {
            record: t.record,
            label: t.label.clone(),
            nonzero: t.nonzero.iter().map(|&i| ElementRef::notation(basis, i)).collect(),
        })
        .collect()
}
