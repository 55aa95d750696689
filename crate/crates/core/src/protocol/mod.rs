//! Protocol engine: ordered experimental steps applied to a [`QState`].
//!
//! Between steps nothing evolves. Amplitudes change only under an explicit
//! drive ([`Step::LaserOn`]), a tailored transfer ([`Step::InduceTransition`]),
//! an erase or a decoherence event. `Wait` advances the clock only.

mod atto;
mod scenarios;
pub mod script;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{Basis, BasisElement};
use crate::dynamics::{build_hamiltonian, propagate, Drive, DynamicsError};
use crate::fmt_num;
use crate::labels::{add3, sub3, CouplingModel, ModeLabel, Vec3, RESONANCE_TOL};
use crate::qstate::{window_index, EmissionRecord, QState, QStateError, SUPPORT_TOL};

pub use atto::{attosecond_init, comb_id, AttoParams};
pub use scenarios::{
    halted_light_scenario, lambda_scenario, one_photon_dissociation_scenario, DissociationParams, HaltedLightParams,
    LambdaParams, Outcome, Scenario, ScenarioError,
};

/// Which branch survives a decoherence step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    /// The raw residual without the emitted amplitude.
    Remainder,
    /// The detected branch: unit amplitude on the target element.
    Emitted,
}

/// One experimental action, indices refer to the basis of the run.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Replace the state by a window on `element`.
    Prepare {
        element: usize,
    },
    /// Propagate under the levels plus `drives` for `duration`; the mode's
    /// wavevector is absorbed once.
    LaserOn {
        mode: ModeLabel,
        drives: Vec<Drive>,
        duration: f64,
    },
    /// Advance the clock. `None` draws a lifetime.
    Wait {
        duration: Option<f64>,
    },
    /// Move all weight of each `from` onto its `to`, preserving the norm.
    InduceTransition {
        pairs: Vec<(usize, usize)>,
    },
    Erase {
        indices: Vec<usize>,
        renormalize: bool,
    },
    Decohere {
        emit: usize,
        target: usize,
        r: Vec3,
        keep: Keep,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolStep {
    pub kind: Step,
    pub note: Option<String>,
}

impl ProtocolStep {
    pub fn new(kind: Step) -> Self {
        ProtocolStep { kind, note: None }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl From<Step> for ProtocolStep {
    fn from(kind: Step) -> Self {
        ProtocolStep::new(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// Waits without a duration last exactly one mean lifetime.
    #[default]
    Deterministic,
    /// Waits without a duration draw an exponential lifetime from the seed.
    Stochastic,
}

impl std::str::FromStr for RunMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deterministic" => Ok(RunMode::Deterministic),
            "stochastic" => Ok(RunMode::Stochastic),
            other => Err(format!("expected deterministic or stochastic, got `{other}`")),
        }
    }
}

/// Everything a run needs besides the state and the steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Models {
    pub couplings: CouplingModel,
    /// Decay rate of stored coherent states; mean lifetime is `1/rate`.
    pub lifetime_rate: f64,
}

impl Default for Models {
    fn default() -> Self {
        Models { couplings: CouplingModel::new(), lifetime_rate: 1.0 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error(transparent)]
    State(#[from] QStateError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("index {index} out of range for basis of size {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("duration {0} must be finite and non-negative")]
    BadDuration(f64),
    #[error("lifetime rate {0} must be finite and positive")]
    BadRate(f64),
    #[error("transition {0} -> {0} is not a transfer")]
    SelfTransition(usize),
    #[error("element {0} is used both as source and destination")]
    ChainedTransition(usize),
    #[error("decohered state has zero norm and cannot be kept")]
    EmptyBranch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("step {step}: {source}")]
    Step { step: usize, source: StepError },
    #[error("stochastic mode requires a seed")]
    MissingSeed,
    #[error("initial state lives on a different basis")]
    BasisMismatch,
}

impl ProtocolError {
    pub fn step_index(&self) -> Option<usize> {
        match self {
            ProtocolError::Step { step, .. } => Some(*step),
            _ => None,
        }
    }
}

/// State after one step, with bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    /// Index into the step list; `None` for the initial snapshot.
    pub step: Option<usize>,
    pub state: QState,
    /// Emission records produced so far.
    pub emissions: usize,
    /// Absorbed minus emitted wavevectors so far.
    pub ledger: Vec3,
    pub note: Option<String>,
    /// Coherent state with no free photon above the basis ground level: it
    /// can only end through a finite lifetime.
    pub stored: bool,
}

impl TraceEntry {
    pub fn support(&self) -> Vec<usize> {
        self.state.support(SUPPORT_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub emissions: Vec<EmissionRecord>,
    /// Wavevectors credited by each laser step, in order.
    pub absorbed: Vec<(usize, Vec3)>,
}

impl Trace {
    pub fn last(&self) -> &TraceEntry {
        self.entries.last().expect("a trace always holds the initial snapshot")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        self.entries[0].state.basis()
    }

    /// CSV with columns `record,step,time,index,re,im,mode,x,y,z`.
    ///
    /// `amp` rows hold every amplitude, `emission` rows the record amplitude
    /// with `R` in `x,y,z`, `ledger` rows the cumulative momentum.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("record,step,time,index,re,im,mode,x,y,z\n");
        let mut emitted = 0;
        for (n, e) in self.entries.iter().enumerate() {
            let t = fmt_num(e.state.time());
            for (i, a) in e.state.amps().iter().enumerate() {
                let _ = writeln!(out, "amp,{n},{t},{i},{},{},,,,", fmt_num(a.re), fmt_num(a.im));
            }
            for rec in &self.emissions[emitted..e.emissions] {
                let _ = writeln!(
                    out,
                    "emission,{n},{t},{},{},{},{},{},{},{}",
                    rec.source_index,
                    fmt_num(rec.amplitude.re),
                    fmt_num(rec.amplitude.im),
                    rec.mode.id(),
                    fmt_num(rec.location[0]),
                    fmt_num(rec.location[1]),
                    fmt_num(rec.location[2]),
                );
            }
            emitted = e.emissions;
            let _ = writeln!(
                out,
                "ledger,{n},{t},,,,,{},{},{}",
                fmt_num(e.ledger[0]),
                fmt_num(e.ledger[1]),
                fmt_num(e.ledger[2])
            );
        }
        out
    }
}

/// Expected support at one trace record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    /// Trace record index; 0 is the initial snapshot.
    pub record: usize,
    pub label: String,
    /// Basis indices expected nonzero; all others must vanish.
    pub nonzero: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub label: String,
    pub record: usize,
    pub expected: Vec<usize>,
    /// `None` when the trace has no such record.
    pub found: Option<Vec<usize>>,
}

/// Every template whose support differs from the trace.
pub fn check_templates(trace: &Trace, templates: &[Template]) -> Vec<Mismatch> {
    check_templates_tol(trace, templates, SUPPORT_TOL)
}

/// As [`check_templates`] with nonzero meaning `|amp| > tol`.
pub fn check_templates_tol(trace: &Trace, templates: &[Template], tol: f64) -> Vec<Mismatch> {
    templates
        .iter()
        .filter_map(|t| {
            let found = trace.entries.get(t.record).map(|e| e.state.support(tol));
            let mut want = t.nonzero.clone();
            want.sort_unstable();
            want.dedup();
            (found.as_ref() != Some(&want)).then(|| Mismatch {
                label: t.label.clone(),
                record: t.record,
                expected: want,
                found,
            })
        })
        .collect()
}

fn is_stored(s: &QState) -> bool {
    let support = s.support(SUPPORT_TOL);
    if support.is_empty() {
        return false;
    }
    let els = s.basis().elements();
    let floor = els.iter().map(BasisElement::level).fold(f64::INFINITY, f64::min);
    support.iter().all(|&i| !els[i].has_free_photon() && els[i].level() > floor + RESONANCE_TOL)
}

struct Engine<'a> {
    models: &'a Models,
    mode: RunMode,
    rng: Option<ChaCha8Rng>,
    state: QState,
    ledger: Vec3,
    trace: Trace,
}

impl Engine<'_> {
    fn check(&self, index: usize) -> Result<(), StepError> {
        let len = self.state.len();
        if index >= len {
            return Err(StepError::OutOfRange { index, len });
        }
        Ok(())
    }

    fn duration(d: f64) -> Result<f64, StepError> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(StepError::BadDuration(d));
        }
        Ok(d)
    }

    fn lifetime(&mut self) -> Result<f64, StepError> {
        let rate = self.models.lifetime_rate;
        if !(rate.is_finite() && rate > 0.0) {
            return Err(StepError::BadRate(rate));
        }
        match (self.mode, self.rng.as_mut()) {
            (RunMode::Stochastic, Some(rng)) => Ok(Exp::new(rate).map_err(|_| StepError::BadRate(rate))?.sample(rng)),
            _ => Ok(1.0 / rate),
        }
    }

    fn apply(&mut self, index: usize, step: &Step) -> Result<(), StepError> {
        match step {
            Step::Prepare { element } => {
                self.check(*element)?;
                let t = self.state.time();
                self.state = window_index(self.state.basis(), *element)?.with_time(t);
            }
            Step::LaserOn { mode, drives, duration } => {
                let dt = Self::duration(*duration)?;
                let h = build_hamiltonian(self.state.basis(), &self.models.couplings, drives)?;
                self.state = propagate(&self.state, &h, dt)?;
                self.ledger = add3(&self.ledger, &mode.k());
                self.trace.absorbed.push((index, mode.k()));
            }
            Step::Wait { duration } => {
                let dt = match duration {
                    Some(d) => Self::duration(*d)?,
                    None => self.lifetime()?,
                };
                let t = self.state.time();
                self.state = self.state.clone().with_time(t + dt);
            }
            Step::InduceTransition { pairs } => self.state = induce(&self.state, pairs)?,
            Step::Erase { indices, renormalize } => {
                self.state = self.state.erase(indices, *renormalize)?;
            }
            Step::Decohere { emit, target, r, keep } => {
                let d = self.state.decohere(*emit, *target, *r)?;
                self.ledger = sub3(&self.ledger, &d.record.direction);
                self.trace.emissions.push(d.record);
                self.state = match keep {
                    Keep::Remainder => d.residual,
                    Keep::Emitted => d.emitted,
                };
            }
        }
        Ok(())
    }

    fn snapshot(&mut self, step: Option<usize>, note: Option<String>) {
        self.trace.entries.push(TraceEntry {
            step,
            state: self.state.clone(),
            emissions: self.trace.emissions.len(),
            ledger: self.ledger,
            note,
            stored: is_stored(&self.state),
        });
    }
}

/// Norm-preserving transfer: each destination receives the summed weight of
/// its sources, keeping its own phase (or the first source's if it was empty).
fn induce(s: &QState, pairs: &[(usize, usize)]) -> Result<QState, StepError> {
    let len = s.len();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut sources = BTreeSet::new();
    for &(from, to) in pairs {
        for index in [from, to] {
            if index >= len {
                return Err(StepError::OutOfRange { index, len });
            }
        }
        if from == to {
            return Err(StepError::SelfTransition(from));
        }
        sources.insert(from);
        groups.entry(to).or_default().push(from);
    }
    if let Some(&bad) = groups.keys().find(|k| sources.contains(k)) {
        return Err(StepError::ChainedTransition(bad));
    }
    let mut amps = s.amps().to_vec();
    for (to, from) in &groups {
        let weight: f64 = amps[*to].norm_sqr() + from.iter().map(|&f| amps[f].norm_sqr()).sum::<f64>();
        let phase_src = std::iter::once(*to)
            .chain(from.iter().copied())
            .map(|i| amps[i])
            .find(|a| a.norm() > 0.0)
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = if weight > 0.0 { phase_src / phase_src.norm() } else { C64::new(0.0, 0.0) };
        amps[*to] = phase * weight.sqrt();
        for &f in from {
            amps[f] = C64::new(0.0, 0.0);
        }
    }
    Ok(s.with_amps(amps)?)
}

/// Runs `steps` from `initial`, recording the state after each one.
///
/// Stochastic mode requires `seed`; deterministic mode ignores it.
pub fn run(
    initial: &QState,
    steps: &[ProtocolStep],
    models: &Models,
    mode: RunMode,
    seed: Option<u64>,
) -> Result<Trace, ProtocolError> {
    let rng = match (mode, seed) {
        (RunMode::Stochastic, None) => return Err(ProtocolError::MissingSeed),
        (RunMode::Stochastic, Some(s)) => Some(ChaCha8Rng::seed_from_u64(s)),
        (RunMode::Deterministic, _) => None,
    };
    let mut engine = Engine {
        models,
        mode,
        rng,
        state: initial.clone(),
        ledger: [0.0; 3],
        trace: Trace { entries: Vec::new(), emissions: Vec::new(), absorbed: Vec::new() },
    };
    engine.snapshot(None, None);
    for (i, step) in steps.iter().enumerate() {
        engine.apply(i, &step.kind).map_err(|source| ProtocolError::Step { step: i, source })?;
        log::debug!("step {i}: support {:?}", engine.state.support(SUPPORT_TOL));
        engine.snapshot(Some(i), step.note.clone());
    }
    Ok(engine.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PhotonSlot;
    use crate::labels::{EnKey, EnLabel};

    fn fixture() -> (Arc<Basis>, Models, ModeLabel) {
        let w = ModeLabel::new("w", 1.0, [0.0, 0.0, 1.0]).unwrap();
        let g = EnLabel::new(0, 0, 0.0).unwrap();
        let x = EnLabel::new(1, 0, 1.0).unwrap();
        let els = vec![
            BasisElement::simple(g, vec![PhotonSlot::product(&w, 1)]).unwrap(),
            BasisElement::simple(g, vec![PhotonSlot::entangled(&w, 1)]).unwrap(),
            BasisElement::simple(x, vec![PhotonSlot::entangled(&w, 0)]).unwrap(),
            BasisElement::simple(g, vec![PhotonSlot::product(&w, 0)]).unwrap(),
        ];
        let mut cm = CouplingModel::new();
        cm.set(EnKey::new(0, 0), EnKey::new(1, 0), C64::new(1.0, 0.0));
        (Arc::new(Basis::from_elements(els).unwrap()), Models { couplings: cm, lifetime_rate: 0.5 }, w)
    }

    #[test]
    fn empty_script_gives_initial_snapshot() {
        let (b, m, _) = fixture();
        let s = window_index(&b, 0).unwrap();
        let t = run(&s, &[], &m, RunMode::Deterministic, None).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.last().state, s);
    }

    #[test]
    fn wait_only_moves_clock() {
        let (b, m, _) = fixture();
        let s = window_index(&b, 1).unwrap();
        let steps = [Step::Wait { duration: Some(3.0) }.into(), Step::Wait { duration: None }.into()];
        let t = run(&s, &steps, &m, RunMode::Deterministic, None).unwrap();
        assert_eq!(t.last().state.amps(), s.amps());
        assert_eq!(t.last().state.time(), 5.0);
        assert!(t.entries[1].stored);
    }

    #[test]
    fn stochastic_needs_seed_and_is_reproducible() {
        let (b, m, _) = fixture();
        let s = window_index(&b, 1).unwrap();
        let steps = [Step::Wait { duration: None }.into()];
        assert_eq!(run(&s, &steps, &m, RunMode::Stochastic, None), Err(ProtocolError::MissingSeed));
        let a = run(&s, &steps, &m, RunMode::Stochastic, Some(7)).unwrap();
        let b2 = run(&s, &steps, &m, RunMode::Stochastic, Some(7)).unwrap();
        assert_eq!(a.to_csv(), b2.to_csv());
        assert_ne!(a.last().state.time(), 2.0);
    }

    #[test]
    fn laser_emission_ledger() {
        let (b, m, w) = fixture();
        let s = window_index(&b, 0).unwrap();
        let steps: Vec<ProtocolStep> = vec![
            Step::LaserOn {
                mode: w.clone(),
                drives: vec![Drive::new(0, 1, 0.2), Drive::new(1, 3, 0.2)],
                duration: 2.0,
            }
            .into(),
            Step::InduceTransition { pairs: vec![(1, 0), (3, 0)] }.into(),
            Step::Decohere { emit: 0, target: 2, r: [0.0, 0.0, 2.0], keep: Keep::Emitted }.into(),
        ];
        let t = run(&s, &steps, &m, RunMode::Deterministic, None).unwrap();
        assert_eq!(t.entries[1].support(), vec![0, 1, 3]);
        assert_eq!(t.entries[2].support(), vec![0]);
        assert!((t.entries[2].state.norm() - 1.0).abs() < 1e-12);
        assert_eq!(t.emissions.len(), 1);
        assert_eq!(t.last().ledger, [0.0; 3]);
        assert_eq!(t.last().support(), vec![2]);
        assert!(t.to_csv().contains("emission,3,"));
    }

    #[test]
    fn step_failure_reports_index() {
        let (b, m, _) = fixture();
        let s = window_index(&b, 0).unwrap();
        let steps =
            [Step::Wait { duration: Some(1.0) }.into(), Step::Erase { indices: vec![9], renormalize: false }.into()];
        let err = run(&s, &steps, &m, RunMode::Deterministic, None).unwrap_err();
        assert_eq!(err.step_index(), Some(1));
        let bad = [Step::InduceTransition { pairs: vec![(0, 1), (1, 2)] }.into()];
        assert!(matches!(
            run(&s, &bad, &m, RunMode::Deterministic, None),
            Err(ProtocolError::Step { source: StepError::ChainedTransition(1), .. })
        ));
    }

    #[test]
    fn templates_detect_mismatch() {
        let (b, m, _) = fixture();
        let s = window_index(&b, 0).unwrap();
        let t = run(&s, &[], &m, RunMode::Deterministic, None).unwrap();
        let good = Template { record: 0, label: "a".into(), nonzero: vec![0] };
        let bad = Template { record: 0, label: "b".into(), nonzero: vec![1] };
        let missing = Template { record: 4, label: "c".into(), nonzero: vec![] };
        let m = check_templates(&t, &[good, bad, missing]);
        assert_eq!(m.len(), 2);
        assert_eq!(m[1].found, None);
    }
}
