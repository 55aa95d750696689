//! Built-in scripts: the Λ two-photon sequence, halted light with revival,
//! and one-photon activation of a chromophore with four generic outcomes.
//!
//! Each scenario carries its own basis, initial window state and the
//! expected support at every trace record.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Keep, Models, ProtocolStep, RunMode, Step, Template};
use crate::basis::{Basis, BasisElement, BasisError, PhaseDir, PhotonSlot};
use crate::dynamics::Drive;
use crate::labels::{CouplingModel, EnKey, EnLabel, LabelError, ModeLabel, PartitionScheme, Vec3};
use crate::qstate::{window_index, QState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("mode `{0}` is not configured")]
    MissingMode(&'static str),
    #[error("partition `{0}` is missing")]
    MissingPartition(&'static str),
    #[error("partition `{name}` must have {want} blocks")]
    PartitionShape { name: &'static str, want: usize },
    #[error("levels must satisfy {0}")]
    BadLevels(&'static str),
}

/// A ready-to-run script with its expected support patterns.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub basis: Arc<Basis>,
    pub initial: QState,
    pub steps: Vec<ProtocolStep>,
    pub models: Models,
    pub templates: Vec<Template>,
    /// Every mode the script uses, including drive-only modes absent from
    /// the basis.
    pub modes: Vec<ModeLabel>,
    pub mode: RunMode,
    pub seed: Option<u64>,
}

/// Collects elements first, resolves indices once the basis is sorted.
struct Layout {
    elements: Vec<BasisElement>,
}

impl Layout {
    fn new() -> Self {
        Layout { elements: Vec::new() }
    }

    fn add(&mut self, e: BasisElement) -> usize {
        self.elements.push(e);
        self.elements.len() - 1
    }

    fn finish(self) -> Result<Resolved, ScenarioError> {
        let basis = Arc::new(Basis::from_elements(self.elements.clone())?);
        let map = self.elements.iter().map(|e| basis.canonical_index(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(Resolved { basis, map })
    }
}

struct Resolved {
    basis: Arc<Basis>,
    map: Vec<usize>,
}

impl Resolved {
    fn ix(&self, handle: usize) -> usize {
        self.map[handle]
    }

    fn all(&self, handles: &[usize]) -> Vec<usize> {
        handles.iter().map(|&h| self.ix(h)).collect()
    }

    fn drive(&self, a: usize, b: usize, v: f64) -> Drive {
        Drive::new(self.ix(a), self.ix(b), v)
    }

    /// Transfers every handle in `from` onto `to`.
    fn gather(&self, from: &[usize], to: usize) -> Step {
        self.transfer(&[(from, to)])
    }

    fn transfer(&self, groups: &[(&[usize], usize)]) -> Step {
        let pairs =
            groups.iter().flat_map(|(from, to)| from.iter().map(move |&f| (self.ix(f), self.ix(*to)))).collect();
        Step::InduceTransition { pairs }
    }

    fn templates(&self, rows: &[(&str, &[usize])]) -> Vec<Template> {
        rows.iter()
            .enumerate()
            .map(|(record, (label, handles))| {
                let mut nonzero = self.all(handles);
                nonzero.sort_unstable();
                Template { record, label: (*label).to_string(), nonzero }
            })
            .collect()
    }
}

fn lv(j: u32, k: u32, e: f64) -> Result<EnLabel, ScenarioError> {
    Ok(EnLabel::new(j, k, e)?)
}

fn one_block(en: EnLabel, photons: Vec<PhotonSlot>) -> Result<BasisElement, ScenarioError> {
    Ok(BasisElement::simple(en, photons)?)
}

fn transitions(pairs: &[(EnKey, EnKey, f64)]) -> CouplingModel {
    let mut cm = CouplingModel::new();
    for &(a, b, t) in pairs {
        cm.set(a, b, C64::new(t, 0.0));
    }
    cm
}

/// Λ system: `E0 < E2 < E1`, `j1` is the common vertex and `j0 ↔ j2` is dark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LambdaParams {
    pub levels: [f64; 3],
    /// Direction of the `ω10` pump.
    pub forward: Vec3,
    /// Direction of the `ω12` beam, perpendicular to `forward`.
    pub perpendicular: Vec3,
    pub strength: f64,
    pub duration: f64,
    /// Detection location of the emitted photon.
    pub detector: Vec3,
}

impl Default for LambdaParams {
    fn default() -> Self {
        LambdaParams {
            levels: [0.0, 1.0, 0.7],
            forward: [1.0, 0.0, 0.0],
            perpendicular: [0.0, 1.0, 0.0],
            strength: 0.1,
            duration: 6.0,
            detector: [0.0, 5.0, 0.0],
        }
    }
}

/// Two-photon sequence: window, pump, switch-off, perpendicular probe,
/// induced transfer to the tripartite element, spontaneous emission.
pub fn lambda_scenario(p: &LambdaParams) -> Result<Scenario, ScenarioError> {
    let [e0, e1, e2] = p.levels;
    if !(e0 < e2 && e2 < e1) {
        return Err(ScenarioError::BadLevels("E0 < E2 < E1"));
    }
    let w10 = ModeLabel::new("w10", e1 - e0, p.forward)?;
    let w12 = ModeLabel::new("w12", e1 - e2, p.perpendicular)?;
    let w20 = ModeLabel::new("w20", e2 - e0, p.forward)?;
    let (j0, j1, j2) = (lv(0, 0, e0)?, lv(1, 0, e1)?, lv(2, 0, e2)?);
    use PhotonSlot as P;

    let mut l = Layout::new();
    let a0 = l.add(one_block(j0, vec![P::product(&w10, 1)])?);
    let a1 = l.add(one_block(j0, vec![P::entangled(&w10, 1)])?);
    let a2 = l.add(one_block(j1, vec![P::product(&w10, 0)])?);
    let _a3 = l.add(one_block(j1, vec![P::entangled(&w10, 0), P::product(&w12, 0)])?);
    let a4 = l.add(one_block(j1, vec![P::entangled(&w10, 0), P::product(&w12, 1)])?);
    let a5 = l.add(one_block(j2, vec![P::entangled(&w20, 0), P::product(&w12, 0)])?);
    let _a6 = l.add(one_block(j2, vec![P::entangled(&w20, 0), P::product(&w12, 1)])?);
    let a7 = l.add(one_block(j2, vec![P::entangled(&w20, 0), P::entangled(&w12, 1)])?);
    let a8 = l.add(one_block(j2, vec![P::product(&w20, 0), P::product(&w12, 1)])?);
    let a9 = l.add(one_block(j2, vec![P::product(&w20, 0), P::product(&w12, 0)])?);
    let r = l.finish()?;

    let g = p.strength;
    let steps = vec![
        ProtocolStep::new(Step::LaserOn {
            mode: w10.clone(),
            drives: vec![r.drive(a0, a1, g), r.drive(a1, a2, g)],
            duration: p.duration,
        })
        .note("laser along k at w10"),
        ProtocolStep::new(Step::Erase { indices: vec![r.ix(a0)], renormalize: false })
            .note("incoming channel switched off"),
        ProtocolStep::new(Step::LaserOn {
            mode: w12.clone(),
            drives: vec![r.drive(a2, a7, g), r.drive(a2, a4, g)],
            duration: p.duration,
        })
        .note("second laser at w12 along k_perp"),
        ProtocolStep::new(r.transfer(&[(&[a1, a2], a5), (&[a4, a7], a8)])).note("induced transition"),
        ProtocolStep::new(r.gather(&[a5], a8)).note("root state for spontaneous emission"),
        ProtocolStep::new(Step::Decohere { emit: r.ix(a8), target: r.ix(a9), r: p.detector, keep: Keep::Remainder })
            .note("photon w12 detected at R"),
    ];
    let templates = r.templates(&[
        ("4a", &[a0]),
        ("4a+pump", &[a0, a1, a2]),
        ("4b", &[a1, a2]),
        ("4c", &[a1, a2, a4, a7]),
        ("4d", &[a5, a8]),
        ("4e", &[a8]),
        ("4f", &[]),
    ]);
    let (k0, k1, k2) = (j0.key(), j1.key(), j2.key());
    Ok(Scenario {
        name: "lambda".into(),
        initial: window_index(&r.basis, r.ix(a0)).expect("index from basis"),
        basis: r.basis,
        steps,
        models: Models { couplings: transitions(&[(k0, k1, 1.0), (k1, k2, 1.0), (k0, k2, 0.0)]), lifetime_rate: 1.0 },
        templates,
        modes: vec![w10, w12, w20],
        mode: RunMode::Deterministic,
        seed: None,
    })
}

/// Halted light: `j0 ↔ j1` carried by the forward beam, storage in `j2` via
/// `k+`, revival via `k−`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HaltedLightParams {
    pub levels: [f64; 3],
    pub forward: Option<Vec3>,
    pub plus: Option<Vec3>,
    pub minus: Option<Vec3>,
    pub strength: f64,
    pub duration: f64,
    pub detector: Vec3,
    /// Run the `k−` revival and final flash.
    pub revive: bool,
}

impl Default for HaltedLightParams {
    fn default() -> Self {
        HaltedLightParams {
            levels: [0.0, 1.0, 0.6],
            forward: Some([1.0, 0.0, 0.0]),
            plus: Some([0.0, 1.0, 0.0]),
            minus: Some([0.0, -1.0, 0.0]),
            strength: 0.1,
            duration: 6.0,
            detector: [10.0, 0.0, 0.0],
            revive: true,
        }
    }
}

/// Store, dark transfer, delay and revival. The final flash leaves along
/// the forward direction.
pub fn halted_light_scenario(p: &HaltedLightParams) -> Result<Scenario, ScenarioError> {
    let [e0, e1, e2] = p.levels;
    if !(e0 < e2 && e2 < e1) {
        return Err(ScenarioError::BadLevels("E0 < E2 < E1"));
    }
    let forward = p.forward.ok_or(ScenarioError::MissingMode("w20"))?;
    let plus = p.plus.ok_or(ScenarioError::MissingMode("w12p"))?;
    let minus = match (p.revive, p.minus) {
        (true, None) => return Err(ScenarioError::MissingMode("w12m")),
        (_, m) => m,
    };
    let w20 = ModeLabel::new("w20", e1 - e0, forward)?;
    let w12p = ModeLabel::new("w12p", e1 - e2, plus)?;
    let w12m = minus.map(|d| ModeLabel::new("w12m", e1 - e2, d)).transpose()?;
    // The virtual mode stands for the difference frequency w20 − w12.
    let virt = ModeLabel::new("virt", e2 - e0, forward)?;
    let (j0, j1, j2) = (lv(0, 0, e0)?, lv(1, 0, e1)?, lv(2, 0, e2)?);
    use PhotonSlot as P;

    let mut l = Layout::new();
    let h0 = l.add(one_block(j0, vec![P::product(&w20, 1)])?);
    let h1 = l.add(one_block(j0, vec![P::entangled(&w20, 1)])?);
    let _h2 = l.add(one_block(j1, vec![P::product(&w20, 0)])?);
    let h3 = l.add(one_block(j1, vec![P::entangled(&w20, 0)])?);
    let _h4 = l.add(one_block(j1, vec![P::product(&w12p, 1)])?);
    let h5 = l.add(one_block(j1, vec![P::entangled(&w12p, 1)])?);
    let v0 = l.add(one_block(j0, vec![P::product(&virt, 1)])?);
    let v1 = l.add(one_block(j0, vec![P::entangled(&virt, 1)])?);
    let s7 = l.add(one_block(j2, vec![P::entangled(&w20, 0), P::product(&w12p, 1)])?);
    let s8 = l.add(one_block(j2, vec![P::product(&w20, 0), P::product(&w12p, 0)])?);
    let _s9 = l.add(one_block(j2, vec![P::entangled(&w20, 0), P::entangled(&w12p, 1)])?);
    let s10 = l.add(one_block(j2, vec![P::product(&w20, 0), P::product(&w12p, 1)])?);
    let _f0 = l.add(one_block(j2, vec![P::entangled(&w12p, 1)])?);
    let f1 = l.add(one_block(j2, vec![P::product(&w12p, 0)])?);
    let ground = l.add(one_block(j0, vec![P::product(&w20, 0)])?);
    let r = l.finish()?;

    let g = p.strength;
    let mut steps = vec![
        ProtocolStep::new(Step::LaserOn { mode: w20.clone(), drives: vec![r.drive(h0, h1, g)], duration: p.duration })
            .note("forward pulse at w20"),
        ProtocolStep::new(r.gather(&[h0], h3)).note("internal photonic coherence"),
        ProtocolStep::new(r.gather(&[h1], h3)).note("coherent state awaiting k+"),
        ProtocolStep::new(Step::LaserOn {
            mode: w12p.clone(),
            drives: vec![r.drive(h3, s7, g), r.drive(s7, s8, g), r.drive(h3, h5, g)],
            duration: p.duration,
        })
        .note("k+ beam carries one photon in excess"),
        ProtocolStep::new(r.gather(&[h3, h5, s7, s8], s10)).note("decoherence channel opened"),
        ProtocolStep::new(r.gather(&[s10], f1)).note("induced emission along k+; memory loss"),
        ProtocolStep::new(Step::Wait { duration: None }).note("storage delay"),
    ];
    let mut rows: Vec<(&str, Vec<usize>)> = vec![
        ("5a", vec![h0]),
        ("5b", vec![h0, h1]),
        ("5c", vec![h1, h3]),
        ("5c'", vec![h3]),
        ("5d", vec![h3, h5, s7, s8]),
        ("5e", vec![s10]),
        ("5e'", vec![f1]),
        ("stored", vec![f1]),
    ];
    let mut modes = vec![w20.clone(), w12p, virt.clone()];
    if p.revive {
        let w12m = w12m.expect("checked above");
        steps.extend([
            ProtocolStep::new(Step::LaserOn {
                mode: w12m.clone(),
                drives: vec![Drive::two_photon(r.ix(f1), r.ix(v1), g), r.drive(v1, v0, g)],
                duration: p.duration,
            })
            .note("k- beam restores the virtual mode"),
            ProtocolStep::new(r.gather(&[f1, v0, v1], h0)).note("frequency up-conversion to w20"),
            ProtocolStep::new(Step::Wait { duration: None }).note("finite delay"),
            ProtocolStep::new(Step::Decohere {
                emit: r.ix(h0),
                target: r.ix(ground),
                r: p.detector,
                keep: Keep::Emitted,
            })
            .note("flash along k_forward"),
        ]);
        rows.extend([
            ("revival", vec![f1, v0, v1]),
            ("5a again", vec![h0]),
            ("delay", vec![h0]),
            ("flash", vec![ground]),
        ]);
        modes.push(w12m);
    }
    let row_refs: Vec<(&str, &[usize])> = rows.iter().map(|(l, v)| (*l, v.as_slice())).collect();
    let templates = r.templates(&row_refs);
    let (k0, k1, k2) = (j0.key(), j1.key(), j2.key());
    Ok(Scenario {
        name: "halted-light".into(),
        initial: window_index(&r.basis, r.ix(h0)).expect("index from basis"),
        basis: r.basis,
        steps,
        models: Models { couplings: transitions(&[(k0, k1, 1.0), (k1, k2, 1.0), (k0, k2, 0.0)]), lifetime_rate: 0.5 },
        templates,
        modes,
        mode: RunMode::Deterministic,
        seed: None,
    })
}

/// The four generic continuations after chromophore activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// Re-emission leaving the intact system in its ground state.
    ReEmission,
    /// Low-frequency emission between chromophore sublevels.
    LowFrequency,
    /// Emission filtered at the 0-0 frequency.
    ZeroZero,
    /// Couplings opened to the dissociative channels.
    Dissociation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DissociationParams {
    pub outcome: Outcome,
    /// Incoming frequency, resonant with the excited chromophore sublevel.
    pub omega: f64,
    /// 0-0 gap, slightly below `omega`.
    pub zero_zero: f64,
    /// Must contain `A0` (one block), `B1` and `B2` (two blocks each) over
    /// the same constituents.
    pub partitions: Vec<PartitionScheme>,
    pub strength: f64,
    pub duration: f64,
    pub incoming: Vec3,
    pub reemission: Vec3,
    pub detector: Vec3,
}

impl Default for DissociationParams {
    fn default() -> Self {
        DissociationParams {
            outcome: Outcome::ReEmission,
            omega: 1.0,
            zero_zero: 0.9,
            partitions: vec![
                PartitionScheme::one_partite("A0", 3).expect("static"),
                PartitionScheme::new("B1", vec![vec![1, 2], vec![3]]).expect("static"),
                PartitionScheme::new("B2", vec![vec![1], vec![2, 3]]).expect("static"),
            ],
            strength: 0.1,
            duration: 6.0,
            incoming: [0.0, 0.0, 1.0],
            reemission: [1.0, 0.0, 0.0],
            detector: [4.0, 0.0, 0.0],
        }
    }
}

fn find_partition(ps: &[PartitionScheme], name: &'static str, blocks: usize) -> Result<PartitionScheme, ScenarioError> {
    let p = ps.iter().find(|p| p.name() == name).ok_or(ScenarioError::MissingPartition(name))?;
    if p.n_blocks() != blocks {
        return Err(ScenarioError::PartitionShape { name, want: blocks });
    }
    Ok(p.clone())
}

/// Window on the incoming channel, resonant activation, vacuum information
/// suppressed, chromophore coherence with the channels, then `outcome`.
pub fn one_photon_dissociation_scenario(p: &DissociationParams) -> Result<Scenario, ScenarioError> {
    if !(0.0 < p.zero_zero && p.zero_zero < p.omega) {
        return Err(ScenarioError::BadLevels("0 < zero_zero < omega"));
    }
    let a0 = find_partition(&p.partitions, "A0", 1)?;
    let b1 = find_partition(&p.partitions, "B1", 2)?;
    let b2 = find_partition(&p.partitions, "B2", 2)?;

    let w = ModeLabel::new("w", p.omega, p.incoming)?;
    let w_out = ModeLabel::new("w_out", p.omega, p.reemission)?;
    let wl = ModeLabel::new("w_low", p.omega - p.zero_zero, p.reemission)?;
    let w00 = ModeLabel::new("w00", p.zero_zero, p.reemission)?;
    let mw = ModeLabel::new("mw", 0.05 * p.omega, [1.0, 0.0, 0.0])?;

    let g = lv(0, 0, 0.0)?;
    let chr00 = lv(1, 0, p.zero_zero)?;
    let chr = lv(1, 1, p.omega)?;
    let frac = |x: f64| x * p.omega;
    let (b1x, b1y, b1g) = (lv(2, 1, frac(0.6))?, lv(3, 0, frac(0.35))?, lv(2, 0, frac(0.2))?);
    let (b2x, b2y, b2g) = (lv(4, 0, frac(0.1))?, lv(5, 1, frac(0.8))?, lv(5, 0, frac(0.3))?);
    use PhotonSlot as P;
    let el = |part: &PartitionScheme, en: Vec<EnLabel>, ph: Vec<PhotonSlot>| BasisElement::new(part.clone(), en, ph);

    let mut l = Layout::new();
    let p0 = l.add(el(&a0, vec![g], vec![P::product(&w, 1)])?.with_phase(PhaseDir::Incoming));
    let p1 = l.add(el(&a0, vec![g], vec![P::entangled(&w, 1)])?);
    let p2 = l.add(el(&a0, vec![chr], vec![P::entangled(&w, 0)])?);
    let _p3 = l.add(el(&a0, vec![chr], vec![P::product(&w, 0)])?);
    let bx1 = l.add(el(&b1, vec![b1x, b1y], vec![])?);
    let bx2 = l.add(el(&b2, vec![b2x, b2y], vec![])?);
    let bg1 = l.add(el(&b1, vec![b1g, b1y], vec![])?);
    let bg2 = l.add(el(&b2, vec![b2x, b2g], vec![])?);
    let r1 = l.add(el(&a0, vec![g], vec![P::product(&w_out, 1)])?.with_phase(PhaseDir::Outgoing));
    let r0 = l.add(el(&a0, vec![g], vec![P::product(&w_out, 0)])?);
    let l1 = l.add(el(&a0, vec![chr00], vec![P::product(&wl, 1)])?.with_phase(PhaseDir::Outgoing));
    let l0 = l.add(el(&a0, vec![chr00], vec![P::product(&wl, 0)])?);
    let z2 = l.add(el(&a0, vec![chr00], vec![P::entangled(&w00, 0)])?);
    let z1 = l.add(el(&a0, vec![g], vec![P::product(&w00, 1)])?.with_phase(PhaseDir::Outgoing));
    let z0 = l.add(el(&a0, vec![g], vec![P::product(&w00, 0)])?);
    let r = l.finish()?;

    let v = p.strength;
    let mut steps = vec![
        ProtocolStep::new(Step::Wait { duration: Some(p.duration) }).note("no drive: window state persists"),
        ProtocolStep::new(Step::LaserOn {
            mode: w.clone(),
            drives: vec![r.drive(p0, p1, v), r.drive(p1, p2, v)],
            duration: p.duration,
        })
        .note("light resonant with the chromophore"),
        ProtocolStep::new(Step::Erase { indices: vec![r.ix(p0)], renormalize: true })
            .note("vacuum information suppressed"),
        ProtocolStep::new(Step::LaserOn {
            mode: mw.clone(),
            drives: vec![r.drive(p2, bx1, v), r.drive(p2, bx2, v)],
            duration: p.duration,
        })
        .note("low-frequency field couples the channels"),
    ];
    let coherent = [p1, p2, bx1, bx2];
    let mut rows: Vec<(&str, Vec<usize>)> = vec![
        ("6a", vec![p0]),
        ("6a idle", vec![p0]),
        ("6b", vec![p0, p1, p2]),
        ("6b erased", vec![p1, p2]),
        ("6b'", coherent.to_vec()),
    ];
    let emit = |from: usize, to: usize, note: &str| {
        ProtocolStep::new(Step::Decohere { emit: r.ix(from), target: r.ix(to), r: p.detector, keep: Keep::Emitted })
            .note(note.to_string())
    };
    match p.outcome {
        Outcome::ReEmission => {
            steps.push(ProtocolStep::new(r.gather(&coherent, r1)).note("outgoing channel opened"));
            steps.push(emit(r1, r0, "re-emission"));
            rows.extend([("outgoing", vec![r1]), ("ground", vec![r0])]);
        }
        Outcome::LowFrequency => {
            steps.push(ProtocolStep::new(r.gather(&coherent, l1)).note("sublevel relaxation channel"));
            steps.push(emit(l1, l0, "low-frequency emission"));
            rows.extend([("sublevel", vec![l1]), ("relaxed", vec![l0])]);
        }
        Outcome::ZeroZero => {
            steps.push(ProtocolStep::new(r.gather(&coherent, z2)).note("relaxed to the 0-0 level"));
            steps.push(ProtocolStep::new(r.gather(&[z2], z1)).note("0-0 window opened"));
            steps.push(emit(z1, z0, "0-0 emission"));
            rows.extend([("0-0 level", vec![z2]), ("0-0 window", vec![z1]), ("ground", vec![z0])]);
        }
        Outcome::Dissociation => {
            steps.push(
                ProtocolStep::new(Step::LaserOn {
                    mode: mw.clone(),
                    drives: vec![r.drive(bx1, bg1, v), r.drive(bx2, bg2, v)],
                    duration: p.duration,
                })
                .note("dissociative channels opened"),
            );
            rows.push(("fragments", vec![p1, p2, bx1, bx2, bg1, bg2]));
        }
    }
    let row_refs: Vec<(&str, &[usize])> = rows.iter().map(|(l, v)| (*l, v.as_slice())).collect();
    let templates = r.templates(&row_refs);
    let couplings = transitions(&[
        (g.key(), chr.key(), 1.0),
        (g.key(), chr00.key(), 1.0),
        (b1x.key(), b1g.key(), 1.0),
        (b2y.key(), b2g.key(), 1.0),
    ]);
    Ok(Scenario {
        name: "dissociation".into(),
        initial: window_index(&r.basis, r.ix(p0)).expect("index from basis"),
        basis: r.basis,
        steps,
        models: Models { couplings, lifetime_rate: 1.0 },
        templates,
        modes: vec![w, w_out, wl, w00, mw],
        mode: RunMode::Deterministic,
        seed: None,
    })
}
