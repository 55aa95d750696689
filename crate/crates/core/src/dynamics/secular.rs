//! Four-state model: ground and excited chromophore levels of the intact
//! system plus one level in each of two bipartite channels.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{build_hamiltonian, solve_secular, Drive, DynamicsError, Hamiltonian, SecularSolution};
use crate::basis::{Basis, BasisElement};
use crate::fmt_num as num;
use crate::labels::{CouplingModel, EnKey, EnLabel, PartitionScheme};

/// Levels `E0..E3` and couplings `V01, V12, V13`. Basis index `i` carries
/// level `E_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourStateModel {
    pub energies: [f64; 4],
    pub v01: f64,
    pub v12: f64,
    pub v13: f64,
    /// Minimum `|C2|/|C3|` counted as "much larger".
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    5.0
}

impl Default for FourStateModel {
    fn default() -> Self {
        FourStateModel { energies: [0.0, 10.0, 9.5, 7.0], v01: 0.2, v12: 0.2, v13: 0.2, threshold: 5.0 }
    }
}

impl FourStateModel {
    /// Same levels with every coupling multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        FourStateModel { v01: self.v01 * s, v12: self.v12 * s, v13: self.v13 * s, ..self.clone() }
    }

    /// Three constituents: the intact system `A0` (ground `j0`, excited
    /// chromophore `j1`), `B1 = {1,2},{3}` and `B2 = {1},{2,3}`.
    pub fn basis(&self) -> Arc<Basis> {
        let [e0, e1, e2, e3] = self.energies;
        let a0 = PartitionScheme::one_partite("A0", 3).expect("static partition");
        let b1 = PartitionScheme::new("B1", vec![vec![1, 2], vec![3]]).expect("static partition");
        let b2 = PartitionScheme::new("B2", vec![vec![1], vec![2, 3]]).expect("static partition");
        let lv = |j, e| EnLabel::new(j, 0, e).expect("finite level");
        let els = vec![
            BasisElement::new(a0.clone(), vec![lv(0, e0)], vec![]),
            BasisElement::new(a0, vec![lv(1, e1)], vec![]),
            BasisElement::new(b1, vec![lv(2, e2), lv(3, 0.0)], vec![]),
            BasisElement::new(b2, vec![lv(4, 0.0), lv(5, e3)], vec![]),
        ];
        let els = els.into_iter().collect::<Result<Vec<_>, _>>().expect("static elements");
        Arc::new(Basis::from_elements(els).expect("distinct elements"))
    }

    pub fn coupling_model(&self) -> CouplingModel {
        let mut cm = CouplingModel::new();
        cm.set(EnKey::new(0, 0), EnKey::new(1, 0), C64::new(1.0, 0.0));
        cm
    }

    pub fn drives(&self) -> Vec<Drive> {
        vec![Drive::new(0, 1, self.v01), Drive::new(1, 2, self.v12), Drive::new(1, 3, self.v13)]
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian, DynamicsError> {
        for (i, e) in self.energies.iter().enumerate() {
            if !e.is_finite() {
                return Err(DynamicsError::NonFiniteDrive { a: i, b: i });
            }
        }
        build_hamiltonian(&self.basis(), &self.coupling_model(), &self.drives())
    }

    /// Solves at `anchor` and tabulates the root amplitudes.
    pub fn report(&self, anchor: f64) -> Result<SecularReport, DynamicsError> {
        let h = self.hamiltonian()?;
        Ok(SecularReport::solve(&h, anchor, self.threshold))
    }
}

/// Root amplitudes of a secular solution with the ordering verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularReport {
    pub anchor: f64,
    pub solution: SecularSolution,
    /// `|C_i|` of the root eigenvector.
    pub magnitudes: Vec<f64>,
    /// Indices sorted by decreasing `|C_i|`; ties by index.
    pub argsort: Vec<usize>,
    /// `|C2|/|C3|`, `None` when `|C3|` vanishes.
    pub ratio23: Option<f64>,
    pub threshold: f64,
}

impl SecularReport {
    /// Solves `h` at `anchor`; the verdict needs a 4-state `h`.
    pub fn solve(h: &Hamiltonian, anchor: f64, threshold: f64) -> Self {
        let solution = solve_secular(h, anchor);
        let magnitudes: Vec<f64> = solution.root_vector().iter().map(|c| c.norm()).collect();
        let mut argsort: Vec<usize> = (0..magnitudes.len()).collect();
        argsort.sort_by(|&a, &b| magnitudes[b].total_cmp(&magnitudes[a]).then(a.cmp(&b)));
        let ratio23 = (magnitudes.len() > 3 && magnitudes[3] > 1e-300).then(|| magnitudes[2] / magnitudes[3]);
        SecularReport { anchor, solution, magnitudes, argsort, ratio23, threshold }
    }

    /// `|C1| > |C2|` and `|C2|/|C3| ≥ threshold`.
    pub fn pass(&self) -> bool {
        self.argsort.len() == 4 && self.argsort[..3] == [1, 2, 3] && self.ratio23.is_some_and(|r| r >= self.threshold)
    }

    /// Argsort restricted to the three excited-side channels.
    pub fn channel_order(&self) -> Vec<usize> {
        self.argsort.iter().copied().filter(|&i| i != 0).collect()
    }

    /// Human-readable table, numbers at 12 significant digits.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "anchor,{}", num(self.anchor));
        let _ = writeln!(s, "root,{},{}", self.solution.root_index, num(self.solution.root_value()));
        let _ = writeln!(s, "eigenvalues,{}", join(&self.solution.eigenvalues));
        let _ = writeln!(s, "abs_C,{}", join(&self.magnitudes));
        let order: Vec<String> = self.argsort.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "argsort,{}", order.join(","));
        let ratio = self.ratio23.map_or("N/A".to_string(), num);
        let _ = writeln!(s, "ratio_C2_C3,{ratio}");
        let _ = writeln!(s, "threshold,{}", num(self.threshold));
        let _ = writeln!(s, "{}", if self.pass() { "PASS" } else { "FAIL" });
        s
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}
