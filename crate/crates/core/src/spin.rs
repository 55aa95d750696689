//! Two spin-1/2 constituents combined with two label-permuted partite
//! products.
//!
//! Spin coefficients are ordered `[αα, αβ, βα, ββ]` with the `m−1` spinor
//! first. Space coefficients are ordered `[P1, P2]` where
//! `P1 = |φ_{…m−1}⟩|φ_m⟩` and `P2 = |φ_{…m}⟩|φ_{m−1}⟩`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::CMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("ms must be -1, 0 or 1, got {0}")]
    BadMs(i32),
}

/// Which factor a label permutation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Spin,
    Space,
    Both,
}

impl std::str::FromStr for Which {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spin" => Ok(Which::Spin),
            "space" => Ok(Which::Space),
            "both" => Ok(Which::Both),
            other => Err(format!("expected spin, space or both, got `{other}`")),
        }
    }
}

/// Product `spin ⊗ space` of a two-spin function and a two-permutation
/// space function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSpaceFunction {
    pub name: String,
    pub spin: [C64; 4],
    pub space: [C64; 2],
}

const fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl SpinSpaceFunction {
    /// Eight coefficients, spin index major: `total[2·s + p] = spin[s]·space[p]`.
    pub fn total(&self) -> [C64; 8] {
        let mut t = [re(0.0); 8];
        for (s, a) in self.spin.iter().enumerate() {
            for (p, b) in self.space.iter().enumerate() {
                t[2 * s + p] = a * b;
            }
        }
        t
    }

    pub fn norm(&self) -> f64 {
        self.total().iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩` over the full product space.
    pub fn inner(&self, other: &SpinSpaceFunction) -> C64 {
        self.total().iter().zip(other.total()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Exchanges the `m−1` and `m` labels in the chosen factor(s).
    pub fn permute_labels(&self, which: Which) -> SpinSpaceFunction {
        let mut out = self.clone();
        if matches!(which, Which::Spin | Which::Both) {
            out.spin.swap(1, 2);
        }
        if matches!(which, Which::Space | Which::Both) {
            out.space.swap(0, 1);
        }
        out
    }

    /// `⟨S²⟩` of the spin factor, normalized by its own norm.
    pub fn s2(&self) -> f64 {
        expectation(&s2_operator(), &self.spin)
    }

    pub fn sz(&self) -> f64 {
        expectation(&sz_operator(), &self.spin)
    }

    /// `⟨S⁴⟩ − ⟨S²⟩²`; zero for an `S²` eigenfunction.
    pub fn s2_variance(&self) -> f64 {
        let s2 = s2_operator();
        let s4 = &s2 * &s2;
        expectation(&s4, &self.spin) - self.s2().powi(2)
    }

    /// Sum of the space coefficients; zero marks the antisymmetric
    /// (nodal) space factor.
    pub fn space_sum(&self) -> C64 {
        self.space[0] + self.space[1]
    }
}

fn expectation(op: &CMatrix, v: &[C64; 4]) -> f64 {
    let ov = op.mul_vec(v);
    let num: C64 = v.iter().zip(&ov).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = v.iter().map(C64::norm_sqr).sum();
    num.re / den
}

/// Single-spin `(Sx, Sy, Sz)` as 2×2 matrices over `[α, β]`.
fn half_spin() -> [[[C64; 2]; 2]; 3] {
    let i = C64::new(0.0, 0.5);
    [[[re(0.0), re(0.5)], [re(0.5), re(0.0)]], [[re(0.0), -i], [i, re(0.0)]], [[re(0.5), re(0.0)], [re(0.0), re(-0.5)]]]
}

/// `A ⊗ B` on the two-spin space, first factor major.
fn kron(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> CMatrix {
    let mut m = CMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

fn total_component(c: usize) -> CMatrix {
    let s = half_spin();
    let id = [[re(1.0), re(0.0)], [re(0.0), re(1.0)]];
    kron(&s[c], &id).add(&kron(&id, &s[c]))
}

/// `(S₁ + S₂)²` over `[αα, αβ, βα, ββ]`.
pub fn s2_operator() -> CMatrix {
    (0..3).fold(CMatrix::zeros(4), |acc, c| {
        let sc = total_component(c);
        acc.add(&(&sc * &sc))
    })
}

pub fn sz_operator() -> CMatrix {
    total_component(2)
}

/// `(αβ − βα)/√2 × (P1 + P2)/√2`.
pub fn singlet() -> SpinSpaceFunction {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    SpinSpaceFunction { name: "F(S=0)".into(), spin: [re(0.0), re(h), re(-h), re(0.0)], space: [re(h), re(h)] }
}

/// Triplet component `ms`, always with space factor `(P1 − P2)/√2`.
pub fn triplet(ms: i32) -> Result<SpinSpaceFunction, SpinError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (name, spin) = match ms {
        1 => ("F(S=1,ms=+1)", [re(1.0), re(0.0), re(0.0), re(0.0)]),
        0 => ("F(S=1,ms=0)", [re(0.0), re(h), re(h), re(0.0)]),
        -1 => ("F(S=1,ms=-1)", [re(0.0), re(0.0), re(0.0), re(1.0)]),
        other => return Err(SpinError::BadMs(other)),
    };
    Ok(SpinSpaceFunction { name: name.into(), spin, space: [re(h), re(-h)] })
}

/// Singlet followed by triplets `ms = +1, 0, −1`.
pub fn all_functions() -> Vec<SpinSpaceFunction> {
    let mut v = vec![singlet()];
    v.extend([1, 0, -1].map(|ms| triplet(ms).expect("valid ms")));
    v
}

const SPIN_KETS: [&str; 4] = ["|α⟩_{m-1}|α⟩_m", "|α⟩_{m-1}|β⟩_m", "|β⟩_{m-1}|α⟩_m", "|β⟩_{m-1}|β⟩_m"];
const SPACE_KETS: [&str; 2] = ["|φ_{…m-1}⟩|φ_m⟩", "|φ_{…m}⟩|φ_{m-1}⟩"];

/// `1/√2 (a − b)` style rendering of a real coefficient list.
fn render_factor(coeffs: &[C64], kets: &[&str]) -> String {
    let terms: Vec<(f64, &str)> =
        coeffs.iter().zip(kets).filter(|(c, _)| c.norm() > 1e-12).map(|(c, k)| (c.re, *k)).collect();
    let mag = terms.first().map_or(0.0, |t| t.0.abs());
    let uniform = terms.iter().all(|t| (t.0.abs() - mag).abs() < 1e-12);
    let mut body = String::new();
    for (i, (c, k)) in terms.iter().enumerate() {
        let sign = if *c < 0.0 { "−" } else { "+" };
        let coef = if uniform { String::new() } else { format!("{:.6}", c.abs()) };
        match (i, *c < 0.0) {
            (0, false) => body.push_str(&format!("{coef}{k}")),
            (0, true) => body.push_str(&format!("{sign}{coef}{k}")),
            _ => body.push_str(&format!(" {sign} {coef}{k}")),
        }
    }
    let prefix = if !uniform || (mag - 1.0).abs() < 1e-12 {
        ""
    } else if (mag - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 {
        "1/√2 "
    } else {
        return body;
    };
    if terms.len() > 1 {
        format!("{prefix}({body})")
    } else {
        format!("{prefix}{body}")
    }
}

impl fmt::Display for SpinSpaceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} × {}",
            self.name,
            render_factor(&self.spin, &SPIN_KETS),
            render_factor(&self.space, &SPACE_KETS)
        )
    }
}
