//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64 as C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Panics unless every row has length `rows.len()`.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        CMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!(self.n, other.n);
        CMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| format!("{:+.4e}{:+.4e}i", self[(i, j)].re, self[(i, j)].im)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Ascending; ties keep original diagonal order.
    pub values: Vec<f64>,
    /// Column `i` pairs with `values[i]`. Each column's largest-magnitude
    /// component is real and positive.
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi. Stops once the off-diagonal Frobenius norm falls
/// below `1e-12 · ‖A‖`. Zero off-diagonal entries are never rotated, so
/// decoupled blocks stay exactly decoupled.
///
/// The Hermitian part of `a` is used; callers validate Hermiticity.
pub fn eigh(a: &CMatrix) -> Eigen {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let threshold = 1e-12 * a.frobenius();

    for _ in 0..MAX_SWEEPS {
        if m.off_diagonal_norm() <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));

    let mut vectors = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut best = 0;
        for i in 0..n {
            if v[(i, src)].norm() > v[(best, src)].norm() + 1e-14 {
                best = i;
            }
        }
        let pivot = v[(best, src)];
        let fix = if pivot == ZERO { ONE } else { pivot.conj() / pivot.norm() };
        for i in 0..n {
            vectors[(i, col)] = v[(i, src)] * fix;
        }
        vectors[(best, col)] = C64::new(vectors[(best, col)].norm(), 0.0);
    }
    Eigen { values: order.iter().map(|&i| diag[i]).collect(), vectors }
}

/// Annihilates `m[p][q]` with `G = [[c, s], [−s e^{−iφ}, c e^{−iφ}]]` acting
/// on columns `(p, q)`, where `m[p][q] = |m[p][q]| e^{iφ}`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = m.dim();
    let e = apq / mag; // e^{iφ}
    let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * mag);
    let t = if theta.is_finite() { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) } else { 0.0 };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let em = e.conj();

    // M ← M G
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * c - mq * em * s;
        m[(i, q)] = mp * s + mq * em * c;
    }
    // M ← G† M
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = mp * c - mq * e * s;
        m[(q, j)] = mp * s + mq * e * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // V ← V G
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * c - vq * em * s;
        v[(i, q)] = vp * s + vq * em * c;
    }
}
