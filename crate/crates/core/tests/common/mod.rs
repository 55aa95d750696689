//! Independent reference computations. Nothing here calls the library's
//! eigensolver or propagator.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C64;
use photonic::linalg::CMatrix;
use rand::Rng;

pub type Dense = Vec<Vec<C64>>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn to_dense(m: &CMatrix) -> Dense {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect()
}

pub fn eye(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Random Hermitian matrix with entries in `[−scale, scale]`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
    let mut rows = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        rows[i][i] = c(rng.random_range(-scale..scale), 0.0);
        for j in i + 1..n {
            let z = c(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    CMatrix::from_rows(&rows)
}

/// `exp(−i H dt)` by scaling and squaring of a truncated Taylor series.
pub fn taylor_exp(h: &CMatrix, dt: f64) -> Dense {
    let n = h.dim();
    let a: Dense = to_dense(h).into_iter().map(|r| r.into_iter().map(|x| x * c(0.0, -dt)).collect()).collect();
    let norm1 = (0..n).map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm1 * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a: Dense = a.into_iter().map(|r| r.into_iter().map(|x| x * scale).collect()).collect();
    let mut sum = eye(n);
    let mut term = eye(n);
    for k in 1..=30 {
        term = matmul(&term, &a);
        let inv = 1.0 / k as f64;
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x *= inv;
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// Characteristic polynomial `det(λI − A)` coefficients, highest power
/// first, by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &Dense) -> Vec<C64> {
    let n = a.len();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut m = vec![vec![c(0.0, 0.0); n]; n];
    for k in 1..=n {
        let mut next = matmul(a, &m);
        let prev = *coeffs.last().unwrap();
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += prev;
        }
        m = next;
        let am = matmul(a, &m);
        let tr: C64 = (0..n).map(|i| am[i][i]).sum();
        coeffs.push(-tr / k as f64);
    }
    coeffs
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Real roots of a real polynomial inside `[lo, hi]` by sign scanning and
/// bisection. Assumes simple roots at least `(hi − lo)/samples` apart.
pub fn real_roots(p: &[f64], lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut x0 = lo;
    let mut f0 = poly_eval(p, x0);
    for s in 1..=samples {
        let x1 = lo + s as f64 * step;
        let f1 = poly_eval(p, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = poly_eval(p, m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Dense, b: &[C64]) -> Vec<C64> {
    let n = a.len();
    let mut m: Dense = a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain([bi]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / d;
            for k in col..=n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: C64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Unit eigenvector for eigenvalue `lambda` by inverse iteration.
pub fn inverse_iteration(a: &Dense, lambda: f64) -> Vec<C64> {
    let n = a.len();
    let shift = lambda + 1e-10;
    let shifted: Dense =
        (0..n).map(|i| (0..n).map(|j| a[i][j] - if i == j { c(shift, 0.0) } else { c(0.0, 0.0) }).collect()).collect();
    let mut v: Vec<C64> = (0..n).map(|i| c(1.0 + 0.1 * i as f64, 0.0)).collect();
    for _ in 0..8 {
        v = solve(&shifted, &v);
        let norm = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    v
}

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial.
pub fn brute_eigenvalues(a: &Dense) -> Vec<f64> {
    let p: Vec<f64> = charpoly(a).iter().map(|z| z.re).collect();
    let bound = a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    real_roots(&p, -bound, bound, 200_000)
}

/// Number of elements `enumerate_basis` must produce: per channel the
/// product of per-block level counts, times `(2(n_max+1))^modes`.
pub fn expected_basis_count(block_level_counts: &[Vec<usize>], n_modes: usize, n_max: u32) -> usize {
    let photons = (2 * (n_max as usize + 1)).pow(n_modes as u32);
    block_level_counts.iter().map(|ch| ch.iter().product::<usize>()).sum::<usize>() * photons
}

/// `S²` for two spins over `[αα, αβ, βα, ββ]`, written out by hand.
pub fn s2_by_hand() -> Dense {
    let r = |x: f64| c(x, 0.0);
    vec![
        vec![r(2.0), r(0.0), r(0.0), r(0.0)],
        vec![r(0.0), r(1.0), r(1.0), r(0.0)],
        vec![r(0.0), r(1.0), r(1.0), r(0.0)],
        vec![r(0.0), r(0.0), r(0.0), r(2.0)],
    ]
}

pub fn expectation(op: &Dense, v: &[C64]) -> f64 {
    let num: C64 =
        (0..v.len()).flat_map(|i| (0..v.len()).map(move |j| (i, j))).map(|(i, j)| v[i].conj() * op[i][j] * v[j]).sum();
    let den: f64 = v.iter().map(C64::norm_sqr).sum();
    num.re / den
}
