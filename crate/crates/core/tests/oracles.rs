//! Sanity checks on the reference computations themselves.

mod common;

use common::{brute_eigenvalues, c, charpoly, expected_basis_count, inverse_iteration, max_diff, taylor_exp};
use photonic::linalg::CMatrix;

#[test]
fn charpoly_of_known_matrix() {
    // [[2, 1], [1, 2]] has λ² − 4λ + 3.
    let a = vec![vec![c(2.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]];
    let p = charpoly(&a);
    assert_eq!(p, vec![c(1.0, 0.0), c(-4.0, 0.0), c(3.0, 0.0)]);
    let roots = brute_eigenvalues(&a);
    assert!((roots[0] - 1.0).abs() < 1e-12 && (roots[1] - 3.0).abs() < 1e-12);
    let v = inverse_iteration(&a, 3.0);
    assert!((v[0].norm() - v[1].norm()).abs() < 1e-9);
}

#[test]
fn taylor_exp_of_diagonal() {
    let h = CMatrix::from_diagonal(&[0.5, -1.0, 3.0]);
    let u = taylor_exp(&h, 2.0);
    let want: Vec<Vec<_>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    if i == j {
                        num_complex::Complex64::from_polar(1.0, -[0.5, -1.0, 3.0][i] * 2.0)
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    assert!(max_diff(&u, &want) < 1e-13);
}

#[test]
fn basis_count_formula() {
    // One 2-level channel, one mode, n_max 1: the fourfold manifold doubled.
    assert_eq!(expected_basis_count(&[vec![2]], 1, 1), 8);
    assert_eq!(expected_basis_count(&[vec![2], vec![1, 1]], 0, 3), 3);
}
