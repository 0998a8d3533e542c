//! Shifted Hamiltonians `H′` and their rank-1 eigenstructure.
//!
//! For a multiplier vector `v`, `H′ = v vᵀ / Σ vᵢ²` is the orthogonal
//! projector onto `v`: one eigenvalue 1 with eigenvector `v / ‖v‖`, and an
//! (N−1)-fold eigenvalue 0 whose eigenspace is `v`'s orthogonal complement.
//! The complement basis is built by Gram-Schmidt.

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingVector;
use crate::error::{check_dims, Error, Result};
use crate::linalg::{dot, norm, norm_sq, Matrix};
use crate::transitions::TransitionOperator;

const SIGN_EPS: f64 = 1e-12;

/// `½ (H + I)`, mapping the similarity form from [-1, 1] onto [0, 1].
pub fn h_prime_from_h(h: &TransitionOperator) -> Matrix {
    let m = h.matrix();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        0.5 * (m[(i, j)] + if i == j { 1.0 } else { 0.0 })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOneHamiltonian {
    v: Vec<f64>,
    matrix: Matrix,
}

impl RankOneHamiltonian {
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `(Σ vᵢaᵢ)² / Σ vᵢ²` without touching the matrix.
    pub fn expectation(&self, a: &[f64]) -> Result<f64> {
        check_dims(self.dim(), a.len())?;
        let overlap = dot(&self.v, a);
        Ok(overlap * overlap / norm_sq(&self.v))
    }
}

pub fn build_rank_one(v: &[f64]) -> Result<RankOneHamiltonian> {
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let len = norm(v);
    if len <= 1e-12 {
        return Err(Error::DegenerateMultipliers);
    }
    let sq = len * len;
    let n = v.len();
    Ok(RankOneHamiltonian {
        v: v.to_vec(),
        matrix: Matrix::from_fn(n, n, |i, j| v[i] * v[j] / sq),
    })
}

/// Single 1 at `(i, i)`.
pub fn first_perturbation_matrix(i: usize, n: usize) -> Result<Matrix> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let mut m = Matrix::zeros(n, n);
    m[(i, i)] = 1.0;
    Ok(m)
}

/// ½ at `(i, i)`, `(j, j)`, `(i, j)`, `(j, i)`.
pub fn second_perturbation_matrix(i: usize, j: usize, n: usize) -> Result<Matrix> {
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, dim: n });
        }
    }
    if i == j {
        return Err(Error::EqualIndices(i));
    }
    let mut m = Matrix::zeros(n, n);
    for (r, c) in [(i, i), (j, j), (i, j), (j, i)] {
        m[(r, c)] = 0.5;
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    /// Diagonal of D: `[1, 0, …, 0]`.
    pub eigenvalues: Vec<f64>,
    /// Orthogonal U; column k is the eigenvector for `eigenvalues[k]`.
    pub basis: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.basis.column(k)
    }

    pub fn diagonal_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&self.eigenvalues)
    }
}

fn fix_sign(x: &mut [f64]) {
    if let Some(first) = x.iter().find(|c| c.abs() > SIGN_EPS) {
        if *first < 0.0 {
            x.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

/// Eigenbasis of a rank-1 projector.
///
/// Column 0 is `v / ‖v‖`. The rest come from modified Gram-Schmidt (two
/// passes) over the standard basis vectors in index order, skipping the one
/// aligned with the largest `|vᵢ|`. Every column is signed so that its first
/// entry above 1e-12 in magnitude is positive.
pub fn diagonalize(h: &RankOneHamiltonian) -> SpectralDecomposition {
    let n = h.dim();
    let v = h.v();
    let pivot = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bi, bm), (i, x)| {
            if x.abs() > bm {
                (i, x.abs())
            } else {
                (bi, bm)
            }
        })
        .0;

    let len = norm(v);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    columns.push(v.iter().map(|x| x / len).collect());

    for k in (0..n).filter(|&k| k != pivot) {
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        for _ in 0..2 {
            for q in &columns {
                let p = dot(q, &x);
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= p * qi);
            }
        }
        let l = norm(&x);
        x.iter_mut().for_each(|c| *c /= l);
        columns.push(x);
    }
    for c in &mut columns {
        fix_sign(c);
    }

    let mut eigenvalues = vec![0.0; n];
    eigenvalues[0] = 1.0;
    SpectralDecomposition {
        eigenvalues,
        basis: Matrix::from_columns(&columns).expect("columns share the dimension"),
    }
}

/// Amplitudes `A = Uᵀ a` of a state in the eigenbasis.
pub fn project_state(a: &EmbeddingVector, dec: &SpectralDecomposition) -> Result<Vec<f64>> {
    check_dims(dec.dim(), a.dim())?;
    dec.basis.transpose_mul_vec(a.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn h_prime_examples() {
        assert_eq!(h_prime_from_h(&TransitionOperator::negated_identity(3)), Matrix::zeros(3, 3));
        assert_eq!(h_prime_from_h(&TransitionOperator::identity(3)), Matrix::identity(3));
        let swap = TransitionOperator::general(
            Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(h_prime_from_h(&swap), second_perturbation_matrix(0, 1, 2).unwrap());
    }

    #[test]
    fn rank_one_examples() {
        let h = build_rank_one(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(h.matrix(), &first_perturbation_matrix(0, 3).unwrap());

        let h = build_rank_one(&[1.0, 1.0]).unwrap();
        assert!(h.matrix().max_abs_diff(&second_perturbation_matrix(0, 1, 2).unwrap()).unwrap() < 1e-15);

        let h = build_rank_one(&[3.0, 4.0]).unwrap();
        let expected = Matrix::from_rows(&[vec![9.0, 12.0], vec![12.0, 16.0]]).unwrap().scale(1.0 / 25.0);
        assert!(h.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        assert_abs_diff_eq!(h.matrix().trace(), 1.0, epsilon = 1e-15);

        assert!(matches!(build_rank_one(&[0.0, 0.0]), Err(Error::DegenerateMultipliers)));
    }

    #[test]
    fn first_matrix_examples() {
        let m = first_perturbation_matrix(2, 4).unwrap();
        assert_eq!(m, Matrix::from_diagonal(&[0.0, 0.0, 1.0, 0.0]));
        let m = first_perturbation_matrix(0, 2).unwrap();
        assert_abs_diff_eq!(m.quadratic_form(&[0.6, 0.8]).unwrap(), 0.36, epsilon = 1e-15);
        for n in 1..6 {
            for i in 0..n {
                assert_eq!(first_perturbation_matrix(i, n).unwrap().trace(), 1.0);
            }
        }
        assert!(matches!(
            first_perturbation_matrix(4, 4),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
    }

    #[test]
    fn second_matrix_examples() {
        let m = second_perturbation_matrix(0, 1, 2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_abs_diff_eq!(m.quadratic_form(&[0.6, 0.8]).unwrap(), 0.98, epsilon = 1e-15);
        assert_eq!(second_perturbation_matrix(1, 3, 5).unwrap().trace(), 1.0);
        assert!(matches!(second_perturbation_matrix(1, 1, 3), Err(Error::EqualIndices(1))));
        assert!(second_perturbation_matrix(0, 3, 3).is_err());
    }

    #[test]
    fn diagonalize_unit_vector_gives_identity() {
        let dec = diagonalize(&build_rank_one(&[1.0, 0.0, 0.0]).unwrap());
        assert_eq!(dec.basis, Matrix::identity(3));
        assert_eq!(dec.eigenvalues, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn diagonalize_ones() {
        let dec = diagonalize(&build_rank_one(&[1.0, 1.0]).unwrap());
        let x1 = dec.eigenvector(0);
        let x2 = dec.eigenvector(1);
        assert_abs_diff_eq!(x1[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(x1[1], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(x2[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(x2[1], -FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(dec.eigenvalues, vec![1.0, 0.0]);
    }

    #[test]
    fn diagonalize_residual_small() {
        let v = [0.3, -1.2, 2.0, 0.0, 0.7, -0.1];
        let h = build_rank_one(&v).unwrap();
        let dec = diagonalize(&h);
        let u = &dec.basis;
        assert!(u.orthogonality_residual().unwrap() < 1e-14);
        let d = u.transpose().matmul(h.matrix()).unwrap().matmul(u).unwrap();
        assert!(d.max_abs_diff(&dec.diagonal_matrix()).unwrap() < 1e-14);
        for k in 1..v.len() {
            assert!(dot(&v, &dec.eigenvector(k)).abs() < 1e-14);
        }
    }

    #[test]
    fn projection_examples() {
        let dec = diagonalize(&build_rank_one(&[1.0, 1.0]).unwrap());
        let x1 = EmbeddingVector::normalize(&dec.eigenvector(0)).unwrap();
        let amps = project_state(&x1, &dec).unwrap();
        assert_abs_diff_eq!(amps[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[1], 0.0, epsilon = 1e-15);

        let orth = EmbeddingVector::normalize(&[1.0, -1.0]).unwrap();
        assert_abs_diff_eq!(project_state(&orth, &dec).unwrap()[0], 0.0, epsilon = 1e-15);

        let a = EmbeddingVector::normalize(&[0.6, 0.8]).unwrap();
        let amps = project_state(&a, &dec).unwrap();
        assert_abs_diff_eq!(amps[0], 1.4 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(amps[0] * amps[0], 0.98, epsilon = 1e-15);
        assert!(project_state(&a, &diagonalize(&build_rank_one(&[1.0, 0.0, 0.0]).unwrap())).is_err());
    }
}
