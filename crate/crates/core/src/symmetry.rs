//! Parity and plane-rotation operators, and what they leave invariant.

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingVector;
use crate::error::{check_dims, Error, Result};
use crate::linalg::{max_abs_diff, Matrix};
use crate::perturbation::solve_two_dim;

/// Anything that maps a state to a state of the same dimension.
pub trait SymmetryOperator {
    fn act(&self, a: &[f64]) -> Result<Vec<f64>>;

    fn matrix(&self, n: usize) -> Result<Matrix>;
}

/// Diagonal ±1 operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityOperator {
    signs: Vec<i8>,
}

impl ParityOperator {
    pub fn new(signs: &[f64]) -> Result<Self> {
        let signs = signs
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                if value == 1.0 {
                    Ok(1)
                } else if value == -1.0 {
                    Ok(-1)
                } else {
                    Err(Error::InvalidSign { index, value })
                }
            })
            .collect::<Result<_>>()?;
        Ok(ParityOperator { signs })
    }

    /// Flips the listed dimensions of an `n`-dimensional space.
    pub fn flipping(dims: &[usize], n: usize) -> Result<Self> {
        let mut signs = vec![1i8; n];
        for &d in dims {
            if d >= n {
                return Err(Error::IndexOutOfRange { index: d, dim: n });
            }
            signs[d] = -1;
        }
        Ok(ParityOperator { signs })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }
}

impl SymmetryOperator for ParityOperator {
    fn act(&self, a: &[f64]) -> Result<Vec<f64>> {
        check_dims(self.dim(), a.len())?;
        Ok(a.iter()
            .zip(&self.signs)
            .map(|(&x, &s)| if s < 0 { -x } else { x })
            .collect())
    }

    fn matrix(&self, n: usize) -> Result<Matrix> {
        check_dims(self.dim(), n)?;
        let diag: Vec<f64> = self.signs.iter().map(|&s| f64::from(s)).collect();
        Ok(Matrix::from_diagonal(&diag))
    }
}

/// Rotation by `theta` in the `(i, j)` plane:
/// `a′ᵢ = aᵢ cos θ − aⱼ sin θ`, `a′ⱼ = aᵢ sin θ + aⱼ cos θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationOperator {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
}

impl RotationOperator {
    pub fn new(i: usize, j: usize, theta: f64) -> Result<Self> {
        if i == j {
            return Err(Error::EqualIndices(i));
        }
        Ok(RotationOperator { i, j, theta })
    }

    fn check(&self, n: usize) -> Result<()> {
        for idx in [self.i, self.j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, dim: n });
            }
        }
        if self.i == self.j {
            return Err(Error::EqualIndices(self.i));
        }
        Ok(())
    }
}

impl SymmetryOperator for RotationOperator {
    fn act(&self, a: &[f64]) -> Result<Vec<f64>> {
        self.check(a.len())?;
        let (s, c) = self.theta.sin_cos();
        let mut out = a.to_vec();
        out[self.i] = a[self.i] * c - a[self.j] * s;
        out[self.j] = a[self.i] * s + a[self.j] * c;
        Ok(out)
    }

    fn matrix(&self, n: usize) -> Result<Matrix> {
        self.check(n)?;
        let (s, c) = self.theta.sin_cos();
        let mut m = Matrix::identity(n);
        m[(self.i, self.i)] = c;
        m[(self.j, self.j)] = c;
        m[(self.i, self.j)] = -s;
        m[(self.j, self.i)] = s;
        Ok(m)
    }
}

pub fn apply_parity(p: &ParityOperator, a: &EmbeddingVector) -> Result<EmbeddingVector> {
    Ok(EmbeddingVector::from_parts(p.act(a.as_slice())?))
}

pub fn apply_rotation(r: &RotationOperator, a: &EmbeddingVector) -> Result<EmbeddingVector> {
    Ok(EmbeddingVector::from_parts(r.act(a.as_slice())?))
}

/// `⟨Ta|H|Ta⟩ − ⟨a|H|a⟩`; zero whenever `T` commutes with `H`.
pub fn expectation_shift<T: SymmetryOperator + ?Sized>(
    t: &T,
    h: &Matrix,
    a: &EmbeddingVector,
) -> Result<f64> {
    let n = h.require_square()?;
    check_dims(n, a.dim())?;
    let ta = t.act(a.as_slice())?;
    Ok(h.quadratic_form(&ta)? - h.quadratic_form(a.as_slice())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapVerification {
    pub i: usize,
    pub j: usize,
    /// State produced by the `v = eᵢ + eⱼ` perturbation.
    pub perturbed: Vec<f64>,
    /// Swap on the `{i, j}` block, −1 on every other diagonal entry.
    pub operator: Matrix,
    /// `max |b − M a|`
    pub max_deviation: f64,
    /// `max |MᵀM − I|`
    pub orthogonality_residual: f64,
    pub determinant: f64,
    pub passed: bool,
}

pub const SWAP_TOL: f64 = 1e-12;

/// Checks that the two-dimension `(1, 1)` excitation equals a swap of
/// components `i` and `j` combined with negation of all the others.
pub fn verify_swap_decomposition(a: &EmbeddingVector, i: usize, j: usize) -> Result<SwapVerification> {
    let n = a.dim();
    let b = solve_two_dim(a, i, j, 1.0, 1.0)?;
    let mut m = Matrix::from_diagonal(&vec![-1.0; n]);
    m[(i, i)] = 0.0;
    m[(j, j)] = 0.0;
    m[(i, j)] = 1.0;
    m[(j, i)] = 1.0;

    let ma = m.mul_vec(a.as_slice())?;
    let max_deviation = max_abs_diff(b.perturbed.as_slice(), &ma);
    let orthogonality_residual = m.orthogonality_residual()?;
    // one transposition times (−1)^(n−2)
    let determinant = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    Ok(SwapVerification {
        i,
        j,
        perturbed: b.perturbed.to_vec(),
        operator: m,
        max_deviation,
        orthogonality_residual,
        determinant,
        passed: max_deviation <= SWAP_TOL && orthogonality_residual <= SWAP_TOL,
    })
}
