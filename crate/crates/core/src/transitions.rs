//! Transition operators `b = H a` between embedding states.
//!
//! Householder reflections are kept as their unit normal `w` (`H = I - 2wwᵀ`)
//! so that applying them costs O(N); the dense matrix is materialized only
//! when asked for.

use serde::{Deserialize, Serialize};

use crate::embedding::{cosine_similarity, EmbeddingVector, SimilarityScore};
use crate::error::{check_dims, Error, Result};
use crate::linalg::{dot, max_abs_diff, norm, Matrix};

/// `‖a - b‖` below which the reflection degenerates to the identity.
pub const REFLECTION_EPS: f64 = 1e-12;
/// Allowed `| ‖Ha‖ - 1 |` when the output must be an embedding.
pub const APPLY_NORM_TOL: f64 = 1e-6;
/// Allowed `max |UᵀU - I|` for a change of basis.
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Identity,
    NegatedIdentity,
    Diagonal,
    Householder,
    Composed,
    General,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Dense(Matrix),
    /// `I - 2wwᵀ` with unit `w`.
    Reflection(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionOperator {
    repr: Repr,
    kind: OperatorKind,
}

impl TransitionOperator {
    pub fn identity(n: usize) -> Self {
        Self::dense(Matrix::identity(n), OperatorKind::Identity)
    }

    pub fn negated_identity(n: usize) -> Self {
        Self::dense(Matrix::identity(n).scale(-1.0), OperatorKind::NegatedIdentity)
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::dense(Matrix::from_diagonal(diag), OperatorKind::Diagonal)
    }

    /// Wraps an arbitrary square matrix.
    pub fn general(matrix: Matrix) -> Result<Self> {
        matrix.require_square()?;
        Ok(Self::dense(matrix, OperatorKind::General))
    }

    fn dense(matrix: Matrix, kind: OperatorKind) -> Self {
        TransitionOperator {
            repr: Repr::Dense(matrix),
            kind,
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.rows(),
            Repr::Reflection(w) => w.len(),
        }
    }

    /// Unit normal of a Householder operator.
    pub fn reflector(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Reflection(w) => Some(w),
            Repr::Dense(_) => None,
        }
    }

    /// Dense N×N matrix.
    pub fn matrix(&self) -> Matrix {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Reflection(w) => {
                let n = w.len();
                Matrix::from_fn(n, n, |i, j| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    id - 2.0 * w[i] * w[j]
                })
            }
        }
    }

    /// `H x` as a plain vector, with no norm checks.
    pub fn apply_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.repr {
            Repr::Dense(m) => m.mul_vec(x),
            Repr::Reflection(w) => {
                check_dims(w.len(), x.len())?;
                let proj = 2.0 * dot(w, x);
                Ok(x.iter().zip(w).map(|(xi, wi)| xi - proj * wi).collect())
            }
        }
    }
}

/// Reflection across the hyperplane bisecting `a` and `b`, so that `H a = b`.
pub fn householder_transition(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<TransitionOperator> {
    check_dims(a.dim(), b.dim())?;
    let diff: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x - y).collect();
    let len = norm(&diff);
    if len <= REFLECTION_EPS {
        return Ok(TransitionOperator::identity(a.dim()));
    }
    Ok(TransitionOperator {
        repr: Repr::Reflection(diff.into_iter().map(|d| d / len).collect()),
        kind: OperatorKind::Householder,
    })
}

/// `H a` as an embedding. Fails with [`Error::NormBroken`] when `‖Ha‖` drifts
/// more than [`APPLY_NORM_TOL`] from one; smaller drift is renormalized away.
pub fn apply(h: &TransitionOperator, a: &EmbeddingVector) -> Result<EmbeddingVector> {
    let out = h.apply_raw(a.as_slice())?;
    let n = norm(&out);
    if !n.is_finite() || (n - 1.0).abs() > APPLY_NORM_TOL {
        return Err(Error::NormBroken { norm: n });
    }
    EmbeddingVector::normalize(&out)
}

/// `aᵀ H a`
pub fn quadratic_similarity(a: &EmbeddingVector, h: &TransitionOperator) -> Result<SimilarityScore> {
    let ha = h.apply_raw(a.as_slice())?;
    SimilarityScore::new(dot(a.as_slice(), &ha))
}

/// `(H + Hᵀ) / 2`, which has the same quadratic form as `H`.
pub fn symmetrize(h: &TransitionOperator) -> TransitionOperator {
    match h.kind {
        OperatorKind::Identity
        | OperatorKind::NegatedIdentity
        | OperatorKind::Diagonal
        | OperatorKind::Householder => h.clone(),
        OperatorKind::Composed | OperatorKind::General => {
            let m = h.matrix();
            let sym = Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
            TransitionOperator::dense(sym, OperatorKind::General)
        }
    }
}

/// `U H Uᵀ` for orthogonal `U`.
pub fn change_of_basis(h: &TransitionOperator, u: &Matrix) -> Result<TransitionOperator> {
    let n = u.require_square()?;
    check_dims(h.dim(), n)?;
    let deviation = u.orthogonality_residual()?;
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    if let Some(w) = h.reflector() {
        // U (I - 2wwᵀ) Uᵀ = I - 2(Uw)(Uw)ᵀ
        return Ok(TransitionOperator {
            repr: Repr::Reflection(u.mul_vec(w)?),
            kind: OperatorKind::Householder,
        });
    }
    let kind = match h.kind {
        OperatorKind::Identity | OperatorKind::NegatedIdentity => h.kind,
        _ => OperatorKind::General,
    };
    let out = u.matmul(&h.matrix())?.matmul(&u.transpose())?;
    Ok(TransitionOperator::dense(out, kind))
}

/// `H₂₃ H₁₂`: first `h12`, then `h23`.
pub fn compose_indirect(
    h12: &TransitionOperator,
    h23: &TransitionOperator,
) -> Result<TransitionOperator> {
    check_dims(h12.dim(), h23.dim())?;
    let product = h23.matrix().matmul(&h12.matrix())?;
    Ok(TransitionOperator::dense(product, OperatorKind::Composed))
}

/// `C = Σᵢ (Σⱼ hᵢⱼ aⱼ)² = ‖Ha‖²`, which must be 1 for `Ha` to stay an embedding.
pub fn hamiltonian_constraint(h: &TransitionOperator, a: &EmbeddingVector) -> Result<f64> {
    let ha = h.apply_raw(a.as_slice())?;
    Ok(dot(&ha, &ha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub direct_similarity: SimilarityScore,
    pub indirect_similarity: SimilarityScore,
    pub constraint_12: f64,
    pub constraint_23: f64,
    pub discrepancy: f64,
    /// `max |H₂₃ H₁₂ v1 - v3|`
    pub endpoint_error: f64,
}

/// Direct versus two-step transition `v1 → v2 → v3` through Householder
/// reflections composed in the shared ambient basis.
pub fn run_indirect_experiment(
    v1: &EmbeddingVector,
    v2: &EmbeddingVector,
    v3: &EmbeddingVector,
) -> Result<TransitionReport> {
    check_dims(v1.dim(), v2.dim())?;
    check_dims(v1.dim(), v3.dim())?;
    let h12 = householder_transition(v1, v2)?;
    let h23 = householder_transition(v2, v3)?;

    let mid = h12.apply_raw(v1.as_slice())?;
    let end = h23.apply_raw(&mid)?;

    let direct = cosine_similarity(v1, v3)?;
    let indirect = SimilarityScore::new(dot(v1.as_slice(), &end))?;
    Ok(TransitionReport {
        direct_similarity: direct,
        indirect_similarity: indirect,
        constraint_12: hamiltonian_constraint(&h12, v1)?,
        constraint_23: hamiltonian_constraint(&h23, v2)?,
        discrepancy: (direct.value() - indirect.value()).abs(),
        endpoint_error: max_abs_diff(&end, v3.as_slice()),
    })
}
