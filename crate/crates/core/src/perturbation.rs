//! Norm-preserving perturbations around the maximally dissimilar state.
//!
//! Every perturbed state has the form `b = -a + Δ`. Keeping `b` on the unit
//! sphere forces `-2 Σ aᵢΔᵢ + Σ Δᵢ² = 0`, and the similarity of such a state
//! to `a` is `-1 + ½ Σ Δᵢ²`. With `Δ = scale · v` the constraint has the single
//! nonzero root `scale = 2 Σ vᵢaᵢ / Σ vᵢ²`.

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingVector, SimilarityScore, TransformedSimilarity};
use crate::error::{check_dims, Error, Result};
use crate::linalg::{dot, norm_sq};

/// Residual tolerance for accepting Δ as norm-preserving.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// `Σ vᵢaᵢ` at or below this magnitude counts as perfect compensation.
pub const OVERLAP_TOL: f64 = 1e-12;
/// Components below this magnitude are not perturbation candidates.
pub const ZERO_COMPONENT: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationProfile {
    /// Per-dimension change Δᵢ.
    pub delta: Vec<f64>,
    /// Multipliers vᵢ, so that Δᵢ = vᵢ · scale.
    pub v: Vec<f64>,
    /// Signed common scale; its sign follows `Σ vᵢaᵢ`.
    pub scale: f64,
    /// Indices with vᵢ ≠ 0.
    pub active_dims: Vec<usize>,
}

impl PerturbationProfile {
    pub fn from_multipliers(v: Vec<f64>, scale: f64) -> Self {
        let delta = v.iter().map(|x| x * scale).collect();
        let active_dims = v
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != 0.0)
            .map(|(i, _)| i)
            .collect();
        PerturbationProfile {
            delta,
            v,
            scale,
            active_dims,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationResult {
    pub profile: PerturbationProfile,
    pub perturbed: EmbeddingVector,
    pub similarity: SimilarityScore,
    /// Excitation above the maximally dissimilar state, `S + 1`.
    pub epsilon: f64,
}

impl PerturbationResult {
    pub fn transformed(&self) -> TransformedSimilarity {
        self.similarity.transformed()
    }
}

/// `-2 Σ aᵢΔᵢ + Σ Δᵢ²`; zero exactly when `-a + Δ` is unit-norm.
pub fn constraint_residual(a: &EmbeddingVector, delta: &[f64]) -> Result<f64> {
    check_dims(a.dim(), delta.len())?;
    Ok(-2.0 * dot(a.as_slice(), delta) + norm_sq(delta))
}

/// `-1 + ½ Σ Δᵢ²`. Only meaningful for norm-preserving Δ; see
/// [`similarity_from_delta_checked`].
pub fn similarity_from_delta(delta: &[f64]) -> Result<SimilarityScore> {
    SimilarityScore::new(-1.0 + 0.5 * norm_sq(delta))
}

pub fn similarity_from_delta_checked(
    a: &EmbeddingVector,
    delta: &[f64],
    tol: f64,
) -> Result<SimilarityScore> {
    let residual = constraint_residual(a, delta)?;
    if residual.abs() > tol {
        return Err(Error::ConstraintViolated { residual });
    }
    similarity_from_delta(delta)
}

/// Flips the sign of the smallest nonzero component of `-a`.
///
/// Ties go to the lowest index. The perturbed state is built by copying `a`
/// and negating every other component, so it is exactly unit-norm.
pub fn smallest_perturbation(a: &EmbeddingVector) -> Result<PerturbationResult> {
    let comps = a.as_slice();
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in comps.iter().enumerate() {
        if x.abs() < ZERO_COMPONENT {
            continue;
        }
        if best.is_none_or(|(_, m)| x.abs() < m) {
            best = Some((i, x.abs()));
        }
    }
    let (idx, _) = best.ok_or(Error::AllZero)?;
    let ai = comps[idx];

    let mut v = vec![0.0; a.dim()];
    v[idx] = 1.0;
    let profile = PerturbationProfile::from_multipliers(v, 2.0 * ai);

    let perturbed: Vec<f64> = comps
        .iter()
        .enumerate()
        .map(|(k, &x)| if k == idx { x } else { -x })
        .collect();
    let similarity = SimilarityScore::new(-1.0 + 2.0 * ai * ai)?;
    Ok(PerturbationResult {
        profile,
        perturbed: EmbeddingVector::from_parts(perturbed),
        similarity,
        epsilon: similarity.value() + 1.0,
    })
}

/// Perturbation confined to dimensions `i` and `j` with multipliers `(v_i, v_j)`.
pub fn solve_two_dim(
    a: &EmbeddingVector,
    i: usize,
    j: usize,
    v_i: f64,
    v_j: f64,
) -> Result<PerturbationResult> {
    let n = a.dim();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, dim: n });
        }
    }
    if i == j {
        return Err(Error::EqualIndices(i));
    }
    let mut v = vec![0.0; n];
    v[i] = v_i;
    v[j] = v_j;
    general_similarity(a, &v)
}

/// Closed-form similarity for an arbitrary multiplier vector.
pub fn general_similarity(a: &EmbeddingVector, v: &[f64]) -> Result<PerturbationResult> {
    check_dims(a.dim(), v.len())?;
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let v_sq = norm_sq(v);
    if v_sq == 0.0 {
        return Err(Error::DegenerateMultipliers);
    }
    let overlap = dot(v, a.as_slice());
    if overlap.abs() <= OVERLAP_TOL {
        return Err(Error::NonPhysicalConfiguration { overlap });
    }

    let scale = 2.0 * overlap / v_sq;
    let profile = PerturbationProfile::from_multipliers(v.to_vec(), scale);
    let raw: Vec<f64> = a
        .as_slice()
        .iter()
        .zip(&profile.delta)
        .map(|(x, d)| -x + d)
        .collect();
    let perturbed = EmbeddingVector::from_unit(raw, CONSTRAINT_TOL).map_err(|e| match e {
        Error::NormBroken { norm } => Error::ConstraintViolated {
            residual: norm * norm - 1.0,
        },
        other => other,
    })?;
    let similarity = SimilarityScore::new(-1.0 + 2.0 * overlap * overlap / v_sq)?;
    Ok(PerturbationResult {
        profile,
        perturbed,
        similarity,
        epsilon: similarity.value() + 1.0,
    })
}

/// [`general_similarity`] that also enforces `|vᵢ| ≥ 1 or vᵢ = 0`.
pub fn general_similarity_strict(a: &EmbeddingVector, v: &[f64]) -> Result<PerturbationResult> {
    check_multiplier_convention(v)?;
    general_similarity(a, v)
}

pub fn check_multiplier_convention(v: &[f64]) -> Result<()> {
    match v
        .iter()
        .enumerate()
        .find(|(_, x)| **x != 0.0 && x.abs() < 1.0)
    {
        Some((index, &value)) => Err(Error::MultiplierConvention { index, value }),
        None => Ok(()),
    }
}

/// Componentwise sum of two perturbations. The sum is generally not
/// norm-preserving and has to be re-checked against the anchor.
pub fn chain_perturbations(delta1: &[f64], delta2: &[f64]) -> Result<Vec<f64>> {
    check_dims(delta1.len(), delta2.len())?;
    Ok(delta1.iter().zip(delta2).map(|(x, y)| x + y).collect())
}
