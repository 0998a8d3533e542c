//! Unit-norm embedding vectors and cosine similarity.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::linalg;

/// Norms at or below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-12;
/// Default deviation `| |x| - 1 |` accepted without touching the values.
pub const NORM_TOL: f64 = 1e-9;
/// Default deviation accepted (with renormalization) when loading stored vectors.
pub const LOAD_TOL: f64 = 1e-3;
/// Round-off allowed past ±1 before a similarity counts as an error.
pub const CLAMP_TOL: f64 = 1e-12;

/// An L2-normalized real vector of dimension at least 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    components: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

fn validate_raw(raw: &[f64]) -> Result<f64> {
    if raw.len() < 2 {
        return Err(Error::DimensionTooSmall { dim: raw.len() });
    }
    if let Some((index, &value)) = raw.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let norm = linalg::norm(raw);
    if norm <= ZERO_NORM {
        return Err(Error::ZeroVector { norm });
    }
    Ok(norm)
}

impl EmbeddingVector {
    /// Scales `raw` onto the unit sphere.
    pub fn normalize(raw: &[f64]) -> Result<Self> {
        let norm = validate_raw(raw)?;
        Ok(Self::from_parts(raw.iter().map(|x| x / norm).collect()))
    }

    /// Accepts a vector that should already be unit-norm.
    ///
    /// Deviations up to `norm_tol` are kept verbatim, deviations up to
    /// `load_tol` are renormalized, anything larger is rejected. The flag is
    /// true when renormalization happened.
    pub fn from_stored(raw: &[f64], norm_tol: f64, load_tol: f64) -> Result<(Self, bool)> {
        let norm = validate_raw(raw)?;
        let deviation = (norm - 1.0).abs();
        if deviation <= norm_tol {
            Ok((Self::from_parts(raw.to_vec()), false))
        } else if deviation <= load_tol {
            Ok((Self::normalize(raw)?, true))
        } else {
            Err(Error::NormOutOfRange {
                id: String::new(),
                norm,
            })
        }
    }

    pub(crate) fn from_parts(components: Vec<f64>) -> Self {
        EmbeddingVector {
            components,
            id: None,
            text: None,
        }
    }

    /// Wraps the output of a norm-preserving map, checking `| |x| - 1 | <= tol`.
    pub(crate) fn from_unit(raw: Vec<f64>, tol: f64) -> Result<Self> {
        let norm = validate_raw(&raw)?;
        if (norm - 1.0).abs() > tol {
            return Err(Error::NormBroken { norm });
        }
        Ok(Self::from_parts(raw))
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.components.clone()
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.components)
    }

    /// −a
    pub fn negated(&self) -> Self {
        Self::from_parts(self.components.iter().map(|x| -x).collect())
    }
}

impl AsRef<[f64]> for EmbeddingVector {
    fn as_ref(&self) -> &[f64] {
        &self.components
    }
}

/// Cosine similarity, guaranteed to lie in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    /// Clamps round-off up to [`CLAMP_TOL`] past the bounds; larger excursions are errors.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value.abs() > 1.0 + CLAMP_TOL {
            return Err(Error::SimilarityOutOfRange(value));
        }
        Ok(SimilarityScore(value.clamp(-1.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn transformed(self) -> TransformedSimilarity {
        transform_similarity(self)
    }
}

/// (S + 1) / 2, in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformedSimilarity(f64);

impl TransformedSimilarity {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<SimilarityScore> {
    check_dims(a.dim(), b.dim())?;
    SimilarityScore::new(linalg::dot(a.as_slice(), b.as_slice()))
}

pub fn maximally_dissimilar(a: &EmbeddingVector) -> EmbeddingVector {
    a.negated()
}

pub fn transform_similarity(s: SimilarityScore) -> TransformedSimilarity {
    TransformedSimilarity(0.5 * (s.value() + 1.0))
}
