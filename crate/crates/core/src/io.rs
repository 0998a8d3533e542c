//! The `semham-emb/1` JSON embedding file and multiplier specs.
//!
//! ```json
//! {
//!   "format_version": "semham-emb/1",
//!   "model": "optional model name",
//!   "dim": 768,
//!   "entries": [{ "id": "q1", "text": "optional", "values": [ ... ] }]
//! }
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::embedding::EmbeddingVector;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "semham-emb/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub dim: usize,
    pub entries: Vec<EmbeddingEntry>,
}

/// A validated file plus the embeddings built from it.
#[derive(Debug, Clone)]
pub struct LoadedEmbeddings {
    pub file: EmbeddingFile,
    pub vectors: Vec<EmbeddingVector>,
    /// Number of entries that had to be rescaled onto the unit sphere.
    pub renormalized: usize,
}

impl LoadedEmbeddings {
    pub fn get(&self, id: &str) -> Result<&EmbeddingVector> {
        self.vectors
            .iter()
            .find(|v| v.id() == Some(id))
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }
}

impl EmbeddingFile {
    pub fn new(model: Option<String>, vectors: &[EmbeddingVector]) -> Result<Self> {
        let dim = vectors.first().map_or(0, EmbeddingVector::dim);
        let entries = vectors
            .iter()
            .enumerate()
            .map(|(k, v)| EmbeddingEntry {
                id: v.id().map_or_else(|| format!("v{k}"), str::to_string),
                text: v.text().map(str::to_string),
                values: v.to_vec(),
            })
            .collect();
        let file = EmbeddingFile {
            format_version: FORMAT_VERSION.to_string(),
            model,
            dim,
            entries,
        };
        file.check_shape()?;
        Ok(file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EmbeddingFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format_version {:?}, expected {FORMAT_VERSION:?}",
                file.format_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    fn check_shape(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Parse(format!("dim must be at least 2, got {}", self.dim)));
        }
        let mut seen = HashSet::new();
        for e in &self.entries {
            if e.values.len() != self.dim {
                return Err(Error::EntryDimMismatch {
                    id: e.id.clone(),
                    expected: self.dim,
                    found: e.values.len(),
                });
            }
            if !seen.insert(e.id.as_str()) {
                return Err(Error::DuplicateId(e.id.clone()));
            }
        }
        Ok(())
    }

    /// Checks shape and norms, renormalizing entries within the load tolerance.
    pub fn validate(mut self, norm_tol: f64, load_tol: f64) -> Result<LoadedEmbeddings> {
        self.check_shape()?;
        let mut vectors = Vec::with_capacity(self.entries.len());
        let mut renormalized = 0;
        for e in &mut self.entries {
            let (v, rescaled) =
                EmbeddingVector::from_stored(&e.values, norm_tol, load_tol).map_err(|err| match err {
                    Error::NormOutOfRange { norm, .. } => Error::NormOutOfRange {
                        id: e.id.clone(),
                        norm,
                    },
                    Error::NonFinite { index, value } => Error::Parse(format!(
                        "entry {:?}: component {index} is not finite ({value})",
                        e.id
                    )),
                    Error::ZeroVector { norm } => Error::NormOutOfRange {
                        id: e.id.clone(),
                        norm,
                    },
                    other => other,
                })?;
            if rescaled {
                renormalized += 1;
                e.values = v.to_vec();
            }
            let mut v = v.with_id(e.id.clone());
            if let Some(t) = &e.text {
                v = v.with_text(t.clone());
            }
            vectors.push(v);
        }
        Ok(LoadedEmbeddings {
            file: self,
            vectors,
            renormalized,
        })
    }
}

pub fn load_embeddings(path: impl AsRef<Path>, config: &RunConfig) -> Result<LoadedEmbeddings> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    EmbeddingFile::from_json(&text)?.validate(config.norm_tol, config.load_tol)
}

/// Parses a multiplier vector.
///
/// Dense form lists every entry (`"1,1,0"`); sparse form gives `index:value`
/// pairs (`"0:1,5:-2"`) and needs `dim`. Whitespace is ignored.
pub fn parse_multipliers(spec: &str, dim: Option<usize>) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(Error::Parse("empty multiplier spec".into()));
    }
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number {s:?} in multiplier spec")))
    };
    let sparse = parts.iter().any(|p| p.contains(':'));
    let v = if sparse {
        let n = dim.ok_or_else(|| Error::Parse("sparse multiplier spec needs a dimension".into()))?;
        let mut v = vec![0.0; n];
        for p in parts {
            let (idx, val) = p
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("mixed dense and sparse entries near {p:?}")))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {idx:?} in multiplier spec")))?;
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, dim: n });
            }
            v[idx] = num(val)?;
        }
        v
    } else {
        let v = parts.into_iter().map(num).collect::<Result<Vec<_>>>()?;
        if let Some(n) = dim {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        v
    };
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file_json(values: &[&str]) -> String {
        let entries: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(k, v)| format!(r#"{{"id": "e{k}", "values": {v}}}"#))
            .collect();
        format!(
            r#"{{"format_version": "semham-emb/1", "dim": 2, "entries": [{}]}}"#,
            entries.join(",")
        )
    }

    fn load(text: &str) -> Result<LoadedEmbeddings> {
        EmbeddingFile::from_json(text)?.validate(1e-9, 1e-3)
    }

    #[test]
    fn loads_and_renormalizes() {
        let l = load(&file_json(&["[0.6, 0.8]", "[0.59970, 0.79960]"])).unwrap();
        assert_eq!(l.vectors.len(), 2);
        assert_eq!(l.renormalized, 1);
        assert!((l.vectors[1].norm() - 1.0).abs() < 1e-15);
        assert_eq!(l.get("e0").unwrap().as_slice(), &[0.6, 0.8]);
        assert!(matches!(l.get("nope"), Err(Error::UnknownId(_))));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            load(&file_json(&["[0.3, 0.4]"])),
            Err(Error::NormOutOfRange { ref id, .. }) if id == "e0"
        ));
        assert!(matches!(
            load(&file_json(&["[0.6, 0.8, 0.0]"])),
            Err(Error::EntryDimMismatch { .. })
        ));
        let dup = r#"{"format_version": "semham-emb/1", "dim": 2, "entries": [
            {"id": "x", "values": [1, 0]}, {"id": "x", "values": [0, 1]}]}"#;
        assert!(matches!(load(dup), Err(Error::DuplicateId(_))));
        let wrong = r#"{"format_version": "other/2", "dim": 2, "entries": []}"#;
        assert!(matches!(load(wrong), Err(Error::Parse(_))));
        assert!(matches!(load("{not json"), Err(Error::Parse(_))));
        assert_eq!(load("{not json").unwrap_err().exit_code(), 4);
    }

    #[test]
    fn multiplier_specs() {
        assert_eq!(parse_multipliers("1,1,0", None).unwrap(), vec![1.0, 1.0, 0.0]);
        assert_eq!(parse_multipliers(" 1, -2 ", Some(2)).unwrap(), vec![1.0, -2.0]);
        assert_eq!(parse_multipliers("0:1,3:-1", Some(4)).unwrap(), vec![1.0, 0.0, 0.0, -1.0]);
        assert!(parse_multipliers("0:1", None).is_err());
        assert!(parse_multipliers("4:1", Some(4)).is_err());
        assert!(parse_multipliers("1,x", None).is_err());
        assert!(parse_multipliers("1,2", Some(3)).is_err());
        assert!(parse_multipliers("", None).is_err());
        assert!(parse_multipliers("1,inf", None).is_err());
    }
}
