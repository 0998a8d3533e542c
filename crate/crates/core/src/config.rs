use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::embedding::{LOAD_TOL, NORM_TOL};
use crate::error::{Error, Result};
use crate::perturbation::CONSTRAINT_TOL;

/// Environment variable overriding [`RunConfig::constraint_tol`].
pub const TOL_ENV: &str = "SEMHAM_TOL";

/// Tolerances and knobs shared by every command. Echoed into each report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub norm_tol: f64,
    pub load_tol: f64,
    pub constraint_tol: f64,
    pub hbar: f64,
    pub seed: u64,
    pub strict_multipliers: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            norm_tol: NORM_TOL,
            load_tol: LOAD_TOL,
            constraint_tol: CONSTRAINT_TOL,
            hbar: 1.0,
            seed: 0,
            strict_multipliers: false,
            output_path: None,
        }
    }
}

impl RunConfig {
    /// Defaults with `SEMHAM_TOL` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(TOL_ENV) {
            cfg.constraint_tol = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{TOL_ENV}={raw:?} is not a number")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("norm_tol", self.norm_tol),
            ("load_tol", self.load_tol),
            ("constraint_tol", self.constraint_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parse(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::NonPositiveHbar(self.hbar));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.norm_tol, 1e-9);
        assert_eq!(c.load_tol, 1e-3);
        assert_eq!(c.constraint_tol, 1e-10);
        assert_eq!(c.hbar, 1.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_nonpositive() {
        let c = RunConfig {
            constraint_tol: 0.0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            hbar: -1.0,
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::NonPositiveHbar(_))));
    }
}
