//! Closed-form time evolution in the eigenbasis of `H′`.
//!
//! `cₙ(t) = Aₙ exp(-i Eₙ t / ħ)`. Nothing here timesteps; the Schrödinger
//! residual exists only to check the closed form against its defining ODE.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingVector;
use crate::error::{check_dims, Error, Result};
use crate::linalg::dot;
use crate::perturbation::OVERLAP_TOL;
use crate::spectral::{project_state, SpectralDecomposition};

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<f64>,
    energies: Vec<f64>,
    coefficients: Vec<Complex64>,
    time: f64,
    hbar: f64,
}

impl QuantumState {
    /// State at `t = 0`.
    pub fn new(amplitudes: Vec<f64>, energies: Vec<f64>, hbar: f64) -> Result<Self> {
        check_dims(amplitudes.len(), energies.len())?;
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        let coefficients = amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Ok(QuantumState {
            amplitudes,
            energies,
            coefficients,
            time: 0.0,
            hbar,
        })
    }

    /// Rank-1 spectrum `E = [1, 0, …, 0]`.
    pub fn rank_one(amplitudes: Vec<f64>, hbar: f64) -> Result<Self> {
        let mut energies = vec![0.0; amplitudes.len()];
        if let Some(e) = energies.first_mut() {
            *e = 1.0;
        }
        Self::new(amplitudes, energies, hbar)
    }

    /// Projects `a` onto the eigenbasis and uses the decomposition's eigenvalues.
    pub fn from_decomposition(a: &EmbeddingVector, dec: &SpectralDecomposition, hbar: f64) -> Result<Self> {
        Self::new(project_state(a, dec)?, dec.eigenvalues.clone(), hbar)
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    fn coefficients_at(&self, t: f64) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .zip(&self.energies)
            .map(|(&a, &e)| a * Complex64::from_polar(1.0, -e * t / self.hbar))
            .collect()
    }
}

/// The state at absolute time `t`.
pub fn evolve(state: &QuantumState, t: f64) -> Result<QuantumState> {
    if state.hbar.is_nan() || state.hbar <= 0.0 {
        return Err(Error::NonPositiveHbar(state.hbar));
    }
    Ok(QuantumState {
        coefficients: state.coefficients_at(t),
        time: t,
        ..state.clone()
    })
}

/// `Σ |cₙ|² Eₙ`
pub fn expectation(state: &QuantumState) -> f64 {
    state
        .coefficients
        .iter()
        .zip(&state.energies)
        .map(|(c, e)| c.norm_sqr() * e)
        .sum()
}

/// `max_n | iħ (cₙ(t+dt) − cₙ(t−dt)) / 2dt − Eₙ cₙ(t) |`
pub fn schrodinger_residual(state: &QuantumState, t: f64, dt: f64) -> Result<f64> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::NonPositiveDt(dt));
    }
    let plus = state.coefficients_at(t + dt);
    let minus = state.coefficients_at(t - dt);
    let now = state.coefficients_at(t);
    let i_hbar = Complex64::new(0.0, state.hbar);
    Ok(plus
        .iter()
        .zip(&minus)
        .zip(now.iter().zip(&state.energies))
        .map(|((p, m), (c, &e))| (i_hbar * (p - m) / (2.0 * dt) - c * e).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPointResult {
    /// Minimum transformed similarity over the candidates.
    pub epsilon: f64,
    /// `√ε`
    pub a1: f64,
    pub argmin_v: Vec<f64>,
    pub argmin_index: usize,
    /// Candidates dropped for zero overlap or zero norm.
    pub skipped: Vec<usize>,
}

/// Minimum of `(Σ vᵢaᵢ)² / Σ vᵢ²` over a caller-supplied candidate set.
pub fn zero_point(a: &EmbeddingVector, candidates: &[Vec<f64>]) -> Result<ZeroPointResult> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut best: Option<(usize, f64)> = None;
    let mut skipped = Vec::new();
    for (k, v) in candidates.iter().enumerate() {
        check_dims(a.dim(), v.len())?;
        let v_sq = dot(v, v);
        let overlap = dot(v, a.as_slice());
        if v_sq == 0.0 || overlap.abs() <= OVERLAP_TOL {
            skipped.push(k);
            continue;
        }
        let value = overlap * overlap / v_sq;
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((k, value));
        }
    }
    let (idx, epsilon) = best.ok_or(Error::AllNonPhysical(candidates.len()))?;
    Ok(ZeroPointResult {
        epsilon,
        a1: epsilon.sqrt(),
        argmin_v: candidates[idx].clone(),
        argmin_index: idx,
        skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub re_c1: f64,
    pub im_c1: f64,
    /// `Σ_{n≥2} Aₙ`, the time-independent part.
    pub static_sum: f64,
    pub expectation: f64,
}

/// `steps` samples on a uniform grid covering `[t0, t1]` inclusive.
pub fn trajectory(state: &QuantumState, t0: f64, t1: f64, steps: usize) -> Result<Vec<TrajectorySample>> {
    if !t0.is_finite() || !t1.is_finite() || t1 <= t0 {
        return Err(Error::BadRange(format!("need t0 < t1, got [{t0}, {t1}]")));
    }
    if steps < 2 {
        return Err(Error::BadRange(format!("need at least 2 steps, got {steps}")));
    }
    if state.amplitudes.is_empty() {
        return Err(Error::BadRange("state has no components".into()));
    }
    let static_sum: f64 = state.amplitudes.iter().skip(1).sum();
    let span = t1 - t0;
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            let t = if k == steps - 1 { t1 } else { t0 + span * k as f64 / last };
            let s = evolve(state, t)?;
            Ok(TrajectorySample {
                t,
                re_c1: s.coefficients[0].re,
                im_c1: s.coefficients[0].im,
                static_sum,
                expectation: expectation(&s),
            })
        })
        .collect()
}
