//! Report documents and CSV exports behind the `semham` commands.

use std::io::Write;

use serde::Serialize;

use crate::config::RunConfig;
use crate::dynamics::TrajectorySample;
use crate::embedding::{cosine_similarity, EmbeddingVector};
use crate::error::{Error, Result};
use crate::linalg::{dot, max_abs_diff, norm, Matrix};
use crate::perturbation::{general_similarity, general_similarity_strict, smallest_perturbation, PerturbationResult};
use crate::spectral::{build_rank_one, diagonalize, first_perturbation_matrix};
use crate::symmetry::{expectation_shift, ParityOperator};
use crate::synthetic::SyntheticSource;
use crate::transitions::{hamiltonian_constraint, householder_transition, run_indirect_experiment, TransitionReport};

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionCommandReport {
    pub config: RunConfig,
    pub from: String,
    pub via: String,
    pub to: String,
    #[serde(flatten)]
    pub report: TransitionReport,
    pub passed: bool,
}

pub fn transition_report(
    config: &RunConfig,
    (from, via, to): (&EmbeddingVector, &EmbeddingVector, &EmbeddingVector),
) -> Result<TransitionCommandReport> {
    let report = run_indirect_experiment(from, via, to)?;
    let tol = config.constraint_tol;
    let passed = report.discrepancy <= tol
        && (report.constraint_12 - 1.0).abs() <= tol
        && (report.constraint_23 - 1.0).abs() <= tol;
    let label = |v: &EmbeddingVector| v.id().unwrap_or("?").to_string();
    Ok(TransitionCommandReport {
        config: config.clone(),
        from: label(from),
        via: label(via),
        to: label(to),
        report,
        passed,
    })
}

/// Three seeded unit vectors labelled `s1`, `s2`, `s3`.
pub fn synthetic_triple(dim: usize, seed: u64) -> Result<[EmbeddingVector; 3]> {
    let mut src = SyntheticSource::new(seed);
    Ok([
        src.unit_vector(dim)?.with_id("s1"),
        src.unit_vector(dim)?.with_id("s2"),
        src.unit_vector(dim)?.with_id("s3"),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaSummary {
    pub active_dims: Vec<usize>,
    /// `(index, Δᵢ)` for the first few active dimensions.
    pub head: Vec<(usize, f64)>,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbCommandReport {
    pub config: RunConfig,
    pub id: String,
    /// `"smallest"` or `"general"`.
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_dim: Option<usize>,
    pub scale: f64,
    pub delta: DeltaSummary,
    pub similarity: f64,
    pub transformed_similarity: f64,
    pub epsilon: f64,
    /// `a · (−a + Δ)` computed directly.
    pub direct_dot: f64,
    pub perturbed_norm: f64,
    pub norm_ok: bool,
    pub agreement_ok: bool,
}

const DELTA_HEAD: usize = 8;

/// Smallest perturbation when `v` is `None`, otherwise the general closed form.
pub fn perturb_report(config: &RunConfig, a: &EmbeddingVector, v: Option<&[f64]>) -> Result<PerturbCommandReport> {
    let (mode, result): (&'static str, PerturbationResult) = match v {
        None => ("smallest", smallest_perturbation(a)?),
        Some(v) if config.strict_multipliers => ("general", general_similarity_strict(a, v)?),
        Some(v) => ("general", general_similarity(a, v)?),
    };
    let profile = &result.profile;
    let raw: Vec<f64> = a.as_slice().iter().zip(&profile.delta).map(|(x, d)| -x + d).collect();
    let direct_dot = dot(a.as_slice(), &raw);
    let perturbed_norm = norm(&raw);
    let tol = config.constraint_tol;
    Ok(PerturbCommandReport {
        config: config.clone(),
        id: a.id().unwrap_or("?").to_string(),
        mode,
        argmin_dim: if v.is_none() { profile.active_dims.first().copied() } else { None },
        scale: profile.scale,
        delta: DeltaSummary {
            active_dims: profile.active_dims.clone(),
            head: profile
                .active_dims
                .iter()
                .take(DELTA_HEAD)
                .map(|&i| (i, profile.delta[i]))
                .collect(),
            norm: norm(&profile.delta),
        },
        similarity: result.similarity.value(),
        transformed_similarity: result.transformed().value(),
        epsilon: result.epsilon,
        direct_dot,
        perturbed_norm,
        norm_ok: (perturbed_norm - 1.0).abs() <= tol,
        agreement_ok: (direct_dot - result.similarity.value()).abs() <= tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCommandReport {
    pub config: RunConfig,
    pub v: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub x1: Vec<f64>,
    /// `max |UᵀU − I|`
    pub orthogonality_residual: f64,
    /// `max |UᵀH′U − D|`
    pub diagonalization_residual: f64,
    /// `max |H′² − H′|`
    pub projector_residual: f64,
    /// `max_k |vᵀxₖ|` over the zero-eigenvalue columns.
    pub complement_residual: f64,
    #[serde(skip)]
    pub matrix: Matrix,
    #[serde(skip)]
    pub basis: Matrix,
}

pub fn spectrum_report(config: &RunConfig, v: &[f64]) -> Result<SpectrumCommandReport> {
    let h = build_rank_one(v)?;
    let dec = diagonalize(&h);
    let u = &dec.basis;
    let m = h.matrix();
    let d = u.transpose().matmul(m)?.matmul(u)?;
    let complement_residual = (1..dec.dim())
        .map(|k| dot(v, &dec.eigenvector(k)).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumCommandReport {
        config: config.clone(),
        v: v.to_vec(),
        trace: m.trace(),
        x1: dec.eigenvector(0),
        orthogonality_residual: u.orthogonality_residual()?,
        diagonalization_residual: d.max_abs_diff(&dec.diagonal_matrix())?,
        projector_residual: m.matmul(m)?.max_abs_diff(m)?,
        complement_residual,
        eigenvalues: dec.eigenvalues.clone(),
        matrix: m.clone(),
        basis: u.clone(),
    })
}

/// Rows of a matrix as headerless CSV.
pub fn write_matrix_csv<W: Write>(out: W, m: &Matrix) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(f64::to_string)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub const TRAJECTORY_HEADER: [&str; 5] = ["t", "re_c1", "im_c1", "static_sum", "expectation"];

pub fn write_trajectory_csv<W: Write>(out: W, samples: &[TrajectorySample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    for s in samples {
        w.write_record([s.t, s.re_c1, s.im_c1, s.static_sum, s.expectation].map(|x| (x + 0.0).to_string()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub const STATES_HEADER: [&str; 5] = ["index", "a", "dissimilar", "first_perturbed", "swap_perturbed"];

/// A random state with its dissimilar partner and two excitations, one row per dimension.
#[derive(Debug, Clone, Serialize)]
pub struct StatesTable {
    pub a: Vec<f64>,
    pub dissimilar: Vec<f64>,
    pub first_perturbed: Vec<f64>,
    /// Dimension flipped by the smallest perturbation.
    pub first_dim: usize,
    pub swap_perturbed: Vec<f64>,
    /// The two smallest-magnitude dimensions, exchanged by the swap excitation.
    pub swap_dims: (usize, usize),
}

pub fn states_table(dim: usize, seed: u64) -> Result<StatesTable> {
    let a = SyntheticSource::new(seed).unit_vector(dim)?;
    let first = smallest_perturbation(&a)?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| a.as_slice()[x].abs().total_cmp(&a.as_slice()[y].abs()).then(x.cmp(&y)));
    let (i, j) = (order[0].min(order[1]), order[0].max(order[1]));
    let swap = crate::perturbation::solve_two_dim(&a, i, j, 1.0, 1.0)?;
    Ok(StatesTable {
        dissimilar: a.negated().to_vec(),
        first_perturbed: first.perturbed.to_vec(),
        first_dim: first.profile.active_dims[0],
        swap_perturbed: swap.perturbed.to_vec(),
        swap_dims: (i, j),
        a: a.to_vec(),
    })
}

pub fn write_states_csv<W: Write>(out: W, t: &StatesTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STATES_HEADER).map_err(csv_err)?;
    for k in 0..t.a.len() {
        w.write_record([
            k.to_string(),
            t.a[k].to_string(),
            t.dissimilar[k].to_string(),
            t.first_perturbed[k].to_string(),
            t.swap_perturbed[k].to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub subject: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub config: RunConfig,
    pub vectors: usize,
    pub renormalized: usize,
    pub total: usize,
    pub failed: usize,
    /// Non-physical configurations that were skipped rather than checked.
    pub skipped: Vec<String>,
    pub checks: Vec<Check>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &'static str, subject: impl Into<String>, value: f64, tolerance: f64) {
        self.0.push(Check {
            name,
            subject: subject.into(),
            value,
            tolerance,
            passed: value.is_finite() && value <= tolerance,
        });
    }
}

/// Runs the invariant suite over every vector, every ordered pair and every
/// consecutive triple (in file order).
pub fn verify_vectors(config: &RunConfig, vectors: &[EmbeddingVector], renormalized: usize) -> Result<VerifySummary> {
    let mut checks = Checks(Vec::new());
    let mut skipped = Vec::new();
    let tol = config.constraint_tol;
    let sim_tol = 1e-12 + 2.5 * config.norm_tol;
    let name = |k: usize| vectors[k].id().map_or_else(|| format!("#{k}"), str::to_string);

    for (k, a) in vectors.iter().enumerate() {
        let id = name(k);
        checks.push("unit_norm", &id, (a.norm() - 1.0).abs(), config.norm_tol);
        checks.push(
            "self_similarity",
            &id,
            (cosine_similarity(a, a)?.value() - 1.0).abs(),
            sim_tol,
        );
        checks.push(
            "dissimilar_similarity",
            &id,
            (cosine_similarity(a, &a.negated())?.value() + 1.0).abs(),
            sim_tol,
        );

        let first = smallest_perturbation(a)?;
        let brute = dot(a.as_slice(), first.perturbed.as_slice());
        checks.push("smallest_perturbation", &id, (brute - first.similarity.value()).abs(), sim_tol);
        let dim = first.profile.active_dims[0];
        let h1 = first_perturbation_matrix(dim, a.dim())?;
        let p = ParityOperator::flipping(&[dim], a.dim())?;
        checks.push("parity_invariance", &id, expectation_shift(&p, &h1, a)?.abs(), 0.0);

        let ones = vec![1.0; a.dim()];
        match general_similarity(a, &ones) {
            Ok(r) => {
                let raw: Vec<f64> = a.as_slice().iter().zip(&r.profile.delta).map(|(x, d)| -x + d).collect();
                checks.push(
                    "general_similarity",
                    &id,
                    (dot(a.as_slice(), &raw) - r.similarity.value()).abs(),
                    tol,
                );
                checks.push("general_norm", &id, (norm(&raw) - 1.0).abs(), tol);
                let h = build_rank_one(&ones)?;
                checks.push(
                    "rank_one_consistency",
                    &id,
                    (h.expectation(a.as_slice())? - r.transformed().value()).abs(),
                    1e-12,
                );
            }
            Err(Error::NonPhysicalConfiguration { .. }) => skipped.push(format!("general_similarity:{id}")),
            Err(e) => return Err(e),
        }
    }

    for (x, a) in vectors.iter().enumerate() {
        for (y, b) in vectors.iter().enumerate() {
            if x == y {
                continue;
            }
            let subject = format!("{}->{}", name(x), name(y));
            let h = householder_transition(a, b)?;
            let ha = h.apply_raw(a.as_slice())?;
            checks.push("householder_maps", &subject, max_abs_diff(&ha, b.as_slice()), tol);
            let back = h.apply_raw(&ha)?;
            checks.push("householder_involution", &subject, max_abs_diff(&back, a.as_slice()), tol);
            checks.push("constraint", &subject, (hamiltonian_constraint(&h, a)? - 1.0).abs(), tol);
        }
    }

    for w in 0..vectors.len().saturating_sub(2) {
        let subject = format!("{}->{}->{}", name(w), name(w + 1), name(w + 2));
        let r = run_indirect_experiment(&vectors[w], &vectors[w + 1], &vectors[w + 2])?;
        checks.push("indirect_discrepancy", &subject, r.discrepancy, tol);
    }

    let checks = checks.0;
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifySummary {
        config: config.clone(),
        vectors: vectors.len(),
        renormalized,
        total: checks.len(),
        failed,
        skipped,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transition_same_state() {
        let a = EmbeddingVector::normalize(&[0.6, 0.8]).unwrap().with_id("a");
        let r = transition_report(&RunConfig::default(), (&a, &a, &a)).unwrap();
        assert!(r.passed);
        assert_eq!(r.report.direct_similarity.value(), 1.0);
        assert_eq!(r.report.indirect_similarity.value(), 1.0);
        assert_eq!(r.from, "a");
    }

    #[test]
    fn synthetic_transition_passes() {
        let [a, b, c] = synthetic_triple(16, 42).unwrap();
        let r = transition_report(&RunConfig::default(), (&a, &b, &c)).unwrap();
        assert!(r.passed);
        assert!(r.report.discrepancy <= 1e-10);
    }

    #[test]
    fn perturb_modes() {
        let cfg = RunConfig::default();
        let a = EmbeddingVector::normalize(&[0.6, 0.8]).unwrap().with_id("a");
        let r = perturb_report(&cfg, &a, None).unwrap();
        assert_eq!(r.mode, "smallest");
        assert_eq!(r.argmin_dim, Some(0));
        assert!((r.similarity + 0.28).abs() < 1e-15);
        assert!(r.norm_ok && r.agreement_ok);

        let r = perturb_report(&cfg, &a, Some(&[1.0, 1.0])).unwrap();
        assert!((r.similarity - 0.96).abs() < 1e-15);
        assert!((r.direct_dot - 0.96).abs() < 1e-15);

        let err = perturb_report(&cfg, &a, Some(&[0.8, -0.6])).unwrap_err();
        assert_eq!(err.exit_code(), 3);

        let strict = RunConfig {
            strict_multipliers: true,
            ..cfg
        };
        assert!(matches!(
            perturb_report(&strict, &a, Some(&[1.0, 0.5])),
            Err(Error::MultiplierConvention { .. })
        ));
    }

    #[test]
    fn spectrum_residuals() {
        let r = spectrum_report(&RunConfig::default(), &[3.0, 4.0, 0.0]).unwrap();
        assert!((r.trace - 1.0).abs() < 1e-15);
        assert_eq!(r.eigenvalues, vec![1.0, 0.0, 0.0]);
        assert!(r.orthogonality_residual < 1e-14);
        assert!(r.diagonalization_residual < 1e-14);
        assert!(r.projector_residual < 1e-15);
        assert!(r.complement_residual < 1e-14);
        assert!((r.x1[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn states_columns() {
        let t = states_table(16, 1).unwrap();
        let (i, j) = t.swap_dims;
        assert!((t.swap_perturbed[i] - t.a[j]).abs() < 1e-15);
        assert_eq!(t.first_perturbed[t.first_dim], t.a[t.first_dim]);
        let mut buf = Vec::new();
        write_states_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("index,a,dissimilar,first_perturbed,swap_perturbed\n"));
    }

    #[test]
    fn verify_synthetic_vectors() {
        let mut src = SyntheticSource::new(3);
        let vs: Vec<_> = (0..4).map(|k| src.unit_vector(32).unwrap().with_id(format!("v{k}"))).collect();
        let s = verify_vectors(&RunConfig::default(), &vs, 0).unwrap();
        assert!(s.passed(), "{:?}", s.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert!(s.total > 30);
    }
}
