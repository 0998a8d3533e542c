use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semham::io::parse_multipliers;
use semham::report::{self, VerifySummary};
use semham::synthetic::SyntheticSource;
use semham::{
    build_rank_one, diagonalize, load_embeddings, trajectory, EmbeddingVector, Error, QuantumState, Result, RunConfig,
};

#[derive(Parser, Debug)]
#[command(name = "semham", version, about = "Hamiltonian analysis of unit-norm embedding vectors")]
struct Cli {
    /// Constraint tolerance; overrides SEMHAM_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the report or CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the invariant suite over every vector, pair and consecutive triple in a file.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare the direct similarity with the two-step Householder path from -> via -> to.
    Transition {
        #[command(flatten)]
        source: Source,
        #[arg(long, requires = "input")]
        from: Option<String>,
        #[arg(long, requires = "input")]
        via: Option<String>,
        #[arg(long, requires = "input")]
        to: Option<String>,
    },
    /// Perturb a state away from its dissimilar partner.
    ///
    /// Without --v the smallest single-dimension perturbation is used.
    Perturb {
        #[command(flatten)]
        source: Source,
        #[arg(long, requires = "input")]
        id: Option<String>,
        /// Multipliers, dense "1,1,0" or sparse "0:1,5:-1".
        #[arg(long)]
        v: Option<String>,
        /// Reject multipliers outside {0, ±1, ±2, ...}.
        #[arg(long)]
        strict: bool,
    },
    /// Eigen-decomposition of the rank-1 Hamiltonian built from --v.
    Spectrum {
        #[arg(long)]
        v: String,
        /// Required for sparse --v.
        #[arg(long)]
        dim: Option<usize>,
        /// Also dump the matrix and eigenbasis as CSV next to --out.
        #[arg(long, requires = "out")]
        matrices: bool,
    },
    /// Trajectory of the eigenbasis coefficients as CSV.
    Evolve {
        #[command(flatten)]
        source: Source,
        #[arg(long, requires = "input")]
        id: Option<String>,
        /// Multipliers defining the Hamiltonian; defaults to all ones.
        #[arg(long)]
        v: Option<String>,
        /// Eigenbasis amplitudes given directly (rank-1 spectrum), instead of a state.
        #[arg(long, conflicts_with_all = ["input", "synthetic", "v"])]
        amplitudes: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 20.0)]
        t1: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// A random state with its dissimilar and perturbed partners as CSV columns.
    States {
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// A semham-emb/1 file.
    #[arg(long, conflicts_with = "synthetic")]
    input: Option<PathBuf>,
    /// Use seeded random unit vectors instead of a file.
    #[arg(long)]
    synthetic: bool,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("semham: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn config(cli: &Cli, seed: u64, hbar: f64) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_env()?;
    if let Some(tol) = cli.tol {
        cfg.constraint_tol = tol;
    }
    cfg.seed = seed;
    cfg.hbar = hbar;
    cfg.output_path = cli.out.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn missing(flag: &str) -> Error {
    Error::BadRange(format!("{flag} is required unless --synthetic is given"))
}

/// One state by id from the file, or the first synthetic vector.
fn single_state(source: &Source, cfg: &RunConfig, id: Option<&str>) -> Result<EmbeddingVector> {
    match &source.input {
        Some(path) => {
            let loaded = load_embeddings(path, cfg)?;
            loaded.get(id.ok_or_else(|| missing("--id"))?).cloned()
        }
        None if source.synthetic => Ok(SyntheticSource::new(source.seed).unit_vector(source.dim)?.with_id("s1")),
        None => Err(missing("--input")),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Verify { input } => {
            let cfg = config(&cli, 0, 1.0)?;
            let loaded = load_embeddings(input, &cfg)?;
            let summary = report::verify_vectors(&cfg, &loaded.vectors, loaded.renormalized)?;
            emit_json(out, &summary)?;
            print_failures(&summary);
            Ok(summary.passed())
        }
        Command::Transition { source, from, via, to } => {
            let cfg = config(&cli, source.seed, 1.0)?;
            let r = match &source.input {
                Some(path) => {
                    let loaded = load_embeddings(path, &cfg)?;
                    let pick = |id: &Option<String>, flag| loaded.get(id.as_deref().ok_or_else(|| missing(flag))?);
                    report::transition_report(&cfg, (pick(from, "--from")?, pick(via, "--via")?, pick(to, "--to")?))?
                }
                None if source.synthetic => {
                    let [a, b, c] = report::synthetic_triple(source.dim, source.seed)?;
                    report::transition_report(&cfg, (&a, &b, &c))?
                }
                None => return Err(missing("--input")),
            };
            emit_json(out, &r)?;
            Ok(r.passed)
        }
        Command::Perturb { source, id, v, strict } => {
            let mut cfg = config(&cli, source.seed, 1.0)?;
            cfg.strict_multipliers = *strict;
            let a = single_state(source, &cfg, id.as_deref())?;
            let v = v.as_deref().map(|s| parse_multipliers(s, Some(a.dim()))).transpose()?;
            let r = report::perturb_report(&cfg, &a, v.as_deref())?;
            emit_json(out, &r)?;
            Ok(r.norm_ok && r.agreement_ok)
        }
        Command::Spectrum { v, dim, matrices } => {
            let cfg = config(&cli, 0, 1.0)?;
            let v = parse_multipliers(v, *dim)?;
            let r = report::spectrum_report(&cfg, &v)?;
            emit_json(out, &r)?;
            if let (true, Some(path)) = (*matrices, out) {
                report::write_matrix_csv(output(Some(&path.with_extension("matrix.csv")))?, &r.matrix)?;
                report::write_matrix_csv(output(Some(&path.with_extension("basis.csv")))?, &r.basis)?;
            }
            Ok(true)
        }
        Command::Evolve {
            source,
            id,
            v,
            amplitudes,
            hbar,
            t0,
            t1,
            steps,
        } => {
            let cfg = config(&cli, source.seed, *hbar)?;
            let state = match amplitudes {
                Some(spec) => QuantumState::rank_one(parse_multipliers(spec, None)?, cfg.hbar)?,
                None => {
                    let a = single_state(source, &cfg, id.as_deref())?;
                    let v = match v {
                        Some(s) => parse_multipliers(s, Some(a.dim()))?,
                        None => vec![1.0; a.dim()],
                    };
                    let dec = diagonalize(&build_rank_one(&v)?);
                    QuantumState::from_decomposition(&a, &dec, cfg.hbar)?
                }
            };
            let samples = trajectory(&state, *t0, *t1, *steps)?;
            report::write_trajectory_csv(output(out)?, &samples)?;
            Ok(true)
        }
        Command::States { dim, seed } => {
            let table = report::states_table(*dim, *seed)?;
            report::write_states_csv(output(out)?, &table)?;
            Ok(true)
        }
    }
}

fn print_failures(summary: &VerifySummary) {
    for c in summary.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {} {}: {:e} > {:e}", c.name, c.subject, c.value, c.tolerance);
    }
    eprintln!(
        "{} vectors, {} checks, {} failed, {} skipped",
        summary.vectors,
        summary.total,
        summary.failed,
        summary.skipped.len()
    );
}
