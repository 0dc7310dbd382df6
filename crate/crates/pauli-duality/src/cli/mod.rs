//! Command-line front end.

pub mod oracle;
pub mod regress;

use crate::gibbs_sampler::{self, Beta, FreeSpins, SamplerOptions};
use crate::lindblad_verify::{self, ConjugationReport};
use crate::models::{self, ModelName};
use crate::pauli_core::{io, CliffordCircuit, PauliError};
use crate::structure::{self, StructureError, StructureOptions};
use crate::toric_explicit;
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_VAR: &str = "PAULI_DUALITY_THREADS";

#[derive(Parser, Debug)]
#[command(name = "pauli-duality", version, about = "Clifford dualities for commuting Pauli Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a lattice model as a Hamiltonian file.
    Gen {
        #[arg(long)]
        model: ModelName,
        #[arg(long = "L")]
        l: usize,
        /// Lines of `<term-label> <coupling>`.
        #[arg(long)]
        couplings: Option<PathBuf>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Find a circuit that maps a Hamiltonian to a classical one.
    Dualize {
        #[arg(short)]
        i: PathBuf,
        /// Circuit output.
        #[arg(short)]
        o: Option<PathBuf>,
        /// Dual Hamiltonian output.
        #[arg(long = "o2")]
        o2: Option<PathBuf>,
        #[arg(long)]
        skip_gauss: bool,
    },
    /// Classify the components of a Hamiltonian's classical dual.
    Classify {
        #[arg(short)]
        i: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Closed-form toric-code circuit.
    ToricExplicit {
        #[arg(long = "L")]
        l: usize,
        #[arg(short)]
        o: Option<PathBuf>,
        /// Check the dual's structure and compare with the generic pipeline.
        #[arg(long)]
        validate: bool,
    },
    /// Sample Gibbs-state preparations.
    Sample {
        #[arg(long)]
        model: ModelName,
        #[arg(long = "L")]
        l: usize,
        /// Inverse temperature, or `inf`.
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 1)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        couplings: Option<PathBuf>,
        /// Pin the free spins, e.g. `+-`.
        #[arg(long)]
        free: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        glauber_beta_max: f64,
        #[arg(long)]
        sweeps: Option<usize>,
        /// Samples output (JSON lines).
        #[arg(short)]
        o: Option<PathBuf>,
        /// Preparation circuit output.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Check that conjugating random generators preserves their invariants.
    LindbladVerify {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Random states per generator.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Random generators.
        #[arg(long, default_value_t = 50)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Compare dual structures with the expected table.
    Regress {
        /// JSON list of expectations; the built-in suite when absent.
        #[arg(long)]
        suite: Option<PathBuf>,
        #[arg(long)]
        full_scale: bool,
        /// Records output (JSON lines).
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Dense isospectrality and Gibbs-state checks on a small instance.
    Oracle {
        #[arg(long)]
        model: ModelName,
        #[arg(long = "L")]
        l: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(schema: &str, seed: Option<u64>, body: &T) -> Result<String> {
    let v = json!({
        "schema": schema,
        "version": VERSION,
        "seed": seed,
        "body": body,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn is_noncommuting(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<PauliError>(),
            Some(PauliError::NonCommutingTerms(..))
        ) || matches!(
            c.downcast_ref::<StructureError>(),
            Some(StructureError::Pauli(PauliError::NonCommutingTerms(..)))
        )
    })
}

/// Cap the global pool from the environment; later calls are ignored.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Accept `-o2` as spelled in usage docs.
fn normalize_args<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    args.into_iter()
        .map(|a| if a == "-o2" { "--o2".to_string() } else { a })
        .collect()
}

/// Parse and run; returns the process exit code.
pub fn main_with<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 64 } else { 0 };
        }
    };
    configure_threads();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_noncommuting(&e) {
                2
            } else {
                1
            }
        }
    }
}

pub fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Gen {
            model,
            l,
            couplings,
            o,
        } => {
            let cmap = match couplings {
                Some(p) => Some(models::parse_couplings(&read(&p)?)?),
                None => None,
            };
            let m = models::generate(model, l, cmap.as_ref())?;
            emit(o.as_deref(), &io::write_hamiltonian(&m.tableau()?))?;
            Ok(0)
        }
        Command::Dualize {
            i,
            o,
            o2,
            skip_gauss,
        } => {
            let t = io::parse_hamiltonian(&read(&i)?)?;
            let opts = StructureOptions {
                skip_gauss,
                ..StructureOptions::default()
            };
            let d = structure::dualize(&t, None, &opts)?;
            emit(o.as_deref(), &io::write_circuit(&d.circuit))?;
            if let Some(p) = o2 {
                emit(Some(&p), &io::write_hamiltonian(&d.dual))?;
            }
            Ok(0)
        }
        Command::Classify { i, report } => {
            let t = io::parse_hamiltonian(&read(&i)?)?;
            let opts = StructureOptions::default();
            let d = if t.is_diagonal() {
                structure::analyze(&t, CliffordCircuit::new(t.n()), t.clone(), t.clone(), None, &opts)?
            } else {
                structure::dualize(&t, None, &opts)?
            };
            emit(
                report.as_deref(),
                &to_json("pauli-duality/classify/1", None, &d.report)?,
            )?;
            Ok(0)
        }
        Command::ToricExplicit { l, o, validate } => {
            let c = toric_explicit::build_circuit(l)?;
            emit(o.as_deref(), &io::write_circuit(&c))?;
            if validate {
                let (_, _, r) = toric_explicit::explicit_report(l)?;
                if !toric_explicit::is_two_chains(&r, l) {
                    bail!(
                        "explicit dual is not two chains: {:?}",
                        toric_explicit::non_chain_classes(&r)
                    );
                }
                toric_explicit::cross_validate(l)?;
                let counts = c.counts();
                eprintln!(
                    "L={l}: two chains of length {}, 2 free spins, cx {} h {}, matches generic pipeline",
                    l * l - 1,
                    counts.cx,
                    counts.h
                );
            }
            Ok(0)
        }
        Command::Sample {
            model,
            l,
            beta,
            shots,
            seed,
            couplings,
            free,
            glauber_beta_max,
            sweeps,
            o,
            circuit,
        } => {
            let cmap = match couplings {
                Some(p) => Some(models::parse_couplings(&read(&p)?)?),
                None => None,
            };
            let m = models::generate(model, l, cmap.as_ref())?;
            let beta = Beta::<f64>::parse(&beta)?;
            let free = match free {
                None => FreeSpins::Random,
                Some(s) => FreeSpins::Fixed(parse_signs(&s)?),
            };
            let opts = SamplerOptions {
                free,
                glauber_beta_max,
                glauber_sweeps: sweeps,
            };
            let prep = gibbs_sampler::prepare_gibbs(&m, beta, shots, seed, &opts)?;
            if let Some(p) = circuit {
                emit(Some(&p), &io::write_circuit(&prep.preparation))?;
            }
            let mut out = String::new();
            for (k, s) in prep.shots.iter().enumerate() {
                let rec = json!({
                    "shot": k,
                    "seed": seed,
                    "config": format_signs(&s.config),
                    "energy": s.energy,
                    "component_energies": s.component_energies,
                    "approximate": s.approximate,
                });
                out.push_str(&serde_json::to_string(&rec)?);
                out.push('\n');
            }
            emit(o.as_deref(), &out)?;
            Ok(0)
        }
        Command::LindbladVerify {
            dim,
            trials,
            instances,
            seed,
            o,
        } => {
            let reports = lindblad_instances(dim, trials, instances, seed)?;
            let pass = reports.iter().all(|r| r.pass);
            let worst = worst_deviations(&reports);
            let body = json!({ "pass": pass, "max_deviation": worst, "instances": reports });
            emit(o.as_deref(), &to_json("pauli-duality/lindblad/1", Some(seed), &body)?)?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Regress {
            suite,
            full_scale,
            o,
        } => {
            let suite = match suite {
                Some(p) => serde_json::from_str(&read(&p)?).context("parsing suite")?,
                None => regress::default_suite(full_scale),
            };
            let records = regress::run_regression(&suite);
            let mut lines = String::new();
            for r in &records {
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            match o {
                Some(p) => {
                    emit(Some(&p), &lines)?;
                    print!("{}", regress::summary(&records));
                }
                None => {
                    print!("{lines}");
                    eprint!("{}", regress::summary(&records));
                }
            }
            Ok(if records.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Oracle { model, l, o } => {
            let r = oracle::verify_oracle(model, l)?;
            emit(o.as_deref(), &to_json("pauli-duality/oracle/1", None, &r)?)?;
            Ok(if r.pass { 0 } else { 1 })
        }
    }
}

/// `+`/`-` string to spins.
pub fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => bail!("expected '+' or '-', got {c:?}"),
        })
        .collect()
}

pub fn format_signs(x: &[i8]) -> String {
    x.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
}

/// Random primitive generators with random unitaries; instance `k` draws
/// from stream `k` of the seed.
pub fn lindblad_instances(dim: usize, trials: usize, instances: usize, seed: u64) -> Result<Vec<ConjugationReport>> {
    (0..instances as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let g = lindblad_verify::random_primitive_generator::<f64>(dim, &mut rng)?;
            let u = lindblad_verify::random_unitary::<f64>(dim, &mut rng);
            Ok(lindblad_verify::verify_conjugation(&g, &u, trials, &mut rng)?)
        })
        .collect()
}

/// Largest deviation per check over all reports.
pub fn worst_deviations(reports: &[ConjugationReport]) -> serde_json::Map<String, serde_json::Value> {
    let mut out = serde_json::Map::new();
    for r in reports {
        for (name, v) in r.checks() {
            let cur = out.get(name).and_then(|x| x.as_f64()).unwrap_or(0.0);
            out.insert(name.to_string(), json!(cur.max(v)));
        }
    }
    out
}
