//! Command-line front end. Run `fermisim --help` for the subcommands.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use fermisim::apps::{
    build_hubbard, count_two_qubit_gates, filling_sector, hartree_fock_energy, krylov_diagonalize,
    parse_fcidump, parse_filling, trotter_error_experiment, CircuitPlan, HubbardSpec, KrylovConfig,
    KrylovEvolution,
};
use fermisim::gates::OrbitalRotationSpec;
use fermisim::linalg::CMatrix;
use fermisim::operators::{df_from_molecular, lowest_eigenpair, SectorOperator, DEFAULT_DF_TOL};
use fermisim::sampling::{sample_slater, sample_state_vector, Configuration, SlaterSpec};
use fermisim::sector::sector_dimension;
use fermisim::trotter::TrotterHamiltonian;
use fermisim::{Error, Result, SectorShape, StateVector};

#[derive(Parser)]
#[command(name = "fermisim", version, about = "Fermionic state-vector simulation experiments")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FERMISIM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trotter error against exact evolution on a Hubbard lattice.
    TrotterError {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// Electrons per spin orbital, as a fraction (`1/4`) or decimal.
        #[arg(long)]
        filling: String,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        orders: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        steps: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        n_vectors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        t_hop: f64,
        #[arg(long, default_value_t = 8.0)]
        u_int: f64,
        /// Open boundaries in x.
        #[arg(long)]
        open_x: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Krylov diagonalization from the Hartree-Fock configuration.
    Kqd {
        #[arg(long, conflicts_with = "hubbard", required_unless_present = "hubbard")]
        fcidump: Option<PathBuf>,
        /// Lattice as `NXxNY`.
        #[arg(long)]
        hubbard: Option<String>,
        /// Required with `--hubbard`.
        #[arg(long)]
        filling: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t_hop: f64,
        #[arg(long, default_value_t = 8.0)]
        u_int: f64,
        #[arg(long)]
        open_x: bool,
        #[arg(long, default_value_t = 0.3)]
        dt: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Evolve::Exact)]
        evolve: Evolve,
        #[arg(long, default_value_t = 1)]
        trotter_order: usize,
        #[arg(long, default_value_t = 1)]
        trotter_steps: usize,
        #[arg(long, default_value_t = fermisim::apps::DEFAULT_OVERLAP_THRESHOLD)]
        threshold: f64,
        /// Seed of the Lanczos start vector for the reference ground energy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample configurations, one `beta/alpha` line per shot.
    Sample {
        #[arg(long, conflicts_with = "slater", required_unless_present = "slater")]
        statevector: Option<PathBuf>,
        /// JSON Slater determinant spec.
        #[arg(long)]
        slater: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-qubit gate count of a JSON circuit plan.
    GateCount {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Summary of an FCIDUMP file.
    FcidumpInfo { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Evolve {
    Exact,
    Trotter,
}

/// Slater spec file: `{"norb", "alpha", "beta", "u_alpha", "u_beta"?}`.
/// Matrix entries are numbers or `[re, im]` pairs.
#[derive(Deserialize)]
struct SlaterFile {
    norb: usize,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    u_alpha: Vec<Vec<Entry>>,
    #[serde(default)]
    u_beta: Option<Vec<Vec<Entry>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

fn to_matrix(rows: &[Vec<Entry>], n: usize) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("rotation must be {n} x {n}")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Real(x) => Complex64::new(x, 0.0),
        Entry::Complex([re, im]) => Complex64::new(re, im),
    }))
}

fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_csv<T: serde::Serialize>(rows: &[T], out: &Option<PathBuf>) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(out)?);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_lattice(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Contract(format!("lattice {text:?} must look like 4x2"));
    let (a, b) = text.to_ascii_lowercase().split_once('x').map(|(a, b)| (a.to_string(), b.to_string())).ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

#[derive(serde::Serialize)]
struct KqdRow {
    dim: usize,
    energy: f64,
    kept: usize,
    exact_energy: f64,
    error: f64,
}

fn print_samples(samples: &[Configuration], norb: usize) -> Result<()> {
    let mut out = BufWriter::new(io::stdout().lock());
    for c in samples {
        writeln!(out, "{}", c.to_bitstrings(norb))?;
    }
    out.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::TrotterError { nx, ny, filling, time, orders, steps, n_vectors, seed, t_hop, u_int, open_x, out } => {
            let spec = HubbardSpec { nx, ny, t_hop, u_int, periodic_x: !open_x };
            let ham = build_hubbard(&spec)?;
            let shape = filling_sector(spec.norb(), parse_filling(&filling)?)?;
            let records = trotter_error_experiment(&ham, shape, time, &orders, &steps, n_vectors, seed)?;
            write_csv(&records, &out)
        }
        Command::Kqd {
            fcidump, hubbard, filling, t_hop, u_int, open_x, dt, dim, evolve, trotter_order, trotter_steps,
            threshold, seed, out,
        } => {
            let evolve = match evolve {
                Evolve::Exact => KrylovEvolution::Exact,
                Evolve::Trotter => KrylovEvolution::Trotter { order: trotter_order, n_steps: trotter_steps },
            };
            let config = KrylovConfig { dim, dt, evolve, threshold };
            let (op, trotter, shape): (Box<dyn SectorOperator>, Box<dyn TrotterHamiltonian>, SectorShape) =
                if let Some(path) = fcidump {
                    let dump = parse_fcidump(BufReader::new(File::open(path)?))?;
                    let shape = match &filling {
                        Some(f) => filling_sector(dump.norb(), parse_filling(f)?)?,
                        None => dump.sector()?,
                    };
                    let df = df_from_molecular(&dump.hamiltonian, DEFAULT_DF_TOL, None)?;
                    (Box::new(dump.hamiltonian), Box::new(df), shape)
                } else {
                    let (nx, ny) = parse_lattice(hubbard.as_deref().unwrap_or_default())?;
                    let filling = filling.ok_or_else(|| Error::Contract("--hubbard needs --filling".into()))?;
                    let spec = HubbardSpec { nx, ny, t_hop, u_int, periodic_x: !open_x };
                    let ham = build_hubbard(&spec)?;
                    let shape = filling_sector(spec.norb(), parse_filling(&filling)?)?;
                    (Box::new(ham.clone()), Box::new(ham), shape)
                };
            let reference = StateVector::hartree_fock(shape)?;
            let estimates = krylov_diagonalize(op.as_ref(), Some(trotter.as_ref()), &reference, &config)?;
            let (exact, _) = lowest_eigenpair(op.as_ref(), shape, 1e-12, seed)?;
            let rows: Vec<KqdRow> = estimates
                .iter()
                .map(|e| KqdRow { dim: e.dim, energy: e.energy, kept: e.kept, exact_energy: exact, error: e.energy - exact })
                .collect();
            write_csv(&rows, &out)
        }
        Command::Sample { statevector, slater, shots, seed } => {
            if let Some(path) = statevector {
                let vec = StateVector::read_from(BufReader::new(File::open(path)?))?;
                print_samples(&sample_state_vector(&vec, shots, seed)?, vec.norb())
            } else {
                let file: SlaterFile = serde_json::from_str(&read_text(slater.as_ref().unwrap())?)?;
                let u_alpha = to_matrix(&file.u_alpha, file.norb)?;
                let u_beta = match &file.u_beta {
                    Some(rows) => to_matrix(rows, file.norb)?,
                    None => u_alpha.clone(),
                };
                let spec = SlaterSpec::new(file.norb, file.alpha, file.beta, OrbitalRotationSpec { u_alpha, u_beta })?;
                print_samples(&sample_slater(&spec, shots, seed)?, file.norb)
            }
        }
        Command::GateCount { plan } => {
            let plan = CircuitPlan::from_json(&read_text(&plan)?)?;
            println!("{}", count_two_qubit_gates(&plan)?);
            Ok(())
        }
        Command::FcidumpInfo { file } => {
            let dump = parse_fcidump(BufReader::new(File::open(file)?))?;
            let ham = &dump.hamiltonian;
            let shape = dump.sector()?;
            let (da, db) = sector_dimension(&shape)?;
            let dim = da as u128 * db as u128;
            let one_body = ham.one_body.iter().filter(|z| z.norm() != 0.0).count();
            let two_body = ham.two_body.data().iter().filter(|z| z.norm() != 0.0).count();
            println!("norb: {}", dump.norb());
            println!("nelec: {}", dump.nelec);
            println!("ms2: {}", dump.ms2);
            println!("sector: ({}, {}, {})", shape.norb, shape.nalpha, shape.nbeta);
            println!("dimension: {da} x {db} = {dim}");
            println!("state_vector_bytes: {}", dim * 16);
            println!("constant: {}", ham.constant);
            println!("nonzero_one_body: {one_body}");
            println!("nonzero_two_body: {two_body}");
            println!("hartree_fock_energy: {}", hartree_fock_energy(ham, shape.nalpha, shape.nbeta));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
