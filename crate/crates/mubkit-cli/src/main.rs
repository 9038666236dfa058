//! Command-line front door for mubkit: construct, verify, search, and
//! convert MUB / error-basis / orthogonal-decomposition artifacts.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mubkit::classes::{partition_search, standard_partition};
use mubkit::error_bases::{composite_basis, pauli_basis};
use mubkit::finite::{mols_from_field, net_parallel_classes};
use mubkit::io;
use mubkit::lie::{
    cartans_to_mubs, is_cartan, is_dagger_closed, mubs_to_cartans, verify_od,
    OrthogonalDecomposition,
};
use mubkit::mub::{is_monomial_collection, latin_mubs, matching_score, mubs_from_classes};
use mubkit::num_complex::Complex64;
use mubkit::{DenseMatrix, Error};

/// The n x n Fourier matrix with entries `omega_n^{jk}` (unscaled).
fn fourier(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |r, c| {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ((r * c) % n) as f64 / n as f64)
    })
}

#[derive(Parser)]
#[command(name = "mubkit", version, about = "Mutually unbiased bases, nice error bases, and orthogonal decompositions of sl_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a verified artifact and write it as JSON.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[command(flatten)]
        params: Params,
        /// Output path for the artifact.
        #[arg(long)]
        out: PathBuf,
        /// Write the artifact without verifying it first.
        #[arg(long)]
        no_verify: bool,
    },
    /// Verify an artifact file; exit 0 on pass, 1 on failure.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        /// Artifact file to verify.
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exhaustive searches.
    Search {
        #[command(subcommand)]
        what: SearchCommand,
    },
    /// Convert between the MUB picture and the Lie-algebra picture.
    Convert {
        #[arg(value_enum)]
        direction: ConvertKind,
        /// Input artifact.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// For mubs-to-od: convert back and require basis-wise agreement.
        #[arg(long)]
        roundtrip_check: bool,
    },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Largest family of commuting classes of the Z_n x Z_n Weyl-Heisenberg
    /// basis with pairwise trivial intersections.
    Partition {
        #[arg(long)]
        n: usize,
        /// Time cap in seconds; on expiry the best family so far is
        /// reported with exhausted = false.
        #[arg(long, default_value_t = 60)]
        time_cap: u64,
        /// Write the witness partition here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    PauliBasis,
    CompositeBasis,
    StandardMubs,
    LatinMubs,
    StandardOd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Ueb,
    Nice,
    Classes,
    Mubs,
    Cartan,
    Od,
    Monomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertKind {
    MubsToOd,
    OdToMubs,
    ClassesToMubs,
}

#[derive(Args)]
struct Params {
    /// Prime p (pauli-basis, standard-mubs, standard-od).
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree e.
    #[arg(long)]
    e: Option<u32>,
    /// Dimension n (composite-basis).
    #[arg(long)]
    n: Option<usize>,
    /// Net order s (latin-mubs); n = s^2.
    #[arg(long)]
    s: Option<u64>,
    /// Hadamard ingredient for latin-mubs: "fourier" or a path to a matrix
    /// artifact.
    #[arg(long, default_value = "fourier")]
    hadamard: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    /// Exit 1: constructed or supplied object fails its defining checks.
    Verification(String),
    /// Exit 2: unusable parameters or input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPrime(_)
            | Error::NotPrimePower(_)
            | Error::SizeCap(_, _)
            | Error::InvalidInput(_)
            | Error::WrongCount { .. }
            | Error::NotIndexed
            | Error::DimensionMismatch(_, _, _, _) => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { kind, params, out, no_verify } => {
            construct(kind, &params, &out, no_verify)
        }
        Command::Verify { kind, file, tol } => verify(kind, &file, tol),
        Command::Search { what } => match what {
            SearchCommand::Partition { n, time_cap, out } => search_partition(n, time_cap, out),
        },
        Command::Convert { direction, input, out, seed, tol, roundtrip_check } => {
            convert(direction, &input, &out, seed, tol, roundtrip_check)
        }
    }
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required parameter {what}")))
}

fn construct(
    kind: ConstructKind,
    params: &Params,
    out: &Path,
    no_verify: bool,
) -> Result<(), Failure> {
    match kind {
        ConstructKind::PauliBasis => {
            let p = require(params.p, "--p")?;
            let e = params.e.unwrap_or(1);
            let basis = pauli_basis(p, e)?;
            if !no_verify {
                let report = basis.verify(params.tol);
                if !report.pass() {
                    return Err(Failure::Verification(report.to_string()));
                }
                let nice = basis.verify_nice()?;
                if !nice.pass() {
                    return Err(Failure::Verification(nice.to_string()));
                }
            }
            let file = io::error_basis_to_file(&basis);
            write_artifact(out, io::wrap("error-basis", &file)?)?;
            println!("wrote nice error basis for n = {} to {}", basis.dim(), out.display());
        }
        ConstructKind::CompositeBasis => {
            let n = require(params.n, "--n")?;
            let basis = composite_basis(n)?;
            if !no_verify {
                let report = basis.verify(params.tol);
                if !report.pass() {
                    return Err(Failure::Verification(report.to_string()));
                }
                let nice = basis.verify_nice()?;
                if !nice.pass() {
                    return Err(Failure::Verification(nice.to_string()));
                }
            }
            let file = io::error_basis_to_file(&basis);
            write_artifact(out, io::wrap("error-basis", &file)?)?;
            println!("wrote nice error basis for n = {n} to {}", out.display());
        }
        ConstructKind::StandardMubs => {
            let p = require(params.p, "--p")?;
            let e = params.e.unwrap_or(1);
            let partition = standard_partition(p, e)?;
            let mubs = mubs_from_classes(&partition, params.seed, params.tol)?;
            if !no_verify {
                let report = mubs.verify(params.tol);
                if !report.pass(params.tol) {
                    return Err(Failure::Verification(report.to_string()));
                }
            }
            let file = io::mubs_to_file(&mubs);
            write_artifact(out, io::wrap("mubs", &file)?)?;
            println!(
                "wrote {} mutually unbiased bases of C^{} to {}",
                mubs.len(),
                mubs.dim(),
                out.display()
            );
        }
        ConstructKind::LatinMubs => {
            let s = require(params.s, "--s")?;
            let mols = mols_from_field(s)?;
            let classes = net_parallel_classes(&mols)?;
            let hadamard = if params.hadamard == "fourier" {
                fourier(s as usize)
            } else {
                let env = io::read_envelope(&PathBuf::from(&params.hadamard))?;
                let dj: io::DenseJson = io::unwrap(&env, "matrix")?;
                dj.to_matrix()?
            };
            let mubs = latin_mubs(&classes, &hadamard, params.tol)?;
            if !no_verify {
                let report = mubs.verify(params.tol);
                if !report.pass(params.tol) {
                    return Err(Failure::Verification(report.to_string()));
                }
            }
            let file = io::mubs_to_file(&mubs);
            write_artifact(out, io::wrap("mubs", &file)?)?;
            println!(
                "wrote {} latin mutually unbiased bases of C^{} to {}",
                mubs.len(),
                mubs.dim(),
                out.display()
            );
        }
        ConstructKind::StandardOd => {
            let p = require(params.p, "--p")?;
            let e = params.e.unwrap_or(1);
            let partition = standard_partition(p, e)?;
            let cartan_bases = mubkit::classes::classes_to_cartan_bases(&partition, params.tol)?;
            let file = io::od_file_from_elements(partition.dim(), &cartan_bases);
            if !no_verify {
                let od = io::od_from_file(&file)?;
                let report = verify_od(&od, params.tol)?;
                if !report.pass() {
                    return Err(Failure::Verification(report.to_string()));
                }
            }
            write_artifact(out, io::wrap("od", &file)?)?;
            println!(
                "wrote standard orthogonal decomposition of sl_{} to {}",
                partition.dim(),
                out.display()
            );
        }
    }
    Ok(())
}

fn verify(kind: VerifyKind, path: &Path, tol: f64) -> Result<(), Failure> {
    let env = io::read_envelope(path)?;
    match kind {
        VerifyKind::Ueb => {
            let file: io::ErrorBasisFile = io::unwrap(&env, "error-basis")?;
            let basis = io::error_basis_from_file(&file)?;
            let report = basis.verify(tol);
            println!("{report}");
            if !report.pass() {
                return Err(Failure::Verification("unitary error basis checks failed".into()));
            }
        }
        VerifyKind::Nice => {
            let file: io::ErrorBasisFile = io::unwrap(&env, "error-basis")?;
            let basis = io::error_basis_from_file(&file)?;
            let report = basis.verify_nice()?;
            println!("{report}");
            if !report.pass() {
                return Err(Failure::Verification("nice error basis checks failed".into()));
            }
        }
        VerifyKind::Classes => {
            let file: io::PartitionFile = io::unwrap(&env, "partition")?;
            let partition = io::partition_from_file(&file)?;
            let report = partition.verify(None, tol);
            println!("{report}");
            if !report.pass() {
                return Err(Failure::Verification("class partition checks failed".into()));
            }
        }
        VerifyKind::Mubs => {
            let file: io::MubsFile = io::unwrap(&env, "mubs")?;
            let mubs = io::mubs_from_file(&file)?;
            let report = mubs.verify(tol);
            println!("{report}");
            if !report.pass(tol) {
                return Err(Failure::Verification("unbiasedness checks failed".into()));
            }
        }
        VerifyKind::Cartan => {
            let file: io::CartanFile = io::unwrap(&env, "cartan")?;
            let cartan = io::cartan_from_file(&file)?;
            let report = is_cartan(&cartan, tol)?;
            let closed = is_dagger_closed(&cartan, tol)?;
            println!("{report}; dagger-closed: {closed}");
            if !report.pass() {
                return Err(Failure::Verification("cartan subalgebra checks failed".into()));
            }
        }
        VerifyKind::Od => {
            let file: io::OdFile = io::unwrap(&env, "od")?;
            let od = io::od_from_file(&file)?;
            let report = verify_od(&od, tol)?;
            print!("{report}");
            if !report.pass() {
                return Err(Failure::Verification("orthogonal decomposition checks failed".into()));
            }
        }
        VerifyKind::Monomial => {
            let file: io::MubsFile = io::unwrap(&env, "mubs")?;
            let mubs = io::mubs_from_file(&file)?;
            let gate = mubs.verify(tol);
            if !gate.pass(tol) {
                println!("{gate}");
                return Err(Failure::Verification("collection is not a set of MUBs".into()));
            }
            let report = is_monomial_collection(&mubs, tol)?;
            for (i, j, group) in &report.pairs {
                match group {
                    Some(g) => println!("pair ({i},{j}): character table of {:?}", g.factors()),
                    None => println!("pair ({i},{j}): not a character table"),
                }
            }
            println!("monomial: {}", report.monomial);
            if !report.monomial {
                return Err(Failure::Verification("collection is not monomial".into()));
            }
        }
    }
    Ok(())
}

fn search_partition(n: usize, time_cap: u64, out: Option<PathBuf>) -> Result<(), Failure> {
    const SEARCH_DIM_CAP: usize = 12;
    if !(2..=SEARCH_DIM_CAP).contains(&n) {
        return Err(Failure::Usage(format!("--n must be in 2..={SEARCH_DIM_CAP}")));
    }
    let basis = composite_basis(n)?;
    let outcome = partition_search(&basis, Duration::from_secs(time_cap))?;
    println!(
        "n = {n}: mu = {}, exhausted = {}, nodes = {}, commuting subgroups = {}",
        outcome.mu, outcome.exhausted, outcome.nodes, outcome.subgroup_count
    );
    let report = outcome.witness.verify(Some(&basis), 1e-9);
    if !report.pass() {
        return Err(Failure::Verification(format!("witness failed re-verification: {report}")));
    }
    if let Some(path) = out {
        let file = io::partition_to_file(&outcome.witness);
        write_artifact(&path, io::wrap("partition", &file)?)?;
        println!("wrote witness partition to {}", path.display());
    }
    Ok(())
}

fn convert(
    direction: ConvertKind,
    input: &Path,
    out: &Path,
    seed: u64,
    tol: f64,
    roundtrip_check: bool,
) -> Result<(), Failure> {
    let env = io::read_envelope(input)?;
    match direction {
        ConvertKind::MubsToOd => {
            let file: io::MubsFile = io::unwrap(&env, "mubs")?;
            let mubs = io::mubs_from_file(&file)?;
            let cartans = mubs_to_cartans(&mubs, tol)?;
            let od = OrthogonalDecomposition::new(mubs.dim(), cartans.clone())?;
            if mubs.len() == mubs.dim() + 1 {
                let report = verify_od(&od, tol)?;
                if !report.pass() {
                    return Err(Failure::Verification(report.to_string()));
                }
            }
            if roundtrip_check {
                let back = cartans_to_mubs(&cartans, seed, tol)?;
                let score = matching_score(&mubs, &back, 1e-7);
                println!("roundtrip matching score: {score}");
                if score < 1.0 {
                    return Err(Failure::Verification(format!(
                        "roundtrip reproduced only {score} of the bases"
                    )));
                }
            }
            write_artifact(out, io::wrap("od", &io::od_to_file(&od))?)?;
            println!("wrote {} cartan subalgebras to {}", od.cartans().len(), out.display());
        }
        ConvertKind::OdToMubs => {
            let file: io::OdFile = io::unwrap(&env, "od")?;
            let od = io::od_from_file(&file)?;
            let mubs = cartans_to_mubs(od.cartans(), seed, tol)?;
            write_artifact(out, io::wrap("mubs", &io::mubs_to_file(&mubs))?)?;
            println!("wrote {} mutually unbiased bases to {}", mubs.len(), out.display());
        }
        ConvertKind::ClassesToMubs => {
            let file: io::PartitionFile = io::unwrap(&env, "partition")?;
            let partition = io::partition_from_file(&file)?;
            let mubs = mubs_from_classes(&partition, seed, tol)?;
            let report = mubs.verify(tol);
            if !report.pass(tol) {
                return Err(Failure::Verification(report.to_string()));
            }
            write_artifact(out, io::wrap("mubs", &io::mubs_to_file(&mubs))?)?;
            println!("wrote {} mutually unbiased bases to {}", mubs.len(), out.display());
        }
    }
    Ok(())
}

fn write_artifact(path: &Path, env: io::Envelope) -> Result<(), Failure> {
    io::write_envelope(path, &env)?;
    Ok(())
}
