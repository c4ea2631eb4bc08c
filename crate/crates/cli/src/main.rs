//! spingap: higher-spin XXZ Hamiltonians on finite graphs, configuration-graph
//! Schrödinger operators, and certified spectral gaps above the droplet band.
//!
//! Outputs are deterministic for a fixed command line (and seed): floats are
//! printed in shortest round-trip form, CSV uses `.` decimals and no locale,
//! and timing goes to stderr only.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid arguments or inputs,
//! 3 dimension cap exceeded.

mod ops;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spingap_core::Error;

#[derive(Parser)]
#[command(
    name = "spingap",
    version,
    about = "Higher-spin XXZ systems on graphs: spectra, droplets, and gap certificates",
    after_help = "GRAPH SPECIFICATIONS:\n  \
        path:N        open chain on N vertices\n  \
        cycle:N       ring on N vertices (finite stand-in for the infinite chain)\n  \
        strip:NxL     open strip, N columns of width L\n  \
        cylinder:NxL  strip periodic in the long direction\n  \
        <file>        edge-list file: one `u v` pair per line, 0-based ids, `#` comments\n\n\
        FIELD FILE: one `site value` pair per line, `#` comments; missing sites default to 0."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the unitary equivalence between the spin Hamiltonian restricted
    /// to the N-particle sector and the configuration-graph operator
    /// −(1/2Δ)A_N + V_N (JSON report; exits nonzero on any mismatch)
    Equivalence(EquivalenceArgs),
    /// Eigenvalues of the configuration-graph Hamiltonian
    /// (CSV: N,index,eigenvalue,residual)
    Spectrum(SpectrumArgs),
    /// Droplet report: the exact potential minimizers and the second-lowest
    /// level (JSON)
    Droplets(DropletsArgs),
    /// Compute a spectral-gap certificate and verify it against the computed
    /// spectrum (JSON, schema: M, N, delta, graph, VN1, VN2, d1, d2, a1_norm,
    /// b_norm, interval, v1_size, verified)
    Certify(CertifyArgs),
    /// Sweep the certificate over an anisotropy range
    /// (CSV: delta,window_lo,window_hi,certified_lo,certified_hi,min_eig_in_window)
    Sweep(SweepArgs),
    /// Serialize the configuration space or an assembled operator to the
    /// binary format (JSON header line + little-endian payload)
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Graph specification (see GRAPH SPECIFICATIONS below)
    #[arg(long)]
    graph: String,
    /// Maximal local occupation M = 2J
    #[arg(long = "M")]
    max_occ: usize,
    /// Configuration cap for enumeration
    #[arg(long, default_value_t = 200_000)]
    cap_configs: usize,
    /// Dense-solver dimension cap
    #[arg(long, default_value_t = 6_000)]
    cap_dense: usize,
    /// Stored-nonzero cap for assembled operators
    #[arg(long, default_value_t = 20_000_000)]
    cap_nnz: usize,
    /// Seed for the iterative eigensolver's start block
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Worker threads (kept at 1 for reproducibility; the numerical kernels
    /// are sequential)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct EquivalenceArgs {
    /// Graph specification; omit to run the built-in test matrix
    #[arg(long)]
    graph: Option<String>,
    /// Maximal local occupation M = 2J (required with --graph)
    #[arg(long = "M")]
    max_occ: Option<usize>,
    /// Particle number (required with --graph)
    #[arg(long = "N")]
    n_particles: Option<usize>,
    /// Anisotropy Δ (required with --graph)
    #[arg(long)]
    delta: Option<f64>,
    /// Per-site magnetic field file
    #[arg(long)]
    field_file: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 200_000)]
    cap_configs: usize,
    #[arg(long, default_value_t = 20_000_000)]
    cap_nnz: usize,
    /// Full tensor-product dimension cap
    #[arg(long, default_value_t = 250_000)]
    cap_full: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Particle number, a single value or an inclusive range `a:b`
    #[arg(long = "N")]
    n_particles: String,
    /// Anisotropy Δ
    #[arg(long)]
    delta: f64,
    /// Compute only the k lowest eigenvalues iteratively (otherwise a dense
    /// solve under the dense cap)
    #[arg(long)]
    k_lowest: Option<usize>,
    /// Per-site magnetic field file
    #[arg(long)]
    field_file: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Measured droplet set only, no structural expectations
    Generic,
    /// Cycle droplets at N = kM: cross-check against the chain minimizer
    /// family
    ChainDroplet,
    /// Cylinder droplets at N = kLM, k ≥ L/2: cross-check against the
    /// rectangle family
    StripDroplet,
}

#[derive(Args)]
struct DropletsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Particle number
    #[arg(long = "N")]
    n_particles: usize,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    mode: Mode,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CBoundArg {
    /// C = 2M·V_N on the complement set (default)
    Potential,
    /// C = D_N, the weighted degree
    Degree,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Particle number
    #[arg(long = "N")]
    n_particles: usize,
    /// Anisotropy Δ (must exceed M)
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    mode: Mode,
    /// Bound C on the complement-induced adjacency
    #[arg(long, value_enum, default_value_t = CBoundArg::Potential)]
    c_bound: CBoundArg,
    /// Eigenpairs to compute when verifying iteratively (default |V₁| + 4)
    #[arg(long)]
    k_lowest: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Particle number
    #[arg(long = "N")]
    n_particles: usize,
    /// Anisotropy range `start:stop:step` (inclusive endpoints)
    #[arg(long)]
    delta_range: String,
    /// Eigenpairs to compute per anisotropy when verifying iteratively
    #[arg(long)]
    k_lowest: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    ConfigSpace,
    Adjacency,
    Degree,
    NegLaplacian,
    Hamiltonian,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Particle number
    #[arg(long = "N")]
    n_particles: usize,
    /// Anisotropy Δ (needed for the Hamiltonian)
    #[arg(long)]
    delta: Option<f64>,
    /// Which object to serialize
    #[arg(long, value_enum)]
    what: ExportWhat,
    /// Per-site magnetic field file (Hamiltonian only)
    #[arg(long)]
    field_file: Option<std::path::PathBuf>,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::DimensionCap { .. } => 3,
        Error::DisconnectedGraph(_)
        | Error::InvalidSize(_)
        | Error::InvalidParticleNumber(_)
        | Error::InvalidDelta { .. }
        | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Equivalence(args) => ops::run_equivalence(args),
        Command::Spectrum(args) => ops::run_spectrum(args),
        Command::Droplets(args) => ops::run_droplets(args),
        Command::Certify(args) => ops::run_certify(args),
        Command::Sweep(args) => ops::run_sweep(args),
        Command::Export(args) => ops::run_export(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}
