//! `wavenet` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use wavenet::dirac::{evolve, initialize_plane_wave, samples_to_csv, EvolutionConfig};
use wavenet::gates::CatalogGate;
use wavenet::scattering::sweep_with_threads;
use wavenet::shor::{factor_with_retries, Mode, PipelineOptions};
use wavenet::{GateUnitary, LineParameters, NetworkGraph, ShorError, SimulationError, SolverError};

#[derive(Parser)]
#[command(name = "wavenet", version, about = "Transmission-line networks as quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the wavenumber and write transmission/reflection per sample as CSV.
    Sweep {
        /// Network description (JSON).
        network: PathBuf,
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        /// Samples on the half-open interval [k_min, k_max).
        #[arg(long)]
        steps: usize,
        /// Port receiving the incident wave.
        #[arg(long)]
        inject: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a catalog gate and check it against its tolerance.
    Gate {
        /// hadamard, mixing, not, cnot, swap, toffoli, fredkin or phase:<radians>.
        name: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Factor N with period finding and write a JSON report.
    Shor {
        #[arg(long = "n")]
        modulus: u64,
        #[arg(long = "a")]
        base: u64,
        #[arg(long, default_value = "reference")]
        mode: Mode,
        /// Draw this many register readouts instead of enumerating the support.
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
        /// Register width (default: ancilla width in reference mode, 2 in compiled mode).
        #[arg(long)]
        register_qubits: Option<usize>,
        /// Bases to try before giving up.
        #[arg(long, default_value_t = 8)]
        max_attempts: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve a plane wave on a periodic line and write energy samples as CSV.
    Evolve {
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        k_mode: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 0.5)]
        courant: f64,
        /// Capacitance per unit length.
        #[arg(long, default_value_t = 1.0)]
        capacitance: f64,
        /// Inductance per unit length.
        #[arg(long, default_value_t = 1.0)]
        inductance: f64,
        /// Steps between samples.
        #[arg(long, default_value_t = 100)]
        interval: usize,
    },
}

const USAGE: u8 = 2;
const NUMERICAL: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: USAGE,
        message: message.to_string(),
    }
}

fn numerical(message: impl ToString) -> Failure {
    Failure {
        code: NUMERICAL,
        message: message.to_string(),
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("WAVENET_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("WAVENET_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn cmd_sweep(network: &Path, k_min: f64, k_max: f64, steps: usize, inject: &str, out: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(network).map_err(|e| usage(format!("cannot read {}: {e}", network.display())))?;
    let net = NetworkGraph::from_json(&text).map_err(usage)?;
    let threads = thread_cap()?;
    let table = sweep_with_threads(&net, k_min, k_max, steps, inject, threads).map_err(|e| match e {
        SolverError::Degenerate { .. } => numerical(e),
        _ => usage(e),
    })?;
    write_output(out, &table.to_csv())?;
    let gaps = table.gaps();
    if gaps.is_empty() {
        Ok(())
    } else {
        let list: Vec<String> = gaps.iter().map(|k| format!("{k:.16e}")).collect();
        Err(numerical(format!(
            "solver failed at {} wavenumber(s), written as NaN: {}",
            gaps.len(),
            list.join(", ")
        )))
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.16e}{:+.16e}i", z.re, z.im)
}

fn matrix_text(u: &GateUnitary) -> String {
    let labels = u.basis_labels();
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (r, label) in labels.iter().enumerate() {
        let row: Vec<String> = (0..u.dimension()).map(|c| fmt_complex(u.get(r, c))).collect();
        writeln!(out, "  {label:>width$}  [{}]", row.join(", ")).unwrap();
    }
    out
}

fn cmd_gate(name: &str, tol: f64) -> Result<(), Failure> {
    let gate: CatalogGate = name.parse().map_err(usage)?;
    let u = gate.unitary();
    println!("gate {name} ({} qubit(s)); columns are inputs {}", u.num_qubits(), u.basis_labels().join(" "));
    print!("{}", matrix_text(&u));
    let unitarity = u.unitarity_residual();
    println!("unitarity residual ‖U†U − I‖_max = {unitarity:.3e}");
    let mut worst = unitarity;
    if let Some(net) = gate.network_unitary() {
        let net = net.map_err(numerical)?;
        let residual = net.max_abs_diff(&u);
        println!("network unitary:");
        print!("{}", matrix_text(&net));
        println!("network vs closed form ‖U_net − U‖_max = {residual:.3e}");
        worst = worst.max(residual);
    }
    if worst < tol {
        println!("PASS (tol {tol:.1e})");
        Ok(())
    } else {
        println!("FAIL (tol {tol:.1e})");
        Err(numerical(format!("residual {worst:.3e} exceeds tolerance {tol:.1e}")))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_shor(
    modulus: u64,
    base: u64,
    mode: Mode,
    sampling: Option<(usize, u64)>,
    register_qubits: Option<usize>,
    max_attempts: usize,
    out: &Path,
) -> Result<(), Failure> {
    let options = PipelineOptions {
        register_qubits,
        sampling,
    };
    let report = factor_with_retries(modulus, base, mode, options, max_attempts).map_err(|e| match e {
        ShorError::InvalidInstance(_) | ShorError::CompiledUnsupported => usage(e),
        _ => numerical(e),
    })?;
    let json = serde_json::to_string_pretty(&report).expect("report serialises");
    write_output(out, &(json + "\n"))?;
    println!(
        "N = {} = {} × {} (a = {}, r = {}, {} retr{})",
        report.modulus,
        report.factors[0],
        report.factors[1],
        report.a,
        report.r,
        report.retries.len(),
        if report.retries.len() == 1 { "y" } else { "ies" }
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    cells: usize,
    steps: usize,
    k_mode: usize,
    length: f64,
    courant: f64,
    capacitance: f64,
    inductance: f64,
    interval: usize,
    out: &Path,
) -> Result<(), Failure> {
    let line = LineParameters::new(capacitance, inductance).map_err(usage)?;
    let sim_err = |e: SimulationError| usage(e);
    let config = EvolutionConfig::with_courant(cells, length, courant, steps, line).map_err(sim_err)?;
    let initial = initialize_plane_wave(&config, k_mode).map_err(sim_err)?;
    let (_, samples) = evolve(&initial, &config, interval);
    if samples.iter().any(|s| !s.total.is_finite()) {
        return Err(numerical("fields became non-finite"));
    }
    write_output(out, &samples_to_csv(&samples))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep {
            network,
            k_min,
            k_max,
            steps,
            inject,
            out,
        } => cmd_sweep(&network, k_min, k_max, steps, &inject, &out),
        Command::Gate { name, tol } => cmd_gate(&name, tol),
        Command::Shor {
            modulus,
            base,
            mode,
            samples,
            seed,
            register_qubits,
            max_attempts,
            out,
        } => cmd_shor(modulus, base, mode, samples.zip(seed), register_qubits, max_attempts, &out),
        Command::Evolve {
            cells,
            steps,
            k_mode,
            out,
            length,
            courant,
            capacitance,
            inductance,
            interval,
        } => cmd_evolve(cells, steps, k_mode, length, courant, capacitance, inductance, interval, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
