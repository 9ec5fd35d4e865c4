//! Command-line front-end for the possim toolkit.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 unreadable or
//! unparseable input, 3 capacity exceeded. Reports are plain text, one
//! record per line, and byte-identical across identical invocations; all
//! randomness is seeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use possim::bcir::{self, BoolCircuit};
use possim::compile::{self, CompileError, CompileOptions, VerifyOutcome};
use possim::f2::F2Vector;
use possim::hlf;
use possim::qcir::{self, QuantumCircuit};
use possim::sv::{self, SimError};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

/// Inputs for a forced exhaustive sweep are capped at this width; beyond it
/// the verifier switches to (or insists on) sampling.
const EXHAUSTIVE_INPUT_LIMIT: usize = 16;
const DEFAULT_SAMPLES: usize = 1024;

#[derive(Parser)]
#[command(
    name = "possim",
    version,
    about = "Compile Clifford+T quantum circuits into boolean netlists that reproduce a possible measurement outcome for every input, and verify them against a statevector oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file into a netlist; the depth report goes to stdout
    Compile {
        circuit: PathBuf,
        out: PathBuf,
        /// Multiplex only over the reachable selector values
        #[arg(long)]
        rank_refine: bool,
        /// Relative amplitude tolerance for support extraction
        #[arg(long, default_value_t = sv::DEFAULT_TOL)]
        tol: f64,
    },
    /// Check a netlist against a circuit's possible input/output pairs
    Verify {
        circuit: PathBuf,
        netlist: PathBuf,
        /// Check every input (default when the circuit has at most 16)
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Check this many seeded random inputs
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = sv::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the depth of a netlist file
    Depth { netlist: PathBuf },
    /// Print every possible input/output pair of a circuit, one per line
    Relation {
        circuit: PathBuf,
        #[arg(long, default_value_t = sv::DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the nonzero amplitudes of a circuit on one input
    Simulate {
        circuit: PathBuf,
        /// Input bitstring (defaults to all zeros)
        #[arg(long)]
        input: Option<String>,
    },
    /// Hidden-linear-function instances: generate, solve, verify
    #[command(subcommand)]
    Hlf(HlfCommand),
}

#[derive(Subcommand)]
enum HlfCommand {
    /// Print the instance for the N×N grid
    GenGrid { n: usize },
    /// Print a seeded random symmetric instance of size M
    GenRandom {
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a solution for an instance file
    Solve { instance: PathBuf },
    /// Check a solution file against an instance file
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        /// Kernel dimension up to which checking is exhaustive
        #[arg(long, default_value_t = hlf::DEFAULT_VERIFY_BUDGET)]
        budget: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("possim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compile { circuit, out, rank_refine, tol } => cmd_compile(&circuit, &out, rank_refine, tol),
        Command::Verify { circuit, netlist, exhaustive, samples, tol, seed } => {
            cmd_verify(&circuit, &netlist, exhaustive, samples, tol, seed)
        }
        Command::Depth { netlist } => cmd_depth(&netlist),
        Command::Relation { circuit, tol } => cmd_relation(&circuit, tol),
        Command::Simulate { circuit, input } => cmd_simulate(&circuit, input.as_deref()),
        Command::Hlf(sub) => match sub {
            HlfCommand::GenGrid { n } => cmd_hlf_gen_grid(n),
            HlfCommand::GenRandom { m, seed } => cmd_hlf_gen_random(m, seed),
            HlfCommand::Solve { instance } => cmd_hlf_solve(&instance),
            HlfCommand::Verify { instance, solution, budget } => cmd_hlf_verify(&instance, &solution, budget),
        },
    }
}

fn max_qubits() -> Result<usize, Failure> {
    match std::env::var("POSSIM_MAX_QUBITS") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| fail(EXIT_PARSE, format!("POSSIM_MAX_QUBITS must be an integer, found `{value}`"))),
        Err(std::env::VarError::NotPresent) => Ok(sv::DEFAULT_MAX_QUBITS),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(fail(EXIT_PARSE, "POSSIM_MAX_QUBITS is not valid unicode"))
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    format!("sha256:{:x}", Sha256::digest(text.as_bytes()))
}

fn load_circuit(path: &Path) -> Result<(QuantumCircuit, String), Failure> {
    let text = read_file(path)?;
    let qc = qcir::parse_circuit(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))?;
    Ok((qc, digest(&text)))
}

fn load_netlist(path: &Path) -> Result<(BoolCircuit, String), Failure> {
    let text = read_file(path)?;
    let bc = bcir::parse_netlist(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))?;
    Ok((bc, digest(&text)))
}

fn load_instance(path: &Path) -> Result<(hlf::HlfInstance, String), Failure> {
    let text = read_file(path)?;
    let inst = hlf::parse_hlf_instance(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))?;
    Ok((inst, digest(&text)))
}

fn sim_failure(err: SimError) -> Failure {
    match err {
        SimError::CapacityError { .. } => fail(EXIT_CAPACITY, err.to_string()),
        SimError::WidthError { .. } => fail(EXIT_PARSE, err.to_string()),
    }
}

fn cmd_compile(circuit: &Path, out: &Path, rank_refine: bool, tol: f64) -> Result<u8, Failure> {
    let (qc, qc_digest) = load_circuit(circuit)?;
    let options = CompileOptions { rank_refine, tol, max_qubits: max_qubits()? };
    let artifacts = compile::compile(&qc, &options).map_err(|e| match e {
        CompileError::Sim(sim) => sim_failure(sim),
        CompileError::EmptySupport { .. } => fail(EXIT_PARSE, e.to_string()),
    })?;
    std::fs::write(out, artifacts.netlist.to_text())
        .map_err(|e| fail(EXIT_PARSE, format!("cannot write {}: {e}", out.display())))?;
    println!("command compile {} {}", circuit.display(), out.display());
    println!("circuit {qc_digest}");
    println!("{}", artifacts.depth_report);
    Ok(0)
}

fn cmd_verify(
    circuit: &Path,
    netlist: &Path,
    exhaustive: bool,
    samples: Option<usize>,
    tol: f64,
    seed: u64,
) -> Result<u8, Failure> {
    let (qc, qc_digest) = load_circuit(circuit)?;
    let (bc, bc_digest) = load_netlist(netlist)?;
    let limit = max_qubits()?;
    let n = qc.n_inputs;

    println!("command verify {} {}", circuit.display(), netlist.display());
    println!("circuit {qc_digest}");
    println!("netlist {bc_digest}");

    let outcome = if exhaustive || (samples.is_none() && n <= EXHAUSTIVE_INPUT_LIMIT) {
        if n > EXHAUSTIVE_INPUT_LIMIT {
            return Err(fail(
                EXIT_CAPACITY,
                format!("{n} inputs exceed the exhaustive limit of {EXHAUSTIVE_INPUT_LIMIT}; use --samples"),
            ));
        }
        println!("mode exhaustive");
        compile::verify_exhaustive(&qc, &bc, tol, limit).map_err(sim_failure)?
    } else {
        let count = samples.unwrap_or(DEFAULT_SAMPLES);
        println!("mode sampled");
        println!("samples {count}");
        println!("seed {seed}");
        compile::verify_sampled(&qc, &bc, count, seed, tol, limit).map_err(sim_failure)?
    };

    match outcome {
        VerifyOutcome::Pass { checked } => {
            println!("inputs-checked {checked}");
            println!("failures 0");
            println!("result pass");
            Ok(0)
        }
        VerifyOutcome::Fail { counterexample, produced } => {
            println!("failures 1");
            println!("counterexample {counterexample}");
            println!("produced {produced}");
            println!("result fail");
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_depth(netlist: &Path) -> Result<u8, Failure> {
    let (bc, _) = load_netlist(netlist)?;
    println!("{}", bc.depth());
    Ok(0)
}

fn cmd_relation(circuit: &Path, tol: f64) -> Result<u8, Failure> {
    let (qc, _) = load_circuit(circuit)?;
    let pairs = sv::relation_with_limits(&qc, tol, sv::DEFAULT_RELATION_LIMIT, max_qubits()?)
        .map_err(sim_failure)?;
    for (x, y) in pairs {
        println!("{x} {y}");
    }
    Ok(0)
}

fn cmd_simulate(circuit: &Path, input: Option<&str>) -> Result<u8, Failure> {
    let (qc, _) = load_circuit(circuit)?;
    let x = match input {
        Some(text) => text
            .parse::<F2Vector>()
            .map_err(|e| fail(EXIT_PARSE, format!("bad --input: {e}")))?,
        None => F2Vector::zeros(qc.n_inputs),
    };
    let state = sv::simulate_with_capacity(&qc, &x, max_qubits()?).map_err(sim_failure)?;
    for (idx, amp) in state.amps().iter().enumerate() {
        if amp.norm() > 1e-12 {
            let bits = F2Vector::from_index(idx, state.n_qubits());
            println!("{bits} {} {}", amp.re, amp.im);
        }
    }
    Ok(0)
}

fn cmd_hlf_gen_grid(n: usize) -> Result<u8, Failure> {
    if n == 0 {
        return Err(fail(EXIT_PARSE, "grid side must be at least 1"));
    }
    print!("{}", hlf::gen_grid(n).to_text());
    Ok(0)
}

fn cmd_hlf_gen_random(m: usize, seed: u64) -> Result<u8, Failure> {
    if m == 0 {
        return Err(fail(EXIT_PARSE, "instance size must be at least 1"));
    }
    print!("{}", hlf::gen_random(m, seed).to_text());
    Ok(0)
}

fn cmd_hlf_solve(instance: &Path) -> Result<u8, Failure> {
    let (inst, _) = load_instance(instance)?;
    let sol = hlf::solve_hlf(&inst).map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
    println!("{sol}");
    Ok(0)
}

fn cmd_hlf_verify(instance: &Path, solution: &Path, budget: usize) -> Result<u8, Failure> {
    let (inst, inst_digest) = load_instance(instance)?;
    let text = read_file(solution)?;
    let sol = hlf::parse_hlf_solution(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", solution.display())))?;
    if sol.z.len() != inst.m() {
        return Err(fail(
            EXIT_PARSE,
            format!("solution has {} bits but the instance needs {}", sol.z.len(), inst.m()),
        ));
    }
    println!("command hlf-verify {} {}", instance.display(), solution.display());
    println!("instance {inst_digest}");
    println!("solution {}", digest(&text));
    println!("budget {budget}");
    if hlf::verify_hlf(&inst, &sol, budget) {
        println!("result pass");
        Ok(0)
    } else {
        println!("result fail");
        Ok(EXIT_FAIL)
    }
}
