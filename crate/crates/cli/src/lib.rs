//! Command-line front end: build, apply, verify, prob, bench and swaps.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use blockgate::harness::{
    bench_construction, circuit_oracle_operator, verify_random, BenchReport, VERIFY_TOLERANCE,
};
use blockgate::linalg::{format_f64, matvec};
use blockgate::random::DEFAULT_SEED;
use blockgate::{
    adjacent_swap_schedule, build_circuit_operator, count_adjacent_swaps, matmul, mt_probability,
    mt_probability_fast, parse_circuit, parse_ket, qudit_swap, standard_gate, CircuitSpec,
    ComplexMatrix, DensityOperator, Diagnostics, GateSpec, QuditDim, TargetMask,
};
use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "blockgate", version, about = "Block-matrix gate embedding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the circuit's full operator as matrix JSON.
    Build {
        #[arg(long)]
        circuit: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the circuit to a basis ket and write the resulting column.
    Apply {
        #[arg(long)]
        circuit: PathBuf,
        /// Ket such as `|0110>` or `|0,2,1>d3`.
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare block construction with the SWAP-chain oracle.
    Verify(VerifyArgs),
    /// Multi-target truth probability after the circuit.
    Prob(ProbArgs),
    /// Time block construction against the SWAP-chain oracle.
    Bench(BenchArgs),
    /// Adjacent-swap count and schedule for a placement.
    Swaps {
        #[arg(long, value_delimiter = ',', required = true)]
        positions: Vec<usize>,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Register width for randomized trials; the circuit's width when a circuit is given.
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug, Args)]
struct ProbArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, conflicts_with = "rho", required_unless_present = "rho")]
    state: Option<String>,
    /// Density operator as matrix JSON.
    #[arg(long)]
    rho: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 12)]
    qubits: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value = "cnot")]
    gate: String,
    /// Defaults to `2,k-1`.
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<usize>>,
    #[arg(long, default_value_t = 5)]
    repeat: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Diagnostics(String, Diagnostics),
    Verification(String),
}

impl From<blockgate::Error> for Failure {
    fn from(e: blockgate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => write!(f, "error: {m}"),
            Failure::Diagnostics(file, diags) => {
                for d in &diags.0 {
                    writeln!(f, "{file}: {d}")?;
                }
                Ok(())
            }
        }
    }
}

type Outcome = Result<(), Failure>;

/// Runs the CLI on `argv` (program name first) and returns the exit status.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Build { circuit, out: path } => build(&circuit, path.as_deref(), out),
        Command::Apply { circuit, state, out: path } => apply(&circuit, &state, path.as_deref(), out),
        Command::Verify(args) => verify(&args, out),
        Command::Prob(args) => prob(&args, out),
        Command::Bench(args) => bench(&args, out),
        Command::Swaps { positions } => swaps(&positions, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = write!(err, "{f}");
            if !matches!(f, Failure::Diagnostics(..)) {
                let _ = writeln!(err);
            }
            match f {
                Failure::Verification(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Formats `x` with 6 significant digits for tables.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn load_circuit(path: &Path) -> Result<CircuitSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|d| Failure::Diagnostics(path.display().to_string(), d))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => Ok(writeln!(out, "{text}")?),
    }
}

fn build(circuit: &Path, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let spec = load_circuit(circuit)?;
    emit(&build_circuit_operator(&spec)?.to_json(), path, out)
}

fn apply(circuit: &Path, state: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let spec = load_circuit(circuit)?;
    let ket = parse_ket(state)?;
    if ket.d() != spec.d || ket.k() != spec.k {
        return Err(Failure::Usage(format!(
            "state has {} wire(s) with d = {}, circuit has {} with d = {}",
            ket.k(),
            ket.d(),
            spec.k,
            spec.d
        )));
    }
    let op = build_circuit_operator(&spec)?;
    let column = ComplexMatrix::column(&matvec(&op, ket.amplitudes())?)?;
    emit(&column.to_json(), path, out)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let mut worst = 0.0f64;
    let (d, k) = match &args.circuit {
        Some(path) => {
            let spec = load_circuit(path)?;
            let (oracle, swaps) = circuit_oracle_operator(&spec)?;
            let dev = build_circuit_operator(&spec)?.max_abs_diff(&oracle)?;
            worst = worst.max(dev);
            writeln!(
                out,
                "circuit {}: {} step(s), {} adjacent swaps, max deviation {}",
                path.display(),
                spec.steps.len(),
                swaps,
                format_sig6(dev)
            )?;
            (args.dim.map(QuditDim::new).transpose()?.unwrap_or(spec.d), args.qubits.unwrap_or(spec.k))
        }
        None => (QuditDim::new(args.dim.unwrap_or(2))?, args.qubits.unwrap_or(6)),
    };
    let outcomes = verify_random(d, k, args.trials, args.seed)?;
    for o in &outcomes {
        writeln!(
            out,
            "trial {:>3}: arity {} at {:?}, {} adjacent swaps, max deviation {}",
            o.index,
            o.arity,
            o.positions,
            o.adjacent_swaps,
            format_sig6(o.max_deviation())
        )?;
        worst = worst.max(o.max_deviation());
    }
    writeln!(
        out,
        "d = {d}, k = {k}, {} trial(s), seed {}: max deviation {}",
        outcomes.len(),
        args.seed,
        format_sig6(worst)
    )?;
    if worst > VERIFY_TOLERANCE {
        return Err(Failure::Verification(format!(
            "block path disagrees with oracle: max entrywise deviation {} exceeds {}",
            format_f64(worst),
            VERIFY_TOLERANCE
        )));
    }
    writeln!(out, "OK")?;
    Ok(())
}

fn load_rho(path: &Path, spec: &CircuitSpec) -> Result<DensityOperator, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let m = ComplexMatrix::from_json(&text)?;
    Ok(DensityOperator::new(spec.d, spec.k, m)?)
}

/// The gate and ascending wires when the circuit is one binary qubit step on exactly the targets.
fn fast_path_gate(spec: &CircuitSpec, mask: &TargetMask) -> Result<Option<(GateSpec, usize, usize)>, Failure> {
    let [step] = spec.steps.as_slice() else { return Ok(None) };
    let &[a, b] = step.positions() else { return Ok(None) };
    if spec.d != QuditDim::QUBIT || mask.targets().collect::<BTreeSet<_>>() != BTreeSet::from([a, b]) {
        return Ok(None);
    }
    if a < b {
        return Ok(Some((step.gate().clone(), a, b)));
    }
    let s = qudit_swap(QuditDim::QUBIT);
    let flipped = matmul(&matmul(&s, step.gate().matrix())?, &s)?;
    Ok(Some((GateSpec::new(step.gate().name(), QuditDim::QUBIT, 2, flipped)?, b, a)))
}

fn prob(args: &ProbArgs, out: &mut dyn Write) -> Outcome {
    let spec = load_circuit(&args.circuit)?;
    let rho = match (&args.state, &args.rho) {
        (Some(ket), _) => {
            let state = parse_ket(ket)?;
            if state.k() != spec.k || state.d() != spec.d {
                return Err(Failure::Usage(format!(
                    "state has {} wire(s), circuit has {}",
                    state.k(),
                    spec.k
                )));
            }
            DensityOperator::pure(&state)
        }
        (None, Some(path)) => load_rho(path, &spec)?,
        (None, None) => return Err(Failure::Usage("one of --state or --rho is required".into())),
    };
    let mask = match (&args.targets, &spec.targets) {
        (Some(t), _) => TargetMask::new(spec.k, t.iter().copied())?,
        (None, Some(t)) => t.clone(),
        (None, None) => TargetMask::last_wire(spec.k)?,
    };
    let u = build_circuit_operator(&spec)?;
    let slow = mt_probability(&u, &rho, &mask)?;
    let targets: Vec<String> = mask.targets().map(|t| t.to_string()).collect();
    writeln!(out, "targets: {}", targets.join(","))?;
    writeln!(out, "mt_probability: {}", format_f64(slow))?;
    if let Some((gate, m, q)) = fast_path_gate(&spec, &mask)? {
        let fast = mt_probability_fast(&gate, spec.k, m, q, &rho)?;
        writeln!(out, "mt_probability_fast: {}", format_f64(fast))?;
        writeln!(out, "difference: {}", format_f64((slow - fast).abs()))?;
    }
    Ok(())
}

fn write_bench(report: &BenchReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "gate {} at {:?}, d = {}, k = {}",
        report.gate, report.positions, report.d, report.k
    )?;
    writeln!(out, "{:>5}  {:>12}  {:>12}  {:>6}  {:>12}", "trial", "block_s", "oracle_s", "swaps", "max_dev")?;
    for (i, t) in report.trials.iter().enumerate() {
        writeln!(
            out,
            "{:>5}  {:>12}  {:>12}  {:>6}  {:>12}",
            i,
            format_sig6(t.block_secs),
            format_sig6(t.oracle_secs),
            t.adjacent_swaps,
            format_sig6(t.max_deviation)
        )?;
    }
    writeln!(out, "median block_s: {}", format_sig6(report.median_block_secs()))?;
    writeln!(out, "median oracle_s: {}", format_sig6(report.median_oracle_secs()))?;
    writeln!(out, "block/oracle ratio: {}", format_sig6(report.ratio()))
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Outcome {
    let d = QuditDim::new(args.dim)?;
    let gate = standard_gate(&args.gate, d)?;
    let positions = match &args.positions {
        Some(p) => p.clone(),
        None if gate.arity() == 2 && args.qubits >= 3 => vec![2, args.qubits - 1],
        None => (1..=gate.arity()).collect(),
    };
    let report = bench_construction(&gate, args.qubits, &positions, args.repeat)?;
    write_bench(&report, out)?;
    if report.max_deviation() > VERIFY_TOLERANCE {
        return Err(Failure::Verification(format!(
            "max entrywise deviation {} exceeds {}",
            format_f64(report.max_deviation()),
            VERIFY_TOLERANCE
        )));
    }
    Ok(())
}

fn swaps(positions: &[usize], out: &mut dyn Write) -> Outcome {
    let schedule = adjacent_swap_schedule(positions)?;
    let total = 2 * schedule.len();
    writeln!(out, "positions: {positions:?}")?;
    match count_adjacent_swaps(positions) {
        Ok(formula) => writeln!(out, "formula: {formula}")?,
        Err(_) => writeln!(out, "formula: n/a (positions not increasing)")?,
    }
    writeln!(out, "oracle: {total}")?;
    let steps: Vec<String> = schedule.iter().map(|s| format!("({},{})", s, s + 1)).collect();
    writeln!(out, "schedule: {}", steps.join(" "))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(1.5), "1.50000");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e6");
        assert_eq!(format_sig6(1e-12), "1.00000e-12");
        assert_eq!(format_sig6(0.0), "0");
    }
}
