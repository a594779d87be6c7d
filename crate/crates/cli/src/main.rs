use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use photonmesh::analysis::{ghz_probability_scan, search_cz_in_4x4, FeasibilityReport};
use photonmesh::compiler::{compile, compile_program, CircuitIR, CompileOptions, CzForm, Scheme};
use photonmesh::fock::{bitstring, prepare_computational_basis, run_program, QubitAmplitudes};
use photonmesh::gates::{library, GateDescriptor};
use photonmesh::linalg::ComplexMatrix;
use photonmesh::numfmt::{chop, format_sig, round_sig};
use photonmesh::Error;

#[derive(Parser)]
#[command(name = "photonmesh", version, about = "Path-encoded photonic qubits on MZI meshes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,

    /// Extra diagnostics on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Clements,
    Reck,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Clements => Scheme::Clements,
            SchemeArg::Reck => Scheme::Reck,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CzFormArg {
    Compressed,
    SwapSandwich,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file and write its mesh phase table.
    Compile {
        circuit: PathBuf,
        #[command(flatten)]
        opts: CompileArgs,
        /// Write the phase table here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a circuit on a computational basis state.
    Simulate {
        circuit: PathBuf,
        /// Input bits, qubit 0 first.
        #[arg(short, long)]
        input: String,
        #[command(flatten)]
        opts: CompileArgs,
        /// Write the full Fock state before post-selection here.
        #[arg(long)]
        dump_state: Option<PathBuf>,
    },
    /// Inspect the gate library.
    Gates {
        #[command(subcommand)]
        command: GatesCommand,
    },
    /// Feasibility studies.
    Analyze {
        #[command(subcommand)]
        command: AnalyzeCommand,
    },
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, value_enum, default_value_t = SchemeArg::Clements)]
    scheme: SchemeArg,
    #[arg(long, value_enum, default_value_t = CzFormArg::Compressed)]
    cz_form: CzFormArg,
    /// Permit repeated post-selected gates on the same pair.
    #[arg(long)]
    allow_illegal_cascade: bool,
    /// Leave routed qubits where the last SWAP₂ put them.
    #[arg(long)]
    no_restore: bool,
}

impl CompileArgs {
    fn options(&self) -> CompileOptions {
        CompileOptions {
            scheme: self.scheme.into(),
            allow_illegal_cascade: self.allow_illegal_cascade,
            cz_form: match self.cz_form {
                CzFormArg::Compressed => CzForm::Compressed,
                CzFormArg::SwapSandwich => CzForm::SwapSandwich,
            },
            restore_routing: !self.no_restore,
            truncate_aux: true,
        }
    }
}

#[derive(Subcommand)]
enum GatesCommand {
    /// Dump every gate descriptor.
    List {
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
        /// Only the descriptor with this name.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Search four-mode meshes for a post-selected CZ.
    Cz4x4 {
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Success probability of the GHZ chain for 2..=max-n qubits.
    GhzScan {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Anything that ends the process early, with its exit status.
enum Failure {
    Lib(Error),
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::IllegalCascade { .. }) => 2,
            Failure::Lib(Error::PlacementOverflow { .. }) => 3,
            Failure::Lib(
                Error::Parse(_)
                | Error::UnknownGate(_)
                | Error::InvalidCircuit(_)
                | Error::InvalidBits(_)
                | Error::BitCountMismatch { .. },
            )
            | Failure::Input(_) => 4,
            Failure::Lib(_) | Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Input(m) | Failure::Io(m) => m.clone(),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn read_circuit(path: &Path) -> Result<CircuitIR, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(CircuitIR::from_json(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn cmd_compile(circuit: &Path, opts: &CompileArgs, output: Option<&Path>, format: Format, verbose: bool) -> CmdResult {
    let c = read_circuit(circuit)?;
    let compiled = compile(&c, &opts.options())?;
    let mesh = &compiled.mesh;
    if verbose {
        eprintln!(
            "{} program steps, {} blocks, {} truncations",
            compiled.compiled.program.steps().len(),
            compiled.compiled.program.blocks().count(),
            compiled.compiled.program.truncation_count()
        );
    }
    let table = pretty(&mesh.to_json());
    let summary = format!(
        "{} mesh, {} modes: {}/{} slots used, depth {} of {} layers, {} truncations\n",
        mesh.scheme,
        mesh.mode_count,
        mesh.used_slots(),
        mesh.phase_table.len(),
        mesh.depth(),
        mesh.layer_count(),
        mesh.truncations.len()
    );
    if let Some(path) = output {
        write_file(path, &table)?;
        return Ok(summary);
    }
    Ok(match format {
        Format::Json => table,
        Format::Tsv => {
            let mut out = String::from("layer\ttop_mode\trole\ttheta1\ttheta2\tphi1\tphi2\n");
            for r in &mesh.phase_table {
                let s = r.setting;
                out += &format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.slot.layer,
                    r.slot.top,
                    r.role,
                    format_sig(s.theta1),
                    format_sig(s.theta2),
                    format_sig(s.phi1),
                    format_sig(s.phi2)
                );
            }
            out
        }
        Format::Human => {
            let mut out = summary;
            for r in mesh.phase_table.iter().filter(|r| r.block.is_some()) {
                out += &format!(
                    "  layer {:>2}  modes {:>2},{:<2}  {:<4}  Δθ {}  Δφ {}\n",
                    r.slot.layer,
                    r.slot.top,
                    r.slot.top + 1,
                    r.role.symbol(),
                    format_sig(r.setting.delta_theta()),
                    format_sig(r.setting.delta_phi())
                );
            }
            for t in &mesh.truncations {
                let after = t.after_layer.map_or("start".to_string(), |l| format!("layer {l}"));
                out += &format!("  truncate {:?} after {after}\n", t.modes);
            }
            out
        }
    })
}

fn amplitude_lines(q: &QubitAmplitudes) -> Vec<(String, f64, f64)> {
    let n = q.qubit_count();
    q.amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| (bitstring(i, n), round_sig(chop(a.re)), round_sig(chop(a.im))))
        .collect()
}

fn cmd_simulate(circuit: &Path, input: &str, opts: &CompileArgs, dump: Option<&Path>, format: Format) -> CmdResult {
    let c = read_circuit(circuit)?;
    let compiled = compile_program(&c, &opts.options())?;
    if let Some(path) = dump {
        let state = prepare_computational_basis(input, &compiled.layout())?;
        write_file(path, &run_program(&compiled.program, &state)?.dump())?;
    }
    let out = compiled.simulate(input)?;
    let lines = amplitude_lines(&out);
    Ok(match format {
        Format::Json => {
            let amps: serde_json::Map<String, Value> =
                lines.iter().map(|(b, re, im)| (b.clone(), json!({"re": re, "im": im}))).collect();
            pretty(&json!({
                "input": input,
                "success_probability": round_sig(out.success_probability),
                "amplitudes": amps,
            }))
        }
        Format::Tsv => {
            let mut s = String::from("bits\tre\tim\n");
            for (b, re, im) in &lines {
                s += &format!("{b}\t{}\t{}\n", format_sig(*re), format_sig(*im));
            }
            s
        }
        Format::Human => {
            let mut s = format!("success probability {}\n", format_sig(out.success_probability));
            for (b, re, im) in &lines {
                s += &format!("|{b}⟩  {}  {}i\n", format_sig(*re), format_sig(*im));
            }
            s
        }
    })
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|z| json!([round_sig(z.re), round_sig(z.im)])).collect()))
        .collect();
    Value::Array(rows)
}

fn descriptor_json(d: &GateDescriptor) -> Value {
    let blocks: Vec<Value> = d
        .blocks
        .iter()
        .map(|b| {
            let s = b.setting;
            let mut v = json!({
                "top_mode": b.top,
                "role": b.role.symbol(),
                "theta1": round_sig(s.theta1),
                "theta2": round_sig(s.theta2),
                "phi1": round_sig(s.phi1),
                "phi2": round_sig(s.phi2),
            });
            if let Some((p3, p4)) = s.output {
                v["phi3"] = json!(round_sig(p3));
                v["phi4"] = json!(round_sig(p4));
            }
            v
        })
        .collect();
    json!({
        "name": d.name,
        "arity": d.arity,
        "modes": d.mode_count(),
        "labeling": d.labeling,
        "truncate_after": d.truncate_after,
        "matrix": matrix_json(&d.matrix),
        "blocks": blocks,
    })
}

fn cmd_gates_list(name: Option<&str>, format: Format) -> CmdResult {
    let all: Vec<GateDescriptor> = match name {
        Some(n) => {
            let found: Vec<_> = library().into_iter().filter(|d| d.name.eq_ignore_ascii_case(n)).collect();
            if found.is_empty() {
                return Err(Failure::Lib(Error::UnknownGate(n.to_string())));
            }
            found
        }
        None => library(),
    };
    Ok(match format {
        Format::Json => pretty(&Value::Array(all.iter().map(descriptor_json).collect())),
        Format::Tsv => {
            let mut s = String::from("name\tarity\tmodes\tblocks\tlayers\ttruncate_after\n");
            for d in &all {
                s += &format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    d.name,
                    d.arity,
                    d.mode_count(),
                    d.blocks.len(),
                    d.layers().len(),
                    d.truncate_after
                );
            }
            s
        }
        Format::Human => {
            let mut s = format!("{:<20} {:>5} {:>5} {:>6} {:>6}  truncate\n", "name", "arity", "modes", "blocks", "layers");
            for d in &all {
                s += &format!(
                    "{:<20} {:>5} {:>5} {:>6} {:>6}  {}\n",
                    d.name,
                    d.arity,
                    d.mode_count(),
                    d.blocks.len(),
                    d.layers().len(),
                    if d.truncate_after { "yes" } else { "no" }
                );
            }
            s
        }
    })
}

fn report_json(r: &FeasibilityReport) -> Value {
    json!({
        "restarts": r.restarts,
        "seed": r.seed,
        "best_restart": r.best_restart,
        "best_process_fidelity": round_sig(r.best_process_fidelity),
        "best_success_probability": round_sig(r.best_success_probability),
        "best_parameters": r.best_parameters.iter().map(|&p| round_sig(p)).collect::<Vec<_>>(),
        "constraint_residual": round_sig(r.constraint_residual),
    })
}

fn cmd_cz4x4(restarts: usize, seed: u64, format: Format) -> CmdResult {
    let r = search_cz_in_4x4(restarts, seed)?;
    Ok(match format {
        Format::Json => pretty(&report_json(&r)),
        Format::Tsv => format!(
            "restarts\tseed\tbest_restart\tfidelity\tsuccess_probability\tconstraint_residual\n{}\t{}\t{}\t{}\t{}\t{}\n",
            r.restarts,
            r.seed,
            r.best_restart,
            format_sig(r.best_process_fidelity),
            format_sig(r.best_success_probability),
            format_sig(r.constraint_residual)
        ),
        Format::Human => format!(
            "{} restarts (seed {}): best fidelity {} at success probability {} (restart {})\n\
             constrained family: smallest unitarity residual {}\n",
            r.restarts,
            r.seed,
            format_sig(r.best_process_fidelity),
            format_sig(r.best_success_probability),
            r.best_restart,
            format_sig(r.constraint_residual)
        ),
    })
}

fn cmd_ghz_scan(max_n: usize, format: Format) -> CmdResult {
    let scan = ghz_probability_scan(max_n)?;
    Ok(match format {
        Format::Json => pretty(&Value::Array(
            scan.iter().map(|&(n, p)| json!({"n": n, "success_probability": round_sig(p)})).collect(),
        )),
        Format::Tsv => {
            let mut s = String::from("n\tsuccess_probability\n");
            for (n, p) in &scan {
                s += &format!("{n}\t{}\n", format_sig(*p));
            }
            s
        }
        Format::Human => {
            let mut s = String::new();
            for (n, p) in &scan {
                s += &format!("n = {n}: p = {}  (9^{} = {})\n", format_sig(*p), 1 - *n as i32, format_sig(9f64.powi(1 - *n as i32)));
            }
            s
        }
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("PHOTONMESH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("PHOTONMESH_THREADS must be a non-negative integer, got {value:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    let format = cli.format;
    let json_or = |flag: bool| if flag { Format::Json } else { format };
    match &cli.command {
        Command::Compile { circuit, opts, output } => cmd_compile(circuit, opts, output.as_deref(), format, cli.verbose),
        Command::Simulate { circuit, input, opts, dump_state } => {
            cmd_simulate(circuit, input, opts, dump_state.as_deref(), format)
        }
        Command::Gates { command: GatesCommand::List { json, name } } => cmd_gates_list(name.as_deref(), json_or(*json)),
        Command::Analyze { command: AnalyzeCommand::Cz4x4 { restarts, seed, json } } => {
            cmd_cz4x4(*restarts, *seed, json_or(*json))
        }
        Command::Analyze { command: AnalyzeCommand::GhzScan { max_n, json } } => cmd_ghz_scan(*max_n, json_or(*json)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
