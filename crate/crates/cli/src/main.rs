//! `qbh`: validate, run and explore horizon-aware evaporation circuits.
//!
//! Exit codes: 0 success, 1 causality violations, 2 parse errors,
//! 3 numeric/internal errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qbh_core::dsl::{parse_circuit, CircuitDocument, Diagnostic, Severity};
use qbh_core::entropy::EntropyValue;
use qbh_core::horizon::{run_with_contributions, validate_circuit, CausalityViolation, EntropyTrace};
use qbh_core::model::{
    build_canonical, ensemble_page_curve, s_bis, s_prime, stage_states, EnsembleConfig,
    ModelParams, Mode, Schedule, Variant, Q_G, Q_M, Q_MINUS, Q_PLUS, QUBIT_NAMES,
};
use qbh_core::report::{render_page_curve_csv, render_trace_csv};
use qbh_core::statevec::PureState;
use qbh_core::Complex64;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATIONS: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qbh",
    about = "Horizon-aware simulator for the four-qubit black hole evaporation circuit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a circuit file and check the causality rules.
    Validate {
        /// Circuit file in the qbh description language.
        file: PathBuf,
    },
    /// Run a circuit file and emit its entropy trace.
    Run {
        /// Circuit file in the qbh description language.
        file: PathBuf,
        /// Write the trace CSV here instead of stdout.
        #[arg(long, value_name = "out.csv")]
        trace: Option<PathBuf>,
        /// Emit the trace as JSON on stdout.
        #[arg(long)]
        json: bool,
        /// Report entropies in bits (divided by ln 2) instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Build and run the canonical evaporation circuit, printing the four
    /// stage states and the entropy trace.
    Paper {
        /// Stage-3 layout variant.
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
        /// Matter amplitude of |0>, as RE IM.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        lambda: Option<Vec<f64>>,
        /// Matter amplitude of |1>, as RE IM.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        mu: Option<Vec<f64>>,
        /// Hawking amplitude of |0>, as RE IM.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        alpha: Option<Vec<f64>>,
        /// Hawking amplitude of |1>, as RE IM.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        beta: Option<Vec<f64>>,
        /// Horizon-crossing instants tau1..tau4.
        #[arg(long, num_args = 4, value_names = ["T1", "T2", "T3", "T4"])]
        tau: Option<Vec<f64>>,
        /// Write the trace CSV here instead of stdout.
        #[arg(long, value_name = "out.csv")]
        trace: Option<PathBuf>,
    },
    /// Sum many jittered single-block staircases into a smoothed Page curve.
    Ensemble {
        /// Number of independent four-qubit blocks.
        #[arg(long)]
        blocks: usize,
        /// Seed for the per-block jitter substreams.
        #[arg(long)]
        seed: u64,
        /// Base instants tau1..tau4.
        #[arg(long, num_args = 4, value_names = ["T1", "T2", "T3", "T4"], required = true)]
        tau: Vec<f64>,
        /// Jitter half-widths w1..w4.
        #[arg(long, num_args = 4, value_names = ["W1", "W2", "W3", "W4"], required = true)]
        jitter: Vec<f64>,
        /// End of the time grid (must exceed tau4 + w4).
        #[arg(long = "t-end")]
        t_end: f64,
        /// Number of grid points spanning [0, t-end].
        #[arg(long)]
        samples: usize,
        /// Which entropy the blocks contribute.
        #[arg(long, value_enum, default_value_t = ModeArg::Total)]
        mode: ModeArg,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<VariantArg> for Variant {
    fn from(value: VariantArg) -> Self {
        match value {
            VariantArg::A => Variant::A,
            VariantArg::B => Variant::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Total,
    Radiation,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Total => Mode::Total,
            ModeArg::Radiation => Mode::Radiation,
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Run {
            file,
            trace,
            json,
            bits,
        } => cmd_run(&file, trace.as_deref(), json, bits),
        Command::Paper {
            variant,
            lambda,
            mu,
            alpha,
            beta,
            tau,
            trace,
        } => cmd_paper(variant.into(), lambda, mu, alpha, beta, tau, trace.as_deref()),
        Command::Ensemble {
            blocks,
            seed,
            tau,
            jitter,
            t_end,
            samples,
            mode,
            out,
        } => cmd_ensemble(blocks, seed, &tau, &jitter, t_end, samples, mode.into(), &out),
    };
    ExitCode::from(code)
}

fn print_diagnostics(source: &str, diagnostics: &[Diagnostic]) {
    for diag in diagnostics {
        eprintln!("{source}:{diag}");
    }
}

/// Causality violations rendered as diagnostics on the source lines of the
/// offending events.
fn violation_diagnostics(doc: &CircuitDocument, violations: &[CausalityViolation]) -> Vec<Diagnostic> {
    violations
        .iter()
        .map(|v| {
            let names: Vec<&str> = v
                .qubits
                .iter()
                .map(|&q| doc.circuit.names()[q].as_str())
                .collect();
            Diagnostic {
                line: doc.event_lines.get(v.event_index).copied().unwrap_or(0),
                column: 1,
                severity: Severity::Error,
                message: format!("causality violation: {} on {}", v.kind, names.join(", ")),
                violation: Some(v.clone()),
            }
        })
        .collect()
}

fn load_document(file: &Path) -> Result<CircuitDocument, u8> {
    let source = file.display().to_string();
    let text = match std::fs::read_to_string(file) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("{source}: {err}");
            return Err(EXIT_INTERNAL);
        }
    };
    match parse_circuit(&source, &text) {
        Ok(doc) => Ok(doc),
        Err(diagnostics) => {
            print_diagnostics(&source, &diagnostics);
            Err(EXIT_PARSE)
        }
    }
}

fn cmd_validate(file: &Path) -> u8 {
    let doc = match load_document(file) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let violations = validate_circuit(&doc.circuit);
    if !violations.is_empty() {
        print_diagnostics(&doc.name, &violation_diagnostics(&doc, &violations));
        return EXIT_VIOLATIONS;
    }
    println!(
        "{}: ok ({} qubits, {} events, causal)",
        doc.name,
        doc.circuit.n_qubits(),
        doc.circuit.events().len()
    );
    EXIT_OK
}

fn trace_json(trace: &EntropyTrace, bits: bool) -> serde_json::Value {
    let scale = if bits {
        std::f64::consts::LN_2
    } else {
        1.0
    };
    json!({
        "unit": if bits { "bits" } else { "nats" },
        "contribution_names": trace.contribution_names,
        "samples": trace.samples.iter().map(|s| {
            json!({
                "event_index": s.index,
                "time": s.time,
                "event": s.label,
                "s_total": s.s_total / scale,
                "contributions": s.contributions.iter().map(|c| c / scale).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    })
}

fn write_or_fail(path: &Path, contents: &str) -> Result<(), u8> {
    if let Err(err) = std::fs::write(path, contents) {
        eprintln!("{}: {err}", path.display());
        return Err(EXIT_INTERNAL);
    }
    Ok(())
}

fn cmd_run(file: &Path, trace_out: Option<&Path>, json: bool, bits: bool) -> u8 {
    let doc = match load_document(file) {
        Ok(doc) => doc,
        Err(code) => return code,
    };
    let violations = validate_circuit(&doc.circuit);
    if !violations.is_empty() {
        print_diagnostics(&doc.name, &violation_diagnostics(&doc, &violations));
        return EXIT_VIOLATIONS;
    }
    let (_, trace) = match qbh_core::horizon::run(&doc.circuit) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("{}: {err}", doc.name);
            return EXIT_INTERNAL;
        }
    };
    let csv = render_trace_csv(&trace, bits);
    if let Some(path) = trace_out {
        if let Err(code) = write_or_fail(path, &csv) {
            return code;
        }
        if !json {
            println!("trace written to {}", path.display());
        }
    }
    if json {
        println!("{}", trace_json(&trace, bits));
    } else if trace_out.is_none() {
        print!("{csv}");
    }
    EXIT_OK
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn print_stage_state(label: &str, state: &PureState) {
    println!("  {label} (basis |m g minus plus>):");
    for index in 0..state.amplitudes().len() {
        let amp = state.amplitude(index);
        if amp.norm_sqr() > 0.0 {
            println!("    |{index:04b}> = {}", fmt_complex(amp));
        }
    }
}

fn pair_or_default(pair: Option<Vec<f64>>, default: (f64, f64)) -> Complex64 {
    match pair {
        Some(values) => Complex64::new(values[0], values[1]),
        None => Complex64::new(default.0, default.1),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_paper(
    variant: Variant,
    lambda: Option<Vec<f64>>,
    mu: Option<Vec<f64>>,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
    tau: Option<Vec<f64>>,
    trace_out: Option<&Path>,
) -> u8 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let lambda = pair_or_default(lambda, (r, 0.0));
    let mu = pair_or_default(mu, (r, 0.0));
    let alpha = pair_or_default(alpha, (r, 0.0));
    let beta = pair_or_default(beta, (r, 0.0));
    let params = match ModelParams::new(lambda, mu, alpha, beta) {
        Ok(params) => params,
        Err(err) => {
            eprintln!("invalid parameters: {err}");
            return EXIT_INTERNAL;
        }
    };
    let schedule = match tau {
        Some(t) => match Schedule::new(t[0], t[1], t[2], t[3]) {
            Ok(schedule) => schedule,
            Err(err) => {
                eprintln!("invalid schedule: {err}");
                return EXIT_INTERNAL;
            }
        },
        None => Schedule::default_instants(),
    };

    let circuit = build_canonical(&params, &schedule, variant);
    let contributions = [
        ("S_prime".to_string(), vec![Q_M, Q_G]),
        ("S_bis".to_string(), vec![Q_MINUS, Q_PLUS]),
    ];
    let (final_state, trace) = match run_with_contributions(&circuit, &contributions) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("canonical run failed: {err}");
            return EXIT_INTERNAL;
        }
    };

    let [tau1, tau2, tau3, tau4] = schedule.taus();
    println!("canonical evaporation circuit, variant {}", variant.letter());
    println!(
        "qubits: {} (first declared = most significant bit)",
        QUBIT_NAMES.join(", ")
    );
    println!(
        "params: lambda = {}, mu = {}",
        fmt_complex(params.lambda()),
        fmt_complex(params.mu())
    );
    println!(
        "        alpha  = {}, beta = {}",
        fmt_complex(params.alpha()),
        fmt_complex(params.beta())
    );
    println!("schedule: tau1 = {tau1}, tau2 = {tau2}, tau3 = {tau3}, tau4 = {tau4}");
    let sp = s_prime(params.lambda(), params.mu()).expect("validated params");
    let sb = s_bis(params.alpha(), params.beta()).expect("validated params");
    println!(
        "entropy steps: S' = {:.12} nats, S'' = {:.12} nats",
        sp.nats(),
        sb.nats()
    );
    println!();
    println!("stage states:");
    let states = stage_states(&params);
    for (i, state) in states.iter().enumerate() {
        print_stage_state(&format!("Psi{i}"), state);
    }
    println!("  final (from the engine):");
    print_stage_state("engine", &final_state);
    let s_final = EntropyValue::from_nats(trace.samples.last().expect("non-empty trace").s_total);
    println!();
    println!("final inside entropy: {:.12} nats", s_final.nats());
    println!();

    let csv = render_trace_csv(&trace, false);
    match trace_out {
        Some(path) => {
            if let Err(code) = write_or_fail(path, &csv) {
                return code;
            }
            println!("trace written to {}", path.display());
        }
        None => {
            println!("trace:");
            print!("{csv}");
        }
    }
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_ensemble(
    blocks: usize,
    seed: u64,
    tau: &[f64],
    jitter: &[f64],
    t_end: f64,
    samples: usize,
    mode: Mode,
    out: &Path,
) -> u8 {
    let schedule = match Schedule::new(tau[0], tau[1], tau[2], tau[3]) {
        Ok(schedule) => schedule,
        Err(err) => {
            eprintln!("invalid schedule: {err}");
            return EXIT_INTERNAL;
        }
    };
    let config = EnsembleConfig {
        blocks,
        schedule,
        jitter: [jitter[0], jitter[1], jitter[2], jitter[3]],
        params: ModelParams::symmetric(),
        seed,
        samples,
        t_end,
        mode,
    };
    let curve = match ensemble_page_curve(&config) {
        Ok(curve) => curve,
        Err(err) => {
            eprintln!("{err}");
            return EXIT_INTERNAL;
        }
    };
    let csv = render_page_curve_csv(&curve);
    if let Err(code) = write_or_fail(out, &csv) {
        return code;
    }
    println!(
        "wrote {} grid points x {} blocks to {}",
        curve.samples.len(),
        blocks,
        out.display()
    );
    EXIT_OK
}
