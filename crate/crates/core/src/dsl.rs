//! Line-oriented circuit description language.
//!
//! ```text
//! # comment lines start with '#'
//! qubit NAME [inside]
//! init NAME (RE,IM) (RE,IM)          amplitudes of |0> and |1>
//! [@TIME] u NAME (RE,IM) x4          row-major 2x2 unitary
//! [@TIME] cnot CONTROL TARGET
//! [@TIME] swap A B
//! [@TIME] cross NAME                 outside -> inside only
//! ```
//!
//! Tokens are whitespace-separated; a complex literal is one token with no
//! internal spaces, as is the `@TIME` prefix. Event times default to the
//! event's ordinal (1-based) and may never decrease.

use num_complex::Complex64;

use crate::horizon::CausalityViolation;
use crate::horizon::{Circuit, Region, TimelineEvent};
use crate::statevec::{GateSpec, Matrix2, NORM_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse- or validation-level finding pointing into the source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    /// 1-based source line.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub severity: Severity,
    pub message: String,
    /// Present when the diagnostic wraps a causality violation located at a
    /// source event.
    pub violation: Option<CausalityViolation>,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            severity: Severity::Error,
            message: message.into(),
            violation: None,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, severity, self.message
        )
    }
}

/// A parsed circuit plus the source line of every timeline event, for
/// diagnostics that point back into the file.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDocument {
    /// Source path or display name.
    pub name: String,
    pub circuit: Circuit,
    /// Source line (1-based) of each event, aligned with `circuit.events()`.
    pub event_lines: Vec<usize>,
}

fn is_name(token: &str) -> bool {
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '+' || c == '-')
}

fn parse_float(token: &str) -> Option<f64> {
    let value: f64 = token.parse().ok()?;
    value.is_finite().then_some(value)
}

fn parse_complex(token: &str) -> Option<Complex64> {
    let inner = token.strip_prefix('(')?.strip_suffix(')')?;
    let (re, im) = inner.split_once(',')?;
    Some(Complex64::new(parse_float(re)?, parse_float(im)?))
}

/// Splits a line into (1-based column, token) pairs on whitespace.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut column = 0usize;
    let mut start: Option<usize> = None;
    let mut start_col = 0usize;
    for (byte, ch) in line.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((start_col, &line[s..byte]));
            }
        } else if start.is_none() {
            start = Some(byte);
            start_col = column;
        }
    }
    if let Some(s) = start {
        tokens.push((start_col, &line[s..]));
    }
    tokens
}

struct PendingQubit {
    name: String,
    region: Region,
    factor: (Complex64, Complex64),
    init_seen: bool,
}

/// Per-line parse context: the directive token, its arguments and the sink
/// for diagnostics.
struct LineCtx<'t, 'd> {
    line: usize,
    dir_col: usize,
    directive: &'t str,
    args: &'d [(usize, &'t str)],
    diagnostics: &'d mut Vec<Diagnostic>,
}

impl<'t, 'd> LineCtx<'t, 'd> {
    fn error(&mut self, column: usize, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::error(self.line, column, message));
    }

    fn arg_col(&self, i: usize) -> usize {
        self.args.get(i).map(|(c, _)| *c).unwrap_or(self.dir_col)
    }

    /// A declared qubit name at argument `i`.
    fn name_arg(&mut self, qubits: &[PendingQubit], i: usize) -> Option<usize> {
        let Some(&(col, token)) = self.args.get(i) else {
            let directive = self.directive;
            self.error(self.dir_col, format!("`{directive}` is missing a qubit name"));
            return None;
        };
        if !is_name(token) {
            self.error(col, format!("`{token}` is not a valid qubit name"));
            return None;
        }
        match qubits.iter().position(|q| q.name == token) {
            Some(index) => Some(index),
            None => {
                self.error(col, format!("undeclared qubit `{token}`"));
                None
            }
        }
    }

    fn complex_arg(&mut self, i: usize) -> Option<Complex64> {
        let Some(&(col, token)) = self.args.get(i) else {
            let directive = self.directive;
            self.error(
                self.dir_col,
                format!("`{directive}` is missing a complex literal"),
            );
            return None;
        };
        match parse_complex(token) {
            Some(value) => Some(value),
            None => {
                self.error(
                    col,
                    format!("malformed complex literal `{token}`, expected (RE,IM)"),
                );
                None
            }
        }
    }
}

/// Parses a circuit document, returning every diagnostic on failure.
///
/// The parser keeps going after an error so one pass reports all the
/// problems it can see; any error-severity diagnostic fails the parse.
pub fn parse_circuit(name: &str, text: &str) -> Result<CircuitDocument, Vec<Diagnostic>> {
    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    let mut qubits: Vec<PendingQubit> = Vec::new();
    let mut events: Vec<TimelineEvent> = Vec::new();
    let mut event_lines: Vec<usize> = Vec::new();
    let mut prev_time = f64::NEG_INFINITY;

    for (line_index, raw_line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let tokens = tokenize(raw_line);
        if tokens.is_empty() || tokens[0].1.starts_with('#') {
            continue;
        }

        // optional @TIME prefix
        let mut cursor = 0usize;
        let mut explicit_time = None;
        if let Some(rest) = tokens[0].1.strip_prefix('@') {
            match parse_float(rest) {
                Some(t) => explicit_time = Some(t),
                None => {
                    diagnostics.push(Diagnostic::error(
                        line_no,
                        tokens[0].0,
                        format!("malformed time `{}`", tokens[0].1),
                    ));
                    continue;
                }
            }
            cursor = 1;
            if cursor >= tokens.len() {
                diagnostics.push(Diagnostic::error(
                    line_no,
                    tokens[0].0,
                    "time prefix without a directive",
                ));
                continue;
            }
        }

        let (dir_col, directive) = tokens[cursor];
        let args: Vec<(usize, &str)> = tokens[cursor + 1..].to_vec();
        let mut ctx = LineCtx {
            line: line_no,
            dir_col,
            directive,
            args: &args,
            diagnostics: &mut diagnostics,
        };

        // effective event time: explicit or the 1-based ordinal
        let time = explicit_time.unwrap_or((events.len() + 1) as f64);

        // monotonicity gate shared by every event directive
        macro_rules! push_event {
            ($event:expr) => {{
                if time < prev_time {
                    ctx.error(
                        tokens[0].0,
                        format!(
                            "event time {time} decreases below the previous event at {prev_time}"
                        ),
                    );
                } else {
                    prev_time = time;
                    events.push($event);
                    event_lines.push(line_no);
                }
            }};
        }

        match directive {
            "qubit" => {
                if explicit_time.is_some() {
                    ctx.error(tokens[0].0, "`qubit` does not take a time prefix");
                    continue;
                }
                if args.is_empty() || args.len() > 2 {
                    ctx.error(dir_col, "usage: qubit NAME [inside]");
                    continue;
                }
                let (col, name_token) = args[0];
                if !is_name(name_token) {
                    ctx.error(col, format!("`{name_token}` is not a valid qubit name"));
                    continue;
                }
                let region = if let Some(&(rcol, flag)) = args.get(1) {
                    if flag != "inside" {
                        ctx.error(rcol, format!("expected `inside`, found `{flag}`"));
                        continue;
                    }
                    Region::Inside
                } else {
                    Region::Outside
                };
                if qubits.iter().any(|q| q.name == name_token) {
                    ctx.error(col, format!("duplicate qubit name `{name_token}`"));
                    continue;
                }
                qubits.push(PendingQubit {
                    name: name_token.to_string(),
                    region,
                    factor: (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
                    init_seen: false,
                });
            }
            "init" => {
                if explicit_time.is_some() {
                    ctx.error(tokens[0].0, "`init` does not take a time prefix");
                    continue;
                }
                if args.len() != 3 {
                    ctx.error(dir_col, "usage: init NAME (RE,IM) (RE,IM)");
                    continue;
                }
                let Some(index) = ctx.name_arg(&qubits, 0) else {
                    continue;
                };
                let Some(a0) = ctx.complex_arg(1) else {
                    continue;
                };
                let Some(a1) = ctx.complex_arg(2) else {
                    continue;
                };
                if qubits[index].init_seen {
                    let qname = qubits[index].name.clone();
                    ctx.error(ctx.arg_col(0), format!("qubit `{qname}` is initialized twice"));
                    continue;
                }
                let norm = a0.norm_sqr() + a1.norm_sqr();
                if (norm - 1.0).abs() > NORM_TOL {
                    ctx.error(
                        ctx.arg_col(1),
                        format!("initial amplitudes are not normalized: |a0|^2 + |a1|^2 = {norm}"),
                    );
                    continue;
                }
                qubits[index].factor = (a0, a1);
                qubits[index].init_seen = true;
            }
            "u" => {
                if args.len() != 5 {
                    ctx.error(dir_col, "usage: [@TIME] u NAME (RE,IM) (RE,IM) (RE,IM) (RE,IM)");
                    continue;
                }
                let Some(target) = ctx.name_arg(&qubits, 0) else {
                    continue;
                };
                let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
                let mut ok = true;
                for k in 0..4 {
                    match ctx.complex_arg(1 + k) {
                        Some(v) => entries[k / 2][k % 2] = v,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                match Matrix2::new(entries) {
                    Ok(matrix) => {
                        push_event!(TimelineEvent::gate(
                            time,
                            GateSpec::Unitary1Q { matrix, target }
                        ));
                    }
                    Err(err) => ctx.error(ctx.arg_col(1), err.to_string()),
                }
            }
            "cnot" | "swap" => {
                if args.len() != 2 {
                    ctx.error(dir_col, format!("usage: [@TIME] {directive} NAME NAME"));
                    continue;
                }
                let Some(first) = ctx.name_arg(&qubits, 0) else {
                    continue;
                };
                let Some(second) = ctx.name_arg(&qubits, 1) else {
                    continue;
                };
                if first == second {
                    let what = if directive == "cnot" {
                        "control equals target"
                    } else {
                        "swap endpoints are equal"
                    };
                    ctx.error(ctx.arg_col(1), what);
                    continue;
                }
                let gate = if directive == "cnot" {
                    GateSpec::Cnot {
                        control: first,
                        target: second,
                    }
                } else {
                    GateSpec::Swap {
                        a: first,
                        b: second,
                    }
                };
                push_event!(TimelineEvent::gate(time, gate));
            }
            "cross" => {
                if args.len() != 1 {
                    ctx.error(dir_col, "usage: [@TIME] cross NAME");
                    continue;
                }
                let Some(qubit) = ctx.name_arg(&qubits, 0) else {
                    continue;
                };
                push_event!(TimelineEvent::crossing(time, qubit));
            }
            other => {
                ctx.error(dir_col, format!("unknown directive `{other}`"));
            }
        }
    }

    if qubits.is_empty() {
        diagnostics.push(Diagnostic::error(1, 1, "no qubits declared"));
    }

    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(diagnostics);
    }

    let circuit = Circuit::new(
        qubits.iter().map(|q| q.name.clone()).collect(),
        qubits.iter().map(|q| q.region).collect(),
        qubits.iter().map(|q| q.factor).collect(),
        events,
    )
    .map_err(|err| vec![Diagnostic::error(1, 1, err.to_string())])?;

    Ok(CircuitDocument {
        name: name.to_string(),
        circuit,
        event_lines,
    })
}
