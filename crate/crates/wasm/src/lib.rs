//! Browser bindings: JSON-in/JSON-out wrappers over the core simulator for
//! the static demo page. Everything here is plain data so the same functions
//! run under native tests and wasm-bindgen alike.

use wasm_bindgen::prelude::*;

use serde_json::json;

use qbh_core::dsl::parse_circuit;
use qbh_core::horizon::{run_with_contributions, validate_circuit, EntropyTrace};
use qbh_core::model::{
    build_canonical, ensemble_page_curve, s_bis, s_prime, stage_states, EnsembleConfig,
    ModelParams, Mode, Schedule, Variant, Q_G, Q_M, Q_MINUS, Q_PLUS,
};
use qbh_core::Complex64;

fn mode_from(name: &str) -> Mode {
    if name == "radiation" {
        Mode::Radiation
    } else {
        Mode::Total
    }
}

fn err_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn trace_value(trace: &EntropyTrace) -> serde_json::Value {
    json!({
        "contribution_names": trace.contribution_names,
        "samples": trace.samples.iter().map(|s| json!({
            "event_index": s.index,
            "time": s.time,
            "event": s.label,
            "s_total": s.s_total,
            "contributions": s.contributions,
        })).collect::<Vec<_>>(),
    })
}

/// Builds and runs the canonical circuit for |lambda|^2 = `p_matter` and
/// |alpha|^2 = `p_hawking` (real amplitudes), returning the entropy trace,
/// the per-pair contributions and the four stage states as JSON.
#[wasm_bindgen]
pub fn canonical_trace_json(
    p_matter: f64,
    p_hawking: f64,
    variant: &str,
    tau1: f64,
    tau2: f64,
    tau3: f64,
    tau4: f64,
) -> String {
    if !(0.0..=1.0).contains(&p_matter) || !(0.0..=1.0).contains(&p_hawking) {
        return err_json("probabilities must lie in [0, 1]");
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let params = match ModelParams::new(
        c(p_matter.sqrt()),
        c((1.0 - p_matter).sqrt()),
        c(p_hawking.sqrt()),
        c((1.0 - p_hawking).sqrt()),
    ) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let schedule = match Schedule::new(tau1, tau2, tau3, tau4) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let variant = if variant == "B" { Variant::B } else { Variant::A };
    let circuit = build_canonical(&params, &schedule, variant);
    let contributions = [
        ("S_prime".to_string(), vec![Q_M, Q_G]),
        ("S_bis".to_string(), vec![Q_MINUS, Q_PLUS]),
    ];
    let (final_state, trace) = match run_with_contributions(&circuit, &contributions) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };

    let states = stage_states(&params);
    let state_json = |state: &qbh_core::statevec::PureState| {
        state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 1e-24)
            .map(|(i, a)| json!({ "ket": format!("{i:04b}"), "re": a.re, "im": a.im }))
            .collect::<Vec<_>>()
    };

    json!({
        "variant": if variant == Variant::B { "B" } else { "A" },
        "s_prime": s_prime(params.lambda(), params.mu()).map(|v| v.nats()).unwrap_or(0.0),
        "s_bis": s_bis(params.alpha(), params.beta()).map(|v| v.nats()).unwrap_or(0.0),
        "taus": [tau1, tau2, tau3, tau4],
        "trace": trace_value(&trace),
        "stage_states": {
            "Psi0": state_json(&states[0]),
            "Psi1": state_json(&states[1]),
            "Psi2": state_json(&states[2]),
            "Psi3": state_json(&states[3]),
            "final": state_json(&final_state),
        },
    })
    .to_string()
}

/// Sums `blocks` jittered staircases on a `samples`-point grid over
/// [0, t_end]; deterministic in `seed`. Returns times, sums and means.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn ensemble_json(
    blocks: u32,
    seed: u32,
    tau1: f64,
    tau2: f64,
    tau3: f64,
    tau4: f64,
    w1: f64,
    w2: f64,
    w3: f64,
    w4: f64,
    t_end: f64,
    samples: u32,
    mode: &str,
) -> String {
    let schedule = match Schedule::new(tau1, tau2, tau3, tau4) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let config = EnsembleConfig {
        blocks: blocks as usize,
        schedule,
        jitter: [w1, w2, w3, w4],
        params: ModelParams::symmetric(),
        seed: seed as u64,
        samples: samples as usize,
        t_end,
        mode: mode_from(mode),
    };
    match ensemble_page_curve(&config) {
        Ok(curve) => json!({
            "times": curve.samples.iter().map(|p| p.time).collect::<Vec<_>>(),
            "sums": curve.samples.iter().map(|p| p.sum).collect::<Vec<_>>(),
            "means": curve.samples.iter().map(|p| p.mean).collect::<Vec<_>>(),
        })
        .to_string(),
        Err(e) => err_json(e),
    }
}

/// Parses, validates and runs a circuit written in the qbh description
/// language. The result carries diagnostics, causality violations or the
/// entropy trace, mirroring the CLI's exit-code cases.
#[wasm_bindgen]
pub fn run_dsl_json(source: &str) -> String {
    let doc = match parse_circuit("editor", source) {
        Ok(doc) => doc,
        Err(diags) => {
            return json!({
                "status": "parse_error",
                "diagnostics": diags.iter().map(|d| json!({
                    "line": d.line,
                    "column": d.column,
                    "message": d.message,
                })).collect::<Vec<_>>(),
            })
            .to_string()
        }
    };
    let violations = validate_circuit(&doc.circuit);
    if !violations.is_empty() {
        return json!({
            "status": "causality_violation",
            "violations": violations.iter().map(|v| json!({
                "line": doc.event_lines.get(v.event_index).copied().unwrap_or(0),
                "event_index": v.event_index,
                "kind": v.kind.to_string(),
                "qubits": v.qubits.iter()
                    .map(|&q| doc.circuit.names()[q].clone())
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
        .to_string();
    }
    match qbh_core::horizon::run(&doc.circuit) {
        Ok((_, trace)) => json!({
            "status": "ok",
            "qubits": doc.circuit.names(),
            "trace": trace_value(&trace),
        })
        .to_string(),
        Err(e) => err_json(e),
    }
}
