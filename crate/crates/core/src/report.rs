//! Trace and Page-curve serialization. CSV is the interchange boundary;
//! reals carry 12 fixed decimal digits so reruns within one build are
//! byte-identical.

use std::fmt::Write;

use crate::horizon::EntropyTrace;
use crate::model::PageCurve;

const LN_2: f64 = std::f64::consts::LN_2;

fn fmt_real(value: f64) -> String {
    format!("{value:.12}")
}

/// Renders a trace as CSV with header
/// `event_index,time,event,S_total[,<contribution names...>]`.
///
/// With `bits` set, entropy columns are divided by ln 2 for display.
pub fn render_trace_csv(trace: &EntropyTrace, bits: bool) -> String {
    let scale = if bits { LN_2 } else { 1.0 };
    let mut out = String::new();
    out.push_str("event_index,time,event,S_total");
    for name in &trace.contribution_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for sample in &trace.samples {
        write!(
            out,
            "{},{},{},{}",
            sample.index,
            fmt_real(sample.time),
            sample.label,
            fmt_real(sample.s_total / scale)
        )
        .expect("writing to a String cannot fail");
        for value in &sample.contributions {
            out.push(',');
            out.push_str(&fmt_real(value / scale));
        }
        out.push('\n');
    }
    out
}

/// Renders a Page curve as CSV with header `time,S_sum,S_mean`.
pub fn render_page_curve_csv(curve: &PageCurve) -> String {
    let mut out = String::from("time,S_sum,S_mean\n");
    for point in &curve.samples {
        writeln!(
            out,
            "{},{},{}",
            fmt_real(point.time),
            fmt_real(point.sum),
            fmt_real(point.mean)
        )
        .expect("writing to a String cannot fail");
    }
    out
}
