//! Horizon bookkeeping: per-qubit regions, the gate-admissibility rules, and
//! the timeline runner that produces entropy traces.
//!
//! The rules are: a cross-horizon CNOT needs its control outside, a
//! cross-horizon SWAP is forbidden, and horizon crossings are inward-only.
//! Gates acting on one side only are unrestricted.

use std::fmt;

use num_complex::Complex64;

use crate::entropy::bipartite_entropy;
use crate::error::{Error, Result};
use crate::statevec::{GateSpec, PureState, MAX_QUBITS};

/// Which side of the horizon a qubit sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Outside,
    Inside,
}

/// Total assignment of a region to every circuit qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    regions: Vec<Region>,
}

impl RegionMap {
    pub fn new(regions: Vec<Region>) -> Self {
        Self { regions }
    }

    /// All-outside map for `n` qubits.
    pub fn all_outside(n: usize) -> Self {
        Self {
            regions: vec![Region::Outside; n],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.regions.len()
    }

    pub fn region(&self, qubit: usize) -> Result<Region> {
        self.regions
            .get(qubit)
            .copied()
            .ok_or(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.regions.len(),
            })
    }

    /// Indices of the qubits currently inside, ascending.
    pub fn inside_set(&self) -> Vec<usize> {
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Region::Inside)
            .map(|(q, _)| q)
            .collect()
    }
}

/// Moves `qubit` from Outside to Inside; crossings are inward-only, so a
/// qubit already inside is an [`Error::OutwardCrossing`].
pub fn apply_crossing(regions: &RegionMap, qubit: usize) -> Result<RegionMap> {
    match regions.region(qubit)? {
        Region::Inside => Err(Error::OutwardCrossing { qubit }),
        Region::Outside => {
            let mut next = regions.clone();
            next.regions[qubit] = Region::Inside;
            Ok(next)
        }
    }
}

/// The three ways an event can break the causality rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Cross-horizon CNOT whose control is the inner qubit.
    InnerControlCnot,
    /// SWAP acting across the horizon.
    CrossHorizonSwap,
    /// Crossing event for a qubit that is already inside.
    OutwardCrossing,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ViolationKind::InnerControlCnot => "inner-control CNOT",
            ViolationKind::CrossHorizonSwap => "cross-horizon SWAP",
            ViolationKind::OutwardCrossing => "outward crossing",
        };
        f.write_str(name)
    }
}

/// A causality violation located at one timeline event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalityViolation {
    /// Index into the circuit's event list.
    pub event_index: usize,
    pub kind: ViolationKind,
    /// Qubits involved in the offending event.
    pub qubits: Vec<usize>,
}

impl fmt::Display for CausalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "event {}: {} on qubits {:?}",
            self.event_index, self.kind, self.qubits
        )
    }
}

/// Event payload: either a gate or an inward horizon crossing.
#[derive(Debug, Clone, PartialEq)]
pub enum EventPayload {
    Gate(GateSpec),
    Crossing(usize),
}

/// A gate or crossing with its (non-decreasing) time tag.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineEvent {
    pub time: f64,
    pub payload: EventPayload,
}

impl TimelineEvent {
    pub fn gate(time: f64, gate: GateSpec) -> Self {
        Self {
            time,
            payload: EventPayload::Gate(gate),
        }
    }

    pub fn crossing(time: f64, qubit: usize) -> Self {
        Self {
            time,
            payload: EventPayload::Crossing(qubit),
        }
    }
}

/// Verdict of the admissibility check for a single event.
#[derive(Debug, Clone, PartialEq)]
pub enum EventVerdict {
    Allowed,
    Forbidden {
        kind: ViolationKind,
        qubits: Vec<usize>,
    },
}

/// Checks one event against the causality rules under the region map in
/// force. Unknown qubit indices are an error, distinct from a violation.
pub fn check_event(event: &TimelineEvent, regions: &RegionMap) -> Result<EventVerdict> {
    match &event.payload {
        EventPayload::Gate(gate) => {
            gate.validate(regions.n_qubits())?;
            match gate {
                GateSpec::Unitary1Q { target, .. } => {
                    regions.region(*target)?;
                    Ok(EventVerdict::Allowed)
                }
                GateSpec::Cnot { control, target } => {
                    let rc = regions.region(*control)?;
                    let rt = regions.region(*target)?;
                    if rc == rt || (rc == Region::Outside && rt == Region::Inside) {
                        Ok(EventVerdict::Allowed)
                    } else {
                        Ok(EventVerdict::Forbidden {
                            kind: ViolationKind::InnerControlCnot,
                            qubits: vec![*control, *target],
                        })
                    }
                }
                GateSpec::Swap { a, b } => {
                    let ra = regions.region(*a)?;
                    let rb = regions.region(*b)?;
                    if ra == rb {
                        Ok(EventVerdict::Allowed)
                    } else {
                        Ok(EventVerdict::Forbidden {
                            kind: ViolationKind::CrossHorizonSwap,
                            qubits: vec![*a, *b],
                        })
                    }
                }
            }
        }
        EventPayload::Crossing(qubit) => match regions.region(*qubit)? {
            Region::Outside => Ok(EventVerdict::Allowed),
            Region::Inside => Ok(EventVerdict::Forbidden {
                kind: ViolationKind::OutwardCrossing,
                qubits: vec![*qubit],
            }),
        },
    }
}

/// A full circuit: named qubits, their starting regions and one-qubit
/// factors, and the ordered timeline.
///
/// Structural validity (unique names, index ranges, non-decreasing times) is
/// enforced here, so a constructed `Circuit` is always well-formed; only
/// causality remains to be checked by [`validate_circuit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    names: Vec<String>,
    initial_regions: Vec<Region>,
    initial_factors: Vec<(Complex64, Complex64)>,
    events: Vec<TimelineEvent>,
}

impl Circuit {
    pub fn new(
        names: Vec<String>,
        initial_regions: Vec<Region>,
        initial_factors: Vec<(Complex64, Complex64)>,
        events: Vec<TimelineEvent>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyProduct);
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                got: n,
                max: MAX_QUBITS,
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateQubitName { name: name.clone() });
            }
        }
        if initial_regions.len() != n || initial_factors.len() != n {
            return Err(Error::FactorCountMismatch {
                names: n,
                factors: initial_factors.len().min(initial_regions.len()),
            });
        }
        let mut prev = f64::NEG_INFINITY;
        for (index, event) in events.iter().enumerate() {
            if !event.time.is_finite() {
                return Err(Error::NonFiniteTime { time: event.time });
            }
            if event.time < prev {
                return Err(Error::NonMonotoneTimes {
                    index,
                    time: event.time,
                    prev,
                });
            }
            prev = event.time;
            match &event.payload {
                EventPayload::Gate(gate) => gate.validate(n)?,
                EventPayload::Crossing(qubit) => {
                    if *qubit >= n {
                        return Err(Error::QubitOutOfRange {
                            index: *qubit,
                            n_qubits: n,
                        });
                    }
                }
            }
        }
        Ok(Self {
            names,
            initial_regions,
            initial_factors,
            events,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn qubit_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn initial_regions(&self) -> RegionMap {
        RegionMap::new(self.initial_regions.clone())
    }

    pub fn initial_factors(&self) -> &[(Complex64, Complex64)] {
        &self.initial_factors
    }

    pub fn events(&self) -> &[TimelineEvent] {
        &self.events
    }

    /// Stable display token for an event, used by trace output.
    pub fn event_label(&self, event: &TimelineEvent) -> String {
        match &event.payload {
            EventPayload::Gate(GateSpec::Unitary1Q { target, .. }) => {
                format!("u {}", self.names[*target])
            }
            EventPayload::Gate(GateSpec::Cnot { control, target }) => {
                format!("cnot {} {}", self.names[*control], self.names[*target])
            }
            EventPayload::Gate(GateSpec::Swap { a, b }) => {
                format!("swap {} {}", self.names[*a], self.names[*b])
            }
            EventPayload::Crossing(qubit) => format!("cross {}", self.names[*qubit]),
        }
    }

    /// Circuit truncated to its first `count` events; used for stage
    /// checkpointing.
    pub fn prefix(&self, count: usize) -> Circuit {
        Circuit {
            names: self.names.clone(),
            initial_regions: self.initial_regions.clone(),
            initial_factors: self.initial_factors.clone(),
            events: self.events[..count.min(self.events.len())].to_vec(),
        }
    }
}

/// Replays the region map over the timeline and collects every causality
/// violation with its event index. Amplitudes are never simulated.
///
/// An outward crossing leaves the region map undefined from that event on,
/// so the replay stops there; gate violations do not disturb the map and the
/// replay continues past them.
pub fn validate_circuit(circuit: &Circuit) -> Vec<CausalityViolation> {
    let mut regions = circuit.initial_regions();
    let mut violations = Vec::new();
    for (event_index, event) in circuit.events().iter().enumerate() {
        let verdict = check_event(event, &regions)
            .expect("constructed circuits reference declared qubits");
        match verdict {
            EventVerdict::Allowed => {
                if let EventPayload::Crossing(qubit) = &event.payload {
                    regions = apply_crossing(&regions, *qubit)
                        .expect("allowed crossing starts outside");
                }
            }
            EventVerdict::Forbidden { kind, qubits } => {
                let stop = kind == ViolationKind::OutwardCrossing;
                violations.push(CausalityViolation {
                    event_index,
                    kind,
                    qubits,
                });
                if stop {
                    break;
                }
            }
        }
    }
    violations
}

/// One row of an entropy trace: the state of affairs after `index` events.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    /// 0 for the initial sample, k after the k-th event.
    pub index: usize,
    pub time: f64,
    /// Stable event token (`init`, `u q`, `cnot c t`, `swap a b`, `cross q`).
    pub label: String,
    /// Entanglement entropy of the inside set, in nats (0 when empty).
    pub s_total: f64,
    /// Named subset contributions, aligned with the trace's names.
    pub contributions: Vec<f64>,
}

/// Time-stamped inside/outside entanglement entropies along a run.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    pub contribution_names: Vec<String>,
    pub samples: Vec<TraceSample>,
}

fn inside_entropy(state: &PureState, regions: &RegionMap) -> Result<f64> {
    let inside = regions.inside_set();
    if inside.is_empty() {
        return Ok(0.0);
    }
    Ok(bipartite_entropy(state, &inside)?.nats())
}

fn subset_entropy(state: &PureState, regions: &RegionMap, subset: &[usize]) -> Result<f64> {
    let inside: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&q| regions.region(q) == Ok(Region::Inside))
        .collect();
    if inside.is_empty() {
        return Ok(0.0);
    }
    Ok(bipartite_entropy(state, &inside)?.nats())
}

/// Runs a causal circuit: builds the initial product state, applies every
/// gate, moves crossings through the region map, and records the inside
/// entropy after every event (plus one initial sample).
pub fn run(circuit: &Circuit) -> Result<(PureState, EntropyTrace)> {
    run_with_contributions(circuit, &[])
}

/// [`run`] with additional named qubit subsets whose inside-part entropy is
/// recorded alongside the total at every sample.
pub fn run_with_contributions(
    circuit: &Circuit,
    contributions: &[(String, Vec<usize>)],
) -> Result<(PureState, EntropyTrace)> {
    let violations = validate_circuit(circuit);
    if !violations.is_empty() {
        return Err(Error::CausalityViolations { violations });
    }

    let mut state = PureState::init_product_state(circuit.initial_factors())?;
    let mut regions = circuit.initial_regions();

    let sample = |index: usize,
                  time: f64,
                  label: String,
                  state: &PureState,
                  regions: &RegionMap|
     -> Result<TraceSample> {
        let s_total = inside_entropy(state, regions)?;
        let mut values = Vec::with_capacity(contributions.len());
        for (_, subset) in contributions {
            values.push(subset_entropy(state, regions, subset)?);
        }
        Ok(TraceSample {
            index,
            time,
            label,
            s_total,
            contributions: values,
        })
    };

    let mut samples = Vec::with_capacity(circuit.events().len() + 1);
    samples.push(sample(0, 0.0, "init".to_string(), &state, &regions)?);

    for (i, event) in circuit.events().iter().enumerate() {
        match &event.payload {
            EventPayload::Gate(gate) => {
                state = state.apply(gate)?;
            }
            EventPayload::Crossing(qubit) => {
                regions = apply_crossing(&regions, *qubit)?;
            }
        }
        samples.push(sample(
            i + 1,
            event.time,
            circuit.event_label(event),
            &state,
            &regions,
        )?);
    }

    let trace = EntropyTrace {
        contribution_names: contributions.iter().map(|(n, _)| n.clone()).collect(),
        samples,
    };
    Ok((state, trace))
}
