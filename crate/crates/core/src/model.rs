//! The canonical four-qubit evaporation circuit, its closed-form entropy
//! plateaus, stage-state checkpoints, and the many-block Page-curve
//! generator.
//!
//! The four qubits are `m` (matter), `g` (graviton), `minus` and `plus` (the
//! negative- and positive-energy halves of a Hawking pair), in that order.

use num_complex::Complex64;

use crate::entropy::{two_outcome_entropy, EntropyValue};
use crate::error::{Error, Result};
use crate::horizon::{Circuit, Region, TimelineEvent};
use crate::statevec::{GateSpec, Matrix2, PureState};

/// Tolerance on |a|^2 + |b|^2 - 1 for parameter pairs.
pub const PAIR_NORM_TOL: f64 = 1e-9;

/// Qubit order of the canonical circuit.
pub const QUBIT_NAMES: [&str; 4] = ["m", "g", "minus", "plus"];
pub const Q_M: usize = 0;
pub const Q_G: usize = 1;
pub const Q_MINUS: usize = 2;
pub const Q_PLUS: usize = 3;

fn pair_norm(a: Complex64, b: Complex64) -> f64 {
    a.norm_sqr() + b.norm_sqr()
}

fn check_pair(which: &'static str, a: Complex64, b: Complex64) -> Result<()> {
    let norm = pair_norm(a, b);
    if !norm.is_finite() || (norm - 1.0).abs() > PAIR_NORM_TOL {
        return Err(Error::UnnormalizedPair { which, norm });
    }
    Ok(())
}

/// The model coefficients: (lambda, mu) prepare the matter qubit, (alpha,
/// beta) define the Hawking process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: Complex64,
    mu: Complex64,
    alpha: Complex64,
    beta: Complex64,
}

impl ModelParams {
    pub fn new(
        lambda: Complex64,
        mu: Complex64,
        alpha: Complex64,
        beta: Complex64,
    ) -> Result<Self> {
        check_pair("(lambda, mu)", lambda, mu)?;
        check_pair("(alpha, beta)", alpha, beta)?;
        Ok(Self {
            lambda,
            mu,
            alpha,
            beta,
        })
    }

    /// The symmetric case: all four coefficients 1/sqrt(2). Makes both
    /// entropy steps equal to ln 2.
    pub fn symmetric() -> Self {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            lambda: r,
            mu: r,
            alpha: r,
            beta: r,
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// The four horizon-crossing instants. Strictly increasing, with tau1 > 0 so
/// the whole schedule lives in the model's time domain [0, inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    tau1: f64,
    tau2: f64,
    tau3: f64,
    tau4: f64,
}

impl Schedule {
    pub fn new(tau1: f64, tau2: f64, tau3: f64, tau4: f64) -> Result<Self> {
        let taus = [tau1, tau2, tau3, tau4];
        if taus.iter().any(|t| !t.is_finite()) {
            return Err(Error::BadSchedule);
        }
        if !(0.0 < tau1 && tau1 < tau2 && tau2 < tau3 && tau3 < tau4) {
            return Err(Error::BadSchedule);
        }
        Ok(Self {
            tau1,
            tau2,
            tau3,
            tau4,
        })
    }

    /// Default instants (4, 5, 8, 10): every canonical event lands on an
    /// integer time, so default traces read like event ordinals.
    pub fn default_instants() -> Self {
        Self {
            tau1: 4.0,
            tau2: 5.0,
            tau3: 8.0,
            tau4: 10.0,
        }
    }

    pub fn tau(&self, i: usize) -> f64 {
        match i {
            1 => self.tau1,
            2 => self.tau2,
            3 => self.tau3,
            4 => self.tau4,
            _ => panic!("schedule instants are numbered 1..=4"),
        }
    }

    pub fn taus(&self) -> [f64; 4] {
        [self.tau1, self.tau2, self.tau3, self.tau4]
    }
}

/// The one-qubit Hawking unitary, completed as [[alpha, -conj(beta)],
/// [beta, conj(alpha)]] so that U|0> = alpha|0> + beta|1>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HawkingUnitary {
    matrix: Matrix2,
}

impl HawkingUnitary {
    pub fn matrix(&self) -> &Matrix2 {
        &self.matrix
    }

    /// The inverse (adjoint) used by Stage 3 to reset the graviton.
    pub fn inverse(&self) -> Matrix2 {
        self.matrix.adjoint()
    }
}

/// Builds the Hawking unitary from its first column.
pub fn hawking_unitary(alpha: Complex64, beta: Complex64) -> Result<HawkingUnitary> {
    check_pair("(alpha, beta)", alpha, beta)?;
    let matrix = Matrix2::new([[alpha, -beta.conj()], [beta, alpha.conj()]])?;
    Ok(HawkingUnitary { matrix })
}

/// Stage-3 layout of the canonical circuit.
///
/// A: the disentangling CNOT reaches across the horizon (control g outside,
/// target m inside) and g is reset outside. B: g crosses at tau3 first and
/// the same gates run entirely inside. Both produce identical entropy
/// traces at shared sample times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    pub fn letter(&self) -> &'static str {
        match self {
            Variant::A => "A",
            Variant::B => "B",
        }
    }
}

/// Builds the canonical evaporation circuit of the four-qubit model.
///
/// Timeline (times in parentheses): Stage 1 entangles (m,g) and produces the
/// Hawking pair on (minus,plus), entirely outside (tau1/4, tau1/2, 3tau1/4);
/// m crosses at tau1 and minus at tau2; Stage 2 swaps (m,minus) inside and
/// (g,plus) outside (tau2 + (tau3-tau2)/3, tau2 + 2(tau3-tau2)/3); Stage 3
/// disentangles (m,g) at tau3 and (minus,plus) at tau4, with the graviton
/// reset by the inverse Hawking unitary in between.
pub fn build_canonical(params: &ModelParams, schedule: &Schedule, variant: Variant) -> Circuit {
    let u_h = hawking_unitary(params.alpha(), params.beta())
        .expect("params are normalized at construction");
    let [tau1, tau2, tau3, tau4] = schedule.taus();

    let names: Vec<String> = QUBIT_NAMES.iter().map(|s| s.to_string()).collect();
    let regions = vec![Region::Outside; 4];
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let factors = vec![
        (params.lambda(), params.mu()),
        (one, zero),
        (one, zero),
        (one, zero),
    ];

    let mut events = vec![
        // Stage 1: the "Hawking" box, all outside
        TimelineEvent::gate(tau1 * 0.25, GateSpec::Cnot { control: Q_M, target: Q_G }),
        TimelineEvent::gate(
            tau1 * 0.5,
            GateSpec::Unitary1Q {
                matrix: *u_h.matrix(),
                target: Q_MINUS,
            },
        ),
        TimelineEvent::gate(
            tau1 * 0.75,
            GateSpec::Cnot {
                control: Q_MINUS,
                target: Q_PLUS,
            },
        ),
        // crossings
        TimelineEvent::crossing(tau1, Q_M),
        TimelineEvent::crossing(tau2, Q_MINUS),
        // Stage 2: swaps on each side of the horizon
        TimelineEvent::gate(
            tau2 + (tau3 - tau2) / 3.0,
            GateSpec::Swap { a: Q_M, b: Q_MINUS },
        ),
        TimelineEvent::gate(
            tau2 + 2.0 * (tau3 - tau2) / 3.0,
            GateSpec::Swap { a: Q_G, b: Q_PLUS },
        ),
    ];

    match variant {
        Variant::A => {
            events.push(TimelineEvent::gate(
                tau3,
                GateSpec::Cnot { control: Q_G, target: Q_M },
            ));
            events.push(TimelineEvent::gate(
                tau3 + (tau4 - tau3) * 0.5,
                GateSpec::Unitary1Q {
                    matrix: u_h.inverse(),
                    target: Q_G,
                },
            ));
        }
        Variant::B => {
            events.push(TimelineEvent::crossing(tau3, Q_G));
            events.push(TimelineEvent::gate(
                tau3 + (tau4 - tau3) / 3.0,
                GateSpec::Cnot { control: Q_G, target: Q_M },
            ));
            events.push(TimelineEvent::gate(
                tau3 + 2.0 * (tau4 - tau3) / 3.0,
                GateSpec::Unitary1Q {
                    matrix: u_h.inverse(),
                    target: Q_G,
                },
            ));
        }
    }

    events.push(TimelineEvent::gate(
        tau4,
        GateSpec::Cnot {
            control: Q_PLUS,
            target: Q_MINUS,
        },
    ));

    Circuit::new(names, regions, factors, events).expect("canonical circuit is well-formed")
}

/// Entropy step from the matter pair: -|lambda|^2 ln|lambda|^2 - |mu|^2
/// ln|mu|^2.
pub fn s_prime(lambda: Complex64, mu: Complex64) -> Result<EntropyValue> {
    check_pair("(lambda, mu)", lambda, mu)?;
    Ok(EntropyValue::from_nats(two_outcome_entropy(
        lambda.norm_sqr(),
    )))
}

/// Entropy step from the Hawking pair: -|alpha|^2 ln|alpha|^2 - |beta|^2
/// ln|beta|^2.
pub fn s_bis(alpha: Complex64, beta: Complex64) -> Result<EntropyValue> {
    check_pair("(alpha, beta)", alpha, beta)?;
    Ok(EntropyValue::from_nats(two_outcome_entropy(
        alpha.norm_sqr(),
    )))
}

/// The four checkpoint states of the canonical circuit, as explicit
/// amplitude vectors in the (m, g, minus, plus) basis order:
/// the initial product state, the post-Stage-1 pair product, the
/// post-Stage-2 exchanged product, and the final disentangled state.
pub fn stage_states(params: &ModelParams) -> [PureState; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let (l, m) = (params.lambda(), params.mu());
    let (a, b) = (params.alpha(), params.beta());

    let mut psi0 = vec![zero; 16];
    psi0[0b0000] = l;
    psi0[0b1000] = m;

    // (l|00> + m|11>)_mg (x) (a|00> + b|11>)_-+
    let mut psi1 = vec![zero; 16];
    psi1[0b0000] = l * a;
    psi1[0b0011] = l * b;
    psi1[0b1100] = m * a;
    psi1[0b1111] = m * b;

    // pairs exchanged by the Stage-2 swaps
    let mut psi2 = vec![zero; 16];
    psi2[0b0000] = a * l;
    psi2[0b0011] = a * m;
    psi2[0b1100] = b * l;
    psi2[0b1111] = b * m;

    // |000> (x) (l|0> + m|1>) on the outgoing plus qubit
    let mut psi3 = vec![zero; 16];
    psi3[0b0000] = l;
    psi3[0b0001] = m;

    [
        PureState::from_amplitudes(psi0).expect("normalized by parameter invariants"),
        PureState::from_amplitudes(psi1).expect("normalized by parameter invariants"),
        PureState::from_amplitudes(psi2).expect("normalized by parameter invariants"),
        PureState::from_amplitudes(psi3).expect("normalized by parameter invariants"),
    ]
}

/// Which entropy the staircase reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Total inside/outside entanglement entropy (the full staircase).
    Total,
    /// Only the Hawking-pair step (the single-rectangle Page curve).
    Radiation,
}

fn plateau_value(t: f64, taus: &[f64; 4], sp: f64, sb: f64, mode: Mode) -> f64 {
    let [tau1, tau2, tau3, tau4] = *taus;
    match mode {
        Mode::Total => {
            if t < tau1 {
                0.0
            } else if t < tau2 {
                sp
            } else if t < tau3 {
                sp + sb
            } else if t < tau4 {
                sb
            } else {
                0.0
            }
        }
        Mode::Radiation => {
            if t < tau2 || t >= tau4 {
                0.0
            } else {
                sb
            }
        }
    }
}

/// Closed-form plateau evaluation of the single-block staircase, right-
/// continuous at the jumps. Total mode reads 0, S', S'+S'', S'', 0 across
/// the five intervals; radiation mode is the S'' rectangle on [tau2, tau4).
pub fn staircase(params: &ModelParams, schedule: &Schedule, mode: Mode, t: f64) -> Result<EntropyValue> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let sp = s_prime(params.lambda(), params.mu())?.nats();
    let sb = s_bis(params.alpha(), params.beta())?.nats();
    Ok(EntropyValue::from_nats(plateau_value(
        t,
        &schedule.taus(),
        sp,
        sb,
        mode,
    )))
}

// ---------------------------------------------------------------------------
// Ensemble Page curve
// ---------------------------------------------------------------------------

/// SplitMix64 stream; block substreams are derived purely from
/// (seed, block), so aggregation order and block splits cannot change the
/// draws.
#[derive(Debug, Clone)]
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(state: u64) -> Self {
        Self { state }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Deterministic per-block substream: a SplitMix64 scramble of (seed, block).
pub(crate) fn block_stream(seed: u64, block: u64) -> SplitMix64 {
    let mut boot = SplitMix64::new(seed ^ block.wrapping_mul(0xD1B5_4A32_D192_ED03));
    let state = boot.next_u64();
    SplitMix64::new(state)
}

/// Configuration of a many-block ensemble run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub blocks: usize,
    pub schedule: Schedule,
    /// Uniform jitter half-widths around tau1..tau4.
    pub jitter: [f64; 4],
    pub params: ModelParams,
    pub seed: u64,
    /// Number of grid points spanning [0, t_end].
    pub samples: usize,
    pub t_end: f64,
    pub mode: Mode,
}

impl EnsembleConfig {
    /// Checks the static non-overlap and grid invariants; rejected configs
    /// never reach the generator.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::BadEnsembleConfig(msg.to_string()));
        if self.blocks == 0 {
            return bad("blocks must be at least 1");
        }
        if self.samples < 2 {
            return bad("samples must be at least 2");
        }
        if self.jitter.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad("jitter half-widths must be non-negative");
        }
        let [tau1, tau2, tau3, tau4] = self.schedule.taus();
        let [w1, w2, w3, w4] = self.jitter;
        if tau1 - w1 <= 0.0 {
            return bad("tau1 - w1 must stay positive");
        }
        if tau1 + w1 >= tau2 - w2 || tau2 + w2 >= tau3 - w3 || tau3 + w3 >= tau4 - w4 {
            return bad("jitter windows must not overlap: tau_i + w_i < tau_{i+1} - w_{i+1}");
        }
        if !self.t_end.is_finite() || self.t_end <= tau4 + w4 {
            return bad("t_end must exceed tau4 + w4");
        }
        Ok(())
    }
}

/// One aggregated grid point of a smoothed Page curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PagePoint {
    pub time: f64,
    /// Sum of the block staircases at this time.
    pub sum: f64,
    /// Mean per block (sum / blocks).
    pub mean: f64,
}

/// A smoothed many-block Page curve on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PageCurve {
    pub samples: Vec<PagePoint>,
}

/// Jittered crossing instants of one block.
pub(crate) fn block_taus(config: &EnsembleConfig, block: u64) -> [f64; 4] {
    let mut rng = block_stream(config.seed, block);
    let base = config.schedule.taus();
    let mut taus = [0.0f64; 4];
    for i in 0..4 {
        let u = rng.next_f64();
        taus[i] = base[i] + (2.0 * u - 1.0) * config.jitter[i];
    }
    taus
}

/// Sums jittered single-block staircases over a shared grid.
///
/// Each block b draws its instants tau_i + Uniform(-w_i, w_i) from a
/// substream of (seed, b) and is evaluated in closed form; sums accumulate
/// per grid point in block order, so a rerun with the same seed and config
/// is bit-identical.
pub fn ensemble_page_curve(config: &EnsembleConfig) -> Result<PageCurve> {
    config.validate()?;
    let sp = s_prime(config.params.lambda(), config.params.mu())?.nats();
    let sb = s_bis(config.params.alpha(), config.params.beta())?.nats();

    let k = config.samples;
    let dt = config.t_end / (k - 1) as f64;
    let times: Vec<f64> = (0..k).map(|i| i as f64 * dt).collect();
    let mut sums = vec![0.0f64; k];

    for block in 0..config.blocks {
        let taus = block_taus(config, block as u64);
        for (j, &t) in times.iter().enumerate() {
            let v = plateau_value(t, &taus, sp, sb, config.mode);
            if v != 0.0 {
                sums[j] += v;
            }
        }
    }

    let n = config.blocks as f64;
    let samples = times
        .iter()
        .zip(&sums)
        .map(|(&time, &sum)| PagePoint {
            time,
            sum,
            mean: sum / n,
        })
        .collect();
    Ok(PageCurve { samples })
}
