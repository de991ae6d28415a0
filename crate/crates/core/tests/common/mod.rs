//! Shared generators for the randomized suites: seeded circuits, unitaries
//! and model parameters.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qbh_core::horizon::{Circuit, Region, TimelineEvent};
use qbh_core::model::ModelParams;
use qbh_core::statevec::{GateSpec, Matrix2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random point on the unit circle.
fn random_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::new(angle.cos(), angle.sin())
}

/// Random normalized one-qubit factor.
pub fn random_factor(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let p: f64 = rng.gen_range(0.0..=1.0);
    let a0 = random_phase(rng) * p.sqrt();
    let a1 = random_phase(rng) * (1.0 - p).sqrt();
    (a0, a1)
}

/// Random SU(2) matrix [[a, -conj(b)], [b, conj(a)]].
pub fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix2 {
    let (a, b) = random_factor(rng);
    Matrix2::new([[a, -b.conj()], [b, a.conj()]]).expect("column pair is normalized")
}

/// Random model parameters with both probabilities kept away from the
/// degenerate endpoints, so both entropy steps are well above tolerance.
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let p: f64 = rng.gen_range(0.1..=0.9);
    let q: f64 = rng.gen_range(0.1..=0.9);
    params_from_probs(rng, p, q)
}

/// Parameters with the given |lambda|^2 and |alpha|^2 and random phases.
pub fn params_from_probs(rng: &mut ChaCha8Rng, p: f64, q: f64) -> ModelParams {
    let lambda = random_phase(rng) * p.sqrt();
    let mu = random_phase(rng) * (1.0 - p).sqrt();
    let alpha = random_phase(rng) * q.sqrt();
    let beta = random_phase(rng) * (1.0 - q).sqrt();
    ModelParams::new(lambda, mu, alpha, beta).expect("pairs are normalized")
}

/// Random causal circuit: same-side CNOT/SWAP gates, one-qubit unitaries and
/// inward crossings, with ordinal event times.
pub fn random_causal_circuit(rng: &mut ChaCha8Rng, n_qubits: usize, n_events: usize) -> Circuit {
    let names: Vec<String> = (0..n_qubits).map(|i| format!("q{i}")).collect();
    let factors: Vec<(Complex64, Complex64)> = (0..n_qubits).map(|_| random_factor(rng)).collect();
    let mut regions = vec![Region::Outside; n_qubits];

    let mut events = Vec::with_capacity(n_events);
    for i in 0..n_events {
        let time = (i + 1) as f64;
        let outside: Vec<usize> = (0..n_qubits).filter(|&q| regions[q] == Region::Outside).collect();
        let same_side_pair = |rng: &mut ChaCha8Rng, regions: &[Region]| -> Option<(usize, usize)> {
            let mut pools: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
            for (q, r) in regions.iter().enumerate() {
                let slot = if *r == Region::Outside { 0 } else { 1 };
                pools[slot].push(q);
            }
            let viable: Vec<&Vec<usize>> = pools.iter().filter(|p| p.len() >= 2).collect();
            if viable.is_empty() {
                return None;
            }
            let pool = viable[rng.gen_range(0..viable.len())];
            let x = pool[rng.gen_range(0..pool.len())];
            let mut y = pool[rng.gen_range(0..pool.len())];
            while y == x {
                y = pool[rng.gen_range(0..pool.len())];
            }
            Some((x, y))
        };

        let kind = rng.gen_range(0..4u32);
        let event = match kind {
            0 => TimelineEvent::gate(
                time,
                GateSpec::Unitary1Q {
                    matrix: random_unitary(rng),
                    target: rng.gen_range(0..n_qubits),
                },
            ),
            1 | 2 => match same_side_pair(rng, &regions) {
                Some((x, y)) => {
                    let gate = if kind == 1 {
                        GateSpec::Cnot { control: x, target: y }
                    } else {
                        GateSpec::Swap { a: x, b: y }
                    };
                    TimelineEvent::gate(time, gate)
                }
                None => TimelineEvent::gate(
                    time,
                    GateSpec::Unitary1Q {
                        matrix: random_unitary(rng),
                        target: rng.gen_range(0..n_qubits),
                    },
                ),
            },
            _ => {
                // inward crossing; keep at least one qubit outside so
                // two-sided gates stay possible
                if outside.len() >= 2 {
                    let q = outside[rng.gen_range(0..outside.len())];
                    regions[q] = Region::Inside;
                    TimelineEvent::crossing(time, q)
                } else {
                    TimelineEvent::gate(
                        time,
                        GateSpec::Unitary1Q {
                            matrix: random_unitary(rng),
                            target: rng.gen_range(0..n_qubits),
                        },
                    )
                }
            }
        };
        events.push(event);
    }

    Circuit::new(
        names,
        vec![Region::Outside; n_qubits],
        factors,
        events,
    )
    .expect("generated circuit is well-formed")
}
