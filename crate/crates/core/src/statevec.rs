//! Dense pure-state representation and the three gate kinds the evaporation
//! circuit uses: one-qubit unitaries, CNOT and SWAP.
//!
//! Basis convention: the first-declared qubit is the most significant bit of
//! the amplitude index, so a four-qubit ket |q0 q1 q2 q3> written left to
//! right reads off directly as a binary index.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on |U†U - I| when a unitary is constructed.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Tolerance on | Σ|a_i|² - 1 | for normalized states.
pub const NORM_TOL: f64 = 1e-9;
/// Dense amplitude storage cap. The model needs four qubits; the headroom is
/// for randomized property tests.
pub const MAX_QUBITS: usize = 24;

/// Outcome of a unitarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryCheck {
    Accepted,
    /// Max-norm of (U†U - I) exceeded [`UNITARITY_TOL`].
    Rejected { deviation: f64 },
}

/// Verdict on whether a 2x2 matrix is unitary within [`UNITARITY_TOL`].
///
/// The deviation reported on rejection is the max-norm of (U†U - I).
pub fn check_unitary(entries: &[[Complex64; 2]; 2]) -> UnitaryCheck {
    let mut deviation = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            // (U†U)_ij = Σ_k conj(U_ki) U_kj
            let mut acc = Complex64::new(0.0, 0.0);
            for row in entries {
                acc += row[i].conj() * row[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((acc - target).norm());
        }
    }
    if deviation <= UNITARITY_TOL {
        UnitaryCheck::Accepted
    } else {
        UnitaryCheck::Rejected { deviation }
    }
}

/// A 2x2 complex matrix that is unitary by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    entries: [[Complex64; 2]; 2],
}

impl Matrix2 {
    /// Builds a unitary from row-major entries, rejecting non-finite or
    /// non-unitary input.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for e in row {
                if !e.re.is_finite() || !e.im.is_finite() {
                    return Err(Error::NonFiniteEntries);
                }
            }
        }
        match check_unitary(&entries) {
            UnitaryCheck::Accepted => Ok(Self { entries }),
            UnitaryCheck::Rejected { deviation } => Err(Error::NotUnitary { deviation }),
        }
    }

    pub fn identity() -> Self {
        Self {
            entries: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        }
    }

    /// Conjugate transpose; for a unitary this is the inverse.
    pub fn adjoint(&self) -> Self {
        Self {
            entries: [
                [self.entries[0][0].conj(), self.entries[1][0].conj()],
                [self.entries[0][1].conj(), self.entries[1][1].conj()],
            ],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }
}

/// One timeline gate: a single-qubit unitary, a CNOT or a SWAP.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    Unitary1Q { matrix: Matrix2, target: usize },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
}

impl GateSpec {
    /// Qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateSpec::Unitary1Q { target, .. } => vec![*target],
            GateSpec::Cnot { control, target } => vec![*control, *target],
            GateSpec::Swap { a, b } => vec![*a, *b],
        }
    }

    /// Index-range and distinctness checks against a circuit width.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |index: usize| {
            if index < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { index, n_qubits })
            }
        };
        match self {
            GateSpec::Unitary1Q { target, .. } => check(*target),
            GateSpec::Cnot { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::IdenticalQubits { qubit: *control });
                }
                Ok(())
            }
            GateSpec::Swap { a, b } => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::IdenticalQubits { qubit: *a });
                }
                Ok(())
            }
        }
    }
}

/// Normalized complex amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Tensor product of one-qubit states, in declaration order.
    ///
    /// Each factor is the pair of amplitudes for |0> and |1> of that qubit and
    /// must be normalized within [`NORM_TOL`]; the offending qubit index is
    /// reported otherwise.
    pub fn init_product_state(factors: &[(Complex64, Complex64)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        if factors.len() > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                got: factors.len(),
                max: MAX_QUBITS,
            });
        }
        for (qubit, (a0, a1)) in factors.iter().enumerate() {
            let norm = a0.norm_sqr() + a1.norm_sqr();
            if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::UnnormalizedFactor { qubit, norm });
            }
        }
        let n = factors.len();
        // each appended qubit becomes the least significant bit, keeping the
        // first-declared qubit on the most significant one
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for (a0, a1) in factors {
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for amp in &amplitudes {
                next.push(amp * a0);
                next.push(amp * a1);
            }
            amplitudes = next;
        }
        debug_assert_eq!(amplitudes.len(), 1 << n);
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Builds a state from raw amplitudes, enforcing the length and
    /// normalization invariants.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadStateLength { len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                got: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask of `qubit` in an amplitude index (first qubit = MSB).
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                index,
                n_qubits: self.n_qubits,
            })
        }
    }

    /// Applies a one-qubit unitary to `target`, returning the new state.
    pub fn apply_unitary1q(&self, matrix: &Matrix2, target: usize) -> Result<Self> {
        self.check_qubit(target)?;
        let mask = self.mask(target);
        let u = matrix.entries();
        let mut amplitudes = self.amplitudes.clone();
        for base in 0..self.amplitudes.len() {
            if base & mask != 0 {
                continue;
            }
            let a0 = self.amplitudes[base];
            let a1 = self.amplitudes[base | mask];
            amplitudes[base] = u[0][0] * a0 + u[0][1] * a1;
            amplitudes[base | mask] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// Applies CNOT: basis states with the control bit set have the target
    /// bit flipped.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<Self> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::IdenticalQubits { qubit: control });
        }
        let cmask = self.mask(control);
        let tmask = self.mask(target);
        let mut amplitudes = self.amplitudes.clone();
        for index in 0..self.amplitudes.len() {
            if index & cmask != 0 {
                amplitudes[index] = self.amplitudes[index ^ tmask];
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// Applies SWAP: amplitudes at indices with bits (a,b) = (0,1) and (1,0)
    /// are exchanged.
    pub fn apply_swap(&self, a: usize, b: usize) -> Result<Self> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::IdenticalQubits { qubit: a });
        }
        let amask = self.mask(a);
        let bmask = self.mask(b);
        let mut amplitudes = self.amplitudes.clone();
        for index in 0..self.amplitudes.len() {
            let bit_a = index & amask != 0;
            let bit_b = index & bmask != 0;
            if bit_a != bit_b {
                amplitudes[index] = self.amplitudes[index ^ amask ^ bmask];
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// Dispatches a [`GateSpec`].
    pub fn apply(&self, gate: &GateSpec) -> Result<Self> {
        match gate {
            GateSpec::Unitary1Q { matrix, target } => self.apply_unitary1q(matrix, *target),
            GateSpec::Cnot { control, target } => self.apply_cnot(*control, *target),
            GateSpec::Swap { a, b } => self.apply_swap(*a, *b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_factor(a0: f64, a1: f64) -> (Complex64, Complex64) {
        (c(a0, 0.0), c(a1, 0.0))
    }

    #[test]
    fn product_state_places_matter_amplitudes_on_leading_bit() {
        // (0.6, 0.8) on the first qubit, vacuum elsewhere
        let state = PureState::init_product_state(&[
            real_factor(0.6, 0.8),
            real_factor(1.0, 0.0),
            real_factor(1.0, 0.0),
            real_factor(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(state.n_qubits(), 4);
        assert!((state.amplitude(0b0000) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((state.amplitude(0b1000) - c(0.8, 0.0)).norm() < 1e-15);
        let rest: f64 = (0..16)
            .filter(|&i| i != 0 && i != 0b1000)
            .map(|i| state.amplitude(i).norm_sqr())
            .sum();
        assert_eq!(rest, 0.0);
    }

    #[test]
    fn product_state_single_qubit_identity() {
        let state = PureState::init_product_state(&[real_factor(1.0, 0.0)]).unwrap();
        assert_eq!(state.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn product_state_superposition_tensor_vacuum() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let state =
            PureState::init_product_state(&[real_factor(r, r), real_factor(1.0, 0.0)]).unwrap();
        assert!((state.amplitude(0b00).re - r).abs() < 1e-15);
        assert!((state.amplitude(0b10).re - r).abs() < 1e-15);
        assert_eq!(state.amplitude(0b01), c(0.0, 0.0));
        assert_eq!(state.amplitude(0b11), c(0.0, 0.0));
    }

    #[test]
    fn product_state_rejects_unnormalized_factor_with_index() {
        let err = PureState::init_product_state(&[
            real_factor(1.0, 0.0),
            real_factor(0.9, 0.1),
        ])
        .unwrap_err();
        match err {
            Error::UnnormalizedFactor { qubit, .. } => assert_eq!(qubit, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn product_state_rejects_empty_list() {
        assert_eq!(
            PureState::init_product_state(&[]).unwrap_err(),
            Error::EmptyProduct
        );
    }

    #[test]
    fn hawking_rotation_on_vacuum() {
        // U with first column (0.8, 0.6) sends |0> to 0.8|0> + 0.6|1>
        let u = Matrix2::new([
            [c(0.8, 0.0), c(-0.6, 0.0)],
            [c(0.6, 0.0), c(0.8, 0.0)],
        ])
        .unwrap();
        let state = PureState::init_product_state(&[real_factor(1.0, 0.0)]).unwrap();
        let out = state.apply_unitary1q(&u, 0).unwrap();
        assert!((out.amplitude(0) - c(0.8, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(1) - c(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_unitary_keeps_amplitudes() {
        let state = PureState::init_product_state(&[real_factor(0.6, 0.8), real_factor(1.0, 0.0)])
            .unwrap();
        let out = state.apply_unitary1q(&Matrix2::identity(), 0).unwrap();
        assert_eq!(out.amplitudes(), state.amplitudes());
    }

    #[test]
    fn unitary_then_inverse_restores_state() {
        // [[a, -conj(b)], [b, conj(a)]] with |a|^2 + |b|^2 = 1
        let a = c(0.6, 0.2);
        let b = c(0.6f64.sqrt(), 0.0);
        let u = Matrix2::new([[a, -b.conj()], [b, a.conj()]]).unwrap();
        let state = PureState::init_product_state(&[real_factor(0.28, 0.96), real_factor(0.6, 0.8)])
            .unwrap();
        let round_trip = state
            .apply_unitary1q(&u, 1)
            .unwrap()
            .apply_unitary1q(&u.adjoint(), 1)
            .unwrap();
        for (x, y) in round_trip.amplitudes().iter().zip(state.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_entangles_control_superposition() {
        let state = PureState::init_product_state(&[real_factor(0.6, 0.8), real_factor(1.0, 0.0)])
            .unwrap();
        let out = state.apply_cnot(0, 1).unwrap();
        assert!((out.amplitude(0b00) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(0b11) - c(0.8, 0.0)).norm() < 1e-15);
        assert_eq!(out.amplitude(0b01), c(0.0, 0.0));
        assert_eq!(out.amplitude(0b10), c(0.0, 0.0));
    }

    #[test]
    fn cnot_on_zero_control_is_identity() {
        let state = PureState::init_product_state(&[real_factor(1.0, 0.0), real_factor(1.0, 0.0)])
            .unwrap();
        let out = state.apply_cnot(0, 1).unwrap();
        assert_eq!(out.amplitudes(), state.amplitudes());
    }

    #[test]
    fn cnot_reversed_disentangles_bell_pair() {
        // lam|00> + mu|11> with control on the second qubit and target the
        // first collapses to |0>(lam|0> + mu|1>)
        let (lam, mu) = (c(0.6, 0.0), c(0.8, 0.0));
        let state = PureState::from_amplitudes(vec![lam, c(0.0, 0.0), c(0.0, 0.0), mu]).unwrap();
        let out = state.apply_cnot(1, 0).unwrap();
        assert!((out.amplitude(0b00) - lam).norm() < 1e-15);
        assert!((out.amplitude(0b01) - mu).norm() < 1e-15);
        assert_eq!(out.amplitude(0b10), c(0.0, 0.0));
        assert_eq!(out.amplitude(0b11), c(0.0, 0.0));
    }

    #[test]
    fn swap_exchanges_basis_states() {
        let state = PureState::init_product_state(&[real_factor(1.0, 0.0), real_factor(0.0, 1.0)])
            .unwrap();
        // |01> -> |10>
        let out = state.apply_swap(0, 1).unwrap();
        assert_eq!(out.amplitude(0b01), c(0.0, 0.0));
        assert!((out.amplitude(0b10) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn swap_twice_is_identity() {
        let state = PureState::init_product_state(&[
            real_factor(0.6, 0.8),
            real_factor(0.28, 0.96),
            real_factor(1.0, 0.0),
        ])
        .unwrap();
        let entangled = state.apply_cnot(0, 2).unwrap();
        let round_trip = entangled
            .apply_swap(1, 2)
            .unwrap()
            .apply_swap(1, 2)
            .unwrap();
        for (a, b) in round_trip.amplitudes().iter().zip(entangled.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gate_index_errors() {
        let state = PureState::init_product_state(&[real_factor(1.0, 0.0), real_factor(1.0, 0.0)])
            .unwrap();
        assert!(matches!(
            state.apply_unitary1q(&Matrix2::identity(), 2),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            state.apply_cnot(1, 1),
            Err(Error::IdenticalQubits { qubit: 1 })
        ));
        assert!(matches!(
            state.apply_swap(0, 0),
            Err(Error::IdenticalQubits { qubit: 0 })
        ));
    }

    #[test]
    fn check_unitary_verdicts() {
        let id = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
        ];
        assert_eq!(check_unitary(&id), UnitaryCheck::Accepted);

        let rotation = [
            [c(0.8, 0.0), c(-0.6, 0.0)],
            [c(0.6, 0.0), c(0.8, 0.0)],
        ];
        assert_eq!(check_unitary(&rotation), UnitaryCheck::Accepted);

        let stretched = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(2.0, 0.0)],
        ];
        match check_unitary(&stretched) {
            UnitaryCheck::Rejected { deviation } => assert!((deviation - 3.0).abs() < 1e-12),
            UnitaryCheck::Accepted => panic!("diag(1,2) accepted as unitary"),
        }
    }

    #[test]
    fn matrix2_rejects_non_finite() {
        let bad = [
            [c(f64::NAN, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
        ];
        assert_eq!(Matrix2::new(bad).unwrap_err(), Error::NonFiniteEntries);
    }
}
