//! Partial trace onto a qubit subset, Hermitian eigenvalues via cyclic Jacobi
//! rotations, and the von Neumann entropy in nats.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::PureState;

/// Tolerance on |rho - rho†| for Hermitian inputs.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Tolerance on |tr(rho) - 1|.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues below this floor mean the matrix is not a state.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;
/// Round-off window: eigenvalues in [-1e-12, 0) clamp to zero silently;
/// values in [-1e-9, -1e-12) clamp with a logged warning.
pub const SILENT_CLAMP: f64 = -1e-12;
/// Convergence target for the off-diagonal Frobenius norm.
pub const JACOBI_OFF_TOL: f64 = 1e-12;
/// Sweep cap for the cyclic Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Reduced density matrix of a pure state over a kept qubit subset.
///
/// Row-major storage; Hermitian with unit trace within the module tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Builds a density matrix from row-major entries, checking dimension,
    /// Hermiticity and unit trace. Positivity is enforced where eigenvalues
    /// are consumed ([`von_neumann_entropy`]).
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::BadDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(Error::BadEntryCount {
                len: entries.len(),
                dim,
            });
        }
        let rho = Self { dim, entries };
        let dev = rho.hermiticity_deviation();
        if dev.is_nan() || dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = rho.trace();
        let trace_err = (trace - 1.0).abs();
        if trace_err.is_nan() || trace_err > TRACE_TOL {
            return Err(Error::NonUnitTrace { trace });
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Real part of the trace (the imaginary part vanishes for Hermitian
    /// matrices).
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }
}

/// Entanglement entropy in natural-log units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue {
    nats: f64,
}

impl EntropyValue {
    pub const ZERO: EntropyValue = EntropyValue { nats: 0.0 };

    pub fn from_nats(nats: f64) -> Self {
        Self { nats }
    }

    pub fn nats(&self) -> f64 {
        self.nats
    }

    /// Display conversion to base-2 units.
    pub fn bits(&self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }
}

/// Traces out every qubit not in `keep`, returning the reduced density
/// matrix of the kept subset.
///
/// `keep` is treated as a set (sorted, duplicates collapsed); the kept qubit
/// with the smallest index becomes the most significant bit of the reduced
/// index, matching the state convention. The set may be the full register.
pub fn reduced_density(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange {
            index: bad,
            n_qubits: n,
        });
    }

    let k = kept.len();
    let dim = 1usize << k;
    let env: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let env_dim = 1usize << env.len();

    // global bit position of qubit q (first qubit = MSB)
    let bit = |q: usize| n - 1 - q;

    // scatter tables: reduced index -> contribution to the global index
    let mut kept_scatter = vec![0usize; dim];
    for (j, &q) in kept.iter().enumerate() {
        let local = 1usize << (k - 1 - j);
        let global = 1usize << bit(q);
        for (idx, item) in kept_scatter.iter_mut().enumerate() {
            if idx & local != 0 {
                *item |= global;
            }
        }
    }
    let mut env_scatter = vec![0usize; env_dim];
    for (j, &q) in env.iter().enumerate() {
        let local = 1usize << (env.len() - 1 - j);
        let global = 1usize << bit(q);
        for (idx, item) in env_scatter.iter_mut().enumerate() {
            if idx & local != 0 {
                *item |= global;
            }
        }
    }

    let amps = state.amplitudes();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for &e in &env_scatter {
        for i in 0..dim {
            let ai = amps[kept_scatter[i] | e];
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                let aj = amps[kept_scatter[j] | e];
                entries[i * dim + j] += ai * aj.conj();
            }
        }
    }

    DensityMatrix::new(dim, entries)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi: sweeps of plane rotations annihilating each off-diagonal
/// entry in turn, until the off-diagonal Frobenius norm drops below
/// [`JACOBI_OFF_TOL`] or [`JACOBI_MAX_SWEEPS`] sweeps have run, in which case
/// the residual is reported as an error.
pub fn hermitian_eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let dev = rho.hermiticity_deviation();
    if dev.is_nan() || dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let d = rho.dim();
    let mut a: Vec<Complex64> = rho.entries().to_vec();
    // symmetrize round-off so the iteration works on an exactly Hermitian copy
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = (a[i * d + j] + a[j * d + i].conj()) * 0.5;
            a[i * d + j] = avg;
            a[j * d + i] = avg.conj();
        }
        a[i * d + i] = Complex64::new(a[i * d + i].re, 0.0);
    }

    let off_norm = |a: &[Complex64]| -> f64 {
        let mut sum = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    sum += a[i * d + j].norm_sqr();
                }
            }
        }
        sum.sqrt()
    };

    let mut residual = off_norm(&a);
    let mut converged = residual < JACOBI_OFF_TOL;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..d.saturating_sub(1) {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                // rotation angle from the real 2x2 [[app, r], [r, aqq]]
                let t = {
                    let theta = (app - aqq) / (2.0 * r);
                    let sign = if theta < 0.0 { -1.0 } else { 1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // columns: A <- A U with U mixing columns p and q
                for i in 0..d {
                    let aip = a[i * d + p];
                    let aiq = a[i * d + q];
                    a[i * d + p] = c * aip + s * phase.conj() * aiq;
                    a[i * d + q] = c * aiq - s * phase * aip;
                }
                // rows: A <- U† A
                for i in 0..d {
                    let api = a[p * d + i];
                    let aqi = a[q * d + i];
                    a[p * d + i] = c * api + s * phase * aqi;
                    a[q * d + i] = c * aqi - s * phase.conj() * api;
                }
                // the rotation zeroes (p,q) analytically; remove round-off
                a[p * d + q] = Complex64::new(0.0, 0.0);
                a[q * d + p] = Complex64::new(0.0, 0.0);
                a[p * d + p] = Complex64::new(a[p * d + p].re, 0.0);
                a[q * d + q] = Complex64::new(a[q * d + q].re, 0.0);
            }
        }
        sweeps += 1;
        residual = off_norm(&a);
        converged = residual < JACOBI_OFF_TOL;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps, residual });
    }

    let mut eigenvalues: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eigenvalues)
}

/// Von Neumann entropy S = -Σ p ln p of a density matrix, in nats.
///
/// The convention 0·ln 0 = 0 applies; eigenvalues inside the round-off
/// window clamp to zero (see [`SILENT_CLAMP`]); anything below
/// [`EIGENVALUE_FLOOR`] is rejected as not a state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<EntropyValue> {
    let eigenvalues = hermitian_eigenvalues(rho)?;
    let mut nats = 0.0;
    for &p in &eigenvalues {
        if p < EIGENVALUE_FLOOR {
            return Err(Error::NotAState { eigenvalue: p });
        }
        if p < 0.0 {
            if p < SILENT_CLAMP {
                log::warn!("clamping negative eigenvalue {p:e} to zero");
            }
            continue;
        }
        if p > 0.0 {
            nats -= p * p.ln();
        }
    }
    // tiny negative sums are pure round-off from p ~ 1
    Ok(EntropyValue::from_nats(nats.max(0.0)))
}

/// Entanglement entropy of `state` across the cut (`subset` | complement).
pub fn bipartite_entropy(state: &PureState, subset: &[usize]) -> Result<EntropyValue> {
    von_neumann_entropy(&reduced_density(state, subset)?)
}

/// Closed form for a two-outcome distribution: -p ln p - (1-p) ln(1-p).
pub fn two_outcome_entropy(p: f64) -> f64 {
    let mut nats = 0.0;
    if p > 0.0 {
        nats -= p * p.ln();
    }
    let q = 1.0 - p;
    if q > 0.0 {
        nats -= q * q.ln();
    }
    nats.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::Matrix2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_state() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        PureState::from_amplitudes(vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).unwrap()
    }

    // ------------------------------------------------------------------
    // Independent eigenvalue oracle: characteristic polynomial from power
    // traces (Newton's identities) plus bisection on sign changes. Shares
    // no code with the Jacobi engine.
    // ------------------------------------------------------------------

    fn mat_mul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                for j in 0..d {
                    out[i * d + j] += aik * b[k * d + j];
                }
            }
        }
        out
    }

    fn mat_trace(a: &[Complex64], d: usize) -> f64 {
        (0..d).map(|i| a[i * d + i].re).sum()
    }

    /// Monic characteristic polynomial coefficients [c0, c1, ..., 1] of a
    /// Hermitian matrix, via Newton's identities on tr(A^k).
    fn char_poly(a: &[Complex64], d: usize) -> Vec<f64> {
        let mut powers = Vec::with_capacity(d);
        let mut cur = a.to_vec();
        powers.push(mat_trace(&cur, d));
        for _ in 1..d {
            cur = mat_mul(&cur, a, d);
            powers.push(mat_trace(&cur, d));
        }
        // e_k from Newton's identities; char poly x^d - e1 x^(d-1) + e2 x^(d-2) ...
        let mut e = vec![0.0f64; d + 1];
        e[0] = 1.0;
        for k in 1..=d {
            let mut acc = 0.0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                acc += sign * e[k - i] * powers[i - 1];
            }
            e[k] = acc / k as f64;
        }
        let mut coeffs = vec![0.0f64; d + 1];
        for (k, ek) in e.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[d - k] = sign * ek;
        }
        coeffs
    }

    fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
        let mut acc = 0.0;
        for &co in coeffs.iter().rev() {
            acc = acc * x + co;
        }
        acc
    }

    /// All real roots of the characteristic polynomial inside the Gershgorin
    /// bound, by scanning for sign changes and bisecting each bracket.
    fn oracle_eigenvalues(a: &[Complex64], d: usize) -> Vec<f64> {
        let coeffs = char_poly(a, d);
        let mut bound = 0.0f64;
        for i in 0..d {
            let radius: f64 = (0..d).map(|j| a[i * d + j].norm()).sum();
            bound = bound.max(radius);
        }
        bound += 1.0;
        let scan = 200_000usize;
        let step = 2.0 * bound / scan as f64;
        let mut roots = Vec::new();
        let mut x0 = -bound;
        let mut f0 = eval_poly(&coeffs, x0);
        for i in 1..=scan {
            let x1 = -bound + i as f64 * step;
            let f1 = eval_poly(&coeffs, x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut lo, mut hi) = (x0, x1);
                let (mut flo, _fhi) = (f0, f1);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fmid = eval_poly(&coeffs, mid);
                    if flo * fmid <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fmid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    /// Random Hermitian with unit trace from a simple deterministic stream.
    fn random_hermitian(dim: usize, seed: u64) -> Vec<Complex64> {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                if i == j {
                    a[i * dim + j] = c(next(), 0.0);
                } else {
                    let v = c(next(), next());
                    a[i * dim + j] = v;
                    a[j * dim + i] = v.conj();
                }
            }
        }
        // shift the diagonal to unit trace
        let tr: f64 = (0..dim).map(|i| a[i * dim + i].re).sum();
        let shift = (1.0 - tr) / dim as f64;
        for i in 0..dim {
            a[i * dim + i] += c(shift, 0.0);
        }
        a
    }

    #[test]
    fn jacobi_matches_char_poly_oracle_on_random_hermitian() {
        for seed in 1..=8u64 {
            let entries = random_hermitian(4, seed);
            let oracle = oracle_eigenvalues(&entries, 4);
            assert_eq!(oracle.len(), 4, "oracle found {} roots", oracle.len());
            let rho = DensityMatrix { dim: 4, entries };
            let eigen = hermitian_eigenvalues(&rho).unwrap();
            for (e, o) in eigen.iter().zip(&oracle) {
                assert!(
                    (e - o).abs() < 1e-9,
                    "seed {seed}: jacobi {e} vs oracle {o}"
                );
            }
        }
    }

    #[test]
    fn jacobi_diagonal_passthrough() {
        let rho = DensityMatrix::new(2, vec![c(0.36, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.64, 0.0)])
            .unwrap();
        let eigen = hermitian_eigenvalues(&rho).unwrap();
        assert!((eigen[0] - 0.36).abs() < 1e-15);
        assert!((eigen[1] - 0.64).abs() < 1e-15);
    }

    #[test]
    fn jacobi_rank_one_projector() {
        let rho = DensityMatrix::new(2, vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)])
            .unwrap();
        let eigen = hermitian_eigenvalues(&rho).unwrap();
        assert!(eigen[0].abs() < 1e-12);
        assert!((eigen[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_rejects_non_hermitian() {
        let rho = DensityMatrix {
            dim: 2,
            entries: vec![c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0)],
        };
        assert!(matches!(
            hermitian_eigenvalues(&rho),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn reduced_density_bell_marginal_is_maximally_mixed() {
        let rho = reduced_density(&bell_state(), &[0]).unwrap();
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-12);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-12);
        assert!(rho.entry(0, 1).norm() < 1e-12);
    }

    #[test]
    fn reduced_density_product_state_is_pure_projector() {
        // |01>, keep the second qubit -> |1><1|
        let state =
            PureState::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        let rho = reduced_density(&state, &[1]).unwrap();
        assert!(rho.entry(0, 0).norm() < 1e-12);
        assert!((rho.entry(1, 1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_weighted_pair() {
        // 0.6|00> + 0.8|11>, keep first -> diag(0.36, 0.64), no cross terms
        let state =
            PureState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0)])
                .unwrap();
        let rho = reduced_density(&state, &[0]).unwrap();
        assert!((rho.entry(0, 0).re - 0.36).abs() < 1e-12);
        assert!((rho.entry(1, 1).re - 0.64).abs() < 1e-12);
        assert!(rho.entry(0, 1).norm() < 1e-15);
        assert!(rho.entry(1, 0).norm() < 1e-15);
    }

    #[test]
    fn reduced_density_rejections() {
        let state = bell_state();
        assert_eq!(reduced_density(&state, &[]).unwrap_err(), Error::EmptySubset);
        assert!(matches!(
            reduced_density(&state, &[2]),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn entropy_of_pure_projector_is_zero() {
        let rho = DensityMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(von_neumann_entropy(&rho).unwrap().nats(), 0.0);
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit_is_ln2() {
        let rho = DensityMatrix::new(2, vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)])
            .unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s.nats() - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((s.bits() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_weighted_marginal() {
        // -0.36 ln 0.36 - 0.64 ln 0.64, cross-checked against the closed form
        let rho = DensityMatrix::new(2, vec![c(0.36, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.64, 0.0)])
            .unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s.nats() - 0.6534181947937018).abs() < 1e-12);
        assert!((s.nats() - two_outcome_entropy(0.36)).abs() < 1e-15);
    }

    #[test]
    fn entropy_rejects_negative_eigenvalue_matrix() {
        // diag(1.5, -0.5): Hermitian, unit trace, not a state
        let rho = DensityMatrix::new(2, vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)])
            .unwrap();
        assert!(matches!(
            von_neumann_entropy(&rho),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn entropy_clamps_round_off_negatives() {
        let eps = -5e-13;
        let rho = DensityMatrix::new(
            2,
            vec![c(1.0 - eps, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(eps, 0.0)],
        )
        .unwrap();
        assert_eq!(von_neumann_entropy(&rho).unwrap().nats(), 0.0);
    }

    #[test]
    fn bipartite_entropy_of_product_state_is_zero() {
        let state = PureState::init_product_state(&[
            (c(0.6, 0.0), c(0.8, 0.0)),
            (c(0.28, 0.0), c(0.96, 0.0)),
            (c(1.0, 0.0), c(0.0, 0.0)),
        ])
        .unwrap();
        for subset in [&[0usize][..], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]] {
            let s = bipartite_entropy(&state, subset).unwrap();
            assert!(s.nats().abs() < 1e-9, "subset {subset:?} gave {}", s.nats());
        }
    }

    #[test]
    fn bipartite_entropy_full_register_is_zero() {
        let state = bell_state();
        let s = bipartite_entropy(&state, &[0, 1]).unwrap();
        assert!(s.nats().abs() < 1e-9);
    }

    #[test]
    fn jacobi_handles_complex_off_diagonals() {
        // rotate a diagonal state by a known unitary and check the spectrum
        // survives: eigenvalues of U diag(0.36,0.64) U† are {0.36, 0.64}
        let a = c(0.6, 0.2);
        let b = c(0.6f64.sqrt(), 0.0);
        let u = Matrix2::new([[a, -b.conj()], [b, a.conj()]]).unwrap();
        let ue = u.entries();
        let diag = [0.36, 0.64];
        let mut entries = vec![c(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = c(0.0, 0.0);
                for (k, dk) in diag.iter().enumerate() {
                    acc += ue[i][k] * *dk * ue[j][k].conj();
                }
                entries[i * 2 + j] = acc;
            }
        }
        let rho = DensityMatrix::new(2, entries).unwrap();
        let eigen = hermitian_eigenvalues(&rho).unwrap();
        assert!((eigen[0] - 0.36).abs() < 1e-12);
        assert!((eigen[1] - 0.64).abs() < 1e-12);
    }
}
