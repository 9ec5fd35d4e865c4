//! Dense statevector simulation: the ground-truth oracle.
//!
//! Amplitudes are indexed with line 0 as the most significant bit, so the
//! lexicographic order of bitstrings coincides with the numeric order of
//! amplitude indices. States evolve in floating point; support extraction
//! uses a relative amplitude threshold. That is sound at desk scale because
//! nonzero Clifford+T amplitudes live in the ring Z[e^{iπ/4}]·2^{-k/2} and
//! are bounded away from zero by far more than the default tolerance for the
//! circuit sizes this crate targets.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::f2::F2Vector;
use crate::qcir::{Gate, QuantumCircuit};

/// Relative support threshold: keep y with |amp(y)| > tol · max|amp|.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on simulated width; 2^24 complex amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Default cap on the input width enumerated by [`relation`].
pub const DEFAULT_RELATION_LIMIT: usize = 16;

/// States whose largest amplitude is below this are treated as zero. Sits
/// well under any genuine nonzero amplitude at desk scale and well above
/// f64 cancellation noise.
const ZERO_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("input has {got} bits but the circuit has {expected} input line(s)")]
    WidthError { expected: usize, got: usize },
    #[error("circuit width {qubits} exceeds the capacity limit of {limit} qubits")]
    CapacityError { qubits: usize, limit: usize },
}

/// Dense complex state of `n_qubits` lines.
#[derive(Clone, Debug)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[index] = Complex64::ONE;
        Statevector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, bits: &F2Vector) -> Complex64 {
        assert_eq!(bits.len(), self.n_qubits);
        self.amps[bits.to_index()]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_numerically_zero(&self) -> bool {
        self.max_amplitude() <= ZERO_FLOOR
    }

    /// Bit position (from the least significant end) of circuit line `q`.
    #[inline]
    fn bit(&self, q: usize) -> usize {
        self.n_qubits - 1 - q
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: Gate) {
        let i = Complex64::I;
        let omega = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        match gate {
            Gate::H(q) => {
                let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.map_pairs(q, |a0, a1| (s * (a0 + a1), s * (a0 - a1)));
            }
            Gate::X(q) => self.map_pairs(q, |a0, a1| (a1, a0)),
            Gate::Y(q) => self.map_pairs(q, |a0, a1| (-i * a1, i * a0)),
            Gate::Z(q) => self.phase_if(q, -Complex64::ONE),
            Gate::S(q) => self.phase_if(q, i),
            Gate::Sdg(q) => self.phase_if(q, -i),
            Gate::T(q) => self.phase_if(q, omega),
            Gate::Tdg(q) => self.phase_if(q, omega.conj()),
            Gate::Cx(c, t) => {
                let cmask = 1usize << self.bit(c);
                let tmask = 1usize << self.bit(t);
                for idx in 0..self.amps.len() {
                    if idx & cmask != 0 && idx & tmask == 0 {
                        self.amps.swap(idx, idx | tmask);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << self.bit(a)) | (1usize << self.bit(b));
                for (idx, amp) in self.amps.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
    }

    fn map_pairs(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let mask = 1usize << self.bit(q);
        for idx in 0..self.amps.len() {
            if idx & mask == 0 {
                let (a0, a1) = f(self.amps[idx], self.amps[idx | mask]);
                self.amps[idx] = a0;
                self.amps[idx | mask] = a1;
            }
        }
    }

    fn phase_if(&mut self, q: usize, factor: Complex64) {
        let mask = 1usize << self.bit(q);
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if idx & mask != 0 {
                *amp *= factor;
            }
        }
    }
}

/// Amplitudes of `Q|x, 0^advice, A^magic⟩` with no post-selection applied.
///
/// Magic lines start in |A⟩ = (|0⟩ + e^{iπ/4}|1⟩)/√2, realized by H then T
/// on a |0⟩ line before the circuit's own gates run.
pub fn simulate(qc: &QuantumCircuit, x: &F2Vector) -> Result<Statevector, SimError> {
    simulate_with_capacity(qc, x, DEFAULT_MAX_QUBITS)
}

pub fn simulate_with_capacity(
    qc: &QuantumCircuit,
    x: &F2Vector,
    max_qubits: usize,
) -> Result<Statevector, SimError> {
    if x.len() != qc.n_inputs {
        return Err(SimError::WidthError { expected: qc.n_inputs, got: x.len() });
    }
    if qc.n_qubits > max_qubits {
        return Err(SimError::CapacityError { qubits: qc.n_qubits, limit: max_qubits });
    }
    let mut index = 0usize;
    for bit in x.iter_bits() {
        index = (index << 1) | bit as usize;
    }
    index <<= qc.n_qubits - qc.n_inputs;
    let mut state = Statevector::basis(qc.n_qubits, index);
    for line in qc.magic_lines() {
        state.apply_gate(Gate::H(line));
        state.apply_gate(Gate::T(line));
    }
    for &gate in &qc.gates {
        state.apply_gate(gate);
    }
    Ok(state)
}

/// Project onto `lines = value` and drop those lines, keeping the remaining
/// lines in their original order. No renormalization; a zero vector is a
/// representable result.
pub fn post_select(state: &Statevector, lines: &[usize], value: &F2Vector) -> Statevector {
    assert_eq!(lines.len(), value.len(), "one required bit per selected line");
    assert!(lines.iter().all(|&l| l < state.n_qubits));
    let kept: Vec<usize> = (0..state.n_qubits).filter(|q| !lines.contains(q)).collect();
    let mut required_mask = 0usize;
    let mut required_bits = 0usize;
    for (i, &line) in lines.iter().enumerate() {
        required_mask |= 1 << state.bit(line);
        if value.get(i) {
            required_bits |= 1 << state.bit(line);
        }
    }
    let n_out = kept.len();
    let mut amps = vec![Complex64::ZERO; 1 << n_out];
    for (idx, &amp) in state.amps.iter().enumerate() {
        if idx & required_mask == required_bits {
            let mut out_idx = 0usize;
            for &q in &kept {
                out_idx = (out_idx << 1) | ((idx >> state.bit(q)) & 1);
            }
            amps[out_idx] = amp;
        }
    }
    Statevector { n_qubits: n_out, amps }
}

/// Basis strings whose amplitude magnitude exceeds `tol` times the largest,
/// in increasing lexicographic (= index) order. Empty iff the state is
/// numerically zero.
pub fn support(state: &Statevector, tol: f64) -> Vec<F2Vector> {
    let max = state.max_amplitude();
    if max <= ZERO_FLOOR {
        return Vec::new();
    }
    state
        .amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > tol * max)
        .map(|(idx, _)| F2Vector::from_index(idx, state.n_qubits))
        .collect()
}

/// Apply the circuit's terminal post-selection to a simulated state.
///
/// Returns the reduced state together with the positions of the measured
/// lines inside it.
pub fn apply_postselect(qc: &QuantumCircuit, state: &Statevector) -> (Statevector, Vec<usize>) {
    let lines: Vec<usize> = qc.postselect.iter().map(|&(l, _)| l).collect();
    let value = F2Vector::from_bits(qc.postselect.iter().map(|&(_, b)| b));
    let reduced = if lines.is_empty() {
        state.clone()
    } else {
        post_select(state, &lines, &value)
    };
    let kept: Vec<usize> = (0..qc.n_qubits).filter(|q| !lines.contains(q)).collect();
    let measured_positions = qc
        .measured
        .iter()
        .map(|m| {
            kept.iter()
                .position(|k| k == m)
                .expect("measured lines are disjoint from post-selected lines")
        })
        .collect();
    (reduced, measured_positions)
}

/// The relation R(Q): all (x, y) with y a possible measured outcome on
/// input x, i.e. a basis string of nonzero post-selected amplitude
/// restricted to the measured lines.
pub fn relation(qc: &QuantumCircuit, tol: f64) -> Result<BTreeSet<(F2Vector, F2Vector)>, SimError> {
    relation_with_limits(qc, tol, DEFAULT_RELATION_LIMIT, DEFAULT_MAX_QUBITS)
}

pub fn relation_with_limits(
    qc: &QuantumCircuit,
    tol: f64,
    max_inputs: usize,
    max_qubits: usize,
) -> Result<BTreeSet<(F2Vector, F2Vector)>, SimError> {
    if qc.n_inputs > max_inputs {
        return Err(SimError::CapacityError { qubits: qc.n_inputs, limit: max_inputs });
    }
    let mut pairs = BTreeSet::new();
    for xi in 0..1usize << qc.n_inputs {
        let x = F2Vector::from_index(xi, qc.n_inputs);
        let state = simulate_with_capacity(qc, &x, max_qubits)?;
        let (reduced, positions) = apply_postselect(qc, &state);
        for y_full in support(&reduced, tol) {
            let y = F2Vector::from_bits(positions.iter().map(|&p| y_full.get(p)));
            pairs.insert((x.clone(), y));
        }
    }
    Ok(pairs)
}

/// Is (x, y) in R(Q)? `y` ranges over the measured lines.
pub fn in_relation(
    qc: &QuantumCircuit,
    x: &F2Vector,
    y: &F2Vector,
    tol: f64,
    max_qubits: usize,
) -> Result<bool, SimError> {
    assert_eq!(y.len(), qc.measured.len(), "y must cover the measured lines");
    let state = simulate_with_capacity(qc, x, max_qubits)?;
    let (reduced, positions) = apply_postselect(qc, &state);
    let max = reduced.max_amplitude();
    if max <= ZERO_FLOOR {
        return Ok(false);
    }
    let hit = reduced.amps.iter().enumerate().any(|(idx, amp)| {
        amp.norm() > tol * max
            && positions
                .iter()
                .enumerate()
                .all(|(i, &p)| (idx >> (reduced.n_qubits - 1 - p)) & 1 == y.get(i) as usize)
    });
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcir::parse_circuit;

    fn bits(s: &str) -> F2Vector {
        s.parse().unwrap()
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} != {b}");
    }

    #[test]
    fn empty_circuit_on_one() {
        let qc = QuantumCircuit::new(1);
        let state = simulate(&qc, &bits("1")).unwrap();
        assert_close(state.amps()[1], Complex64::ONE, 1e-12);
        assert_close(state.amps()[0], Complex64::ZERO, 1e-12);
    }

    #[test]
    fn hadamard_on_zero() {
        let qc = parse_circuit("qubits 1\nh 0\n").unwrap();
        let state = simulate(&qc, &bits("0")).unwrap();
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_close(state.amps()[0], s, 1e-12);
        assert_close(state.amps()[1], s, 1e-12);
    }

    #[test]
    fn width_and_capacity_errors() {
        let qc = QuantumCircuit::new(2);
        assert_eq!(
            simulate(&qc, &bits("1")).unwrap_err(),
            SimError::WidthError { expected: 2, got: 1 }
        );
        assert_eq!(
            simulate_with_capacity(&qc, &bits("10"), 1).unwrap_err(),
            SimError::CapacityError { qubits: 2, limit: 1 }
        );
    }

    #[test]
    fn every_gate_preserves_norm_and_inverts() {
        let inverses = [
            (Gate::H(0), Gate::H(0)),
            (Gate::S(0), Gate::Sdg(0)),
            (Gate::Sdg(0), Gate::S(0)),
            (Gate::X(0), Gate::X(0)),
            (Gate::Y(0), Gate::Y(0)),
            (Gate::Z(0), Gate::Z(0)),
            (Gate::T(0), Gate::Tdg(0)),
            (Gate::Tdg(0), Gate::T(0)),
            (Gate::Cx(0, 1), Gate::Cx(0, 1)),
            (Gate::Cx(1, 0), Gate::Cx(1, 0)),
            (Gate::Cz(0, 1), Gate::Cz(0, 1)),
        ];
        // a fixed, unstructured 2-qubit state
        let raw = [(0.3, -0.1), (0.52, 0.4), (-0.2, 0.61), (0.11, 0.17)];
        let mut base = Statevector::basis(2, 0);
        base.amps = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let scale = base.norm_sq().sqrt();
        for amp in &mut base.amps {
            *amp /= scale;
        }
        for (gate, inverse) in inverses {
            let mut state = base.clone();
            state.apply_gate(gate);
            assert!((state.norm_sq() - 1.0).abs() < 1e-12, "{gate:?} broke the norm");
            state.apply_gate(inverse);
            for (a, b) in state.amps().iter().zip(base.amps()) {
                assert_close(*a, *b, 1e-10);
            }
        }
    }

    #[test]
    fn canonicalize_preserves_amplitudes_up_to_global_phase() {
        let texts = [
            "qubits 1\ny 0\n",
            "qubits 1\ntdg 0\n",
            "qubits 3\ny 0\ntdg 1\ncx 0 2\ny 1\ns 2\ncz 1 2\ntdg 0\n",
        ];
        for text in texts {
            let qc = parse_circuit(text).unwrap();
            let canon = qc.canonicalize();
            for xi in 0..1usize << qc.n_inputs {
                let x = F2Vector::from_index(xi, qc.n_inputs);
                let a = simulate(&qc, &x).unwrap();
                let b = simulate(&canon, &x).unwrap();
                // find a reference amplitude to fix the phase
                let k = a
                    .amps()
                    .iter()
                    .position(|amp| amp.norm() > 1e-6)
                    .expect("unitary state is nonzero");
                let phase = b.amps()[k] / a.amps()[k];
                assert!((phase.norm() - 1.0).abs() < 1e-10);
                for (pa, pb) in a.amps().iter().zip(b.amps()) {
                    assert_close(*pa * phase, *pb, 1e-10);
                }
            }
        }
    }

    #[test]
    fn post_select_bell_like_state() {
        // |10⟩ projected on line 1 = 0 keeps the |1⟩ component of line 0
        let state = Statevector::basis(2, 0b10);
        let kept = post_select(&state, &[1], &bits("0"));
        assert_eq!(kept.n_qubits(), 1);
        assert_close(kept.amps()[1], Complex64::ONE, 1e-12);
        // ... and on line 1 = 1 gives the zero vector
        let zero = post_select(&state, &[1], &bits("1"));
        assert!(zero.is_numerically_zero());
        assert!(support(&zero, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn support_of_bell_pair() {
        let qc = parse_circuit("qubits 2\nh 0\ncx 0 1\n").unwrap();
        let state = simulate(&qc, &bits("00")).unwrap();
        assert_eq!(support(&state, DEFAULT_TOL), vec![bits("00"), bits("11")]);
    }

    #[test]
    fn support_is_scale_and_phase_invariant() {
        let qc = parse_circuit("qubits 2\nh 0\ncx 0 1\ns 0\n").unwrap();
        let state = simulate(&qc, &bits("00")).unwrap();
        let reference = support(&state, DEFAULT_TOL);
        let mut scaled = state.clone();
        for amp in &mut scaled.amps {
            *amp *= Complex64::from_polar(0.037, 1.234);
        }
        assert_eq!(support(&scaled, DEFAULT_TOL), reference);
    }

    #[test]
    fn relation_of_h_x_and_identity() {
        let h = parse_circuit("qubits 1\nh 0\n").unwrap();
        let pairs = relation(&h, DEFAULT_TOL).unwrap();
        assert_eq!(pairs.len(), 4);

        let x = parse_circuit("qubits 1\nx 0\n").unwrap();
        let pairs: Vec<_> = relation(&x, DEFAULT_TOL).unwrap().into_iter().collect();
        assert_eq!(pairs, vec![(bits("0"), bits("1")), (bits("1"), bits("0"))]);

        let id = QuantumCircuit::new(1);
        let pairs: Vec<_> = relation(&id, DEFAULT_TOL).unwrap().into_iter().collect();
        assert_eq!(pairs, vec![(bits("0"), bits("0")), (bits("1"), bits("1"))]);
    }

    #[test]
    fn relation_respects_input_limit() {
        let qc = QuantumCircuit::new(3);
        assert!(matches!(
            relation_with_limits(&qc, DEFAULT_TOL, 2, DEFAULT_MAX_QUBITS),
            Err(SimError::CapacityError { .. })
        ));
    }

    #[test]
    fn magic_line_initialization() {
        let mut qc = QuantumCircuit::new(0);
        qc.n_qubits = 1;
        qc.n_magic = 1;
        let state = simulate(&qc, &bits("")).unwrap();
        let omega = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert_close(state.amps()[0], Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-12);
        assert_close(state.amps()[1], omega * FRAC_1_SQRT_2, 1e-12);
    }
}
