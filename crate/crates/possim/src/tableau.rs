//! Stabilizer machinery: Pauli-string conjugation through Clifford gates,
//! input-frame extraction, and deterministic support strings for Clifford
//! circuits at widths far beyond statevector reach.
//!
//! A Pauli string is stored in symplectic form as an X mask, a Z mask and a
//! power of i, with the (1,1) pair on a qubit read as Y. Conjugation by the
//! Clifford generators only ever flips the sign, so conjugated strings keep
//! phase 0 or 2; products of strings can pick up ±i and the full mod-4 phase
//! is tracked through multiplication.

use std::fmt;

use thiserror::Error;

use crate::f2::{F2Matrix, F2Vector};
use crate::qcir::{Gate, QuantumCircuit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableauError {
    #[error("circuit contains a non-Clifford gate ({0})")]
    NonClifford(String),
    #[error("post-selection on line {line} requires {want} but the outcome is forced to {got}")]
    PostselectImpossible { line: usize, want: bool, got: bool },
}

/// A Pauli operator i^phase · W_1 ⊗ … ⊗ W_n with W given by (x, z) bits:
/// (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    width: usize,
    xmask: F2Vector,
    zmask: F2Vector,
    phase: u8,
}

impl PauliString {
    pub fn identity(width: usize) -> Self {
        PauliString {
            width,
            xmask: F2Vector::zeros(width),
            zmask: F2Vector::zeros(width),
            phase: 0,
        }
    }

    /// X on line `q`, identity elsewhere.
    pub fn x_on(width: usize, q: usize) -> Self {
        let mut p = PauliString::identity(width);
        p.xmask.set(q, true);
        p
    }

    pub fn z_on(width: usize, q: usize) -> Self {
        let mut p = PauliString::identity(width);
        p.zmask.set(q, true);
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn xmask(&self) -> &F2Vector {
        &self.xmask
    }

    pub fn zmask(&self) -> &F2Vector {
        &self.zmask
    }

    /// Power of i in front of the tensor factors, mod 4.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.xmask.is_zero() && self.zmask.is_zero()
    }

    fn x(&self, q: usize) -> bool {
        self.xmask.get(q)
    }

    fn z(&self, q: usize) -> bool {
        self.zmask.get(q)
    }

    fn flip_sign_if(&mut self, cond: bool) {
        if cond {
            self.phase = (self.phase + 2) & 3;
        }
    }

    /// Conjugate in place by one Clifford gate: self ↦ G · self · G†.
    pub fn conjugate_by(&mut self, gate: Gate) -> Result<(), TableauError> {
        match gate {
            Gate::H(q) => {
                self.flip_sign_if(self.x(q) && self.z(q));
                let x = self.x(q);
                self.xmask.set(q, self.z(q));
                self.zmask.set(q, x);
            }
            Gate::S(q) => {
                self.flip_sign_if(self.x(q) && self.z(q));
                let z = self.z(q) ^ self.x(q);
                self.zmask.set(q, z);
            }
            Gate::Sdg(q) => {
                self.flip_sign_if(self.x(q) && !self.z(q));
                let z = self.z(q) ^ self.x(q);
                self.zmask.set(q, z);
            }
            Gate::X(q) => self.flip_sign_if(self.z(q)),
            Gate::Y(q) => self.flip_sign_if(self.x(q) ^ self.z(q)),
            Gate::Z(q) => self.flip_sign_if(self.x(q)),
            Gate::Cx(c, t) => {
                self.flip_sign_if(self.x(c) && self.z(t) && self.x(t) == self.z(c));
                let xt = self.x(t) ^ self.x(c);
                let zc = self.z(c) ^ self.z(t);
                self.xmask.set(t, xt);
                self.zmask.set(c, zc);
            }
            Gate::Cz(a, b) => {
                self.flip_sign_if(self.x(a) && self.x(b) && (self.z(a) ^ self.z(b)));
                let za = self.z(a) ^ self.x(b);
                let zb = self.z(b) ^ self.x(a);
                self.zmask.set(a, za);
                self.zmask.set(b, zb);
            }
            Gate::T(_) | Gate::Tdg(_) => {
                return Err(TableauError::NonClifford(gate.to_string()));
            }
        }
        Ok(())
    }

    /// Operator product self · other, with exact mod-4 phase accounting.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.width, other.width);
        let mut phase = (self.phase + other.phase) & 3;
        for q in 0..self.width {
            phase = (phase + levi(self.x(q), self.z(q), other.x(q), other.z(q))) & 3;
        }
        let mut xmask = self.xmask.clone();
        xmask.xor_assign(&other.xmask);
        let mut zmask = self.zmask.clone();
        zmask.xor_assign(&other.zmask);
        PauliString { width: self.width, xmask, zmask, phase }
    }
}

/// Power of i in W1 · W2 for single-qubit Paulis in (x, z) encoding:
/// cyclic products (XY, YZ, ZX) give +i, anticyclic give −i.
fn levi(x1: bool, z1: bool, x2: bool, z2: bool) -> u8 {
    match ((x1, z1), (x2, z2)) {
        ((true, false), (true, true)) => 1,  // X·Y = iZ
        ((true, true), (false, true)) => 1,  // Y·Z = iX
        ((false, true), (true, false)) => 1, // Z·X = iY
        ((true, true), (true, false)) => 3,  // Y·X = -iZ
        ((false, true), (true, true)) => 3,  // Z·Y = -iX
        ((true, false), (false, true)) => 3, // X·Z = -iY
        _ => 0,
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => {}
            1 => f.write_str("i")?,
            2 => f.write_str("-")?,
            _ => f.write_str("-i")?,
        }
        for q in 0..self.width {
            f.write_str(match (self.x(q), self.z(q)) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Conjugate `p` through every gate of a Clifford circuit: returns
/// Q · p · Q†, phases tracked exactly.
pub fn conjugate_pauli(qc: &QuantumCircuit, p: &PauliString) -> Result<PauliString, TableauError> {
    assert_eq!(p.width(), qc.n_qubits, "Pauli width must match the circuit");
    let mut out = p.clone();
    for &gate in &qc.gates {
        out.conjugate_by(gate)?;
    }
    Ok(out)
}

/// The table of input-frame rows: row `j` is the GF(2) vector a^(j) such
/// that commuting the input X frame past the circuit leaves X^{a^(j)·x}
/// (up to discarded Z factors and signs) on line `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AVectorTable {
    matrix: F2Matrix,
}

impl AVectorTable {
    /// Rows = circuit lines, columns = input lines.
    pub fn matrix(&self) -> &F2Matrix {
        &self.matrix
    }

    pub fn row(&self, line: usize) -> &F2Vector {
        self.matrix.row(line)
    }

    pub fn n_lines(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_inputs(&self) -> usize {
        self.matrix.cols()
    }

    /// The selector matrix S: the rows for the trailing `t` lines.
    pub fn selector_matrix(&self, t: usize) -> F2Matrix {
        let first = self.matrix.rows() - t;
        F2Matrix::from_rows((first..self.matrix.rows()).map(|r| self.matrix.row(r).clone()).collect())
    }
}

/// Conjugate X_i through the circuit for every input line i and record, per
/// output line j, whether the result has an X or Y factor there. Z factors
/// and signs act trivially on computational-basis measurements and are
/// discarded.
pub fn a_vectors(qc: &QuantumCircuit) -> Result<AVectorTable, TableauError> {
    let mut matrix = F2Matrix::zeros(qc.n_qubits, qc.n_inputs);
    for i in 0..qc.n_inputs {
        let conjugated = conjugate_pauli(qc, &PauliString::x_on(qc.n_qubits, i))?;
        for j in 0..qc.n_qubits {
            if conjugated.xmask().get(j) {
                matrix.set(j, i, true);
            }
        }
    }
    Ok(AVectorTable { matrix })
}

/// Aaronson-Gottesman style tableau over `PauliString` rows.
struct Tableau {
    n: usize,
    destab: Vec<PauliString>,
    stab: Vec<PauliString>,
}

impl Tableau {
    fn new(n: usize) -> Self {
        Tableau {
            n,
            destab: (0..n).map(|q| PauliString::x_on(n, q)).collect(),
            stab: (0..n).map(|q| PauliString::z_on(n, q)).collect(),
        }
    }

    fn apply(&mut self, gate: Gate) -> Result<(), TableauError> {
        for row in self.destab.iter_mut().chain(self.stab.iter_mut()) {
            row.conjugate_by(gate)?;
        }
        Ok(())
    }

    /// Measure Z on line `q`. `forced` pins the outcome of a random result;
    /// a determinate result that contradicts `forced` is an error.
    fn measure(&mut self, q: usize, forced: Option<bool>) -> Result<bool, TableauError> {
        if let Some(p) = (0..self.n).find(|&r| self.stab[r].x(q)) {
            // outcome is random; the canonical rule picks 0 unless pinned
            let outcome = forced.unwrap_or(false);
            let pivot = self.stab[p].clone();
            for r in 0..self.n {
                if r != p && self.stab[r].x(q) {
                    self.stab[r] = pivot.mul(&self.stab[r]);
                }
                if self.destab[r].x(q) {
                    self.destab[r] = pivot.mul(&self.destab[r]);
                }
            }
            self.destab[p] = pivot;
            let mut new_stab = PauliString::z_on(self.n, q);
            new_stab.flip_sign_if(outcome);
            self.stab[p] = new_stab;
            Ok(outcome)
        } else {
            let mut product = PauliString::identity(self.n);
            for r in 0..self.n {
                if self.destab[r].x(q) {
                    product = product.mul(&self.stab[r]);
                }
            }
            debug_assert!(product.phase().is_multiple_of(2), "stabilizer product must be Hermitian");
            let outcome = product.phase() == 2;
            match forced {
                Some(want) if want != outcome => {
                    Err(TableauError::PostselectImpossible { line: q, want, got: outcome })
                }
                _ => Ok(outcome),
            }
        }
    }
}

/// A measured-lines bitstring in the support of Q|0…0⟩ by a tableau sweep.
///
/// Post-selected lines are fixed first (erroring when the required value has
/// probability zero), then the measured lines are read in order with random
/// outcomes resolved to 0. The result is the lexicographically smallest
/// support string consistent with the post-selection.
pub fn clifford_support_string(qc: &QuantumCircuit) -> Result<F2Vector, TableauError> {
    let mut tableau = Tableau::new(qc.n_qubits);
    for &gate in &qc.gates {
        tableau.apply(gate)?;
    }
    let mut forced: Vec<(usize, bool)> = qc.postselect.clone();
    forced.sort();
    for (line, want) in forced {
        tableau.measure(line, Some(want))?;
    }
    let mut bits = Vec::with_capacity(qc.measured.len());
    for &line in &qc.measured {
        bits.push(tableau.measure(line, None)?);
    }
    Ok(F2Vector::from_bits(bits))
}
