//! End-to-end compilation of Clifford+T circuits into boolean netlists that
//! possibilistically simulate them, plus exhaustive and sampled verifiers.
//!
//! Pipeline: canonicalize (T† and Y rewritten away), gadgetize every T onto a
//! fresh post-selected magic line, push the input X frame through the now
//! Clifford-only circuit to get one GF(2) mask per line, precompute one
//! support string per magic-line outcome z from the statevector on zero
//! input, then synthesize:
//!
//! * Stage 1 — shared parity trees `p_i = a^(i)·x`, one candidate bundle per
//!   z obtained by negating `p_i` exactly where `s^(z)` has a 1;
//! * Stage 2 — parities `z_k(x)` for the magic-line masks (the selector
//!   matrix S), built alongside Stage 1;
//! * Stage 3 — a one-hot decoder over the `z_k` and a multiplexer picking
//!   the bundle for `z(x)`; skipped entirely when t = 0.
//!
//! With rank refinement, only the `2^rk(S)` reachable values of `S·x` get
//! decoder lines and bundles, which shortens the OR trees from depth t to
//! depth rk(S).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

use crate::bcir::{BoolCircuit, Builder, NodeId};
use crate::f2::{F2Matrix, F2Vector};
use crate::qcir::{Gate, QuantumCircuit};
use crate::sv::{self, SimError};
use crate::tableau::{self, AVectorTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("post-selected component for z = {z} is numerically zero")]
    EmptySupport { z: F2Vector },
}

#[derive(Clone, Debug)]
pub struct CompileOptions {
    pub rank_refine: bool,
    pub tol: f64,
    pub max_qubits: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            rank_refine: false,
            tol: sv::DEFAULT_TOL,
            max_qubits: sv::DEFAULT_MAX_QUBITS,
        }
    }
}

/// Replace each T gate, in circuit order, by a CX from its line onto a fresh
/// trailing magic line that is post-selected to 0.
///
/// Expects a canonicalized circuit (no T†, no Y); the result is
/// Clifford-only with `n_magic` equal to the original T count.
pub fn gadgetize(qc: &QuantumCircuit) -> QuantumCircuit {
    assert!(
        !qc.gates.iter().any(|g| matches!(g, Gate::Tdg(_) | Gate::Y(_))),
        "gadgetize expects a canonicalized circuit"
    );
    let t = qc.t_count();
    let mut out = qc.clone();
    out.n_qubits += t;
    out.n_magic += t;
    out.gates.clear();
    let mut next_magic = qc.n_qubits;
    for &gate in &qc.gates {
        match gate {
            Gate::T(q) => {
                out.gates.push(Gate::Cx(q, next_magic));
                out.postselect.push((next_magic, false));
                next_magic += 1;
            }
            g => out.gates.push(g),
        }
    }
    out
}

/// One support string per magic-line outcome, indexed by the little-endian
/// value of z (bit k of the index is the outcome of magic line k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTable {
    t: usize,
    entries: Vec<F2Vector>,
}

impl SupportTable {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for the z whose little-endian value is `j`.
    pub fn entry(&self, j: usize) -> &F2Vector {
        &self.entries[j]
    }

    pub fn get(&self, z: &F2Vector) -> &F2Vector {
        assert_eq!(z.len(), self.t);
        &self.entries[z_index(z)]
    }
}

fn z_index(z: &F2Vector) -> usize {
    (0..z.len()).map(|k| (z.get(k) as usize) << k).sum()
}

fn z_string(j: usize, t: usize) -> F2Vector {
    F2Vector::from_bits((0..t).map(|k| j >> k & 1 == 1))
}

/// For every magic-line outcome z, the lexicographically smallest string in
/// the support of the z-projected statevector of the gadgetized circuit on
/// all-zero input.
pub fn precompute_supports(
    qcg: &QuantumCircuit,
    tol: f64,
    max_qubits: usize,
) -> Result<SupportTable, CompileError> {
    let t = qcg.n_magic;
    let x0 = F2Vector::zeros(qcg.n_inputs);
    let psi = sv::simulate_with_capacity(qcg, &x0, max_qubits)?;
    let magic: Vec<usize> = qcg.magic_lines().collect();
    let mut entries = Vec::with_capacity(1usize << t);
    for j in 0..1usize << t {
        let z = z_string(j, t);
        let psi_z = sv::post_select(&psi, &magic, &z);
        let smallest = sv::support(&psi_z, tol).into_iter().next();
        entries.push(smallest.ok_or(CompileError::EmptySupport { z })?);
    }
    Ok(SupportTable { t, entries })
}

/// The `2^rk(S)` distinct values of S·x over all x, sorted by little-endian
/// index.
pub fn image_enumerate(s: &F2Matrix) -> Vec<F2Vector> {
    // linearly independent columns by incremental elimination
    let mut reduced: Vec<F2Vector> = Vec::new();
    let mut independent: Vec<F2Vector> = Vec::new();
    for c in 0..s.cols() {
        let col = F2Vector::from_bits((0..s.rows()).map(|r| s.get(r, c)));
        let mut v = col.clone();
        for r in &reduced {
            if v.get(r.ones().next().unwrap()) {
                v.xor_assign(r);
            }
        }
        if !v.is_zero() {
            reduced.push(v);
            reduced.sort_by_key(|r| r.ones().next().unwrap());
            independent.push(col);
        }
    }
    let mut values: Vec<F2Vector> = (0..1usize << independent.len())
        .map(|combo| {
            let mut v = F2Vector::zeros(s.rows());
            for (k, col) in independent.iter().enumerate() {
                if combo >> k & 1 == 1 {
                    v.xor_assign(col);
                }
            }
            v
        })
        .collect();
    values.sort_by_key(z_index);
    values
}

/// Everything produced by one compilation.
#[derive(Clone, Debug)]
pub struct CompilationArtifacts {
    /// One mask row per gadgetized line, columns over the circuit inputs.
    pub a_table: AVectorTable,
    /// The trailing t rows of `a_table`: z(x) = S·x selects the bundle.
    pub s_matrix: F2Matrix,
    pub supports: SupportTable,
    pub netlist: BoolCircuit,
    pub depth_report: DepthReport,
}

/// Per-stage depth accounting alongside the parameters that bound it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthReport {
    pub n: usize,
    pub t: usize,
    /// Depth of the source circuit as parsed.
    pub d: usize,
    pub rank_s: usize,
    /// Candidate bundles feeding the multiplexer (per output bit).
    pub or_leaves: usize,
    pub stage1_depth: usize,
    pub stage2_depth: usize,
    pub stage3_depth: usize,
    pub total_depth: usize,
    pub gate_count: usize,
}

impl fmt::Display for DepthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "t {}", self.t)?;
        writeln!(f, "d {}", self.d)?;
        writeln!(f, "rank-s {}", self.rank_s)?;
        writeln!(f, "or-leaves {}", self.or_leaves)?;
        writeln!(f, "stage1-depth {}", self.stage1_depth)?;
        writeln!(f, "stage2-depth {}", self.stage2_depth)?;
        writeln!(f, "stage3-depth {}", self.stage3_depth)?;
        writeln!(f, "total-depth {}", self.total_depth)?;
        write!(f, "gate-count {}", self.gate_count)
    }
}

/// Compile a circuit into a netlist C with (x, C(x)) a possible input/output
/// pair of the circuit for every x.
pub fn compile(qc: &QuantumCircuit, options: &CompileOptions) -> Result<CompilationArtifacts, CompileError> {
    let gadget = gadgetize(&qc.canonicalize());
    if gadget.n_qubits > options.max_qubits {
        return Err(CompileError::Sim(SimError::CapacityError {
            qubits: gadget.n_qubits,
            limit: options.max_qubits,
        }));
    }
    let t = gadget.n_magic - qc.n_magic;
    let a_table = tableau::a_vectors(&gadget).expect("gadgetized circuits are Clifford");
    let s_matrix = a_table.selector_matrix(t);
    let supports = precompute_supports(&gadget, options.tol, options.max_qubits)?;

    let mut builder = Builder::new(qc.n_inputs);
    let parities: Vec<NodeId> = gadget
        .measured
        .iter()
        .map(|&line| builder.build_parity(a_table.row(line)))
        .collect();
    let bundle_for = |builder: &mut Builder, j: usize| -> Vec<NodeId> {
        let s = supports.entry(j);
        gadget
            .measured
            .iter()
            .zip(&parities)
            .map(|(&line, &p)| if s.get(line) { builder.not(p) } else { p })
            .collect()
    };

    let mut candidate_nodes: Vec<NodeId> = Vec::new();
    let mut z_nodes: Vec<NodeId> = Vec::new();
    let (outputs, or_leaves) = if t == 0 {
        let bundle = bundle_for(&mut builder, 0);
        candidate_nodes.extend(&bundle);
        (bundle, 1)
    } else {
        for k in 0..t {
            z_nodes.push(builder.build_parity(s_matrix.row(k)));
        }
        let reachable: Vec<usize> = if options.rank_refine {
            image_enumerate(&s_matrix).iter().map(z_index).collect()
        } else {
            (0..1usize << t).collect()
        };
        let mut selectors = Vec::with_capacity(reachable.len());
        let mut candidates = Vec::with_capacity(reachable.len());
        for &j in &reachable {
            selectors.push(builder.build_decoder(&z_nodes, j));
            let bundle = bundle_for(&mut builder, j);
            candidate_nodes.extend(&bundle);
            candidates.push(bundle);
        }
        (builder.build_mux(&candidates, &selectors), reachable.len())
    };

    let netlist = builder.finish(outputs);
    let depths = netlist.node_depths();
    let stage1_depth = candidate_nodes.iter().map(|&i| depths[i]).max().unwrap_or(0);
    let stage2_depth = z_nodes.iter().map(|&i| depths[i]).max().unwrap_or(0);
    let total_depth = netlist.depth();
    let stage3_depth = if t == 0 { 0 } else { total_depth - stage1_depth.max(stage2_depth) };
    let depth_report = DepthReport {
        n: qc.n_inputs,
        t,
        d: qc.depth(),
        rank_s: s_matrix.rank(),
        or_leaves,
        stage1_depth,
        stage2_depth,
        stage3_depth,
        total_depth,
        gate_count: netlist.gate_count(),
    };
    Ok(CompilationArtifacts { a_table, s_matrix, supports, netlist, depth_report })
}

/// Result of checking a netlist against a circuit's input/output relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass { checked: usize },
    Fail { counterexample: F2Vector, produced: F2Vector },
}

fn check_widths(qc: &QuantumCircuit, netlist: &BoolCircuit) -> Result<(), SimError> {
    if netlist.n_inputs() != qc.n_inputs {
        return Err(SimError::WidthError { expected: qc.n_inputs, got: netlist.n_inputs() });
    }
    if netlist.n_outputs() != qc.measured.len() {
        return Err(SimError::WidthError { expected: qc.measured.len(), got: netlist.n_outputs() });
    }
    Ok(())
}

/// Check (x, C(x)) against the statevector oracle for every input x,
/// ascending; the first failure is reported.
pub fn verify_exhaustive(
    qc: &QuantumCircuit,
    netlist: &BoolCircuit,
    tol: f64,
    max_qubits: usize,
) -> Result<VerifyOutcome, SimError> {
    check_widths(qc, netlist)?;
    if qc.n_qubits > max_qubits {
        return Err(SimError::CapacityError { qubits: qc.n_qubits, limit: max_qubits });
    }
    for xi in 0..1usize << qc.n_inputs {
        let x = F2Vector::from_index(xi, qc.n_inputs);
        let y = netlist.eval(&x).expect("widths checked above");
        if !sv::in_relation(qc, &x, &y, tol, max_qubits)? {
            return Ok(VerifyOutcome::Fail { counterexample: x, produced: y });
        }
    }
    Ok(VerifyOutcome::Pass { checked: 1usize << qc.n_inputs })
}

/// Check (x, C(x)) on `samples` seeded random inputs.
pub fn verify_sampled(
    qc: &QuantumCircuit,
    netlist: &BoolCircuit,
    samples: usize,
    seed: u64,
    tol: f64,
    max_qubits: usize,
) -> Result<VerifyOutcome, SimError> {
    check_widths(qc, netlist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = F2Vector::from_bits((0..qc.n_inputs).map(|_| rng.random()));
        let y = netlist.eval(&x).expect("widths checked above");
        if !sv::in_relation(qc, &x, &y, tol, max_qubits)? {
            return Ok(VerifyOutcome::Fail { counterexample: x, produced: y });
        }
    }
    Ok(VerifyOutcome::Pass { checked: samples })
}
