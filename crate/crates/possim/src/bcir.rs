//! Boolean netlist IR over {NOT, AND, OR} with fan-in ≤ 2 and unbounded
//! fan-out: a builder with constant folding, construction helpers (balanced
//! parity trees, one-hot decoders, multiplexers), evaluation, depth
//! measurement and a line-oriented text format.
//!
//! XOR is not a primitive; it is always expanded as (x∨y)∧¬(x∧y), four gates
//! of depth 3, so that depth accounting matches that decomposition.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::f2::F2Vector;

pub type NodeId = usize;

/// A single gate or leaf. Operands always refer to earlier nodes, so a
/// node list in id order is topologically sorted by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Input(usize),
    Const(bool),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("input has {got} bits but the netlist reads {expected}")]
pub struct WidthError {
    pub expected: usize,
    pub got: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("node {id} references node {operand}, which is not an earlier node")]
    ForwardReference { id: usize, operand: usize },
    #[error("node {id} reads input {index}, but only {n_inputs} inputs are declared")]
    InputOutOfRange { id: usize, index: usize, n_inputs: usize },
    #[error("output list references missing node {id}")]
    BadOutput { id: usize },
}

/// An immutable combinational circuit: `nodes[k]` has id `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolCircuit {
    n_inputs: usize,
    nodes: Vec<NodeKind>,
    outputs: Vec<NodeId>,
}

impl BoolCircuit {
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    /// Number of NOT/AND/OR nodes (inputs and constants are free).
    pub fn gate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, NodeKind::Not(_) | NodeKind::And(..) | NodeKind::Or(..)))
            .count()
    }

    /// Structural well-formedness: operands strictly earlier, input indices
    /// in range, outputs existing. Fan-in ≤ 2 holds by the node type itself.
    pub fn validate(&self) -> Result<(), StructureError> {
        for (id, node) in self.nodes.iter().enumerate() {
            let mut operands = [None, None];
            match *node {
                NodeKind::Input(index) => {
                    if index >= self.n_inputs {
                        return Err(StructureError::InputOutOfRange {
                            id,
                            index,
                            n_inputs: self.n_inputs,
                        });
                    }
                }
                NodeKind::Const(_) => {}
                NodeKind::Not(a) => operands = [Some(a), None],
                NodeKind::And(a, b) | NodeKind::Or(a, b) => operands = [Some(a), Some(b)],
            }
            for op in operands.into_iter().flatten() {
                if op >= id {
                    return Err(StructureError::ForwardReference { id, operand: op });
                }
            }
        }
        for &out in &self.outputs {
            if out >= self.nodes.len() {
                return Err(StructureError::BadOutput { id: out });
            }
        }
        Ok(())
    }

    /// Evaluate on an input assignment, one pass in id order.
    pub fn eval(&self, x: &F2Vector) -> Result<F2Vector, WidthError> {
        if x.len() != self.n_inputs {
            return Err(WidthError { expected: self.n_inputs, got: x.len() });
        }
        let mut values: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                NodeKind::Input(i) => x.get(i),
                NodeKind::Const(b) => b,
                NodeKind::Not(a) => !values[a],
                NodeKind::And(a, b) => values[a] && values[b],
                NodeKind::Or(a, b) => values[a] || values[b],
            };
            values.push(v);
        }
        Ok(F2Vector::from_bits(self.outputs.iter().map(|&o| values[o])))
    }

    /// Depth of every node: inputs and constants cost 0, gates cost 1.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depths: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match *node {
                NodeKind::Input(_) | NodeKind::Const(_) => 0,
                NodeKind::Not(a) => depths[a] + 1,
                NodeKind::And(a, b) | NodeKind::Or(a, b) => depths[a].max(depths[b]) + 1,
            };
            depths.push(d);
        }
        depths
    }

    /// Longest input-to-output path counting gate nodes.
    pub fn depth(&self) -> usize {
        let depths = self.node_depths();
        self.outputs.iter().map(|&o| depths[o]).max().unwrap_or(0)
    }

    /// Serialize in the netlist text format with dense, increasing ids.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "inputs {}", self.n_inputs);
        out.push_str("outputs");
        for &o in &self.outputs {
            let _ = write!(out, " {o}");
        }
        out.push('\n');
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = match *node {
                NodeKind::Input(i) => writeln!(out, "{id} INPUT {i}"),
                NodeKind::Const(b) => writeln!(out, "{id} CONST {}", b as u8),
                NodeKind::Not(a) => writeln!(out, "{id} NOT {a}"),
                NodeKind::And(a, b) => writeln!(out, "{id} AND {a} {b}"),
                NodeKind::Or(a, b) => writeln!(out, "{id} OR {a} {b}"),
            };
        }
        out
    }
}

/// Incremental netlist constructor. Constants and input reads are cached,
/// NOT nodes are shared per source, and gates with constant operands fold
/// away; no rewriting beyond that.
pub struct Builder {
    n_inputs: usize,
    nodes: Vec<NodeKind>,
    input_cache: Vec<Option<NodeId>>,
    const_cache: [Option<NodeId>; 2],
    not_cache: HashMap<NodeId, NodeId>,
}

impl Builder {
    pub fn new(n_inputs: usize) -> Self {
        Builder {
            n_inputs,
            nodes: Vec::new(),
            input_cache: vec![None; n_inputs],
            const_cache: [None; 2],
            not_cache: HashMap::new(),
        }
    }

    fn push(&mut self, node: NodeKind) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn input(&mut self, index: usize) -> NodeId {
        assert!(index < self.n_inputs, "input index out of range");
        match self.input_cache[index] {
            Some(id) => id,
            None => {
                let id = self.push(NodeKind::Input(index));
                self.input_cache[index] = Some(id);
                id
            }
        }
    }

    pub fn constant(&mut self, bit: bool) -> NodeId {
        match self.const_cache[bit as usize] {
            Some(id) => id,
            None => {
                let id = self.push(NodeKind::Const(bit));
                self.const_cache[bit as usize] = Some(id);
                id
            }
        }
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        if let NodeKind::Const(b) = self.nodes[a] {
            return self.constant(!b);
        }
        if let Some(&id) = self.not_cache.get(&a) {
            return id;
        }
        let id = self.push(NodeKind::Not(a));
        self.not_cache.insert(a, id);
        id
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.nodes[a], self.nodes[b]) {
            (NodeKind::Const(false), _) | (_, NodeKind::Const(false)) => self.constant(false),
            (NodeKind::Const(true), _) => b,
            (_, NodeKind::Const(true)) => a,
            _ => self.push(NodeKind::And(a, b)),
        }
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.nodes[a], self.nodes[b]) {
            (NodeKind::Const(true), _) | (_, NodeKind::Const(true)) => self.constant(true),
            (NodeKind::Const(false), _) => b,
            (_, NodeKind::Const(false)) => a,
            _ => self.push(NodeKind::Or(a, b)),
        }
    }

    /// XOR as (a∨b)∧¬(a∧b): four gates, depth 3.
    pub fn xor(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let either = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        self.and(either, not_both)
    }

    /// Balanced pairwise reduction; depth grows by one combine per level.
    fn reduce_balanced(
        &mut self,
        mut layer: Vec<NodeId>,
        combine: fn(&mut Self, NodeId, NodeId) -> NodeId,
    ) -> NodeId {
        assert!(!layer.is_empty());
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            let mut chunks = layer.chunks_exact(2);
            for pair in chunks.by_ref() {
                next.push(combine(self, pair[0], pair[1]));
            }
            next.extend(chunks.remainder());
            layer = next;
        }
        layer[0]
    }

    /// ⊕_{i: a_i = 1} x_i as a balanced tree of XOR blocks; depth at most
    /// 3·⌈log₂ max(|a|, 1)⌉. Weight 0 is the constant 0 and weight 1 is the
    /// bare input wire.
    pub fn build_parity(&mut self, a: &F2Vector) -> NodeId {
        assert_eq!(a.len(), self.n_inputs, "parity mask width must match inputs");
        let leaves: Vec<NodeId> = a.ones().map(|i| self.input(i)).collect();
        if leaves.is_empty() {
            return self.constant(false);
        }
        self.reduce_balanced(leaves, Self::xor)
    }

    /// One decoder line: AND over k of (z_k if bit k of j else ¬z_k), with
    /// bit 0 least significant. Depth at most ⌈log₂ t⌉ + 1; t = 0 gives the
    /// constant 1.
    pub fn build_decoder(&mut self, z_nodes: &[NodeId], j: usize) -> NodeId {
        assert!(z_nodes.len() >= usize::BITS as usize || j < 1usize << z_nodes.len(), "index must fit in t bits");
        let literals: Vec<NodeId> = z_nodes
            .iter()
            .enumerate()
            .map(|(k, &z)| if j >> k & 1 == 1 { z } else { self.not(z) })
            .collect();
        if literals.is_empty() {
            return self.constant(true);
        }
        self.reduce_balanced(literals, Self::and)
    }

    /// Select among candidate output bundles with one-hot lines `f`:
    /// per bit, AND each bundle with its line, then a balanced OR tree.
    /// A single candidate passes through untouched.
    pub fn build_mux(&mut self, candidates: &[Vec<NodeId>], f: &[NodeId]) -> Vec<NodeId> {
        assert_eq!(candidates.len(), f.len(), "one selector line per candidate");
        assert!(!candidates.is_empty());
        let m = candidates[0].len();
        assert!(candidates.iter().all(|c| c.len() == m), "bundle widths must agree");
        if candidates.len() == 1 {
            return candidates[0].clone();
        }
        (0..m)
            .map(|i| {
                let terms: Vec<NodeId> = candidates
                    .iter()
                    .zip(f)
                    .map(|(bundle, &line)| self.and(bundle[i], line))
                    .collect();
                self.reduce_balanced(terms, Self::or)
            })
            .collect()
    }

    pub fn finish(self, outputs: Vec<NodeId>) -> BoolCircuit {
        assert!(outputs.iter().all(|&o| o < self.nodes.len()), "output id out of range");
        BoolCircuit { n_inputs: self.n_inputs, nodes: self.nodes, outputs }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct NetlistError {
    pub line: usize,
    pub kind: NetlistErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistErrorKind {
    #[error("expected `{0}` header")]
    MissingHeader(&'static str),
    #[error("`{0}` is not a valid integer")]
    BadInteger(String),
    #[error("unknown node kind `{0}`")]
    UnknownKind(String),
    #[error("{kind} takes {expected} operand(s), found {got}")]
    BadArity { kind: String, expected: usize, got: usize },
    #[error("node id {id} does not increase (previous was {prev})")]
    NonIncreasingId { id: usize, prev: usize },
    #[error("operand {0} does not name an earlier node")]
    UnknownOperand(usize),
    #[error("input index {index} out of range for {n_inputs} inputs")]
    InputOutOfRange { index: usize, n_inputs: usize },
    #[error("constant bit must be 0 or 1, found `{0}`")]
    BadBit(String),
    #[error("output id {0} does not name a node")]
    UnknownOutput(usize),
}

fn bad_int(line: usize, token: &str) -> NetlistError {
    NetlistError { line, kind: NetlistErrorKind::BadInteger(token.to_string()) }
}

/// Parse the netlist text format. Node ids must be strictly increasing but
/// may have gaps; they are renumbered densely, so emit ∘ parse is the
/// identity on emitted files.
pub fn parse_netlist(text: &str) -> Result<BoolCircuit, NetlistError> {
    let mut n_inputs: Option<usize> = None;
    let mut raw_outputs: Option<Vec<usize>> = None;
    let mut nodes: Vec<NodeKind> = Vec::new();
    let mut id_map: HashMap<usize, NodeId> = HashMap::new();
    let mut prev_id: Option<usize> = None;
    let mut line_no = 0;

    for raw_line in text.lines() {
        line_no += 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();

        if n_inputs.is_none() {
            if tokens[0] != "inputs" {
                return Err(NetlistError { line: line_no, kind: NetlistErrorKind::MissingHeader("inputs") });
            }
            if tokens.len() != 2 {
                return Err(NetlistError {
                    line: line_no,
                    kind: NetlistErrorKind::BadArity { kind: "inputs".into(), expected: 1, got: tokens.len() - 1 },
                });
            }
            n_inputs = Some(tokens[1].parse().map_err(|_| bad_int(line_no, tokens[1]))?);
            continue;
        }
        if raw_outputs.is_none() {
            if tokens[0] != "outputs" {
                return Err(NetlistError { line: line_no, kind: NetlistErrorKind::MissingHeader("outputs") });
            }
            let ids = tokens[1..]
                .iter()
                .map(|tok| tok.parse().map_err(|_| bad_int(line_no, tok)))
                .collect::<Result<Vec<usize>, _>>()?;
            raw_outputs = Some(ids);
            continue;
        }

        if tokens.len() < 2 {
            return Err(NetlistError {
                line: line_no,
                kind: NetlistErrorKind::BadArity { kind: tokens[0].into(), expected: 2, got: tokens.len() - 1 },
            });
        }
        let id: usize = tokens[0].parse().map_err(|_| bad_int(line_no, tokens[0]))?;
        if let Some(prev) = prev_id {
            if id <= prev {
                return Err(NetlistError { line: line_no, kind: NetlistErrorKind::NonIncreasingId { id, prev } });
            }
        }
        let kind = tokens[1];
        let args = &tokens[2..];
        let expect = |n: usize| -> Result<(), NetlistError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(NetlistError {
                    line: line_no,
                    kind: NetlistErrorKind::BadArity { kind: kind.into(), expected: n, got: args.len() },
                })
            }
        };
        let operand = |tok: &str| -> Result<NodeId, NetlistError> {
            let raw: usize = tok.parse().map_err(|_| bad_int(line_no, tok))?;
            id_map
                .get(&raw)
                .copied()
                .ok_or(NetlistError { line: line_no, kind: NetlistErrorKind::UnknownOperand(raw) })
        };
        let node = match kind {
            "INPUT" => {
                expect(1)?;
                let index: usize = args[0].parse().map_err(|_| bad_int(line_no, args[0]))?;
                let n = n_inputs.unwrap();
                if index >= n {
                    return Err(NetlistError {
                        line: line_no,
                        kind: NetlistErrorKind::InputOutOfRange { index, n_inputs: n },
                    });
                }
                NodeKind::Input(index)
            }
            "CONST" => {
                expect(1)?;
                match args[0] {
                    "0" => NodeKind::Const(false),
                    "1" => NodeKind::Const(true),
                    other => {
                        return Err(NetlistError { line: line_no, kind: NetlistErrorKind::BadBit(other.to_string()) })
                    }
                }
            }
            "NOT" => {
                expect(1)?;
                NodeKind::Not(operand(args[0])?)
            }
            "AND" => {
                expect(2)?;
                NodeKind::And(operand(args[0])?, operand(args[1])?)
            }
            "OR" => {
                expect(2)?;
                NodeKind::Or(operand(args[0])?, operand(args[1])?)
            }
            other => {
                return Err(NetlistError { line: line_no, kind: NetlistErrorKind::UnknownKind(other.to_string()) })
            }
        };
        id_map.insert(id, nodes.len());
        nodes.push(node);
        prev_id = Some(id);
    }

    let n_inputs = n_inputs
        .ok_or(NetlistError { line: line_no + 1, kind: NetlistErrorKind::MissingHeader("inputs") })?;
    let raw_outputs = raw_outputs
        .ok_or(NetlistError { line: line_no + 1, kind: NetlistErrorKind::MissingHeader("outputs") })?;
    let outputs = raw_outputs
        .into_iter()
        .map(|raw| {
            id_map
                .get(&raw)
                .copied()
                .ok_or(NetlistError { line: line_no + 1, kind: NetlistErrorKind::UnknownOutput(raw) })
        })
        .collect::<Result<Vec<NodeId>, _>>()?;
    Ok(BoolCircuit { n_inputs, nodes, outputs })
}
