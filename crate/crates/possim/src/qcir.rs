//! Quantum circuit intermediate representation.
//!
//! Circuits are flat gate lists over `{H, S, S†, X, Y, Z, CX, CZ, T, T†}`
//! with bookkeeping for which lines are variable inputs, all-zero advice, or
//! magic-state ancillas. The text format is one directive per line:
//!
//! ```text
//! # comment
//! qubits 3
//! inputs 2
//! advice 1
//! h 0
//! t 1
//! cx 0 1
//! ```
//!
//! `qubits <N>` must come first; `inputs` defaults to N and `advice` to 0,
//! and inputs + advice must equal qubits. Gate mnemonics are
//! `h s sdg x y z t tdg` (one qubit) and `cx cz` (two qubits, control first
//! for `cx`), all with 0-based line indices.

use std::fmt;

use thiserror::Error;

/// A single gate application. Two-qubit constructors carry (control, target)
/// for `Cx` and an unordered pair for `Cz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    T(usize),
    Tdg(usize),
    Cx(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    /// The lines the gate acts on (1 or 2).
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![q],
            Gate::Cx(c, t) => vec![c, t],
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::Cx(..) => "cx",
            Gate::Cz(..) => "cz",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cx(a, b) | Gate::Cz(a, b) => write!(f, "{} {} {}", self.mnemonic(), a, b),
            ref g => write!(f, "{} {}", g.mnemonic(), g.qubits()[0]),
        }
    }
}

/// A quantum circuit: ordered gates over `n_qubits` lines.
///
/// Lines are laid out as inputs, then advice, then magic; `postselect` holds
/// terminal (line, required bit) annotations and `measured` the output lines
/// (defaulting to the input lines).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCircuit {
    pub n_qubits: usize,
    pub n_inputs: usize,
    pub n_advice: usize,
    pub n_magic: usize,
    pub gates: Vec<Gate>,
    pub postselect: Vec<(usize, bool)>,
    pub measured: Vec<usize>,
}

impl QuantumCircuit {
    /// Circuit with `n` variable input lines, no advice, no gates.
    pub fn new(n: usize) -> Self {
        QuantumCircuit {
            n_qubits: n,
            n_inputs: n,
            n_advice: 0,
            n_magic: 0,
            gates: Vec::new(),
            postselect: Vec::new(),
            measured: (0..n).collect(),
        }
    }

    pub fn with_advice(n_inputs: usize, n_advice: usize) -> Self {
        QuantumCircuit {
            n_qubits: n_inputs + n_advice,
            n_inputs,
            n_advice,
            n_magic: 0,
            gates: Vec::new(),
            postselect: Vec::new(),
            measured: (0..n_inputs).collect(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.n_qubits));
        self.gates.push(gate);
    }

    /// Indices of the magic-state lines (always the trailing lines).
    pub fn magic_lines(&self) -> std::ops::Range<usize> {
        self.n_qubits - self.n_magic..self.n_qubits
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    /// Number of T gates after canonicalization (each T† contributes one T).
    pub fn t_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::T(_) | Gate::Tdg(_)))
            .count()
    }

    /// Greedy as-soon-as-possible depth: each gate lands in the earliest
    /// layer after every earlier gate touching one of its qubits.
    pub fn depth(&self) -> usize {
        let mut line_depth = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let layer = gate.qubits().iter().map(|&q| line_depth[q]).max().unwrap() + 1;
            for q in gate.qubits() {
                line_depth[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Rewrite T† as S†·T and Y as Z·X, leaving everything else alone.
    ///
    /// The result contains no `Tdg` and no `Y` and implements the same
    /// unitary up to a global phase, which possibilistic simulation ignores.
    pub fn canonicalize(&self) -> QuantumCircuit {
        let mut out = self.clone();
        out.gates.clear();
        for gate in &self.gates {
            match *gate {
                Gate::Tdg(q) => {
                    out.gates.push(Gate::Sdg(q));
                    out.gates.push(Gate::T(q));
                }
                Gate::Y(q) => {
                    out.gates.push(Gate::Z(q));
                    out.gates.push(Gate::X(q));
                }
                g => out.gates.push(g),
            }
        }
        out
    }

    /// Emit the circuit text format. Inverse of [`parse_circuit`] for
    /// circuits without magic lines; the format has no directive for
    /// gadget ancillas.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        if self.n_advice > 0 {
            out.push_str(&format!("inputs {}\n", self.n_inputs));
            out.push_str(&format!("advice {}\n", self.n_advice));
        }
        for gate in &self.gates {
            out.push_str(&format!("{gate}\n"));
        }
        out
    }
}

/// Upper bound on declared lines. Width limits for simulation are enforced
/// elsewhere; this one only keeps a few header bytes from forcing an
/// allocation proportional to an attacker-chosen width.
pub const MAX_DECLARED_LINES: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `qubits <N>` header")]
    MissingHeader,
    #[error("duplicate `{0}` directive")]
    DuplicateDirective(String),
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("expected {expected} qubit argument(s), got {got}")]
    BadArity { expected: usize, got: usize },
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("qubit {qubit} out of range for {width} line(s)")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("repeated qubit {0} in a two-qubit gate")]
    RepeatedQubit(usize),
    #[error("inputs {inputs} + advice {advice} must equal qubits {qubits}")]
    LineCountMismatch {
        inputs: usize,
        advice: usize,
        qubits: usize,
    },
    #[error("`{0}` must appear before the first gate")]
    HeaderAfterGates(String),
    #[error("{0} lines exceeds the structural limit of {MAX_DECLARED_LINES}")]
    TooManyLines(usize),
}

fn parse_usize(token: &str, line: usize) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        kind: ParseErrorKind::BadInteger(token.to_string()),
    })
}

/// Parse the circuit text format. Gate order is preserved; errors carry the
/// 1-based source line number.
pub fn parse_circuit(text: &str) -> Result<QuantumCircuit, ParseError> {
    let mut n_qubits: Option<usize> = None;
    let mut n_inputs: Option<usize> = None;
    let mut n_advice: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut header_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let word = tokens.next().unwrap();
        let args: Vec<&str> = tokens.collect();

        let err = |kind| ParseError { line: line_no, kind };

        match word {
            "qubits" | "inputs" | "advice" => {
                if !gates.is_empty() {
                    return Err(err(ParseErrorKind::HeaderAfterGates(word.to_string())));
                }
                if args.len() != 1 {
                    return Err(err(ParseErrorKind::BadArity { expected: 1, got: args.len() }));
                }
                let value = parse_usize(args[0], line_no)?;
                if word == "qubits" && value > MAX_DECLARED_LINES {
                    return Err(err(ParseErrorKind::TooManyLines(value)));
                }
                if word != "qubits" && n_qubits.is_none() {
                    return Err(err(ParseErrorKind::MissingHeader));
                }
                let slot = match word {
                    "qubits" => &mut n_qubits,
                    "inputs" => &mut n_inputs,
                    _ => &mut n_advice,
                };
                if slot.is_some() {
                    return Err(err(ParseErrorKind::DuplicateDirective(word.to_string())));
                }
                *slot = Some(value);
                if word == "qubits" {
                    header_line = line_no;
                }
            }
            mnemonic => {
                let width = n_qubits.ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                let arity = match mnemonic {
                    "h" | "s" | "sdg" | "x" | "y" | "z" | "t" | "tdg" => 1,
                    "cx" | "cz" => 2,
                    other => {
                        return Err(err(ParseErrorKind::UnknownMnemonic(other.to_string())));
                    }
                };
                if args.len() != arity {
                    return Err(err(ParseErrorKind::BadArity { expected: arity, got: args.len() }));
                }
                let mut qs = [0usize; 2];
                for (i, a) in args.iter().enumerate() {
                    let q = parse_usize(a, line_no)?;
                    if q >= width {
                        return Err(err(ParseErrorKind::QubitOutOfRange { qubit: q, width }));
                    }
                    qs[i] = q;
                }
                if arity == 2 && qs[0] == qs[1] {
                    return Err(err(ParseErrorKind::RepeatedQubit(qs[0])));
                }
                gates.push(match mnemonic {
                    "h" => Gate::H(qs[0]),
                    "s" => Gate::S(qs[0]),
                    "sdg" => Gate::Sdg(qs[0]),
                    "x" => Gate::X(qs[0]),
                    "y" => Gate::Y(qs[0]),
                    "z" => Gate::Z(qs[0]),
                    "t" => Gate::T(qs[0]),
                    "tdg" => Gate::Tdg(qs[0]),
                    "cx" => Gate::Cx(qs[0], qs[1]),
                    _ => Gate::Cz(qs[0], qs[1]),
                });
            }
        }
    }

    let n_qubits = n_qubits.ok_or(ParseError {
        line: text.lines().count().max(1),
        kind: ParseErrorKind::MissingHeader,
    })?;
    let n_inputs = n_inputs.unwrap_or(n_qubits);
    let n_advice = n_advice.unwrap_or(0);
    if n_inputs.checked_add(n_advice) != Some(n_qubits) {
        return Err(ParseError {
            line: header_line,
            kind: ParseErrorKind::LineCountMismatch {
                inputs: n_inputs,
                advice: n_advice,
                qubits: n_qubits,
            },
        });
    }

    let mut qc = QuantumCircuit::with_advice(n_inputs, n_advice);
    qc.gates = gates;
    Ok(qc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_gate() {
        let qc = parse_circuit("qubits 1\nh 0\n").unwrap();
        assert_eq!(qc.n_qubits, 1);
        assert_eq!(qc.gates, vec![Gate::H(0)]);
        assert_eq!(qc.measured, vec![0]);
    }

    #[test]
    fn parse_h_t_cx() {
        let qc = parse_circuit("qubits 2\nh 0\nt 1\ncx 0 1\n").unwrap();
        assert_eq!(qc.gates, vec![Gate::H(0), Gate::T(1), Gate::Cx(0, 1)]);
        assert_eq!(qc.depth(), 2);
    }

    #[test]
    fn parse_rejects_repeated_qubit() {
        let err = parse_circuit("qubits 2\ncx 1 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, ParseErrorKind::RepeatedQubit(1));
    }

    #[test]
    fn parse_rejects_missing_header() {
        let err = parse_circuit("h 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_circuit("qubits 2\nh 2\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::QubitOutOfRange { qubit: 2, width: 2 });
    }

    #[test]
    fn parse_rejects_unknown_mnemonic() {
        let err = parse_circuit("qubits 1\nfoo 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownMnemonic("foo".into()));
    }

    #[test]
    fn parse_checks_line_accounting() {
        let err = parse_circuit("qubits 3\ninputs 2\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::LineCountMismatch { .. }));
        let qc = parse_circuit("qubits 3\ninputs 2\nadvice 1\n").unwrap();
        assert_eq!((qc.n_inputs, qc.n_advice), (2, 1));
        assert_eq!(qc.measured, vec![0, 1]);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let qc = parse_circuit("# a comment\nqubits 1 # trailing\n\nx 0\n").unwrap();
        assert_eq!(qc.gates, vec![Gate::X(0)]);
    }

    #[test]
    fn parse_caps_declared_width() {
        let text = format!("qubits {}\n", MAX_DECLARED_LINES + 1);
        let err = parse_circuit(&text).unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.kind, ParseErrorKind::TooManyLines(MAX_DECLARED_LINES + 1));
        assert!(parse_circuit(&format!("qubits {MAX_DECLARED_LINES}\n")).is_ok());

        let overflow = format!("qubits 0\ninputs {0}\nadvice {0}\n", usize::MAX / 2 + 1);
        let err = parse_circuit(&overflow).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::LineCountMismatch { .. }));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(QuantumCircuit::new(1).depth(), 0);
        let qc = parse_circuit("qubits 2\nh 0\nx 1\n").unwrap();
        assert_eq!(qc.depth(), 1);
    }

    #[test]
    fn depth_is_monotone_under_append() {
        let mut qc = parse_circuit("qubits 3\nh 0\ncx 0 1\ncz 1 2\n").unwrap();
        let mut prev = 0;
        for gate in [Gate::S(2), Gate::Cx(2, 0), Gate::H(1), Gate::Cz(0, 2)] {
            qc.push(gate);
            let d = qc.depth();
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn canonicalize_examples() {
        let tdg = parse_circuit("qubits 1\ntdg 0\n").unwrap().canonicalize();
        assert_eq!(tdg.gates, vec![Gate::Sdg(0), Gate::T(0)]);
        let y = parse_circuit("qubits 1\ny 0\n").unwrap().canonicalize();
        assert_eq!(y.gates, vec![Gate::Z(0), Gate::X(0)]);
        let clifford = parse_circuit("qubits 2\nh 0\ns 1\ncx 0 1\ncz 1 0\n").unwrap();
        assert_eq!(clifford.canonicalize(), clifford);
    }

    #[test]
    fn text_round_trip_is_identity_on_the_ir() {
        let texts = [
            "qubits 2\nh 0\nt 1\ncx 0 1\n",
            "qubits 3\ninputs 2\nadvice 1\nsdg 2\ncz 0 2\n",
            "qubits 1\n",
        ];
        for text in texts {
            let qc = parse_circuit(text).unwrap();
            let emitted = qc.to_text();
            assert_eq!(parse_circuit(&emitted).unwrap(), qc);
            assert_eq!(parse_circuit(&emitted).unwrap().to_text(), emitted);
        }
    }
}
