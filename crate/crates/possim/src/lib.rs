//! Possibilistic simulation of Clifford+T quantum circuits by bounded
//! fan-in boolean circuits.
//!
//! A boolean circuit C *possibilistically simulates* a quantum circuit Q
//! when, for every input bitstring x, C(x) is a possible measurement
//! outcome of Q on |x⟩ — an outcome with nonzero amplitude. This crate
//! compiles any Clifford+T circuit into such a C over {NOT, AND, OR} with
//! fan-in 2, with depth linear in the quantum depth plus the T count:
//!
//! * [`qcir`] — gate-level quantum circuit IR and its text format;
//! * [`f2`] — bit-packed GF(2) vectors and matrices (RREF, kernel, solve);
//! * [`sv`] — dense statevector simulation, the brute-force oracle that
//!   defines the input/output relation being simulated;
//! * [`tableau`] — Pauli-string conjugation through Clifford gates and
//!   deterministic support strings at large width;
//! * [`bcir`] — boolean netlist IR, construction helpers, evaluation,
//!   depth measurement and serialization;
//! * [`compile`] — the T-gadget pipeline producing a netlist plus depth
//!   report, and exhaustive/sampled verification against the oracle;
//! * [`hlf`] — hidden-linear-function instances, generators, solver and
//!   verifier.

pub mod bcir;
pub mod compile;
pub mod f2;
pub mod hlf;
pub mod qcir;
pub mod sv;
pub mod tableau;
