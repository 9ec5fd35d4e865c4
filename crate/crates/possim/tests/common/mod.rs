//! Seeded corpus generators shared by the integration suites. Fixed seeds
//! make every run exercise byte-identical circuits.

use possim::qcir::{parse_circuit, Gate, QuantumCircuit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CLIFFORD_T_SUITE_SEED: u64 = 0x0001_C1F0;
pub const CLIFFORD_SUITE_SEED: u64 = 0x0002_C1F0;

/// The two-qubit running example used throughout the docs: H on line 0, T on
/// line 1, then CX — the smallest circuit with a non-trivial selector.
pub fn ht_cx() -> QuantumCircuit {
    parse_circuit("qubits 2\nh 0\nt 1\ncx 0 1\n").expect("example parses")
}

fn random_gate(n: usize, allow_t: bool, rng: &mut ChaCha8Rng) -> Gate {
    loop {
        let q = rng.random_range(0..n);
        match rng.random_range(0..10u8) {
            0 => return Gate::H(q),
            1 => return Gate::S(q),
            2 => return Gate::Sdg(q),
            3 => return Gate::X(q),
            4 => return Gate::Y(q),
            5 => return Gate::Z(q),
            6 if allow_t => return Gate::T(q),
            7 if allow_t => return Gate::Tdg(q),
            8 | 9 if n >= 2 => {
                let mut r = rng.random_range(0..n - 1);
                if r >= q {
                    r += 1;
                }
                return if rng.random_range(0..2u8) == 0 { Gate::Cx(q, r) } else { Gate::Cz(q, r) };
            }
            _ => continue,
        }
    }
}

/// Random circuit on `n` lines with at most `t_budget` T/T† gates and depth
/// at most `max_depth` (`usize::MAX` to leave depth unconstrained). Depth is
/// enforced by trimming trailing gates, which can only shrink it.
pub fn random_circuit(
    n: usize,
    len: usize,
    t_budget: usize,
    max_depth: usize,
    rng: &mut ChaCha8Rng,
) -> QuantumCircuit {
    let mut qc = QuantumCircuit::new(n);
    let mut t_used = 0;
    for _ in 0..len {
        let gate = random_gate(n, t_used < t_budget, rng);
        if matches!(gate, Gate::T(_) | Gate::Tdg(_)) {
            t_used += 1;
        }
        qc.push(gate);
    }
    while qc.depth() > max_depth {
        qc.gates.pop();
    }
    qc
}

/// 200 seeded circuits over the full gate set: n ≤ 6, t ≤ 4, depth ≤ 8.
pub fn clifford_t_suite() -> Vec<QuantumCircuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(CLIFFORD_T_SUITE_SEED);
    (0..200)
        .map(|_| {
            let n = rng.random_range(1..=6);
            let len = rng.random_range(0..=20);
            let t_budget = rng.random_range(0..=4);
            random_circuit(n, len, t_budget, 8, &mut rng)
        })
        .collect()
}

/// 100 seeded Clifford-only circuits with n ≤ 8 and unconstrained depth.
pub fn clifford_suite() -> Vec<QuantumCircuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(CLIFFORD_SUITE_SEED);
    (0..100)
        .map(|_| {
            let n = rng.random_range(1..=8);
            let len = rng.random_range(0..=24);
            random_circuit(n, len, 0, usize::MAX, &mut rng)
        })
        .collect()
}
