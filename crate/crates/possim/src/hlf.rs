//! Hidden linear function instances and their classical solver.
//!
//! An instance is a symmetric M×M binary matrix A. The quadratic form
//! q(x) = xᵀA x mod 4 restricts to a linear function on ker(A):
//! q(x) ≡ 2·z·x (mod 4) there, for some z ∈ {0,1}^M. The solver recovers a
//! valid z by evaluating q on a kernel basis — where it provably takes
//! values in {0, 2} — and solving one GF(2) linear system.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

use crate::f2::{F2Matrix, F2Vector};

/// Kernel dimension up to which [`verify_hlf`] enumerates exhaustively.
pub const DEFAULT_VERIFY_BUDGET: usize = 16;

/// Samples drawn when the kernel is too large to enumerate.
const VERIFY_SAMPLES: usize = 10_000;

/// Fixed seed for the sampling fallback, keeping verification deterministic.
const VERIFY_SEED: u64 = 0x484c46;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HlfInstance {
    m: usize,
    a: F2Matrix,
}

impl HlfInstance {
    /// Wrap a symmetric matrix; panics when A ≠ Aᵀ.
    pub fn new(a: F2Matrix) -> Self {
        assert_eq!(a.rows(), a.cols(), "instance matrix must be square");
        assert!(a.is_symmetric(), "instance matrix must be symmetric");
        HlfInstance { m: a.rows(), a }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.a
    }

    /// Serialize as the instance file format: a `hlf <M>` header and the
    /// upper triangle (diagonal included) row-major on one line, which is
    /// M(M+1)/2 bits.
    pub fn to_text(&self) -> String {
        let mut bits = String::with_capacity(self.m * (self.m + 1) / 2);
        for r in 0..self.m {
            for c in r..self.m {
                bits.push(if self.a.get(r, c) { '1' } else { '0' });
            }
        }
        format!("hlf {}\n{}\n", self.m, bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HlfSolution {
    pub z: F2Vector,
}

impl fmt::Display for HlfSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.z)
    }
}

/// Adjacency matrix of the undirected N×N grid, vertices numbered row-major
/// (vertex (r, c) is r·N + c); M = N² and the diagonal is zero.
pub fn gen_grid(n: usize) -> HlfInstance {
    assert!(n >= 1, "grid side must be positive");
    let m = n * n;
    let mut a = F2Matrix::zeros(m, m);
    for r in 0..n {
        for c in 0..n {
            let v = r * n + c;
            if c + 1 < n {
                a.set(v, v + 1, true);
                a.set(v + 1, v, true);
            }
            if r + 1 < n {
                a.set(v, v + n, true);
                a.set(v + n, v, true);
            }
        }
    }
    HlfInstance { m, a }
}

/// A reproducible random symmetric instance: the upper triangle (diagonal
/// included) is drawn from a seeded generator and mirrored.
pub fn gen_random(m: usize, seed: u64) -> HlfInstance {
    assert!(m >= 1, "instance size must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = F2Matrix::zeros(m, m);
    for r in 0..m {
        for c in r..m {
            if rng.random() {
                a.set(r, c, true);
                a.set(c, r, true);
            }
        }
    }
    HlfInstance { m, a }
}

/// xᵀA x over the integers, reduced mod 4. Expanding the double sum, each
/// set input bit i contributes |row_i ∧ x|.
pub fn quadratic_form(inst: &HlfInstance, x: &F2Vector) -> u8 {
    assert_eq!(x.len(), inst.m, "input width must match the instance");
    let mut total = 0usize;
    for i in x.ones() {
        total += inst.a.row(i).ones().filter(|&j| x.get(j)).count();
    }
    (total % 4) as u8
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HlfError {
    #[error("quadratic form takes odd value {value} on kernel vector {vector}")]
    OddKernelValue { vector: F2Vector, value: u8 },
    #[error("kernel linear system is inconsistent")]
    Inconsistent,
}

/// Recover z with q(x) ≡ 2·z·x (mod 4) on ker(A): evaluate q on the
/// canonical kernel basis, halve, and solve the resulting GF(2) system.
/// Both error cases are impossible for symmetric instances and signal a bug.
pub fn solve_hlf(inst: &HlfInstance) -> Result<HlfSolution, HlfError> {
    let basis = inst.a.kernel_basis();
    if basis.is_empty() {
        // no constraints; the canonical solution is all-zero
        return Ok(HlfSolution { z: F2Vector::zeros(inst.m) });
    }
    let mut rhs_bits = Vec::with_capacity(basis.len());
    for e in &basis {
        let value = quadratic_form(inst, e);
        if !value.is_multiple_of(2) {
            return Err(HlfError::OddKernelValue { vector: e.clone(), value });
        }
        rhs_bits.push(value == 2);
    }
    let system = F2Matrix::from_rows(basis);
    let rhs = F2Vector::from_bits(rhs_bits);
    let z = system.solve(&rhs).map_err(|_| HlfError::Inconsistent)?;
    Ok(HlfSolution { z })
}

/// Check q(x) ≡ 2·(z·x) (mod 4) across ker(A): exhaustively when the kernel
/// dimension is at most `budget`, otherwise on a fixed-seed sample of
/// kernel elements.
pub fn verify_hlf(inst: &HlfInstance, sol: &HlfSolution, budget: usize) -> bool {
    assert_eq!(sol.z.len(), inst.m, "solution width must match the instance");
    let basis = inst.a.kernel_basis();
    let k = basis.len();
    let holds = |x: &F2Vector| {
        let want = 2 * (sol.z.dot(x) as u8);
        quadratic_form(inst, x) == want
    };
    if k <= budget.min(usize::BITS as usize - 1) {
        (0..1usize << k).all(|combo| holds(&kernel_element(&basis, |i| combo >> i & 1 == 1, inst.m)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
        (0..VERIFY_SAMPLES).all(|_| {
            let picks: Vec<bool> = (0..k).map(|_| rng.random()).collect();
            holds(&kernel_element(&basis, |i| picks[i], inst.m))
        })
    }
}

fn kernel_element(basis: &[F2Vector], select: impl Fn(usize) -> bool, m: usize) -> F2Vector {
    let mut x = F2Vector::zeros(m);
    for (i, e) in basis.iter().enumerate() {
        if select(i) {
            x.xor_assign(e);
        }
    }
    x
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct HlfParseError {
    pub line: usize,
    pub kind: HlfParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HlfParseErrorKind {
    #[error("expected `hlf <M>` header")]
    MissingHeader,
    #[error("`{0}` is not a valid integer")]
    BadInteger(String),
    #[error("instance size must be at least 1")]
    ZeroSize,
    #[error("instance size is too large")]
    TooLarge,
    #[error("expected {expected} triangle bits, found {got}")]
    WrongBitCount { expected: usize, got: usize },
    #[error("`{0}` is not a bit")]
    BadBit(char),
    #[error("missing bit line")]
    MissingBits,
    #[error("unexpected trailing content")]
    TrailingContent,
}

/// Significant (non-blank, comment-stripped) lines with their 1-based numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parse the instance file format emitted by [`HlfInstance::to_text`].
pub fn parse_hlf_instance(text: &str) -> Result<HlfInstance, HlfParseError> {
    let mut lines = significant_lines(text);
    let last_line = text.lines().count() + 1;

    let (header_no, header) = lines
        .next()
        .ok_or(HlfParseError { line: last_line, kind: HlfParseErrorKind::MissingHeader })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "hlf" {
        return Err(HlfParseError { line: header_no, kind: HlfParseErrorKind::MissingHeader });
    }
    let m: usize = tokens[1]
        .parse()
        .map_err(|_| HlfParseError { line: header_no, kind: HlfParseErrorKind::BadInteger(tokens[1].into()) })?;
    if m == 0 {
        return Err(HlfParseError { line: header_no, kind: HlfParseErrorKind::ZeroSize });
    }
    let expected = m
        .checked_add(1)
        .and_then(|m1| m.checked_mul(m1))
        .map(|product| product / 2)
        .ok_or(HlfParseError { line: header_no, kind: HlfParseErrorKind::TooLarge })?;

    let (bits_no, bits) = lines
        .next()
        .ok_or(HlfParseError { line: last_line, kind: HlfParseErrorKind::MissingBits })?;
    if bits.chars().count() != expected {
        return Err(HlfParseError {
            line: bits_no,
            kind: HlfParseErrorKind::WrongBitCount { expected, got: bits.chars().count() },
        });
    }
    if let Some((extra_no, _)) = lines.next() {
        return Err(HlfParseError { line: extra_no, kind: HlfParseErrorKind::TrailingContent });
    }

    let mut a = F2Matrix::zeros(m, m);
    let mut chars = bits.chars();
    for r in 0..m {
        for c in r..m {
            match chars.next().unwrap() {
                '0' => {}
                '1' => {
                    a.set(r, c, true);
                    a.set(c, r, true);
                }
                other => {
                    return Err(HlfParseError { line: bits_no, kind: HlfParseErrorKind::BadBit(other) })
                }
            }
        }
    }
    Ok(HlfInstance { m, a })
}

/// Parse a solution file: one line of bits.
pub fn parse_hlf_solution(text: &str) -> Result<HlfSolution, HlfParseError> {
    let mut lines = significant_lines(text);
    let last_line = text.lines().count() + 1;
    let (line_no, bits) = lines
        .next()
        .ok_or(HlfParseError { line: last_line, kind: HlfParseErrorKind::MissingBits })?;
    if let Some((extra_no, _)) = lines.next() {
        return Err(HlfParseError { line: extra_no, kind: HlfParseErrorKind::TrailingContent });
    }
    let mut parsed = Vec::with_capacity(bits.len());
    for c in bits.chars() {
        match c {
            '0' => parsed.push(false),
            '1' => parsed.push(true),
            other => return Err(HlfParseError { line: line_no, kind: HlfParseErrorKind::BadBit(other) }),
        }
    }
    Ok(HlfSolution { z: F2Vector::from_bits(parsed) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> F2Vector {
        s.parse().unwrap()
    }

    fn triangle(m: usize) -> HlfInstance {
        // complete graph on 3 vertices embedded in an m×m matrix
        let mut a = F2Matrix::zeros(m, m);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    a.set(i, j, true);
                }
            }
        }
        HlfInstance::new(a)
    }

    #[test]
    fn grid_of_side_one_has_no_edges() {
        let inst = gen_grid(1);
        assert_eq!(inst.m(), 1);
        assert!(!inst.matrix().get(0, 0));
    }

    #[test]
    fn grid_of_side_two_is_the_four_cycle() {
        let inst = gen_grid(2);
        assert_eq!(inst.m(), 4);
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .filter(|&(u, v)| inst.matrix().get(u, v))
            .collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(inst.matrix().is_symmetric());
        assert!((0..4).all(|v| !inst.matrix().get(v, v)));
    }

    #[test]
    fn grid_of_side_three_has_the_right_degrees() {
        let inst = gen_grid(3);
        let degree = |v: usize| inst.matrix().row(v).weight();
        let mut counts = [0usize; 5];
        for v in 0..9 {
            counts[degree(v)] += 1;
        }
        assert_eq!(counts, [0, 0, 4, 4, 1], "4 corners, 4 edges, 1 center");
    }

    #[test]
    fn random_instances_are_reproducible_and_symmetric() {
        for m in 1..=10 {
            let a = gen_random(m, 99);
            let b = gen_random(m, 99);
            assert_eq!(a, b);
            assert!(a.matrix().is_symmetric());
        }
        assert_ne!(gen_random(8, 1), gen_random(8, 2));
    }

    #[test]
    fn quadratic_form_examples() {
        let edge = HlfInstance::new(F2Matrix::from_rows(vec![bits("01"), bits("10")]));
        assert_eq!(quadratic_form(&edge, &bits("00")), 0);
        assert_eq!(quadratic_form(&edge, &bits("11")), 2);

        let loop1 = HlfInstance::new(F2Matrix::from_rows(vec![bits("1")]));
        assert_eq!(quadratic_form(&loop1, &bits("1")), 1);

        let dense = HlfInstance::new(F2Matrix::from_rows(vec![bits("11"), bits("11")]));
        assert_eq!(quadratic_form(&dense, &bits("11")), 0, "1 + 1 + 2 ≡ 0 (mod 4)");
    }

    #[test]
    fn quadratic_form_of_triangle_kernel_vector_is_two() {
        let inst = triangle(3);
        assert_eq!(inst.matrix().kernel_basis(), vec![bits("111")]);
        assert_eq!(quadratic_form(&inst, &bits("111")), 2);
    }

    #[test]
    fn solve_zero_instance() {
        let inst = HlfInstance::new(F2Matrix::zeros(2, 2));
        assert_eq!(solve_hlf(&inst).unwrap().z, bits("00"));
    }

    #[test]
    fn solve_grid_two() {
        let inst = gen_grid(2);
        assert_eq!(inst.matrix().kernel_basis(), vec![bits("0110"), bits("1001")]);
        let sol = solve_hlf(&inst).unwrap();
        assert_eq!(sol.z, bits("0000"));
        assert!(verify_hlf(&inst, &sol, DEFAULT_VERIFY_BUDGET));
    }

    #[test]
    fn solve_triangle_needs_a_nonzero_z() {
        let inst = triangle(3);
        let sol = solve_hlf(&inst).unwrap();
        assert_eq!(sol.z, bits("100"));
        assert!(verify_hlf(&inst, &sol, DEFAULT_VERIFY_BUDGET));
    }

    #[test]
    fn full_rank_instance_has_canonical_zero_solution() {
        let inst = HlfInstance::new(F2Matrix::identity(3));
        let sol = solve_hlf(&inst).unwrap();
        assert_eq!(sol.z, bits("000"));
        assert!(verify_hlf(&inst, &sol, DEFAULT_VERIFY_BUDGET));
    }

    #[test]
    fn verify_rejects_wrong_solution() {
        let inst = HlfInstance::new(F2Matrix::zeros(2, 2));
        assert!(verify_hlf(&inst, &HlfSolution { z: bits("00") }, DEFAULT_VERIFY_BUDGET));
        assert!(!verify_hlf(&inst, &HlfSolution { z: bits("10") }, DEFAULT_VERIFY_BUDGET));
    }

    #[test]
    fn verify_falls_back_to_sampling_past_the_budget() {
        let inst = HlfInstance::new(F2Matrix::zeros(5, 5));
        assert!(verify_hlf(&inst, &HlfSolution { z: bits("00000") }, 3));
        assert!(!verify_hlf(&inst, &HlfSolution { z: bits("10000") }, 3));
    }

    #[test]
    fn solver_handles_grids_and_random_instances() {
        for n in 1..=4 {
            let inst = gen_grid(n);
            let sol = solve_hlf(&inst).unwrap();
            assert!(verify_hlf(&inst, &sol, DEFAULT_VERIFY_BUDGET), "grid {n}");
        }
        for seed in 0..25 {
            let m = 1 + (seed as usize * 7) % 10;
            let inst = gen_random(m, seed);
            for e in inst.matrix().kernel_basis() {
                let q = quadratic_form(&inst, &e);
                assert!(q == 0 || q == 2, "kernel value {q} on {e}");
            }
            let sol = solve_hlf(&inst).unwrap();
            assert!(verify_hlf(&inst, &sol, DEFAULT_VERIFY_BUDGET), "random m={m} seed={seed}");
        }
    }

    #[test]
    fn instance_text_round_trips() {
        let inst = gen_grid(2);
        let text = inst.to_text();
        assert_eq!(text, "hlf 4\n0110001010\n");
        let parsed = parse_hlf_instance(&text).unwrap();
        assert_eq!(parsed, inst);
        assert_eq!(parsed.to_text(), text);

        for seed in 0..10 {
            let inst = gen_random(1 + seed as usize, seed);
            let text = inst.to_text();
            let bit_line = text.lines().nth(1).unwrap();
            assert_eq!(bit_line.len(), inst.m() * (inst.m() + 1) / 2);
            assert_eq!(parse_hlf_instance(&text).unwrap().to_text(), text);
        }
    }

    #[test]
    fn instance_parse_errors() {
        use HlfParseErrorKind::*;
        let cases: Vec<(&str, HlfParseError)> = vec![
            ("", HlfParseError { line: 1, kind: MissingHeader }),
            ("grid 4\n", HlfParseError { line: 1, kind: MissingHeader }),
            ("hlf x\n", HlfParseError { line: 1, kind: BadInteger("x".into()) }),
            ("hlf 0\n\n", HlfParseError { line: 1, kind: ZeroSize }),
            ("hlf 2\n01\n", HlfParseError { line: 2, kind: WrongBitCount { expected: 3, got: 2 } }),
            ("hlf 2\n01x\n", HlfParseError { line: 2, kind: BadBit('x') }),
            ("hlf 2\n", HlfParseError { line: 2, kind: MissingBits }),
            ("hlf 2\n011\nextra\n", HlfParseError { line: 3, kind: TrailingContent }),
            ("hlf 99999999999999999999\n", HlfParseError { line: 1, kind: BadInteger("99999999999999999999".into()) }),
        ];
        for (text, want) in cases {
            assert_eq!(parse_hlf_instance(text), Err(want), "for {text:?}");
        }
    }

    #[test]
    fn solution_parse_and_display() {
        let sol = parse_hlf_solution("0101\n").unwrap();
        assert_eq!(sol.z, bits("0101"));
        assert_eq!(sol.to_string(), "0101");
        assert_eq!(
            parse_hlf_solution("01a\n"),
            Err(HlfParseError { line: 1, kind: HlfParseErrorKind::BadBit('a') })
        );
        assert_eq!(
            parse_hlf_solution("# nothing\n"),
            Err(HlfParseError { line: 2, kind: HlfParseErrorKind::MissingBits })
        );
    }

    proptest! {
        #[test]
        fn quadratic_form_matches_double_sum(m in 1usize..7, seed in 0u64..500) {
            let inst = gen_random(m, seed);
            for xi in 0..1usize << m {
                let x = F2Vector::from_index(xi, m);
                let mut total = 0usize;
                for i in 0..m {
                    for j in 0..m {
                        if x.get(i) && x.get(j) && inst.matrix().get(i, j) {
                            total += 1;
                        }
                    }
                }
                prop_assert_eq!(quadratic_form(&inst, &x), (total % 4) as u8);
            }
        }

        #[test]
        fn form_is_linear_on_the_kernel(m in 1usize..9, seed in 0u64..500) {
            let inst = gen_random(m, seed);
            let basis = inst.matrix().kernel_basis();
            let k = basis.len();
            prop_assume!(k <= 6);
            for ci in 0..1usize << k {
                for cj in 0..1usize << k {
                    let x = kernel_element(&basis, |i| ci >> i & 1 == 1, m);
                    let y = kernel_element(&basis, |i| cj >> i & 1 == 1, m);
                    let mut xy = x.clone();
                    xy.xor_assign(&y);
                    let lhs = quadratic_form(&inst, &xy);
                    let rhs = (quadratic_form(&inst, &x) + quadratic_form(&inst, &y)) % 4;
                    prop_assert_eq!(lhs, rhs, "x={} y={}", x, y);
                }
            }
        }
    }
}
