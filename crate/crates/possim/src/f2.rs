//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are stored as `u64` words, least-significant bit first; bits past
//! `len` are kept zero so that equality, hashing and ordering can work on the
//! raw words. Row reduction, kernel extraction and solving all go through the
//! same Gaussian elimination kernel and produce canonical results: the kernel
//! basis is derived from the reduced row echelon form with free columns taken
//! in increasing order, and `solve` sets every free variable to zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

/// A vector over GF(2) with a fixed bit length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// Standard basis vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = F2Vector::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = F2Vector::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b);
        }
        v
    }

    /// Decode a basis-state index into a bitstring, bit 0 = most significant.
    ///
    /// This is the fixed convention used throughout: line 0 of a circuit is
    /// the most significant bit of a statevector index.
    pub fn from_index(index: usize, len: usize) -> Self {
        assert!(len < usize::BITS as usize, "index width too large");
        let mut v = F2Vector::zeros(len);
        for i in 0..len {
            v.set(i, (index >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    /// Inverse of [`F2Vector::from_index`]. Panics if `len` exceeds the index width.
    pub fn to_index(&self) -> usize {
        assert!(self.len < usize::BITS as usize, "vector too wide for an index");
        let mut idx = 0usize;
        for i in 0..self.len {
            idx = (idx << 1) | self.get(i) as usize;
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Inner product over GF(2): parity of the AND of the packed words.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

/// Lexicographic order on the bitstring, '0' before '1', shorter prefix first.
///
/// With the msb-first index convention of [`F2Vector::from_index`], this is
/// the numeric order of basis-state indices for equal-length vectors.
impl Ord for F2Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            // reverse_bits turns lexicographic-from-bit-0 into numeric order
            match a.reverse_bits().cmp(&b.reverse_bits()) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for F2Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bitstring character {0:?}")]
pub struct BitstringError(pub char);

impl FromStr for F2Vector {
    type Err = BitstringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(BitstringError(other)),
            }
        }
        Ok(F2Vector::from_bits(bits))
    }
}

/// Raised by [`F2Matrix::solve`] when the system has no solution.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("linear system over GF(2) is inconsistent")]
pub struct NoSolution;

/// A dense matrix over GF(2), stored row-wise as bit-packed vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<F2Vector>) -> Self {
        let cols = rows.first().map_or(0, F2Vector::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &F2Vector> {
        self.data.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Matrix-vector product over GF(2), one popcount parity per row.
    pub fn matvec(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.cols, "dimension mismatch in matvec");
        F2Vector::from_bits(self.data.iter().map(|row| row.dot(x)))
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (Vec<F2Vector>, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(pivot_row, src);
            let pivot = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != pivot_row && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            pivot_row += 1;
            if pivot_row == rows.len() {
                break;
            }
        }
        (rows, pivots)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis for the kernel {v : Av = 0}.
    ///
    /// One basis vector per free column, in increasing column order; the
    /// vector for free column `f` has bit `f` set and pivot bits read off the
    /// reduced row echelon form. Empty for an injective map.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        let mut next_pivot = 0;
        for col in 0..self.cols {
            if next_pivot < pivots.len() && pivots[next_pivot] == col {
                next_pivot += 1;
                continue;
            }
            let mut v = F2Vector::zeros(self.cols);
            v.set(col, true);
            for (r, &p) in pivots.iter().enumerate() {
                v.set(p, rref[r].get(col));
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * z = c`, setting free variables to zero.
    pub fn solve(&self, c: &F2Vector) -> Result<F2Vector, NoSolution> {
        assert_eq!(c.len(), self.rows, "rhs length must match row count");
        // eliminate on the rows of [self | c]
        let mut rows = self.data.clone();
        let mut rhs: Vec<bool> = c.iter_bits().collect();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(pivot_row, src);
            rhs.swap(pivot_row, src);
            let pivot = rows[pivot_row].clone();
            let pivot_rhs = rhs[pivot_row];
            for r in 0..rows.len() {
                if r != pivot_row && rows[r].get(col) {
                    rows[r].xor_assign(&pivot);
                    rhs[r] ^= pivot_rhs;
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
            if pivot_row == rows.len() {
                break;
            }
        }
        if (pivot_row..rows.len()).any(|r| rows[r].is_zero() && rhs[r]) {
            return Err(NoSolution);
        }
        let mut z = F2Vector::zeros(self.cols);
        for &(r, col) in &pivots {
            z.set(col, rhs[r]);
        }
        Ok(z)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}
