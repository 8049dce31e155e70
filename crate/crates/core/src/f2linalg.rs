//! Packed-bit linear algebra over GF(2).
//!
//! Matrices use the row-vector convention: the domain basis indexes rows, so
//! a map `V -> W` with `dim V = r`, `dim W = c` is an `r x c` matrix and a
//! vector `x` maps to `xM`. Elimination always runs on a copy.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Fixed-length bit vector. Padding bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        xor_words(&mut self.words, &other.words);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words, 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_one(words: &[u64], from_word: usize) -> Option<usize> {
    words[from_word..]
        .iter()
        .position(|&w| w != 0)
        .map(|k| (from_word + k) * WORD_BITS + words[from_word + k].trailing_zeros() as usize)
}

/// Dense row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: v.len(),
                });
            }
            m.row_words_mut(r).copy_from_slice(&v.words);
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for w in m.data.iter_mut() {
            *w = rng.gen();
        }
        m.clear_padding();
        m
    }

    fn clear_padding(&mut self) {
        let tail = self.cols % WORD_BITS;
        if tail == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << tail) - 1;
        for r in 0..self.rows {
            self.data[r * self.stride + self.stride - 1] &= mask;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    /// `xM` for a row vector `x` of length `rows`.
    pub fn left_mul(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: x.len(),
            });
        }
        let mut out = BitVec::zeros(self.cols);
        for r in x.iter_ones() {
            xor_words(&mut out.words, self.row_words(r));
        }
        Ok(out)
    }

    /// XOR row `src` into row `dst`, touching words from `from_word` on.
    fn xor_row(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        let lo_row = &mut head[lo * s..(lo + 1) * s];
        let hi_row = &mut tail[..s];
        if dst < src {
            xor_words(&mut lo_row[from_word..], &hi_row[from_word..]);
        } else {
            xor_words(&mut hi_row[from_word..], &lo_row[from_word..]);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// Rank by forward elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(pivot) = (rank..m.rows).find(|&r| m.data[r * m.stride + word] & mask != 0) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in rank + 1..m.rows {
                if m.data[r * m.stride + word] & mask != 0 {
                    m.xor_row(r, rank, word);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced echelon form of the row space, with the row operations
    /// recorded so that each echelon row is known as a combination of
    /// the original rows.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut t = BitMatrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(pivot) = (rank..m.rows).find(|&r| m.data[r * m.stride + word] & mask != 0) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            t.swap_rows(rank, pivot);
            for r in 0..m.rows {
                if r != rank && m.data[r * m.stride + word] & mask != 0 {
                    m.xor_row(r, rank, word);
                    t.xor_row(r, rank, 0);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Echelon {
            reduced: m,
            transform: t,
            pivots,
        }
    }

    /// Basis of the left null space `{x : xM = 0}`, in reduced echelon form
    /// (hence independent of the elimination path).
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let ech = self.echelon();
        let rank = ech.rank();
        let raw: Vec<BitVec> = (rank..self.rows).map(|r| ech.transform.row(r)).collect();
        if raw.is_empty() {
            return raw;
        }
        let k = BitMatrix::from_rows(self.rows, &raw).expect("kernel rows have matching length");
        let canon = k.echelon();
        (0..canon.rank()).map(|r| canon.reduced.row(r)).collect()
    }

    /// Some `x` with `xM = target`, or `None` if the target is not in the
    /// row space.
    pub fn solve_membership(&self, target: &BitVec) -> Result<Option<BitVec>> {
        if target.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: target.len(),
            });
        }
        Ok(self.echelon().solve(target))
    }
}

/// Output of [`BitMatrix::echelon`].
#[derive(Debug, Clone)]
pub struct Echelon {
    reduced: BitMatrix,
    transform: BitMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row `i` of the reduced matrix.
    pub fn reduced_row(&self, i: usize) -> BitVec {
        self.reduced.row(i)
    }

    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let mut rest = target.clone();
        let mut x = BitVec::zeros(self.transform.cols);
        for (i, &col) in self.pivots.iter().enumerate() {
            if rest.get(col) {
                xor_words(&mut rest.words, self.reduced.row_words(i));
                xor_words(&mut x.words, self.transform.row_words(i));
            }
        }
        rest.is_zero().then_some(x)
    }
}

/// Incrementally grown echelon basis of a subspace of `GF(2)^len`, keyed by
/// leading (lowest-index) bit. Each stored vector remembers which inserted
/// vectors it combines, so membership queries return coordinates.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    len: usize,
    inserted: usize,
    rows: BTreeMap<usize, (BitVec, BitVec)>,
}

impl IncrementalBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            inserted: 0,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &BitVec) -> (BitVec, Vec<usize>) {
        let mut rest = v.clone();
        let mut used = Vec::new();
        // rows are visited by increasing lead; reducing by one never touches
        // smaller leads
        for (&lead, (row, _)) in &self.rows {
            if rest.get(lead) {
                rest.xor_assign(row);
                used.push(lead);
            }
        }
        (rest, used)
    }

    /// Inserts `v`; returns `true` iff it was independent of the vectors so
    /// far. Dependent vectors still consume an insertion index.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len, "vector length");
        let idx = self.inserted;
        self.inserted += 1;
        let (rest, used) = self.reduce(v);
        let Some(lead) = rest.first_one() else {
            return false;
        };
        let mut combo = BitVec::zeros(0);
        combo.len = idx + 1;
        combo.words = vec![0; words_for(idx + 1)];
        combo.flip(idx);
        for l in used {
            let c = &self.rows[&l].1;
            for i in c.iter_ones() {
                combo.flip(i);
            }
        }
        self.rows.insert(lead, (rest, combo));
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coordinates of `v` over the inserted vectors (indexed by insertion
    /// order), if `v` is in the span.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let (rest, used) = self.reduce(v);
        if !rest.is_zero() {
            return None;
        }
        let mut x = BitVec::zeros(self.inserted);
        for l in used {
            for i in self.rows[&l].1.iter_ones() {
                x.flip(i);
            }
        }
        Some(x)
    }
}
