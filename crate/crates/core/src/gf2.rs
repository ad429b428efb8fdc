//! Bit-packed vectors and matrices over GF(2).
//!
//! Coordinates are addressed 1-based: coordinate `i` of a vector lives in bit
//! `(i - 1) % 64` of word `(i - 1) / 64`. Rows of a [`BitMatrix`] may be
//! dependent or repeated.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of vectors [`BitMatrix::row_space`] will produce.
pub const DEFAULT_ROW_SPACE_CAP: u64 = 1 << 24;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    /// Builds a vector from its 1-based support.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true)?;
        }
        Ok(v)
    }

    /// Builds a vector of length `len <= 64` whose coordinate `i` is bit `i - 1`
    /// of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Result<Self> {
        if len > WORD {
            return Err(Error::DimensionMismatch {
                expected: WORD,
                found: len,
            });
        }
        if len < WORD && bits >> len != 0 {
            return Err(Error::IndexOutOfRange {
                index: (WORD - bits.leading_zeros() as usize),
                len,
            });
        }
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits;
        }
        Ok(v)
    }

    /// Returns the packed value when `len <= 64`.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
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

    fn locate(&self, i: usize) -> Result<(usize, u64)> {
        if i == 0 || i > self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        let k = i - 1;
        Ok((k / WORD, 1u64 << (k % WORD)))
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        let (w, bit) = self.locate(i)?;
        Ok(self.words[w] & bit != 0)
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<()> {
        let (w, bit) = self.locate(i)?;
        if value {
            self.words[w] |= bit;
        } else {
            self.words[w] &= !bit;
        }
        Ok(())
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// 1-based indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b + 1);
                w &= w - 1;
            }
        }
        out
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            })
        } else {
            Ok(())
        }
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        let mut v = self.clone();
        v.xor_assign(other)?;
        Ok(v)
    }

    pub fn and(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        Ok(BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        })
    }

    /// Weight of the coordinatewise product, `|supp(self) ∩ supp(other)|`.
    pub fn intersection_weight(&self, other: &BitVector) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        Ok(self.intersection_weight(other)? % 2 == 1)
    }

    /// True when `supp(self) ⊆ supp(other)`.
    pub fn is_subset_of(&self, other: &BitVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0))
    }

    pub fn complement(&self) -> BitVector {
        let mut v = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Lowest set coordinate (1-based).
    fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + w.trailing_zeros() as usize + 1)
    }
}

/// Orders vectors by their ascending support lists, compared
/// lexicographically; `{1,2,3} < {1,2,4} < {1,3,4}`.
pub fn cmp_by_support(a: &BitVector, b: &BitVector) -> Ordering {
    a.support().cmp(&b.support())
}

/// Orders vectors by weight, then by [`cmp_by_support`].
pub fn cmp_by_weight_then_support(a: &BitVector, b: &BitVector) -> Ordering {
    a.weight()
        .cmp(&b.weight())
        .then_with(|| cmp_by_support(a, b))
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            let bit = self.words[(i - 1) / WORD] >> ((i - 1) % WORD) & 1;
            f.write_str(if bit == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Builds a matrix from 1-based row supports.
    pub fn from_supports<S: AsRef<[usize]>>(cols: usize, supports: &[S]) -> Result<Self> {
        let rows = supports
            .iter()
            .map(|s| BitVector::from_support(cols, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (1..=n)
            .map(|i| BitVector::from_support(n, &[i]).expect("diagonal index in range"))
            .collect();
        BitMatrix { cols: n, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Result<bool> {
        self.rows
            .get(r)
            .ok_or(Error::IndexOutOfRange {
                index: r + 1,
                len: self.rows.len(),
            })?
            .get(c)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.cols];
        for r in &self.rows {
            for c in r.support() {
                w[c - 1] += 1;
            }
        }
        w
    }

    /// Rows packed into `u64` masks; `None` when there are more than 64 columns.
    pub fn row_masks(&self) -> Option<Vec<u64>> {
        if self.cols > WORD {
            return None;
        }
        Some(
            self.rows
                .iter()
                .map(|r| r.as_u64().expect("row fits in one word"))
                .collect(),
        )
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = vec![BitVector::zeros(self.rows.len()); self.cols];
        for (ri, r) in self.rows.iter().enumerate() {
            for c in r.support() {
                t[c - 1].set(ri + 1, true).expect("row index in range");
            }
        }
        BitMatrix {
            cols: self.rows.len(),
            rows: t,
        }
    }

    /// Keeps exactly the (1-based) columns in `columns`, in the given order;
    /// row order and row count are preserved.
    pub fn restrict(&self, columns: &[usize]) -> Result<BitMatrix> {
        for &c in columns {
            if c == 0 || c > self.cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    len: self.cols,
                });
            }
        }
        let k = columns.len();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = BitVector::zeros(k);
                for (j, &c) in columns.iter().enumerate() {
                    if r.get(c).expect("checked above") {
                        out.set(j + 1, true).expect("j < k");
                    }
                }
                out
            })
            .collect();
        Ok(BitMatrix { cols: k, rows })
    }

    /// A basis of the row space in reduced row-echelon form, ordered by pivot.
    pub fn row_basis(&self) -> Vec<BitVector> {
        let mut rows: Vec<BitVector> = self.rows.clone();
        let mut basis_len = 0;
        for col in 1..=self.cols {
            let Some(p) = (basis_len..rows.len()).find(|&r| rows[r].get(col).unwrap_or(false))
            else {
                continue;
            };
            rows.swap(basis_len, p);
            let pivot = rows[basis_len].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != basis_len && row.get(col).unwrap_or(false) {
                    row.xor_assign(&pivot).expect("equal lengths");
                }
            }
            basis_len += 1;
        }
        rows.truncate(basis_len);
        rows
    }

    pub fn rank(&self) -> usize {
        self.row_basis().len()
    }

    /// All `2^rank` vectors of the row space, the zero vector included.
    pub fn row_space(&self) -> Result<Vec<BitVector>> {
        self.row_space_with_cap(DEFAULT_ROW_SPACE_CAP)
    }

    pub fn row_space_with_cap(&self, cap: u64) -> Result<Vec<BitVector>> {
        let basis = self.row_basis();
        let k = basis.len();
        let size = if k >= 64 { u64::MAX } else { 1u64 << k };
        if size > cap {
            return Err(Error::CapExceeded {
                what: "row space size",
                requested: size,
                cap,
            });
        }
        // Gray-code walk: consecutive vectors differ by one basis row.
        let mut out = Vec::with_capacity(size as usize);
        let mut current = BitVector::zeros(self.cols);
        out.push(current.clone());
        for step in 1..size {
            let flip = step.trailing_zeros() as usize;
            current.xor_assign(&basis[flip]).expect("equal lengths");
            out.push(current.clone());
        }
        Ok(out)
    }

    /// A basis of `{x : M xᵀ = 0}`, one vector per non-pivot column.
    pub fn null_space(&self) -> BitMatrix {
        let basis = self.row_basis();
        let pivots: Vec<usize> = basis
            .iter()
            .map(|r| r.first_one().expect("basis rows are nonzero"))
            .collect();
        let mut out = Vec::new();
        for free in 1..=self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true).expect("in range");
            for (row, &p) in basis.iter().zip(&pivots) {
                if row.get(free).expect("in range") {
                    v.set(p, true).expect("in range");
                }
            }
            out.push(v);
        }
        BitMatrix {
            cols: self.cols,
            rows: out,
        }
    }

    /// `M vᵀ` as a vector indexed by rows.
    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector> {
        let mut s = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v)? {
                s.set(i + 1, true)?;
            }
        }
        Ok(s)
    }

    /// True when every row of `self` is orthogonal to every row of `other`.
    pub fn is_orthogonal_to(&self, other: &BitMatrix) -> Result<bool> {
        for a in &self.rows {
            for b in &other.rows {
                if a.dot(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Appends the rows of `other` below those of `self`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Matrix with the given rows (0-based) removed.
    pub fn without_row(&self, r: usize) -> BitMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, v)| v.clone())
            .collect();
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Rank of a set of at most 64-bit vectors, by insertion into an XOR basis.
pub fn rank_of_masks(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = XorBasis::new();
    vectors.into_iter().filter(|&v| basis.insert(v)).count()
}

/// An XOR basis of 64-bit vectors, indexed by leading bit.
#[derive(Clone, Debug)]
pub struct XorBasis {
    by_lead: [u64; 64],
    len: usize,
}

impl Default for XorBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl XorBasis {
    pub fn new() -> Self {
        XorBasis {
            by_lead: [0; 64],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if self.by_lead[lead] == 0 {
                break;
            }
            v ^= self.by_lead[lead];
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let lead = 63 - r.leading_zeros() as usize;
        self.by_lead[lead] = r;
        self.len += 1;
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = u64> + '_ {
        self.by_lead.iter().copied().filter(|&v| v != 0)
    }

    /// Every element of the span, zero included; requires `len() < 64`.
    pub fn span(&self) -> Vec<u64> {
        let basis: Vec<u64> = self.vectors().collect();
        let mut out = Vec::with_capacity(1 << basis.len());
        out.push(0u64);
        for b in basis {
            let n = out.len();
            for i in 0..n {
                out.push(out[i] ^ b);
            }
        }
        out
    }
}
