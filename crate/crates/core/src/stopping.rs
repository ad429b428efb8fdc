//! Stopping sets, stopping-set distributions (SSDs) and BEC-optimality.
//!
//! A stopping set of `H` is a column set `S` such that no row of `H`
//! restricted to `S` has weight exactly one. The empty set is a stopping set,
//! so `T[0] = 1` for every matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::codes::{build_h_star_with_cap, generator_matrix, CodeFamily, Family, ParityCheckMatrix};
use crate::error::{check_m, Error, Result};
use crate::generators::GeneratorCountTable;
use crate::geometry::counting::{binomial_u64, n2, pow};
use crate::geometry::GeometryKind;
use crate::gf2::{BitMatrix, BitVector, DEFAULT_ROW_SPACE_CAP};
use crate::Verification;

/// Default largest block length for exhaustive enumeration (2^n subsets).
pub const DEFAULT_EXHAUSTIVE_MAX_N: usize = 28;
/// Row-deletion witnesses only run up to this block length...
pub const ROW_MINIMALITY_MAX_N: usize = 16;
/// ...and this many rows.
pub const ROW_MINIMALITY_MAX_ROWS: usize = 64;

/// `T[0..=n]`: `T[i]` counts the stopping sets of size `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StoppingSetDistribution {
    t: Vec<BigUint>,
}

impl StoppingSetDistribution {
    /// Validates `T[0] = 1` and `T[i] <= C(n, i)`.
    pub fn new(t: Vec<BigUint>) -> Result<Self> {
        if t.first() != Some(&BigUint::one()) {
            return Err(Error::Inconsistent("T[0] must equal 1".into()));
        }
        let n = t.len() as u64 - 1;
        for (i, v) in t.iter().enumerate() {
            if *v > binomial_u64(n, i as i64) {
                return Err(Error::Inconsistent(format!(
                    "T[{i}] = {v} exceeds C({n},{i})"
                )));
            }
        }
        Ok(StoppingSetDistribution { t })
    }

    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.t.len() - 1
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.t
    }

    pub fn get(&self, i: usize) -> Option<&BigUint> {
        self.t.get(i)
    }

    /// Smallest nonempty stopping-set size, if any.
    pub fn stopping_distance(&self) -> Option<usize> {
        (1..self.t.len()).find(|&i| !self.t[i].is_zero())
    }

    /// First size at which the two distributions differ, with both values.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, BigUint, BigUint)> {
        let len = self.t.len().max(other.t.len());
        let zero = BigUint::zero();
        (0..len).find_map(|i| {
            let a = self.t.get(i).unwrap_or(&zero);
            let b = other.t.get(i).unwrap_or(&zero);
            (a != b).then(|| (i, a.clone(), b.clone()))
        })
    }

    /// Coefficients as decimal strings.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.t.iter().map(|v| v.to_str_radix(10)).collect()
    }
}

/// Renders the enumerator as `1 + 7x^4 + 7x^6 + x^7`.
impl fmt::Display for StoppingSetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.t.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{c}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_subset(n: usize, s: &[usize]) -> Result<()> {
    for &i in s {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    Ok(())
}

/// True iff no row of `H` restricted to `S` has weight exactly one.
pub fn is_stopping_set(h: &ParityCheckMatrix, s: &[usize]) -> Result<bool> {
    let n = h.n();
    check_subset(n, s)?;
    let v = BitVector::from_support(n, s)?;
    for r in h.matrix().rows() {
        if r.intersection_weight(&v)? == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stopping test on packed rows (block length <= 64).
#[inline]
pub fn is_stopping_mask(rows: &[u64], s: u64) -> bool {
    rows.iter().all(|&r| {
        let x = r & s;
        x == 0 || x & (x - 1) != 0
    })
}

/// Exhaustive per-size stopping-set counter over packed subsets.
///
/// Subsets are identified with integers in `0..2^n` (bit `i - 1` set iff
/// column `i` is in the set). Counting over disjoint ranges and adding the
/// results gives the same totals as one pass over everything.
#[derive(Clone, Debug)]
pub struct StoppingCounter {
    n: usize,
    rows: Vec<u64>,
}

impl StoppingCounter {
    pub fn new(h: &ParityCheckMatrix) -> Result<Self> {
        Self::with_cap(h, DEFAULT_EXHAUSTIVE_MAX_N)
    }

    pub fn with_cap(h: &ParityCheckMatrix, max_n: usize) -> Result<Self> {
        Self::from_matrix(h.matrix(), max_n)
    }

    pub fn from_matrix(m: &BitMatrix, max_n: usize) -> Result<Self> {
        let n = m.num_cols();
        if n > max_n || n >= 64 {
            return Err(Error::CapExceeded {
                what: "exhaustive enumeration block length",
                requested: n as u64,
                cap: max_n.min(63) as u64,
            });
        }
        let mut rows = m.row_masks().expect("n < 64");
        rows.sort_unstable();
        rows.dedup();
        rows.retain(|&r| r != 0);
        // Sparse rows first: they reject non-stopping sets soonest.
        rows.sort_by_key(|r| r.count_ones());
        Ok(StoppingCounter { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of subsets, `2^n`.
    pub fn total(&self) -> u64 {
        1u64 << self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Per-size stopping-set counts over the subsets numbered in `range`.
    pub fn count_range(&self, range: Range<u64>) -> Vec<u64> {
        let mut counts = vec![0u64; self.n + 1];
        let end = range.end.min(self.total());
        for s in range.start..end {
            if is_stopping_mask(&self.rows, s) {
                counts[s.count_ones() as usize] += 1;
            }
        }
        counts
    }

    pub fn count_all(&self) -> Vec<u64> {
        self.count_range(0..self.total())
    }
}

pub fn exhaustive_ssd(h: &ParityCheckMatrix) -> Result<StoppingSetDistribution> {
    exhaustive_ssd_with_cap(h, DEFAULT_EXHAUSTIVE_MAX_N)
}

pub fn exhaustive_ssd_with_cap(h: &ParityCheckMatrix, max_n: usize) -> Result<StoppingSetDistribution> {
    let counter = StoppingCounter::with_cap(h, max_n)?;
    StoppingSetDistribution::from_counts(&counter.count_all())
}

fn exhaustive_matrix_ssd(m: &BitMatrix) -> Result<StoppingSetDistribution> {
    let counter = StoppingCounter::from_matrix(m, DEFAULT_EXHAUSTIVE_MAX_N)?;
    StoppingSetDistribution::from_counts(&counter.count_all())
}

/// Next integer with the same popcount (Gosper's hack).
fn next_same_weight(x: u64) -> Option<u64> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// Smallest size of a nonempty stopping set, searching sizes in increasing
/// order. Requires `n < 64`.
pub fn stopping_distance(h: &ParityCheckMatrix) -> Result<usize> {
    let counter = StoppingCounter::from_matrix(h.matrix(), 63)?;
    let n = counter.n();
    for size in 1..=n {
        let mut s = (1u64 << size) - 1;
        let limit = 1u64 << n;
        while s < limit {
            if is_stopping_mask(counter.rows(), s) {
                return Ok(size);
            }
            match next_same_weight(s) {
                Some(next) => s = next,
                None => break,
            }
        }
    }
    Err(Error::Inconsistent("no nonempty stopping set".into()))
}

/// Counts the stopping sets of one fixed size by enumerating only that size.
pub fn count_stopping_sets_of_size(h: &ParityCheckMatrix, size: usize) -> Result<u64> {
    let counter = StoppingCounter::from_matrix(h.matrix(), 63)?;
    let n = counter.n();
    if size > n {
        return Ok(0);
    }
    if size == 0 {
        return Ok(1);
    }
    let mut count = 0;
    let mut s = (1u64 << size) - 1;
    while s < 1u64 << n {
        if is_stopping_mask(counter.rows(), s) {
            count += 1;
        }
        match next_same_weight(s) {
            Some(next) => s = next,
            None => break,
        }
    }
    Ok(count)
}

fn zero_distribution(n: usize) -> Vec<BigUint> {
    let mut t = vec![BigUint::zero(); n + 1];
    t[0] = BigUint::one();
    t
}

/// Closed-form SSD of 𝒮(m) with the line-incidence matrix of PG(m-1,2):
/// `T[2^m - 2^{μ+1}]` counts the complements of `μ`-flats.
pub fn ssd_simplex(m: u32) -> Result<StoppingSetDistribution> {
    check_m(m)?;
    let n = (1usize << m) - 1;
    let mut t = zero_distribution(n);
    t[n] = BigUint::one();
    for mu in 0..=(m - 2) {
        t[n + 1 - (1usize << (mu + 1))] = n2(GeometryKind::Pg, m as i64 - 1, mu as i64);
    }
    StoppingSetDistribution::new(t)
}

/// Closed-form SSD of RM(m,1) with the plane-incidence matrix of EG(m,2):
/// `T[2^m - 2^μ]` counts the complements of `μ`-flats.
pub fn ssd_rm1(m: u32) -> Result<StoppingSetDistribution> {
    check_m(m)?;
    let n = 1usize << m;
    let mut t = zero_distribution(n);
    t[n] = BigUint::one();
    for mu in 0..m {
        t[n - (1usize << mu)] = n2(GeometryKind::Eg, m as i64, mu as i64);
    }
    StoppingSetDistribution::new(t)
}

fn floor_log2(u: usize) -> u32 {
    usize::BITS - 1 - u.leading_zeros()
}

fn ceil_log2(u: usize) -> u32 {
    if u <= 1 {
        0
    } else {
        floor_log2(u - 1) + 1
    }
}

/// Shared body of the Hamming and extended Hamming distributions:
/// `T[u] = Σ_l N(dim, l) G(u, l)` for `first <= u <= last`, `C(n, u)` above.
struct GeneratorSum {
    kind: GeometryKind,
    n: usize,
    /// Dimension of the whole geometry.
    dim: u32,
    /// Smallest nonzero size.
    first: usize,
    /// Largest size given by the generator sum; larger sizes are all stopping.
    last: usize,
}

impl GeneratorSum {
    fn lower_bound(&self, u: usize) -> u32 {
        match self.kind {
            GeometryKind::Pg => floor_log2(u),
            GeometryKind::Eg => ceil_log2(u),
        }
    }

    fn term(&self, table: &GeneratorCountTable, u: usize, l: u32) -> BigUint {
        n2(self.kind, self.dim as i64, l as i64) * table.g(u, l as usize).expect("in table")
    }

    fn full_sum(&self, table: &GeneratorCountTable, u: usize) -> BigUint {
        (0..=self.dim).map(|l| self.term(table, u, l)).sum()
    }

    fn distribution(&self, verify: Verification) -> Result<StoppingSetDistribution> {
        let max_u = if verify.is_on() { self.n } else { self.last };
        let table = GeneratorCountTable::new(self.kind, max_u, self.dim as usize, verify)?;
        let mut t = zero_distribution(self.n);
        for (u, slot) in t.iter_mut().enumerate().skip(1) {
            *slot = if u < self.first {
                BigUint::zero()
            } else if u <= self.last {
                self.full_sum(&table, u)
            } else {
                binomial_u64(self.n as u64, u as i64)
            };
        }
        if verify.is_on() {
            self.verify(&table, &t)?;
        }
        StoppingSetDistribution::new(t)
    }

    /// The general sum must reproduce every coefficient (including the zeros
    /// and the binomial tail), and the logarithmic summation bounds must not
    /// drop any nonzero term.
    fn verify(&self, table: &GeneratorCountTable, t: &[BigUint]) -> Result<()> {
        for (u, expected) in t.iter().enumerate().skip(1) {
            let full = self.full_sum(table, u);
            if full != *expected {
                return Err(Error::Inconsistent(format!(
                    "{} generator sum at u={u} is {full}, expected {expected}",
                    self.kind
                )));
            }
            let lo = self.lower_bound(u);
            let hi = (u as i64 - 2).min(self.dim as i64);
            let bounded: BigUint = if hi < lo as i64 {
                BigUint::zero()
            } else {
                (lo..=hi as u32).map(|l| self.term(table, u, l)).sum()
            };
            if bounded != full {
                return Err(Error::Inconsistent(format!(
                    "{} bounded sum at u={u} is {bounded}, full sum {full}",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form SSD of ℋ(m) with `H2` (complements of hyperplanes of PG(m-1,2)).
pub fn ssd_hamming(m: u32, verify: Verification) -> Result<StoppingSetDistribution> {
    check_m(m)?;
    GeneratorSum {
        kind: GeometryKind::Pg,
        n: (1usize << m) - 1,
        dim: m - 1,
        first: 3,
        last: 1usize << (m - 1),
    }
    .distribution(verify)
}

/// Closed-form SSD of the extended Hamming code with `H4` (hyperplanes of
/// EG(m,2)).
pub fn ssd_exthamming(m: u32, verify: Verification) -> Result<StoppingSetDistribution> {
    check_m(m)?;
    GeneratorSum {
        kind: GeometryKind::Eg,
        n: 1usize << m,
        dim: m,
        first: 4,
        last: (1usize << (m - 1)) + 1,
    }
    .distribution(verify)
}

/// Closed-form SSD for a family's incidence construction.
pub fn ssd_formula(family: CodeFamily, verify: Verification) -> Result<StoppingSetDistribution> {
    match family.family() {
        Family::Simplex => ssd_simplex(family.m()),
        Family::Hamming => ssd_hamming(family.m(), verify),
        Family::Rm1 => ssd_rm1(family.m()),
        Family::ExtHamming => ssd_exthamming(family.m(), verify),
    }
}

/// Number of size-3 stopping sets of the full-rank Hamming matrix,
/// `(5^m - 3^{m+1} + 2^{m+1}) / 6`.
pub fn t3_fullrank_hamming(m: u32) -> Result<BigUint> {
    check_m(m)?;
    let v = BigInt::from(pow(5, m as u64)) - BigInt::from(pow(3, m as u64 + 1))
        + BigInt::from(pow(2, m as u64 + 1));
    let six = BigInt::from(6);
    if !(&v % &six).is_zero() {
        return Err(Error::Inconsistent(format!("{v} is not divisible by 6")));
    }
    Ok((v / six).magnitude().clone())
}

/// Number of weight-3 codewords of ℋ(m), `(2^m - 1)(2^{m-1} - 1) / 3`.
pub fn a3_hamming(m: u32) -> Result<BigUint> {
    check_m(m)?;
    Ok((pow(2, m as u64) - 1u32) * (pow(2, m as u64 - 1) - 1u32) / BigUint::from(3u32))
}

/// Whether `S` is the union of the supports of the codewords it contains.
pub fn support_closure_holds(family: CodeFamily, s: &[usize]) -> Result<bool> {
    support_closure_holds_with_cap(family, s, DEFAULT_ROW_SPACE_CAP)
}

pub fn support_closure_holds_with_cap(family: CodeFamily, s: &[usize], cap: u64) -> Result<bool> {
    let n = family.n();
    check_subset(n, s)?;
    let set = BitVector::from_support(n, s)?;
    let mut union = BitVector::zeros(n);
    for c in generator_matrix(family).row_space_with_cap(cap)? {
        if c.is_subset_of(&set)? {
            for w in c.support() {
                union.set(w, true)?;
            }
        }
    }
    Ok(union == set)
}

/// Outcome of comparing a matrix against the all-dual-codewords matrix `H*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BecOptimalityReport {
    pub family: CodeFamily,
    pub ssd: StoppingSetDistribution,
    pub ssd_star: StoppingSetDistribution,
    /// `equal_by_size[i]` is `T_i(H) == T_i(H*)`.
    pub equal_by_size: Vec<bool>,
    /// Minimum-weight dual codewords that are not rows of `H`.
    pub missing_minimum_codewords: Vec<BitVector>,
    /// For each row `r`, whether deleting it changes the SSD; `None` when
    /// the matrix is too large for the check.
    pub row_deletion_changes_ssd: Option<Vec<bool>>,
}

impl BecOptimalityReport {
    pub fn ssds_equal(&self) -> bool {
        self.equal_by_size.iter().all(|&e| e)
    }

    pub fn necessity_holds(&self) -> bool {
        self.missing_minimum_codewords.is_empty()
    }

    /// Whether every single-row deletion changes the SSD, if checked.
    pub fn rows_minimal(&self) -> Option<bool> {
        self.row_deletion_changes_ssd
            .as_ref()
            .map(|v| v.iter().all(|&c| c))
    }

    pub fn first_mismatch(&self) -> Option<(usize, BigUint, BigUint)> {
        self.ssd.first_mismatch(&self.ssd_star)
    }

    /// Equal distributions and every minimum dual codeword present as a row.
    pub fn passes(&self) -> bool {
        self.ssds_equal() && self.necessity_holds()
    }
}

/// Compares `H` with `H*` for `family`: exhaustive SSDs of both, the
/// minimum-dual-codeword row condition, and (for small matrices) whether any
/// row could be deleted without changing the SSD.
pub fn verify_bec_optimal(h: &ParityCheckMatrix, family: CodeFamily) -> Result<BecOptimalityReport> {
    if h.n() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            found: h.n(),
        });
    }
    let ssd = exhaustive_ssd(h)?;
    let star = build_h_star_with_cap(family, DEFAULT_ROW_SPACE_CAP)?;
    let ssd_star = exhaustive_ssd(&star)?;
    let equal_by_size = ssd
        .coefficients()
        .iter()
        .zip(ssd_star.coefficients())
        .map(|(a, b)| a == b)
        .collect();

    let star_rows = star.matrix().rows();
    let min_weight = star_rows.iter().map(BitVector::weight).min().unwrap_or(0);
    let mut present: Vec<&BitVector> = h.matrix().rows().iter().collect();
    present.sort_by(|a, b| a.words().cmp(b.words()));
    let missing_minimum_codewords = star_rows
        .iter()
        .filter(|r| r.weight() == min_weight)
        .filter(|r| present.binary_search_by(|p| p.words().cmp(r.words())).is_err())
        .cloned()
        .collect();

    let rows = h.matrix().num_rows();
    let row_deletion_changes_ssd = if h.n() <= ROW_MINIMALITY_MAX_N && rows <= ROW_MINIMALITY_MAX_ROWS {
        let mut changes = Vec::with_capacity(rows);
        for r in 0..rows {
            changes.push(exhaustive_matrix_ssd(&h.matrix().without_row(r))? != ssd);
        }
        Some(changes)
    } else {
        None
    };

    Ok(BecOptimalityReport {
        family,
        ssd,
        ssd_star,
        equal_by_size,
        missing_minimum_codewords,
        row_deletion_changes_ssd,
    })
}

/// `T[u]` as `u64`, for tests and reports on small codes.
pub fn coefficient_u64(ssd: &StoppingSetDistribution, u: usize) -> Option<u64> {
    ssd.get(u)?.to_u64()
}
