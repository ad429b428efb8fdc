//! Erasure decoding: the peeling decoder, ML incorrigibility, exhaustive
//! per-weight failure counts and a reproducible Monte-Carlo estimator.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::codes::{build_full_rank, generator_matrix, CodeFamily, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, XorBasis, DEFAULT_ROW_SPACE_CAP};

/// Largest block length accepted by [`exhaustive_pattern_analysis`].
pub const DEFAULT_PATTERN_MAX_N: usize = 24;
/// Trials per independently seeded Monte-Carlo block.
pub const BLOCK_TRIALS: u64 = 1 << 16;
/// Description of the Monte-Carlo generator, recorded in every report.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64(seed), stream = block index";

/// Erased positions of a received word of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    n: usize,
    erased: Vec<usize>,
}

impl ErasurePattern {
    /// Positions are 1-based; duplicates are merged.
    pub fn new(n: usize, erased: &[usize]) -> Result<Self> {
        let mut erased = erased.to_vec();
        for &i in &erased {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
        }
        erased.sort_unstable();
        erased.dedup();
        Ok(ErasurePattern { n, erased })
    }

    pub fn none(n: usize) -> Self {
        ErasurePattern { n, erased: Vec::new() }
    }

    /// Bit `i - 1` of `mask` erases position `i`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n < 64 && mask >> n != 0 {
            return Err(Error::IndexOutOfRange {
                index: 64 - mask.leading_zeros() as usize,
                len: n,
            });
        }
        let erased = (0..n.min(64)).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        Ok(ErasurePattern { n, erased })
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.erased.iter().fold(0u64, |m, &i| m | 1 << (i - 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[usize] {
        &self.erased
    }

    pub fn weight(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn to_bit_vector(&self) -> BitVector {
        BitVector::from_support(self.n, &self.erased).expect("validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    Recovered,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Positions left unresolved: the largest stopping set inside the
    /// erasure pattern. Empty iff recovered.
    pub residual: Vec<usize>,
    /// The decoded word, present iff recovered.
    pub resolved_word: Option<BitVector>,
}

impl DecodeOutcome {
    pub fn is_recovered(&self) -> bool {
        self.status == DecodeStatus::Recovered
    }
}

fn check_inputs(h: &ParityCheckMatrix, c: &BitVector, e: &ErasurePattern) -> Result<()> {
    let n = h.n();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    if e.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: e.n() });
    }
    if !h.matrix().syndrome(c)?.is_zero() {
        return Err(Error::NotACodeword);
    }
    if let Some(family) = h.family() {
        if !generator_matrix(family).null_space().syndrome(c)?.is_zero() {
            return Err(Error::NotACodeword);
        }
    }
    Ok(())
}

fn finish(c: &BitVector, word: Vec<bool>, erased: &[bool]) -> Result<DecodeOutcome> {
    let residual: Vec<usize> = (1..erased.len()).filter(|&i| erased[i]).collect();
    if !residual.is_empty() {
        return Ok(DecodeOutcome {
            status: DecodeStatus::Failed,
            residual,
            resolved_word: None,
        });
    }
    let support: Vec<usize> = (1..word.len()).filter(|&i| word[i]).collect();
    let resolved = BitVector::from_support(c.len(), &support)?;
    if resolved != *c {
        return Err(Error::Inconsistent("peeling resolved a different word".into()));
    }
    Ok(DecodeOutcome {
        status: DecodeStatus::Recovered,
        residual,
        resolved_word: Some(resolved),
    })
}

/// Iterative erasure decoding of codeword `c` observed through erasure
/// pattern `e`, using erasure-degree counters on the checks.
pub fn peel(h: &ParityCheckMatrix, c: &BitVector, e: &ErasurePattern) -> Result<DecodeOutcome> {
    check_inputs(h, c, e)?;
    let n = h.n();
    let rows: Vec<Vec<usize>> = h.matrix().rows().iter().map(BitVector::support).collect();
    let mut checks_of = vec![Vec::new(); n + 1];
    for (r, support) in rows.iter().enumerate() {
        for &j in support {
            checks_of[j].push(r);
        }
    }

    let mut erased = vec![false; n + 1];
    for &j in e.positions() {
        erased[j] = true;
    }
    let mut word: Vec<bool> = (0..=n).map(|j| j > 0 && !erased[j] && c.get(j).unwrap_or(false)).collect();
    // Erasure degree and XOR of the known bits of each check.
    let mut degree = vec![0usize; rows.len()];
    let mut parity = vec![false; rows.len()];
    for (r, support) in rows.iter().enumerate() {
        for &j in support {
            if erased[j] {
                degree[r] += 1;
            } else {
                parity[r] ^= word[j];
            }
        }
    }

    let mut queue: VecDeque<usize> = (0..rows.len()).filter(|&r| degree[r] == 1).collect();
    while let Some(r) = queue.pop_front() {
        if degree[r] != 1 {
            continue;
        }
        let j = *rows[r].iter().find(|&&j| erased[j]).expect("degree one");
        let bit = parity[r];
        erased[j] = false;
        word[j] = bit;
        for &s in &checks_of[j] {
            degree[s] -= 1;
            parity[s] ^= bit;
            if degree[s] == 1 {
                queue.push_back(s);
            }
        }
    }
    finish(c, word, &erased)
}

/// Peeling with a fixed check order: sweeps the rows in `order` (0-based, a
/// permutation of all rows) until a full sweep makes no progress.
pub fn peel_with_schedule(
    h: &ParityCheckMatrix,
    c: &BitVector,
    e: &ErasurePattern,
    order: &[usize],
) -> Result<DecodeOutcome> {
    check_inputs(h, c, e)?;
    let n = h.n();
    let rows = h.matrix().rows();
    let mut seen = vec![false; rows.len()];
    for &r in order {
        if r >= rows.len() || core::mem::replace(&mut seen[r], true) {
            return Err(Error::InvalidArgument(format!(
                "schedule is not a permutation of 0..{}",
                rows.len()
            )));
        }
    }
    if order.len() != rows.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule has {} entries for {} rows",
            order.len(),
            rows.len()
        )));
    }

    let supports: Vec<Vec<usize>> = rows.iter().map(BitVector::support).collect();
    let mut erased = vec![false; n + 1];
    for &j in e.positions() {
        erased[j] = true;
    }
    let mut word: Vec<bool> = (0..=n).map(|j| j > 0 && !erased[j] && c.get(j).unwrap_or(false)).collect();
    loop {
        let mut progress = false;
        for &r in order {
            let mut unknown = None;
            let mut count = 0;
            let mut parity = false;
            for &j in &supports[r] {
                if erased[j] {
                    count += 1;
                    unknown = Some(j);
                } else {
                    parity ^= word[j];
                }
            }
            if count == 1 {
                let j = unknown.expect("one erased");
                erased[j] = false;
                word[j] = parity;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    finish(c, word, &erased)
}

/// Residual of peeling on packed rows: the largest stopping set inside `e`.
pub fn peel_mask(rows: &[u64], mut e: u64) -> u64 {
    loop {
        let before = e;
        for &r in rows {
            let x = r & e;
            if x != 0 && x & (x - 1) == 0 {
                e &= !x;
            }
        }
        if e == before {
            return e;
        }
    }
}

fn erased_columns(family: CodeFamily, e: &ErasurePattern) -> Result<()> {
    if e.n() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            found: e.n(),
        });
    }
    Ok(())
}

/// Rank test: the erased columns of a full-rank parity-check matrix are
/// linearly dependent.
pub fn incorrigible_by_rank(family: CodeFamily, e: &ErasurePattern) -> Result<bool> {
    erased_columns(family, e)?;
    if e.is_empty() {
        return Ok(false);
    }
    let h = build_full_rank(family)?;
    Ok(h.matrix().restrict(e.positions())?.rank() < e.weight())
}

/// Codeword test: some nonzero codeword has its support inside `e`.
pub fn incorrigible_by_codewords(family: CodeFamily, e: &ErasurePattern) -> Result<bool> {
    erased_columns(family, e)?;
    let set = e.to_bit_vector();
    for c in generator_matrix(family).row_space_with_cap(DEFAULT_ROW_SPACE_CAP)? {
        if !c.is_zero() && c.is_subset_of(&set)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether even an optimal erasure decoder fails on `e`. Runs both the rank
/// test and the codeword test and reports an error if they disagree.
pub fn is_incorrigible(family: CodeFamily, e: &ErasurePattern) -> Result<bool> {
    let by_rank = incorrigible_by_rank(family, e)?;
    let by_codewords = incorrigible_by_codewords(family, e)?;
    if by_rank != by_codewords {
        return Err(Error::Inconsistent(format!(
            "rank test says {by_rank}, codeword test says {by_codewords} for {:?}",
            e.positions()
        )));
    }
    Ok(by_rank)
}

/// Packed incorrigibility tests for block lengths up to 64.
#[derive(Clone, Debug)]
pub struct MlOracle {
    n: usize,
    /// Column `j` of the full-rank parity-check matrix as a mask over rows.
    columns: Vec<u64>,
    codewords: Option<Vec<u64>>,
}

impl MlOracle {
    /// Rank test only.
    pub fn new(family: CodeFamily) -> Result<Self> {
        let n = family.n();
        if n > 64 {
            return Err(Error::CapExceeded {
                what: "packed ML oracle block length",
                requested: n as u64,
                cap: 64,
            });
        }
        let h = build_full_rank(family)?;
        let columns = h.matrix().transpose().row_masks().ok_or(Error::CapExceeded {
            what: "packed ML oracle redundancy",
            requested: h.matrix().num_rows() as u64,
            cap: 64,
        })?;
        Ok(MlOracle { n, columns, codewords: None })
    }

    /// Rank test plus the enumerated nonzero codewords for the codeword test.
    pub fn with_codewords(family: CodeFamily, cap: u64) -> Result<Self> {
        let mut oracle = Self::new(family)?;
        let words = generator_matrix(family)
            .row_space_with_cap(cap)?
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.as_u64().expect("n <= 64"))
            .collect();
        oracle.codewords = Some(words);
        Ok(oracle)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn by_rank(&self, e: u64) -> bool {
        let mut basis = XorBasis::new();
        let mut bits = e;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !basis.insert(self.columns[j]) {
                return true;
            }
        }
        false
    }

    /// `None` when built without codewords.
    pub fn by_codewords(&self, e: u64) -> Option<bool> {
        self.codewords
            .as_ref()
            .map(|ws| ws.iter().any(|&c| c & !e == 0))
    }

    /// Both tests when available; an error if they disagree.
    pub fn is_incorrigible(&self, e: u64) -> Result<bool> {
        let by_rank = self.by_rank(e);
        match self.by_codewords(e) {
            Some(by_codewords) if by_codewords != by_rank => Err(Error::Inconsistent(format!(
                "rank test says {by_rank}, codeword test says {by_codewords} for mask {e:#x}"
            ))),
            _ => Ok(by_rank),
        }
    }
}

/// Per-weight failure counts over erasure patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternAnalysis {
    pub n: usize,
    /// `fail_peel[w]`: weight-`w` patterns containing a nonempty stopping set.
    pub fail_peel: Vec<u64>,
    /// `fail_ml[w]`: weight-`w` incorrigible patterns.
    pub fail_ml: Vec<u64>,
}

impl PatternAnalysis {
    pub fn zeros(n: usize) -> Self {
        PatternAnalysis {
            n,
            fail_peel: vec![0; n + 1],
            fail_ml: vec![0; n + 1],
        }
    }

    pub fn merge(&mut self, other: &PatternAnalysis) {
        for (a, b) in self.fail_peel.iter_mut().zip(&other.fail_peel) {
            *a += b;
        }
        for (a, b) in self.fail_ml.iter_mut().zip(&other.fail_ml) {
            *a += b;
        }
    }

    /// Exact peeling and ML failure probabilities at erasure probability
    /// `epsilon`.
    pub fn exact_failure_rates(&self, epsilon: f64) -> (f64, f64) {
        let rate = |counts: &[u64]| {
            counts
                .iter()
                .enumerate()
                .map(|(w, &c)| c as f64 * powi(epsilon, w) * powi(1.0 - epsilon, self.n - w))
                .sum()
        };
        (rate(&self.fail_peel), rate(&self.fail_ml))
    }
}

fn powi(x: f64, e: usize) -> f64 {
    (0..e).fold(1.0, |acc, _| acc * x)
}

/// Exhaustive analysis over all `2^n` erasure patterns, partitionable into
/// disjoint ranges of pattern numbers.
#[derive(Clone, Debug)]
pub struct PatternAnalyzer {
    n: usize,
    rows: Vec<u64>,
    oracle: MlOracle,
}

impl PatternAnalyzer {
    pub fn new(h: &ParityCheckMatrix, family: CodeFamily) -> Result<Self> {
        Self::with_cap(h, family, DEFAULT_PATTERN_MAX_N)
    }

    pub fn with_cap(h: &ParityCheckMatrix, family: CodeFamily, max_n: usize) -> Result<Self> {
        let n = h.n();
        if n != family.n() {
            return Err(Error::DimensionMismatch { expected: family.n(), found: n });
        }
        if n > max_n || n >= 64 {
            return Err(Error::CapExceeded {
                what: "exhaustive pattern analysis block length",
                requested: n as u64,
                cap: max_n.min(63) as u64,
            });
        }
        let rows = h.matrix().row_masks().expect("n < 64");
        Ok(PatternAnalyzer {
            n,
            rows,
            oracle: MlOracle::new(family)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        1u64 << self.n
    }

    pub fn analyze_range(&self, range: Range<u64>) -> PatternAnalysis {
        let mut out = PatternAnalysis::zeros(self.n);
        for e in range.start..range.end.min(self.total()) {
            let w = e.count_ones() as usize;
            if peel_mask(&self.rows, e) != 0 {
                out.fail_peel[w] += 1;
            }
            if self.oracle.by_rank(e) {
                out.fail_ml[w] += 1;
            }
        }
        out
    }

    pub fn analyze_all(&self) -> PatternAnalysis {
        self.analyze_range(0..self.total())
    }
}

/// Peeling and ML failure counts per erasure weight over every pattern,
/// decoding the all-zero codeword.
pub fn exhaustive_pattern_analysis(h: &ParityCheckMatrix, family: CodeFamily) -> Result<PatternAnalysis> {
    Ok(PatternAnalyzer::new(h, family)?.analyze_all())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(epsilon: f64, trials: u64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {epsilon} is outside [0, 1]"
            )));
        }
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        Ok(ChannelConfig { epsilon, trials, seed })
    }
}

/// Trial and failure counts for one erasure weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WeightCounts {
    pub trials: u64,
    pub fail_peel: u64,
    pub fail_ml: u64,
}

/// Raw counts from some set of Monte-Carlo blocks; blocks merge by addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialCounts {
    pub trials: u64,
    pub fail_peel: u64,
    pub fail_ml: u64,
    pub per_weight: Vec<WeightCounts>,
}

impl TrialCounts {
    pub fn zeros(n: usize) -> Self {
        TrialCounts {
            trials: 0,
            fail_peel: 0,
            fail_ml: 0,
            per_weight: vec![WeightCounts::default(); n + 1],
        }
    }

    pub fn merge(&mut self, other: &TrialCounts) {
        self.trials += other.trials;
        self.fail_peel += other.fail_peel;
        self.fail_ml += other.fail_ml;
        for (a, b) in self.per_weight.iter_mut().zip(&other.per_weight) {
            a.trials += b.trials;
            a.fail_peel += b.fail_peel;
            a.fail_ml += b.fail_ml;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub rng: &'static str,
    pub seed: u64,
    pub epsilon: f64,
    pub trials: u64,
    pub block_trials: u64,
    pub n: usize,
    pub fail_peel: u64,
    /// Present when the ML oracle was available.
    pub fail_ml: Option<u64>,
    pub per_weight: Vec<WeightCounts>,
}

impl MonteCarloReport {
    pub fn fail_rate_peel(&self) -> f64 {
        self.fail_peel as f64 / self.trials as f64
    }

    pub fn fail_rate_ml(&self) -> Option<f64> {
        self.fail_ml.map(|f| f as f64 / self.trials as f64)
    }

    /// Binomial standard error of the peeling failure rate.
    pub fn stderr(&self) -> f64 {
        binomial_stderr(self.fail_rate_peel(), self.trials)
    }

    pub fn stderr_ml(&self) -> Option<f64> {
        self.fail_rate_ml().map(|p| binomial_stderr(p, self.trials))
    }
}

pub fn binomial_stderr(p: f64, trials: u64) -> f64 {
    sqrt_f64(p * (1.0 - p) / trials as f64)
}

fn sqrt_f64(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // Newton iteration from the exponent-halved estimate; exact to the last
    // bit after a handful of steps for positive finite input.
    let mut y = f64::from_bits((x.to_bits() >> 1) + (1023u64 << 51));
    for _ in 0..8 {
        y = 0.5 * (y + x / y);
    }
    y
}

/// Monte-Carlo simulation split into blocks of [`BLOCK_TRIALS`] trials.
///
/// Block `b` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so
/// any partition of the blocks among workers yields the same totals.
#[derive(Clone, Debug)]
pub struct MonteCarlo {
    h: ParityCheckMatrix,
    rows: Option<Vec<u64>>,
    oracle: Option<MlOracle>,
    cfg: ChannelConfig,
}

impl MonteCarlo {
    /// `family` enables the ML column of the report when `n <= 64`.
    pub fn new(h: &ParityCheckMatrix, family: Option<CodeFamily>, cfg: ChannelConfig) -> Result<Self> {
        let cfg = ChannelConfig::new(cfg.epsilon, cfg.trials, cfg.seed)?;
        if let Some(f) = family {
            if f.n() != h.n() {
                return Err(Error::DimensionMismatch { expected: f.n(), found: h.n() });
            }
        }
        let oracle = match family {
            Some(f) if f.n() <= 64 => MlOracle::new(f).ok(),
            _ => None,
        };
        Ok(MonteCarlo {
            rows: h.matrix().row_masks(),
            h: h.clone(),
            oracle,
            cfg,
        })
    }

    pub fn config(&self) -> ChannelConfig {
        self.cfg
    }

    pub fn num_blocks(&self) -> u64 {
        self.cfg.trials.div_ceil(BLOCK_TRIALS)
    }

    fn block_len(&self, block: u64) -> u64 {
        let start = block * BLOCK_TRIALS;
        BLOCK_TRIALS.min(self.cfg.trials.saturating_sub(start))
    }

    /// Runs block `block` (0-based).
    pub fn run_block(&self, block: u64) -> TrialCounts {
        let n = self.h.n();
        let mut counts = TrialCounts::zeros(n);
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(block);
        let zero = BitVector::zeros(n);
        for _ in 0..self.block_len(block) {
            let mut erased = Vec::new();
            let mut mask = 0u64;
            for j in 1..=n {
                if unit_f64(rng.next_u64()) < self.cfg.epsilon {
                    erased.push(j);
                    if j <= 64 {
                        mask |= 1 << (j - 1);
                    }
                }
            }
            let w = erased.len();
            let peel_failed = match &self.rows {
                Some(rows) => peel_mask(rows, mask) != 0,
                None => {
                    let e = ErasurePattern { n, erased };
                    !peel(&self.h, &zero, &e).expect("zero word").is_recovered()
                }
            };
            let ml_failed = self.oracle.as_ref().is_some_and(|o| o.by_rank(mask));
            counts.trials += 1;
            counts.per_weight[w].trials += 1;
            if peel_failed {
                counts.fail_peel += 1;
                counts.per_weight[w].fail_peel += 1;
            }
            if ml_failed {
                counts.fail_ml += 1;
                counts.per_weight[w].fail_ml += 1;
            }
        }
        counts
    }

    pub fn report(&self, counts: &TrialCounts) -> MonteCarloReport {
        MonteCarloReport {
            rng: RNG_NAME,
            seed: self.cfg.seed,
            epsilon: self.cfg.epsilon,
            trials: counts.trials,
            block_trials: BLOCK_TRIALS,
            n: self.h.n(),
            fail_peel: counts.fail_peel,
            fail_ml: self.oracle.as_ref().map(|_| counts.fail_ml),
            per_weight: counts.per_weight.clone(),
        }
    }

    pub fn run(&self) -> MonteCarloReport {
        let mut total = TrialCounts::zeros(self.h.n());
        for b in 0..self.num_blocks() {
            total.merge(&self.run_block(b));
        }
        self.report(&total)
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits.
fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential Monte-Carlo estimate of the failure rates of `h`.
pub fn monte_carlo(h: &ParityCheckMatrix, family: Option<CodeFamily>, cfg: ChannelConfig) -> Result<MonteCarloReport> {
    Ok(MonteCarlo::new(h, family, cfg)?.run())
}

/// Full-rank matrix of the erased columns, for callers outside the packed
/// range.
pub fn erased_submatrix(h: &BitMatrix, e: &ErasurePattern) -> Result<BitMatrix> {
    h.restrict(e.positions())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_full_rank_hamming, build_h2, build_h4, Family};
    use crate::stopping::is_stopping_set;

    fn cf(f: Family, m: u32) -> CodeFamily {
        CodeFamily::new(f, m).unwrap()
    }

    #[test]
    fn peel_examples() {
        let h = build_h2(3).unwrap();
        let fam = cf(Family::Hamming, 3);
        let words = generator_matrix(fam).row_space().unwrap();
        for c in &words {
            let out = peel(&h, c, &ErasurePattern::none(7)).unwrap();
            assert_eq!(out.resolved_word.as_ref(), Some(c));
            for a in 1..=7 {
                for b in a..=7 {
                    let out = peel(&h, c, &ErasurePattern::new(7, &[a, b]).unwrap()).unwrap();
                    assert!(out.is_recovered());
                    assert_eq!(out.resolved_word.as_ref(), Some(c));
                }
            }
        }
        for c in words.iter().filter(|c| c.weight() == 3) {
            let e = ErasurePattern::new(7, &c.support()).unwrap();
            let out = peel(&h, &words[0], &e).unwrap();
            assert_eq!(out.status, DecodeStatus::Failed);
            assert_eq!(out.residual, c.support());
            assert!(out.resolved_word.is_none());
        }
    }

    #[test]
    fn peel_rejects_non_codewords() {
        let h = build_h2(3).unwrap();
        let c = BitVector::from_support(7, &[1]).unwrap();
        assert_eq!(peel(&h, &c, &ErasurePattern::none(7)), Err(Error::NotACodeword));
        let short = BitVector::zeros(6);
        assert!(peel(&h, &short, &ErasurePattern::none(7)).is_err());
    }

    #[test]
    fn residual_is_stopping_set_and_schedules_agree() {
        let h = build_h4(3).unwrap();
        let rows = h.matrix().row_masks().unwrap();
        let zero = BitVector::zeros(8);
        let r = h.matrix().num_rows();
        let forward: Vec<usize> = (0..r).collect();
        let backward: Vec<usize> = (0..r).rev().collect();
        for mask in 0u64..256 {
            let e = ErasurePattern::from_mask(8, mask).unwrap();
            let a = peel(&h, &zero, &e).unwrap();
            assert!(is_stopping_set(&h, &a.residual).unwrap());
            let b = peel_with_schedule(&h, &zero, &e, &forward).unwrap();
            let c = peel_with_schedule(&h, &zero, &e, &backward).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
            let packed = ErasurePattern::from_mask(8, peel_mask(&rows, mask)).unwrap();
            assert_eq!(packed.positions(), &a.residual[..]);
        }
    }

    #[test]
    fn schedule_validation() {
        let h = build_h2(3).unwrap();
        let zero = BitVector::zeros(7);
        let e = ErasurePattern::none(7);
        assert!(peel_with_schedule(&h, &zero, &e, &[0, 1]).is_err());
        assert!(peel_with_schedule(&h, &zero, &e, &[0, 0, 1, 2, 3, 4, 5]).is_err());
    }

    #[test]
    fn incorrigible_examples() {
        let fam = cf(Family::Hamming, 3);
        assert!(!is_incorrigible(fam, &ErasurePattern::none(7)).unwrap());
        for a in 1..=7 {
            for b in a..=7 {
                assert!(!is_incorrigible(fam, &ErasurePattern::new(7, &[a, b]).unwrap()).unwrap());
            }
        }
        for c in generator_matrix(fam).row_space().unwrap() {
            if c.weight() == 3 {
                assert!(is_incorrigible(fam, &ErasurePattern::new(7, &c.support()).unwrap()).unwrap());
            }
        }
        let oracle = MlOracle::with_codewords(fam, 1 << 10).unwrap();
        for mask in 0u64..128 {
            let e = ErasurePattern::from_mask(7, mask).unwrap();
            assert_eq!(oracle.is_incorrigible(mask).unwrap(), is_incorrigible(fam, &e).unwrap());
        }
    }

    #[test]
    fn pattern_analysis_examples() {
        let fam = cf(Family::Hamming, 3);
        let a = exhaustive_pattern_analysis(&build_h2(3).unwrap(), fam).unwrap();
        assert_eq!(a.fail_peel[3], 7);
        assert_eq!(a.fail_peel, a.fail_ml);
        let f = exhaustive_pattern_analysis(&build_full_rank_hamming(3).unwrap(), fam).unwrap();
        assert_eq!((f.fail_peel[3], f.fail_ml[3]), (10, 7));
        let mut parts = PatternAnalysis::zeros(7);
        let analyzer = PatternAnalyzer::new(&build_h2(3).unwrap(), fam).unwrap();
        for lo in (0..128).step_by(50) {
            parts.merge(&analyzer.analyze_range(lo..lo + 50));
        }
        assert_eq!(parts, a);
    }

    #[test]
    fn monte_carlo_edges_and_determinism() {
        let h = build_h2(3).unwrap();
        let fam = Some(cf(Family::Hamming, 3));
        let r = monte_carlo(&h, fam, ChannelConfig::new(0.0, 1000, 7).unwrap()).unwrap();
        assert_eq!(r.fail_peel, 0);
        assert_eq!(r.stderr(), 0.0);
        let r = monte_carlo(&h, fam, ChannelConfig::new(1.0, 1000, 7).unwrap()).unwrap();
        assert_eq!(r.fail_peel, 1000);
        assert_eq!(r.fail_ml, Some(1000));
        let cfg = ChannelConfig::new(0.3, 200_000, 11).unwrap();
        let a = monte_carlo(&h, fam, cfg).unwrap();
        let b = monte_carlo(&h, fam, cfg).unwrap();
        assert_eq!(a, b);
        let sim = MonteCarlo::new(&h, fam, cfg).unwrap();
        let mut total = TrialCounts::zeros(7);
        for blk in (0..sim.num_blocks()).rev() {
            total.merge(&sim.run_block(blk));
        }
        assert_eq!(sim.report(&total), a);
        assert_eq!(a.trials, 200_000);
        assert!(ChannelConfig::new(1.5, 10, 0).is_err());
        assert!(ChannelConfig::new(0.5, 0, 0).is_err());
    }

    #[test]
    fn sqrt_matches_std() {
        for x in [1e-12, 0.25, 2.0, 1e6, 0.0021] {
            assert!((sqrt_f64(x) - x.sqrt()).abs() <= 1e-15 * x.sqrt().max(1.0));
        }
    }
}
