//! Thread-parallel drivers for the exhaustive enumerations and Monte-Carlo
//! simulation. Work is split into fixed ranges or blocks and merged by count
//! addition, so results do not depend on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;
use stopset_core::codes::{CodeFamily, ParityCheckMatrix};
use stopset_core::decode::{ChannelConfig, MonteCarlo, MonteCarloReport, PatternAnalysis, PatternAnalyzer, TrialCounts};
use stopset_core::stopping::{StoppingCounter, StoppingSetDistribution, DEFAULT_EXHAUSTIVE_MAX_N};

use crate::error::Result;

/// Environment variable consulted for the default thread count.
pub const THREADS_ENV: &str = "STOPSET_THREADS";

const CHUNK: u64 = 1 << 14;

/// A pool with `threads` workers; `0` lets rayon choose.
pub fn pool(threads: usize) -> Result<ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

fn chunks(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(CHUNK))
        .map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(total)))
        .collect()
}

fn add(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

pub fn exhaustive_ssd(h: &ParityCheckMatrix, threads: usize) -> Result<StoppingSetDistribution> {
    exhaustive_ssd_with_cap(h, threads, DEFAULT_EXHAUSTIVE_MAX_N)
}

pub fn exhaustive_ssd_with_cap(h: &ParityCheckMatrix, threads: usize, max_n: usize) -> Result<StoppingSetDistribution> {
    let counter = StoppingCounter::with_cap(h, max_n)?;
    let zero = vec![0u64; counter.n() + 1];
    let counts = pool(threads)?.install(|| {
        chunks(counter.total())
            .into_par_iter()
            .map(|(lo, hi)| counter.count_range(lo..hi))
            .reduce(|| zero.clone(), add)
    });
    Ok(StoppingSetDistribution::from_counts(&counts)?)
}

pub fn pattern_analysis(h: &ParityCheckMatrix, family: CodeFamily, threads: usize) -> Result<PatternAnalysis> {
    let analyzer = PatternAnalyzer::new(h, family)?;
    let n = analyzer.n();
    Ok(pool(threads)?.install(|| {
        chunks(analyzer.total())
            .into_par_iter()
            .map(|(lo, hi)| analyzer.analyze_range(lo..hi))
            .reduce(
                || PatternAnalysis::zeros(n),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            )
    }))
}

pub fn monte_carlo(
    h: &ParityCheckMatrix,
    family: Option<CodeFamily>,
    cfg: ChannelConfig,
    threads: usize,
) -> Result<MonteCarloReport> {
    let sim = MonteCarlo::new(h, family, cfg)?;
    let n = h.n();
    let total = pool(threads)?.install(|| {
        (0..sim.num_blocks())
            .into_par_iter()
            .map(|b| sim.run_block(b))
            .reduce(
                || TrialCounts::zeros(n),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            )
    });
    Ok(sim.report(&total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stopset_core::codes::{build_h2, build_h3, Family};
    use stopset_core::decode::exhaustive_pattern_analysis;
    use stopset_core::stopping::exhaustive_ssd as sequential_ssd;

    #[test]
    fn thread_count_does_not_change_results() {
        let h = build_h3(4).unwrap();
        let one = exhaustive_ssd(&h, 1).unwrap();
        assert_eq!(one, exhaustive_ssd(&h, 4).unwrap());
        assert_eq!(one, sequential_ssd(&h).unwrap());

        let h = build_h2(3).unwrap();
        let fam = CodeFamily::new(Family::Hamming, 3).unwrap();
        assert_eq!(pattern_analysis(&h, fam, 3).unwrap(), exhaustive_pattern_analysis(&h, fam).unwrap());

        let cfg = ChannelConfig::new(0.3, 300_000, 5).unwrap();
        let a = monte_carlo(&h, Some(fam), cfg, 1).unwrap();
        let b = monte_carlo(&h, Some(fam), cfg, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, stopset_core::decode::monte_carlo(&h, Some(fam), cfg).unwrap());
    }
}
