//! Counting functions for flats of EG(m,q) and PG(m,q), Gaussian binomials
//! and the pair counts `α(l,k)`.
//!
//! Everything here is exact. Degenerate arguments follow the usual
//! conventions: empty products are 1, empty sums 0, and `C(n,k)` and
//! `[n k]_q` vanish for `k < 0` or `k > n`.

use alloc::format;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::GeometryKind;
use crate::error::{Error, Result};

pub(crate) fn pow(q: u32, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

pub(crate) fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        Err(Error::InvalidArgument(format!("field size q = {q} must be >= 2")))
    } else {
        Ok(())
    }
}

/// Ordinary binomial coefficient `C(n, k)`.
pub fn binomial(n: &BigUint, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let k = k as u64;
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    // Use the smaller of k and n - k.
    let nk = n - BigUint::from(k);
    let k = if nk < BigUint::from(k) {
        u64::try_from(&nk).expect("n - k < k fits in u64")
    } else {
        k
    };
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_u64(n: u64, k: i64) -> BigUint {
    binomial(&BigUint::from(n), k)
}

/// Gaussian binomial `[n m]_q`, the number of m-dimensional subspaces of an
/// n-dimensional space over GF(q). Zero when `m < 0`, `n < 0` or `m > n`.
pub fn gaussian_binomial(n: i64, m: i64, q: u32) -> BigUint {
    if n < 0 || m < 0 || m > n || q < 2 {
        return BigUint::zero();
    }
    let (n, m) = (n as u64, m as u64);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= pow(q, n - i) - 1u32;
        den *= pow(q, m - i) - 1u32;
    }
    num / den
}

/// Number of `mu1`-flats contained in a given `mu2`-flat, `N(mu2, mu1)`.
///
/// `N(l, l) = 1`. Fails when `mu1 > mu2` or `mu1 < 0`.
pub fn count_flats_in_flat(kind: GeometryKind, mu2: i64, mu1: i64, q: u32) -> Result<BigUint> {
    check_q(q)?;
    if mu1 < 0 || mu1 > mu2 {
        return Err(Error::InvalidArgument(format!(
            "flat dimensions must satisfy 0 <= mu1 <= mu2, got mu1 = {mu1}, mu2 = {mu2}"
        )));
    }
    let (mu2, mu1) = (mu2 as u64, mu1 as u64);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    match kind {
        GeometryKind::Eg => {
            num *= pow(q, mu2 - mu1);
            for i in 1..=mu1 {
                num *= pow(q, mu2 - i + 1) - 1u32;
                den *= pow(q, mu1 - i + 1) - 1u32;
            }
        }
        GeometryKind::Pg => {
            for i in 0..=mu1 {
                num *= pow(q, mu2 - i + 1) - 1u32;
                den *= pow(q, mu1 - i + 1) - 1u32;
            }
        }
    }
    Ok(num / den)
}

/// `N(l, i)` over GF(2), zero outside `0 <= i <= l`.
pub(crate) fn n2(kind: GeometryKind, l: i64, i: i64) -> BigUint {
    if i < 0 || i > l {
        BigUint::zero()
    } else {
        count_flats_in_flat(kind, l, i, 2).expect("dimensions checked")
    }
}

/// Number of `mu2`-flats containing a given `mu1`-flat in a geometry of
/// dimension `m`, `A(mu2, mu1)`. The same expression serves EG and PG.
pub fn count_flats_through_flat(mu2: i64, mu1: i64, m: i64, q: u32) -> Result<BigUint> {
    check_q(q)?;
    if mu1 < 0 || mu1 > mu2 || mu2 > m {
        return Err(Error::InvalidArgument(format!(
            "flat dimensions must satisfy 0 <= mu1 <= mu2 <= m, got mu1 = {mu1}, mu2 = {mu2}, m = {m}"
        )));
    }
    let (mu2, mu1, m) = (mu2 as u64, mu1 as u64, m as u64);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in (mu1 + 1)..=mu2 {
        num *= pow(q, m - i + 1) - 1u32;
        den *= pow(q, mu2 - i + 1) - 1u32;
    }
    Ok(num / den)
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `α(l, k)`: the number of pairs `(F, J)` with `F` an `(l-k)`-flat of a
/// fixed `l`-flat and `J` an independent k-set such that `⟨J ∪ F⟩` is the
/// whole `l`-flat (GF(2) geometries).
pub fn alpha(kind: GeometryKind, l: i64, k: i64) -> Result<BigUint> {
    if l < 0 || k < 0 || k > l {
        return Err(Error::InvalidArgument(format!(
            "alpha requires 0 <= k <= l, got l = {l}, k = {k}"
        )));
    }
    let (l, k) = (l as u64, k as u64);
    let mut prod = BigUint::one();
    for i in 1..=k {
        let inner = match kind {
            GeometryKind::Pg => pow2(l - i + 2) - 1u32,
            GeometryKind::Eg => pow2(l - i + 1) - 1u32,
        };
        prod *= pow2(l - i + 1) * inner;
    }
    let f = factorial(k);
    debug_assert!((&prod % &f).is_zero());
    Ok(prod / f)
}

/// `Σ_{i=0}^{m} [m i] 2^{i(i-1)/2} (-1)^i` over GF(2).
pub fn cauchy_alternating_sum(m: u32) -> BigInt {
    let mut sum = BigInt::zero();
    for i in 0..=m as i64 {
        let term = BigInt::from(gaussian_binomial(m as i64, i, 2) * pow2((i * (i - 1) / 2) as u64));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Whether the alternating Gaussian-binomial sum equals `δ_{m,0}`.
pub fn cauchy_identity_check(m: u32) -> bool {
    let expected = if m == 0 { BigInt::one() } else { BigInt::zero() };
    cauchy_alternating_sum(m) == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeometryKind::{Eg, Pg};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    // Count k-dimensional subspaces of F_2^n by brute force over all k-tuples
    // of vectors, counting independent ordered bases and dividing by |GL(k,2)|.
    fn brute_subspaces(n: u32, k: u32) -> u64 {
        let mut seen = std::collections::BTreeSet::new();
        fn rec(
            n: u32,
            k: u32,
            basis: &mut crate::gf2::XorBasis,
            seen: &mut std::collections::BTreeSet<std::vec::Vec<u64>>,
        ) {
            if basis.len() == k as usize {
                let mut s = basis.span();
                s.sort_unstable();
                seen.insert(s);
                return;
            }
            for v in 1..(1u64 << n) {
                let mut b = basis.clone();
                if b.insert(v) {
                    rec(n, k, &mut b, seen);
                }
            }
        }
        rec(n, k, &mut crate::gf2::XorBasis::new(), &mut seen);
        seen.len() as u64
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(4, 2, 2), big(brute_subspaces(4, 2)));
        assert_eq!(gaussian_binomial(4, 2, 2), big(35));
        assert_eq!(gaussian_binomial(5, 2, 2), gaussian_binomial(5, 3, 2));
        for n in 0..8 {
            assert_eq!(gaussian_binomial(n, 0, 3), big(1));
            assert_eq!(gaussian_binomial(n, n, 3), big(1));
        }
        assert_eq!(gaussian_binomial(3, 4, 2), big(0));
        assert_eq!(gaussian_binomial(3, -1, 2), big(0));
        // [3 1]_3 = (27 - 1) / 2
        assert_eq!(gaussian_binomial(3, 1, 3), big(13));
    }

    #[test]
    fn flat_counts() {
        assert_eq!(count_flats_in_flat(Pg, 2, 1, 2).unwrap(), big(7));
        assert_eq!(count_flats_in_flat(Eg, 3, 2, 2).unwrap(), big(14));
        assert_eq!(count_flats_in_flat(Eg, 4, 4, 2).unwrap(), big(1));
        assert_eq!(count_flats_in_flat(Pg, 3, 3, 5).unwrap(), big(1));
        assert!(count_flats_in_flat(Pg, 1, 2, 2).is_err());
        assert!(count_flats_in_flat(Pg, 2, 1, 1).is_err());
        // EG(2,3): 9 points, 12 lines.
        assert_eq!(count_flats_in_flat(Eg, 2, 1, 3).unwrap(), big(12));
        // PG(2,3): 13 points.
        assert_eq!(count_flats_in_flat(Pg, 2, 0, 3).unwrap(), big(13));
    }

    #[test]
    fn through_counts() {
        assert_eq!(count_flats_through_flat(1, 0, 2, 2).unwrap(), big(3));
        assert_eq!(count_flats_through_flat(4, 2, 4, 2).unwrap(), big(1));
        assert!(count_flats_through_flat(1, 2, 4, 2).is_err());
        assert!(count_flats_through_flat(5, 2, 4, 2).is_err());
        // A(mu, mu - 1) = (q^{m-mu+1} - 1)/(q - 1)
        for q in [2u32, 3, 4] {
            for m in 2..6i64 {
                for mu in 1..=m {
                    let expected = (pow(q, (m - mu + 1) as u64) - 1u32) / BigUint::from(q - 1);
                    assert_eq!(count_flats_through_flat(mu, mu - 1, m, q).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(Pg, 3, 0).unwrap(), big(1));
        assert_eq!(alpha(Pg, 2, 1).unwrap(), big(28));
        assert_eq!(alpha(Eg, 2, 1).unwrap(), big(12));
        assert!(alpha(Pg, 2, 3).is_err());
    }

    #[test]
    fn cauchy() {
        assert_eq!(cauchy_alternating_sum(0), BigInt::one());
        assert_eq!(cauchy_alternating_sum(1), BigInt::zero());
        for m in 0..=12 {
            assert!(cauchy_identity_check(m), "m = {m}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(7, 3), big(35));
        assert_eq!(binomial_u64(7, 8), big(0));
        assert_eq!(binomial_u64(7, -1), big(0));
        assert_eq!(binomial_u64(0, 0), big(1));
        assert_eq!(binomial_u64(64, 32), big(1_832_624_140_942_590_534));
    }

    #[test]
    fn gaussian_identities() {
        for n in 0..9i64 {
            for m in 0..=n {
                for r in 0..=m {
                    assert_eq!(
                        gaussian_binomial(n, m, 2) * gaussian_binomial(m, r, 2),
                        gaussian_binomial(n, r, 2) * gaussian_binomial(n - r, m - r, 2)
                    );
                }
            }
        }
        for mu2 in 0..8i64 {
            for mu1 in 0..=mu2 {
                assert_eq!(
                    count_flats_in_flat(Pg, mu2, mu1, 2).unwrap(),
                    gaussian_binomial(mu2 + 1, mu1 + 1, 2)
                );
                assert_eq!(
                    count_flats_in_flat(Eg, mu2, mu1, 2).unwrap(),
                    pow2((mu2 - mu1) as u64) * gaussian_binomial(mu2, mu1, 2)
                );
            }
        }
        for m in 0..8i64 {
            for mu2 in 0..=m {
                for mu1 in 0..=mu2 {
                    assert_eq!(
                        count_flats_through_flat(mu2, mu1, m, 2).unwrap(),
                        gaussian_binomial(m - mu1, mu2 - mu1, 2)
                    );
                }
            }
        }
        for kind in [Pg, Eg] {
            for l in 0..=6i64 {
                for j in 0..=l {
                    for k in 0..=(l - j) {
                        assert_eq!(
                            n2(kind, l, l - j) * n2(kind, l - j, k),
                            gaussian_binomial(l - k, j, 2) * n2(kind, l, k),
                            "{kind:?} l={l} j={j} k={k}"
                        );
                    }
                }
            }
        }
    }
}
