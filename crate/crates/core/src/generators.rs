//! Counts of u-generators `B(u,l)` and stopping u-generators `G(u,l)` of an
//! l-flat in EG(·,2) or PG(·,2).
//!
//! A u-set generates an l-flat `F` when its span is `F`; it is a stopping
//! generator when every one-point deletion still spans `F`. Both counts depend
//! only on the geometry kind, `u` and `l`.
//!
//! Two independent routes are provided: the triangular recursions
//! ([`b_recursive`], [`g_recursive`]) and the explicit alternating sums
//! ([`b_explicit`], [`g_explicit`]). The alternating sums are accumulated in
//! signed arbitrary precision and rejected if they ever come out negative.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::counting::{alpha, binomial, gaussian_binomial, n2, pow2};
use crate::geometry::GeometryKind;
use crate::Verification;

/// Number of points of an l-flat over GF(2).
fn flat_points(kind: GeometryKind, l: i64) -> BigUint {
    match kind {
        GeometryKind::Pg => pow2(l as u64 + 1) - 1u32,
        GeometryKind::Eg => pow2(l as u64),
    }
}

fn to_unsigned(v: BigInt, what: &str) -> Result<BigUint> {
    match v.sign() {
        Sign::Minus => Err(Error::Inconsistent(format!(
            "alternating sum for {what} is negative ({v})"
        ))),
        _ => Ok(v.magnitude().clone()),
    }
}

/// `B(u,l)` by solving `C(N(l,0), u) = Σ_{i=0}^{l} N(l,i) B(u,i)` upward in `l`.
pub fn b_recursive(kind: GeometryKind, u: i64, l: i64) -> BigUint {
    if u <= 0 || l < 0 {
        return BigUint::zero();
    }
    // column[i] = B(u, i)
    let mut column: Vec<BigUint> = Vec::with_capacity(l as usize + 1);
    for level in 0..=l {
        let total = binomial(&flat_points(kind, level), u);
        let lower: BigUint = column
            .iter()
            .enumerate()
            .map(|(i, b)| n2(kind, level, i as i64) * b)
            .sum();
        // N(level, level) = 1, so the remainder is B(u, level).
        column.push(total - lower);
    }
    column.pop().expect("l >= 0")
}

/// `B(u,l)` by the explicit alternating sum over `j`.
pub fn b_explicit(kind: GeometryKind, u: i64, l: i64) -> Result<BigUint> {
    if u <= 0 || l < 0 {
        return Ok(BigUint::zero());
    }
    let mut sum = BigInt::zero();
    for j in 0..=l {
        let (gauss, power, points) = match kind {
            GeometryKind::Pg => (
                gaussian_binomial(l + 1, j, 2),
                pow2((j * (j - 1) / 2) as u64),
                pow2((l - j + 1) as u64) - 1u32,
            ),
            GeometryKind::Eg => (
                gaussian_binomial(l, j, 2),
                pow2((j * (j + 1) / 2) as u64),
                pow2((l - j) as u64),
            ),
        };
        let term = BigInt::from(gauss * power * binomial(&points, u));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    to_unsigned(sum, &format!("B_{kind}({u},{l})"))
}

/// `G(u,l)` by isolating the `k = 0` term of
/// `B(u,l) = Σ_{k=0}^{l-1} α(l,k) G(u-k, l-k)` and recursing.
pub fn g_recursive(kind: GeometryKind, u: i64, l: i64) -> BigUint {
    let mut memo = BTreeMap::new();
    g_recursive_memo(kind, u, l, &mut memo)
}

fn g_recursive_memo(
    kind: GeometryKind,
    u: i64,
    l: i64,
    memo: &mut BTreeMap<(i64, i64), BigUint>,
) -> BigUint {
    if l <= 0 || u <= l + 1 {
        return BigUint::zero();
    }
    if let Some(v) = memo.get(&(u, l)) {
        return v.clone();
    }
    let mut lower = BigUint::zero();
    for k in 1..l {
        let a = alpha(kind, l, k).expect("1 <= k < l");
        lower += a * g_recursive_memo(kind, u - k, l - k, memo);
    }
    let value = b_recursive(kind, u, l) - lower;
    memo.insert((u, l), value.clone());
    value
}

/// `G(u,l)` by the explicit alternating sum `Σ_k (-1)^k α(l,k) B(u-k, l-k)`.
pub fn g_explicit(kind: GeometryKind, u: i64, l: i64) -> Result<BigUint> {
    if l <= 0 || u <= l + 1 {
        return Ok(BigUint::zero());
    }
    let mut sum = BigInt::zero();
    for k in 0..l {
        let term = BigInt::from(alpha(kind, l, k)? * b_explicit(kind, u - k, l - k)?);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    to_unsigned(sum, &format!("G_{kind}({u},{l})"))
}

/// `B(u,l)`, cross-checking the recursion when verification is on.
pub fn b_count(kind: GeometryKind, u: i64, l: i64, verify: Verification) -> Result<BigUint> {
    let explicit = b_explicit(kind, u, l)?;
    if verify.is_on() {
        let recursive = b_recursive(kind, u, l);
        if recursive != explicit {
            return Err(Error::Inconsistent(format!(
                "B_{kind}({u},{l}): recursion gives {recursive}, explicit sum gives {explicit}"
            )));
        }
    }
    Ok(explicit)
}

/// `G(u,l)`, cross-checking the recursion when verification is on.
pub fn g_count(kind: GeometryKind, u: i64, l: i64, verify: Verification) -> Result<BigUint> {
    let explicit = g_explicit(kind, u, l)?;
    if verify.is_on() {
        let recursive = g_recursive(kind, u, l);
        if recursive != explicit {
            return Err(Error::Inconsistent(format!(
                "G_{kind}({u},{l}): recursion gives {recursive}, explicit sum gives {explicit}"
            )));
        }
    }
    Ok(explicit)
}

/// Precomputed `B` and `G` for `1 <= u <= max_u`, `0 <= l <= max_l`.
///
/// Immutable once built, so it can be shared freely across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCountTable {
    kind: GeometryKind,
    max_u: usize,
    max_l: usize,
    b: Vec<Vec<BigUint>>,
    g: Vec<Vec<BigUint>>,
}

impl GeneratorCountTable {
    pub fn new(kind: GeometryKind, max_u: usize, max_l: usize, verify: Verification) -> Result<Self> {
        let mut b = Vec::with_capacity(max_u + 1);
        let mut g = Vec::with_capacity(max_u + 1);
        for u in 0..=max_u as i64 {
            let mut brow = Vec::with_capacity(max_l + 1);
            let mut grow = Vec::with_capacity(max_l + 1);
            for l in 0..=max_l as i64 {
                brow.push(b_count(kind, u, l, verify)?);
                grow.push(g_count(kind, u, l, verify)?);
            }
            b.push(brow);
            g.push(grow);
        }
        let table = GeneratorCountTable {
            kind,
            max_u,
            max_l,
            b,
            g,
        };
        if verify.is_on() {
            table.check_invariants()?;
        }
        Ok(table)
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn max_u(&self) -> usize {
        self.max_u
    }

    pub fn max_l(&self) -> usize {
        self.max_l
    }

    /// `B(u,l)`; zero outside the stored range's natural domain, `None` beyond it.
    pub fn b(&self, u: usize, l: usize) -> Option<&BigUint> {
        self.b.get(u)?.get(l)
    }

    pub fn g(&self, u: usize, l: usize) -> Option<&BigUint> {
        self.g.get(u)?.get(l)
    }

    fn check_invariants(&self) -> Result<()> {
        for u in 0..=self.max_u {
            for l in 0..=self.max_l {
                let (b, g) = (&self.b[u][l], &self.g[u][l]);
                if g > b || (u <= l && !b.is_zero()) || (u <= l + 1 && !g.is_zero()) {
                    return Err(Error::Inconsistent(format!(
                        "generator table invariant broken at u={u}, l={l}: B={b}, G={g}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;
    use GeometryKind::{Eg, Pg};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn pinned_b_values() {
        assert_eq!(b_recursive(Pg, 1, 0), big(1));
        assert_eq!(b_recursive(Eg, 1, 0), big(1));
        assert_eq!(b_recursive(Pg, 2, 0), big(0));
        assert_eq!(b_recursive(Pg, 3, 1), big(1));
        assert_eq!(b_recursive(Pg, 3, 2), big(28));
        assert_eq!(b_explicit(Pg, 4, 2).unwrap(), big(35));
        assert_eq!(b_explicit(Eg, 4, 2).unwrap(), big(1));
        for kind in [Pg, Eg] {
            for l in 0..6 {
                for u in -1..=l {
                    assert!(b_explicit(kind, u, l).unwrap().is_zero());
                    assert!(b_recursive(kind, u, l).is_zero());
                }
            }
        }
    }

    #[test]
    fn pinned_g_values() {
        for u in 0..10 {
            assert!(g_recursive(Pg, u, 0).is_zero());
            assert!(g_explicit(Eg, u, 0).unwrap().is_zero());
        }
        assert_eq!(g_recursive(Pg, 3, 1), big(1));
        assert_eq!(g_recursive(Pg, 4, 2), big(7));
        assert_eq!(g_explicit(Pg, 4, 2).unwrap(), big(7));
        assert_eq!(g_explicit(Eg, 4, 2).unwrap(), big(1));
        for u in 3..12 {
            assert_eq!(g_explicit(Pg, u, 1).unwrap(), b_explicit(Pg, u, 1).unwrap());
        }
    }

    #[test]
    fn recursion_matches_explicit() {
        for kind in [Pg, Eg] {
            for l in 0..=5 {
                for u in 0..=20 {
                    assert_eq!(b_recursive(kind, u, l), b_explicit(kind, u, l).unwrap());
                    assert_eq!(g_recursive(kind, u, l), g_explicit(kind, u, l).unwrap());
                }
            }
        }
    }

    #[test]
    fn b_completeness() {
        for kind in [Pg, Eg] {
            for l in 0..=4i64 {
                for u in 1..=12i64 {
                    let lhs = binomial(&flat_points(kind, l), u);
                    let rhs: BigUint = (0..=l)
                        .map(|i| n2(kind, l, i) * b_explicit(kind, u, i).unwrap())
                        .sum();
                    assert_eq!(lhs, rhs, "{kind:?} u={u} l={l}");
                }
            }
        }
    }

    // Brute force over all u-subsets of a concrete l-flat.
    fn brute(kind: GeometryKind, u: usize, l: u32) -> (u64, u64) {
        let geom = Geometry::new(kind, l.max(2) + 1).unwrap();
        let flat = geom.enumerate_flats(l).unwrap().remove(0);
        let pts = flat.points();
        let (mut b, mut g) = (0, 0);
        let n = pts.len();
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() as usize != u {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
            if geom.span_dimension(&s).unwrap() != l {
                continue;
            }
            b += 1;
            let stopping = (0..s.len()).all(|j| {
                let sj: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &p)| p)
                    .collect();
                !sj.is_empty() && geom.span_dimension(&sj).unwrap() == l
            });
            if stopping {
                g += 1;
            }
        }
        (b, g)
    }

    #[test]
    fn brute_force_matches_formulas() {
        for kind in [Pg, Eg] {
            for l in 0..=3u32 {
                for u in 1..=8usize {
                    let (b, g) = brute(kind, u, l);
                    assert_eq!(big(b), b_explicit(kind, u as i64, l as i64).unwrap(), "B {kind:?} u={u} l={l}");
                    assert_eq!(big(g), g_explicit(kind, u as i64, l as i64).unwrap(), "G {kind:?} u={u} l={l}");
                }
            }
        }
    }

    fn without(s: &[usize], drop: &[usize]) -> Vec<usize> {
        s.iter().copied().filter(|p| !drop.contains(p)).collect()
    }

    fn is_stopping_generator(geom: &Geometry, s: &[usize], dim: u32) -> bool {
        geom.span_dimension(s).unwrap() == dim
            && s.iter().all(|&p| {
                let rest = without(s, &[p]);
                !rest.is_empty() && geom.span_dimension(&rest).unwrap() == dim
            })
    }

    #[test]
    fn generator_partition() {
        for kind in [Pg, Eg] {
            for l in 1..=3u32 {
                let geom = Geometry::new(kind, l.max(2) + 1).unwrap();
                let flat = geom.enumerate_flats(l).unwrap().remove(0);
                let pts = flat.points();
                for mask in 0u64..(1u64 << pts.len()) {
                    let u = mask.count_ones();
                    if u < l + 2 {
                        continue;
                    }
                    let s: Vec<usize> = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
                    if geom.span_dimension(&s).unwrap() != l {
                        continue;
                    }
                    let j: Vec<usize> = s
                        .iter()
                        .copied()
                        .filter(|&p| geom.span_dimension(&without(&s, &[p])).unwrap() != l)
                        .collect();
                    if j.is_empty() {
                        assert!(is_stopping_generator(&geom, &s, l));
                        continue;
                    }
                    assert_eq!(geom.span_dimension(&j).unwrap() as usize, j.len() - 1, "{s:?}");
                    assert!(j.len() < l as usize, "{kind:?} {s:?} J={j:?}");
                    let core = without(&s, &j);
                    assert!(is_stopping_generator(&geom, &core, l - j.len() as u32), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn table_verified() {
        let t = GeneratorCountTable::new(Pg, 16, 4, Verification::On).unwrap();
        assert_eq!(t.b(4, 2), Some(&big(35)));
        assert_eq!(t.g(4, 2), Some(&big(7)));
        assert_eq!(t.g(17, 0), None);
    }
}
