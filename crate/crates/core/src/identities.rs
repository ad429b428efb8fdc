//! Self-checks of the counting machinery: Gaussian-binomial identities, the
//! flat-count identities, the alternating Cauchy sum, the generator-count
//! recursions against the explicit sums, and completeness of the
//! generator partition.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::generators::{b_explicit, b_recursive, g_explicit, g_recursive};
use crate::geometry::counting::{
    binomial, cauchy_identity_check, count_flats_in_flat, count_flats_through_flat, gaussian_binomial, n2, pow,
};
use crate::geometry::GeometryKind;

/// Outcome of one family of identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: u64,
    /// Description of the first failing case.
    pub failure: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Checker {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker { name, cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn done(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name,
            cases: self.cases,
            failure: self.failure,
        }
    }
}

const KINDS: [GeometryKind; 2] = [GeometryKind::Pg, GeometryKind::Eg];

/// Runs every identity with sizes bounded by `max`:
///
/// * Gaussian binomials (`q = 2, 3`): boundary values, symmetry and
///   `[n m][m r] = [n r][n-r m-r]` for `n <= max`;
/// * `N_PG`, `N_EG` and `A` as Gaussian binomials for dimensions `<= max`;
/// * `N(l,l-j) N(l-j,k) = [l-k j] N(l,k)` for `l <= max`, both kinds;
/// * the alternating Cauchy sum for `m <= max`;
/// * recursion equals explicit sum for `B` and `G`, `u <= 20`,
///   `l <= min(max, 5)`, both kinds;
/// * `C(N(l,0),u) = Σ_i N(l,i) B(u,i)` for `1 <= u <= 3 max`, `l <= min(max, 5)`.
pub fn identity_suite(max: u32) -> Vec<IdentityCheck> {
    let max = max as i64;
    let mut out = Vec::new();

    let mut c = Checker::new("gaussian binomial boundary and symmetry");
    for q in [2, 3] {
        for n in 0..=max {
            c.check(gaussian_binomial(n, 0, q).is_one() && gaussian_binomial(n, n, q).is_one(), || {
                format!("[{n} 0] or [{n} {n}] != 1 for q={q}")
            });
            for m in 0..=n {
                c.check(gaussian_binomial(n, m, q) == gaussian_binomial(n, n - m, q), || {
                    format!("[{n} {m}] != [{n} {}] for q={q}", n - m)
                });
            }
        }
    }
    out.push(c.done());

    let mut c = Checker::new("gaussian binomial product rule");
    for q in [2, 3] {
        for n in 0..=max {
            for m in 0..=n {
                for r in 0..=m {
                    let lhs = gaussian_binomial(n, m, q) * gaussian_binomial(m, r, q);
                    let rhs = gaussian_binomial(n, r, q) * gaussian_binomial(n - r, m - r, q);
                    c.check(lhs == rhs, || format!("n={n} m={m} r={r} q={q}"));
                }
            }
        }
    }
    out.push(c.done());

    let mut c = Checker::new("flat counts as gaussian binomials");
    for mu2 in 1..=max {
        for mu1 in 0..mu2 {
            let pg = count_flats_in_flat(GeometryKind::Pg, mu2, mu1, 2).ok();
            c.check(pg == Some(gaussian_binomial(mu2 + 1, mu1 + 1, 2)), || {
                format!("N_PG({mu2},{mu1})")
            });
            let eg = count_flats_in_flat(GeometryKind::Eg, mu2, mu1, 2).ok();
            c.check(eg == Some(pow(2, (mu2 - mu1) as u64) * gaussian_binomial(mu2, mu1, 2)), || {
                format!("N_EG({mu2},{mu1})")
            });
            for m in mu2..=max {
                let a = count_flats_through_flat(mu2, mu1, m, 2).ok();
                c.check(a == Some(gaussian_binomial(m - mu1, mu2 - mu1, 2)), || {
                    format!("A({mu2},{mu1}) with m={m}")
                });
            }
        }
    }
    out.push(c.done());

    let mut c = Checker::new("flat count product rule");
    for kind in KINDS {
        for l in 0..=max {
            for j in 0..=l {
                for k in 0..=(l - j) {
                    let lhs = n2(kind, l, l - j) * n2(kind, l - j, k);
                    let rhs = gaussian_binomial(l - k, j, 2) * n2(kind, l, k);
                    c.check(lhs == rhs, || format!("{kind} l={l} j={j} k={k}"));
                }
            }
        }
    }
    out.push(c.done());

    let mut c = Checker::new("alternating cauchy sum");
    for m in 0..=max as u32 {
        c.check(cauchy_identity_check(m), || format!("m={m}"));
    }
    out.push(c.done());

    let max_l = max.min(5);
    let mut c = Checker::new("generator recursions match explicit sums");
    for kind in KINDS {
        for u in 1..=20 {
            for l in 0..=max_l {
                let b = b_explicit(kind, u, l);
                c.check(b.as_ref().ok() == Some(&b_recursive(kind, u, l)), || {
                    format!("B_{kind}({u},{l})")
                });
                let g = g_explicit(kind, u, l);
                c.check(g.as_ref().ok() == Some(&g_recursive(kind, u, l)), || {
                    format!("G_{kind}({u},{l})")
                });
            }
        }
    }
    out.push(c.done());

    let mut c = Checker::new("generator partition completeness");
    for kind in KINDS {
        for l in 0..=max_l {
            let points = n2(kind, l, 0);
            for u in 1..=3 * max.max(1) {
                let rhs: Option<BigUint> = (0..=l)
                    .map(|i| b_explicit(kind, u, i).ok().map(|b| n2(kind, l, i) * b))
                    .sum();
                c.check(rhs == Some(binomial(&points, u)), || format!("{kind} u={u} l={l}"));
            }
        }
    }
    out.push(c.done());

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let results = identity_suite(6);
        assert_eq!(results.len(), 7);
        for r in &results {
            assert!(r.passed(), "{}: {:?}", r.name, r.failure);
            assert!(r.cases > 0, "{}", r.name);
        }
    }
}
