//! Parity-check and generator matrices for the Simplex code 𝒮(m), the
//! Hamming code ℋ(m), the first-order Reed-Muller code RM(m,1) and the
//! extended Hamming code.
//!
//! | family       | geometry  | `H` rows                                  |
//! |--------------|-----------|-------------------------------------------|
//! | Simplex      | PG(m-1,2) | `H1`: incidence vectors of lines          |
//! | Hamming      | PG(m-1,2) | `H2`: complements of hyperplanes          |
//! | RM(m,1)      | EG(m,2)   | `H3`: incidence vectors of planes         |
//! | ext. Hamming | EG(m,2)   | `H4`: incidence vectors of hyperplanes    |
//!
//! Rows follow the flat enumeration order of [`Geometry::enumerate_flats`].

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{check_m, Error, Result};
use crate::geometry::{Geometry, GeometryKind};
use crate::gf2::{cmp_by_weight_then_support, BitMatrix, BitVector, DEFAULT_ROW_SPACE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Simplex,
    Hamming,
    Rm1,
    ExtHamming,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Simplex,
        Family::Hamming,
        Family::Rm1,
        Family::ExtHamming,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Simplex => "simplex",
            Family::Hamming => "hamming",
            Family::Rm1 => "rm1",
            Family::ExtHamming => "exthamming",
        }
    }

    pub fn geometry_kind(self) -> GeometryKind {
        match self {
            Family::Simplex | Family::Hamming => GeometryKind::Pg,
            Family::Rm1 | Family::ExtHamming => GeometryKind::Eg,
        }
    }

    /// The incidence construction whose rows are the minimum dual codewords.
    pub fn optimal_construction(self) -> Construction {
        match self {
            Family::Simplex => Construction::H1,
            Family::Hamming => Construction::H2,
            Family::Rm1 => Construction::H3,
            Family::ExtHamming => Construction::H4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown family '{s}' (expected simplex, hamming, rm1 or exthamming)"
                ))
            })
    }
}

/// A code family at a specific `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeFamily {
    family: Family,
    m: u32,
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={})", self.family, self.m)
    }
}

impl CodeFamily {
    pub fn new(family: Family, m: u32) -> Result<Self> {
        check_m(m)?;
        if m > 30 {
            return Err(Error::InvalidArgument(format!("m = {m} is too large")));
        }
        Ok(CodeFamily { family, m })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Block length.
    pub fn n(&self) -> usize {
        match self.family {
            Family::Simplex | Family::Hamming => (1usize << self.m) - 1,
            Family::Rm1 | Family::ExtHamming => 1usize << self.m,
        }
    }

    /// Dimension of the code.
    pub fn k(&self) -> usize {
        let m = self.m as usize;
        match self.family {
            Family::Simplex => m,
            Family::Hamming => (1usize << m) - m - 1,
            Family::Rm1 => m + 1,
            Family::ExtHamming => (1usize << m) - m - 1,
        }
    }

    /// Minimum distance.
    pub fn d(&self) -> usize {
        match self.family {
            Family::Simplex | Family::Rm1 => 1usize << (self.m - 1),
            Family::Hamming => 3,
            Family::ExtHamming => 4,
        }
    }

    pub fn dual_dimension(&self) -> usize {
        self.n() - self.k()
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.family.geometry_kind(), self.m).expect("m validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    H1,
    H2,
    H3,
    H4,
    /// All nonzero dual codewords.
    HStar,
    /// A full-row-rank parity-check matrix.
    FullRank,
    /// Supplied from outside.
    External,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::H1 => "h1",
            Construction::H2 => "h2",
            Construction::H3 => "h3",
            Construction::H4 => "h4",
            Construction::HStar => "hstar",
            Construction::FullRank => "fullrank",
            Construction::External => "external",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Construction::H1,
            Construction::H2,
            Construction::H3,
            Construction::H4,
            Construction::HStar,
            Construction::FullRank,
            Construction::External,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown construction '{s}' (expected h1, h2, h3, h4, hstar, fullrank or external)"
            ))
        })
    }
}

/// A parity-check matrix together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    matrix: BitMatrix,
    family: Option<CodeFamily>,
    construction: Construction,
    geometry: Option<Geometry>,
}

impl ParityCheckMatrix {
    /// Wraps an externally supplied matrix. When `family` is given the block
    /// lengths must agree.
    pub fn external(matrix: BitMatrix, family: Option<CodeFamily>) -> Result<Self> {
        if let Some(f) = family {
            if f.n() != matrix.num_cols() {
                return Err(Error::DimensionMismatch {
                    expected: f.n(),
                    found: matrix.num_cols(),
                });
            }
        }
        Ok(ParityCheckMatrix {
            matrix,
            family,
            construction: Construction::External,
            geometry: None,
        })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn family(&self) -> Option<CodeFamily> {
        self.family
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn geometry(&self) -> Option<Geometry> {
        self.geometry
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.matrix.num_cols()
    }

    /// True when every row is orthogonal to every row of the family's
    /// generator matrix. `None` for matrices without a family.
    pub fn is_parity_check_of_family(&self) -> Option<bool> {
        let family = self.family?;
        Some(
            generator_matrix(family)
                .is_orthogonal_to(&self.matrix)
                .expect("same length"),
        )
    }

    /// Same matrix with row `r` (0-based) removed.
    pub fn without_row(&self, r: usize) -> ParityCheckMatrix {
        ParityCheckMatrix {
            matrix: self.matrix.without_row(r),
            family: self.family,
            construction: Construction::External,
            geometry: self.geometry,
        }
    }
}

fn incidence_rows(g: Geometry, mu: u32, complement: bool) -> Result<BitMatrix> {
    let rows = g
        .enumerate_flats(mu)?
        .iter()
        .map(|f| {
            let v = f.incidence_vector();
            if complement {
                v.complement()
            } else {
                v
            }
        })
        .collect();
    BitMatrix::from_rows(g.n(), rows)
}

fn incidence_pcm(family: Family, m: u32, mu: impl Fn(u32) -> u32, complement: bool, c: Construction) -> Result<ParityCheckMatrix> {
    let cf = CodeFamily::new(family, m)?;
    let g = cf.geometry();
    Ok(ParityCheckMatrix {
        matrix: incidence_rows(g, mu(m), complement)?,
        family: Some(cf),
        construction: c,
        geometry: Some(g),
    })
}

/// Point-line incidence matrix of PG(m-1,2); a parity-check matrix of 𝒮(m).
pub fn build_h1(m: u32) -> Result<ParityCheckMatrix> {
    incidence_pcm(Family::Simplex, m, |_| 1, false, Construction::H1)
}

/// Complements of the hyperplanes of PG(m-1,2); a parity-check matrix of
/// ℋ(m) whose rows are all nonzero codewords of 𝒮(m).
pub fn build_h2(m: u32) -> Result<ParityCheckMatrix> {
    incidence_pcm(Family::Hamming, m, |m| m - 2, true, Construction::H2)
}

/// Point-plane incidence matrix of EG(m,2); a parity-check matrix of RM(m,1).
pub fn build_h3(m: u32) -> Result<ParityCheckMatrix> {
    incidence_pcm(Family::Rm1, m, |_| 2, false, Construction::H3)
}

/// Point-hyperplane incidence matrix of EG(m,2); a parity-check matrix of
/// the extended Hamming code.
pub fn build_h4(m: u32) -> Result<ParityCheckMatrix> {
    incidence_pcm(Family::ExtHamming, m, |m| m - 1, false, Construction::H4)
}

/// All nonzero codewords of the dual code, sorted by weight and then by
/// support.
pub fn build_h_star(family: CodeFamily) -> Result<ParityCheckMatrix> {
    build_h_star_with_cap(family, DEFAULT_ROW_SPACE_CAP)
}

pub fn build_h_star_with_cap(family: CodeFamily, cap: u64) -> Result<ParityCheckMatrix> {
    let dual = dual_generator_matrix(family);
    let mut rows: Vec<BitVector> = dual
        .row_space_with_cap(cap)?
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    rows.sort_by(cmp_by_weight_then_support);
    Ok(ParityCheckMatrix {
        matrix: BitMatrix::from_rows(family.n(), rows)?,
        family: Some(family),
        construction: Construction::HStar,
        geometry: Some(family.geometry()),
    })
}

/// The m × (2^m - 1) matrix whose column `i` is the binary expansion of `i`.
pub fn build_full_rank_hamming(m: u32) -> Result<ParityCheckMatrix> {
    let cf = CodeFamily::new(Family::Hamming, m)?;
    Ok(ParityCheckMatrix {
        matrix: coordinate_rows(m, (1..=cf.n()).map(|i| i as u64)),
        family: Some(cf),
        construction: Construction::FullRank,
        geometry: Some(cf.geometry()),
    })
}

/// A full-row-rank parity-check matrix for any family: the classical
/// Hamming matrix for ℋ(m), a null-space basis of the generator otherwise.
pub fn build_full_rank(family: CodeFamily) -> Result<ParityCheckMatrix> {
    if family.family() == Family::Hamming {
        return build_full_rank_hamming(family.m());
    }
    Ok(ParityCheckMatrix {
        matrix: dual_generator_matrix(family),
        family: Some(family),
        construction: Construction::FullRank,
        geometry: Some(family.geometry()),
    })
}

/// Dispatches on the construction tag. `H1`..`H4` are only defined for
/// their own family.
pub fn build(family: CodeFamily, construction: Construction) -> Result<ParityCheckMatrix> {
    let expected = family.family().optimal_construction();
    match construction {
        Construction::H1 | Construction::H2 | Construction::H3 | Construction::H4
            if construction != expected =>
        {
            Err(Error::InvalidArgument(format!(
                "construction {construction} does not apply to family {}; use {expected}",
                family.family()
            )))
        }
        Construction::H1 => build_h1(family.m()),
        Construction::H2 => build_h2(family.m()),
        Construction::H3 => build_h3(family.m()),
        Construction::H4 => build_h4(family.m()),
        Construction::HStar => build_h_star(family),
        Construction::FullRank => build_full_rank(family),
        Construction::External => Err(Error::InvalidArgument(
            "external matrices are imported, not built".into(),
        )),
    }
}

/// Rows `r = 0..m`: coordinate `j` is bit `r` of `values[j]`.
fn coordinate_rows(m: u32, values: impl Iterator<Item = u64> + Clone) -> BitMatrix {
    let n = values.clone().count();
    let rows = (0..m)
        .map(|r| {
            let support: Vec<usize> = values
                .clone()
                .enumerate()
                .filter(|&(_, v)| v >> r & 1 == 1)
                .map(|(j, _)| j + 1)
                .collect();
            BitVector::from_support(n, &support).expect("in range")
        })
        .collect();
    BitMatrix::from_rows(n, rows).expect("consistent lengths")
}

/// A full-row-rank generator matrix of the code.
pub fn generator_matrix(family: CodeFamily) -> BitMatrix {
    let m = family.m();
    let n = family.n();
    match family.family() {
        Family::Simplex => coordinate_rows(m, (1..=n).map(|i| i as u64)),
        Family::Hamming => coordinate_rows(m, (1..=n).map(|i| i as u64)).null_space(),
        Family::Rm1 => rm1_generator(m),
        Family::ExtHamming => rm1_generator(m).null_space(),
    }
}

fn rm1_generator(m: u32) -> BitMatrix {
    let n = 1usize << m;
    let coords = coordinate_rows(m, 0..n as u64);
    let ones = BitMatrix::from_rows(n, alloc::vec![BitVector::ones(n)]).expect("length n");
    ones.stack(&coords).expect("same width")
}

/// A full-row-rank generator matrix of the dual code.
pub fn dual_generator_matrix(family: CodeFamily) -> BitMatrix {
    generator_matrix(family).null_space()
}
