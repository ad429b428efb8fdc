//! Finite geometries EG(m,2) and PG(m-1,2).
//!
//! Both geometries are parameterized by the code parameter `m`: EG(m,2) has
//! the `2^m` vectors of F₂^m as points and PG(m-1,2) the `2^m - 1` nonzero
//! ones. Points are numbered by integer value with coordinate 1 as the least
//! significant bit:
//!
//! * PG: point `i` is the vector with integer value `i`, `1 <= i <= 2^m - 1`;
//! * EG: point `i` is the vector with integer value `i - 1`, `1 <= i <= 2^m`.
//!
//! Construction (spans, flat enumeration) is over GF(2) only; the counting
//! functions in [`counting`] take a general field size.

pub mod counting;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{check_m, Error, Result};
use crate::gf2::{BitVector, XorBasis};

pub use counting::{
    alpha, binomial, binomial_u64, cauchy_alternating_sum, cauchy_identity_check,
    count_flats_in_flat, count_flats_through_flat, gaussian_binomial,
};

/// Largest `m` for which [`Geometry::enumerate_flats`] runs by default.
pub const DEFAULT_MAX_ENUMERATION_M: u32 = 6;

/// Largest `m` a [`Geometry`] accepts; points are packed into `u64`.
pub const MAX_GEOMETRY_M: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryKind {
    /// Euclidean geometry EG(m,2).
    Eg,
    /// Projective geometry PG(m-1,2).
    Pg,
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryKind::Eg => "EG",
            GeometryKind::Pg => "PG",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Geometry {
    kind: GeometryKind,
    m: u32,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},2)", self.kind, self.dimension())
    }
}

impl Geometry {
    /// `m` is the code parameter: EG(m,2) or PG(m-1,2).
    pub fn new(kind: GeometryKind, m: u32) -> Result<Self> {
        check_m(m)?;
        if m > MAX_GEOMETRY_M {
            return Err(Error::InvalidArgument(format!(
                "m = {m} exceeds the supported maximum {MAX_GEOMETRY_M}"
            )));
        }
        Ok(Geometry { kind, m })
    }

    pub fn eg(m: u32) -> Result<Self> {
        Self::new(GeometryKind::Eg, m)
    }

    pub fn pg(m: u32) -> Result<Self> {
        Self::new(GeometryKind::Pg, m)
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Geometric dimension: `m` for EG(m,2), `m - 1` for PG(m-1,2).
    pub fn dimension(&self) -> u32 {
        match self.kind {
            GeometryKind::Eg => self.m,
            GeometryKind::Pg => self.m - 1,
        }
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        match self.kind {
            GeometryKind::Eg => 1usize << self.m,
            GeometryKind::Pg => (1usize << self.m) - 1,
        }
    }

    /// Number of points on a `mu`-flat.
    pub fn flat_size(&self, mu: u32) -> usize {
        match self.kind {
            GeometryKind::Eg => 1usize << mu,
            GeometryKind::Pg => (1usize << (mu + 1)) - 1,
        }
    }

    fn check_point(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.n(),
            })
        } else {
            Ok(())
        }
    }

    /// Integer value of the vector of point `i`.
    pub fn point_value(&self, i: usize) -> Result<u64> {
        self.check_point(i)?;
        Ok(match self.kind {
            GeometryKind::Eg => (i - 1) as u64,
            GeometryKind::Pg => i as u64,
        })
    }

    /// Point index of a vector value; `None` for the zero vector in PG or
    /// values outside F₂^m.
    pub fn point_of_value(&self, v: u64) -> Option<usize> {
        if v >> self.m != 0 {
            return None;
        }
        match self.kind {
            GeometryKind::Eg => Some(v as usize + 1),
            GeometryKind::Pg if v == 0 => None,
            GeometryKind::Pg => Some(v as usize),
        }
    }

    pub fn point_to_vector(&self, i: usize) -> Result<BitVector> {
        BitVector::from_u64(self.m as usize, self.point_value(i)?)
    }

    fn values_of(&self, points: &[usize]) -> Result<Vec<u64>> {
        points.iter().map(|&i| self.point_value(i)).collect()
    }

    fn points_of_values(&self, values: impl IntoIterator<Item = u64>) -> Vec<usize> {
        let mut pts: Vec<usize> = values
            .into_iter()
            .filter_map(|v| self.point_of_value(v))
            .collect();
        pts.sort_unstable();
        pts
    }

    /// The smallest flat containing `points`.
    ///
    /// PG: the nonzero vectors of the linear span. EG: the affine closure,
    /// obtained by translating through the first point.
    pub fn span(&self, points: &[usize]) -> Result<Flat> {
        let values = self.values_of(points)?;
        let Some(&origin) = values.first() else {
            return Err(Error::EmptySet);
        };
        let mut basis = XorBasis::new();
        let (dim, pts) = match self.kind {
            GeometryKind::Pg => {
                for &v in &values {
                    basis.insert(v);
                }
                let pts = self.points_of_values(basis.span());
                (basis.len() as u32 - 1, pts)
            }
            GeometryKind::Eg => {
                for &v in &values {
                    basis.insert(v ^ origin);
                }
                let pts = self.points_of_values(basis.span().into_iter().map(|v| v ^ origin));
                (basis.len() as u32, pts)
            }
        };
        Ok(Flat {
            geometry: *self,
            dim,
            points: pts,
        })
    }

    /// Dimension of the flat spanned by `points`, without materializing it.
    pub fn span_dimension(&self, points: &[usize]) -> Result<u32> {
        let values = self.values_of(points)?;
        let Some(&origin) = values.first() else {
            return Err(Error::EmptySet);
        };
        let mut basis = XorBasis::new();
        match self.kind {
            GeometryKind::Pg => {
                values.iter().for_each(|&v| {
                    basis.insert(v);
                });
                Ok(basis.len() as u32 - 1)
            }
            GeometryKind::Eg => {
                values.iter().for_each(|&v| {
                    basis.insert(v ^ origin);
                });
                Ok(basis.len() as u32)
            }
        }
    }

    /// True iff `points` is nonempty and equal to its own span.
    pub fn is_flat(&self, points: &[usize]) -> bool {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        match self.span(&sorted) {
            Ok(flat) => flat.points == sorted,
            Err(_) => false,
        }
    }

    /// All `mu`-flats, sorted lexicographically by point list.
    pub fn enumerate_flats(&self, mu: u32) -> Result<Vec<Flat>> {
        self.enumerate_flats_with_max_m(mu, DEFAULT_MAX_ENUMERATION_M)
    }

    pub fn enumerate_flats_with_max_m(&self, mu: u32, max_m: u32) -> Result<Vec<Flat>> {
        if self.m > max_m {
            return Err(Error::CapExceeded {
                what: "flat enumeration m",
                requested: self.m as u64,
                cap: max_m as u64,
            });
        }
        if mu > self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "flat dimension {mu} exceeds geometry dimension {}",
                self.dimension()
            )));
        }
        let mut flats = Vec::new();
        match self.kind {
            GeometryKind::Pg => {
                for_each_subspace(self.m, mu + 1, |span| {
                    flats.push(Flat {
                        geometry: *self,
                        dim: mu,
                        points: self.points_of_values(span.iter().copied()),
                    });
                });
            }
            GeometryKind::Eg => {
                let size = 1u64 << self.m;
                for_each_subspace(self.m, mu, |span| {
                    // One coset per representative that is minimal in its coset.
                    for x in 0..size {
                        if span.iter().all(|&s| x ^ s >= x) {
                            flats.push(Flat {
                                geometry: *self,
                                dim: mu,
                                points: self.points_of_values(span.iter().map(|&s| s ^ x)),
                            });
                        }
                    }
                });
            }
        }
        flats.sort_by(|a, b| a.points.cmp(&b.points));
        Ok(flats)
    }

    /// Incidence vector of a point set, as a length-`n` vector.
    pub fn incidence_vector(&self, points: &[usize]) -> Result<BitVector> {
        BitVector::from_support(self.n(), points)
    }
}

/// Calls `f` with the full element list of every `k`-dimensional subspace of
/// F₂^m, each subspace exactly once. Subspaces are generated from their
/// reduced row-echelon bases: pivots are leading (most significant) bits, and
/// each basis row is zero at the other rows' pivots.
fn for_each_subspace(m: u32, k: u32, mut f: impl FnMut(&[u64])) {
    if k == 0 {
        f(&[0]);
        return;
    }
    for pivots in 0u64..(1u64 << m) {
        if pivots.count_ones() != k {
            continue;
        }
        let pivot_list: Vec<u32> = (0..m).filter(|&b| pivots >> b & 1 == 1).collect();
        let free_masks: Vec<u64> = pivot_list
            .iter()
            .map(|&p| ((1u64 << p) - 1) & !pivots)
            .collect();
        let free_bits: Vec<u32> = free_masks.iter().map(|f| f.count_ones()).collect();
        let total: u32 = free_bits.iter().sum();
        for assignment in 0u64..(1u64 << total) {
            let mut basis = XorBasis::new();
            let mut rest = assignment;
            for ((&p, &mask), &nb) in pivot_list.iter().zip(&free_masks).zip(&free_bits) {
                let chunk = rest & ((1u64 << nb) - 1);
                rest >>= nb;
                let row = (1u64 << p) | deposit(chunk, mask);
                basis.insert(row);
            }
            f(&basis.span());
        }
    }
}

/// Scatters the low bits of `value` into the set bits of `mask`.
fn deposit(value: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut v = value;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if v & 1 == 1 {
            out |= bit;
        }
        v >>= 1;
        m &= m - 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    geometry: Geometry,
    dim: u32,
    points: Vec<usize>,
}

impl Flat {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Sorted 1-based point indices.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.points.binary_search(&point).is_ok()
    }

    pub fn incidence_vector(&self) -> BitVector {
        self.geometry
            .incidence_vector(&self.points)
            .expect("flat points lie in the geometry")
    }

    /// Points of the geometry not on this flat.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.geometry.n())
            .filter(|p| !self.contains(*p))
            .collect()
    }
}

/// A validated, sorted, duplicate-free set of points of a geometry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    geometry: Geometry,
    points: Vec<usize>,
}

impl PointSet {
    pub fn new(geometry: Geometry, points: &[usize]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        for &p in &pts {
            geometry.check_point(p)?;
        }
        Ok(PointSet {
            geometry,
            points: pts,
        })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn span(&self) -> Result<Flat> {
        self.geometry.span(&self.points)
    }

    pub fn is_flat(&self) -> bool {
        self.geometry.is_flat(&self.points)
    }

    pub fn complement(&self) -> PointSet {
        PointSet {
            geometry: self.geometry,
            points: (1..=self.geometry.n())
                .filter(|p| self.points.binary_search(p).is_err())
                .collect(),
        }
    }

    /// The set with point `j` removed (`S_j`).
    pub fn without(&self, j: usize) -> PointSet {
        PointSet {
            geometry: self.geometry,
            points: self.points.iter().copied().filter(|&p| p != j).collect(),
        }
    }
}
