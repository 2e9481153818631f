//! Anisotropic uniform grids, sparse grids and test point sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::problems::PdeProblem;
use crate::MAX_DIM;

/// Level vector `(l_1, …, l_d)` of one anisotropic uniform grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() || levels.contains(&0) {
            return Err(Error::InvalidMultiIndex(levels));
        }
        Ok(MultiIndex(levels))
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn one_norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of grid points along each axis, `2^{l_i} + 1`.
    pub fn axis_sizes(&self) -> Vec<usize> {
        self.0.iter().map(|&l| (1usize << l) + 1).collect()
    }

    pub fn node_count(&self) -> usize {
        self.axis_sizes().iter().product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A flat list of `d`-dimensional points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Self {
        assert!(dim > 0 && coords.len().is_multiple_of(dim), "ragged point set");
        PointSet { dim, coords }
    }

    pub fn from_points<'a>(dim: usize, points: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let mut coords = Vec::new();
        for p in points {
            assert_eq!(p.len(), dim);
            coords.extend_from_slice(p);
        }
        PointSet { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }
}

/// Full tensor-product grid `X_ℓ` with dyadic coordinates `k_i 2^{-l_i}`.
///
/// Nodes are ordered lexicographically by `(k_1, …, k_d)` with the last
/// axis varying fastest.
#[derive(Clone, Debug)]
pub struct UniformGrid {
    index: MultiIndex,
    axes: Vec<Vec<f64>>,
    nodes: PointSet,
}

impl UniformGrid {
    pub fn index(&self) -> &MultiIndex {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    /// Coordinates along axis `i`.
    pub fn axis(&self, i: usize) -> &[f64] {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn nodes(&self) -> &PointSet {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `k · 2^{-l}`, exact in binary floating point for `l ≤ 52`.
#[inline]
pub fn dyadic(k: u64, l: u32) -> f64 {
    k as f64 * (-(l as f64)).exp2()
}

pub fn make_uniform_grid(index: &MultiIndex) -> UniformGrid {
    let axes: Vec<Vec<f64>> = index
        .levels()
        .iter()
        .map(|&l| (0..=(1u64 << l)).map(|k| dyadic(k, l)).collect())
        .collect();
    let d = axes.len();
    let total: usize = axes.iter().map(Vec::len).product();
    let mut coords = Vec::with_capacity(total * d);
    let mut k = vec![0usize; d];
    for _ in 0..total {
        coords.extend(k.iter().zip(&axes).map(|(&ki, axis)| axis[ki]));
        // odometer increment, last axis fastest
        for i in (0..d).rev() {
            k[i] += 1;
            if k[i] < axes[i].len() {
                break;
            }
            k[i] = 0;
        }
    }
    UniformGrid {
        index: index.clone(),
        nodes: PointSet::new(d, coords),
        axes,
    }
}

/// One signed grid of the Boolean-sum decomposition of a sparse grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationTerm {
    pub index: MultiIndex,
    pub coefficient: i64,
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
}

/// All compositions of `total` into `parts` positive integers, in
/// lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            if remaining >= 1 {
                prefix.push(remaining);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let max_first = remaining.saturating_sub(parts as u32 - 1);
        for first in 1..=max_first {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total as usize >= parts {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

fn check_level(n: u32, d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    if (n as usize) < d {
        return Err(Error::LevelTooSmall { level: n, dim: d });
    }
    Ok(())
}

/// Combination-technique terms of the sparse grid at level `n` in `d`
/// dimensions, grouped by `q = 0, …, d−1` and lexicographic within a group.
pub fn combination_terms(n: u32, d: usize) -> Result<Vec<CombinationTerm>> {
    check_level(n, d)?;
    let mut terms = Vec::new();
    for q in 0..d as u32 {
        let sign = if q % 2 == 0 { 1 } else { -1 };
        let coefficient = sign * binomial(d as u64 - 1, q as u64);
        let norm = n + (d as u32 - 1) - q;
        for levels in compositions(norm, d) {
            terms.push(CombinationTerm {
                index: MultiIndex(levels),
                coefficient,
            });
        }
    }
    Ok(terms)
}

pub(crate) fn point_key(p: &[f64]) -> [u64; MAX_DIM] {
    let mut key = [0u64; MAX_DIM];
    for (k, x) in key.iter_mut().zip(p) {
        // +0.0 and -0.0 never occur: coordinates are k * 2^-l with k >= 0
        *k = x.to_bits();
    }
    key
}

/// Union of the top-norm grids `‖ℓ‖₁ = n + d − 1`, deduplicated by exact
/// coordinate equality and sorted lexicographically.
pub fn sparse_grid_nodes(n: u32, d: usize) -> Result<PointSet> {
    check_level(n, d)?;
    let norm = n + d as u32 - 1;
    let mut set = BTreeSet::new();
    for levels in compositions(norm, d) {
        let grid = make_uniform_grid(&MultiIndex(levels));
        set.extend(grid.nodes().iter().map(point_key));
    }
    let mut coords = Vec::with_capacity(set.len() * d);
    for key in &set {
        coords.extend(key[..d].iter().map(|&b| f64::from_bits(b)));
    }
    Ok(PointSet::new(d, coords))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    Boundary,
}

/// Which faces of the hypercube carry Dirichlet data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryRule {
    /// Every face is a Dirichlet face.
    AllFaces,
    /// Space-time problems: the initial face and the lateral faces carry
    /// data, the final-time face is open.
    OpenFinalTime { time_axis: usize },
}

impl BoundaryRule {
    pub fn classify(&self, point: &[f64]) -> Result<NodeClass> {
        if point.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::OutsideDomain(point.to_vec()));
        }
        let on_face = |x: f64| x == 0.0 || x == 1.0;
        let boundary = match *self {
            BoundaryRule::AllFaces => point.iter().any(|&x| on_face(x)),
            BoundaryRule::OpenFinalTime { time_axis } => point.iter().enumerate().any(|(i, &x)| {
                if i == time_axis {
                    x == 0.0
                } else {
                    on_face(x)
                }
            }),
        };
        Ok(if boundary {
            NodeClass::Boundary
        } else {
            NodeClass::Interior
        })
    }
}

pub fn classify_node(point: &[f64], problem: &PdeProblem) -> Result<NodeClass> {
    if point.len() != problem.dimension {
        return Err(Error::DimensionMismatch {
            expected: problem.dimension,
            found: point.len(),
        });
    }
    problem.boundary_rule().classify(point)
}

const HALTON_BASES: [u64; MAX_DIM] = [2, 3, 5, 7];

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    value
}

/// The first `count` Halton points in `d ≤ 4` dimensions, starting from
/// sequence index 1.
pub fn halton_points(count: usize, d: usize) -> Result<PointSet> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    if count == 0 {
        return Err(Error::InvalidConfig("test point count must be positive".into()));
    }
    let mut coords = Vec::with_capacity(count * d);
    for i in 1..=count as u64 {
        coords.extend(HALTON_BASES[..d].iter().map(|&b| radical_inverse(i, b)));
    }
    Ok(PointSet::new(d, coords))
}
