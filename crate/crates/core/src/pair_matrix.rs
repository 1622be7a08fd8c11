//! Matrices indexed by unordered vertex pairs.
//!
//! Rows and columns follow the lexicographic order `(1,2), (1,3), ..., (1,n),
//! (2,3), ...`. The recursive split where all pairs containing the last vertex
//! come after the pairs of the first `n - 1` vertices is available through
//! [`PairIndex::last_vertex_split_order`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::tree::{all_pairs_distances, four_point_sums, DistanceTable, SteinerOracle, Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("pair matrices need at least two vertices")]
    TooSmall,
    #[error("unknown pair {0} for a tree on {1} vertices")]
    UnknownPair(Pair, usize),
    #[error("entry overflow while building {0:?}")]
    OverflowGuard(MatrixKind),
}

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    lo: Vertex,
    hi: Vertex,
}

impl Pair {
    /// Panics when `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        Self::try_new(a, b).expect("a pair needs two distinct vertices")
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Option<Self> {
        (a != b).then(|| Pair { lo: a.min(b), hi: a.max(b) })
    }

    /// From 1-based labels.
    pub fn from_labels(a: usize, b: usize) -> Option<Self> {
        if a == 0 || b == 0 {
            return None;
        }
        Self::try_new(a - 1, b - 1)
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint other than `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    /// The shared endpoint of two pairs meeting in exactly one vertex.
    pub fn common_vertex(self, other: Pair) -> Option<Vertex> {
        let shared: Vec<_> = [self.lo, self.hi].into_iter().filter(|&v| other.contains(v)).collect();
        (shared.len() == 1).then(|| shared[0])
    }

    /// Symmetric difference of two pairs meeting in exactly one vertex.
    pub fn symmetric_difference(self, other: Pair) -> Option<Pair> {
        let c = self.common_vertex(other)?;
        Pair::try_new(self.other(c)?, other.other(c)?)
    }

    pub fn labels(self) -> [usize; 2] {
        [self.lo + 1, self.hi + 1]
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo + 1, self.hi + 1)
    }
}

impl FromStr for Pair {
    type Err = String;

    /// Parses `"i-j"` with 1-based labels.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.trim().split_once('-').ok_or_else(|| format!("expected i-j, found {s:?}"))?;
        let a: usize = a.trim().parse().map_err(|_| format!("bad label in {s:?}"))?;
        let b: usize = b.trim().parse().map_err(|_| format!("bad label in {s:?}"))?;
        Pair::from_labels(a, b).ok_or_else(|| format!("invalid pair {s:?}"))
    }
}

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        Pair::from_labels(a, b).ok_or_else(|| serde::de::Error::custom(format!("invalid pair [{a},{b}]")))
    }
}

/// Bijection between unordered pairs of `0..n` and `0..C(n,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    n: usize,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        PairIndex { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: Pair) -> bool {
        p.hi < self.n
    }

    pub fn index_of(&self, p: Pair) -> Option<usize> {
        self.contains(p).then(|| p.lo * (2 * self.n - p.lo - 1) / 2 + (p.hi - p.lo - 1))
    }

    pub fn pair_at(&self, k: usize) -> Option<Pair> {
        if k >= self.len() {
            return None;
        }
        let mut rest = k;
        let mut lo = 0;
        while rest >= self.n - lo - 1 {
            rest -= self.n - lo - 1;
            lo += 1;
        }
        Some(Pair { lo, hi: lo + 1 + rest })
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        (0..self.n).flat_map(move |lo| (lo + 1..self.n).map(move |hi| Pair { lo, hi }))
    }

    /// Lexicographic indices listed so that the pairs of `0..n-1` come first
    /// (recursively) and the pairs `{i, n-1}` follow, i.e. colexicographic order.
    pub fn last_vertex_split_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        for hi in 1..self.n {
            for lo in 0..hi {
                order.push(self.index_of(Pair { lo, hi }).unwrap());
            }
        }
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Max4pc,
    Min4pc,
    Steiner2,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Max4pc => "max4pc",
            MatrixKind::Min4pc => "min4pc",
            MatrixKind::Steiner2 => "steiner2",
        })
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "max4pc" => Ok(MatrixKind::Max4pc),
            "min4pc" => Ok(MatrixKind::Min4pc),
            "steiner2" => Ok(MatrixKind::Steiner2),
            other => Err(format!("unknown matrix kind {other:?}")),
        }
    }
}

/// Largest of the three four-point sums.
pub fn max4pc_entry(d: &DistanceTable, a: Pair, b: Pair) -> i64 {
    four_point_sums(d, a.lo, a.hi, b.lo, b.hi).into_iter().max().unwrap()
}

/// Smallest of the three four-point sums.
pub fn min4pc_entry(d: &DistanceTable, a: Pair, b: Pair) -> i64 {
    four_point_sums(d, a.lo, a.hi, b.lo, b.hi).into_iter().min().unwrap()
}

/// A dense symmetric `C(n,2) x C(n,2)` integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMatrix {
    kind: MatrixKind,
    index: PairIndex,
    entries: Vec<i64>,
}

// Every entry is at most the number of tree edges or twice the diameter.
const ENTRY_BOUND: i64 = i64::MAX / 4;

pub fn build_matrix(t: &Tree, kind: MatrixKind) -> Result<PairMatrix, MatrixError> {
    let n = t.n();
    if n < 2 {
        return Err(MatrixError::TooSmall);
    }
    let index = PairIndex::new(n);
    let pairs: Vec<Pair> = index.pairs().collect();
    let dim = pairs.len();
    let d = all_pairs_distances(t);
    let steiner = (kind == MatrixKind::Steiner2).then(|| SteinerOracle::new(t));

    let entry = |a: Pair, b: Pair| -> i64 {
        match kind {
            MatrixKind::Max4pc => max4pc_entry(&d, a, b),
            MatrixKind::Min4pc => min4pc_entry(&d, a, b),
            MatrixKind::Steiner2 => steiner.as_ref().unwrap().size(&[a.lo, a.hi, b.lo, b.hi]) as i64,
        }
    };

    // Rows are independent; collecting a parallel iterator keeps row order.
    let rows: Vec<Vec<i64>> = pairs
        .par_iter()
        .map(|&a| pairs.iter().map(|&b| entry(a, b)).collect())
        .collect();
    let entries: Vec<i64> = rows.into_iter().flatten().collect();
    debug_assert_eq!(entries.len(), dim * dim);
    if entries.iter().any(|&e| !(0..=ENTRY_BOUND).contains(&e)) {
        return Err(MatrixError::OverflowGuard(kind));
    }
    Ok(PairMatrix { kind, index, entries })
}

impl PairMatrix {
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &PairIndex {
        &self.index
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.dim() + c]
    }

    fn position(&self, p: Pair) -> Result<usize, MatrixError> {
        self.index.index_of(p).ok_or(MatrixError::UnknownPair(p, self.n()))
    }

    pub fn entry(&self, a: Pair, b: Pair) -> Result<i64, MatrixError> {
        Ok(self.at(self.position(a)?, self.position(b)?))
    }

    pub fn row_of(&self, p: Pair) -> Result<Vec<i64>, MatrixError> {
        let r = self.position(p)?;
        let dim = self.dim();
        Ok(self.entries[r * dim..(r + 1) * dim].to_vec())
    }

    /// Rows and columns in the order given.
    pub fn submatrix(&self, rows: &[Pair], cols: &[Pair]) -> Result<Vec<Vec<i64>>, MatrixError> {
        let r: Vec<usize> = rows.iter().map(|&p| self.position(p)).collect::<Result<_, _>>()?;
        let c: Vec<usize> = cols.iter().map(|&p| self.position(p)).collect::<Result<_, _>>()?;
        Ok(r.iter().map(|&i| c.iter().map(|&j| self.at(i, j)).collect()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim().max(1)).map(<[i64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (i + 1..dim).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// Header row of `i-j` labels followed by one line per matrix row.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = self.index.pairs().map(|p| p.to_string()).collect();
        let mut out = header.join(",");
        out.push('\n');
        for row in self.entries.chunks(self.dim()) {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "n": self.n(),
            "pairs": self.index.pairs().collect::<Vec<_>>(),
            "entries": self.to_rows(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: usize, b: usize) -> Pair {
        Pair::from_labels(a, b).unwrap()
    }

    #[test]
    fn index_is_lexicographic_bijection() {
        let idx = PairIndex::new(5);
        let listed: Vec<_> = idx.pairs().collect();
        assert_eq!(listed.len(), 10);
        assert_eq!(&listed[..5], &[p(1, 2), p(1, 3), p(1, 4), p(1, 5), p(2, 3)]);
        for (k, &pair) in listed.iter().enumerate() {
            assert_eq!(idx.index_of(pair), Some(k));
            assert_eq!(idx.pair_at(k), Some(pair));
        }
        assert_eq!(idx.pair_at(10), None);
        assert_eq!(idx.index_of(p(1, 6)), None);
    }

    #[test]
    fn last_vertex_split_puts_new_pairs_last() {
        let idx = PairIndex::new(4);
        let order: Vec<Pair> = idx.last_vertex_split_order().into_iter().map(|k| idx.pair_at(k).unwrap()).collect();
        assert_eq!(order, vec![p(1, 2), p(1, 3), p(2, 3), p(1, 4), p(2, 4), p(3, 4)]);
    }

    #[test]
    fn pair_helpers() {
        assert_eq!(p(1, 2).symmetric_difference(p(2, 4)), Some(p(1, 4)));
        assert_eq!(p(1, 2).symmetric_difference(p(1, 2)), None);
        assert_eq!(p(1, 2).symmetric_difference(p(3, 4)), None);
        assert_eq!("4-8".parse::<Pair>().unwrap(), p(4, 8));
        assert!("4-4".parse::<Pair>().is_err());
        assert_eq!(serde_json::to_string(&p(3, 1)).unwrap(), "[1,3]");
    }

    #[test]
    fn p3_entries() {
        let d = all_pairs_distances(&Tree::path(3));
        assert_eq!(max4pc_entry(&d, p(1, 2), p(1, 2)), 2);
        assert_eq!(max4pc_entry(&d, p(1, 3), p(1, 3)), 4);
        assert_eq!(max4pc_entry(&d, p(1, 2), p(2, 3)), 2);
        assert_eq!(min4pc_entry(&d, p(1, 2), p(1, 2)), 0);
        assert_eq!(min4pc_entry(&d, p(1, 2), p(1, 3)), 1);
        assert_eq!(min4pc_entry(&d, p(2, 3), p(2, 3)), 0);
    }

    #[test]
    fn p3_matrices() {
        let t = Tree::path(3);
        let max = build_matrix(&t, MatrixKind::Max4pc).unwrap();
        assert_eq!(max.to_rows(), vec![vec![2, 3, 2], vec![3, 4, 3], vec![2, 3, 2]]);
        let st = build_matrix(&t, MatrixKind::Steiner2).unwrap();
        assert_eq!(st.to_rows(), vec![vec![1, 2, 2], vec![2, 2, 2], vec![2, 2, 1]]);
    }

    #[test]
    fn star_block_form() {
        let m = build_matrix(&Tree::star(4), MatrixKind::Max4pc).unwrap();
        let idx = m.index();
        for a in idx.pairs() {
            for b in idx.pairs() {
                let expected = match (a.contains(0), b.contains(0)) {
                    (true, true) => 2,
                    (false, false) => 4,
                    _ => 3,
                };
                assert_eq!(m.entry(a, b).unwrap(), expected, "{a} {b}");
            }
        }
    }

    #[test]
    fn submatrices() {
        let m = build_matrix(&Tree::path(3), MatrixKind::Max4pc).unwrap();
        assert_eq!(m.submatrix(&[p(1, 2), p(1, 3)], &[p(1, 2), p(1, 3)]).unwrap(), vec![vec![2, 3], vec![3, 4]]);
        let all: Vec<_> = m.index().pairs().collect();
        assert_eq!(m.submatrix(&all, &all).unwrap(), m.to_rows());
        assert_eq!(m.row_of(p(1, 3)).unwrap(), vec![3, 4, 3]);
        assert!(matches!(m.row_of(p(1, 4)), Err(MatrixError::UnknownPair(..))));

        let s = build_matrix(&Tree::star(4), MatrixKind::Max4pc).unwrap();
        assert_eq!(s.submatrix(&[p(1, 2), p(3, 4)], &[p(1, 2), p(3, 4)]).unwrap(), vec![vec![2, 3], vec![3, 4]]);
    }

    #[test]
    fn too_small() {
        assert_eq!(build_matrix(&Tree::singleton(), MatrixKind::Max4pc), Err(MatrixError::TooSmall));
    }

    #[test]
    fn csv_and_json() {
        let m = build_matrix(&Tree::path(3), MatrixKind::Max4pc).unwrap();
        assert_eq!(m.to_csv(), "1-2,1-3,2-3\n2,3,2\n3,4,3\n2,3,2\n");
        let j = m.to_json();
        assert_eq!(j["kind"], "max4pc");
        assert_eq!(j["pairs"], serde_json::json!([[1, 2], [1, 3], [2, 3]]));
        assert_eq!(j["entries"][1], serde_json::json!([3, 4, 3]));
    }
}
