//! Checkers that compare the closed-form statements about Max4PC matrices
//! against independent exact computations, plus corpus sweeps.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_family, star_family, BasisError, BasisSet};
use crate::linalg::float::{float_inertia, rel_close, symmetric_eigenvalues};
use crate::linalg::{
    bareiss_det, char_poly, descartes_inertia, exact_rank, smith_normal_form, symmetric_inertia, BigIntMatrix,
    CharPoly, Inertia,
};
use crate::pair_matrix::{build_matrix, MatrixKind, Pair, PairMatrix};
use crate::tree::{
    all_labeled_trees, all_pairs_distances, check_four_point, leaf_profile, prufer_decode, prufer_encode,
    random_tree, Tree, TreeError, Vertex,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "T1-rank")]
    T1Rank,
    #[serde(rename = "T2/T4d-det")]
    T4dDet,
    #[serde(rename = "T3-snf")]
    T3Snf,
    #[serde(rename = "T4a-unique")]
    T4aUnique,
    #[serde(rename = "T4b-size")]
    T4bSize,
    #[serde(rename = "T4c-span")]
    T4cSpan,
    #[serde(rename = "T5-inertia")]
    T5Inertia,
    #[serde(rename = "L1-pendant-row")]
    L1PendantRow,
    #[serde(rename = "L2-component-split")]
    L2ComponentSplit,
    #[serde(rename = "C1-sibling-leaf")]
    C1SiblingLeaf,
    #[serde(rename = "STAR-det")]
    StarDet,
    #[serde(rename = "STAR-eigen")]
    StarEigen,
    #[serde(rename = "FPC-max2")]
    FpcMax2,
    #[serde(rename = "PARITY-steiner")]
    ParitySteiner,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::T1Rank,
        CheckId::T4dDet,
        CheckId::T3Snf,
        CheckId::T4aUnique,
        CheckId::T4bSize,
        CheckId::T4cSpan,
        CheckId::T5Inertia,
        CheckId::L1PendantRow,
        CheckId::L2ComponentSplit,
        CheckId::C1SiblingLeaf,
        CheckId::StarDet,
        CheckId::StarEigen,
        CheckId::FpcMax2,
        CheckId::ParitySteiner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::T1Rank => "T1-rank",
            CheckId::T4dDet => "T2/T4d-det",
            CheckId::T3Snf => "T3-snf",
            CheckId::T4aUnique => "T4a-unique",
            CheckId::T4bSize => "T4b-size",
            CheckId::T4cSpan => "T4c-span",
            CheckId::T5Inertia => "T5-inertia",
            CheckId::L1PendantRow => "L1-pendant-row",
            CheckId::L2ComponentSplit => "L2-component-split",
            CheckId::C1SiblingLeaf => "C1-sibling-leaf",
            CheckId::StarDet => "STAR-det",
            CheckId::StarEigen => "STAR-eigen",
            CheckId::FpcMax2 => "FPC-max2",
            CheckId::ParitySteiner => "PARITY-steiner",
        }
    }

    /// Checks that only make sense for `n >= 3`.
    pub fn needs_three_vertices(self) -> bool {
        !matches!(self, CheckId::FpcMax2 | CheckId::ParitySteiner | CheckId::L1PendantRow)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("T4d-det") && *c == CheckId::T4dDet))
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Everything needed to reproduce a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    /// 1-based Prüfer sequence of the tree.
    pub prufer: Vec<usize>,
    pub location: String,
    pub expected: String,
    pub computed: String,
}

impl Witness {
    pub fn tree(&self) -> Result<Tree, TreeError> {
        if self.n == 1 {
            return Ok(Tree::singleton());
        }
        let seq: Vec<Vertex> = self.prufer.iter().map(|&l| l.wrapping_sub(1)).collect();
        prufer_decode(&seq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub id: CheckId,
    pub pass: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Seeded random traversal runs per tree, on top of one run per leaf.
    pub random_runs: usize,
    pub family_seed: u64,
    pub float_threshold: f64,
    /// Largest matrix dimension sent to the floating eigensolver.
    pub float_max_dim: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { random_runs: 4, family_seed: 0x4d61_7834, float_threshold: 1e-9, float_max_dim: 66 }
    }
}

/// `(-1)^(n-p) 2^(2(n-p-1))`.
pub fn predicted_basis_det(n: usize, p: usize) -> BigInt {
    let k = n - p;
    let magnitude = BigInt::one() << (2 * (k - 1));
    if k % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// `C(n,2) - 2(n-p)` zeros, then `1, 1`, then `2(n-p-1)` twos.
pub fn predicted_invariant_factors(n: usize, p: usize) -> Vec<BigInt> {
    let k = n - p;
    let mut out = vec![BigInt::zero(); n * (n - 1) / 2 - 2 * k];
    out.extend([BigInt::one(), BigInt::one()]);
    out.extend(std::iter::repeat_n(BigInt::from(2), 2 * (k - 1)));
    out
}

pub fn predicted_inertia(n: usize, p: usize) -> Inertia {
    let k = n - p;
    Inertia::new(n * (n - 1) / 2 - 2 * k, k, k)
}

/// `x^(C(n,2)-2) (x^2 - 2(n-1)^2 x - (n-1) C(n-1,2))`.
pub fn predicted_star_char_poly(n: usize) -> CharPoly {
    let dim = n * (n - 1) / 2;
    let m = n as i64 - 1;
    let mut coefficients = vec![BigInt::zero(); dim + 1];
    coefficients[dim] = BigInt::one();
    coefficients[dim - 1] = BigInt::from(-2 * m * m);
    coefficients[dim - 2] = BigInt::from(-m * (m * (m - 1) / 2));
    CharPoly { coefficients }
}

/// `(n-1)^2 ± sqrt((n-1)^4 + (n-1) C(n-1,2))`, larger root first.
pub fn predicted_star_roots(n: usize) -> (f64, f64) {
    let m = n as f64 - 1.0;
    let disc = (m.powi(4) + m * (m * (m - 1.0) / 2.0)).sqrt();
    (m * m + disc, m * m - disc)
}

fn fmt_list<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_pairs(v: &[Pair]) -> String {
    let parts: Vec<String> = v.iter().map(Pair::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn big_submatrix(m: &PairMatrix, rows: &[Pair], cols: &[Pair]) -> BigIntMatrix {
    BigIntMatrix::from_rows(&m.submatrix(rows, cols).expect("pairs come from the same tree"))
}

struct TreeContext<'a> {
    t: &'a Tree,
    n: usize,
    p: usize,
    prufer: Vec<usize>,
    opts: &'a VerifyOptions,
    max: PairMatrix,
    max_big: BigIntMatrix,
    rank: OnceCell<usize>,
    family: OnceCell<Result<Vec<BasisSet>, BasisError>>,
}

/// Outcome of one checker before timing is attached.
struct Outcome {
    summary: String,
    failure: Option<(String, String, String)>,
}

impl Outcome {
    fn pass(summary: impl Into<String>) -> Self {
        Outcome { summary: summary.into(), failure: None }
    }

    fn fail(summary: impl Into<String>, location: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Self {
        Outcome {
            summary: summary.into(),
            failure: Some((location.into(), expected.to_string(), computed.to_string())),
        }
    }
}

impl<'a> TreeContext<'a> {
    fn new(t: &'a Tree, opts: &'a VerifyOptions) -> Self {
        let max = build_matrix(t, MatrixKind::Max4pc).expect("n >= 2");
        let max_big = BigIntMatrix::from_pair_matrix(&max);
        TreeContext {
            t,
            n: t.n(),
            p: leaf_profile(t).p,
            prufer: prufer_encode(t).into_iter().map(|v| v + 1).collect(),
            opts,
            max,
            max_big,
            rank: OnceCell::new(),
            family: OnceCell::new(),
        }
    }

    fn rank(&self) -> usize {
        *self.rank.get_or_init(|| exact_rank(&self.max_big))
    }

    fn family(&self) -> Result<&[BasisSet], String> {
        self.family
            .get_or_init(|| enumerate_family(self.t, self.p + self.opts.random_runs, self.opts.family_seed))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(|e| e.to_string())
    }

    fn witness(&self, failure: (String, String, String)) -> Witness {
        let (location, expected, computed) = failure;
        Witness { n: self.n, prufer: self.prufer.clone(), location, expected, computed }
    }

    fn basis_label(b: &BasisSet) -> String {
        format!("start leaf {}, policy {}, B = {}", b.start_leaf + 1, b.policy, fmt_pairs(&b.pairs))
    }

    fn run(&self, id: CheckId) -> Outcome {
        match id {
            CheckId::T1Rank => self.check_rank(),
            CheckId::T4dDet => self.check_basis_det(),
            CheckId::T3Snf => self.check_snf(),
            CheckId::T4aUnique => self.check_unique_leaf(),
            CheckId::T4bSize => self.check_basis_size(),
            CheckId::T4cSpan => self.check_basis_span(),
            CheckId::T5Inertia => self.check_inertia(),
            CheckId::L1PendantRow => self.check_pendant_rows(),
            CheckId::L2ComponentSplit => self.check_component_split(),
            CheckId::C1SiblingLeaf => self.check_sibling_leaves(),
            CheckId::StarDet => self.check_star_det(),
            CheckId::StarEigen => self.check_star_eigen(),
            CheckId::FpcMax2 => self.check_four_point(),
            CheckId::ParitySteiner => self.check_parity(),
        }
    }

    fn check_rank(&self) -> Outcome {
        let expected = 2 * (self.n - self.p);
        let rank = self.rank();
        let summary = format!("rank {rank}, 2(n-p) = 2({}-{}) = {expected}", self.n, self.p);
        if rank == expected {
            Outcome::pass(summary)
        } else {
            Outcome::fail(summary, "whole matrix", expected, rank)
        }
    }

    fn check_basis_det(&self) -> Outcome {
        let family = match self.family() {
            Ok(f) => f,
            Err(e) => return Outcome::fail("basis construction failed", "family", "a basis family", e),
        };
        let expected = predicted_basis_det(self.n, self.p);
        for b in family {
            let det = bareiss_det(&big_submatrix(&self.max, &b.pairs, &b.pairs)).expect("square");
            if det != expected {
                return Outcome::fail(format!("det mismatch, expected {expected}"), Self::basis_label(b), &expected, det);
            }
        }
        Outcome::pass(format!("{} bases, det = {expected}", family.len()))
    }

    fn check_snf(&self) -> Outcome {
        let snf = smith_normal_form(&self.max_big);
        let computed = snf.zeros_first();
        let predicted = predicted_invariant_factors(self.n, self.p);
        let summary = format!("computed {}, predicted {}", fmt_list(&computed), fmt_list(&predicted));
        if !snf.satisfies_chain() {
            return Outcome::fail(summary, "divisibility chain", "a chain", fmt_list(&snf.invariant_factors));
        }
        if snf.rank() != self.rank() {
            return Outcome::fail(summary, "nonzero factor count vs exact rank", self.rank(), snf.rank());
        }
        if computed != predicted {
            return Outcome::fail(summary, "invariant factors", fmt_list(&predicted), fmt_list(&computed));
        }
        Outcome::pass(summary)
    }

    fn check_unique_leaf(&self) -> Outcome {
        if self.t.is_star() {
            return Outcome::pass("star: statement covers non-star trees only");
        }
        let family = match self.family() {
            Ok(f) => f,
            Err(e) => return Outcome::fail("basis construction failed", "family", "a basis family", e),
        };
        let t = self.t;
        for b in family {
            let members: std::collections::BTreeSet<Pair> = b.pairs.iter().copied().collect();
            let mut triples = Vec::new();
            for u in (0..self.n).filter(|&u| t.is_pendant(u)) {
                for v in 0..self.n {
                    let Some(uv) = Pair::try_new(u, v) else { continue };
                    if !members.contains(&uv) || !t.has_edge(u, v) {
                        continue;
                    }
                    for w in 0..self.n {
                        let Some(uw) = Pair::try_new(u, w) else { continue };
                        if w != v && members.contains(&uw) && t.degree(w) > 1 && t.has_edge(v, w) {
                            triples.push((u + 1, v + 1, w + 1));
                        }
                    }
                }
            }
            if triples.len() != 1 {
                let found: Vec<String> = triples.iter().map(|(u, v, w)| format!("({u},{v},{w})")).collect();
                return Outcome::fail("uniqueness violated", Self::basis_label(b), "exactly one (u,v,w)", fmt_list(&found));
            }
        }
        Outcome::pass(format!("{} bases, one (u,v,w) each", family.len()))
    }

    fn check_basis_size(&self) -> Outcome {
        let family = match self.family() {
            Ok(f) => f,
            Err(e) => return Outcome::fail("basis construction failed", "family", "a basis family", e),
        };
        let expected = 2 * (self.n - self.p);
        for b in family {
            let distinct = b.sorted_pairs().windows(2).all(|w| w[0] != w[1]);
            if b.len() != expected || !distinct {
                return Outcome::fail(
                    "size mismatch or repeated pair",
                    Self::basis_label(b),
                    format!("{expected} distinct pairs"),
                    format!("{} pairs, distinct = {distinct}", b.len()),
                );
            }
        }
        Outcome::pass(format!("{} bases of size {expected}", family.len()))
    }

    fn check_basis_span(&self) -> Outcome {
        let family = match self.family() {
            Ok(f) => f,
            Err(e) => return Outcome::fail("basis construction failed", "family", "a basis family", e),
        };
        let expected = 2 * (self.n - self.p);
        let all: Vec<Pair> = self.max.index().pairs().collect();
        for b in family {
            let r = exact_rank(&big_submatrix(&self.max, &b.pairs, &all));
            if r != expected || r != self.rank() {
                return Outcome::fail("rows of B do not span", Self::basis_label(b), expected, r);
            }
        }
        Outcome::pass(format!("{} bases span a rank-{expected} row space", family.len()))
    }

    fn check_inertia(&self) -> Outcome {
        let expected = predicted_inertia(self.n, self.p);
        let exact = symmetric_inertia(&self.max_big).expect("Max4PC is symmetric");
        let summary = format!("inertia {exact}, predicted {expected}");
        if exact != expected {
            return Outcome::fail(summary, "congruence diagonalization", expected, exact);
        }
        let k = self.n - self.p;
        let basis_expected = Inertia::new(0, k, k);
        let family = match self.family() {
            Ok(f) => f,
            Err(e) => return Outcome::fail(summary, "family", "a basis family", e),
        };
        for b in family {
            let sub = big_submatrix(&self.max, &b.pairs, &b.pairs);
            let on_basis = symmetric_inertia(&sub).expect("principal submatrix is symmetric");
            if on_basis != basis_expected {
                return Outcome::fail(summary, format!("Max4PC[B,B], {}", Self::basis_label(b)), basis_expected, on_basis);
            }
            let descartes = descartes_inertia(&char_poly(&sub).expect("square"));
            if descartes != basis_expected {
                return Outcome::fail(
                    summary,
                    format!("Descartes on char poly of Max4PC[B,B], {}", Self::basis_label(b)),
                    basis_expected,
                    descartes,
                );
            }
        }
        if self.max.dim() <= self.opts.float_max_dim {
            let eig = symmetric_eigenvalues(&self.max_big.to_f64_rows());
            let float = float_inertia(&eig, self.opts.float_threshold);
            if float != expected {
                return Outcome::fail(summary, "floating eigensolver sign counts", expected, float);
            }
        }
        Outcome::pass(summary)
    }

    fn check_pendant_rows(&self) -> Outcome {
        let t = self.t;
        let mut checked = 0;
        for leaf in (0..self.n).filter(|&v| t.is_pendant(v)) {
            let q = t.neighbors(leaf)[0];
            for u in (0..self.n).filter(|&u| u != leaf && u != q) {
                let a = self.max.row_of(Pair::new(u, leaf)).unwrap();
                let b = self.max.row_of(Pair::new(u, q)).unwrap();
                if let Some(col) = (0..a.len()).find(|&c| a[c] != b[c] + 1) {
                    let pair = self.max.index().pair_at(col).unwrap();
                    return Outcome::fail(
                        "pendant-row identity violated",
                        format!("rows {{{},{}}} vs {{{},{}}}, column {pair}", u + 1, leaf + 1, u + 1, q + 1),
                        b[col] + 1,
                        a[col],
                    );
                }
                checked += 1;
            }
        }
        Outcome::pass(format!("{checked} row identities"))
    }

    fn check_component_split(&self) -> Outcome {
        let t = self.t;
        let mut checked = 0;
        for leaf in (0..self.n).filter(|&v| t.is_pendant(v)) {
            let q = t.neighbors(leaf)[0];
            for &u in t.neighbors(q).iter().filter(|&&u| u != leaf) {
                let inside = t.component_without(q, u);
                let pq = self.max.row_of(Pair::new(leaf, q)).unwrap();
                let uq = self.max.row_of(Pair::new(u, q)).unwrap();
                for (col, ij) in self.max.index().pairs().enumerate() {
                    let shift = if inside[ij.lo()] && inside[ij.hi()] { 2 } else { 0 };
                    if pq[col] != uq[col] + shift {
                        return Outcome::fail(
                            "component-split identity violated",
                            format!("p={}, q={}, u={}, column {ij}", leaf + 1, q + 1, u + 1),
                            uq[col] + shift,
                            pq[col],
                        );
                    }
                }
                checked += 1;
            }
        }
        Outcome::pass(format!("{checked} (p,q,u) configurations"))
    }

    fn check_sibling_leaves(&self) -> Outcome {
        let t = self.t;
        if self.n <= 3 {
            return Outcome::pass("n <= 3: statement needs n > 3");
        }
        let mut checked = 0;
        for q in 0..self.n {
            let leaves: Vec<Vertex> = t.neighbors(q).iter().copied().filter(|&v| t.is_pendant(v)).collect();
            if leaves.len() < 2 {
                continue;
            }
            for &u in &leaves {
                let smaller = t.remove_leaf(u).expect("u is a pendant");
                let m = build_matrix(&smaller, MatrixKind::Max4pc).expect("n >= 3");
                let r = exact_rank(&BigIntMatrix::from_pair_matrix(&m));
                if r != self.rank() {
                    return Outcome::fail(
                        "rank changed after removing a sibling leaf",
                        format!("removed leaf {} (neighbor {})", u + 1, q + 1),
                        self.rank(),
                        r,
                    );
                }
                checked += 1;
            }
        }
        Outcome::pass(format!("{checked} sibling-leaf removals"))
    }

    fn check_star_det(&self) -> Outcome {
        if !self.t.is_star() {
            return Outcome::pass("not a star");
        }
        let family = match star_family(self.t) {
            Ok(f) => f,
            Err(e) => return Outcome::fail("star family failed", "family", "a star family", e),
        };
        for b in &family {
            let det = bareiss_det(&big_submatrix(&self.max, &b.pairs, &b.pairs)).expect("square");
            if det != -BigInt::one() {
                return Outcome::fail("star basis det != -1", Self::basis_label(b), -1, det);
            }
        }
        Outcome::pass(format!("{} star bases, det = -1", family.len()))
    }

    fn check_star_eigen(&self) -> Outcome {
        if !self.t.is_star() {
            return Outcome::pass("not a star");
        }
        star_eigen_outcome(self.n, &self.max_big, self.opts)
    }

    fn check_four_point(&self) -> Outcome {
        let d = all_pairs_distances(self.t);
        let n = self.n;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !check_four_point(&d, w, x, y, z) {
                            return Outcome::fail(
                                "four-point condition violated",
                                format!("(w,x,y,z) = ({},{},{},{})", w + 1, x + 1, y + 1, z + 1),
                                "max attained twice",
                                "strict max",
                            );
                        }
                    }
                }
            }
        }
        Outcome::pass(format!("{} quadruples", n.pow(4)))
    }

    fn check_parity(&self) -> Outcome {
        let min = build_matrix(self.t, MatrixKind::Min4pc).expect("n >= 2");
        let st = build_matrix(self.t, MatrixKind::Steiner2).expect("n >= 2");
        let dim = self.max.dim();
        for r in 0..dim {
            for c in 0..dim {
                let (hi, lo, s) = (self.max.at(r, c), min.at(r, c), st.at(r, c));
                if (hi - lo) % 2 != 0 || hi + lo != 2 * s || hi < lo {
                    let (a, b) = (self.max.index().pair_at(r).unwrap(), self.max.index().pair_at(c).unwrap());
                    return Outcome::fail(
                        "averaging identity violated",
                        format!("entry ({a}, {b}); max {hi}, min {lo}"),
                        format!("2*steiner = {}", 2 * s),
                        hi + lo,
                    );
                }
            }
        }
        Outcome::pass(format!("{} entries", dim * dim))
    }
}

fn star_eigen_outcome(n: usize, max_big: &BigIntMatrix, opts: &VerifyOptions) -> Outcome {
    let computed = char_poly(max_big).expect("square");
    let predicted = predicted_star_char_poly(n);
    let summary = format!("quadratic factor {}", CharPoly {
        coefficients: predicted.coefficients[predicted.degree() - 2..].to_vec(),
    });
    if computed != predicted {
        return Outcome::fail(summary, "characteristic polynomial", &predicted, &computed);
    }
    let (big, small) = predicted_star_roots(n);
    let trace: BigInt = (0..max_big.rows()).map(|i| max_big[(i, i)].clone()).sum();
    let m = n as i64 - 1;
    if trace != BigInt::from(2 * m * m) {
        return Outcome::fail(summary, "trace vs sum of nonzero eigenvalues", 2 * m * m, trace);
    }
    if max_big.rows() <= opts.float_max_dim.max(n * (n - 1) / 2) {
        let eig = symmetric_eigenvalues(&max_big.to_f64_rows());
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if !rel_close(hi, big, 1e-9) || !rel_close(lo, small, 1e-9) {
            return Outcome::fail(
                summary,
                "floating eigensolver extremes",
                format!("{big}, {small}"),
                format!("{hi}, {lo}"),
            );
        }
    }
    Outcome::pass(summary)
}

/// Runs the requested checks on one tree. Checks that need `n >= 3` are
/// omitted for smaller trees.
pub fn verify_tree(t: &Tree, checks: &[CheckId]) -> Vec<TheoremCheck> {
    verify_tree_with(t, checks, &VerifyOptions::default())
}

pub fn verify_tree_with(t: &Tree, checks: &[CheckId], opts: &VerifyOptions) -> Vec<TheoremCheck> {
    if t.n() < 2 {
        return Vec::new();
    }
    let ctx = TreeContext::new(t, opts);
    checks
        .iter()
        .filter(|id| t.n() >= 3 || !id.needs_three_vertices())
        .map(|&id| {
            let start = Instant::now();
            let outcome = ctx.run(id);
            TheoremCheck {
                id,
                pass: outcome.failure.is_none(),
                summary: outcome.summary,
                witness: outcome.failure.map(|f| ctx.witness(f)),
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

/// Exact and floating checks of the star spectrum for `S_n`, `n >= 3`.
/// At `n = 3` the exact polynomial is also compared with the one computed
/// from the path `1-2-3`, which is the same tree up to labels.
pub fn verify_star_eigen(n: usize) -> TheoremCheck {
    assert!(n >= 3, "stars need n >= 3");
    let start = Instant::now();
    let t = Tree::star(n);
    let m = BigIntMatrix::from_pair_matrix(&build_matrix(&t, MatrixKind::Max4pc).expect("n >= 3"));
    let mut outcome = star_eigen_outcome(n, &m, &VerifyOptions::default());
    if n == 3 && outcome.failure.is_none() {
        let path = BigIntMatrix::from_pair_matrix(&build_matrix(&Tree::path(3), MatrixKind::Max4pc).unwrap());
        let from_path = char_poly(&path).expect("square");
        let from_star = char_poly(&m).expect("square");
        if from_path != from_star {
            outcome = Outcome::fail(outcome.summary, "P3 vs S3 characteristic polynomial", from_star, from_path);
        }
    }
    let witness = outcome.failure.map(|(location, expected, computed)| Witness {
        n,
        prufer: vec![1; n - 2],
        location,
        expected,
        computed,
    });
    TheoremCheck { id: CheckId::StarEigen, pass: witness.is_none(), summary: outcome.summary, witness, elapsed: start.elapsed() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
}

impl FromStr for SampleSpec {
    type Err = String;

    /// `n:count:seed`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || format!("expected n:count:seed, found {s:?}");
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(SampleSpec {
            n: parts[0].parse().map_err(|_| bad())?,
            count: parts[1].parse().map_err(|_| bad())?,
            seed: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDescriptor {
    /// Every labeled tree with `3 <= n <= exhaustive_max_n`.
    pub exhaustive_max_n: usize,
    pub samples: Vec<SampleSpec>,
    pub trees: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub id: CheckId,
    pub pass: usize,
    pub fail: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub corpus: CorpusDescriptor,
    pub checks: Vec<CheckTally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, f64>>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.fail).sum()
    }

    pub fn tally(&self, id: CheckId) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_exhaustive_n: usize,
    pub samples: Vec<SampleSpec>,
    pub checks: Vec<CheckId>,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Witnesses kept per check in the report.
    pub max_witnesses: usize,
    pub include_timing: bool,
    pub options: VerifyOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_exhaustive_n: 5,
            samples: Vec::new(),
            checks: CheckId::ALL.to_vec(),
            jobs: None,
            max_witnesses: 5,
            include_timing: false,
            options: VerifyOptions::default(),
        }
    }
}

/// The corpus in report order: exhaustive trees by `n` then Prüfer order,
/// then each sample in the order given.
pub fn corpus(max_exhaustive_n: usize, samples: &[SampleSpec]) -> Vec<Tree> {
    let mut trees = Vec::new();
    for n in 3..=max_exhaustive_n {
        trees.extend(all_labeled_trees(n).map(|(_, t)| t));
    }
    for s in samples {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        trees.extend((0..s.count).map(|_| random_tree(s.n, rng.next_u64())));
    }
    trees
}

pub fn sweep(cfg: &SweepConfig) -> VerifyReport {
    let trees = corpus(cfg.max_exhaustive_n, &cfg.samples);
    let run = || -> Vec<Vec<TheoremCheck>> {
        trees.par_iter().map(|t| verify_tree_with(t, &cfg.checks, &cfg.options)).collect()
    };
    let results = match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };

    let mut tallies: Vec<CheckTally> =
        cfg.checks.iter().map(|&id| CheckTally { id, pass: 0, fail: 0, witnesses: Vec::new() }).collect();
    let mut timing: BTreeMap<String, f64> = BTreeMap::new();
    for per_tree in results {
        for check in per_tree {
            let tally = tallies.iter_mut().find(|t| t.id == check.id).expect("requested check");
            if check.pass {
                tally.pass += 1;
            } else {
                tally.fail += 1;
                if tally.witnesses.len() < cfg.max_witnesses {
                    tally.witnesses.extend(check.witness);
                }
            }
            *timing.entry(check.id.to_string()).or_default() += check.elapsed.as_secs_f64() * 1e3;
        }
    }
    VerifyReport {
        corpus: CorpusDescriptor {
            exhaustive_max_n: cfg.max_exhaustive_n,
            samples: cfg.samples.clone(),
            trees: trees.len(),
        },
        checks: tallies,
        timing_ms: cfg.include_timing.then_some(timing),
    }
}
