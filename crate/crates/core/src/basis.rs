//! Block structure of the line graph of a tree and the block-traversal that
//! selects `2(n-p)` rows spanning the row space of the Max4PC matrix.
//!
//! Each internal vertex `c` of `T` gives one block of `LG(T)`: the clique of
//! edges incident to `c`. Two blocks meet in the edge joining their centers,
//! so the blocks and their shared vertices form a tree isomorphic to `T`
//! restricted to its internal vertices. The traversal never materializes
//! `LG(T)`. It marks blocks consumed instead; a shared edge is a live cut
//! vertex exactly while both of its blocks are unconsumed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pair_matrix::Pair;
use crate::tree::{leaf_profile, Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("the traversal needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("vertex {} is not a pendant vertex", .0 + 1)]
    NotALeaf(Vertex),
    #[error("star trees are handled by the star basis")]
    IsAStar,
    #[error("tree is not a star")]
    NotAStar,
    #[error("invalid star basis indices: {0}")]
    InvalidStarIndices(String),
}

/// The clique of `LG(T)` formed by the edges around one internal vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub center: Vertex,
    /// Sorted.
    pub members: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    n: usize,
    /// Sorted by center.
    pub blocks: Vec<Block>,
    /// Edges of `T` with both endpoints internal, sorted.
    pub cut_vertices: Vec<Pair>,
    block_of: Vec<Option<usize>>,
}

impl BlockTree {
    pub fn block_at(&self, center: Vertex) -> Option<&Block> {
        self.block_of.get(center).copied().flatten().map(|b| &self.blocks[b])
    }

    /// Centers of the blocks adjacent to the block at `center`.
    pub fn adjacent_blocks(&self, center: Vertex) -> Vec<Vertex> {
        self.cut_vertices.iter().filter_map(|e| e.other(center)).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn block_tree(t: &Tree) -> Result<BlockTree, BasisError> {
    let n = t.n();
    if n < 3 {
        return Err(BasisError::TooSmall(n));
    }
    let mut blocks = Vec::new();
    let mut block_of = vec![None; n];
    for c in (0..n).filter(|&v| !t.is_pendant(v)) {
        block_of[c] = Some(blocks.len());
        let members = t.neighbors(c).iter().map(|&w| Pair::new(c, w)).collect();
        blocks.push(Block { center: c, members });
    }
    let cut_vertices = t
        .edges()
        .iter()
        .filter(|&&(u, v)| !t.is_pendant(u) && !t.is_pendant(v))
        .map(|&(u, v)| Pair::new(u, v))
        .collect();
    Ok(BlockTree { n, blocks, cut_vertices, block_of })
}

/// How the traversal resolves its free choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoicePolicy {
    /// Lexicographically smallest candidate.
    Min,
    /// Uniform choice from a ChaCha8 stream seeded with the given value.
    Random(u64),
    /// The first candidate found in the list wins; otherwise the smallest.
    /// Replays a hand-traced run.
    Prefer(Vec<Pair>),
}

impl fmt::Display for ChoicePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoicePolicy::Min => f.write_str("min"),
            ChoicePolicy::Random(seed) => write!(f, "random:{seed}"),
            ChoicePolicy::Prefer(pairs) => {
                let parts: Vec<String> = pairs.iter().map(Pair::to_string).collect();
                write!(f, "prefer:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for ChoicePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "min" {
            return Ok(ChoicePolicy::Min);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed.parse().map(ChoicePolicy::Random).map_err(|_| format!("bad seed in {s:?}"));
        }
        if let Some(list) = s.strip_prefix("prefer:") {
            let pairs = list
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<Pair>, _>>()?;
            return Ok(ChoicePolicy::Prefer(pairs));
        }
        Err(format!("unknown policy {s:?} (expected min, random:SEED or prefer:i-j,...)"))
    }
}

impl Serialize for ChoicePolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChoicePolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

struct Chooser<'a> {
    policy: &'a ChoicePolicy,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Chooser<'a> {
    fn new(policy: &'a ChoicePolicy) -> Self {
        let rng = match policy {
            ChoicePolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        Chooser { policy, rng }
    }

    /// `candidates` is sorted and nonempty.
    fn choose(&mut self, candidates: &[Pair]) -> usize {
        match self.policy {
            ChoicePolicy::Min => 0,
            ChoicePolicy::Random(_) => self.rng.as_mut().unwrap().gen_range(0..candidates.len()),
            ChoicePolicy::Prefer(list) => list
                .iter()
                .find_map(|want| candidates.iter().position(|c| c == want))
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// Starting vertex plus its symmetric difference with a cut vertex.
    #[serde(rename = "2c")]
    CutVertex,
    /// Starting vertex plus another member of a block without cut vertices.
    #[serde(rename = "3b")]
    Terminal,
    /// The two rows of the star basis.
    #[serde(rename = "star")]
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockContribution {
    #[serde(with = "one_based")]
    pub block_internal_vertex: Vertex,
    pub step: Step,
    pub pairs: [Pair; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSet {
    #[serde(with = "one_based")]
    pub start_leaf: Vertex,
    pub policy: ChoicePolicy,
    pub pairs: Vec<Pair>,
    pub provenance: Vec<BlockContribution>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sorted_pairs(&self) -> Vec<Pair> {
        let mut p = self.pairs.clone();
        p.sort_unstable();
        p
    }
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*v as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = u64::deserialize(d)?;
        if v == 0 {
            return Err(serde::de::Error::custom("vertex labels start at 1"));
        }
        Ok(v as usize - 1)
    }
}

/// The basis `{{c,i},{j,k}}` of a star with center `c`.
pub fn star_basis(t: &Tree, i: Vertex, j: Vertex, k: Vertex) -> Result<BasisSet, BasisError> {
    let c = t.star_center().ok_or(BasisError::NotAStar)?;
    let n = t.n();
    if i >= n || j >= n || k >= n || i == c || j == c || k == c || j == k {
        return Err(BasisError::InvalidStarIndices(format!(
            "need leaves i, j != k (center {}), got ({}, {}, {})",
            c + 1,
            i + 1,
            j + 1,
            k + 1
        )));
    }
    let pairs = [Pair::new(c, i), Pair::new(j, k)];
    Ok(BasisSet {
        start_leaf: i,
        policy: ChoicePolicy::Min,
        pairs: pairs.to_vec(),
        provenance: vec![BlockContribution { block_internal_vertex: c, step: Step::Star, pairs }],
    })
}

/// Runs the block traversal from the edge at `start_leaf`.
pub fn build_basis(t: &Tree, start_leaf: Vertex, policy: &ChoicePolicy) -> Result<BasisSet, BasisError> {
    let n = t.n();
    if n < 3 {
        return Err(BasisError::TooSmall(n));
    }
    if start_leaf >= n || !t.is_pendant(start_leaf) {
        return Err(BasisError::NotALeaf(start_leaf));
    }
    if t.is_star() {
        return Err(BasisError::IsAStar);
    }

    let internal: Vec<bool> = (0..n).map(|v| !t.is_pendant(v)).collect();
    let mut consumed = vec![false; n];
    let mut chooser = Chooser::new(policy);
    let mut next_start: Vec<Pair> = Vec::new();
    let mut pairs = Vec::new();
    let mut provenance = Vec::new();

    let mut start = Pair::new(start_leaf, t.neighbors(start_leaf)[0]);
    loop {
        // The unique unconsumed block containing the starting vertex.
        let center = [start.lo(), start.hi()]
            .into_iter()
            .find(|&v| internal[v] && !consumed[v])
            .expect("starting vertex lies in an unconsumed block");
        let members: Vec<Pair> = t.neighbors(center).iter().map(|&w| Pair::new(center, w)).collect();
        let live_cuts: Vec<Pair> = members
            .iter()
            .copied()
            .filter(|e| {
                let w = e.other(center).unwrap();
                internal[w] && !consumed[w]
            })
            .collect();
        consumed[center] = true;

        if !live_cuts.is_empty() {
            let pick = chooser.choose(&live_cuts);
            let chosen = live_cuts[pick];
            next_start.extend(live_cuts.iter().enumerate().filter(|&(k, _)| k != pick).map(|(_, &e)| e));
            let diff = start
                .symmetric_difference(chosen)
                .expect("starting and chosen vertex share exactly their block's center");
            let added = [start, diff];
            pairs.extend(added);
            provenance.push(BlockContribution { block_internal_vertex: center, step: Step::CutVertex, pairs: added });
            start = chosen;
        } else {
            let others: Vec<Pair> = members.into_iter().filter(|&e| e != start).collect();
            let chosen = others[chooser.choose(&others)];
            let added = [start, chosen];
            pairs.extend(added);
            provenance.push(BlockContribution { block_internal_vertex: center, step: Step::Terminal, pairs: added });
            match next_start.pop() {
                Some(s) => start = s,
                None => break,
            }
        }
    }

    Ok(BasisSet { start_leaf, policy: policy.clone(), pairs, provenance })
}

/// Every star basis `{{c,i},{j,k}}` with leaves `i <= j < k`.
pub fn star_family(t: &Tree) -> Result<Vec<BasisSet>, BasisError> {
    let c = t.star_center().ok_or(BasisError::NotAStar)?;
    let leaves: Vec<Vertex> = (0..t.n()).filter(|&v| v != c).collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (a, &i) in leaves.iter().enumerate() {
        for (b, &j) in leaves.iter().enumerate().skip(a) {
            for &k in &leaves[b + 1..] {
                let basis = star_basis(t, i, j, k)?;
                if seen.insert(basis.sorted_pairs()) {
                    out.push(basis);
                }
            }
        }
    }
    Ok(out)
}

/// One deterministic run per pendant start, then seeded random runs until
/// `max_runs` runs have been made. Duplicate pair sets are dropped. Stars
/// return their full family of basis pairs instead.
pub fn enumerate_family(t: &Tree, max_runs: usize, seed: u64) -> Result<Vec<BasisSet>, BasisError> {
    if t.n() < 3 {
        return Err(BasisError::TooSmall(t.n()));
    }
    if t.is_star() {
        return star_family(t);
    }
    let leaves = leaf_profile(t).pendants;
    let mut runs = Vec::new();
    for &leaf in &leaves {
        runs.push(build_basis(t, leaf, &ChoicePolicy::Min)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while runs.len() < max_runs {
        let leaf = leaves[rng.gen_range(0..leaves.len())];
        let run_seed = rng.next_u64();
        runs.push(build_basis(t, leaf, &ChoicePolicy::Random(run_seed))?);
    }
    let mut seen = BTreeSet::new();
    runs.retain(|b| seen.insert(b.sorted_pairs()));
    Ok(runs)
}
