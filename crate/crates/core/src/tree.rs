//! Labeled trees: parsing, Prüfer coding, distances and Steiner subtree sizes.
//!
//! Vertices are `0..n` inside the library. Every textual surface (edge-list
//! files, Prüfer witnesses, reports) uses the 1-based labels `1..=n`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed input on line {line}: {msg}")]
    MalformedInput { line: usize, msg: String },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
}

/// A tree on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    /// Sorted list of edges, each stored as `(lo, hi)`.
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Tree {
    /// Builds a tree from 0-based edges, validating the tree invariants.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::NotATree("a tree needs at least one vertex".into()));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::LabelOutOfRange { label: w + 1, n });
                }
            }
            if u == v {
                return Err(TreeError::NotATree(format!("self-loop at vertex {}", u + 1)));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::NotATree(format!(
                "duplicate edge {}-{}",
                w[0].0 + 1,
                w[0].1 + 1
            )));
        }
        if norm.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "expected {} edges, found {}",
                n - 1,
                norm.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = Tree { n, edges: norm, adj };
        // n - 1 distinct edges plus connectivity implies acyclic.
        let reached = tree.bfs_distances(0).iter().filter(|d| d.is_some()).count();
        if reached != n {
            return Err(TreeError::NotATree("graph is disconnected".into()));
        }
        Ok(tree)
    }

    /// The single-vertex tree.
    pub fn singleton() -> Self {
        Tree { n: 1, edges: Vec::new(), adj: vec![Vec::new()] }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::from_edges(n, &edges).expect("path is a tree")
    }

    /// Star on `n` vertices with center `0`.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Tree::from_edges(n, &edges).expect("star is a tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_pendant(&self, v: Vertex) -> bool {
        self.degree(v) == 1
    }

    /// A star: `n >= 3` and one vertex adjacent to all others.
    pub fn star_center(&self) -> Option<Vertex> {
        if self.n < 3 {
            return None;
        }
        (0..self.n).find(|&v| self.degree(v) == self.n - 1)
    }

    pub fn is_star(&self) -> bool {
        self.star_center().is_some()
    }

    fn bfs_distances(&self, root: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS parent pointers when the tree is rooted at `root`.
    pub fn parents_from(&self, root: Vertex) -> Vec<Option<Vertex>> {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Vertices of the component of `T - removed` that contains `start`.
    pub fn component_without(&self, removed: Vertex, start: Vertex) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        if start == removed {
            return inside;
        }
        inside[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if w != removed && !inside[w] {
                    inside[w] = true;
                    stack.push(w);
                }
            }
        }
        inside
    }

    /// Deletes the pendant vertex `leaf`; labels above it shift down by one.
    pub fn remove_leaf(&self, leaf: Vertex) -> Result<Tree, TreeError> {
        if leaf >= self.n || self.n < 2 || !self.is_pendant(leaf) {
            return Err(TreeError::NotATree(format!("vertex {} is not a pendant", leaf + 1)));
        }
        let relabel = |v: Vertex| if v > leaf { v - 1 } else { v };
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != leaf && v != leaf)
            .map(|&(u, v)| (relabel(u), relabel(v)))
            .collect();
        Tree::from_edges(self.n - 1, &edges)
    }

    /// Edge-list text: `n` on the first line, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T(n={}; ", self.n)?;
        let parts: Vec<_> = self.edges.iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
        write!(f, "{})", parts.join(","))
    }
}

/// Parses the edge-list format. Blank lines and `#` comments are skipped.
pub fn parse_tree(text: &str) -> Result<Tree, TreeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first_line, header) = lines.next().ok_or(TreeError::MalformedInput {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| TreeError::MalformedInput {
        line: first_line,
        msg: format!("expected vertex count, found {header:?}"),
    })?;
    if n == 0 {
        return Err(TreeError::MalformedInput { line: first_line, msg: "vertex count must be positive".into() });
    }

    let mut edges = Vec::new();
    for (line, body) in lines {
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(TreeError::MalformedInput {
                line,
                msg: format!("expected \"u v\", found {body:?}"),
            });
        }
        let mut ends = [0usize; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            let label: usize = field.parse().map_err(|_| TreeError::MalformedInput {
                line,
                msg: format!("bad vertex label {field:?}"),
            })?;
            if label == 0 || label > n {
                return Err(TreeError::LabelOutOfRange { label, n });
            }
            *slot = label - 1;
        }
        if ends[0] == ends[1] {
            return Err(TreeError::MalformedInput { line, msg: "self-loop".into() });
        }
        edges.push((ends[0], ends[1]));
    }
    Tree::from_edges(n, &edges)
}

/// Parses the inline form `"1-2,2-3"`; `n` is the largest label mentioned.
pub fn parse_inline_edges(text: &str) -> Result<Tree, TreeError> {
    let mut edges = Vec::new();
    let mut n = 1;
    for (i, item) in text.split(',').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let malformed = || TreeError::MalformedInput { line: 1, msg: format!("bad edge #{}: {item:?}", i + 1) };
        let (a, b) = item.split_once('-').ok_or_else(malformed)?;
        let u: usize = a.trim().parse().map_err(|_| malformed())?;
        let v: usize = b.trim().parse().map_err(|_| malformed())?;
        if u == 0 || v == 0 {
            return Err(TreeError::LabelOutOfRange { label: 0, n: u.max(v) });
        }
        n = n.max(u).max(v);
        edges.push((u - 1, v - 1));
    }
    Tree::from_edges(n, &edges)
}

/// Dense all-pairs hop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<i64>,
}

impl DistanceTable {
    #[inline]
    pub fn get(&self, i: Vertex, j: Vertex) -> i64 {
        self.d[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> i64 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// One BFS per vertex.
pub fn all_pairs_distances(t: &Tree) -> DistanceTable {
    let n = t.n();
    let mut d = vec![0i64; n * n];
    for root in 0..n {
        for (v, dist) in t.bfs_distances(root).into_iter().enumerate() {
            d[root * n + v] = i64::from(dist.expect("tree is connected"));
        }
    }
    DistanceTable { n, d }
}

/// The three pairings `d(w,x)+d(y,z)`, `d(w,y)+d(x,z)`, `d(w,z)+d(x,y)`.
#[inline]
pub fn four_point_sums(d: &DistanceTable, w: Vertex, x: Vertex, y: Vertex, z: Vertex) -> [i64; 3] {
    [
        d.get(w, x) + d.get(y, z),
        d.get(w, y) + d.get(x, z),
        d.get(w, z) + d.get(x, y),
    ]
}

/// True iff the largest of the three pairing sums is attained at least twice.
pub fn check_four_point(d: &DistanceTable, w: Vertex, x: Vertex, y: Vertex, z: Vertex) -> bool {
    let mut s = four_point_sums(d, w, x, y, z);
    s.sort_unstable();
    s[1] == s[2]
}

/// Edge count of the union of all pairwise paths between members of `s`.
pub fn steiner_size(t: &Tree, s: &[Vertex]) -> usize {
    SteinerOracle::new(t).size(s)
}

/// Caches parent pointers for every root so repeated Steiner queries are cheap.
#[derive(Debug, Clone)]
pub struct SteinerOracle {
    n: usize,
    parents: Vec<Vec<Option<Vertex>>>,
}

impl SteinerOracle {
    pub fn new(t: &Tree) -> Self {
        SteinerOracle { n: t.n(), parents: (0..t.n()).map(|r| t.parents_from(r)).collect() }
    }

    pub fn size(&self, s: &[Vertex]) -> usize {
        let mut used = BTreeSet::new();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                let parent = &self.parents[a];
                let mut v = b;
                while let Some(p) = parent[v] {
                    used.insert((v.min(p), v.max(p)));
                    v = p;
                }
            }
        }
        debug_assert!(used.len() < self.n.max(1));
        used.len()
    }
}

/// Pendant (degree-1) vertices and their neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafProfile {
    pub p: usize,
    pub pendants: Vec<Vertex>,
    pub quasi_pendants: Vec<Vertex>,
}

pub fn leaf_profile(t: &Tree) -> LeafProfile {
    let pendants: Vec<_> = (0..t.n()).filter(|&v| t.is_pendant(v)).collect();
    let quasi: BTreeSet<_> = pendants.iter().map(|&v| t.neighbors(v)[0]).collect();
    LeafProfile { p: pendants.len(), pendants, quasi_pendants: quasi.into_iter().collect() }
}

/// Prüfer sequence of a tree with `n >= 2` (0-based labels).
pub fn prufer_encode(t: &Tree) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return Vec::new();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut seq = Vec::with_capacity(n - 2);
    let mut leaves: BTreeSet<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    for _ in 0..n - 2 {
        let leaf = *leaves.iter().next().expect("a tree with >= 2 vertices has a leaf");
        leaves.remove(&leaf);
        removed[leaf] = true;
        let parent = t.neighbors(leaf).iter().copied().find(|&w| !removed[w]).unwrap();
        seq.push(parent);
        degree[parent] -= 1;
        if degree[parent] == 1 {
            leaves.insert(parent);
        }
    }
    seq
}

/// Decodes a Prüfer sequence into the tree on `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[Vertex]) -> Result<Tree, TreeError> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(TreeError::LabelOutOfRange { label: bad + 1, n });
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let mut rest = leaves.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    Tree::from_edges(n, &edges)
}

/// Uniform labeled tree drawn through a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Tree {
    match n {
        0 | 1 => Tree::singleton(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq: Vec<_> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq).expect("labels drawn in range")
        }
    }
}

/// Iterates over all `n^(n-2)` labeled trees on `n >= 2` vertices in
/// lexicographic Prüfer order.
pub fn all_labeled_trees(n: usize) -> impl Iterator<Item = (Vec<Vertex>, Tree)> {
    assert!(n >= 2, "labeled tree enumeration needs n >= 2");
    let len = n - 2;
    let total = (n as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        let tree = prufer_decode(&seq).expect("in-range sequence");
        (seq, tree)
    })
}
