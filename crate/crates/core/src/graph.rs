//! Simple undirected graphs on 1-indexed vertices, isomorphism testing,
//! canonical labelling, local complementation and LC orbits.
//!
//! Vertices are numbered `1..=n` at every public boundary. Internally the
//! adjacency is a fixed array of 16-bit neighbourhood masks, so [`Graph`] is
//! `Copy` and cheap to hash.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 16;

/// Default cap on the number of representatives an orbit search may visit.
pub const DEFAULT_ORBIT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..={MAX_VERTICES}")]
    VertexCount(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("mapping is not a bijection on 1..={0}")]
    NotBijection(usize),
    #[error("orbit enumeration exceeded budget of {budget} graphs")]
    BudgetExceeded { budget: usize },
    #[error("full LC partition supports 2..=7 vertices, got {0}")]
    PartitionSize(usize),
}

/// An undirected simple graph `G = (V, E)` with `V = {1, ..., n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    adj: [u16; MAX_VERTICES],
}

impl Graph {
    /// Builds a graph from 1-indexed edge pairs. Duplicates and reversed pairs
    /// collapse into one edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (i, j) in edges {
            g.check_vertex(i)?;
            g.check_vertex(j)?;
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            g.adj[i - 1] |= 1 << (j - 1);
            g.adj[j - 1] |= 1 << (i - 1);
        }
        Ok(g)
    }

    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Self {
            n: n as u8,
            adj: [0; MAX_VERTICES],
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Edges as sorted 1-indexed pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adj[i] >> j & 1 == 1 {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.masks().iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (1..=self.n()).contains(&i) && (1..=self.n()).contains(&j) && self.adj[i - 1] >> (j - 1) & 1 == 1
    }

    /// The neighbourhood `N_a`, ascending.
    pub fn neighbors(&self, a: usize) -> Result<Vec<usize>, GraphError> {
        Ok(bits(self.neighbor_mask(a)?).map(|b| b + 1).collect())
    }

    /// Neighbourhood of `a` as a 0-indexed bitmask.
    pub fn neighbor_mask(&self, a: usize) -> Result<u16, GraphError> {
        self.check_vertex(a)?;
        Ok(self.adj[a - 1])
    }

    pub fn degree(&self, a: usize) -> Result<usize, GraphError> {
        Ok(self.neighbor_mask(a)?.count_ones() as usize)
    }

    /// Degrees of vertices `1..=n` in vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        self.masks().iter().map(|m| m.count_ones() as usize).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let full: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let mut next = 0u16;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    /// Local complementation at `a`: toggles every edge between two
    /// neighbours of `a`. Edges incident to `a` are untouched.
    pub fn local_complement(&self, a: usize) -> Result<Self, GraphError> {
        let nbrs = self.neighbor_mask(a)?;
        let mut out = *self;
        for b in bits(nbrs) {
            // b is not its own neighbour, so strip it from the toggle set
            out.adj[b] ^= nbrs & !(1 << b);
        }
        Ok(out)
    }

    /// The image of this graph under `p`: edge `{i, j}` becomes `{p(i), p(j)}`.
    pub fn relabel(&self, p: &VertexPermutation) -> Result<Self, GraphError> {
        if p.len() != self.n() {
            return Err(GraphError::NotBijection(self.n()));
        }
        let mut out = Self::empty(self.n())?;
        for i in 0..self.n() {
            let pi = p.image0(i);
            for j in bits(self.adj[i]) {
                out.adj[pi] |= 1 << p.image0(j);
            }
        }
        Ok(out)
    }

    /// Upper-triangle adjacency bits in colexicographic pair order:
    /// `{1,2}, {1,3}, {2,3}, {1,4}, ...`, with `{1,2}` as the most significant bit.
    pub fn adjacency_key(&self) -> u128 {
        let n = self.n();
        let total = n * (n - 1) / 2;
        let mut key = 0u128;
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if self.adj[i] >> j & 1 == 1 {
                    key |= 1u128 << (total - 1 - idx);
                }
                idx += 1;
            }
        }
        key
    }

    pub(crate) fn masks(&self) -> &[u16] {
        &self.adj[..self.n()]
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n() {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, self)
    }
}

/// Edges formatted as `1-2 1-3 2-3`.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = self.edges();
        if edges.is_empty() {
            return write!(f, "(no edges)");
        }
        for (k, (i, j)) in edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}-{j}")?;
        }
        Ok(())
    }
}

fn bits(mut mask: u16) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// A bijection `f` on `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPermutation {
    // 0-indexed images
    map: Vec<usize>,
}

impl VertexPermutation {
    /// `mapping[k]` is the image of vertex `k + 1` (1-indexed values).
    pub fn new(mapping: Vec<usize>) -> Result<Self, GraphError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m == 0 || m > n || seen[m - 1] {
                return Err(GraphError::NotBijection(n));
            }
            seen[m - 1] = true;
        }
        Ok(Self {
            map: mapping.into_iter().map(|m| m - 1).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image of 1-indexed vertex `v`.
    pub fn apply(&self, v: usize) -> usize {
        self.map[v - 1] + 1
    }

    /// 1-indexed images of `1..=n`.
    pub fn mapping(&self) -> Vec<usize> {
        self.map.iter().map(|m| m + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    fn image0(&self, v: usize) -> usize {
        self.map[v]
    }
}

/// Per-vertex invariant used to prune the isomorphism search: own degree
/// plus the sorted degrees of the neighbours.
fn vertex_signatures(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let deg = g.degrees();
    g.masks()
        .iter()
        .enumerate()
        .map(|(v, &m)| {
            let mut nd: Vec<usize> = bits(m).map(|b| deg[b]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect()
}

/// Returns a witness `f` with `{a,b} ∈ E(g1) ⇔ {f(a),f(b)} ∈ E(g2)` when the
/// graphs are isomorphic.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Option<VertexPermutation> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let s1 = vertex_signatures(g1);
    let s2 = vertex_signatures(g2);
    let mut d1: Vec<_> = s1.clone();
    let mut d2: Vec<_> = s2.clone();
    d1.sort();
    d2.sort();
    if d1 != d2 {
        return None;
    }

    let n = g1.n();
    let mut map = vec![usize::MAX; n];
    let mut used = 0u16;
    if iso_extend(g1, g2, &s1, &s2, 0, &mut map, &mut used) {
        Some(VertexPermutation { map })
    } else {
        None
    }
}

fn iso_extend(
    g1: &Graph,
    g2: &Graph,
    s1: &[(usize, Vec<usize>)],
    s2: &[(usize, Vec<usize>)],
    v: usize,
    map: &mut [usize],
    used: &mut u16,
) -> bool {
    let n = g1.n();
    if v == n {
        return true;
    }
    for w in 0..n {
        if *used >> w & 1 == 1 || s1[v] != s2[w] {
            continue;
        }
        let consistent = (0..v).all(|u| {
            let e1 = g1.adj[v] >> u & 1;
            let e2 = g2.adj[w] >> map[u] & 1;
            e1 == e2
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        *used |= 1 << w;
        if iso_extend(g1, g2, s1, s2, v + 1, map, used) {
            return true;
        }
        *used &= !(1 << w);
        map[v] = usize::MAX;
    }
    false
}

/// The relabelling of `g` with the largest [`Graph::adjacency_key`].
///
/// Equivalently, the lexicographically least sorted edge list among all
/// relabellings when pairs are ordered colexicographically. Two graphs have
/// the same canonical form iff they are isomorphic.
pub fn canonical_form(g: &Graph) -> Graph {
    canonical_labelling(g).0
}

/// Canonical form together with a permutation `p` such that
/// `g.relabel(p) == canonical_form(g)`.
pub fn canonical_labelling(g: &Graph) -> (Graph, VertexPermutation) {
    let n = g.n();
    let mut search = CanonSearch {
        g,
        n,
        order: vec![0; n],
        best_order: (0..n).collect(),
        best_cols: vec![0; n],
        cols: vec![0; n],
        have_best: false,
    };
    search.descend(0, 0);

    // best_order[pos] = original vertex placed at position pos
    let mut map = vec![0; n];
    for (pos, &v) in search.best_order.iter().enumerate() {
        map[v] = pos;
    }
    let perm = VertexPermutation { map };
    let canon = g.relabel(&perm).expect("permutation sized to graph");
    (canon, perm)
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    order: Vec<usize>,
    best_order: Vec<usize>,
    // column k holds adjacency of position k to positions 0..k, MSB = position 0
    best_cols: Vec<u16>,
    cols: Vec<u16>,
    have_best: bool,
}

impl CanonSearch<'_> {
    fn descend(&mut self, pos: usize, used: u16) {
        if pos == self.n {
            if !self.have_best || self.cols > self.best_cols {
                self.best_order.copy_from_slice(&self.order);
                self.best_cols.copy_from_slice(&self.cols);
                self.have_best = true;
            }
            return;
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 {
                continue;
            }
            let mut col = 0u16;
            for p in 0..pos {
                col <<= 1;
                col |= self.g.adj[v] >> self.order[p] & 1;
            }
            self.order[pos] = v;
            self.cols[pos] = col;
            if self.have_best && self.cols[..=pos] < self.best_cols[..=pos] {
                continue;
            }
            self.descend(pos + 1, used | (1 << v));
        }
    }
}

/// Local-complementation orbit of a graph modulo isomorphism.
#[derive(Debug, Clone)]
pub struct LcOrbit {
    /// Canonical representatives in breadth-first discovery order; the first
    /// entry is the canonical form of the start graph.
    pub representatives: Vec<Graph>,
    /// `(from, vertex, to)` transitions as indices into `representatives`.
    pub moves: Vec<(usize, usize, usize)>,
    index: HashMap<Graph, usize>,
}

impl LcOrbit {
    pub fn size(&self) -> usize {
        self.representatives.len()
    }

    /// Whether some member of the orbit is isomorphic to `g`.
    pub fn contains(&self, g: &Graph) -> bool {
        self.index.contains_key(&canonical_form(g))
    }

    pub fn is_disjoint(&self, other: &LcOrbit) -> bool {
        let (small, large) = if self.size() <= other.size() {
            (self, other)
        } else {
            (other, self)
        };
        small.representatives.iter().all(|g| !large.index.contains_key(g))
    }
}

/// Breadth-first closure of `g` under local complementation at every vertex,
/// deduplicated by canonical form.
pub fn lc_orbit(g: &Graph, max_size: usize) -> Result<LcOrbit, GraphError> {
    let start = canonical_form(g);
    let mut representatives = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut moves = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(from) = queue.pop_front() {
        let current = representatives[from];
        for a in 1..=current.n() {
            let next = canonical_form(&current.local_complement(a)?);
            let to = match index.get(&next) {
                Some(&to) => to,
                None => {
                    if representatives.len() >= max_size {
                        return Err(GraphError::BudgetExceeded { budget: max_size });
                    }
                    let to = representatives.len();
                    representatives.push(next);
                    index.insert(next, to);
                    queue.push_back(to);
                    to
                }
            };
            moves.push((from, a, to));
        }
    }
    Ok(LcOrbit {
        representatives,
        moves,
        index,
    })
}

/// Whether `g2` is reachable from `g1` by local complementations and a
/// relabelling.
pub fn are_lc_equivalent(g1: &Graph, g2: &Graph, budget: usize) -> Result<bool, GraphError> {
    if g1.n() != g2.n() || g1.is_connected() != g2.is_connected() {
        return Ok(false);
    }
    Ok(lc_orbit(g1, budget)?.contains(g2))
}

/// Partition of every labelled connected graph on `n ≤ 7` vertices into
/// classes under local complementation and vertex relabelling.
#[derive(Debug, Clone)]
pub struct LcPartition {
    n: usize,
    class_of: Vec<u32>,
    /// Smallest-key labelled member of each class, in discovery order.
    pub representatives: Vec<Graph>,
    /// Number of labelled graphs in each class.
    pub class_sizes: Vec<usize>,
}

const UNASSIGNED: u32 = u32::MAX;

impl LcPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    /// Class index of a connected graph with the partition's vertex count.
    pub fn class_of(&self, g: &Graph) -> Option<usize> {
        if g.n() != self.n {
            return None;
        }
        let c = self.class_of[labelled_key(g) as usize];
        (c != UNASSIGNED).then_some(c as usize)
    }
}

// Row-major upper-triangle bits, bit 0 = {1,2}. Only used to index the
// partition table, so the order is unrelated to the canonical key.
fn labelled_key(g: &Graph) -> u32 {
    let n = g.n();
    let mut key = 0u32;
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            key |= ((g.adj[i] >> j & 1) as u32) << idx;
            idx += 1;
        }
    }
    key
}

fn from_labelled_key(n: usize, key: u32) -> Graph {
    let mut g = Graph {
        n: n as u8,
        adj: [0; MAX_VERTICES],
    };
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if key >> idx & 1 == 1 {
                g.adj[i] |= 1 << j;
                g.adj[j] |= 1 << i;
            }
            idx += 1;
        }
    }
    g
}

/// Enumerates all `2^(n(n-1)/2)` labelled graphs on `n` vertices and groups
/// the connected ones by the group generated by local complementations and
/// vertex permutations. Runs in well under a second for `n = 7`.
pub fn lc_partition(n: usize) -> Result<LcPartition, GraphError> {
    if !(2..=7).contains(&n) {
        return Err(GraphError::PartitionSize(n));
    }
    let pairs = n * (n - 1) / 2;
    let total = 1usize << pairs;
    let mut class_of = vec![UNASSIGNED; total];
    let mut representatives = Vec::new();
    let mut class_sizes = Vec::new();

    // S_n is generated by the transposition (1 2) and the cycle (1 2 ... n).
    let swap = {
        let mut m: Vec<usize> = (1..=n).collect();
        m.swap(0, 1);
        VertexPermutation::new(m)?
    };
    let cycle = VertexPermutation::new((1..=n).map(|v| v % n + 1).collect())?;

    let mut stack = Vec::new();
    for key in 0..total {
        if class_of[key] != UNASSIGNED {
            continue;
        }
        let g = from_labelled_key(n, key as u32);
        if !g.is_connected() {
            continue;
        }
        let class = representatives.len() as u32;
        representatives.push(g);
        let mut size = 0usize;
        class_of[key] = class;
        stack.push(g);
        while let Some(h) = stack.pop() {
            size += 1;
            let neighbours = (1..=n)
                .map(|a| h.local_complement(a))
                .chain([h.relabel(&swap), h.relabel(&cycle)]);
            for next in neighbours {
                let next = next?;
                let k = labelled_key(&next) as usize;
                if class_of[k] == UNASSIGNED {
                    class_of[k] = class;
                    stack.push(next);
                }
            }
        }
        class_sizes.push(size);
    }
    Ok(LcPartition {
        n,
        class_of,
        representatives,
        class_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn make_graph_normalizes() {
        let a = g(3, &[(2, 1), (1, 3), (1, 3)]);
        assert_eq!(a.edges(), vec![(1, 2), (1, 3)]);
        let single = g(1, &[]);
        assert_eq!(single.n(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn make_graph_errors() {
        assert_eq!(Graph::new(0, []), Err(GraphError::VertexCount(0)));
        assert_eq!(Graph::new(17, []), Err(GraphError::VertexCount(17)));
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(1, 4)]),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 3 })
        );
        assert!(Graph::new(3, [(0, 2)]).is_err());
    }

    #[test]
    fn neighbours() {
        assert_eq!(g(3, &[(1, 2), (1, 3)]).neighbors(1).unwrap(), vec![2, 3]);
        assert_eq!(g(4, &[(1, 2), (2, 3), (3, 4)]).neighbors(2).unwrap(), vec![1, 3]);
        assert!(Graph::empty(5).unwrap().neighbors(4).unwrap().is_empty());
        assert!(Graph::empty(5).unwrap().neighbors(6).is_err());
    }

    #[test]
    fn local_complement_examples() {
        let tri = g(3, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(tri.local_complement(1).unwrap().edges(), vec![(1, 2), (1, 3)]);

        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        let k4 = g(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(star.local_complement(1).unwrap(), k4);

        // a leaf has a single neighbour, nothing to toggle
        assert_eq!(star.local_complement(2).unwrap(), star);
        assert!(star.local_complement(5).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let p = g(3, &[(1, 2), (2, 3)]);
        assert_eq!(is_isomorphic(&p, &p), Some(VertexPermutation::identity(3)));
        let q = g(3, &[(2, 1), (1, 3)]);
        let w = is_isomorphic(&p, &q).unwrap();
        assert_eq!(p.relabel(&w).unwrap(), q);

        let path4 = g(4, &[(1, 2), (2, 3), (3, 4)]);
        let star4 = g(4, &[(1, 2), (1, 3), (1, 4)]);
        assert!(is_isomorphic(&path4, &star4).is_none());
        assert!(is_isomorphic(&path4, &g(5, &[(1, 2), (2, 3), (3, 4)])).is_none());
    }

    #[test]
    fn canonical_of_path() {
        let c = canonical_form(&g(3, &[(2, 1), (1, 3)]));
        assert_eq!(c.edges(), vec![(1, 2), (1, 3)]);
        assert_eq!(canonical_form(&g(3, &[(1, 2), (2, 3)])), c);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn canonical_matches_exhaustive_maximum() {
        // Compare the pruned search against a plain scan of all 5! labellings.
        let h = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 4)]);
        let mut best = 0u128;
        let mut perm: Vec<usize> = (1..=5).collect();
        heap_permutations(&mut perm, 5, &mut |p| {
            let key = h
                .relabel(&VertexPermutation::new(p.to_vec()).unwrap())
                .unwrap()
                .adjacency_key();
            best = best.max(key);
        });
        assert_eq!(canonical_form(&h).adjacency_key(), best);
        let (c, p) = canonical_labelling(&h);
        assert_eq!(h.relabel(&p).unwrap(), c);
    }

    fn heap_permutations(a: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
        if k == 1 {
            f(a);
            return;
        }
        for i in 0..k {
            heap_permutations(a, k - 1, f);
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let edge = g(2, &[(1, 2)]);
        assert_eq!(lc_orbit(&edge, 10).unwrap().size(), 1);

        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        let k4 = g(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let orbit = lc_orbit(&star, 100).unwrap();
        assert!(orbit.contains(&k4));
        assert_eq!(orbit.size(), 2);

        let path = g(4, &[(1, 2), (2, 3), (3, 4)]);
        assert!(orbit.is_disjoint(&lc_orbit(&path, 100).unwrap()));
        assert!(are_lc_equivalent(&star, &k4, 100).unwrap());
        assert!(!are_lc_equivalent(&star, &path, 100).unwrap());
        assert!(are_lc_equivalent(&path, &path, 100).unwrap());
    }

    #[test]
    fn orbit_budget() {
        let path = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(
            lc_orbit(&path, 1).unwrap_err(),
            GraphError::BudgetExceeded { budget: 1 }
        );
    }

    #[test]
    fn partition_counts_small() {
        // connected LC classes for n = 2..5 are 1, 1, 2, 4
        let counts: Vec<usize> = (2..=5).map(|n| lc_partition(n).unwrap().class_count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4]);
        let p4 = lc_partition(4).unwrap();
        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        let path = g(4, &[(1, 2), (2, 3), (3, 4)]);
        assert_ne!(p4.class_of(&star), p4.class_of(&path));
        assert_eq!(p4.class_of(&Graph::empty(4).unwrap()), None);
        assert!(lc_partition(8).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(VertexPermutation::new(vec![1, 1, 2]).is_err());
        assert!(VertexPermutation::new(vec![1, 4, 2]).is_err());
        let p = VertexPermutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.apply(1), 3);
        assert_eq!(p.inverse().apply(3), 1);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 1..=n {
                    for j in (i + 1)..=n {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    fn arb_graph_with_perm(max_n: usize) -> impl Strategy<Value = (Graph, VertexPermutation)> {
        arb_graph(max_n).prop_flat_map(|g| {
            let n = g.n();
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(move |m| (g, VertexPermutation::new(m).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn lc_is_involution(g in arb_graph(8), a in 1usize..=8) {
            let a = (a - 1) % g.n() + 1;
            let twice = g.local_complement(a).unwrap().local_complement(a).unwrap();
            prop_assert_eq!(twice, g);
        }

        #[test]
        fn lc_preserves_connectivity(g in arb_graph(8), a in 1usize..=8) {
            let a = (a - 1) % g.n() + 1;
            let h = g.local_complement(a).unwrap();
            prop_assert_eq!(h.n(), g.n());
            prop_assert_eq!(h.is_connected(), g.is_connected());
        }

        #[test]
        fn canonical_respects_relabelling((g, p) in arb_graph_with_perm(7)) {
            let h = g.relabel(&p).unwrap();
            prop_assert_eq!(canonical_form(&h), canonical_form(&g));
            let w = is_isomorphic(&g, &h).unwrap();
            prop_assert_eq!(g.relabel(&w).unwrap(), h);
        }

        #[test]
        fn canonical_agrees_with_isomorphism(a in arb_graph(6), b in arb_graph(6)) {
            let iso = is_isomorphic(&a, &b).is_some();
            prop_assert_eq!(canonical_form(&a) == canonical_form(&b), iso);
            prop_assert_eq!(is_isomorphic(&b, &a).is_some(), iso);
        }

        #[test]
        fn isomorphism_is_transitive((g, p) in arb_graph_with_perm(6), q in Just(()).prop_flat_map(|_| Just((1..=6).collect::<Vec<usize>>()).prop_shuffle())) {
            let q: Vec<usize> = q.into_iter().filter(|&v| v <= g.n()).collect();
            let q = VertexPermutation::new(q).unwrap();
            let h = g.relabel(&p).unwrap();
            let k = h.relabel(&q).unwrap();
            prop_assert!(is_isomorphic(&g, &h).is_some());
            prop_assert!(is_isomorphic(&h, &k).is_some());
            prop_assert!(is_isomorphic(&g, &k).is_some());
        }

        #[test]
        fn orbit_is_well_defined(g in arb_graph(5), pick in any::<usize>()) {
            let o = lc_orbit(&g, 10_000).unwrap();
            let other = o.representatives[pick % o.size()];
            let o2 = lc_orbit(&other, 10_000).unwrap();
            let mut a = o.representatives.clone();
            let mut b = o2.representatives.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
