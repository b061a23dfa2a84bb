use crate::error::{Error, Result};
use crate::model::perm::Permutation;

/// Vertex counts up to this size also keep an adjacency bitset.
pub const BITSET_MAX_N: usize = 64;

/// Simple undirected graph on `{0, …, n-1}`, stored as a sorted list of pairs
/// `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Option<Vec<u64>>,
}

/// Index of the pair `(i, j)`, `i < j`, in the lexicographic listing of all
/// unordered pairs of `0..n`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - i - 1;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
        i += 1;
    }
}

#[inline]
fn ordered(a: usize, b: usize) -> (u32, u32) {
    if a < b {
        (a as u32, b as u32)
    } else {
        (b as u32, a as u32)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i as u32, j as u32));
            }
        }
        Self::from_sorted_unchecked(n, edges)
    }

    /// Builds a graph from 0-based endpoint pairs in any order and orientation.
    /// Self-loops, out-of-range endpoints and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            list.push(ordered(a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    /// Caller guarantees the list is sorted, duplicate-free and normalized.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let adj = (n <= BITSET_MAX_N).then(|| {
            let mut rows = vec![0u64; n];
            for &(i, j) in &edges {
                rows[i as usize] |= 1 << j;
                rows[j as usize] |= 1 << i;
            }
            rows
        });
        Self { n, edges, adj }
    }

    /// Builds from a pair-indicator predicate evaluated on every pair.
    pub fn from_pair_predicate(n: usize, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if keep(i, j) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.n || b >= self.n {
            return false;
        }
        match &self.adj {
            Some(rows) => rows[a] >> b & 1 == 1,
            None => self.edges.binary_search(&ordered(a, b)).is_ok(),
        }
    }

    /// Adjacency rows as bitsets, available when `n <= 64`.
    pub fn adjacency_bits(&self) -> Option<&[u64]> {
        self.adj.as_deref()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (i, j) in self.edges() {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.n];
        for (i, j) in self.edges() {
            nb[i].push(j);
            nb[j].push(i);
        }
        nb
    }

    /// Vertices incident to at least one edge, ascending.
    pub fn covered_vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for (i, j) in self.edges() {
            seen[i] = true;
            seen[j] = true;
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    /// The graph restricted to its covered vertices, relabeled `0..|V|`
    /// in increasing order.
    pub fn without_isolated(&self) -> Graph {
        let covered = self.covered_vertices();
        let mut relabel = vec![u32::MAX; self.n];
        for (k, &v) in covered.iter().enumerate() {
            relabel[v] = k as u32;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| (relabel[i as usize], relabel[j as usize]))
            .collect();
        Self::from_sorted_unchecked(covered.len(), edges)
    }

    /// Edge set of the union; both graphs must have the same `n`.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        check_same_n(self.n, other.n)?;
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_unchecked(self.n, edges))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges().all(|(i, j)| other.has_edge(i, j))
    }
}

pub(crate) fn check_same_n(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::SizeMismatch { expected, actual });
    }
    Ok(())
}

/// Image of `g` under the vertex map `perm`: edge `(i, j)` becomes
/// `(perm(i), perm(j))`.
pub fn apply_permutation(g: &Graph, perm: &Permutation) -> Result<Graph> {
    check_same_n(g.n(), perm.len())?;
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .map(|(i, j)| ordered(perm.apply(i), perm.apply(j)))
        .collect();
    edges.sort_unstable();
    Ok(Graph::from_sorted_unchecked(g.n(), edges))
}

/// Pairs `(i, j)` present in `left` whose image `(perm(i), perm(j))` is present
/// in `right`.
pub fn intersection_graph(left: &Graph, right: &Graph, perm: &Permutation) -> Result<Graph> {
    check_same_n(left.n(), right.n())?;
    check_same_n(left.n(), perm.len())?;
    let edges = left
        .edges
        .iter()
        .copied()
        .filter(|&(i, j)| right.has_edge(perm.apply(i as usize), perm.apply(j as usize)))
        .collect();
    Ok(Graph::from_sorted_unchecked(left.n(), edges))
}
