//! Canonical forms and automorphism counts for small graphs.
//!
//! The canonical form runs colour refinement, then branches by
//! individualizing vertices of the first non-singleton cell, keeping the
//! smallest adjacency code over all discrete leaves. Candidates that are
//! twins of an already explored vertex are skipped: swapping twins is an
//! automorphism that fixes the current partition.

use crate::error::{Error, Result};
use crate::model::Graph;

pub const MAX_CANON_N: usize = 10;

/// Isomorphism class of a graph on at most [`MAX_CANON_N`] vertices
/// (isolated vertices count).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnlabeledGraph {
    n: usize,
    code: u64,
}

fn code_of(adj: &[u64], order: &[usize]) -> u64 {
    // bit per pair of the relabeled graph, pairs in lexicographic order
    let mut code = 0u64;
    let mut bit = 0;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if adj[order[a]] >> order[b] & 1 == 1 {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn refine(adj: &[u64], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u64> = cells
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|m| (adj[v] & m).count_ones()).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for k in 1..=keyed.len() {
                if k == keyed.len() || keyed[k].0 != keyed[start].0 {
                    next.push(keyed[start..k].iter().map(|&(_, v)| v).collect());
                    start = k;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn are_twins(adj: &[u64], u: usize, v: usize) -> bool {
    let mask = !(1u64 << u | 1u64 << v);
    adj[u] & mask == adj[v] & mask
}

fn search(adj: &[u64], cells: Vec<Vec<usize>>, best: &mut Option<(u64, Vec<usize>)>) {
    let cells = refine(adj, cells);
    let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = code_of(adj, &order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell = &cells[pos];
    let mut tried: Vec<usize> = Vec::new();
    for &v in cell {
        if tried.iter().any(|&u| are_twins(adj, u, v)) {
            continue;
        }
        tried.push(v);
        let mut branch = Vec::with_capacity(cells.len() + 1);
        branch.extend_from_slice(&cells[..pos]);
        branch.push(vec![v]);
        branch.push(cell.iter().copied().filter(|&u| u != v).collect());
        branch.extend_from_slice(&cells[pos + 1..]);
        search(adj, branch, best);
    }
}

fn check_canon_size(n: usize) -> Result<()> {
    if n > MAX_CANON_N {
        return Err(Error::Capacity {
            what: "vertex count for canonical form",
            value: n,
            limit: MAX_CANON_N,
        });
    }
    Ok(())
}

/// Canonical labeling of `g`: `order[t]` is the vertex placed at position `t`.
pub fn canonical_order(g: &Graph) -> Result<Vec<usize>> {
    check_canon_size(g.n())?;
    let adj = g.adjacency_bits().expect("bitset for small n");
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    // degree classes first, in increasing degree
    let deg = g.degrees();
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for v in 0..g.n() {
        by_degree[deg[v]].push(v);
    }
    let cells: Vec<Vec<usize>> = by_degree.into_iter().filter(|c| !c.is_empty()).collect();
    let mut best = None;
    search(adj, cells, &mut best);
    Ok(best.unwrap().1)
}

impl UnlabeledGraph {
    pub fn new(g: &Graph) -> Result<Self> {
        let order = canonical_order(g)?;
        let code = match g.adjacency_bits() {
            Some(adj) => code_of(adj, &order),
            None => 0,
        };
        Ok(Self { n: g.n(), code })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.code.count_ones() as usize
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// The canonically labeled member of the class.
    pub fn representative(&self) -> Graph {
        let mut bit = 0;
        Graph::from_pair_predicate(self.n, |_, _| {
            bit += 1;
            self.code >> (bit - 1) & 1 == 1
        })
    }
}

/// `|Aut(g)|` by exhaustive backtracking over degree-preserving vertex maps.
pub fn automorphism_count(g: &UnlabeledGraph) -> Result<u64> {
    let rep = g.representative();
    Ok(count_automorphisms(&rep))
}

pub(crate) fn count_automorphisms(g: &Graph) -> u64 {
    let n = g.n();
    let adj = g.adjacency_bits().expect("bitset for small n");
    let deg = g.degrees();
    let mut image = vec![0usize; n];
    fn extend(
        v: usize,
        n: usize,
        used: u64,
        adj: &[u64],
        deg: &[usize],
        image: &mut [usize],
    ) -> u64 {
        if v == n {
            return 1;
        }
        let mut total = 0;
        for w in 0..n {
            if used >> w & 1 == 1 || deg[w] != deg[v] {
                continue;
            }
            let consistent = (0..v).all(|u| (adj[v] >> u & 1) == (adj[w] >> image[u] & 1));
            if consistent {
                image[v] = w;
                total += extend(v + 1, n, used | 1 << w, adj, deg, image);
            }
        }
        total
    }
    extend(0, n, 0, adj, &deg, &mut image)
}
