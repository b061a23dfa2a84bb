//! Samplers for the correlated law, the independent null, and plain
//! Erdős–Rényi graphs.
//!
//! Parent edges come from geometric skipping over the pair listing on their
//! own stream; the two subsampling coins of a parent edge are keyed by that
//! edge's pair index, so `J` and `K` never depend on draw order.

use crate::error::Result;
use crate::model::graph::{pair_from_index, Graph};
use crate::model::params::ModelParams;
use crate::model::perm::Permutation;
use crate::rng::{self, CounterRng};

pub const TAG_PARENT: u64 = 1;
pub const TAG_KEEP_LEFT: u64 = 2;
pub const TAG_KEEP_RIGHT: u64 = 3;
pub const TAG_HIDDEN_PERM: u64 = 4;
pub const TAG_NULL_LEFT: u64 = 5;
pub const TAG_NULL_RIGHT: u64 = 6;
pub const TAG_DIRECT: u64 = 7;

/// A draw `(G, A, B, π*)` from the planted model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelatedSample {
    pub parent: Graph,
    pub left: Graph,
    pub right: Graph,
    pub hidden_perm: Permutation,
}

impl CorrelatedSample {
    /// Pairs kept in both graphs once aligned by the hidden permutation.
    pub fn intersection(&self) -> Graph {
        crate::model::graph::intersection_graph(&self.left, &self.right, &self.hidden_perm)
            .expect("sample graphs share n")
    }
}

/// Pair indices of a Bernoulli(`q`) subset of `0..total`, ascending.
fn bernoulli_indices(total: usize, q: f64, rng: &mut CounterRng) -> Vec<usize> {
    let mut out = Vec::new();
    if q <= 0.0 || total == 0 {
        return out;
    }
    if q >= 1.0 {
        out.extend(0..total);
        return out;
    }
    let log_miss = (-q).ln_1p();
    let mut next: usize = 0;
    loop {
        let skip = (rng.next_open_f64().ln() / log_miss).floor();
        if skip >= (total - next) as f64 {
            break;
        }
        next += skip as usize;
        out.push(next);
        next += 1;
        if next >= total {
            break;
        }
    }
    out
}

fn indices_to_edges(n: usize, idx: &[usize]) -> Vec<(u32, u32)> {
    // walk rows forward since indices ascend
    let mut out = Vec::with_capacity(idx.len());
    let (mut row, mut row_start) = (0usize, 0usize);
    for &k in idx {
        while k >= row_start + (n - row - 1) {
            row_start += n - row - 1;
            row += 1;
        }
        out.push((row as u32, (row + 1 + k - row_start) as u32));
    }
    debug_assert!(idx
        .iter()
        .zip(&out)
        .all(|(&k, &(i, j))| pair_from_index(n, k) == (i as usize, j as usize)));
    out
}

/// Erdős–Rényi graph `G(n, q)` drawn from stream `(seed, tag)`.
pub fn sample_erdos_renyi(n: usize, q: f64, seed: u64, tag: u64) -> Graph {
    let mut rng = CounterRng::new(seed, tag);
    let idx = bernoulli_indices(n * n.saturating_sub(1) / 2, q, &mut rng);
    Graph::from_sorted_unchecked(n, indices_to_edges(n, &idx))
}

/// One draw from the correlated model: parent `G ~ G(n, λ/n)`, each parent
/// edge kept in `A` and (independently) in `B` with probability `s`, and `B`
/// relabeled by a uniform hidden permutation.
pub fn sample_correlated(params: &ModelParams, seed: u64) -> Result<CorrelatedSample> {
    let params = ModelParams::with_epsilon(params.n, params.lambda, params.s, params.epsilon)?;
    let n = params.n;
    let s = params.s;
    let mut parent_rng = CounterRng::new(seed, TAG_PARENT);
    let idx = bernoulli_indices(params.pair_count(), params.p(), &mut parent_rng);
    let parent_edges = indices_to_edges(n, &idx);

    let mut perm_rng = CounterRng::new(seed, TAG_HIDDEN_PERM);
    let hidden_perm = Permutation::random(n, &mut perm_rng);

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&k, &(i, j)) in idx.iter().zip(&parent_edges) {
        if rng::uniform(seed, TAG_KEEP_LEFT, k as u64) < s {
            left.push((i, j));
        }
        if rng::uniform(seed, TAG_KEEP_RIGHT, k as u64) < s {
            let a = hidden_perm.apply(i as usize) as u32;
            let b = hidden_perm.apply(j as usize) as u32;
            right.push((a.min(b), a.max(b)));
        }
    }
    right.sort_unstable();

    Ok(CorrelatedSample {
        parent: Graph::from_sorted_unchecked(n, parent_edges),
        left: Graph::from_sorted_unchecked(n, left),
        right: Graph::from_sorted_unchecked(n, right),
        hidden_perm,
    })
}

/// One draw from the null: two independent `G(n, λs/n)` graphs.
pub fn sample_null(params: &ModelParams, seed: u64) -> Result<(Graph, Graph)> {
    let params = ModelParams::with_epsilon(params.n, params.lambda, params.s, params.epsilon)?;
    let q = params.marginal_edge_prob();
    Ok((
        sample_erdos_renyi(params.n, q, seed, TAG_NULL_LEFT),
        sample_erdos_renyi(params.n, q, seed, TAG_NULL_RIGHT),
    ))
}

/// Draws the intersection-graph law `G(n, λs²/n)` directly, bypassing the
/// correlated pipeline.
pub fn sample_intersection_direct(params: &ModelParams, seed: u64) -> Graph {
    sample_erdos_renyi(params.n, params.intersection_edge_prob(), seed, TAG_DIRECT)
}
