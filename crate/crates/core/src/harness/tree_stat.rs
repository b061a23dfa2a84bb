//! A centred tree-count correlation between two graphs.
//!
//! For each unlabeled tree `T` with `2..=k_max` vertices, `X_T(g)` counts the
//! subgraphs of `g` isomorphic to `T` and `μ_T = Sub_n(T) (λs/n)^{|E(T)|}` is
//! its null mean. The statistic `Σ_T (X_T(A) - μ_T)(X_T(B) - μ_T)` has mean
//! zero under the null; it is not variance-normalized.

use num_traits::ToPrimitive;

use crate::combinatorics::canon::count_automorphisms;
use crate::combinatorics::{sub_count, tree_from_code, TreeCatalog, UnlabeledGraph};
use crate::error::{Error, Result};
use crate::model::graph::check_same_n;
use crate::model::{Graph, ModelParams};

pub const MAX_TREE_STAT_K: usize = 6;

/// A tree pattern prepared for counting.
#[derive(Debug, Clone)]
pub struct TreePattern {
    pub tree: Graph,
    /// `parents[v]` for `v ≥ 1`; vertices are in preorder
    parents: Vec<usize>,
    pub automorphisms: u64,
}

impl TreePattern {
    pub fn from_code(code: &[u8]) -> Self {
        let tree = tree_from_code(code);
        let mut parents = vec![usize::MAX; tree.n()];
        for (p, c) in tree.edges() {
            // preorder labels: the parent is the smaller endpoint
            parents[c] = p;
        }
        let automorphisms = count_automorphisms(&tree);
        Self {
            tree,
            parents,
            automorphisms,
        }
    }

    /// Number of subgraphs of `g` isomorphic to this tree.
    pub fn count_in(&self, g: &Graph) -> u64 {
        let nb = g.neighbors();
        let k = self.tree.n();
        let mut image = vec![usize::MAX; k];
        let mut used = vec![false; g.n()];
        let mut embeddings = 0u64;
        for root in 0..g.n() {
            image[0] = root;
            used[root] = true;
            embeddings += self.extend(1, &nb, &mut image, &mut used);
            used[root] = false;
        }
        embeddings / self.automorphisms
    }

    fn extend(&self, v: usize, nb: &[Vec<usize>], image: &mut [usize], used: &mut [bool]) -> u64 {
        if v == image.len() {
            return 1;
        }
        let mut total = 0;
        for &w in &nb[image[self.parents[v]]] {
            if !used[w] {
                used[w] = true;
                image[v] = w;
                total += self.extend(v + 1, nb, image, used);
                used[w] = false;
            }
        }
        total
    }
}

/// All trees with `2..=k_max` vertices.
pub fn tree_patterns(k_max: usize) -> Result<Vec<TreePattern>> {
    if k_max > MAX_TREE_STAT_K {
        return Err(Error::Capacity {
            what: "tree size for the tree statistic",
            value: k_max,
            limit: MAX_TREE_STAT_K,
        });
    }
    let catalog = TreeCatalog::new(k_max.max(1));
    Ok((2..=k_max)
        .flat_map(|k| catalog.trees(k).iter().map(|c| TreePattern::from_code(c)))
        .collect())
}

/// Null mean `Sub_n(T) · (λs/n)^{|E(T)|}`.
pub fn null_mean(pattern: &TreePattern, params: &ModelParams) -> Result<f64> {
    let class = UnlabeledGraph::new(&pattern.tree)?;
    let copies = sub_count(&class, params.n)?.to_f64().unwrap();
    Ok(copies
        * params
            .marginal_edge_prob()
            .powi(pattern.tree.edge_count() as i32))
}

pub fn tree_correlation_statistic(
    left: &Graph,
    right: &Graph,
    params: &ModelParams,
    k_max: usize,
) -> Result<f64> {
    check_same_n(left.n(), right.n())?;
    check_same_n(params.n, left.n())?;
    let mut total = 0.0;
    for pattern in tree_patterns(k_max)? {
        let mu = null_mean(&pattern, params)?;
        let xa = pattern.count_in(left) as f64;
        let xb = pattern.count_in(right) as f64;
        total += (xa - mu) * (xb - mu);
    }
    Ok(total)
}
