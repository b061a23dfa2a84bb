//! Unlabeled tree counts (rooted recurrence plus Otter's dissimilarity
//! formula), canonical tree codes, and the catalog of unlabeled trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::Graph;

pub const MAX_TABLE_K: usize = 500;

/// Polynomial exponent in `f_k ~ C α^{-k} k^{-5/2}`.
pub const OTTER_POLY_EXPONENT: f64 = 2.5;

/// `f_k` (unlabeled free trees) and `r_k` (unlabeled rooted trees) for
/// `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCountTable {
    // index 0 unused
    rooted: Vec<BigUint>,
    free: Vec<BigUint>,
}

impl TreeCountTable {
    pub fn k_max(&self) -> usize {
        self.free.len() - 1
    }

    pub fn free(&self, k: usize) -> &BigUint {
        &self.free[k]
    }

    pub fn rooted(&self, k: usize) -> &BigUint {
        &self.rooted[k]
    }

    pub fn free_counts(&self) -> &[BigUint] {
        &self.free[1..]
    }

    /// `f_k / f_{k+1}` for `k < k_max`.
    pub fn ratio(&self, k: usize) -> Option<f64> {
        (k >= 1 && k < self.k_max()).then(|| big_ratio(&self.free[k], &self.free[k + 1]))
    }

    /// CSV with header `k,f_k,r_k,ratio`; the ratio is blank on the last row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,f_k,r_k,ratio\n");
        for k in 1..=self.k_max() {
            let ratio = self.ratio(k).map(|r| r.to_string()).unwrap_or_default();
            writeln!(out, "{k},{},{},{ratio}", self.free[k], self.rooted[k]).unwrap();
        }
        out
    }
}

fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    // scale down both so the quotient survives conversion for huge counts
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap() / b.to_f64().unwrap()
}

pub fn count_unlabeled_trees(k_max: usize) -> Result<TreeCountTable> {
    if k_max == 0 || k_max > MAX_TABLE_K {
        return Err(Error::Capacity {
            what: "tree table length",
            value: k_max,
            limit: MAX_TABLE_K,
        });
    }
    let mut rooted = vec![BigUint::zero(); k_max + 1];
    rooted[1] = BigUint::from(1u32);
    // c_j = Σ_{d | j} d r_d, filled as r_j becomes known
    let mut divisor_sums = vec![BigUint::zero(); k_max + 1];
    for m in 1..k_max {
        let mut c = BigUint::zero();
        for d in (1..=m).filter(|d| m % d == 0) {
            c += &rooted[d] * BigUint::from(d);
        }
        divisor_sums[m] = c;
        let mut acc = BigUint::zero();
        for j in 1..=m {
            acc += &divisor_sums[j] * &rooted[m - j + 1];
        }
        rooted[m + 1] = acc / BigUint::from(m);
    }

    let mut free = vec![BigUint::zero(); k_max + 1];
    for k in 1..=k_max {
        let mut pairs = BigUint::zero();
        for i in 1..k {
            pairs += &rooted[i] * &rooted[k - i];
        }
        if k % 2 == 0 {
            pairs -= &rooted[k / 2];
        }
        free[k] = &rooted[k] - (pairs >> 1u32);
    }
    Ok(TreeCountTable { rooted, free })
}

/// `α̂ = (f_k / f_{k+1}) · (k / (k+1))^β` at `k = k_max - 1`.
pub fn estimate_otter_constant(table: &TreeCountTable) -> Result<f64> {
    estimate_otter_constant_with(table, OTTER_POLY_EXPONENT)
}

pub fn estimate_otter_constant_with(table: &TreeCountTable, exponent: f64) -> Result<f64> {
    if table.k_max() < 20 {
        return Err(Error::ParameterDomain(format!(
            "tree table too short for an Otter estimate: k_max = {} < 20",
            table.k_max()
        )));
    }
    let k = table.k_max() - 1;
    let ratio = table.ratio(k).unwrap();
    Ok(ratio * (k as f64 / (k + 1) as f64).powf(exponent))
}

/// Canonical parenthesis code of a tree rooted at `root`.
fn rooted_code(nb: &[Vec<usize>], root: usize, parent: usize) -> Vec<u8> {
    let mut children: Vec<Vec<u8>> = nb[root]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| rooted_code(nb, c, root))
        .collect();
    children.sort_unstable();
    let mut out = Vec::with_capacity(2 + children.iter().map(Vec::len).sum::<usize>());
    out.push(b'(');
    for c in children {
        out.extend_from_slice(&c);
    }
    out.push(b')');
    out
}

fn is_tree(g: &Graph) -> bool {
    g.n() >= 1 && g.edge_count() + 1 == g.n() && crate::second_moment::is_cycle_free(g)
}

/// Canonical code of an unlabeled tree: the smaller rooted code over the
/// tree's center(s). `None` if `g` is not a tree on all of its vertices.
pub fn tree_code(g: &Graph) -> Option<Vec<u8>> {
    if !is_tree(g) {
        return None;
    }
    let nb = g.neighbors();
    Some(
        tree_centers(&nb)
            .into_iter()
            .map(|c| rooted_code(&nb, c, usize::MAX))
            .min()
            .unwrap(),
    )
}

/// Canonical code of `g` rooted at `root` (g must be a tree).
pub fn rooted_tree_code(g: &Graph, root: usize) -> Vec<u8> {
    rooted_code(&g.neighbors(), root, usize::MAX)
}

fn tree_centers(nb: &[Vec<usize>]) -> Vec<usize> {
    let n = nb.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = nb.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &nb[v] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Rebuilds a tree from a parenthesis code; vertex 0 is the root.
pub fn tree_from_code(code: &[u8]) -> Graph {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for &c in code {
        if c == b'(' {
            if let Some(&p) = stack.last() {
                edges.push((p, next));
            }
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    Graph::from_edges(next, edges).expect("well-formed code")
}

/// All unlabeled trees with `1..=max_vertices` vertices, grown leaf by leaf
/// and sorted by canonical code within each size.
#[derive(Debug, Clone)]
pub struct TreeCatalog {
    by_size: Vec<Vec<Vec<u8>>>,
    lookup: BTreeMap<Vec<u8>, (usize, usize)>,
}

impl TreeCatalog {
    pub fn new(max_vertices: usize) -> Self {
        let mut by_size: Vec<Vec<Vec<u8>>> = vec![Vec::new(), vec![b"()".to_vec()]];
        for k in 2..=max_vertices {
            let mut next = BTreeSet::new();
            for code in &by_size[k - 1] {
                let t = tree_from_code(code);
                for v in 0..t.n() {
                    let grown = Graph::from_edges(k, t.edges().chain([(v, k - 1)])).unwrap();
                    next.insert(tree_code(&grown).unwrap());
                }
            }
            by_size.push(next.into_iter().collect());
        }
        by_size.truncate(max_vertices + 1);
        let mut lookup = BTreeMap::new();
        for (k, codes) in by_size.iter().enumerate() {
            for (i, c) in codes.iter().enumerate() {
                lookup.insert(c.clone(), (k, i));
            }
        }
        Self { by_size, lookup }
    }

    pub fn max_vertices(&self) -> usize {
        self.by_size.len() - 1
    }

    /// Canonical codes of the `k`-vertex trees; position is the tree's index.
    pub fn trees(&self, k: usize) -> &[Vec<u8>] {
        &self.by_size[k]
    }

    /// `(k, i)` of a tree, `i` being its index among `k`-vertex trees.
    pub fn locate(&self, tree: &Graph) -> Option<(usize, usize)> {
        tree_code(tree).and_then(|c| self.lookup.get(&c).copied())
    }
}

/// Copies `c_{k,i}` of each unlabeled tree in a forest (isolated vertices
/// ignored).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ForestProfile {
    pub multiplicities: BTreeMap<(usize, usize), usize>,
}

impl ForestProfile {
    pub fn from_graph(forest: &Graph, catalog: &TreeCatalog) -> Result<Self> {
        if !crate::second_moment::is_cycle_free(forest) {
            return Err(Error::InvalidGraph("graph has a cycle".into()));
        }
        let mut profile = Self::default();
        for comp in components(forest) {
            if comp.len() < 2 {
                continue;
            }
            if comp.len() > catalog.max_vertices() {
                return Err(Error::Capacity {
                    what: "tree size for catalog lookup",
                    value: comp.len(),
                    limit: catalog.max_vertices(),
                });
            }
            let tree = induced(forest, &comp);
            let key = catalog
                .locate(&tree)
                .expect("catalog holds every tree of this size");
            *profile.multiplicities.entry(key).or_default() += 1;
        }
        Ok(profile)
    }

    /// `Σ c_{k,i} (k - 1)`.
    pub fn edge_count(&self) -> usize {
        self.multiplicities
            .iter()
            .map(|(&(k, _), &c)| c * (k - 1))
            .sum()
    }
}

pub(crate) fn components(g: &Graph) -> Vec<Vec<usize>> {
    let nb = g.neighbors();
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &u in &nb[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub(crate) fn induced(g: &Graph, vertices: &[usize]) -> Graph {
    let pos = |v: usize| vertices.binary_search(&v).ok();
    Graph::from_edges(
        vertices.len(),
        g.edges().filter_map(|(i, j)| Some((pos(i)?, pos(j)?))),
    )
    .unwrap()
}
