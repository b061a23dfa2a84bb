//! Brute-force oracles shared by the integration and acceptance tests. None
//! of these call into the code they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use corrgraph::model::{Graph, ModelParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Parameter triples with `n ∈ [5, 200]`, `λ ∈ (0.1, 4)`, `s ∈ (0.05, 0.95)`.
pub fn random_params(count: usize, seed: u64) -> Vec<ModelParams> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(5..=200);
            let lambda = r.random_range(0.1..4.0);
            let s = r.random_range(0.05..0.95);
            ModelParams::new(n, lambda, s).unwrap()
        })
        .collect()
}

pub fn random_graph(n: usize, q: f64, r: &mut StdRng) -> Graph {
    Graph::from_pair_predicate(n, |_, _| r.random_bool(q))
}

/// Every permutation of `0..n` by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// All pairs of `K_n` in lexicographic order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn relabel(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn sorted_edges(g: &Graph) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = g.edges().collect();
    e.sort_unstable();
    e
}

/// Isomorphism by trying every bijection.
pub fn isomorphic_brute(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let target = sorted_edges(b);
    let ea = sorted_edges(a);
    all_permutations(a.n())
        .iter()
        .any(|p| relabel(&ea, p) == target)
}

/// Acyclicity by depth-first search.
pub fn is_forest_dfs(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        seen[start] = true;
        while let Some((v, parent)) = stack.pop() {
            let mut skipped_parent = false;
            for &w in &adj[v] {
                if w == parent && !skipped_parent {
                    skipped_parent = true;
                    continue;
                }
                if seen[w] {
                    return false;
                }
                seen[w] = true;
                stack.push((w, v));
            }
        }
    }
    true
}

/// Every subset of `K_n`'s pairs with at most `max_edges` edges.
pub fn edge_subsets(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        cur: &mut Vec<(usize, usize)>,
        max: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            rec(pairs, i + 1, cur, max, out);
            cur.pop();
        }
    }
    let pairs = all_pairs(n);
    let mut out = Vec::new();
    rec(&pairs, 0, &mut Vec::new(), max_edges, &mut out);
    out
}

/// Decodes a Prüfer sequence over `0..k` into tree edges.
pub fn prufer_decode(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &v in seq {
        let leaf = (0..k).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every Prüfer sequence of length `k - 2`.
pub fn all_prufer(k: usize, mut f: impl FnMut(&[usize])) {
    let len = k - 2;
    let mut seq = vec![0usize; len];
    loop {
        f(&seq);
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

/// Prüfer sequences whose label multiplicities are non-increasing in the
/// label. A label occurs `deg - 1` times, so these are exactly the trees whose
/// degrees are sorted in decreasing label order, and every unlabeled tree has
/// such a labeling.
pub fn degree_sorted_prufer(k: usize, mut f: impl FnMut(&[usize])) {
    fn partitions(
        rem: usize,
        max: usize,
        parts: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            partitions(rem - part, part, parts - 1, cur, out);
            cur.pop();
        }
    }
    fn arrangements(
        counts: &mut [usize],
        seq: &mut Vec<usize>,
        len: usize,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if seq.len() == len {
            f(seq);
            return;
        }
        for label in 0..counts.len() {
            if counts[label] > 0 {
                counts[label] -= 1;
                seq.push(label);
                arrangements(counts, seq, len, f);
                seq.pop();
                counts[label] += 1;
            }
        }
    }
    let len = k - 2;
    let mut parts = Vec::new();
    partitions(len, len.max(1), k, &mut Vec::new(), &mut parts);
    for mut counts in parts {
        arrangements(&mut counts, &mut Vec::with_capacity(len), len, &mut f);
    }
}

/// Sorted-children string code of the tree rooted at `root`.
pub fn rooted_code(adj: &[Vec<usize>], root: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[root]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, root))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Free and rooted unlabeled tree counts on `k` vertices from Prüfer
/// enumeration, deduplicated by a canonical code independent of the library.
/// Free trees are keyed by the minimum rooted code over all roots.
pub fn prufer_tree_counts(k: usize, full: bool) -> (usize, usize) {
    if k == 1 {
        return (1, 1);
    }
    if k == 2 {
        return (1, 1);
    }
    let mut free = HashSet::new();
    let mut rooted = HashSet::new();
    let mut visit = |seq: &[usize]| {
        let adj = adjacency(k, &prufer_decode(seq, k));
        let codes: Vec<String> = (0..k).map(|r| rooted_code(&adj, r, usize::MAX)).collect();
        free.insert(codes.iter().min().unwrap().clone());
        rooted.extend(codes);
    };
    if full {
        all_prufer(k, &mut visit);
    } else {
        degree_sorted_prufer(k, &mut visit);
    }
    (free.len(), rooted.len())
}

/// Canonical code of an unlabeled forest: sorted free-tree codes of its
/// components with at least one edge.
pub fn forest_code(n: usize, edges: &[(usize, usize)]) -> Vec<String> {
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut codes = Vec::new();
    for start in 0..n {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        let best = comp
            .iter()
            .map(|&r| rooted_code(&adj, r, usize::MAX))
            .min()
            .unwrap();
        codes.push(best);
    }
    codes.sort();
    codes
}

/// Vertex count and edge list.
type Forest = (usize, Vec<(usize, usize)>);

/// Number of unlabeled forests (no isolated vertices) with exactly `e` edges,
/// for `e = 0..=max_edges`. Forests with `e + 1` edges are grown from those
/// with `e` edges by adding a pendant vertex or a disjoint edge.
pub fn forest_counts_by_growth(max_edges: usize) -> Vec<usize> {
    let mut level: BTreeMap<Vec<String>, Forest> = BTreeMap::new();
    level.insert(Vec::new(), (0, Vec::new()));
    let mut counts = vec![1];
    for _ in 0..max_edges {
        let mut next = BTreeMap::new();
        for (n, edges) in level.values() {
            let n = *n;
            let mut grown = Vec::new();
            for v in 0..n {
                let mut e = edges.clone();
                e.push((v, n));
                grown.push((n + 1, e));
            }
            let mut e = edges.clone();
            e.push((n, n + 1));
            grown.push((n + 2, e));
            for (m, e) in grown {
                next.entry(forest_code(m, &e)).or_insert((m, e));
            }
        }
        counts.push(next.len());
        level = next;
    }
    counts
}

/// Number of `k`-cycles in `K_n` by walking vertex sequences that start at
/// their smallest vertex, with the second vertex below the last.
pub fn brute_cycle_count(n: usize, k: usize) -> u64 {
    fn walk(path: &mut Vec<usize>, used: &mut [bool], n: usize, k: usize) -> u64 {
        if path.len() == k {
            return u64::from(path[1] < path[k - 1]);
        }
        let mut total = 0;
        for v in path[0] + 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                total += walk(path, used, n, k);
                path.pop();
                used[v] = false;
            }
        }
        total
    }
    let mut total = 0;
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        total += walk(&mut vec![start], &mut used, n, k);
    }
    total
}

/// Joint law of `(A_e, B_e)` for one aligned pair, by summing over the eight
/// `(I, J, K)` states.
pub fn pair_pmf_oracle(p: f64, s: f64) -> [[f64; 2]; 2] {
    let mut t = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let w = [1.0 - p, p][i] * [1.0 - s, s][j] * [1.0 - s, s][k];
                t[i & j][i & k] += w;
            }
        }
    }
    t
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Asymptotic two-sample KS critical value at level `alpha`.
pub fn ks_critical(alpha: f64, n1: usize, n2: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n1 + n2) as f64 / (n1 * n2) as f64).sqrt()
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}
