//! Per-pair likelihood kernel, its transfer matrix, and the exact
//! permutation-averaged likelihood ratio for small graphs.
//!
//! For a fixed relabeling π the product over pairs only depends on how many
//! edges of `A` land on edges of `B` (the overlap `m`), so `L(A, B)` is a
//! weighted sum over the overlap histogram of all `n!` relabelings.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::graph::check_same_n;
use crate::model::{Graph, ModelParams};

/// Largest `n` accepted by the exact likelihood ratio (10! ≈ 3.6M relabelings).
pub const MAX_EXACT_N: usize = 10;

/// `ℓ(x, y)` for `x, y ∈ {0, 1}`, indexed `values[x][y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeKernel {
    pub values: [[f64; 2]; 2],
    pub p: f64,
    pub rho: f64,
    pub s: f64,
}

impl EdgeKernel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let p = params.p();
        let s = params.s;
        let ps = p * s;
        if ps >= 1.0 {
            return Err(Error::Singular(format!(
                "p*s = {ps} leaves no room for absent edges"
            )));
        }
        let q = 1.0 - ps;
        let both_absent = (1.0 - 2.0 * ps + ps * s) / (q * q);
        let one_present = (1.0 - s) / q;
        let both_present = 1.0 / p;
        Ok(Self {
            values: [[both_absent, one_present], [one_present, both_present]],
            p,
            rho: params.rho(),
            s,
        })
    }

    #[inline]
    pub fn value(&self, x: bool, y: bool) -> f64 {
        self.values[x as usize][y as usize]
    }

    /// Null probability of a present edge, `ps`.
    pub fn null_edge_prob(&self) -> f64 {
        self.p * self.s
    }
}

pub fn edge_lr(x: bool, y: bool, params: &ModelParams) -> Result<f64> {
    Ok(EdgeKernel::new(params)?.value(x, y))
}

/// `M(x, y) = ℓ(x, y) · Q[B_e = y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub entries: [[f64; 2]; 2],
}

impl TransferMatrix {
    pub fn row_sums(&self) -> [f64; 2] {
        [
            self.entries[0][0] + self.entries[0][1],
            self.entries[1][0] + self.entries[1][1],
        ]
    }

    /// Eigenvalues, larger first, from the characteristic polynomial.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [c, d]] = self.entries;
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let big = 0.5 * (tr + disc);
        // product form avoids cancellation in the small root
        let small = if big != 0.0 {
            det / big
        } else {
            0.5 * (tr - disc)
        };
        [big, small]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..2)
                    .map(|k| self.entries[i][k] * other.entries[k][j])
                    .sum();
            }
        }
        Self { entries: out }
    }

    pub fn trace_of_power(&self, k: u32) -> f64 {
        let mut acc = Self {
            entries: [[1.0, 0.0], [0.0, 1.0]],
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc.entries[0][0] + acc.entries[1][1]
    }
}

pub fn transfer_matrix(params: &ModelParams) -> Result<TransferMatrix> {
    let kernel = EdgeKernel::new(params)?;
    let q1 = kernel.null_edge_prob();
    let null = [1.0 - q1, q1];
    let mut entries = [[0.0; 2]; 2];
    for (row, kernel_row) in entries.iter_mut().zip(&kernel.values) {
        for y in 0..2 {
            row[y] = kernel_row[y] * null[y];
        }
    }
    Ok(TransferMatrix { entries })
}

/// Joint law of `(A_e, B_{π*(e)})` for one pair, obtained by summing over the
/// parent indicator and the two retention coins.
pub fn pair_joint_pmf(params: &ModelParams) -> [[f64; 2]; 2] {
    let p = params.p();
    let s = params.s;
    let bern = |q: f64, b: u8| if b == 1 { q } else { 1.0 - q };
    let mut table = [[0.0; 2]; 2];
    for i in 0..2u8 {
        for j in 0..2u8 {
            for k in 0..2u8 {
                let w = bern(p, i) * bern(s, j) * bern(s, k);
                table[(i & j) as usize][(i & k) as usize] += w;
            }
        }
    }
    table
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_EXACT_N {
        return Err(Error::Capacity {
            what: "vertex count for exact likelihood",
            value: n,
            limit: MAX_EXACT_N,
        });
    }
    Ok(())
}

/// `hist[m]` = number of relabelings π under which exactly `m` edges of
/// `left` map onto edges of `right`.
pub fn overlap_histogram(left: &Graph, right: &Graph) -> Result<Vec<u64>> {
    check_same_n(left.n(), right.n())?;
    let n = left.n();
    check_capacity(n)?;
    let a = left.adjacency_bits().expect("bitset for small n");
    let b = right.adjacency_bits().expect("bitset for small n");
    // earlier neighbours of each vertex in `left`
    let earlier: Vec<u64> = (0..n).map(|k| a[k] & ((1u64 << k) - 1)).collect();
    let mut hist = vec![0u64; left.edge_count().min(right.edge_count()) + 1];
    let mut image = [0usize; MAX_EXACT_N];
    overlap_dfs(0, n, 0, 0, &earlier, b, &mut image, &mut hist);
    Ok(hist)
}

#[allow(clippy::too_many_arguments)]
fn overlap_dfs(
    depth: usize,
    n: usize,
    used: u64,
    overlap: usize,
    earlier: &[u64],
    b: &[u64],
    image: &mut [usize; MAX_EXACT_N],
    hist: &mut [u64],
) {
    if depth == n {
        hist[overlap] += 1;
        return;
    }
    let mut targets = 0u64;
    let mut nb = earlier[depth];
    while nb != 0 {
        let i = nb.trailing_zeros() as usize;
        targets |= 1 << image[i];
        nb &= nb - 1;
    }
    let mut free = !used & ((1u64 << n) - 1);
    while free != 0 {
        let v = free.trailing_zeros() as usize;
        free &= free - 1;
        image[depth] = v;
        let gained = (targets & b[v]).count_ones() as usize;
        overlap_dfs(
            depth + 1,
            n,
            used | 1 << v,
            overlap + gained,
            earlier,
            b,
            image,
            hist,
        );
    }
}

/// Exponents of `ℓ(0,0), ℓ(1,0), ℓ(0,1), ℓ(1,1)` for overlap `m`.
#[inline]
fn kernel_exponents(pairs: usize, a: usize, b: usize, m: usize) -> [usize; 4] {
    [pairs + m - a - b, a - m, b - m, m]
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Floating-point evaluator for `L(A, B)` that caches kernel logarithms.
#[derive(Debug, Clone)]
pub struct LikelihoodRatio {
    n: usize,
    log_kernel: [f64; 4],
    ln_n_factorial: f64,
}

impl LikelihoodRatio {
    pub fn new(params: &ModelParams) -> Result<Self> {
        check_capacity(params.n)?;
        let k = EdgeKernel::new(params)?;
        Ok(Self {
            n: params.n,
            log_kernel: [
                k.values[0][0].ln(),
                k.values[1][0].ln(),
                k.values[0][1].ln(),
                k.values[1][1].ln(),
            ],
            ln_n_factorial: ln_factorial(params.n),
        })
    }

    /// `ln L(A, B)`, accumulated with log-sum-exp over the overlap histogram.
    pub fn log_eval(&self, left: &Graph, right: &Graph) -> Result<f64> {
        check_same_n(self.n, left.n())?;
        let hist = overlap_histogram(left, right)?;
        Ok(self.log_from_histogram(&hist, left.edge_count(), right.edge_count()))
    }

    pub fn eval(&self, left: &Graph, right: &Graph) -> Result<f64> {
        Ok(self.log_eval(left, right)?.exp())
    }

    pub(crate) fn log_from_histogram(&self, hist: &[u64], a: usize, b: usize) -> f64 {
        let pairs = self.n * (self.n - 1) / 2;
        let terms: Vec<f64> = hist
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(m, &c)| {
                let e = kernel_exponents(pairs, a, b, m);
                let lw: f64 = e
                    .iter()
                    .zip(&self.log_kernel)
                    .filter(|(&k, _)| k > 0)
                    .map(|(&k, &l)| k as f64 * l)
                    .sum();
                (c as f64).ln() + lw
            })
            .filter(|t| t.is_finite())
            .collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
        max + sum.ln() - self.ln_n_factorial
    }
}

/// `L(A, B)` in floating point.
pub fn likelihood_ratio_exact(left: &Graph, right: &Graph, params: &ModelParams) -> Result<f64> {
    LikelihoodRatio::new(params)?.eval(left, right)
}

/// Exact rational parameters: the binary values of `λ` and `s` are taken
/// literally, so every identity holds with zero rounding.
#[derive(Debug, Clone)]
pub struct RationalKernel {
    pub n: usize,
    pub p: BigRational,
    pub s: BigRational,
    /// `ℓ(0,0), ℓ(1,0), ℓ(0,1), ℓ(1,1)`
    pub values: [BigRational; 4],
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite parameter")
}

impl RationalKernel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        EdgeKernel::new(params)?;
        let one = BigRational::one();
        let p = rational(params.lambda) / BigRational::from_integer(BigInt::from(params.n));
        let s = rational(params.s);
        let ps = &p * &s;
        let q = &one - &ps;
        let two = BigRational::from_integer(BigInt::from(2));
        let both_absent = (&one - &two * &ps + &ps * &s) / (&q * &q);
        let one_present = (&one - &s) / &q;
        let both_present = &one / &p;
        Ok(Self {
            n: params.n,
            p,
            s,
            values: [both_absent, one_present.clone(), one_present, both_present],
        })
    }

    /// Null probability of a present edge.
    pub fn null_edge_prob(&self) -> BigRational {
        &self.p * &self.s
    }

    pub fn from_histogram(&self, hist: &[u64], a: usize, b: usize) -> BigRational {
        let pairs = self.n * (self.n - 1) / 2;
        let mut total = BigRational::zero();
        for (m, &c) in hist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = BigRational::from_integer(BigInt::from(c));
            for (k, v) in kernel_exponents(pairs, a, b, m).iter().zip(&self.values) {
                if *k > 0 {
                    term *= Pow::pow(v, *k as u32);
                }
            }
            total += term;
        }
        let fact: BigInt = (1..=self.n).map(BigInt::from).product();
        total / BigRational::from_integer(fact)
    }
}

/// `L(A, B)` in exact rational arithmetic.
pub fn likelihood_ratio_rational(
    left: &Graph,
    right: &Graph,
    params: &ModelParams,
) -> Result<BigRational> {
    let kernel = RationalKernel::new(params)?;
    let hist = overlap_histogram(left, right)?;
    Ok(kernel.from_histogram(&hist, left.edge_count(), right.edge_count()))
}

/// Largest `n` for which all graph pairs are enumerated (2⁶ × 2⁶ at n = 4).
pub const MAX_ENUMERATION_N: usize = 4;

/// Calls `f` on every graph on `n` vertices.
pub fn for_each_graph(n: usize, mut f: impl FnMut(&Graph)) {
    let pairs = n * n.saturating_sub(1) / 2;
    for mask in 0u64..(1u64 << pairs) {
        let mut k = 0;
        let g = Graph::from_pair_predicate(n, |_, _| {
            k += 1;
            mask >> (k - 1) & 1 == 1
        });
        f(&g);
    }
}

/// `E_Q[L]` by summing `Q(A, B) · L(A, B)` over every pair of graphs, in
/// exact arithmetic. Pairs are grouped by `(|A|, |B|, overlap histogram)`,
/// which determines both factors.
pub fn null_expectation_exact(params: &ModelParams) -> Result<BigRational> {
    let n = params.n;
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity {
            what: "vertex count for full pair enumeration",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let kernel = RationalKernel::new(params)?;
    let mut graphs = Vec::new();
    for_each_graph(n, |g| graphs.push(g.clone()));
    let mut groups: HashMap<(usize, usize, Vec<u64>), u64> = HashMap::new();
    for a in &graphs {
        for b in &graphs {
            let hist = overlap_histogram(a, b)?;
            *groups
                .entry((a.edge_count(), b.edge_count(), hist))
                .or_default() += 1;
        }
    }
    let q1 = kernel.null_edge_prob();
    let q0 = BigRational::one() - &q1;
    let pairs = n * n.saturating_sub(1) / 2;
    let graph_prob =
        |e: usize| -> BigRational { Pow::pow(&q1, e as u32) * Pow::pow(&q0, (pairs - e) as u32) };
    let mut total = BigRational::zero();
    let mut keys: Vec<_> = groups.into_iter().collect();
    keys.sort();
    for ((a, b, hist), count) in keys {
        let l = kernel.from_histogram(&hist, a, b);
        total += graph_prob(a) * graph_prob(b) * l * BigRational::from_integer(BigInt::from(count));
    }
    Ok(total)
}

/// Decimal approximation of a rational.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
