//! Edge orbits of the pair bijection induced by `σ = (π*)⁻¹ ∘ π`.
//!
//! Orbits keep their traversal order `e, Σe, Σ²e, …`: the cyclic chain is what
//! the per-orbit expectation depends on.

use crate::error::{Error, Result};
use crate::likelihood::EdgeKernel;
use crate::model::graph::{check_same_n, pair_index};
use crate::model::{Graph, ModelParams, Permutation};

/// Largest orbit length handled by the `8^k`-state enumeration.
pub const MAX_ENUMERATED_ORBIT: usize = 6;

/// `(i, j) ↦ (σ(i), σ(j))` on unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBijection {
    perm: Permutation,
}

impl PairBijection {
    pub fn new(perm: Permutation) -> Self {
        Self { perm }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    #[inline]
    pub fn apply(&self, (i, j): (usize, usize)) -> (usize, usize) {
        let (a, b) = (self.perm.apply(i), self.perm.apply(j));
        (a.min(b), a.max(b))
    }
}

/// `(π*)⁻¹ ∘ π`.
pub fn relative_permutation(pi_star: &Permutation, pi: &Permutation) -> Result<Permutation> {
    pi_star.inverse().compose(pi)
}

/// Partition of all unordered pairs into orbits of the pair bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    n: usize,
    sigma: Permutation,
    orbits: Vec<Vec<(usize, usize)>>,
    /// orbit id of each pair, by lexicographic pair index
    index: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn orbits(&self) -> &[Vec<(usize, usize)>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_id(&self, i: usize, j: usize) -> usize {
        self.index[pair_index(self.n, i.min(j), i.max(j))]
    }

    /// Orbit sizes, sorted ascending.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// The union of the given orbits as a graph.
    pub fn union_graph(&self, ids: &[usize]) -> Graph {
        Graph::from_edges(
            self.n,
            ids.iter().flat_map(|&o| self.orbits[o].iter().copied()),
        )
        .expect("orbits are disjoint pair sets")
    }
}

pub fn orbit_decomposition(sigma: &Permutation) -> OrbitDecomposition {
    let n = sigma.len();
    let pairs = n * n.saturating_sub(1) / 2;
    let bij = PairBijection::new(sigma.clone());
    let mut index = vec![usize::MAX; pairs];
    let mut orbits = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if index[k] == usize::MAX {
                let id = orbits.len();
                let mut orbit = Vec::new();
                let mut e = (i, j);
                loop {
                    index[pair_index(n, e.0, e.1)] = id;
                    orbit.push(e);
                    e = bij.apply(e);
                    if e == (i, j) {
                        break;
                    }
                }
                orbits.push(orbit);
            }
            k += 1;
        }
    }
    OrbitDecomposition {
        n,
        sigma: sigma.clone(),
        orbits,
        index,
    }
}

/// Which orbits lie entirely inside a graph `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationView {
    /// ids of orbits with every pair in `h`
    pub full_orbits: Vec<usize>,
    /// ids of size-1 orbits not in `h`
    pub singleton_misses: Vec<usize>,
    /// union of the full orbits
    pub realization: Graph,
}

pub fn full_orbits(decomp: &OrbitDecomposition, h: &Graph) -> Result<RealizationView> {
    check_same_n(decomp.n, h.n())?;
    let mut full = Vec::new();
    let mut misses = Vec::new();
    for (id, orbit) in decomp.orbits.iter().enumerate() {
        if orbit.iter().all(|&(i, j)| h.has_edge(i, j)) {
            full.push(id);
        } else if orbit.len() == 1 {
            misses.push(id);
        }
    }
    let realization = decomp.union_graph(&full);
    Ok(RealizationView {
        full_orbits: full,
        singleton_misses: misses,
        realization,
    })
}

/// True iff `j` is a union of whole orbits, i.e. the pair bijection maps its
/// edge set onto itself.
pub fn is_legal_realization(j: &Graph, decomp: &OrbitDecomposition) -> Result<bool> {
    check_same_n(decomp.n, j.n())?;
    let bij = PairBijection::new(decomp.sigma.clone());
    Ok(j.edges().all(|e| {
        let (a, b) = bij.apply(e);
        j.has_edge(a, b)
    }))
}

fn check_orbit_len(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ParameterDomain(
            "orbit length must be positive".into(),
        ));
    }
    Ok(())
}

/// `E[Π_{e∈O} ℓ(A_e, B_{Π(e)})] = 1 + ρ^{2k}` for an orbit of length `k`.
pub fn orbit_unconditional_expectation(k: usize, params: &ModelParams) -> Result<f64> {
    check_orbit_len(k)?;
    EdgeKernel::new(params)?;
    Ok(1.0 + params.rho().powi(2 * k as i32))
}

/// Expectation of the orbit product given the orbit is not entirely in the
/// intersection graph: `(1 + ρ^{2k} - s^{2k}) / (1 - (ps²)^k)`.
pub fn orbit_conditional_expectation(k: usize, params: &ModelParams) -> Result<f64> {
    check_orbit_len(k)?;
    let q = params.intersection_edge_prob();
    if q >= 1.0 {
        return Err(Error::Singular(format!("p*s^2 = {q} >= 1")));
    }
    EdgeKernel::new(params)?;
    let k = k as i32;
    let rho = params.rho();
    let s = params.s;
    Ok((1.0 + rho.powi(2 * k) - s.powi(2 * k)) / (1.0 - q.powi(k)))
}

/// Moments of the orbit product obtained by enumerating the parent-level
/// indicators `(I, J, K)` of the `k` parent pairs along a length-`k` orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitEnumeration {
    pub unconditional: f64,
    pub conditional: f64,
    /// probability that every pair of the orbit is in the intersection graph
    pub all_present_prob: f64,
    /// product value in that state
    pub all_present_product: f64,
}

/// Enumerates all `8^k` parent states. Along the orbit, pair `t` sees
/// `x_t = I_t J_t` and `y_t = I_{t+1} K_{t+1}` (indices mod `k`).
pub fn enumerate_orbit_states(k: usize, params: &ModelParams) -> Result<OrbitEnumeration> {
    check_orbit_len(k)?;
    if k > MAX_ENUMERATED_ORBIT {
        return Err(Error::Capacity {
            what: "orbit length for state enumeration",
            value: k,
            limit: MAX_ENUMERATED_ORBIT,
        });
    }
    let kernel = EdgeKernel::new(params)?;
    let (p, s) = (params.p(), params.s);
    let bern = |q: f64, bit: u32| if bit == 1 { q } else { 1.0 - q };
    let all_present = (1u32 << (3 * k)) - 1;
    let mut total = 0.0;
    let mut excluded = (0.0, 0.0);
    for state in 0u32..(1 << (3 * k)) {
        let bits = |t: usize| {
            let w = state >> (3 * t);
            (w & 1, w >> 1 & 1, w >> 2 & 1)
        };
        let mut weight = 1.0;
        let mut product = 1.0;
        for t in 0..k {
            let (i, j, kk) = bits(t);
            weight *= bern(p, i) * bern(s, j) * bern(s, kk);
            let (i_next, _, k_next) = bits((t + 1) % k);
            product *= kernel.value(i & j == 1, i_next & k_next == 1);
        }
        total += weight * product;
        if state == all_present {
            excluded = (weight, product);
        }
    }
    let (pa, prod) = excluded;
    Ok(OrbitEnumeration {
        unconditional: total,
        conditional: (total - pa * prod) / (1.0 - pa),
        all_present_prob: pa,
        all_present_product: prod,
    })
}

/// `(enumerated E[Π ℓ], 1 + ρ^{2k})`.
pub fn orbit_trace_identity_check(k: usize, params: &ModelParams) -> Result<(f64, f64)> {
    let lhs = enumerate_orbit_states(k, params)?.unconditional;
    Ok((lhs, orbit_unconditional_expectation(k, params)?))
}

/// Upper bound `(λs²/n)^{|E(J)|} · (1 - λs²/n)^{|singleton misses|}` on the
/// probability that the full-orbit set equals `J`.
pub fn realization_prob_upper_bound(view: &RealizationView, params: &ModelParams) -> f64 {
    let q = params.intersection_edge_prob();
    q.powi(view.realization.edge_count() as i32)
        * (1.0 - q).powi(view.singleton_misses.len() as i32)
}

/// Exact probability that the full-orbit set equals the view's realization,
/// using independence across orbits: full orbits contribute `q^{|O|}`, all
/// others `1 - q^{|O|}`.
pub fn realization_probability(
    decomp: &OrbitDecomposition,
    view: &RealizationView,
    params: &ModelParams,
) -> f64 {
    let q = params.intersection_edge_prob();
    let mut full = vec![false; decomp.len()];
    for &id in &view.full_orbits {
        full[id] = true;
    }
    decomp
        .orbits
        .iter()
        .zip(&full)
        .map(|(o, &f)| {
            let qo = q.powi(o.len() as i32);
            if f {
                qo
            } else {
                1.0 - qo
            }
        })
        .product()
}
