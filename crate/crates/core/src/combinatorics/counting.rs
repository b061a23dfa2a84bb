use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::canon::{count_automorphisms, UnlabeledGraph, MAX_CANON_N};
use crate::error::{Error, Result};
use crate::model::{apply_permutation, for_each_permutation, Graph, Permutation};

/// Largest `n` for which stabilizers are counted by enumerating `S_n`.
pub const MAX_STABILIZER_ENUMERATION_N: usize = 8;

fn falling_factorial(n: usize, k: usize) -> BigUint {
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
}

fn factorial(n: usize) -> BigUint {
    falling_factorial(n, n)
}

/// Number of copies of `g` in `K_n`: `n! / ((n - |V|)! · |Aut(g)|)`.
pub fn sub_count(g: &UnlabeledGraph, n: usize) -> Result<BigUint> {
    let v = g.vertex_count();
    if v > n {
        return Err(Error::ParameterDomain(format!(
            "pattern has {v} vertices but host has only {n}"
        )));
    }
    let aut = count_automorphisms(&g.representative());
    Ok(falling_factorial(n, v) / BigUint::from(aut))
}

/// `#{σ ∈ S_n : σ(J) = J} = (n - |V(J)|)! · |Aut(J)|`, where `V(J)` are the
/// vertices covered by edges.
pub fn stabilizer_count(j: &Graph, n: usize) -> Result<BigUint> {
    if j.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: j.n(),
        });
    }
    let core = j.without_isolated();
    if core.n() > MAX_CANON_N {
        return Err(Error::Capacity {
            what: "covered vertices for automorphism count",
            value: core.n(),
            limit: MAX_CANON_N,
        });
    }
    Ok(factorial(n - core.n()) * BigUint::from(count_automorphisms(&core)))
}

/// Same count by checking every permutation of `S_n`.
pub fn stabilizer_count_exhaustive(j: &Graph) -> Result<u64> {
    let n = j.n();
    if n > MAX_STABILIZER_ENUMERATION_N {
        return Err(Error::Capacity {
            what: "vertex count for stabilizer enumeration",
            value: n,
            limit: MAX_STABILIZER_ENUMERATION_N,
        });
    }
    let mut count = 0;
    for_each_permutation(n, |p| {
        let perm = Permutation::new(p.to_vec()).unwrap();
        if apply_permutation(j, &perm).unwrap() == *j {
            count += 1;
        }
    });
    Ok(count)
}

/// Number of `k`-cycles in `K_n`: `C(n, k) · (k - 1)! / 2 = n! / (2k (n - k)!)`.
pub fn count_k_cycles(n: usize, k: usize) -> Result<BigUint> {
    if k < 3 || k > n {
        return Err(Error::ParameterDomain(format!(
            "cycle length k = {k} must satisfy 3 <= k <= n = {n}"
        )));
    }
    Ok(falling_factorial(n, k) / BigUint::from(2 * k))
}
