//! Tree and forest enumeration, Otter-constant estimation, canonical forms,
//! automorphism/embedding counts, stabilizers and cycle counts.

pub mod canon;
pub mod counting;
pub mod forest;
pub mod trees;

pub use canon::{automorphism_count, canonical_order, UnlabeledGraph, MAX_CANON_N};
pub use counting::{
    count_k_cycles, stabilizer_count, stabilizer_count_exhaustive, sub_count,
    MAX_STABILIZER_ENUMERATION_N,
};
pub use forest::{
    forest_series, forest_weight_sum, forest_weight_sum_from, series_tail_bound, ForestWeightSum,
};
pub use trees::{
    count_unlabeled_trees, estimate_otter_constant, estimate_otter_constant_with, rooted_tree_code,
    tree_code, tree_from_code, ForestProfile, TreeCatalog, TreeCountTable, OTTER_POLY_EXPONENT,
};
