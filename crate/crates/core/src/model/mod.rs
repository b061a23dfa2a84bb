//! Parameters, graphs, permutations and samplers for the correlated pair and
//! its independent null.

pub mod edgelist;
pub mod graph;
pub mod params;
pub mod perm;
pub mod sampling;

pub use edgelist::{parse_edge_list, read_edge_list, save_edge_list, write_edge_list};
pub use graph::{apply_permutation, intersection_graph, pair_from_index, pair_index, Graph};
pub use params::{check_assumptions, AssumptionReport, ModelParams, DEFAULT_EPSILON, OTTER_ALPHA};
pub use perm::{for_each_permutation, Permutation};
pub use sampling::{
    sample_correlated, sample_erdos_renyi, sample_intersection_direct, sample_null,
    CorrelatedSample,
};
