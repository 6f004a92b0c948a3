//! Structural analysis of sparse linear system patterns.
//!
//! A structured system is given by the sparsity patterns of its state,
//! input and output matrices; only the zero/nonzero structure matters.
//! This crate builds the associated digraphs, decides whether an output
//! feedback pattern leaves structurally fixed modes, and computes a
//! sparsest feedback pattern for structurally cyclic systems with
//! dedicated inputs and outputs, in time linear in the number of states.
//!
//! Modules:
//! - [`graph`]: digraph storage, strongly connected components, condensation
//! - [`bipartite`]: maximum matching and cycle-family covers
//! - [`system`]: pattern matrices, system digraphs, precondition checks
//! - [`sfm`]: the two fixed-mode graph conditions and their witnesses
//! - [`augment`]: minimum strong-connectivity augmentation
//! - [`select`]: sparsest feedback selection and component merging
//! - [`oracle`]: brute-force reference search and random instance generation
//! - [`fixtures`]: small example systems shared by tests and benches

pub mod augment;
pub mod bipartite;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod select;
pub mod sfm;
pub mod system;

pub use augment::{augment_strong_connectivity, AugmentationResult};
pub use bipartite::{
    has_perfect_matching, has_spanning_cycle_family, max_matching, spanning_cycle_family,
    BipartiteError, BipartiteGraph, Matching,
};
pub use graph::{
    is_strongly_connected, reachable_from, scc, ComponentId, Digraph, GraphError, NodeId,
    SccDecomposition,
};
pub use oracle::{
    brute_force_min_feedback, brute_force_min_feedback_seq, generate_random_system, OracleError,
    OracleResult,
};
pub use select::{
    count_state_covering_sccs, merge_scc_pair, select_sparsest_feedback, SelectError,
    SelectionCase, SelectionResult,
};
pub use sfm::{check_condition_a, check_condition_b, check_feasibility, check_no_sfm, SfmReport};
pub use system::{
    build_closed_loop_digraph, build_state_digraph, check_assumption, state_bipartite,
    AssumptionVerdict, EdgeKind, FeedbackPattern, StructuredMatrix, StructuredSystem,
    SystemDigraph, SystemError, VertexKind,
};
