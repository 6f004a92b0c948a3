//! Graph-theoretic test for structurally fixed modes.
//!
//! A feedback pattern leaves no structurally fixed modes exactly when, in
//! the closed-loop digraph, (a) every state vertex lies in a strongly
//! connected component that contains a feedback edge, and (b) some family
//! of node-disjoint cycles covers all state vertices.

use crate::bipartite::spanning_cycle_family;
use crate::graph::{scc, NodeId, SccDecomposition};
use crate::system::{
    build_closed_loop_digraph, EdgeKind, FeedbackPattern, StructuredSystem, SystemDigraph,
    SystemError,
};
use std::collections::BTreeSet;

/// Verdict of the fixed-mode check, with per-condition witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfmReport {
    /// Every state vertex sits in a component containing a feedback edge.
    pub condition_a: bool,
    /// Node-disjoint cycles cover all state vertices.
    pub condition_b: bool,
    /// Both conditions hold, so no structurally fixed modes exist.
    pub no_sfm: bool,
    /// State indices violating condition (a), ascending.
    pub violating_states_a: Vec<usize>,
    /// Covering cycles (vertex ids of the closed-loop digraph), present
    /// exactly when condition (b) holds.
    pub cycle_cover_witness: Option<Vec<Vec<NodeId>>>,
    /// For each component id: whether it contains a feedback edge.
    pub scc_summary: Vec<bool>,
}

fn condition_a_parts(sd: &SystemDigraph, d: &SccDecomposition) -> (bool, Vec<usize>, Vec<bool>) {
    let mut has_feedback = vec![false; d.component_count()];
    for (from, to) in sd.graph().edges() {
        if sd.edge_kind(from, to) == EdgeKind::Feedback && d.component_of(from) == d.component_of(to)
        {
            has_feedback[d.component_of(from)] = true;
        }
    }
    let violating: Vec<usize> = (0..sd.state_count())
        .filter(|&i| !has_feedback[d.component_of(sd.state_vertex(i))])
        .collect();
    (violating.is_empty(), violating, has_feedback)
}

/// Condition (a): every state vertex lies in a strongly connected component
/// containing a feedback edge. Returns the verdict and the violating states.
pub fn check_condition_a(sd: &SystemDigraph) -> (bool, Vec<usize>) {
    let d = scc(sd.graph());
    let (ok, violating, _) = condition_a_parts(sd, &d);
    (ok, violating)
}

/// Condition (b): some family of node-disjoint cycles covers every state
/// vertex. Returns the verdict and a covering witness on success.
pub fn check_condition_b(sd: &SystemDigraph) -> (bool, Option<Vec<Vec<NodeId>>>) {
    let states: BTreeSet<NodeId> = (0..sd.state_count()).collect();
    let witness = spanning_cycle_family(sd.graph(), &states)
        .expect("state vertices are in range");
    (witness.is_some(), witness)
}

/// Full fixed-mode check of `sys` closed by `k`.
pub fn check_no_sfm(
    sys: &StructuredSystem,
    k: &FeedbackPattern,
) -> Result<SfmReport, SystemError> {
    let sd = build_closed_loop_digraph(sys, k)?;
    let d = scc(sd.graph());
    let (condition_a, violating_states_a, scc_summary) = condition_a_parts(&sd, &d);
    let (condition_b, cycle_cover_witness) = check_condition_b(&sd);
    Ok(SfmReport {
        condition_a,
        condition_b,
        no_sfm: condition_a && condition_b,
        violating_states_a,
        cycle_cover_witness,
        scc_summary,
    })
}

/// Fixed-mode check with every feedback link enabled.
///
/// A negative verdict here means no feedback pattern at all can avoid
/// structurally fixed modes for this system, since both conditions are
/// monotone in the pattern.
pub fn check_feasibility(sys: &StructuredSystem) -> Result<SfmReport, SystemError> {
    let full = FeedbackPattern::full(sys.input_count(), sys.output_count())?;
    check_no_sfm(sys, &full)
}
