//! Sparsest feedback selection for systems with dedicated inputs and
//! outputs.
//!
//! Under the precondition that the input and output patterns are both the
//! identity and the state pattern is structurally cyclic, a sparsest
//! feedback pattern that leaves no structurally fixed modes is read off a
//! minimum strong-connectivity augmentation of the state digraph: each
//! feedback link closes one added edge through the corresponding dedicated
//! output/input pair. If the state digraph is already strongly connected a
//! single link suffices (and at least one link is always required). The
//! whole computation is a constant number of linear-time passes.
//!
//! [`merge_scc_pair`] is the companion rewiring step: it fuses two
//! feedback-carrying strongly connected components of a closed-loop
//! digraph into one without changing the number of links, which is how
//! multi-component solutions are shown to never beat single-component
//! ones.

use crate::augment::{augment_strong_connectivity, AugmentationResult};
use crate::graph::{is_strongly_connected, scc, ComponentId};
use crate::system::{
    build_state_digraph, check_assumption, FeedbackPattern, StructuredSystem, SystemDigraph,
    VertexKind,
};
use thiserror::Error;

/// Failures of selection and component merging.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectError {
    /// The system violates the dedicated-IO / structural-cyclicity
    /// precondition.
    #[error("selection precondition failed: {details}")]
    AssumptionViolated { details: String },
    /// The supplied feedback pattern is not the one embedded in the
    /// digraph.
    #[error("feedback pattern does not match the one embedded in the closed-loop digraph")]
    PatternMismatch,
    /// A component id exceeds the component count.
    #[error("component {component} is out of range: the digraph has {component_count} components")]
    ComponentOutOfRange {
        component: ComponentId,
        component_count: usize,
    },
    /// Merging a component with itself is meaningless.
    #[error("cannot merge a component with itself")]
    SameComponent,
    /// The component holds no state vertex, so merging it cannot help
    /// cover states.
    #[error("component {component} contains no state vertex")]
    NoStateVertex { component: ComponentId },
    /// The component holds no feedback edge to rewire.
    #[error("component {component} contains no feedback edge")]
    NoFeedbackEdge { component: ComponentId },
    /// Every candidate rewiring collides with an existing feedback link,
    /// so no merge conserves cardinality.
    #[error("every rewiring of the chosen components collides with an existing feedback link")]
    NoConservingRewire,
}

/// Shape of the state digraph the selection worked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionCase {
    /// Already strongly connected; one feedback link closes a cycle
    /// through a dedicated output/input pair.
    Irreducible,
    /// Not strongly connected; the pattern mirrors a minimum
    /// augmentation.
    Reducible,
}

/// A sparsest feedback pattern together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionResult {
    k: FeedbackPattern,
    case: SelectionCase,
    augmentation: Option<AugmentationResult>,
}

impl SelectionResult {
    /// The selected pattern.
    pub fn k(&self) -> &FeedbackPattern {
        &self.k
    }

    /// Number of links in the selected pattern.
    pub fn cardinality(&self) -> usize {
        self.k.cardinality()
    }

    pub fn case(&self) -> SelectionCase {
        self.case
    }

    /// The augmentation behind a [`SelectionCase::Reducible`] answer.
    pub fn augmentation(&self) -> Option<&AugmentationResult> {
        self.augmentation.as_ref()
    }
}

/// Computes a minimum-cardinality feedback pattern leaving no structurally
/// fixed modes, for a system with identity input/output patterns and a
/// structurally cyclic state pattern.
///
/// Every added state-digraph edge `x_a -> x_b` becomes the link `(b, a)`
/// (input `b` fed from output `a`). Deterministic for a given system.
pub fn select_sparsest_feedback(sys: &StructuredSystem) -> Result<SelectionResult, SelectError> {
    let verdict = check_assumption(sys);
    if !verdict.all_hold() {
        return Err(SelectError::AssumptionViolated {
            details: verdict.describe(),
        });
    }
    let sd = build_state_digraph(sys.a()).expect("state pattern is square");
    let n = sys.state_count();
    if is_strongly_connected(&sd).expect("dimensions are positive") {
        let k = FeedbackPattern::from_entries(n, n, [(0, 0)]).expect("entry is in range");
        return Ok(SelectionResult {
            k,
            case: SelectionCase::Irreducible,
            augmentation: None,
        });
    }
    let augmentation = augment_strong_connectivity(&sd).expect("graph is nonempty");
    let entries = augmentation.added_edges().iter().map(|&(a, b)| (b, a));
    let k = FeedbackPattern::from_entries(n, n, entries).expect("entries are in range");
    Ok(SelectionResult {
        k,
        case: SelectionCase::Reducible,
        augmentation: Some(augmentation),
    })
}

/// Number of strongly connected components of the closed-loop digraph
/// that contain at least one state vertex.
pub fn count_state_covering_sccs(sd: &SystemDigraph) -> usize {
    let d = scc(sd.graph());
    let mut covers = vec![false; d.component_count()];
    for i in 0..sd.state_count() {
        covers[d.component_of(sd.state_vertex(i))] = true;
    }
    covers.into_iter().filter(|&b| b).count()
}

/// Rewires one feedback link of each component into a crossed pair,
/// fusing the two components into a single strongly connected component
/// while conserving cardinality.
///
/// Given links `(b, a)` inside `scc_i` and `(d, c)` inside `scc_j`, the
/// crossed pair is `(d, a)` and `(b, c)`; the lexicographically smallest
/// choice that collides with no existing link is taken. When no other
/// state-carrying component sits between the two in the condensation, the
/// state-covering component count drops by exactly one (otherwise the
/// merge may absorb the components in between as well).
pub fn merge_scc_pair(
    sd: &SystemDigraph,
    k: &FeedbackPattern,
    scc_i: ComponentId,
    scc_j: ComponentId,
) -> Result<FeedbackPattern, SelectError> {
    if &sd.k_pattern() != k.matrix() {
        return Err(SelectError::PatternMismatch);
    }
    let d = scc(sd.graph());
    let count = d.component_count();
    for component in [scc_i, scc_j] {
        if component >= count {
            return Err(SelectError::ComponentOutOfRange {
                component,
                component_count: count,
            });
        }
    }
    if scc_i == scc_j {
        return Err(SelectError::SameComponent);
    }
    for component in [scc_i, scc_j] {
        let has_state = d
            .members(component)
            .iter()
            .any(|&v| sd.vertex_kind(v) == VertexKind::State);
        if !has_state {
            return Err(SelectError::NoStateVertex { component });
        }
    }
    // Links whose feedback edge has both endpoints inside the component,
    // as (input, output) pairs in ascending order.
    let links_inside = |component: ComponentId| -> Vec<(usize, usize)> {
        let mut links = Vec::new();
        for &v in d.members(component) {
            if sd.vertex_kind(v) != VertexKind::Output {
                continue;
            }
            for &w in sd.graph().out_neighbors(v) {
                if d.component_of(w) == component {
                    links.push((sd.local_index(w), sd.local_index(v)));
                }
            }
        }
        links.sort_unstable();
        links
    };
    let links_i = links_inside(scc_i);
    if links_i.is_empty() {
        return Err(SelectError::NoFeedbackEdge { component: scc_i });
    }
    let links_j = links_inside(scc_j);
    if links_j.is_empty() {
        return Err(SelectError::NoFeedbackEdge { component: scc_j });
    }
    for &(b, a) in &links_i {
        for &(d_in, c) in &links_j {
            if k.matrix().contains(d_in, a) || k.matrix().contains(b, c) {
                continue;
            }
            let entries = k
                .entries()
                .filter(|&e| e != (b, a) && e != (d_in, c))
                .chain([(d_in, a), (b, c)]);
            let merged = FeedbackPattern::from_entries(k.inputs(), k.outputs(), entries)
                .expect("rewired links stay in range");
            debug_assert_eq!(merged.cardinality(), k.cardinality());
            return Ok(merged);
        }
    }
    Err(SelectError::NoConservingRewire)
}
