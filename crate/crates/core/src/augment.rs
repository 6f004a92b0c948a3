//! Minimum strong-connectivity augmentation.
//!
//! Adds the fewest edges that make a digraph strongly connected. Working on
//! the condensation, classify components as source-only, sink-only or
//! isolated; with `s`, `t` and `q` of each, the optimum is
//! `max(s + q, t + q)` edges (zero if already strongly connected).
//!
//! The construction pairs sources with sinks by a single sweep of
//! early-stopping depth-first searches sharing one visited set: each
//! source claims the first still-unvisited sink its search reaches. The
//! sweep guarantees three facts the edge stitching relies on: every paired
//! source reaches its sink; every unmatched source reaches some paired
//! sink (its blocked path enters a vertex that was on the discovery stack
//! of a successful search, which continues to that search's sink); and
//! every unmatched sink is reachable from some paired source (its first
//! blocking vertex belongs to a search that succeeded elsewhere). Paired
//! chains are then linked into one cycle through the isolated components,
//! and leftovers are spliced in with one edge each.

use crate::graph::{scc, ComponentId, Digraph, GraphError, NodeId};

/// Outcome of the augmentation: the edges to add and a census of the
/// condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationResult {
    added_edges: Vec<(NodeId, NodeId)>,
    source_components: usize,
    sink_components: usize,
    isolated_components: usize,
}

impl AugmentationResult {
    /// Edges to add, as concrete node pairs.
    pub fn added_edges(&self) -> &[(NodeId, NodeId)] {
        &self.added_edges
    }

    /// Components with outgoing condensation edges only.
    pub fn source_components(&self) -> usize {
        self.source_components
    }

    /// Components with incoming condensation edges only.
    pub fn sink_components(&self) -> usize {
        self.sink_components
    }

    /// Components with no condensation edges at all.
    pub fn isolated_components(&self) -> usize {
        self.isolated_components
    }
}

/// Computes a minimum set of edges whose addition makes `g` strongly
/// connected. Errors on the empty graph.
///
/// Deterministic: components are processed in ascending id order and every
/// added condensation edge is lifted to the smallest node of each endpoint
/// component.
pub fn augment_strong_connectivity(g: &Digraph) -> Result<AugmentationResult, GraphError> {
    if g.node_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let d = scc(g);
    let c = d.component_count();
    let cond = d.condensation();

    let mut has_in = vec![false; c];
    let mut has_out = vec![false; c];
    for (a, b) in cond.edges() {
        has_out[a] = true;
        has_in[b] = true;
    }
    let sources: Vec<ComponentId> = (0..c).filter(|&i| !has_in[i] && has_out[i]).collect();
    let sinks: Vec<ComponentId> = (0..c).filter(|&i| has_in[i] && !has_out[i]).collect();
    let isolated: Vec<ComponentId> = (0..c).filter(|&i| !has_in[i] && !has_out[i]).collect();

    if c == 1 {
        return Ok(AugmentationResult {
            added_edges: Vec::new(),
            source_components: 0,
            sink_components: 0,
            isolated_components: 0,
        });
    }

    let is_sink = {
        let mut flags = vec![false; c];
        for &s in &sinks {
            flags[s] = true;
        }
        flags
    };
    let (pairs, unmatched_sources) = pair_sources_to_sinks(cond, &is_sink, &sources);
    let matched_sink = {
        let mut flags = vec![false; c];
        for &(_, w) in &pairs {
            flags[w] = true;
        }
        flags
    };
    let unmatched_sinks: Vec<ComponentId> =
        sinks.iter().copied().filter(|&w| !matched_sink[w]).collect();

    let mut new_cond_edges: Vec<(ComponentId, ComponentId)> = Vec::new();
    if pairs.is_empty() {
        // No sources or sinks at all: every component is isolated, so a
        // single ring through them is optimal.
        debug_assert!(sources.is_empty() && sinks.is_empty() && isolated.len() == c);
        for i in 0..isolated.len() {
            new_cond_edges.push((isolated[i], isolated[(i + 1) % isolated.len()]));
        }
    } else {
        let p = pairs.len();
        // Link the paired chains: v0 ~> w0 -> v1 ~> w1 -> ... ~> w(p-1).
        for i in 0..p - 1 {
            new_cond_edges.push((pairs[i].1, pairs[i + 1].0));
        }
        // Splice leftovers. One edge from an unmatched sink to an unmatched
        // source serves both; the rest hook into the main cycle.
        let shared = unmatched_sources.len().min(unmatched_sinks.len());
        for j in 0..shared {
            new_cond_edges.push((unmatched_sinks[j], unmatched_sources[j]));
        }
        for &y in &unmatched_sinks[shared..] {
            new_cond_edges.push((y, pairs[0].0));
        }
        for &x in &unmatched_sources[shared..] {
            new_cond_edges.push((pairs[p - 1].1, x));
        }
        // Close the cycle through the isolated components.
        let mut tail = pairs[p - 1].1;
        for &z in &isolated {
            new_cond_edges.push((tail, z));
            tail = z;
        }
        new_cond_edges.push((tail, pairs[0].0));
    }

    let added_edges: Vec<(NodeId, NodeId)> = new_cond_edges
        .iter()
        .map(|&(ca, cb)| (d.members(ca)[0], d.members(cb)[0]))
        .collect();

    debug_assert_eq!(
        added_edges.len(),
        (sources.len() + isolated.len()).max(sinks.len() + isolated.len())
    );

    Ok(AugmentationResult {
        added_edges,
        source_components: sources.len(),
        sink_components: sinks.len(),
        isolated_components: isolated.len(),
    })
}

/// One early-stopping DFS per source over a shared visited set; the search
/// claims the first unvisited sink it enters and stops there.
fn pair_sources_to_sinks(
    cond: &Digraph,
    is_sink: &[bool],
    sources: &[ComponentId],
) -> (Vec<(ComponentId, ComponentId)>, Vec<ComponentId>) {
    let mut visited = vec![false; cond.node_count()];
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let mut frames: Vec<(ComponentId, usize)> = Vec::new();

    for &s in sources {
        debug_assert!(!visited[s], "sources have no in-edges");
        visited[s] = true;
        frames.clear();
        frames.push((s, 0));
        let mut found = None;
        'search: while let Some(frame) = frames.last_mut() {
            let nbrs = cond.out_neighbors(frame.0);
            if frame.1 == nbrs.len() {
                frames.pop();
                continue;
            }
            let w = nbrs[frame.1];
            frame.1 += 1;
            if !visited[w] {
                visited[w] = true;
                if is_sink[w] {
                    found = Some(w);
                    break 'search;
                }
                frames.push((w, 0));
            }
        }
        match found {
            Some(w) => pairs.push((s, w)),
            None => unmatched.push(s),
        }
    }
    (pairs, unmatched)
}
