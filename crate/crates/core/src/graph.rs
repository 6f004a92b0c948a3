//! Digraph storage, strongly connected components, condensation and
//! reachability.

use std::collections::VecDeque;
use thiserror::Error;

/// Vertex index into a [`Digraph`].
pub type NodeId = usize;

/// Index of a strongly connected component.
pub type ComponentId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("empty graph has no connectivity verdict")]
    EmptyGraph,
}

/// Immutable digraph over nodes `0..node_count`, stored as compressed
/// out-edge lists.
///
/// Input edge lists may be unsorted and contain duplicates; construction
/// canonicalizes each adjacency row to sorted order without duplicates.
/// Self-loops are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    node_count: usize,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Digraph {
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
        }
        // Bucket edges by source, then sort and dedup each row in place.
        let mut counts = vec![0usize; node_count + 1];
        for &(u, _) in edges {
            counts[u + 1] += 1;
        }
        for i in 0..node_count {
            counts[i + 1] += counts[i];
        }
        let mut targets = vec![0usize; edges.len()];
        let mut fill = counts.clone();
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        let mut offsets = vec![0usize; node_count + 1];
        let mut write = 0usize;
        for u in 0..node_count {
            let (lo, hi) = (counts[u], counts[u + 1]);
            targets[lo..hi].sort_unstable();
            let row_start = write;
            for idx in lo..hi {
                let v = targets[idx];
                if write > row_start && targets[write - 1] == v {
                    continue;
                }
                targets[write] = v;
                write += 1;
            }
            offsets[u + 1] = write;
        }
        targets.truncate(write);
        Ok(Digraph {
            node_count,
            offsets,
            targets,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of distinct edges after canonicalization.
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Out-neighbors of `v` in ascending order.
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// All edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count && self.out_neighbors(u).binary_search(&v).is_ok()
    }
}

/// Partition of a digraph into strongly connected components.
///
/// Component ids are assigned in reverse topological order of the
/// condensation: every condensation edge goes from a higher id to a
/// lower one.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    component_of: Vec<ComponentId>,
    members: Vec<Vec<NodeId>>,
    condensation: Digraph,
}

impl SccDecomposition {
    pub fn component_count(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, v: NodeId) -> ComponentId {
        self.component_of[v]
    }

    /// Members of a component in ascending order.
    pub fn members(&self, c: ComponentId) -> &[NodeId] {
        &self.members[c]
    }

    /// Component digraph with self-loops removed; always acyclic.
    pub fn condensation(&self) -> &Digraph {
        &self.condensation
    }

    pub fn is_single_component(&self) -> bool {
        self.members.len() == 1
    }
}

/// Strongly connected components via Tarjan's algorithm, iteratively.
pub fn scc(g: &Digraph) -> SccDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![UNVISITED; n];
    let mut on_stack = vec![false; n];
    let mut component_of = vec![UNVISITED; n];
    let mut members: Vec<Vec<NodeId>> = Vec::new();
    let mut scc_stack: Vec<NodeId> = Vec::new();
    let mut call_stack: Vec<(NodeId, usize)> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        lowlink[root] = counter;
        counter += 1;
        scc_stack.push(root);
        on_stack[root] = true;
        call_stack.push((root, 0));

        loop {
            let (v, next) = {
                let Some(frame) = call_stack.last_mut() else {
                    break;
                };
                let v = frame.0;
                let nbrs = g.out_neighbors(v);
                if frame.1 < nbrs.len() {
                    let w = nbrs[frame.1];
                    frame.1 += 1;
                    (v, Some(w))
                } else {
                    (v, None)
                }
            };
            match next {
                Some(w) => {
                    if index[w] == UNVISITED {
                        index[w] = counter;
                        lowlink[w] = counter;
                        counter += 1;
                        scc_stack.push(w);
                        on_stack[w] = true;
                        call_stack.push((w, 0));
                    } else if on_stack[w] && index[w] < lowlink[v] {
                        lowlink[v] = index[w];
                    }
                }
                None => {
                    call_stack.pop();
                    if let Some(parent) = call_stack.last() {
                        let p = parent.0;
                        if lowlink[v] < lowlink[p] {
                            lowlink[p] = lowlink[v];
                        }
                    }
                    if lowlink[v] == index[v] {
                        let cid = members.len();
                        let mut comp = Vec::new();
                        loop {
                            let w = scc_stack.pop().expect("component stack underflow");
                            on_stack[w] = false;
                            component_of[w] = cid;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        members.push(comp);
                    }
                }
            }
        }
    }

    let mut cedges = Vec::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (component_of[u], component_of[v]);
        if cu != cv {
            cedges.push((cu, cv));
        }
    }
    let condensation =
        Digraph::new(members.len(), &cedges).expect("component ids are in range");
    SccDecomposition {
        component_of,
        members,
        condensation,
    }
}

/// Whether every node reaches every other node. Errors on the empty graph.
pub fn is_strongly_connected(g: &Digraph) -> Result<bool, GraphError> {
    if g.node_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    Ok(scc(g).is_single_component())
}

/// Forward-reachable set of `start`, including `start`, in ascending order.
pub fn reachable_from(g: &Digraph, start: NodeId) -> Result<Vec<NodeId>, GraphError> {
    if start >= g.node_count() {
        return Err(GraphError::NodeOutOfRange {
            node: start,
            node_count: g.node_count(),
        });
    }
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &w in g.out_neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok((0..g.node_count()).filter(|&v| seen[v]).collect())
}
