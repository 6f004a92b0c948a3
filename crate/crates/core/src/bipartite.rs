//! Bipartite maximum matching and spanning cycle families.

use crate::graph::{Digraph, NodeId};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BipartiteError {
    #[error("left endpoint {node} out of range for {left_count} left nodes")]
    LeftOutOfRange { node: usize, left_count: usize },
    #[error("right endpoint {node} out of range for {right_count} right nodes")]
    RightOutOfRange { node: usize, right_count: usize },
    #[error("perfect matching undefined for unequal sides ({left_count} vs {right_count})")]
    SidesUnequal { left_count: usize, right_count: usize },
    #[error("cover node {node} out of range for graph with {node_count} nodes")]
    CoverOutOfRange { node: usize, node_count: usize },
}

/// Bipartite graph with separately indexed left and right node sets.
///
/// Duplicate edges are dropped on construction; adjacency is sorted.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    left_count: usize,
    right_count: usize,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn new(
        left_count: usize,
        right_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, BipartiteError> {
        let mut adj = vec![Vec::new(); left_count];
        for &(l, r) in edges {
            if l >= left_count {
                return Err(BipartiteError::LeftOutOfRange {
                    node: l,
                    left_count,
                });
            }
            if r >= right_count {
                return Err(BipartiteError::RightOutOfRange {
                    node: r,
                    right_count,
                });
            }
            adj[l].push(r);
        }
        let mut edge_count = 0;
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
            edge_count += row.len();
        }
        Ok(BipartiteGraph {
            left_count,
            right_count,
            adj,
            edge_count,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }
}

/// A matching as (left, right) pairs, sorted by left index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn right_of(&self, left: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&left, |&(l, _)| l)
            .ok()
            .map(|i| self.pairs[i].1)
    }
}

const FREE: usize = usize::MAX;

/// Maximum matching via Hopcroft-Karp.
///
/// Deterministic: free vertices and adjacency are scanned in ascending
/// order, so equal-size matchings always come out the same.
pub fn max_matching(b: &BipartiteGraph) -> Matching {
    let nl = b.left_count;
    let nr = b.right_count;
    let mut match_l = vec![FREE; nl];
    let mut match_r = vec![FREE; nr];
    let mut dist = vec![FREE; nl];
    let mut queue = VecDeque::new();

    loop {
        // BFS phase: layer left vertices starting from the free ones.
        queue.clear();
        for l in 0..nl {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = FREE;
            }
        }
        let mut reachable_free_right = false;
        while let Some(l) = queue.pop_front() {
            for &r in &b.adj[l] {
                let l2 = match_r[r];
                if l2 == FREE {
                    reachable_free_right = true;
                } else if dist[l2] == FREE {
                    dist[l2] = dist[l] + 1;
                    queue.push_back(l2);
                }
            }
        }
        if !reachable_free_right {
            break;
        }
        // DFS phase: augment along layered paths, lowest index first.
        let mut augmented = false;
        for start in 0..nl {
            if match_l[start] == FREE
                && try_augment(b, start, &mut match_l, &mut match_r, &mut dist)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }

    let pairs = (0..nl)
        .filter(|&l| match_l[l] != FREE)
        .map(|l| (l, match_l[l]))
        .collect();
    Matching { pairs }
}

/// Iterative layered DFS from one free left vertex.
fn try_augment(
    b: &BipartiteGraph,
    start: usize,
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    let mut chosen: Vec<usize> = vec![FREE];
    loop {
        let (l, step) = {
            let Some(frame) = stack.last_mut() else {
                return false;
            };
            let l = frame.0;
            if frame.1 < b.adj[l].len() {
                let r = b.adj[l][frame.1];
                frame.1 += 1;
                (l, Some(r))
            } else {
                (l, None)
            }
        };
        match step {
            Some(r) => {
                let l2 = match_r[r];
                if l2 == FREE {
                    // Augment along the whole stack.
                    let depth = stack.len() - 1;
                    chosen[depth] = r;
                    for d in 0..stack.len() {
                        let ld = stack[d].0;
                        let rd = chosen[d];
                        match_l[ld] = rd;
                        match_r[rd] = ld;
                    }
                    return true;
                }
                if dist[l2] == dist[l] + 1 {
                    let depth = stack.len() - 1;
                    chosen[depth] = r;
                    stack.push((l2, 0));
                    chosen.push(FREE);
                }
            }
            None => {
                dist[l] = FREE;
                stack.pop();
                chosen.pop();
            }
        }
    }
}

/// Whether a perfect matching exists. Errors when the sides differ in size.
pub fn has_perfect_matching(b: &BipartiteGraph) -> Result<bool, BipartiteError> {
    if b.left_count != b.right_count {
        return Err(BipartiteError::SidesUnequal {
            left_count: b.left_count,
            right_count: b.right_count,
        });
    }
    Ok(max_matching(b).size() == b.left_count)
}

/// Finds a family of node-disjoint cycles covering every node in
/// `must_cover`, if one exists.
///
/// Reduction: build a bipartite graph with a left and a right copy of every
/// node, one edge per digraph edge, plus an artificial diagonal edge for
/// every node exempt from covering; a perfect matching is then exactly a
/// successor assignment whose non-artificial cycles cover `must_cover`.
///
/// Returned cycles list their nodes in traversal order starting from the
/// smallest node, and are sorted by that smallest node. Only cycles that
/// touch `must_cover` are reported.
pub fn spanning_cycle_family(
    g: &Digraph,
    must_cover: &BTreeSet<NodeId>,
) -> Result<Option<Vec<Vec<NodeId>>>, BipartiteError> {
    let n = g.node_count();
    for &node in must_cover {
        if node >= n {
            return Err(BipartiteError::CoverOutOfRange {
                node,
                node_count: n,
            });
        }
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for v in 0..n {
        if !must_cover.contains(&v) {
            edges.push((v, v));
        }
    }
    let b = BipartiteGraph::new(n, n, &edges)?;
    let m = max_matching(&b);
    if m.size() < n {
        return Ok(None);
    }
    let mut successor = vec![FREE; n];
    for &(l, r) in m.pairs() {
        successor[l] = r;
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        let mut touches_cover = false;
        loop {
            seen[v] = true;
            cycle.push(v);
            touches_cover |= must_cover.contains(&v);
            v = successor[v];
            if v == start {
                break;
            }
        }
        // Successors form a permutation, so each walk from an unseen start
        // closes at that start and the cycle begins at its smallest node.
        if touches_cover {
            cycles.push(cycle);
        }
    }
    Ok(Some(cycles))
}

/// Whether a node-disjoint cycle family covering `must_cover` exists.
pub fn has_spanning_cycle_family(
    g: &Digraph,
    must_cover: &BTreeSet<NodeId>,
) -> Result<bool, BipartiteError> {
    Ok(spanning_cycle_family(g, must_cover)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bip(l: usize, r: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::new(l, r, edges).unwrap()
    }

    #[test]
    fn identity_matches_fully() {
        let b = bip(3, 3, &[(0, 0), (1, 1), (2, 2)]);
        let m = max_matching(&b);
        assert_eq!(m.size(), 3);
        assert_eq!(m.pairs(), &[(0, 0), (1, 1), (2, 2)]);
        assert!(has_perfect_matching(&b).unwrap());
    }

    #[test]
    fn empty_row_blocks_perfection() {
        let b = bip(3, 3, &[(0, 0), (0, 1), (2, 0), (2, 2)]);
        let m = max_matching(&b);
        assert_eq!(m.size(), 2);
        assert!(!has_perfect_matching(&b).unwrap());
    }

    #[test]
    fn complete_two_by_three() {
        let b = bip(2, 3, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(max_matching(&b).size(), 2);
        assert_eq!(
            has_perfect_matching(&b).unwrap_err(),
            BipartiteError::SidesUnequal {
                left_count: 2,
                right_count: 3
            }
        );
    }

    #[test]
    fn construction_rejects_bad_endpoints() {
        assert!(matches!(
            BipartiteGraph::new(2, 2, &[(2, 0)]),
            Err(BipartiteError::LeftOutOfRange { node: 2, .. })
        ));
        assert!(matches!(
            BipartiteGraph::new(2, 2, &[(0, 5)]),
            Err(BipartiteError::RightOutOfRange { node: 5, .. })
        ));
    }

    /// Exhaustive maximum matching by trying all edge subsets.
    fn brute_max_matching(b: &BipartiteGraph) -> usize {
        let edges: Vec<(usize, usize)> = (0..b.left_count())
            .flat_map(|l| b.neighbors(l).iter().map(move |&r| (l, r)))
            .collect();
        assert!(edges.len() <= 16, "oracle guard");
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut used_l = 0u32;
            let mut used_r = 0u32;
            let mut ok = true;
            let mut size = 0;
            for (i, &(l, r)) in edges.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                if used_l & (1 << l) != 0 || used_r & (1 << r) != 0 {
                    ok = false;
                    break;
                }
                used_l |= 1 << l;
                used_r |= 1 << r;
                size += 1;
            }
            if ok && size > best {
                best = size;
            }
        }
        best
    }

    #[test]
    fn matching_size_matches_exhaustive_search() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let nl = 1 + (next() % 5) as usize;
            let nr = 1 + (next() % 5) as usize;
            let mut edges = Vec::new();
            for l in 0..nl {
                for r in 0..nr {
                    if next() % 3 == 0 {
                        edges.push((l, r));
                    }
                }
            }
            edges.truncate(16);
            let b = bip(nl, nr, &edges);
            assert_eq!(
                max_matching(&b).size(),
                brute_max_matching(&b),
                "left {nl} right {nr} edges {edges:?}"
            );
        }
    }

    #[test]
    fn matching_pairs_are_consistent() {
        let b = bip(4, 4, &[(0, 1), (1, 0), (1, 1), (2, 2), (3, 2), (3, 3)]);
        let m = max_matching(&b);
        let mut rights: Vec<usize> = m.pairs().iter().map(|&(_, r)| r).collect();
        rights.sort_unstable();
        rights.dedup();
        assert_eq!(rights.len(), m.size(), "no right node reused");
        for &(l, r) in m.pairs() {
            assert!(b.neighbors(l).contains(&r));
        }
        assert_eq!(m.right_of(2), Some(2));
    }

    fn cover(nodes: &[usize]) -> BTreeSet<usize> {
        nodes.iter().copied().collect()
    }

    #[test]
    fn cycle_family_on_plain_cycle() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let family = spanning_cycle_family(&g, &cover(&[0, 1, 2])).unwrap().unwrap();
        assert_eq!(family, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cycle_family_absent_on_path() {
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!has_spanning_cycle_family(&g, &cover(&[0, 1, 2])).unwrap());
        // Exempting everything always succeeds via artificial loops.
        assert!(has_spanning_cycle_family(&g, &cover(&[])).unwrap());
    }

    #[test]
    fn cycle_family_self_loops() {
        let g = Digraph::new(3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let family = spanning_cycle_family(&g, &cover(&[0, 1, 2])).unwrap().unwrap();
        assert_eq!(family, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn cycle_family_rejects_bad_cover_node() {
        let g = Digraph::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            has_spanning_cycle_family(&g, &cover(&[7])),
            Err(BipartiteError::CoverOutOfRange { node: 7, .. })
        ));
    }

    #[test]
    fn reported_cycles_are_disjoint_and_cover() {
        let g = Digraph::new(
            6,
            &[(0, 1), (1, 0), (2, 3), (3, 4), (4, 2), (5, 5), (1, 2)],
        )
        .unwrap();
        let mc = cover(&[0, 1, 2, 3, 4]);
        let family = spanning_cycle_family(&g, &mc).unwrap().unwrap();
        let mut seen = BTreeSet::new();
        for cycle in &family {
            for &v in cycle {
                assert!(seen.insert(v), "node {v} appears twice");
            }
            for i in 0..cycle.len() {
                let from = cycle[i];
                let to = cycle[(i + 1) % cycle.len()];
                assert!(g.has_edge(from, to), "missing edge {from}->{to}");
            }
        }
        for v in &mc {
            assert!(seen.contains(v));
        }
        // Sorted by smallest contained node.
        let starts: Vec<usize> = family.iter().map(|c| c[0]).collect();
        let mut sorted = starts.clone();
        sorted.sort_unstable();
        assert_eq!(starts, sorted);
    }

    /// Definition-level oracle: try every subset containing the cover and
    /// look for a successor assignment inside it by backtracking.
    fn brute_cycle_family(g: &Digraph, must_cover: &BTreeSet<usize>) -> bool {
        let n = g.node_count();
        assert!(n <= 10, "oracle guard");
        let cover_mask: u32 = must_cover.iter().fold(0, |m, &v| m | (1 << v));
        for subset in 0u32..(1 << n) {
            if subset & cover_mask != cover_mask {
                continue;
            }
            let nodes: Vec<usize> = (0..n).filter(|&v| subset & (1 << v) != 0).collect();
            if assign(g, &nodes, 0, 0, subset) {
                return true;
            }
        }
        return false;

        fn assign(g: &Digraph, nodes: &[usize], idx: usize, used: u32, subset: u32) -> bool {
            if idx == nodes.len() {
                return true;
            }
            let v = nodes[idx];
            for &w in g.out_neighbors(v) {
                if subset & (1 << w) != 0
                    && used & (1 << w) == 0
                    && assign(g, nodes, idx + 1, used | (1 << w), subset)
                {
                    return true;
                }
            }
            false
        }
    }

    #[test]
    fn cycle_family_matches_exhaustive_enumeration() {
        let mut seed = 0x853c49e6748fea9bu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..300 {
            let n = 1 + (next() % 7) as usize;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if next() % 3 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Digraph::new(n, &edges).unwrap();
            let mc: BTreeSet<usize> = (0..n).filter(|_| next() % 2 == 0).collect();
            assert_eq!(
                has_spanning_cycle_family(&g, &mc).unwrap(),
                brute_cycle_family(&g, &mc),
                "n {n} edges {edges:?} cover {mc:?}"
            );
        }
    }

    #[test]
    fn adding_edges_never_destroys_a_family() {
        let mut seed = 0xc0ffee1234567u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..100 {
            let n = 2 + (next() % 5) as usize;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if next() % 3 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Digraph::new(n, &edges).unwrap();
            let mc: BTreeSet<usize> = (0..n).filter(|_| next() % 2 == 0).collect();
            if has_spanning_cycle_family(&g, &mc).unwrap() {
                let mut more = edges.clone();
                more.push(((next() % n as u64) as usize, (next() % n as u64) as usize));
                let g2 = Digraph::new(n, &more).unwrap();
                assert!(has_spanning_cycle_family(&g2, &mc).unwrap());
            }
        }
    }
}
