//! Pattern matrices, structured systems and their digraphs.

use crate::bipartite::BipartiteGraph;
use crate::graph::{Digraph, NodeId};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("pattern dimensions must be positive, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) out of range for a {rows}x{cols} pattern")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("state pattern must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

/// Sparsity pattern of a matrix: only positions of nonzeros, no values.
/// Indices are zero-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredMatrix {
    rows: usize,
    cols: usize,
    nonzeros: BTreeSet<(usize, usize)>,
}

impl StructuredMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SystemError> {
        if rows == 0 || cols == 0 {
            return Err(SystemError::EmptyDimensions { rows, cols });
        }
        let mut nonzeros = BTreeSet::new();
        for (row, col) in entries {
            if row >= rows || col >= cols {
                return Err(SystemError::EntryOutOfRange {
                    row,
                    col,
                    rows,
                    cols,
                });
            }
            nonzeros.insert((row, col));
        }
        Ok(StructuredMatrix {
            rows,
            cols,
            nonzeros,
        })
    }

    pub fn identity(n: usize) -> Self {
        StructuredMatrix::new(n, n, (0..n).map(|i| (i, i))).expect("diagonal is in range")
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, SystemError> {
        StructuredMatrix::new(rows, cols, [])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros.len()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.nonzeros.contains(&(row, col))
    }

    /// Nonzero positions in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nonzeros.iter().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.nonzeros.len() == self.rows
            && self.nonzeros.iter().all(|&(i, j)| i == j)
    }
}

/// Sparsity patterns of the state, input and output matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSystem {
    a: StructuredMatrix,
    b: StructuredMatrix,
    c: StructuredMatrix,
}

impl StructuredSystem {
    pub fn new(
        a: StructuredMatrix,
        b: StructuredMatrix,
        c: StructuredMatrix,
    ) -> Result<Self, SystemError> {
        if a.rows() != a.cols() {
            return Err(SystemError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if b.rows() != a.rows() {
            return Err(SystemError::DimensionMismatch {
                context: format!(
                    "input pattern has {} rows but the system has {} states",
                    b.rows(),
                    a.rows()
                ),
            });
        }
        if c.cols() != a.rows() {
            return Err(SystemError::DimensionMismatch {
                context: format!(
                    "output pattern has {} columns but the system has {} states",
                    c.cols(),
                    a.rows()
                ),
            });
        }
        Ok(StructuredSystem { a, b, c })
    }

    pub fn a(&self) -> &StructuredMatrix {
        &self.a
    }

    pub fn b(&self) -> &StructuredMatrix {
        &self.b
    }

    pub fn c(&self) -> &StructuredMatrix {
        &self.c
    }

    pub fn state_count(&self) -> usize {
        self.a.rows()
    }

    pub fn input_count(&self) -> usize {
        self.b.cols()
    }

    pub fn output_count(&self) -> usize {
        self.c.rows()
    }
}

/// Sparsity pattern of an output feedback matrix (inputs x outputs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackPattern {
    matrix: StructuredMatrix,
}

impl FeedbackPattern {
    pub fn new(matrix: StructuredMatrix) -> Self {
        FeedbackPattern { matrix }
    }

    pub fn from_entries(
        inputs: usize,
        outputs: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SystemError> {
        Ok(FeedbackPattern {
            matrix: StructuredMatrix::new(inputs, outputs, entries)?,
        })
    }

    pub fn zeros(inputs: usize, outputs: usize) -> Result<Self, SystemError> {
        Ok(FeedbackPattern {
            matrix: StructuredMatrix::zeros(inputs, outputs)?,
        })
    }

    /// Pattern with every feedback link present.
    pub fn full(inputs: usize, outputs: usize) -> Result<Self, SystemError> {
        let entries = (0..inputs).flat_map(|i| (0..outputs).map(move |j| (i, j)));
        Ok(FeedbackPattern {
            matrix: StructuredMatrix::new(inputs, outputs, entries)?,
        })
    }

    pub fn matrix(&self) -> &StructuredMatrix {
        &self.matrix
    }

    pub fn inputs(&self) -> usize {
        self.matrix.rows()
    }

    pub fn outputs(&self) -> usize {
        self.matrix.cols()
    }

    /// Number of feedback links.
    pub fn cardinality(&self) -> usize {
        self.matrix.nnz()
    }

    /// Links as (input, output) pairs in ascending order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.matrix.nonzeros()
    }
}

/// Vertex role in a [`SystemDigraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    State,
    Input,
    Output,
}

/// Edge role in a [`SystemDigraph`], determined by its endpoint kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// State to state, from the state pattern.
    Dynamics,
    /// Input to state, from the input pattern.
    Actuation,
    /// State to output, from the output pattern.
    Sensing,
    /// Output to input, from the feedback pattern.
    Feedback,
}

/// Digraph of a structured system under output feedback.
///
/// Vertices are numbered states first (`0..n`), then inputs (`n..n+m`),
/// then outputs (`n+m..n+m+p`). An edge `x_j -> x_i` exists when state
/// entry (i, j) is nonzero, `u_j -> x_i` for input entry (i, j),
/// `x_j -> y_i` for output entry (i, j), and `y_j -> u_i` for feedback
/// entry (i, j).
#[derive(Debug, Clone)]
pub struct SystemDigraph {
    graph: Digraph,
    state_count: usize,
    input_count: usize,
    output_count: usize,
}

impl SystemDigraph {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn output_count(&self) -> usize {
        self.output_count
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn state_vertex(&self, i: usize) -> NodeId {
        debug_assert!(i < self.state_count);
        i
    }

    pub fn input_vertex(&self, j: usize) -> NodeId {
        debug_assert!(j < self.input_count);
        self.state_count + j
    }

    pub fn output_vertex(&self, k: usize) -> NodeId {
        debug_assert!(k < self.output_count);
        self.state_count + self.input_count + k
    }

    pub fn vertex_kind(&self, v: NodeId) -> VertexKind {
        if v < self.state_count {
            VertexKind::State
        } else if v < self.state_count + self.input_count {
            VertexKind::Input
        } else {
            debug_assert!(v < self.vertex_count());
            VertexKind::Output
        }
    }

    /// Index of `v` within its kind (state, input or output numbering).
    pub fn local_index(&self, v: NodeId) -> usize {
        match self.vertex_kind(v) {
            VertexKind::State => v,
            VertexKind::Input => v - self.state_count,
            VertexKind::Output => v - self.state_count - self.input_count,
        }
    }

    /// Display name of a vertex: x1.., u1.., y1.. (one-based).
    pub fn vertex_name(&self, v: NodeId) -> String {
        let idx = self.local_index(v) + 1;
        match self.vertex_kind(v) {
            VertexKind::State => format!("x{idx}"),
            VertexKind::Input => format!("u{idx}"),
            VertexKind::Output => format!("y{idx}"),
        }
    }

    /// Kind of an edge, from its endpoint kinds. Only the four legal
    /// combinations ever occur in a constructed system digraph.
    pub fn edge_kind(&self, from: NodeId, to: NodeId) -> EdgeKind {
        match (self.vertex_kind(from), self.vertex_kind(to)) {
            (VertexKind::State, VertexKind::State) => EdgeKind::Dynamics,
            (VertexKind::Input, VertexKind::State) => EdgeKind::Actuation,
            (VertexKind::State, VertexKind::Output) => EdgeKind::Sensing,
            (VertexKind::Output, VertexKind::Input) => EdgeKind::Feedback,
            (f, t) => unreachable!("no {f:?} -> {t:?} edge can be constructed"),
        }
    }

    fn extract(&self, want: EdgeKind, rows: usize, cols: usize) -> StructuredMatrix {
        let entries = self.graph.edges().filter_map(|(from, to)| {
            if self.edge_kind(from, to) == want {
                Some((self.local_index(to), self.local_index(from)))
            } else {
                None
            }
        });
        StructuredMatrix::new(rows, cols, entries).expect("extracted entries are in range")
    }

    pub fn a_pattern(&self) -> StructuredMatrix {
        self.extract(EdgeKind::Dynamics, self.state_count, self.state_count)
    }

    pub fn b_pattern(&self) -> StructuredMatrix {
        self.extract(EdgeKind::Actuation, self.state_count, self.input_count)
    }

    pub fn c_pattern(&self) -> StructuredMatrix {
        self.extract(EdgeKind::Sensing, self.output_count, self.state_count)
    }

    pub fn k_pattern(&self) -> StructuredMatrix {
        self.extract(EdgeKind::Feedback, self.input_count, self.output_count)
    }
}

/// Digraph on the states alone: edge `x_j -> x_i` per nonzero (i, j).
pub fn build_state_digraph(a: &StructuredMatrix) -> Result<Digraph, SystemError> {
    if a.rows() != a.cols() {
        return Err(SystemError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let edges: Vec<(NodeId, NodeId)> = a.nonzeros().map(|(i, j)| (j, i)).collect();
    Ok(Digraph::new(a.rows(), &edges).expect("entries are in range"))
}

/// Digraph of the system closed by the feedback pattern `k`.
/// Pass an all-zero `k` for the open-loop digraph.
pub fn build_closed_loop_digraph(
    sys: &StructuredSystem,
    k: &FeedbackPattern,
) -> Result<SystemDigraph, SystemError> {
    let (n, m, p) = (sys.state_count(), sys.input_count(), sys.output_count());
    if k.inputs() != m || k.outputs() != p {
        return Err(SystemError::DimensionMismatch {
            context: format!(
                "feedback pattern is {}x{} but the system has {m} inputs and {p} outputs",
                k.inputs(),
                k.outputs()
            ),
        });
    }
    let mut edges: Vec<(NodeId, NodeId)> =
        Vec::with_capacity(sys.a().nnz() + sys.b().nnz() + sys.c().nnz() + k.cardinality());
    edges.extend(sys.a().nonzeros().map(|(i, j)| (j, i)));
    edges.extend(sys.b().nonzeros().map(|(i, j)| (n + j, i)));
    edges.extend(sys.c().nonzeros().map(|(i, j)| (j, n + m + i)));
    edges.extend(k.entries().map(|(i, j)| (n + m + j, n + i)));
    let graph = Digraph::new(n + m + p, &edges).expect("entries are in range");
    Ok(SystemDigraph {
        graph,
        state_count: n,
        input_count: m,
        output_count: p,
    })
}

/// Bipartite graph of the state pattern: rows on the left, columns on the
/// right, one edge per nonzero.
pub fn state_bipartite(a: &StructuredMatrix) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> = a.nonzeros().collect();
    BipartiteGraph::new(a.rows(), a.cols(), &edges).expect("entries are in range")
}

/// Outcome of the dedicated input/output precondition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionVerdict {
    /// Input pattern is exactly the identity.
    pub b_is_identity: bool,
    /// Output pattern is exactly the identity.
    pub c_is_identity: bool,
    /// The state bipartite graph has a perfect matching.
    pub structurally_cyclic: bool,
}

impl AssumptionVerdict {
    pub fn all_hold(&self) -> bool {
        self.b_is_identity && self.c_is_identity && self.structurally_cyclic
    }

    /// Names every failed clause, or states that all hold.
    pub fn describe(&self) -> String {
        if self.all_hold() {
            return "dedicated inputs, dedicated outputs and structural cyclicity all hold"
                .to_string();
        }
        let mut failed = Vec::new();
        if !self.b_is_identity {
            failed.push("input pattern is not the identity");
        }
        if !self.c_is_identity {
            failed.push("output pattern is not the identity");
        }
        if !self.structurally_cyclic {
            failed.push("state pattern has no perfect matching (not structurally cyclic)");
        }
        failed.join("; ")
    }
}

/// Checks dedicated inputs (identity input pattern), dedicated outputs
/// (identity output pattern) and structural cyclicity of the state pattern.
pub fn check_assumption(sys: &StructuredSystem) -> AssumptionVerdict {
    let bip = state_bipartite(sys.a());
    let structurally_cyclic = crate::bipartite::max_matching(&bip).size() == sys.state_count();
    AssumptionVerdict {
        b_is_identity: sys.b().is_identity(),
        c_is_identity: sys.c().is_identity(),
        structurally_cyclic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize)]) -> StructuredMatrix {
        StructuredMatrix::new(rows, cols, entries.iter().copied()).unwrap()
    }

    fn dedicated(a: StructuredMatrix) -> StructuredSystem {
        let n = a.rows();
        StructuredSystem::new(a, StructuredMatrix::identity(n), StructuredMatrix::identity(n))
            .unwrap()
    }

    #[test]
    fn matrix_basics() {
        let m = mat(2, 3, &[(0, 0), (1, 2), (0, 0)]);
        assert_eq!(m.nnz(), 2);
        assert!(m.contains(1, 2));
        assert!(!m.contains(1, 1));
        assert!(StructuredMatrix::identity(3).is_identity());
        assert!(!mat(2, 2, &[(0, 1), (1, 0)]).is_identity());
        assert!(!mat(2, 2, &[(0, 0)]).is_identity());
        assert!(matches!(
            StructuredMatrix::new(2, 2, [(2, 0)]),
            Err(SystemError::EntryOutOfRange { row: 2, .. })
        ));
        assert!(matches!(
            StructuredMatrix::new(0, 3, []),
            Err(SystemError::EmptyDimensions { .. })
        ));
    }

    #[test]
    fn system_dimension_checks() {
        let a = mat(2, 2, &[(0, 0)]);
        assert!(StructuredSystem::new(
            a.clone(),
            StructuredMatrix::identity(2),
            StructuredMatrix::identity(2)
        )
        .is_ok());
        assert!(matches!(
            StructuredSystem::new(
                mat(2, 3, &[]),
                StructuredMatrix::identity(2),
                StructuredMatrix::identity(2)
            ),
            Err(SystemError::NotSquare { .. })
        ));
        assert!(matches!(
            StructuredSystem::new(a.clone(), mat(3, 1, &[]), StructuredMatrix::identity(2)),
            Err(SystemError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StructuredSystem::new(a, StructuredMatrix::identity(2), mat(1, 3, &[])),
            Err(SystemError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_digraph_transposes_entries() {
        // Nonzero (i, j) means x_j drives x_i.
        let g = build_state_digraph(&mat(2, 2, &[(1, 0)])).unwrap();
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(1, 0));
        let loops = build_state_digraph(&StructuredMatrix::identity(3)).unwrap();
        assert_eq!(loops.edge_count(), 3);
        assert!(loops.has_edge(1, 1));
        assert!(matches!(
            build_state_digraph(&mat(2, 3, &[])),
            Err(SystemError::NotSquare { .. })
        ));
    }

    #[test]
    fn closed_loop_single_state() {
        let sys = dedicated(StructuredMatrix::identity(1));
        let k = FeedbackPattern::from_entries(1, 1, [(0, 0)]).unwrap();
        let sd = build_closed_loop_digraph(&sys, &k).unwrap();
        assert_eq!(sd.vertex_count(), 3);
        let (x, u, y) = (sd.state_vertex(0), sd.input_vertex(0), sd.output_vertex(0));
        assert!(sd.graph().has_edge(u, x));
        assert!(sd.graph().has_edge(x, y));
        assert!(sd.graph().has_edge(y, u));
        assert!(sd.graph().has_edge(x, x));
        assert_eq!(sd.edge_kind(u, x), EdgeKind::Actuation);
        assert_eq!(sd.edge_kind(x, y), EdgeKind::Sensing);
        assert_eq!(sd.edge_kind(y, u), EdgeKind::Feedback);
        assert_eq!(sd.edge_kind(x, x), EdgeKind::Dynamics);
        assert_eq!(sd.vertex_name(x), "x1");
        assert_eq!(sd.vertex_name(u), "u1");
        assert_eq!(sd.vertex_name(y), "y1");
    }

    #[test]
    fn closed_loop_rejects_wrong_feedback_shape() {
        let sys = dedicated(StructuredMatrix::identity(2));
        let k = FeedbackPattern::zeros(1, 2).unwrap();
        assert!(matches!(
            build_closed_loop_digraph(&sys, &k),
            Err(SystemError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn patterns_round_trip_through_digraph() {
        let a = mat(3, 3, &[(0, 0), (1, 0), (2, 1), (2, 2)]);
        let b = mat(3, 2, &[(0, 0), (2, 1)]);
        let c = mat(2, 3, &[(0, 1), (1, 2)]);
        let sys = StructuredSystem::new(a.clone(), b.clone(), c.clone()).unwrap();
        let k = FeedbackPattern::from_entries(2, 2, [(0, 1), (1, 0)]).unwrap();
        let sd = build_closed_loop_digraph(&sys, &k).unwrap();
        assert_eq!(sd.a_pattern(), a);
        assert_eq!(sd.b_pattern(), b);
        assert_eq!(sd.c_pattern(), c);
        assert_eq!(sd.k_pattern(), *k.matrix());
        let total = a.nnz() + b.nnz() + c.nnz() + k.cardinality();
        assert_eq!(sd.graph().edge_count(), total);
    }

    #[test]
    fn zero_feedback_gives_open_loop() {
        let sys = dedicated(StructuredMatrix::identity(2));
        let k = FeedbackPattern::zeros(2, 2).unwrap();
        let sd = build_closed_loop_digraph(&sys, &k).unwrap();
        assert_eq!(sd.k_pattern().nnz(), 0);
        assert_eq!(sd.graph().edge_count(), 2 + 2 + 2);
    }

    #[test]
    fn assumption_verdicts() {
        let good = dedicated(StructuredMatrix::identity(3));
        let v = check_assumption(&good);
        assert!(v.b_is_identity && v.c_is_identity && v.structurally_cyclic);
        assert!(v.all_hold());

        // A zero row in the state pattern kills the perfect matching.
        let acyclic = dedicated(mat(2, 2, &[(0, 0), (0, 1)]));
        let v = check_assumption(&acyclic);
        assert!(v.b_is_identity && v.c_is_identity);
        assert!(!v.structurally_cyclic);
        assert!(!v.all_hold());
        assert!(v.describe().contains("not structurally cyclic"));

        // Permutation patterns are not accepted as identities.
        let sys = StructuredSystem::new(
            StructuredMatrix::identity(2),
            mat(2, 2, &[(0, 1), (1, 0)]),
            StructuredMatrix::identity(2),
        )
        .unwrap();
        assert!(!check_assumption(&sys).b_is_identity);
    }

    #[test]
    fn vertex_numbering_partitions() {
        let sys = StructuredSystem::new(
            StructuredMatrix::identity(2),
            mat(2, 3, &[(0, 0)]),
            mat(1, 2, &[(0, 0)]),
        )
        .unwrap();
        let k = FeedbackPattern::zeros(3, 1).unwrap();
        let sd = build_closed_loop_digraph(&sys, &k).unwrap();
        assert_eq!(sd.vertex_count(), 6);
        let kinds: Vec<VertexKind> = (0..6).map(|v| sd.vertex_kind(v)).collect();
        assert_eq!(
            kinds,
            vec![
                VertexKind::State,
                VertexKind::State,
                VertexKind::Input,
                VertexKind::Input,
                VertexKind::Input,
                VertexKind::Output
            ]
        );
        assert_eq!(sd.vertex_name(4), "u3");
        assert_eq!(sd.local_index(5), 0);
    }
}
