//! Data model, file I/O and structural validation of signed clustered graphs.
//!
//! Agents are ordered cluster by cluster: the agents of cluster 1 come
//! first, then those of cluster 2, and so on. A graph file is a JSON
//! document with the cluster sizes and the full row-major adjacency matrix:
//!
//! ```json
//! { "clusters": [2, 4, 1], "adjacency": [[0.0, 1.0, ...], ...] }
//! ```
//!
//! Loading only checks shape; [`validate_structure`] performs the structural
//! checks (symmetry, zero diagonal, block sign pattern, connectedness) and
//! reports every failed rule instead of erroring.

use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Parse(String),
    #[error("adjacency matrix is not square: row {row} has {got} entries, expected {expected}")]
    NonSquare {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("cluster sizes sum to {sum} but the matrix has {n} rows")]
    SizeMismatch { sum: usize, n: usize },
    #[error("cluster sizes must be positive; size {index} is zero")]
    ZeroClusterSize { index: usize },
    #[error("cluster list is empty")]
    EmptyClusters,
    #[error("cluster index {index} out of range ({clusters} clusters)")]
    ClusterIndex { index: usize, clusters: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Cluster sizes `n_1..n_k` with the derived offsets (prefix sums).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPartition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl ClusterPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self, GraphError> {
        if sizes.is_empty() {
            return Err(GraphError::EmptyClusters);
        }
        if let Some(index) = sizes.iter().position(|&s| s == 0) {
            return Err(GraphError::ZeroClusterSize { index });
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        Ok(ClusterPartition { sizes, offsets })
    }

    pub fn num_clusters(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_agents(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0) + self.sizes.last().copied().unwrap_or(0)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, cluster: usize) -> usize {
        self.sizes[cluster]
    }

    /// Index of the first agent of the cluster.
    pub fn offset(&self, cluster: usize) -> usize {
        self.offsets[cluster]
    }

    /// Half-open range of agent indices belonging to the cluster.
    pub fn agents(&self, cluster: usize) -> std::ops::Range<usize> {
        let start = self.offsets[cluster];
        start..start + self.sizes[cluster]
    }

    pub fn cluster_of(&self, agent: usize) -> usize {
        debug_assert!(agent < self.num_agents());
        match self.offsets.binary_search(&agent) {
            Ok(c) => c,
            Err(c) => c - 1,
        }
    }
}

/// Symmetric signed weighted adjacency together with the cluster partition.
///
/// The adjacency is stored as loaded; symmetry and the sign pattern are
/// properties checked by [`validate_structure`], not enforced here, so that
/// defective inputs can be loaded and reported.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedClusteredGraph {
    partition: ClusterPartition,
    adjacency: Matrix,
}

impl SignedClusteredGraph {
    pub fn new(partition: ClusterPartition, adjacency: Matrix) -> Result<Self, GraphError> {
        if adjacency.rows() != adjacency.cols() {
            return Err(GraphError::NonSquare {
                row: 0,
                got: adjacency.cols(),
                expected: adjacency.rows(),
            });
        }
        if partition.num_agents() != adjacency.rows() {
            return Err(GraphError::SizeMismatch {
                sum: partition.num_agents(),
                n: adjacency.rows(),
            });
        }
        Ok(SignedClusteredGraph {
            partition,
            adjacency,
        })
    }

    pub fn partition(&self) -> &ClusterPartition {
        &self.partition
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adjacency
    }

    pub fn num_agents(&self) -> usize {
        self.partition.num_agents()
    }

    pub fn num_clusters(&self) -> usize {
        self.partition.num_clusters()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency.get(i, j)
    }

    /// Copy of the adjacency block coupling clusters `p` and `q`.
    pub fn block(&self, p: usize, q: usize) -> Matrix {
        let rows = self.partition.agents(p);
        let cols = self.partition.agents(q);
        self.adjacency
            .submatrix(rows.start, rows.end, cols.start, cols.end)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    clusters: Vec<usize>,
    adjacency: Vec<Vec<f64>>,
}

/// Parses a graph from its JSON document. Only the shape is checked here.
pub fn load_graph(text: &str) -> Result<SignedClusteredGraph, GraphError> {
    let doc: GraphDocument = serde_json::from_str(text)
        .map_err(|e| GraphError::Parse(format!("{} (line {}, column {})", e, e.line(), e.column())))?;
    let n = doc.adjacency.len();
    for (row, entries) in doc.adjacency.iter().enumerate() {
        if entries.len() != n {
            return Err(GraphError::NonSquare {
                row,
                got: entries.len(),
                expected: n,
            });
        }
    }
    let partition = ClusterPartition::new(doc.clusters)?;
    if partition.num_agents() != n {
        return Err(GraphError::SizeMismatch {
            sum: partition.num_agents(),
            n,
        });
    }
    let adjacency = Matrix::from_rows(&doc.adjacency)
        .map_err(|e| GraphError::Parse(e.to_string()))?;
    SignedClusteredGraph::new(partition, adjacency)
}

pub fn load_graph_file(path: &Path) -> Result<SignedClusteredGraph, GraphError> {
    let text = std::fs::read_to_string(path)?;
    load_graph(&text)
}

/// Serializes the graph to its JSON document. Weights round-trip bit-exactly.
pub fn save_graph(g: &SignedClusteredGraph) -> String {
    let doc = GraphDocument {
        clusters: g.partition.sizes.clone(),
        adjacency: (0..g.num_agents())
            .map(|r| g.adjacency.row(r).to_vec())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
}

pub fn save_graph_file(g: &SignedClusteredGraph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, save_graph(g))?;
    Ok(())
}

/// Structural rules checked by [`validate_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    ClusterCount,
    Symmetry,
    Diagonal,
    SignPattern,
    Connectivity,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::ClusterCount => "cluster-count",
            Rule::Symmetry => "symmetry",
            Rule::Diagonal => "diagonal",
            Rule::SignPattern => "sign-pattern",
            Rule::Connectivity => "connectivity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub rule: Rule,
    /// First offending entry, when the rule has a location.
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((i, j)) => write!(f, "{} violation at ({},{}): {}", self.rule, i, j, self.message),
            None => write!(f, "{} violation: {}", self.rule, self.message),
        }
    }
}

/// Outcome of the structural validation; passing means no violations.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural requirements on the communication graph: at least
/// two clusters, exact symmetry, zero diagonal, nonnegative intra-cluster
/// and nonpositive inter-cluster weights, and connectedness of the nonzero
/// pattern (breadth-first search, equivalent to irreducibility of the
/// adjacency matrix). Each failed rule contributes one violation carrying
/// the first offending location.
pub fn validate_structure(g: &SignedClusteredGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let n = g.num_agents();
    let a = g.adjacency();
    let partition = g.partition();

    if g.num_clusters() < 2 {
        violations.push(Violation {
            rule: Rule::ClusterCount,
            location: None,
            message: format!("{} cluster(s); a clustering needs at least 2", g.num_clusters()),
        });
    }

    'symmetry: for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j) != a.get(j, i) {
                violations.push(Violation {
                    rule: Rule::Symmetry,
                    location: Some((i, j)),
                    message: format!("{} != {}", a.get(i, j), a.get(j, i)),
                });
                break 'symmetry;
            }
        }
    }

    for i in 0..n {
        if a.get(i, i) != 0.0 {
            violations.push(Violation {
                rule: Rule::Diagonal,
                location: Some((i, i)),
                message: format!("self-loop weight {}", a.get(i, i)),
            });
            break;
        }
    }

    'signs: for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let same_cluster = partition.cluster_of(i) == partition.cluster_of(j);
            let w = a.get(i, j);
            if same_cluster && w < 0.0 {
                violations.push(Violation {
                    rule: Rule::SignPattern,
                    location: Some((i, j)),
                    message: format!("intra-cluster weight {} must be nonnegative", w),
                });
                break 'signs;
            }
            if !same_cluster && w > 0.0 {
                violations.push(Violation {
                    rule: Rule::SignPattern,
                    location: Some((i, j)),
                    message: format!("inter-cluster weight {} must be nonpositive", w),
                });
                break 'signs;
            }
        }
    }

    if !is_connected(a) {
        violations.push(Violation {
            rule: Rule::Connectivity,
            location: None,
            message: "the nonzero pattern is not connected".into(),
        });
    }

    ValidationReport { violations }
}

fn is_connected(a: &Matrix) -> bool {
    let n = a.rows();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            if w != v && !seen[w] && a.get(v, w) != 0.0 {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// Complete unweighted clustered graph: diagonal blocks `1·1ᵀ - I`,
/// off-diagonal blocks `-1·1ᵀ`.
pub fn build_complete_unweighted(sizes: &[usize]) -> Result<SignedClusteredGraph, GraphError> {
    let partition = ClusterPartition::new(sizes.to_vec())?;
    let n = partition.num_agents();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = if partition.cluster_of(i) == partition.cluster_of(j) {
                1.0
            } else {
                -1.0
            };
            a.set(i, j, w);
        }
    }
    SignedClusteredGraph::new(partition, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn partition_offsets_and_lookup() {
        let p = ClusterPartition::new(vec![2, 4, 1]).unwrap();
        assert_eq!(p.num_agents(), 7);
        assert_eq!(p.offset(0), 0);
        assert_eq!(p.offset(1), 2);
        assert_eq!(p.offset(2), 6);
        assert_eq!(p.cluster_of(0), 0);
        assert_eq!(p.cluster_of(1), 0);
        assert_eq!(p.cluster_of(2), 1);
        assert_eq!(p.cluster_of(5), 1);
        assert_eq!(p.cluster_of(6), 2);
    }

    #[test]
    fn partition_rejects_bad_sizes() {
        assert!(matches!(
            ClusterPartition::new(vec![]),
            Err(GraphError::EmptyClusters)
        ));
        assert!(matches!(
            ClusterPartition::new(vec![2, 0]),
            Err(GraphError::ZeroClusterSize { index: 1 })
        ));
    }

    #[test]
    fn loads_seven_agent_document() {
        let g = scenarios::seven_agent_tripartite();
        let text = save_graph(&g);
        let loaded = load_graph(&text).unwrap();
        assert_eq!(loaded.num_agents(), 7);
        assert_eq!(loaded.num_clusters(), 3);
        assert_eq!(loaded, g);
    }

    #[test]
    fn loads_degenerate_single_cluster() {
        let g = load_graph(r#"{"clusters": [1], "adjacency": [[0.0]]}"#).unwrap();
        assert_eq!(g.num_agents(), 1);
        assert_eq!(g.num_clusters(), 1);
        // loads, but the structural validation rejects it
        assert!(!validate_structure(&g).passed());
    }

    #[test]
    fn rejects_ragged_matrix() {
        let text = r#"{"clusters": [2, 2],
            "adjacency": [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0],[0,0,0,0]]}"#;
        assert!(matches!(load_graph(text), Err(GraphError::NonSquare { .. })));
    }

    #[test]
    fn rejects_size_mismatch() {
        let text = r#"{"clusters": [2, 2], "adjacency": [[0,1],[1,0]]}"#;
        assert!(matches!(
            load_graph(text),
            Err(GraphError::SizeMismatch { sum: 4, n: 2 })
        ));
    }

    #[test]
    fn reports_parse_context() {
        let err = load_graph("{not json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "missing context: {}", msg);
    }

    #[test]
    fn seven_agent_graph_is_valid() {
        let report = validate_structure(&scenarios::seven_agent_tripartite());
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn sign_flip_inside_cluster_is_reported() {
        let g = scenarios::seven_agent_tripartite();
        let mut a = g.adjacency().clone();
        a.set(0, 1, -1.0);
        a.set(1, 0, -1.0);
        let g = SignedClusteredGraph::new(g.partition().clone(), a).unwrap();
        let report = validate_structure(&g);
        let v = report
            .violations
            .iter()
            .find(|v| v.rule == Rule::SignPattern)
            .expect("sign violation expected");
        assert_eq!(v.location, Some((0, 1)));
    }

    #[test]
    fn asymmetry_is_reported() {
        let g = scenarios::seven_agent_tripartite();
        let mut a = g.adjacency().clone();
        a.set(0, 1, 2.0);
        let g = SignedClusteredGraph::new(g.partition().clone(), a).unwrap();
        let report = validate_structure(&g);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::Symmetry && v.location == Some((0, 1))));
    }

    #[test]
    fn disconnected_components_are_reported() {
        // two disjoint positive pairs in the first cluster, an isolated
        // singleton cluster, and no inter-cluster edges at all
        let partition = ClusterPartition::new(vec![4, 1]).unwrap();
        let mut a = Matrix::zeros(5, 5);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(2, 3, 1.0);
        a.set(3, 2, 1.0);
        let g = SignedClusteredGraph::new(partition, a).unwrap();
        let report = validate_structure(&g);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::Connectivity));
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn complete_graph_blocks() {
        let g = build_complete_unweighted(&[2, 1]).unwrap();
        let expect = [
            [0.0, 1.0, -1.0],
            [1.0, 0.0, -1.0],
            [-1.0, -1.0, 0.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.weight(i, j), expect[i][j]);
            }
        }

        let smallest = build_complete_unweighted(&[1, 1]).unwrap();
        assert_eq!(smallest.weight(0, 1), -1.0);
        assert_eq!(smallest.weight(0, 0), 0.0);
    }

    #[test]
    fn complete_graphs_validate() {
        for sizes in [vec![1usize, 1], vec![2, 1], vec![9, 13, 14, 11, 7]] {
            let g = build_complete_unweighted(&sizes).unwrap();
            assert!(validate_structure(&g).passed(), "sizes {:?}", sizes);
        }
        let g = build_complete_unweighted(&[9, 13, 14, 11, 7]).unwrap();
        assert_eq!(g.num_agents(), 54);
    }

    #[test]
    fn complete_rejects_empty() {
        assert!(matches!(
            build_complete_unweighted(&[]),
            Err(GraphError::EmptyClusters)
        ));
    }

    #[test]
    fn block_extraction() {
        let g = scenarios::seven_agent_tripartite();
        let b = g.block(2, 1);
        assert_eq!(b.rows(), 1);
        assert_eq!(b.cols(), 4);
        for c in 0..4 {
            assert_eq!(b.get(0, c), -1.0);
        }
    }
}
