//! Bundled regression fixtures for the `reproduce` command and the tests.

use crate::graph::{ClusterPartition, SignedClusteredGraph};
use crate::linalg::Matrix;

/// Seven agents in three clusters of sizes (2, 4, 1); unweighted, signed,
/// connected, with homogeneous trust/mistrust totals.
pub const SEVEN_AGENT_CLUSTERS: [usize; 3] = [2, 4, 1];
pub const SEVEN_AGENT_ADJACENCY: [[f64; 7]; 7] = [
    [0.0, 1.0, -1.0, -1.0, 0.0, 0.0, -1.0],
    [1.0, 0.0, 0.0, 0.0, -1.0, -1.0, -1.0],
    [-1.0, 0.0, 0.0, 1.0, 1.0, 0.0, -1.0],
    [-1.0, 0.0, 1.0, 0.0, 0.0, 1.0, -1.0],
    [0.0, -1.0, 1.0, 0.0, 0.0, 1.0, -1.0],
    [0.0, -1.0, 0.0, 1.0, 1.0, 0.0, -1.0],
    [-1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0],
];

/// Trust/mistrust totals of the seven-agent graph, row-major k×k.
pub const SEVEN_AGENT_TRUST: [[f64; 3]; 3] = [
    [1.0, -2.0, -1.0],
    [-1.0, 2.0, -1.0],
    [-2.0, -4.0, 0.0],
];

/// Five complete clusters of sizes (9, 13, 14, 11, 7), 54 agents.
pub const FIVE_CLUSTER_SIZES: [usize; 5] = [9, 13, 14, 11, 7];

/// Four complete clusters of sizes (6, 9, 11, 7), 33 agents; used with the
/// tanh nonlinearity.
pub const FOUR_CLUSTER_SIZES: [usize; 4] = [6, 9, 11, 7];

pub fn seven_agent_tripartite() -> SignedClusteredGraph {
    let partition = ClusterPartition::new(SEVEN_AGENT_CLUSTERS.to_vec()).expect("static sizes");
    let rows: Vec<Vec<f64>> = SEVEN_AGENT_ADJACENCY.iter().map(|r| r.to_vec()).collect();
    let adjacency = Matrix::from_rows(&rows).expect("static matrix");
    SignedClusteredGraph::new(partition, adjacency).expect("static fixture is well-formed")
}
