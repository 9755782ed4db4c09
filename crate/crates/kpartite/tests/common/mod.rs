//! Shared test support: a seeded generator of random clustered graphs that
//! satisfy the structural, homogeneity and close-friendship requirements by
//! construction.

use kpartite::graph::{ClusterPartition, SignedClusteredGraph};
use kpartite::linalg::Matrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Draws a graph with k ∈ {3,4} clusters of at most 4 agents each.
///
/// One anchor cluster keeps a complete positive interior and every other
/// cluster is fully mistrust-linked to it, so the anchor always works as a
/// hub: clusters are internally complete (all pairs friends) except for at
/// most one ring cluster, whose estranged pairs share enemies inside the
/// anchor. Block weights are constant, which makes every block row-sum
/// homogeneous.
pub fn random_homogeneous_graph(rng: &mut ChaCha8Rng) -> SignedClusteredGraph {
    let k = rng.gen_range(3..=4usize);
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=4usize)).collect();
    let partition = ClusterPartition::new(sizes.clone()).unwrap();
    let n = partition.num_agents();
    let anchor = rng.gen_range(0..k);
    // at most one non-anchor cluster of size 4 becomes a ring
    let ring = (0..k)
        .filter(|&c| c != anchor && sizes[c] == 4)
        .find(|_| rng.gen_bool(0.5));

    let mut a = Matrix::zeros(n, n);
    let set_sym = |m: &mut Matrix, i: usize, j: usize, w: f64| {
        m.set(i, j, w);
        m.set(j, i, w);
    };
    // weight diversity matters: near-uniform blocks push the reduced k×k
    // system toward rank one, whose extra near-null directions become very
    // slow consensus modes
    for c in 0..k {
        let agents: Vec<usize> = partition.agents(c).collect();
        let w = rng.gen_range(0.6..2.0);
        if Some(c) == ring {
            for i in 0..4 {
                set_sym(&mut a, agents[i], agents[(i + 1) % 4], w);
            }
        } else {
            for i in 0..agents.len() {
                for j in (i + 1)..agents.len() {
                    set_sym(&mut a, agents[i], agents[j], w);
                }
            }
        }
    }
    for p in 0..k {
        for q in (p + 1)..k {
            let linked_to_anchor = p == anchor || q == anchor;
            let v = if linked_to_anchor || rng.gen_bool(0.5) {
                rng.gen_range(0.6..2.0)
            } else {
                continue;
            };
            for i in partition.agents(p) {
                for j in partition.agents(q) {
                    set_sym(&mut a, i, j, -v);
                }
            }
        }
    }
    SignedClusteredGraph::new(partition, a).unwrap()
}
