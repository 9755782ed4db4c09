//! Executable checks on the communication structure beyond validation:
//! homogeneity of trust/mistrust, familiarity components, the
//! close-friendship property, and the cluster ordering (hub first, exempt
//! cluster second) that the gain synthesis relies on.

use crate::graph::{ClusterPartition, SignedClusteredGraph};
use crate::linalg::{self, Matrix, SymmetricMatrix};
use serde::Serialize;
use thiserror::Error;

/// Default tolerance for the homogeneity certificate, relative to the
/// largest trust/mistrust total. Integer-weighted graphs certify exactly.
pub const DEFAULT_HOMOGENEITY_TOL: f64 = 1e-9;
/// Entries of the hub-coupled block must exceed this to count as strictly
/// positive; an exact zero means the familiarity path is absent.
pub const STRICT_POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AssumptionError {
    #[error(
        "homogeneity violation in block ({i},{j}): row sums spread {max_spread} exceeds tolerance"
    )]
    HomogeneityViolation { i: usize, j: usize, max_spread: f64 },
    #[error("hub block is not positive definite for the given gain")]
    NotPositiveDefinite,
    #[error("no hub cluster satisfies close friendship: {0}")]
    CloseFriendshipUnsatisfied(OrderingFailure),
    #[error("ordering is inconsistent with the graph partition: {0}")]
    InconsistentOrdering(String),
    #[error("cluster index {index} out of range ({clusters} clusters)")]
    ClusterIndex { index: usize, clusters: usize },
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Per-hub failure lists collected when no cluster ordering exists.
#[derive(Debug, Clone, Serialize)]
pub struct OrderingFailure {
    /// For each candidate hub, the clusters that failed the check.
    pub failing_clusters_per_hub: Vec<(usize, Vec<usize>)>,
}

impl std::fmt::Display for OrderingFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .failing_clusters_per_hub
            .iter()
            .map(|(hub, fails)| {
                let list: Vec<String> = fails.iter().map(|c| (c + 1).to_string()).collect();
                format!("hub {} fails clusters {{{}}}", hub + 1, list.join(","))
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// The k×k matrix of trust/mistrust totals `c_ij`: common row sums of each
/// adjacency block. Nonnegative on the diagonal, nonpositive off it, and
/// generally not symmetric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrustMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl TrustMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for row in rows {
            assert_eq!(row.len(), k, "trust matrix must be square");
            entries.extend_from_slice(row);
        }
        TrustMatrix { k, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.k + j]
    }

    /// Reorders rows and columns by the cluster permutation
    /// (`perm[new] = old`).
    pub fn permuted(&self, perm: &[usize]) -> TrustMatrix {
        assert_eq!(perm.len(), self.k);
        let k = self.k;
        let mut entries = vec![0.0; k * k];
        for p in 0..k {
            for q in 0..k {
                entries[p * k + q] = self.get(perm[p], perm[q]);
            }
        }
        TrustMatrix { k, entries }
    }
}

/// Certifies that every adjacency block has constant row sums and returns
/// the totals `c_ij` (as the mean of the row sums). The spread within each
/// block must stay below `tol` scaled by the largest total magnitude.
pub fn homogeneity_certificate(
    g: &SignedClusteredGraph,
    tol: f64,
) -> Result<TrustMatrix, AssumptionError> {
    let k = g.num_clusters();
    let partition = g.partition();
    let mut sums: Vec<Vec<f64>> = Vec::with_capacity(k * k);
    let mut max_abs: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let rows: Vec<f64> = partition
                .agents(i)
                .map(|r| partition.agents(j).map(|c| g.weight(r, c)).sum())
                .collect();
            for &s in &rows {
                max_abs = max_abs.max(s.abs());
            }
            sums.push(rows);
        }
    }
    let threshold = tol * max_abs;
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let rows = &sums[i * k + j];
            let min = rows.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = rows.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let spread = max - min;
            if spread > threshold {
                return Err(AssumptionError::HomogeneityViolation {
                    i: i + 1,
                    j: j + 1,
                    max_spread: spread,
                });
            }
            entries.push(rows.iter().sum::<f64>() / rows.len() as f64);
        }
    }
    Ok(TrustMatrix { k, entries })
}

/// Connected components of one cluster's subgraph restricted to its
/// positive-weight edges; two agents in the same component are familiar.
/// Components are returned as lists of global agent indices.
pub fn familiarity_components(
    g: &SignedClusteredGraph,
    cluster: usize,
) -> Result<Vec<Vec<usize>>, AssumptionError> {
    if cluster >= g.num_clusters() {
        return Err(AssumptionError::ClusterIndex {
            index: cluster,
            clusters: g.num_clusters(),
        });
    }
    let agents: Vec<usize> = g.partition().agents(cluster).collect();
    let mut component_of: Vec<Option<usize>> = vec![None; agents.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..agents.len() {
        if component_of[start].is_some() {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        component_of[start] = Some(id);
        let mut members = vec![agents[start]];
        while let Some(v) = stack.pop() {
            for w in 0..agents.len() {
                if component_of[w].is_none() && g.weight(agents[v], agents[w]) > 0.0 {
                    component_of[w] = Some(id);
                    members.push(agents[w]);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    Ok(components)
}

/// Close-friendship test against the candidate hub cluster.
///
/// Cluster `h != hub` passes when it is a singleton, or when every pair of
/// its agents is either directly friendly or both agents are enemies of
/// (possibly distinct) vertices lying in the same familiarity component of
/// the hub. The hub's own entry is `true` by convention.
pub fn close_friendship_check(
    g: &SignedClusteredGraph,
    hub: usize,
) -> Result<Vec<bool>, AssumptionError> {
    let k = g.num_clusters();
    if hub >= k {
        return Err(AssumptionError::ClusterIndex {
            index: hub,
            clusters: k,
        });
    }
    let hub_components = familiarity_components(g, hub)?;
    let mut component_of_hub_agent = std::collections::HashMap::new();
    for (id, members) in hub_components.iter().enumerate() {
        for &m in members {
            component_of_hub_agent.insert(m, id);
        }
    }
    let hub_agents: Vec<usize> = g.partition().agents(hub).collect();
    // hub components an agent is enemy-linked to
    let enemy_components = |agent: usize| -> Vec<bool> {
        let mut flags = vec![false; hub_components.len()];
        for &r in &hub_agents {
            if g.weight(agent, r) < 0.0 {
                flags[component_of_hub_agent[&r]] = true;
            }
        }
        flags
    };
    let mut verdict = vec![true; k];
    for h in 0..k {
        if h == hub {
            continue;
        }
        let agents: Vec<usize> = g.partition().agents(h).collect();
        if agents.len() == 1 {
            continue;
        }
        let enemy_flags: Vec<Vec<bool>> = agents.iter().map(|&a| enemy_components(a)).collect();
        'pairs: for (ai, &i) in agents.iter().enumerate() {
            for (aj, &j) in agents.iter().enumerate().skip(ai + 1) {
                if g.weight(i, j) > 0.0 {
                    continue;
                }
                let shared = enemy_flags[ai]
                    .iter()
                    .zip(enemy_flags[aj].iter())
                    .any(|(a, b)| *a && *b);
                if !shared {
                    verdict[h] = false;
                    break 'pairs;
                }
            }
        }
    }
    Ok(verdict)
}

/// Matrix form of the close-friendship property: with the hub damped by
/// `delta_hub`, checks that every off-diagonal entry of
/// `A_hh + A_h,hub (δ I - A_hub,hub)^{-1} A_hub,h` is strictly positive.
///
/// Fails with [`AssumptionError::NotPositiveDefinite`] when `δ I - A_hub,hub`
/// is not positive definite.
pub fn hub_path_positivity(
    g: &SignedClusteredGraph,
    hub: usize,
    h: usize,
    delta_hub: f64,
) -> Result<bool, AssumptionError> {
    let k = g.num_clusters();
    for idx in [hub, h] {
        if idx >= k {
            return Err(AssumptionError::ClusterIndex {
                index: idx,
                clusters: k,
            });
        }
    }
    let hub_block = SymmetricMatrix::from_matrix(g.block(hub, hub))?;
    let d = vec![delta_hub; hub_block.n()];
    let cert = linalg::metzler_pd_certificate(&d, &hub_block)?;
    if !cert.positive_definite {
        return Err(AssumptionError::NotPositiveDefinite);
    }
    let n_h = g.partition().size(h);
    if n_h == 1 {
        return Ok(true);
    }
    let damped = SymmetricMatrix::from_fn(hub_block.n(), |i, j| {
        if i == j {
            delta_hub - hub_block.get(i, j)
        } else {
            -hub_block.get(i, j)
        }
    });
    let chol = linalg::cholesky(&damped)?;
    let cross = g.block(hub, h); // A_hub,h; its transpose is A_h,hub
    let solved: Vec<Vec<f64>> = (0..cross.cols())
        .map(|c| chol.solve(&cross.column(c)))
        .collect(); // solved[i] = (δI - A_hub)^{-1} A_hub,h e_i
    let own = g.block(h, h);
    for i in 0..n_h {
        for j in 0..n_h {
            if i == j {
                continue;
            }
            let coupling = linalg::dot(&solved[i], &cross.column(j));
            if own.get(i, j) + coupling <= STRICT_POSITIVITY_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A cluster ordering: the hub first, the exempt cluster second, every
/// later cluster certified by the close-friendship test against the hub.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterOrdering {
    /// Cluster permutation; `order[new_position] = original_cluster`.
    pub order: Vec<usize>,
    /// Induced agent permutation; `agent_permutation[new] = old`.
    pub agent_permutation: Vec<usize>,
}

impl ClusterOrdering {
    /// Builds the ordering from a cluster permutation, deriving the agent
    /// permutation for the given partition.
    pub fn from_order(
        order: Vec<usize>,
        partition: &ClusterPartition,
    ) -> Result<Self, AssumptionError> {
        let k = partition.num_clusters();
        let mut seen = vec![false; k];
        if order.len() != k {
            return Err(AssumptionError::InconsistentOrdering(format!(
                "ordering has {} entries for {} clusters",
                order.len(),
                k
            )));
        }
        for &c in &order {
            if c >= k || seen[c] {
                return Err(AssumptionError::InconsistentOrdering(format!(
                    "entry {} is out of range or repeated",
                    c
                )));
            }
            seen[c] = true;
        }
        let mut agent_permutation = Vec::with_capacity(partition.num_agents());
        for &c in &order {
            agent_permutation.extend(partition.agents(c));
        }
        Ok(ClusterOrdering {
            order,
            agent_permutation,
        })
    }

    pub fn identity(partition: &ClusterPartition) -> Self {
        Self::from_order((0..partition.num_clusters()).collect(), partition)
            .expect("identity is always consistent")
    }

    pub fn hub(&self) -> usize {
        self.order[0]
    }

    pub fn exempt(&self) -> usize {
        self.order[1]
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &c)| i == c)
    }
}

/// Searches for a hub cluster such that at most one other cluster fails the
/// close-friendship test; the failing cluster (or the lowest-index other
/// cluster, if none fail) is exempt and placed second. Deterministic: the
/// lowest feasible hub wins and remaining clusters keep their order.
pub fn find_ordering(g: &SignedClusteredGraph) -> Result<ClusterOrdering, AssumptionError> {
    let k = g.num_clusters();
    let mut failures = Vec::new();
    for hub in 0..k {
        let verdict = close_friendship_check(g, hub)?;
        let failing: Vec<usize> = (0..k).filter(|&h| h != hub && !verdict[h]).collect();
        if failing.len() <= 1 {
            let exempt = failing
                .first()
                .copied()
                .unwrap_or_else(|| (0..k).find(|&h| h != hub).expect("k >= 2"));
            let mut order = vec![hub, exempt];
            order.extend((0..k).filter(|&h| h != hub && h != exempt));
            return ClusterOrdering::from_order(order, g.partition());
        }
        failures.push((hub, failing));
    }
    Err(AssumptionError::CloseFriendshipUnsatisfied(
        OrderingFailure {
            failing_clusters_per_hub: failures,
        },
    ))
}

/// Applies a cluster ordering, returning the permuted graph together with
/// the agent permutation (`perm[new] = old`) for mapping results back.
pub fn relabel(
    g: &SignedClusteredGraph,
    ordering: &ClusterOrdering,
) -> Result<(SignedClusteredGraph, Vec<usize>), AssumptionError> {
    let partition = g.partition();
    let k = partition.num_clusters();
    if ordering.order.len() != k || ordering.agent_permutation.len() != g.num_agents() {
        return Err(AssumptionError::InconsistentOrdering(format!(
            "ordering over {} clusters / {} agents applied to {} clusters / {} agents",
            ordering.order.len(),
            ordering.agent_permutation.len(),
            k,
            g.num_agents()
        )));
    }
    let sizes: Vec<usize> = ordering.order.iter().map(|&c| partition.size(c)).collect();
    let new_partition = ClusterPartition::new(sizes)
        .map_err(|e| AssumptionError::InconsistentOrdering(e.to_string()))?;
    let perm = &ordering.agent_permutation;
    let n = g.num_agents();
    let mut a = Matrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            a.set(p, q, g.weight(perm[p], perm[q]));
        }
    }
    let permuted = SignedClusteredGraph::new(new_partition, a)
        .map_err(|e| AssumptionError::InconsistentOrdering(e.to_string()))?;
    Ok((permuted, perm.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete_unweighted, validate_structure, SignedClusteredGraph};
    use crate::scenarios;

    fn graph_with_edits(edits: &[(usize, usize, f64)]) -> SignedClusteredGraph {
        let g = scenarios::seven_agent_tripartite();
        let mut a = g.adjacency().clone();
        for &(i, j, w) in edits {
            a.set(i, j, w);
        }
        SignedClusteredGraph::new(g.partition().clone(), a).unwrap()
    }

    #[test]
    fn seven_agent_trust_totals() {
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c.get(i, j), scenarios::SEVEN_AGENT_TRUST[i][j]);
            }
        }
    }

    #[test]
    fn complete_graph_trust_totals() {
        let sizes = [3usize, 4, 2];
        let g = build_complete_unweighted(&sizes).unwrap();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    sizes[i] as f64 - 1.0
                } else {
                    -(sizes[j] as f64)
                };
                assert_eq!(c.get(i, j), want);
            }
        }
    }

    #[test]
    fn inhomogeneous_block_is_rejected() {
        // deepen a single mistrust edge; block (2,1) row sums spread to 1
        let g = graph_with_edits(&[(2, 0, -2.0)]);
        match homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL) {
            Err(AssumptionError::HomogeneityViolation {
                i: 2,
                j: 1,
                max_spread,
            }) => {
                assert!((max_spread - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected: {:?}", other),
        }
    }

    #[test]
    fn familiarity_components_of_fixture() {
        let g = scenarios::seven_agent_tripartite();
        assert_eq!(familiarity_components(&g, 0).unwrap(), vec![vec![0, 1]]);
        assert_eq!(familiarity_components(&g, 2).unwrap(), vec![vec![6]]);
    }

    #[test]
    fn familiarity_splits_on_missing_edges() {
        // three agents in one cluster, only (0,1) positively linked
        let partition = crate::graph::ClusterPartition::new(vec![3, 1]).unwrap();
        let mut a = crate::linalg::Matrix::zeros(4, 4);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        for i in 0..3 {
            a.set(i, 3, -1.0);
            a.set(3, i, -1.0);
        }
        let g = SignedClusteredGraph::new(partition, a).unwrap();
        assert_eq!(
            familiarity_components(&g, 0).unwrap(),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn close_friendship_on_fixture() {
        let g = scenarios::seven_agent_tripartite();
        let verdict = close_friendship_check(&g, 0).unwrap();
        assert_eq!(verdict, vec![true, true, true]);
    }

    /// Three clusters of mutual strangers whose enemies sit in different hub
    /// components: the pair clause cannot fire for any hub.
    fn matched_strangers() -> SignedClusteredGraph {
        let partition = crate::graph::ClusterPartition::new(vec![2, 2, 2]).unwrap();
        let mut a = crate::linalg::Matrix::zeros(6, 6);
        let mut link = |i: usize, j: usize| {
            a.set(i, j, -1.0);
            a.set(j, i, -1.0);
        };
        link(0, 2);
        link(0, 4);
        link(1, 3);
        link(1, 5);
        link(2, 5);
        SignedClusteredGraph::new(partition, a).unwrap()
    }

    #[test]
    fn close_friendship_fails_for_matched_strangers() {
        let g = matched_strangers();
        assert!(validate_structure(&g).passed());
        for hub in 0..3 {
            let verdict = close_friendship_check(&g, hub).unwrap();
            let failing = (0..3).filter(|&h| h != hub && !verdict[h]).count();
            assert_eq!(failing, 2, "hub {} should fail both other clusters", hub);
        }
    }

    #[test]
    fn hub_path_positivity_on_fixture() {
        let g = scenarios::seven_agent_tripartite();
        // frozen oracle: A_22 + A_21 (2I - A_11)^{-1} A_12 via the 2x2
        // inverse (1/3)[[2,1],[1,2]] has off-diagonal entries 5/3, 4/3, 1/3
        assert!(hub_path_positivity(&g, 0, 1, 2.0).unwrap());
    }

    #[test]
    fn hub_path_positivity_vacuous_for_singleton() {
        let g = scenarios::seven_agent_tripartite();
        assert!(hub_path_positivity(&g, 0, 2, 2.0).unwrap());
    }

    #[test]
    fn hub_path_positivity_detects_missing_paths() {
        let g = matched_strangers();
        for delta in [1.0, 5.0, 100.0] {
            assert!(!hub_path_positivity(&g, 0, 1, delta).unwrap());
        }
    }

    #[test]
    fn hub_path_positivity_requires_pd_hub() {
        let g = scenarios::seven_agent_tripartite();
        // delta = 1 makes δI - A_11 singular (eigenvalues 0 and 2)
        assert!(matches!(
            hub_path_positivity(&g, 0, 1, 1.0),
            Err(AssumptionError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn ordering_on_fixture() {
        let g = scenarios::seven_agent_tripartite();
        let o = find_ordering(&g).unwrap();
        assert_eq!(o.order, vec![0, 1, 2]);
        assert_eq!(o.hub(), 0);
        assert_eq!(o.exempt(), 1);
        // deterministic
        assert_eq!(find_ordering(&g).unwrap(), o);
    }

    #[test]
    fn ordering_on_complete_graph() {
        let g = build_complete_unweighted(&[2, 2, 2]).unwrap();
        let o = find_ordering(&g).unwrap();
        assert_eq!(o.order, vec![0, 1, 2]);
        for hub in 0..3 {
            assert_eq!(close_friendship_check(&g, hub).unwrap(), vec![true; 3]);
        }
    }

    #[test]
    fn single_failing_cluster_becomes_exempt() {
        // hub cluster {0,1} complete; {2,3} reach it through enemies in one
        // component; {4,5} are strangers and agent 5 has no hub enemies, so
        // only the last cluster fails and must be placed second
        let partition = crate::graph::ClusterPartition::new(vec![2, 2, 2]).unwrap();
        let mut a = crate::linalg::Matrix::zeros(6, 6);
        let set = |a: &mut crate::linalg::Matrix, i: usize, j: usize, w: f64| {
            a.set(i, j, w);
            a.set(j, i, w);
        };
        set(&mut a, 0, 1, 1.0);
        set(&mut a, 0, 2, -1.0);
        set(&mut a, 1, 3, -1.0);
        set(&mut a, 0, 4, -1.0);
        set(&mut a, 2, 5, -1.0);
        let g = SignedClusteredGraph::new(partition, a).unwrap();
        assert!(validate_structure(&g).passed());
        assert_eq!(close_friendship_check(&g, 0).unwrap(), vec![true, true, false]);
        let o = find_ordering(&g).unwrap();
        assert_eq!(o.order, vec![0, 2, 1]);
        assert_eq!(o.exempt(), 2);
    }

    #[test]
    fn ordering_failure_lists_every_hub() {
        let g = matched_strangers();
        match find_ordering(&g) {
            Err(AssumptionError::CloseFriendshipUnsatisfied(f)) => {
                assert_eq!(f.failing_clusters_per_hub.len(), 3);
                for (_, failing) in &f.failing_clusters_per_hub {
                    assert_eq!(failing.len(), 2);
                }
            }
            other => panic!("unexpected: {:?}", other),
        }
    }

    #[test]
    fn relabel_identity_is_noop() {
        let g = scenarios::seven_agent_tripartite();
        let o = ClusterOrdering::identity(g.partition());
        let (permuted, perm) = relabel(&g, &o).unwrap();
        assert_eq!(permuted, g);
        assert_eq!(perm, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn relabel_reversal_round_trips() {
        let g = scenarios::seven_agent_tripartite();
        let o = ClusterOrdering::from_order(vec![2, 1, 0], g.partition()).unwrap();
        let (permuted, perm) = relabel(&g, &o).unwrap();
        assert_eq!(permuted.partition().sizes(), &[1, 4, 2]);
        assert!(validate_structure(&permuted).passed());
        // agent 0 of the permuted graph is the old agent 6
        assert_eq!(perm[0], 6);
        // applying the inverse ordering restores the original graph
        let mut inverse = vec![0usize; 3];
        for (p, &c) in o.order.iter().enumerate() {
            inverse[c] = p;
        }
        let back = ClusterOrdering::from_order(inverse, permuted.partition()).unwrap();
        let (restored, _) = relabel(&permuted, &back).unwrap();
        assert_eq!(restored, g);
    }

    #[test]
    fn relabel_permutes_trust_matrix() {
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let o = ClusterOrdering::from_order(vec![1, 2, 0], g.partition()).unwrap();
        let (permuted, _) = relabel(&g, &o).unwrap();
        let c_permuted = homogeneity_certificate(&permuted, DEFAULT_HOMOGENEITY_TOL).unwrap();
        assert_eq!(c_permuted, c.permuted(&o.order));
    }

    #[test]
    fn rejects_inconsistent_ordering() {
        let g = scenarios::seven_agent_tripartite();
        assert!(matches!(
            ClusterOrdering::from_order(vec![0, 0, 1], g.partition()),
            Err(AssumptionError::InconsistentOrdering(_))
        ));
        let other = build_complete_unweighted(&[2, 2]).unwrap();
        let o = ClusterOrdering::identity(other.partition());
        assert!(matches!(
            relabel(&g, &o),
            Err(AssumptionError::InconsistentOrdering(_))
        ));
    }
}
