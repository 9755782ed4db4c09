//! Synthesis of the per-cluster stubbornness gains.
//!
//! The general route runs a scalar Schur-pivot recursion on the reduced
//! trust matrix: stage `h` fixes `δ_h` one margin above the running pivot
//! value `m_hh`, and the last gain is pinned to `δ_k = m_kk` exactly, which
//! forces the zero eigenvalue. Candidate gains are then screened through
//! the matrix-level pivot blocks and the kernel analysis; margins double
//! until every check passes. Complete unweighted graphs additionally admit
//! the closed form `δ_i = 2 n_i - 1`.

use crate::assumptions::{self, AssumptionError, ClusterOrdering, TrustMatrix};
use crate::graph::SignedClusteredGraph;
use crate::linalg::{self, LinalgError, Matrix, SymmetricMatrix};
use crate::verification::{self, VerificationError};
use serde::Serialize;
use thiserror::Error;

/// Default initial margin for the synthesis loop.
pub const DEFAULT_MARGIN: f64 = 1.0;
/// Margin doublings attempted before giving up.
pub const MAX_DOUBLINGS: usize = 60;
/// Off-diagonal pattern threshold for irreducibility and strict positivity
/// of the eliminated blocks.
pub const IRREDUCIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("synthesis requires at least 3 clusters, got {0}")]
    TooFewClusters(usize),
    #[error("initial margin must be positive, got {0}")]
    InvalidMargin(f64),
    #[error("scalar pivot at stage {0} is exactly zero")]
    ZeroPivot(usize),
    #[error("pivot block at stage {0} is not positive definite")]
    IntermediateBlockNotPd(usize),
    #[error("cluster sizes are invalid for the closed form: {0}")]
    InvalidSizes(String),
    #[error("gain synthesis failed after {iterations} margin doublings; last failure: {last_failure}")]
    Failed {
        iterations: usize,
        last_failure: String,
    },
    #[error(transparent)]
    Assumption(#[from] AssumptionError),
    #[error(transparent)]
    Verification(#[from] VerificationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Stages of the scalar pivot recursion on the reduced k×k matrix.
///
/// `m(h, i, j)` is the stage-`h` value (0-based; stage 0 is the trust
/// matrix itself) and `pivots[h] = δ_{h+1} - m(h, h+1, h+1)`. With the
/// gains produced by [`synthesize_gains`], the first `k-1` pivots equal
/// the margins and the last pivot is exactly zero.
#[derive(Debug, Clone)]
pub struct ScalarTableau {
    k: usize,
    stages: Vec<Vec<f64>>,
    pub pivots: Vec<f64>,
}

impl ScalarTableau {
    /// Runs the recursion for fixed gains. Intermediate pivots must be
    /// nonzero; the final pivot may take any value.
    pub fn with_deltas(c: &TrustMatrix, deltas: &[f64]) -> Result<Self, SynthesisError> {
        let k = c.k();
        assert_eq!(deltas.len(), k, "one gain per cluster");
        let mut tableau = ScalarTableau {
            k,
            stages: vec![trust_entries(c)],
            pivots: Vec::with_capacity(k),
        };
        for stage in 0..k {
            let pivot = deltas[stage] - tableau.m(stage, stage, stage);
            tableau.pivots.push(pivot);
            if stage + 1 == k {
                break;
            }
            if pivot == 0.0 {
                return Err(SynthesisError::ZeroPivot(stage + 1));
            }
            tableau.push_stage(stage, pivot);
        }
        Ok(tableau)
    }

    /// Runs the recursion choosing each gain on the fly: `δ_h = m_hh + q_h`
    /// for the first `k-1` stages and `δ_k = m_kk` exactly. Returns the
    /// chosen gains alongside the tableau; the arithmetic is identical to
    /// [`ScalarTableau::with_deltas`], so re-running with the returned
    /// gains reproduces the tableau bit for bit.
    ///
    /// A margin far below the working scale can round away entirely
    /// (`fl(m + q) = m`), which surfaces as [`SynthesisError::ZeroPivot`].
    pub fn with_margins(
        c: &TrustMatrix,
        margins: &[f64],
    ) -> Result<(Self, Vec<f64>), SynthesisError> {
        let k = c.k();
        assert_eq!(margins.len(), k - 1, "one margin per stage before the last");
        let mut tableau = ScalarTableau {
            k,
            stages: vec![trust_entries(c)],
            pivots: Vec::with_capacity(k),
        };
        let mut deltas = Vec::with_capacity(k);
        for stage in 0..k {
            let m_hh = tableau.m(stage, stage, stage);
            let delta = if stage + 1 == k {
                m_hh
            } else {
                m_hh + margins[stage]
            };
            deltas.push(delta);
            let pivot = delta - m_hh;
            tableau.pivots.push(pivot);
            if stage + 1 == k {
                break;
            }
            if pivot == 0.0 {
                return Err(SynthesisError::ZeroPivot(stage + 1));
            }
            tableau.push_stage(stage, pivot);
        }
        Ok((tableau, deltas))
    }

    fn push_stage(&mut self, stage: usize, pivot: f64) {
        let k = self.k;
        let prev = &self.stages[stage];
        let mut next = prev.clone();
        for i in (stage + 1)..k {
            for j in (stage + 1)..k {
                next[i * k + j] =
                    prev[i * k + j] + prev[i * k + stage] * prev[stage * k + j] / pivot;
            }
        }
        self.stages.push(next);
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Stage-`h` entry `m^{(h)}_{i,j}`, all indices 0-based.
    pub fn m(&self, stage: usize, i: usize, j: usize) -> f64 {
        self.stages[stage][i * self.k + j]
    }

    /// The value the last gain must take to zero the final pivot.
    pub fn final_gain(&self) -> f64 {
        self.m(self.k - 1, self.k - 1, self.k - 1)
    }
}

fn trust_entries(c: &TrustMatrix) -> Vec<f64> {
    let k = c.k();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            entries.push(c.get(i, j));
        }
    }
    entries
}

/// Matrix-level pivot blocks `Φ_h = δ_h I - M_hh` from the block Schur
/// elimination of the closed-loop matrix, with the structural verdicts the
/// synthesis checks on them.
#[derive(Debug, Clone)]
pub struct PivotBlocks {
    pub phis: Vec<SymmetricMatrix>,
    /// Smallest off-diagonal entry of each eliminated block `M_hh`
    /// (`+inf` for 1×1 blocks); `-Φ_h` is Metzler iff this is nonnegative.
    pub min_offdiag: Vec<f64>,
    /// Whether the final block `-Φ_k` is irreducible on the pattern
    /// `|entry| > IRREDUCIBILITY_TOL`.
    pub last_irreducible: bool,
}

/// Runs the block elimination `M_ij ← M_ij + M_ih Φ_h⁻¹ M_hj` cluster by
/// cluster and returns all pivot blocks. Every intermediate `Φ_h` must be
/// positive definite; the last block is returned unconditioned.
pub fn pivot_blocks(
    g: &SignedClusteredGraph,
    deltas: &[f64],
) -> Result<PivotBlocks, SynthesisError> {
    let k = g.num_clusters();
    if deltas.len() != k {
        return Err(VerificationError::GainCountMismatch {
            expected: k,
            got: deltas.len(),
        }
        .into());
    }
    // current grid of blocks; kept consistent with blocks[j][i] = blocks[i][j]ᵀ
    let mut blocks: Vec<Vec<Matrix>> = (0..k)
        .map(|i| (0..k).map(|j| g.block(i, j)).collect())
        .collect();
    let mut phis = Vec::with_capacity(k);
    let mut min_offdiag = Vec::with_capacity(k);
    for stage in 0..k {
        let own = SymmetricMatrix::from_matrix(blocks[stage][stage].clone())?;
        min_offdiag.push(own.min_offdiag());
        let phi = SymmetricMatrix::from_fn(own.n(), |i, j| {
            if i == j {
                deltas[stage] - own.get(i, j)
            } else {
                -own.get(i, j)
            }
        });
        if stage + 1 == k {
            let last_irreducible = own.is_irreducible(IRREDUCIBILITY_TOL);
            phis.push(phi);
            return Ok(PivotBlocks {
                phis,
                min_offdiag,
                last_irreducible,
            });
        }
        if !linalg::is_positive_definite(&phi)? {
            return Err(SynthesisError::IntermediateBlockNotPd(stage + 1));
        }
        let chol = linalg::cholesky(&phi).map_err(|_| SynthesisError::IntermediateBlockNotPd(stage + 1))?;
        // Z_j = L⁻¹ M_{h,j}; then M_ih Φ_h⁻¹ M_hj = Z_iᵀ Z_j
        let z: Vec<Matrix> = ((stage + 1)..k)
            .map(|j| chol.forward_solve_matrix(&blocks[stage][j]))
            .collect();
        for i in (stage + 1)..k {
            for j in i..k {
                let zi = &z[i - stage - 1];
                let zj = &z[j - stage - 1];
                let rows = zi.cols();
                let cols = zj.cols();
                let mut update = Matrix::zeros(rows, cols);
                for r in 0..rows {
                    let lo = if i == j { r } else { 0 };
                    for c in lo..cols {
                        let mut acc = 0.0;
                        for l in 0..zi.rows() {
                            acc += zi.get(l, r) * zj.get(l, c);
                        }
                        update.set(r, c, acc);
                        if i == j {
                            update.set(c, r, acc);
                        }
                    }
                }
                for r in 0..rows {
                    for c in 0..cols {
                        let v = blocks[i][j].get(r, c) + update.get(r, c);
                        blocks[i][j].set(r, c, v);
                    }
                }
                if i != j {
                    blocks[j][i] = blocks[i][j].transpose();
                }
            }
        }
        phis.push(phi);
    }
    unreachable!("loop returns at the last stage")
}

/// The synthesized stubbornness gains.
#[derive(Debug, Clone, Serialize)]
pub struct GainVector {
    /// One gain per cluster, indexed by the original cluster labels.
    pub deltas: Vec<f64>,
    /// Realized pivots of the first `k-1` stages, in ordering positions;
    /// these equal the scalar pivots exactly.
    pub margins: Vec<f64>,
    /// The ordering under which the gains were synthesized.
    pub ordering_used: ClusterOrdering,
}

/// Synthesizes gains for a validated, certified graph under the given
/// cluster ordering.
///
/// All computation happens in the relabeled graph: `δ_1 = c_11 + q_1`,
/// `δ_h = m_hh + q_h` for the middle stages, and `δ_k = m_kk` exactly.
/// A candidate is accepted when every intermediate pivot block is positive
/// definite, the eliminated blocks from stage 3 on have strictly positive
/// off-diagonals, the final block is irreducible, and the closed-loop
/// matrix is PSD with a block-constant kernel. On failure all margins
/// double, which strictly enlarges the feasible direction; the loop stops
/// after [`MAX_DOUBLINGS`] attempts.
pub fn synthesize_gains(
    g: &SignedClusteredGraph,
    c: &TrustMatrix,
    ordering: &ClusterOrdering,
    q0: f64,
) -> Result<GainVector, SynthesisError> {
    let k = g.num_clusters();
    if k < 3 {
        return Err(SynthesisError::TooFewClusters(k));
    }
    if !(q0 > 0.0) {
        return Err(SynthesisError::InvalidMargin(q0));
    }
    let (ordered_graph, _) = assumptions::relabel(g, ordering)?;
    let ordered_trust = c.permuted(&ordering.order);

    let mut q = q0;
    let mut last_failure = String::from("not attempted");
    for _ in 0..=MAX_DOUBLINGS {
        let margins = vec![q; k - 1];
        let screened = ScalarTableau::with_margins(&ordered_trust, &margins)
            .map_err(|e| e.to_string())
            .and_then(|(tableau, deltas)| {
                screen_candidate(&ordered_graph, &tableau, &deltas)?;
                Ok((tableau, deltas))
            });
        match screened {
            Ok((tableau, deltas)) => {
                let mut original = vec![0.0; k];
                for (position, &cluster) in ordering.order.iter().enumerate() {
                    original[cluster] = deltas[position];
                }
                return Ok(GainVector {
                    deltas: original,
                    margins: tableau.pivots[..k - 1].to_vec(),
                    ordering_used: ordering.clone(),
                });
            }
            Err(reason) => last_failure = reason,
        }
        q *= 2.0;
    }
    Err(SynthesisError::Failed {
        iterations: MAX_DOUBLINGS + 1,
        last_failure,
    })
}

/// All structural and spectral checks on one gain candidate, in the
/// relabeled coordinates. Returns the failing check as text.
fn screen_candidate(
    g: &SignedClusteredGraph,
    tableau: &ScalarTableau,
    deltas: &[f64],
) -> Result<(), String> {
    let k = tableau.k();
    for (stage, &pivot) in tableau.pivots[..k - 1].iter().enumerate() {
        if !(pivot > 0.0) {
            return Err(format!("scalar pivot {} is not positive", stage + 1));
        }
    }
    let blocks = match pivot_blocks(g, deltas) {
        Ok(b) => b,
        Err(e) => return Err(e.to_string()),
    };
    // strict positivity of the eliminated blocks applies from stage 3 on;
    // the exempt cluster in position 2 only needs its pivot block PD
    for stage in 2..k {
        if blocks.min_offdiag[stage] <= IRREDUCIBILITY_TOL {
            return Err(format!(
                "eliminated block {} has a non-positive off-diagonal entry",
                stage + 1
            ));
        }
    }
    if !blocks.last_irreducible {
        return Err("final pivot block is reducible".into());
    }
    let m = match verification::closed_loop_matrix(g, deltas) {
        Ok(m) => m,
        Err(e) => return Err(e.to_string()),
    };
    let report = match verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)
    {
        Ok(r) => r,
        Err(e) => return Err(e.to_string()),
    };
    if !report.is_psd {
        return Err(format!(
            "closed-loop matrix is not PSD (min eigenvalue {})",
            report.min_eigenvalue
        ));
    }
    if report.zero_multiplicity == 0 {
        return Err("closed-loop matrix is not singular".into());
    }
    if !report.block_constant {
        return Err("kernel is not block-constant".into());
    }
    Ok(())
}

/// Closed-form gains for complete unweighted clustered graphs:
/// `δ_i = 2 n_i - 1`.
pub fn complete_graph_gains(sizes: &[usize]) -> Result<GainVector, SynthesisError> {
    if sizes.len() < 2 {
        return Err(SynthesisError::InvalidSizes(format!(
            "need at least 2 clusters, got {}",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(SynthesisError::InvalidSizes("cluster sizes must be positive".into()));
    }
    let partition = crate::graph::ClusterPartition::new(sizes.to_vec())
        .map_err(|e| SynthesisError::InvalidSizes(e.to_string()))?;
    let deltas: Vec<f64> = sizes.iter().map(|&n| 2.0 * n as f64 - 1.0).collect();
    // stage-one slack δ_h - c_hh = n_h, recorded for reporting
    let margins: Vec<f64> = sizes[..sizes.len() - 1].iter().map(|&n| n as f64).collect();
    Ok(GainVector {
        deltas,
        margins,
        ordering_used: ClusterOrdering::identity(&partition),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assumptions::{
        find_ordering, homogeneity_certificate, DEFAULT_HOMOGENEITY_TOL,
    };
    use crate::graph::build_complete_unweighted;
    use crate::scenarios;

    fn fixture_trust() -> TrustMatrix {
        let rows: Vec<Vec<f64>> = scenarios::SEVEN_AGENT_TRUST
            .iter()
            .map(|r| r.to_vec())
            .collect();
        TrustMatrix::from_rows(&rows)
    }

    #[test]
    fn final_gain_is_independent_of_middle_margin() {
        let c = fixture_trust();
        for d2 in [5.0, 10.0, 100.0] {
            let tableau = ScalarTableau::with_deltas(&c, &[2.0, d2, 0.0]).unwrap();
            assert!((tableau.final_gain() - 2.0).abs() <= 1e-12, "d2 = {}", d2);
        }
    }

    #[test]
    fn diagonal_trust_matrix_keeps_entries() {
        let c = TrustMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let deltas = [4.0, 7.0, 11.0];
        let tableau = ScalarTableau::with_deltas(&c, &deltas).unwrap();
        for stage in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(tableau.m(stage, i, j), c.get(i, j));
                }
            }
            assert_eq!(tableau.pivots[stage], deltas[stage] - c.get(stage, stage));
        }
    }

    #[test]
    fn pivots_match_gaussian_elimination() {
        // oracle: unpivoted Gaussian elimination on D - C leaves the scalar
        // pivots on the diagonal
        let c = TrustMatrix::from_rows(&[
            vec![1.5, -0.5, -1.0, -0.2],
            vec![-0.3, 2.0, -0.4, -0.6],
            vec![-0.8, -0.1, 1.0, -0.9],
            vec![-0.2, -0.7, -0.3, 0.5],
        ]);
        let deltas = [3.0, 4.0, 2.5, 1.5];
        let tableau = ScalarTableau::with_deltas(&c, &deltas).unwrap();
        let k = 4;
        let mut r = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                r[i][j] = if i == j { deltas[i] - c.get(i, j) } else { -c.get(i, j) };
            }
        }
        for stage in 0..k {
            assert!(
                (tableau.pivots[stage] - r[stage][stage]).abs() < 1e-12,
                "pivot {} mismatch",
                stage
            );
            if stage + 1 == k {
                break;
            }
            for i in (stage + 1)..k {
                let factor = r[i][stage] / r[stage][stage];
                for j in stage..k {
                    r[i][j] -= factor * r[stage][j];
                }
            }
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let c = fixture_trust();
        // δ_1 = c_11 makes the first pivot vanish
        assert!(matches!(
            ScalarTableau::with_deltas(&c, &[1.0, 5.0, 2.0]),
            Err(SynthesisError::ZeroPivot(1))
        ));
    }

    #[test]
    fn margins_reproduce_fixture_gains() {
        let c = fixture_trust();
        let (tableau, deltas) = ScalarTableau::with_margins(&c, &[1.0, 1.0]).unwrap();
        assert_eq!(deltas, vec![2.0, 5.0, 2.0]);
        assert_eq!(tableau.pivots[0], 1.0);
        assert_eq!(tableau.pivots[1], 1.0);
        assert_eq!(tableau.pivots[2], 0.0);
    }

    #[test]
    fn underflowing_margin_rounds_to_zero_pivot() {
        let c = fixture_trust();
        // a margin below the ulp of the running diagonal rounds away
        assert!(matches!(
            ScalarTableau::with_margins(&c, &[1e-300, 1e-300]),
            Err(SynthesisError::ZeroPivot(1))
        ));
    }

    #[test]
    fn retry_cap_is_enforced_and_terminates() {
        // 60 doublings of 1e-300 stay far below the ulp of the trust
        // totals, so every candidate fails and the loop must give up
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = find_ordering(&g).unwrap();
        match synthesize_gains(&g, &c, &ordering, 1e-300) {
            Err(SynthesisError::Failed {
                iterations,
                last_failure,
            }) => {
                assert_eq!(iterations, MAX_DOUBLINGS + 1);
                assert!(last_failure.contains("pivot"), "{}", last_failure);
            }
            other => panic!("unexpected: {:?}", other),
        }
    }

    #[test]
    fn pivot_blocks_on_fixture() {
        let g = scenarios::seven_agent_tripartite();
        let blocks = pivot_blocks(&g, &[2.0, 5.0, 2.0]).unwrap();
        let phi1 = &blocks.phis[0];
        assert_eq!(phi1.get(0, 0), 2.0);
        assert_eq!(phi1.get(0, 1), -1.0);
        // the final 1×1 block collapses to zero because δ_3 = m_33
        let phi3 = &blocks.phis[2];
        assert_eq!(phi3.n(), 1);
        assert!(phi3.get(0, 0).abs() <= 1e-12);
        assert!(blocks.last_irreducible);
    }

    #[test]
    fn pivot_blocks_match_scalar_recursion_for_singletons() {
        // every cluster a single agent: the block recursion is the scalar one
        let partition = crate::graph::ClusterPartition::new(vec![1, 1, 1]).unwrap();
        let mut a = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    a.set(i, j, -1.0);
                }
            }
        }
        let g = SignedClusteredGraph::new(partition, a).unwrap();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let deltas = [2.0, 3.0, 1.5];
        let blocks = pivot_blocks(&g, &deltas).unwrap();
        let tableau = ScalarTableau::with_deltas(&c, &deltas).unwrap();
        for stage in 0..3 {
            assert!(
                (blocks.phis[stage].get(0, 0) - tableau.pivots[stage]).abs() < 1e-12,
                "stage {}",
                stage
            );
        }
    }

    #[test]
    fn pivot_blocks_on_two_complete_clusters() {
        let g = build_complete_unweighted(&[2, 2]).unwrap();
        let blocks = pivot_blocks(&g, &[3.0, 3.0]).unwrap();
        let phi2 = &blocks.phis[1];
        for (i, j, want) in [(0, 0, 2.0), (0, 1, -2.0), (1, 0, -2.0), (1, 1, 2.0)] {
            assert!((phi2.get(i, j) - want).abs() < 1e-12);
        }
        // PSD and singular: eigenvalues {0, 4}
        let eig = linalg::sym_eigen(phi2, linalg::DEFAULT_EIGEN_TOL).unwrap();
        assert!(eig.values[0].abs() < 1e-12);
        assert!((eig.values[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pivot_blocks_reject_indefinite_stage() {
        let g = scenarios::seven_agent_tripartite();
        assert!(matches!(
            pivot_blocks(&g, &[0.5, 5.0, 2.0]),
            Err(SynthesisError::IntermediateBlockNotPd(1))
        ));
    }

    #[test]
    fn synthesize_on_fixture_accepts_first_margin() {
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = find_ordering(&g).unwrap();
        let gains = synthesize_gains(&g, &c, &ordering, DEFAULT_MARGIN).unwrap();
        assert_eq!(gains.deltas, vec![2.0, 5.0, 2.0]);
        assert!(gains.deltas[1] > 4.0);
        assert_eq!(gains.margins, vec![1.0, 1.0]);
    }

    #[test]
    fn synthesize_requires_three_clusters() {
        let g = build_complete_unweighted(&[2, 2]).unwrap();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = ClusterOrdering::identity(g.partition());
        assert!(matches!(
            synthesize_gains(&g, &c, &ordering, 1.0),
            Err(SynthesisError::TooFewClusters(2))
        ));
    }

    #[test]
    fn synthesize_requires_positive_margin() {
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = find_ordering(&g).unwrap();
        assert!(matches!(
            synthesize_gains(&g, &c, &ordering, 0.0),
            Err(SynthesisError::InvalidMargin(_))
        ));
    }

    #[test]
    fn general_route_also_covers_complete_graphs() {
        let g = build_complete_unweighted(&[2, 2, 2]).unwrap();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = find_ordering(&g).unwrap();
        let general = synthesize_gains(&g, &c, &ordering, 1.0).unwrap();
        let closed = complete_graph_gains(&[2, 2, 2]).unwrap();
        for gains in [&general, &closed] {
            let m = verification::closed_loop_matrix(&g, &gains.deltas).unwrap();
            let report =
                verification::analyze_kernel(&m, g.partition(), verification::DEFAULT_KERNEL_TOL)
                    .unwrap();
            assert!(report.is_psd, "gains {:?}", gains.deltas);
            assert!(report.zero_multiplicity >= 1);
            assert!(report.block_constant);
        }
    }

    #[test]
    fn closed_form_values() {
        let gains = complete_graph_gains(&[9, 13, 14, 11, 7]).unwrap();
        assert_eq!(gains.deltas, vec![17.0, 25.0, 27.0, 21.0, 13.0]);
        let gains = complete_graph_gains(&[1, 1, 1]).unwrap();
        assert_eq!(gains.deltas, vec![1.0, 1.0, 1.0]);
        let gains = complete_graph_gains(&[6, 9, 11, 7]).unwrap();
        assert_eq!(gains.deltas, vec![11.0, 17.0, 21.0, 13.0]);
    }

    #[test]
    fn closed_form_rejects_bad_sizes() {
        assert!(matches!(
            complete_graph_gains(&[3]),
            Err(SynthesisError::InvalidSizes(_))
        ));
        assert!(matches!(
            complete_graph_gains(&[]),
            Err(SynthesisError::InvalidSizes(_))
        ));
    }

    #[test]
    fn scalar_and_matrix_pivots_agree_on_fixture() {
        let g = scenarios::seven_agent_tripartite();
        let c = homogeneity_certificate(&g, DEFAULT_HOMOGENEITY_TOL).unwrap();
        let ordering = find_ordering(&g).unwrap();
        let gains = synthesize_gains(&g, &c, &ordering, 1.0).unwrap();
        let tableau = ScalarTableau::with_deltas(&c, &gains.deltas).unwrap();
        let blocks = pivot_blocks(&g, &gains.deltas).unwrap();
        for stage in 0..3 {
            let phi = &blocks.phis[stage];
            let ones = vec![1.0; phi.n()];
            let row_sums = phi.matvec(&ones);
            for v in row_sums {
                assert!(
                    (v - tableau.pivots[stage]).abs() < 1e-8,
                    "stage {}: {} vs {}",
                    stage,
                    v,
                    tableau.pivots[stage]
                );
            }
        }
    }
}
