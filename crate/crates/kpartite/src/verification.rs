//! Builds the closed-loop matrix `M = D - A` and checks the spectral
//! consensus conditions: `M` singular positive semidefinite with a kernel
//! spanned by block-constant vectors. Also exposes the reduced k×k system
//! on the trust totals and the steady-state predictor.

use crate::assumptions::TrustMatrix;
use crate::graph::{ClusterPartition, SignedClusteredGraph};
use crate::linalg::{self, LinalgError, Matrix, SymmetricMatrix};
use serde::Serialize;
use thiserror::Error;

/// Relative tolerance used to cluster eigenvalues at zero and for the PSD
/// verdict; applied against `‖M‖_F`.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum VerificationError {
    #[error("expected {expected} gains, got {got}")]
    GainCountMismatch { expected: usize, got: usize },
    #[error("state vector has {got} entries, expected {expected}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `M = diag(δ_1 I, ..., δ_k I) - A` for a validated graph.
pub fn closed_loop_matrix(
    g: &SignedClusteredGraph,
    deltas: &[f64],
) -> Result<SymmetricMatrix, VerificationError> {
    let k = g.num_clusters();
    if deltas.len() != k {
        return Err(VerificationError::GainCountMismatch {
            expected: k,
            got: deltas.len(),
        });
    }
    let partition = g.partition();
    let n = g.num_agents();
    let a = g.adjacency();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                deltas[partition.cluster_of(i)] - a.get(i, j)
            } else {
                -a.get(i, j)
            };
            m.set(i, j, v);
        }
    }
    Ok(SymmetricMatrix::from_matrix(m)?)
}

/// Spectral verdict on `M`: PSD flag, zero-eigenvalue multiplicity, an
/// orthonormal kernel basis, whether each kernel vector is constant on
/// every cluster, and the per-cluster coefficients when it is.
#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub zero_multiplicity: usize,
    /// Orthonormal basis of the numerical kernel, sign-normalized so the
    /// first nonzero cluster coefficient is positive.
    pub kernel_basis: Vec<Vec<f64>>,
    pub block_constant: bool,
    /// One k-tuple per kernel vector, scaled to unit Euclidean norm;
    /// recorded only when `block_constant` holds.
    pub alphas: Vec<Vec<f64>>,
}

/// Eigendecomposes `M` and reports the kernel structure. Eigenvalues with
/// `|λ| ≤ tol·‖M‖_F` count as zero; the same threshold drives the PSD
/// verdict and the per-cluster constancy test.
pub fn analyze_kernel(
    m: &SymmetricMatrix,
    partition: &ClusterPartition,
    tol: f64,
) -> Result<KernelReport, VerificationError> {
    let eig = linalg::sym_eigen(m, linalg::DEFAULT_EIGEN_TOL)?;
    let norm = m.frobenius_norm();
    let threshold = tol * norm;
    let min_eigenvalue = eig.min_value();
    let is_psd = min_eigenvalue >= -threshold;
    let k = partition.num_clusters();

    let mut kernel_basis = Vec::new();
    let mut alphas = Vec::new();
    let mut block_constant = true;
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > threshold {
            continue;
        }
        let mut v = eig.vectors.column(idx);
        let mut means = vec![0.0; k];
        let mut max_dev: f64 = 0.0;
        for c in 0..k {
            let agents = partition.agents(c);
            let size = agents.len() as f64;
            let mean: f64 = agents.clone().map(|a| v[a]).sum::<f64>() / size;
            means[c] = mean;
            for a in agents {
                max_dev = max_dev.max((v[a] - mean).abs());
            }
        }
        // unit vectors: deviation measured against ‖v‖ = 1
        if max_dev > tol {
            block_constant = false;
        }
        // deterministic sign: first nonzero cluster coefficient positive
        if let Some(first) = means.iter().find(|m| m.abs() > threshold.max(tol)) {
            if *first < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
                for m in means.iter_mut() {
                    *m = -*m;
                }
            }
        }
        kernel_basis.push(v);
        alphas.push(means);
    }
    let zero_multiplicity = kernel_basis.len();
    if block_constant {
        for a in alphas.iter_mut() {
            let norm = linalg::norm2(a);
            if norm > 0.0 {
                for x in a.iter_mut() {
                    *x /= norm;
                }
            }
        }
    } else {
        alphas.clear();
    }
    Ok(KernelReport {
        is_psd,
        min_eigenvalue,
        zero_multiplicity,
        kernel_basis,
        block_constant,
        alphas,
    })
}

/// The reduced k×k system `D - C` on the trust totals, its smallest
/// singular value, and a unit null vector when it is numerically singular.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedSystem {
    pub entries: Vec<Vec<f64>>,
    pub smallest_singular_value: f64,
    /// Unit null vector `w = [α_1..α_k]`, present when the smallest
    /// singular value is at most `tol · ‖D - C‖_F`.
    pub null_vector: Option<Vec<f64>>,
}

/// Builds `D - C` and estimates its smallest singular value through the
/// symmetrized Gram matrix `(D-C)ᵀ(D-C)`. The Gram route loses half the
/// digits near zero, so the reported value is the residual `‖(D-C) w‖` of
/// the candidate null vector, which is accurate and an upper bound.
pub fn reduced_system(c: &TrustMatrix, deltas: &[f64], tol: f64) -> ReducedSystem {
    let k = c.k();
    assert_eq!(deltas.len(), k, "one gain per cluster");
    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let v = if i == j {
                deltas[i] - c.get(i, j)
            } else {
                -c.get(i, j)
            };
            r.set(i, j, v);
        }
    }
    let gram = SymmetricMatrix::from_fn(k, |i, j| linalg::dot(&r.column(i), &r.column(j)));
    let eig = linalg::sym_eigen(&gram, linalg::DEFAULT_EIGEN_TOL)
        .expect("Gram matrices are finite and symmetric");
    let mut w = eig.vectors.column(0);
    // sign convention: first entry of visible magnitude is positive
    if let Some(first) = w.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            for x in w.iter_mut() {
                *x = -*x;
            }
        }
    }
    let smallest_singular_value = linalg::norm2(&r.matvec(&w));
    let null_vector =
        if smallest_singular_value <= tol * r.frobenius_norm().max(f64::MIN_POSITIVE) {
            Some(w)
        } else {
            None
        };
    ReducedSystem {
        entries: (0..k).map(|i| r.row(i).to_vec()).collect(),
        smallest_singular_value,
        null_vector,
    }
}

/// Projects the initial state onto the kernel of a PSD matrix: the steady
/// state of `ẋ = -M x` is `x* = Σ (vᵢᵀ x₀) vᵢ` over an orthonormal kernel
/// basis.
pub fn predict_steady_state(
    m: &SymmetricMatrix,
    x0: &[f64],
    tol: f64,
) -> Result<Vec<f64>, VerificationError> {
    if x0.len() != m.n() {
        return Err(VerificationError::StateDimensionMismatch {
            expected: m.n(),
            got: x0.len(),
        });
    }
    let eig = linalg::sym_eigen(m, linalg::DEFAULT_EIGEN_TOL)?;
    let norm = m.frobenius_norm();
    let threshold = tol * norm;
    if eig.min_value() < -threshold {
        return Err(VerificationError::NotPsd(eig.min_value()));
    }
    let n = m.n();
    let mut x_star = vec![0.0; n];
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > threshold {
            continue;
        }
        let v = eig.vectors.column(idx);
        let coeff = linalg::dot(&v, x0);
        for (xs, vi) in x_star.iter_mut().zip(v.iter()) {
            *xs += coeff * vi;
        }
    }
    Ok(x_star)
}
