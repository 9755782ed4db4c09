//! k-partite consensus toolkit for signed clustered communication graphs.
//!
//! A network of single-integrator agents is split into `k` clusters with
//! cooperative (nonnegative) weights inside each cluster and antagonistic
//! (nonpositive) weights across clusters. The crate validates such graphs,
//! certifies the homogeneity of trust/mistrust and the close-friendship
//! structure, synthesizes per-cluster stubbornness gains that render the
//! closed-loop matrix `M = D - A` singular positive semidefinite with a
//! block-constant kernel, and simulates the resulting linear and nonlinear
//! opinion dynamics until per-cluster consensus is reached.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`] — dense symmetric kernel: Jacobi eigensolver, Cholesky,
//!   Schur splits, Metzler positive-definiteness certificates, coupling
//!   suppression margins.
//! * [`graph`] — data model, JSON I/O and structural validation of signed
//!   clustered graphs.
//! * [`assumptions`] — homogeneity certificates, familiarity components,
//!   close-friendship checks and cluster orderings.
//! * [`verification`] — closed-loop matrix, kernel analysis, reduced k×k
//!   system and steady-state prediction.
//! * [`synthesis`] — scalar pivot recursion, the margin loop producing the
//!   stubbornness gains, and the closed form for complete unweighted graphs.
//! * [`simulate`] — exact spectral and RK4 integration, admissible
//!   nonlinearities, consensus detection and the Lyapunov functional.
//! * [`scenarios`] — bundled regression fixtures used by `kpartite reproduce`.
//! * [`cli`] — the command-line front end.

pub mod assumptions;
pub mod cli;
pub mod graph;
pub mod linalg;
pub mod scenarios;
pub mod simulate;
pub mod synthesis;
pub mod verification;

pub use assumptions::{ClusterOrdering, TrustMatrix};
pub use graph::{ClusterPartition, SignedClusteredGraph, ValidationReport};
pub use linalg::{EigenDecomposition, Matrix, SymmetricMatrix};
pub use simulate::{ConsensusReport, NonlinearProfile, Trajectory};
pub use synthesis::{GainVector, ScalarTableau};
pub use verification::KernelReport;
