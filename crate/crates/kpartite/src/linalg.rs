//! Self-contained dense symmetric linear algebra.
//!
//! Everything in this crate works with small matrices (a few hundred rows at
//! most), so the kernel favours simplicity and verifiable accuracy over
//! scalability: a cyclic Jacobi eigensolver with orthonormal vectors,
//! Cholesky for positive definite solves, Schur splits of block symmetric
//! matrices, a positive-vector certificate for `D - A` with `A` Metzler, and
//! the diagonal margin that makes `C (D - A)^{-1} B` entrywise small.

use thiserror::Error;

/// Convergence threshold for the Jacobi sweep, relative to `‖S‖_F`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Positive definiteness: smallest eigenvalue must exceed this times `‖S‖_F`.
pub const PD_TOL_FACTOR: f64 = 1e-10;
/// Positive semidefiniteness: smallest eigenvalue must stay above the
/// negative of this times `‖S‖_F`.
pub const PSD_TOL_FACTOR: f64 = 1e-9;
/// Maximum number of cyclic Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix contains a non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NonConvergence(usize),
    #[error("leading {0}x{0} block is not positive definite")]
    LeadingBlockNotPd(usize),
    #[error("matrix is not Metzler: entry ({row},{col}) = {value}")]
    NotMetzler { row: usize, col: usize, value: f64 },
    #[error("matrix is not positive definite (pivot {0} failed)")]
    NotPositiveDefinite(usize),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    context: format!("row {} has length {}, expected {}", i, row.len(), c),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            out[r] = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Extracts the sub-matrix with the given half-open row/column ranges.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                out.set(r - r0, c - c0, self.get(r, c));
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

/// Square matrix with exact symmetry enforced at construction.
///
/// Symmetry is checked with `==` on the stored floats; callers that build
/// matrices which are only symmetric up to rounding must symmetrize first.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    inner: Matrix,
}

impl SymmetricMatrix {
    pub fn from_matrix(m: Matrix) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::DimensionMismatch {
                context: format!("{}x{} matrix is not square", m.rows(), m.cols()),
            });
        }
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if !v.is_finite() {
                    return Err(LinalgError::NonFinite { row: r, col: c });
                }
                if c > r && v != m.get(c, r) {
                    return Err(LinalgError::NotSymmetric { row: r, col: c });
                }
            }
        }
        Ok(SymmetricMatrix { inner: m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        Self::from_matrix(Matrix::from_rows(rows)?)
    }

    /// Fills entries from `f` evaluated on the upper triangle and mirrors
    /// them, so the result is symmetric by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for r in 0..n {
            for c in r..n {
                let v = f(r, c);
                m.set(r, c, v);
                m.set(c, r, v);
            }
        }
        SymmetricMatrix { inner: m }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, *v);
        }
        SymmetricMatrix { inner: m }
    }

    pub fn identity(n: usize) -> Self {
        SymmetricMatrix {
            inner: Matrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.inner.get(r, c)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn to_matrix(&self) -> Matrix {
        self.inner.clone()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.inner.matvec(x)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// True when every off-diagonal entry is nonnegative.
    pub fn is_metzler(&self) -> bool {
        self.first_negative_offdiag().is_none()
    }

    fn first_negative_offdiag(&self) -> Option<(usize, usize, f64)> {
        let n = self.n();
        for r in 0..n {
            for c in 0..n {
                if r != c && self.get(r, c) < 0.0 {
                    return Some((r, c, self.get(r, c)));
                }
            }
        }
        None
    }

    /// Smallest off-diagonal entry; `+inf` for 1×1 matrices.
    pub fn min_offdiag(&self) -> f64 {
        let n = self.n();
        let mut min = f64::INFINITY;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    min = min.min(self.get(r, c));
                }
            }
        }
        min
    }

    /// Connectivity of the off-diagonal pattern `|entry| > threshold`,
    /// equivalent to irreducibility of the matrix. 1×1 matrices are
    /// irreducible by convention.
    pub fn is_irreducible(&self, threshold: f64) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if w != v && !seen[w] && self.get(v, w).abs() > threshold {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Solves `S x = b` through the decomposition, dropping modes with
    /// `|λ| ≤ tol · max|λ|` (pseudo-solve for singular matrices).
    pub fn pseudo_solve(&self, b: &[f64], tol: f64) -> Vec<f64> {
        let n = self.values.len();
        assert_eq!(b.len(), n, "pseudo_solve dimension mismatch");
        let cutoff = tol * self.max_abs_value();
        let mut x = vec![0.0; n];
        for (i, &lambda) in self.values.iter().enumerate() {
            if lambda.abs() <= cutoff {
                continue;
            }
            let v = self.vectors.column(i);
            let coeff = dot(&v, b) / lambda;
            for (xj, vj) in x.iter_mut().zip(v.iter()) {
                *xj += coeff * vj;
            }
        }
        x
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Rotations sweep the strict upper triangle until the largest off-diagonal
/// magnitude drops below `tol · ‖S‖_F`; eigenvalues are returned ascending
/// with the eigenvector columns permuted consistently. The accumulated
/// rotation product keeps the vectors orthonormal to machine precision.
pub fn sym_eigen(s: &SymmetricMatrix, tol: f64) -> Result<EigenDecomposition, LinalgError> {
    let n = s.n();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: Matrix::zeros(0, 0),
        });
    }
    let mut a = s.to_matrix();
    let mut v = Matrix::identity(n);
    let norm = s.frobenius_norm();
    let threshold = tol * norm;

    let mut converged = n == 1 || norm == 0.0;
    if !converged {
        for _ in 0..MAX_SWEEPS {
            let mut off_max: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off_max = off_max.max(a.get(p, q).abs());
                }
            }
            if off_max <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged {
            // re-check after the final sweep
            let mut off_max: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off_max = off_max.max(a.get(p, q).abs());
                }
            }
            converged = off_max <= threshold;
        }
    }
    if !converged {
        return Err(LinalgError::NonConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
    // guard against theta^2 overflow for nearly diagonal pairs
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);
    let n = a.rows();

    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        a.set(r, p, new_rp);
        a.set(p, r, new_rp);
        a.set(r, q, new_rq);
        a.set(q, r, new_rq);
    }
    for r in 0..n {
        let vrp = v.get(r, p);
        let vrq = v.get(r, q);
        v.set(r, p, vrp - s * (vrq + tau * vrp));
        v.set(r, q, vrq + s * (vrp - tau * vrq));
    }
}

/// Lower-triangular Cholesky factor of a positive definite matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: Matrix,
}

pub fn cholesky(s: &SymmetricMatrix) -> Result<CholeskyFactor, LinalgError> {
    let n = s.n();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = s.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite(j));
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in (j + 1)..n {
            let mut v = s.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / djj);
        }
    }
    Ok(CholeskyFactor { l })
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.l.rows()
    }

    /// Solves `L y = b` (forward substitution).
    fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = b[i];
            for k in 0..i {
                v -= self.l.get(i, k) * y[k];
            }
            y[i] = v / self.l.get(i, i);
        }
        y
    }

    /// Solves `Lᵀ x = y` (back substitution).
    fn backward(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v -= self.l.get(k, i) * x[k];
            }
            x[i] = v / self.l.get(i, i);
        }
        x
    }

    /// Solves `S x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.backward(&self.forward(b))
    }

    /// Returns `L⁻¹ B`, column by column.
    pub fn forward_solve_matrix(&self, b: &Matrix) -> Matrix {
        assert_eq!(b.rows(), self.n(), "forward_solve dimension mismatch");
        let mut out = Matrix::zeros(b.rows(), b.cols());
        for c in 0..b.cols() {
            let col: Vec<f64> = (0..b.rows()).map(|r| b.get(r, c)).collect();
            let y = self.forward(&col);
            for (r, v) in y.iter().enumerate() {
                out.set(r, c, *v);
            }
        }
        out
    }

    /// Full inverse `S⁻¹`, symmetrized from the solved columns.
    pub fn inverse(&self) -> Matrix {
        let n = self.n();
        let mut inv = Matrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let x = self.solve(&e);
            for r in 0..n {
                inv.set(r, c, x[r]);
            }
        }
        // solved columns agree up to rounding; make symmetry exact
        for r in 0..n {
            for c in (r + 1)..n {
                let v = 0.5 * (inv.get(r, c) + inv.get(c, r));
                inv.set(r, c, v);
                inv.set(c, r, v);
            }
        }
        inv
    }
}

/// Eigenvalue-based positive definiteness test with a scale-relative
/// threshold: `λ_min > PD_TOL_FACTOR · ‖S‖_F`.
pub fn is_positive_definite(s: &SymmetricMatrix) -> Result<bool, LinalgError> {
    let eig = sym_eigen(s, DEFAULT_EIGEN_TOL)?;
    Ok(eig.min_value() > PD_TOL_FACTOR * s.frobenius_norm())
}

/// Splits a block symmetric matrix `[[R, S], [Sᵀ, Q]]` into its leading
/// block `R` and the Schur complement `H = Q - Sᵀ R⁻¹ S`.
///
/// `R` must be positive definite. The split is the congruence
/// `M = Lᵀ diag(R, H) L`, so the eigenvalue sign counts of `R` and `H` add
/// up to those of `M` (the eigenvalues themselves are not preserved); in
/// particular `M` is positive (semi)definite iff `H` is.
pub fn schur_split(
    m: &SymmetricMatrix,
    block_size: usize,
) -> Result<(SymmetricMatrix, SymmetricMatrix), LinalgError> {
    let n = m.n();
    if block_size == 0 || block_size >= n {
        return Err(LinalgError::DimensionMismatch {
            context: format!("block size {} invalid for {}x{} matrix", block_size, n, n),
        });
    }
    let r_block =
        SymmetricMatrix::from_matrix(m.as_matrix().submatrix(0, block_size, 0, block_size))?;
    if !is_positive_definite(&r_block)? {
        return Err(LinalgError::LeadingBlockNotPd(block_size));
    }
    let chol = cholesky(&r_block).map_err(|_| LinalgError::LeadingBlockNotPd(block_size))?;
    let s_block = m.as_matrix().submatrix(0, block_size, block_size, n);
    let z = chol.forward_solve_matrix(&s_block); // L⁻¹ S, so Sᵀ R⁻¹ S = Zᵀ Z
    let q_size = n - block_size;
    let h = SymmetricMatrix::from_fn(q_size, |i, j| {
        let mut v = m.get(block_size + i, block_size + j);
        for k in 0..block_size {
            v -= z.get(k, i) * z.get(k, j);
        }
        v
    });
    Ok((r_block, h))
}

/// Outcome of the positive-vector test for `D - A` with `A` Metzler.
#[derive(Debug, Clone)]
pub struct MetzlerCertificate {
    pub positive_definite: bool,
    /// `z = (D - A)⁻¹ 1`, strictly positive whenever `D - A` is PD.
    pub z: Option<Vec<f64>>,
    /// Smallest entry of `(D - A)⁻¹`; nonnegative up to rounding when PD.
    pub min_inverse_entry: Option<f64>,
}

/// Decides positive definiteness of `D - A` for diagonal `D` and symmetric
/// Metzler `A`, and produces the certificate vector when it holds.
///
/// `D - A` is PD iff a strictly positive `z` exists with `(D - A) z ≫ 0`;
/// the certificate returned is `z = (D - A)⁻¹ 1`, for which `(D - A) z = 1`
/// by construction. When PD, `(D - A)⁻¹` is entrywise nonnegative.
pub fn metzler_pd_certificate(
    d: &[f64],
    a: &SymmetricMatrix,
) -> Result<MetzlerCertificate, LinalgError> {
    let n = a.n();
    if d.len() != n {
        return Err(LinalgError::DimensionMismatch {
            context: format!("diagonal length {} vs matrix size {}", d.len(), n),
        });
    }
    if let Some((row, col, value)) = a.first_negative_offdiag() {
        return Err(LinalgError::NotMetzler { row, col, value });
    }
    let s = SymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            d[i] - a.get(i, j)
        } else {
            -a.get(i, j)
        }
    });
    if !is_positive_definite(&s)? {
        return Ok(MetzlerCertificate {
            positive_definite: false,
            z: None,
            min_inverse_entry: None,
        });
    }
    let chol = cholesky(&s)?;
    let z = chol.solve(&vec![1.0; n]);
    let inv = chol.inverse();
    let min_inv = inv
        .row(0)
        .iter()
        .chain((1..n).flat_map(|r| inv.row(r).iter()))
        .fold(f64::INFINITY, |m, v| m.min(*v));
    Ok(MetzlerCertificate {
        positive_definite: true,
        z: Some(z),
        min_inverse_entry: Some(if n == 0 { 0.0 } else { min_inv }),
    })
}

/// Diagonal margin from the mode analysis of `C (D - A)⁻¹ B`.
#[derive(Debug, Clone, Copy)]
pub struct MarginBound {
    /// Scalar `δ` of `Δ = δ I`; `D = Δ + L̄ + A` then keeps every entry of
    /// `C (D - A)⁻¹ B` below the requested `eps`.
    pub delta: f64,
    /// Largest entry magnitude of `cᵢ bᵢᵀ` over the nonzero Laplacian modes.
    pub psi: f64,
}

/// Chooses a diagonal margin `δ` so that with `D = δ I + L̄ + A` (where `L̄`
/// is the Laplacian of `A` with its diagonal removed) every entry of
/// `C (D - A)⁻¹ B` has magnitude below `eps`.
///
/// The mode expansion gives `C (D - A)⁻¹ B = Σᵢ cᵢ bᵢᵀ / (δ + λᵢ)` over the
/// eigenmodes of `L̄`, so `δ` one order above `(n-1)·ψ/eps` suffices. The
/// reported `ψ` ranges over the `n - 1` largest modes; the margin itself is
/// computed from all `n` modes so the entrywise bound holds even when the
/// constant mode carries most of the weight. For `n = 1` there are no
/// nontrivial modes and the margin degenerates to its floor of 1.
pub fn suppression_margin(
    a: &SymmetricMatrix,
    b: &Matrix,
    c: &Matrix,
    eps: f64,
) -> Result<MarginBound, LinalgError> {
    if eps <= 0.0 {
        return Err(LinalgError::InvalidTolerance(eps));
    }
    if let Some((row, col, value)) = a.first_negative_offdiag() {
        return Err(LinalgError::NotMetzler { row, col, value });
    }
    let n = a.n();
    if b.rows() != n || c.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            context: format!(
                "A is {n}x{n}, B is {}x{}, C is {}x{}",
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            ),
        });
    }
    let lap = offdiag_laplacian(a);
    let eig = sym_eigen(&lap, DEFAULT_EIGEN_TOL)?;
    // per-mode weight: max |cᵢ[h] · bᵢ[k]| = max|C t_i| · max|t_iᵀ B|
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let t = eig.vectors.column(i);
        let ct_max = (0..c.rows()).fold(0.0f64, |m, r| m.max(dot(c.row(r), &t).abs()));
        let tb_max = (0..b.cols()).fold(0.0f64, |m, col| {
            m.max(dot(&t, &b.column(col)).abs())
        });
        weights[i] = ct_max * tb_max;
    }
    // eigenvalues ascend, so dropping index 0 keeps the n-1 largest modes
    let psi = weights.iter().skip(1).fold(0.0f64, |m, w| m.max(*w));
    let psi_all = weights.iter().fold(0.0f64, |m, w| m.max(*w));
    let delta = (10.0 * (n.saturating_sub(1)) as f64 * psi_all / eps).max(1.0);
    Ok(MarginBound { delta, psi })
}

/// Diagonal entries of `D = δ I + L̄ + A`; the off-diagonal parts of `L̄`
/// and `A` cancel, leaving `d_j = δ + Σ_{i≠j} A_ij + A_jj`.
pub fn suppression_diagonal(a: &SymmetricMatrix, delta: f64) -> Vec<f64> {
    let n = a.n();
    (0..n)
        .map(|j| {
            let offdiag: f64 = (0..n).filter(|&i| i != j).map(|i| a.get(j, i)).sum();
            delta + offdiag + a.get(j, j)
        })
        .collect()
}

/// Laplacian of the matrix with its diagonal removed: `diag(Ā 1) - Ā`.
fn offdiag_laplacian(a: &SymmetricMatrix) -> SymmetricMatrix {
    let n = a.n();
    let degrees: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| a.get(i, j)).sum())
        .collect();
    SymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            degrees[i]
        } else {
            -a.get(i, j)
        }
    })
}
