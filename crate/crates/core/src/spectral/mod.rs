//! Symmetric eigensolvers and spectral counting.
//!
//! - [`dense_spectrum`]: full dense solve with explicitly computed residuals
//! - [`lowest_k`]: block Krylov iteration with full reorthogonalization and a
//!   deterministic seeded start block (see [`lanczos`])
//! - [`count_below`]: exact eigenvalue counts below a threshold by matrix
//!   inertia — Householder tridiagonalization + Sturm pivots on the dense
//!   path, sparse LDLᵀ on the sparse path (see [`ldl`])
//! - [`droplet_band`]: eigenvalues inside `(0, (1−M/Δ)·V_{N,2})`

pub mod lanczos;
pub mod ldl;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::sparse::SparseSym;
use crate::spin::SpinParams;
use nalgebra::DMatrix;

pub use lanczos::{lowest_k, lowest_k_with, LanczosOptions};

/// How a spectrum was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Dense,
    Iterative,
}

/// Eigenvalues (all of them, or the k lowest) with per-pair residual norms.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// ‖H v − λ v‖ for each returned pair.
    pub residual_norms: Vec<f64>,
    pub method: SolveMethod,
}

impl SpectrumResult {
    /// Group eigenvalues closer than `tol` into multiplets
    /// `(representative value, multiplicity)`.
    pub fn multiplets(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &ev in &self.eigenvalues {
            match out.last_mut() {
                Some((v, c)) if (ev - *v).abs() <= tol => *c += 1,
                _ => out.push((ev, 1)),
            }
        }
        out
    }

    /// Smallest eigenvalue strictly above `threshold`.
    pub fn min_above(&self, threshold: f64) -> Option<f64> {
        self.eigenvalues.iter().cloned().find(|&e| e > threshold)
    }
}

/// Anything that acts as a symmetric linear operator by mat-vec.
pub trait SymOp {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Y = A X, column by column unless the implementor has a faster path.
    fn apply_mat(&self, x: &DMatrix<f64>, y: &mut DMatrix<f64>) {
        let n = self.dim();
        let mut xc = vec![0.0; n];
        let mut yc = vec![0.0; n];
        for c in 0..x.ncols() {
            xc.copy_from_slice(x.column(c).as_slice());
            self.apply(&xc, &mut yc);
            y.column_mut(c).copy_from_slice(&yc);
        }
    }
}

impl SymOp for SparseSym {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        SparseSym::apply(self, x, y);
    }

    fn apply_mat(&self, x: &DMatrix<f64>, y: &mut DMatrix<f64>) {
        // one pass over the matrix for all columns, via row-major scratch
        let n = self.dim();
        let b = x.ncols();
        let mut xr = vec![0.0; n * b];
        for c in 0..b {
            let col = x.column(c);
            for r in 0..n {
                xr[r * b + c] = col[r];
            }
        }
        let mut yr = vec![0.0; n * b];
        self.apply_block_rowmajor(&xr, b, &mut yr);
        for c in 0..b {
            let mut col = y.column_mut(c);
            for r in 0..n {
                col[r] = yr[r * b + c];
            }
        }
    }
}

impl SymOp for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let xv = nalgebra::DVectorView::from_slice(x, self.ncols());
        let mut yv = nalgebra::DVectorViewMut::from_slice(y, self.nrows());
        yv.gemv(1.0, self, &xv, 0.0);
    }

    fn apply_mat(&self, x: &DMatrix<f64>, y: &mut DMatrix<f64>) {
        y.gemm(1.0, self, x, 0.0);
    }
}

/// All eigenvalues of a dense symmetric matrix, ascending, with explicitly
/// computed residual norms.
pub fn dense_spectrum(mat: &DMatrix<f64>) -> SpectrumResult {
    let n = mat.nrows();
    assert_eq!(n, mat.ncols(), "matrix must be square");
    if n == 0 {
        return SpectrumResult {
            eigenvalues: Vec::new(),
            residual_norms: Vec::new(),
            method: SolveMethod::Dense,
        };
    }
    let eig = mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    // residuals in one multiply: R = H V − V Λ
    let mut hv = DMatrix::zeros(n, n);
    hv.gemm(1.0, mat, &eig.eigenvectors, 0.0);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residual_norms = Vec::with_capacity(n);
    for &idx in &order {
        let lambda = eig.eigenvalues[idx];
        let r = (&hv.column(idx) - eig.eigenvectors.column(idx) * lambda).norm();
        eigenvalues.push(lambda);
        residual_norms.push(r);
    }
    SpectrumResult {
        eigenvalues,
        residual_norms,
        method: SolveMethod::Dense,
    }
}

/// Dense spectrum of a sparse operator, guarded by the dense cap.
pub fn dense_spectrum_sparse(mat: &SparseSym, caps: &Caps) -> Result<SpectrumResult> {
    if mat.dim() > caps.max_dense {
        return Err(Error::DimensionCap {
            what: "dense eigensolve dimension",
            size: mat.dim(),
            cap: caps.max_dense,
        });
    }
    Ok(dense_spectrum(&mat.to_dense()))
}

/// Exact number of eigenvalues of a dense symmetric matrix strictly below `e`.
///
/// Householder-tridiagonalizes `mat − e·I` implicitly and counts negative
/// Sturm pivots; this route is independent of the dense eigensolver.
pub fn count_below_dense(mat: &DMatrix<f64>, e: f64) -> Result<usize> {
    let n = mat.nrows();
    if n == 0 {
        return Ok(0);
    }
    if n == 1 {
        return Ok(usize::from(mat[(0, 0)] < e));
    }
    let tri = mat.clone().symmetric_tridiagonalize();
    let diag = tri.diagonal();
    let off = tri.off_diagonal();
    let scale = mat.amax().max(1.0);
    let mut count = 0usize;
    let mut q = diag[0] - e;
    if q.abs() < 1e-14 * scale {
        return Err(Error::SingularShift {
            pivot_index: 0,
            pivot: q,
        });
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        q = (diag[i] - e) - off[i - 1] * off[i - 1] / q;
        if q.abs() < 1e-14 * scale {
            return Err(Error::SingularShift {
                pivot_index: i,
                pivot: q,
            });
        }
        if q < 0.0 {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact number of eigenvalues of a sparse symmetric operator strictly below
/// `e`: dense tridiagonal route under the dense cap, sparse LDLᵀ inertia above
/// it (bounded by the nonzero cap on factor fill).
pub fn count_below(mat: &SparseSym, e: f64, caps: &Caps) -> Result<usize> {
    if mat.dim() <= caps.max_dense {
        count_below_dense(&mat.to_dense(), e)
    } else {
        ldl::inertia_below(mat, e, caps.max_nnz)
    }
}

/// Eigenvalues of the droplet band: the part of the spectrum strictly inside
/// the open interval `(0, (1−M/Δ)·V_{N,2})`.
pub fn droplet_band(
    spectrum: &SpectrumResult,
    params: SpinParams,
    v_n2: f64,
) -> Result<Vec<f64>> {
    params.require_droplet_valid()?;
    let hi = (1.0 - params.max_occ as f64 / params.delta) * v_n2;
    Ok(spectrum
        .eigenvalues
        .iter()
        .cloned()
        .filter(|&ev| ev > 0.0 && ev < hi)
        .collect())
}
