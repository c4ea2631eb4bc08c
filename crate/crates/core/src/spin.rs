//! Single-site spin matrices and the two-site Hamiltonian.
//!
//! Everything is expressed in the occupation basis `{e_k}`, k = 0..M, where
//! `e_k` is the spin state with k particles at the site (`e_k = δ_{J-k}` in
//! the magnetic basis). With M = 2J the matrix elements reduce to
//!
//! ```text
//!   S⁻ e_k = √((k+1)(M−k)) e_{k+1},    S⁺ = (S⁻)ᵀ,
//!   S³ e_k = (M/2 − k) e_k,            N e_k = k e_k.
//! ```
//!
//! J never appears as a float; all closed forms are evaluated through M, and
//! the square roots above are the only irrational quantities.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Spin magnitude and anisotropy of the model.
///
/// `max_occ` is M = 2J, the maximal number of particles per site; `delta` is
/// the Ising anisotropy Δ. The droplet analysis requires Δ > M, plain
/// spectrum runs only Δ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    pub max_occ: usize,
    pub delta: f64,
}

impl SpinParams {
    pub fn new(max_occ: usize, delta: f64) -> Result<Self> {
        if max_occ == 0 {
            return Err(Error::InvalidSize("max_occ (= 2J) must be at least 1".into()));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidSize(format!("delta must be positive, got {delta}")));
        }
        Ok(Self { max_occ, delta })
    }

    /// Single-site dimension M + 1.
    pub fn site_dim(&self) -> usize {
        self.max_occ + 1
    }

    /// Whether the droplet regime Δ > M holds; required by all gap analysis.
    pub fn droplet_valid(&self) -> bool {
        self.delta > self.max_occ as f64
    }

    pub fn require_droplet_valid(&self) -> Result<()> {
        if self.droplet_valid() {
            Ok(())
        } else {
            Err(Error::InvalidDelta {
                delta: self.delta,
                max_occ: self.max_occ,
            })
        }
    }

    /// J² = (M/2)² evaluated through M.
    pub fn j_squared(&self) -> f64 {
        let m = self.max_occ as f64;
        m * m / 4.0
    }
}

/// Spin-lowering operator S⁻ in the occupation basis (adds a particle):
/// exactly M nonzero entries, all on the first subdiagonal.
pub fn lowering(params: SpinParams) -> DMatrix<f64> {
    let m = params.max_occ;
    let mut s = DMatrix::zeros(m + 1, m + 1);
    for k in 0..m {
        s[(k + 1, k)] = (((k + 1) * (m - k)) as f64).sqrt();
    }
    s
}

/// Spin-raising operator S⁺ = (S⁻)ᵀ (removes a particle).
pub fn raising(params: SpinParams) -> DMatrix<f64> {
    lowering(params).transpose()
}

/// S³, diagonal with entries J − k = M/2 − k on e_k.
pub fn s3(params: SpinParams) -> DMatrix<f64> {
    let m = params.max_occ;
    DMatrix::from_fn(m + 1, m + 1, |r, c| {
        if r == c {
            (m as f64 - 2.0 * r as f64) / 2.0
        } else {
            0.0
        }
    })
}

/// Local particle-number operator N = J − S³, diagonal with entries k.
pub fn nloc(params: SpinParams) -> DMatrix<f64> {
    let m = params.max_occ;
    DMatrix::from_fn(m + 1, m + 1, |r, c| if r == c { r as f64 } else { 0.0 })
}

/// Creation/annihilation pair `(a, a*)`: plain 0/1 shift matrices with
/// `a e_k = e_{k+1}` (a e_M = 0) and `a* e_k = e_{k−1}` (a* e_0 = 0).
pub fn annihil_create(params: SpinParams) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = params.max_occ;
    let mut a = DMatrix::zeros(m + 1, m + 1);
    for k in 0..m {
        a[(k + 1, k)] = 1.0;
    }
    let astar = a.transpose();
    (a, astar)
}

/// Two-site Hamiltonian
/// `h = J²·Id − (1/2Δ)(S⁺⊗S⁻ + S⁻⊗S⁺) − S³⊗S³`
/// as a dense symmetric (M+1)² × (M+1)² matrix.
///
/// The S¹S¹ + S²S² form of the hopping term equals the real expression used
/// here, so no complex arithmetic is needed. For Δ > M the matrix is positive
/// semidefinite with kernel spanned by e₀⊗e₀ and e_M⊗e_M.
pub fn two_site_h(params: SpinParams) -> DMatrix<f64> {
    let d = params.site_dim();
    let sp = raising(params);
    let sm = lowering(params);
    let sz = s3(params);
    let id2 = DMatrix::<f64>::identity(d * d, d * d);
    let hop = sp.kronecker(&sm) + sm.kronecker(&sp);
    params.j_squared() * id2 - hop / (2.0 * params.delta) - sz.kronecker(&sz)
}

/// `J² − S³⊗S³`, the Ising part of the two-site Hamiltonian.
pub fn ising_part(params: SpinParams) -> DMatrix<f64> {
    let d = params.site_dim();
    let sz = s3(params);
    params.j_squared() * DMatrix::<f64>::identity(d * d, d * d) - sz.kronecker(&sz)
}
