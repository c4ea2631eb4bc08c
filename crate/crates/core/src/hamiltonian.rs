//! The spin-side XXZ Hamiltonian on the full tensor-product space, its
//! particle-number sectors, and the numerical check of the unitary
//! equivalence with the configuration-graph Schrödinger operator.
//!
//! Product-basis states are indexed by base-(M+1) digit strings (site 0 most
//! significant), so a basis index *is* an occupation vector. The unitary
//! `ψ_m ↦ φ_m` identifying a sector with the configuration space is then a
//! pure index map and the equivalence check is exact up to assembly roundoff.
//!
//! Two-site kernels are applied on the fly; no Kronecker factor larger than
//! (M+1)² is ever materialized.

use crate::config::{self, Caps, ConfigSpace};
use crate::error::{Error, Result};
use crate::lattice::BaseGraph;
use crate::sparse::SparseSym;
use crate::spin::SpinParams;

/// Default cap on the full-space dimension (M+1)^n for equivalence checks.
pub const DEFAULT_FULL_DIM_CAP: usize = 250_000;

/// Full-space dimension (M+1)^n, or an error when it exceeds `cap`.
pub fn full_dim(base: &BaseGraph, params: SpinParams, cap: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..base.n_vertices() {
        dim = dim.checked_mul(params.site_dim()).ok_or(Error::DimensionCap {
            what: "full tensor-product dimension",
            size: usize::MAX,
            cap,
        })?;
        if dim > cap {
            return Err(Error::DimensionCap {
                what: "full tensor-product dimension",
                size: dim,
                cap,
            });
        }
    }
    Ok(dim)
}

/// Assemble H_G = Σ_{x~y} h_xy on the full (M+1)^n-dimensional space,
/// optionally with a per-site field term Σ_x W_x·N_x.
pub fn assemble_full(
    base: &BaseGraph,
    params: SpinParams,
    field: Option<&[f64]>,
    cap: usize,
) -> Result<SparseSym> {
    let n = base.n_vertices();
    let m = params.max_occ;
    let dim = full_dim(base, params, cap)?;
    if let Some(w) = field {
        if w.len() != n {
            return Err(Error::InvalidSize(format!(
                "field has {} entries for {n} sites",
                w.len()
            )));
        }
    }

    // stride of site s in the digit encoding
    let mut stride = vec![0usize; n];
    for s in 0..n {
        stride[s] = params.site_dim().pow((n - 1 - s) as u32);
    }

    let g = 1.0 / (2.0 * params.delta);
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(dim);
    let mut digits = vec![0usize; n];
    for i in 0..dim {
        let mut diag = 0.0;
        let mut entries: Vec<(u32, f64)> = Vec::new();
        for &(x, y) in base.edges() {
            let (x, y) = (x as usize, y as usize);
            let (a, b) = (digits[x], digits[y]);
            diag += config::pair_potential_x2(m, a, b) as f64 / 2.0;
            for (from, to) in [(x, y), (y, x)] {
                let (a, b) = (digits[from], digits[to]);
                if a == 0 || b == m {
                    continue;
                }
                let j = i - stride[from] + stride[to];
                let w_sq = (a * (m - a + 1)) as f64 * ((b + 1) * (m - b)) as f64;
                entries.push((j as u32, -g * w_sq.sqrt()));
            }
        }
        if let Some(w) = field {
            diag += digits
                .iter()
                .zip(w.iter())
                .map(|(&d, &wx)| d as f64 * wx)
                .sum::<f64>();
        }
        entries.push((i as u32, diag));
        rows.push(entries);

        // odometer increment of the digit string
        for s in (0..n).rev() {
            if digits[s] < m {
                digits[s] += 1;
                break;
            }
            digits[s] = 0;
        }
    }
    Ok(SparseSym::from_rows(rows))
}

/// The N-particle sector of the full product basis.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_particles: usize,
    site_dim: usize,
    n_sites: usize,
    /// Full-space indices with digit sum N, ascending.
    indices: Vec<u32>,
}

impl SectorBasis {
    pub fn new(base: &BaseGraph, params: SpinParams, n_particles: usize, cap: usize) -> Result<Self> {
        let n = base.n_vertices();
        let dim = full_dim(base, params, cap)?;
        let m = params.max_occ;
        let mut indices = Vec::new();
        let mut digits = vec![0usize; n];
        let mut sum = 0usize;
        for i in 0..dim {
            if sum == n_particles {
                indices.push(i as u32);
            }
            for s in (0..n).rev() {
                if digits[s] < m {
                    digits[s] += 1;
                    sum += 1;
                    break;
                }
                sum -= digits[s];
                digits[s] = 0;
            }
        }
        Ok(Self {
            n_particles,
            site_dim: params.site_dim(),
            n_sites: n,
            indices,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Decode a full-space index into its occupation vector.
    pub fn decode(&self, full_index: u32) -> Vec<u8> {
        let mut occ = vec![0u8; self.n_sites];
        let mut rest = full_index as usize;
        for s in (0..self.n_sites).rev() {
            occ[s] = (rest % self.site_dim) as u8;
            rest /= self.site_dim;
        }
        occ
    }
}

/// Principal submatrix of the full operator on the sector indices
/// (which are in configuration-space lexicographic order already).
pub fn restrict(h_full: &SparseSym, sector: &SectorBasis) -> SparseSym {
    let rows = sector
        .indices
        .iter()
        .map(|&fi| {
            h_full
                .row(fi as usize)
                .filter_map(|(c, v)| {
                    sector
                        .indices
                        .binary_search(&c)
                        .ok()
                        .map(|p| (p as u32, v))
                })
                .collect()
        })
        .collect();
    SparseSym::from_rows(rows)
}

/// Largest entry of `H·N_G − N_G·H` over the stored pattern; zero when the
/// total particle number is conserved.
pub fn number_commutator_max(h_full: &SparseSym, sector_of: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..h_full.dim() {
        for (c, v) in h_full.row(r) {
            let d = (sector_of[c as usize] as f64 - sector_of[r] as f64) * v;
            worst = worst.max(d.abs());
        }
    }
    worst
}

/// Digit sums of every full-space index.
pub fn digit_sums(base: &BaseGraph, params: SpinParams, cap: usize) -> Result<Vec<usize>> {
    let n = base.n_vertices();
    let dim = full_dim(base, params, cap)?;
    let m = params.max_occ;
    let mut sums = Vec::with_capacity(dim);
    let mut digits = vec![0usize; n];
    let mut sum = 0usize;
    for _ in 0..dim {
        sums.push(sum);
        for s in (0..n).rev() {
            if digits[s] < m {
                digits[s] += 1;
                sum += 1;
                break;
            }
            sum -= digits[s];
            digits[s] = 0;
        }
    }
    Ok(sums)
}

/// Result of the equivalence check between the restricted spin Hamiltonian
/// and the configuration-graph Schrödinger operator.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// Entrywise max |U_N H_G^N U_N* − (−(1/2Δ)A_N + V_N)|.
    pub max_abs_diff: f64,
    /// Sector / configuration-space dimension.
    pub dim: usize,
    /// Full tensor-product dimension.
    pub full_dim: usize,
}

/// Numerically verify the unitary equivalence
/// `U_N H_G^N U_N* = −(1/2Δ)A_N + V_N` on a finite graph, optionally with a
/// magnetic field W on both sides.
pub fn equivalence_check(
    base: &BaseGraph,
    params: SpinParams,
    n_particles: usize,
    field: Option<&[f64]>,
    caps: &Caps,
    full_cap: usize,
) -> Result<EquivalenceReport> {
    let h_full = assemble_full(base, params, field, full_cap)?;
    let sector = SectorBasis::new(base, params, n_particles, full_cap)?;
    let restricted = restrict(&h_full, &sector);

    let space = ConfigSpace::enumerate(base, params, n_particles, caps)?;
    debug_assert_eq!(space.len(), sector.len());
    let edges = config::build_edges(&space)?;
    let pot = config::potential(&space);
    let ops = config::assemble(&space, &edges, &pot, params.delta, field, caps)?;

    let max_abs_diff = restricted.max_abs_diff(&ops.hamiltonian);
    Ok(EquivalenceReport {
        max_abs_diff,
        dim: space.len(),
        full_dim: h_full.dim(),
    })
}

/// The a-priori norm bound `‖H_G^N‖ ≤ (M·N·d_max/2)(1 + M/Δ)`.
pub fn sector_norm_bound(params: SpinParams, n_particles: usize, max_degree: usize) -> f64 {
    let m = params.max_occ as f64;
    m * n_particles as f64 * max_degree as f64 / 2.0 * (1.0 + m / params.delta)
}
