//! Droplet sets, boundary quantities, and certified spectral-gap intervals.
//!
//! The configuration space splits into the exact integer argmin set V₁ of the
//! potential (the classical droplet configurations) and its complement V₂.
//! With `g = 1/(2Δ)`, `U₁ᵉᶠᶠ = sup_{V₁} V_N + g‖A₁‖` and
//! `U₂ᵉᶠᶠ = inf_{V₂}(V_N − gC)`, every energy E in the window
//! `(U₁ᵉᶠᶠ, U₂ᵉᶠᶠ)` satisfying
//!
//! ```text
//!   g²·d₁·d₂ < (U₂ᵉᶠᶠ − E)·(E − U₁ᵉᶠᶠ)
//! ```
//!
//! lies in the resolvent set, and the spectral projection below E has
//! dimension at least |V₁|. Solving the quadratic gives a closed interval of
//! certified energies. The default bound `C = 2M·V_N` restricted to V₂ turns
//! `U₂ᵉᶠᶠ` into `(1 − M/Δ)·V_{N,2}`; the weighted degree is available as an
//! alternative C.
//!
//! All argmin/second-minimum selection compares exact integers (`2·V_N`);
//! floats appear only in the certificate arithmetic itself.

use crate::config::{induced_adjacency, ConfigSpace, PotentialVector, WeightedConfigEdge};
use crate::error::{Error, Result};
use crate::spectral::SpectrumResult;
use crate::spin::SpinParams;
use serde::{Deserialize, Serialize};

/// Margin applied when testing eigenvalues against certified interval ends.
pub const VERIFY_MARGIN: f64 = 1e-8;

/// The two-set split of the configuration space by potential level.
#[derive(Debug, Clone)]
pub struct Partition {
    /// Indices attaining the potential minimum, ascending.
    pub v1: Vec<u32>,
    /// Exact 2·V_{N,1}.
    pub vn1_x2: i64,
    /// Exact 2·V_{N,2}; `None` when every configuration minimizes.
    pub vn2_x2: Option<i64>,
    /// Total number of configurations.
    pub dim: usize,
}

impl Partition {
    pub fn v1_len(&self) -> usize {
        self.v1.len()
    }

    pub fn v2_len(&self) -> usize {
        self.dim - self.v1.len()
    }

    pub fn is_v1(&self, index: u32) -> bool {
        self.v1.binary_search(&index).is_ok()
    }

    /// V_{N,1} as a real number.
    pub fn vn1(&self) -> f64 {
        self.vn1_x2 as f64 / 2.0
    }

    /// V_{N,2} as a real number.
    pub fn vn2(&self) -> Option<f64> {
        self.vn2_x2.map(|v| v as f64 / 2.0)
    }
}

/// Exact droplet set: integer argmin of the potential and the second-lowest
/// level.
pub fn droplet_set(space: &ConfigSpace, pot: &PotentialVector) -> Result<Partition> {
    if space.n_particles() == 0 {
        return Err(Error::InvalidParticleNumber(
            "droplet analysis needs N >= 1".into(),
        ));
    }
    let vn1_x2 = *pot
        .values_x2
        .iter()
        .min()
        .expect("nonempty configuration space");
    let v1: Vec<u32> = pot
        .values_x2
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == vn1_x2)
        .map(|(i, _)| i as u32)
        .collect();
    let vn2_x2 = pot.values_x2.iter().filter(|&&v| v > vn1_x2).min().copied();
    Ok(Partition {
        v1,
        vn1_x2,
        vn2_x2,
        dim: pot.values_x2.len(),
    })
}

/// Boundary data of a partition: the one-sided weighted boundary degrees, the
/// norm of the adjacency induced on V₁, and the norm of the boundary hopping
/// block B: ℓ²(V₂) → ℓ²(V₁).
#[derive(Debug, Clone, Copy)]
pub struct BoundaryQuantities {
    /// sup_{x∈V₁} Σ_{y∈V₂, y~x} w(x,y)
    pub d1: f64,
    /// sup_{y∈V₂} Σ_{x∈V₁, x~y} w(x,y)
    pub d2: f64,
    /// ‖A₁‖, spectral norm of the V₁-induced weighted adjacency.
    pub a1_norm: f64,
    /// ‖B‖, spectral norm of the boundary hopping block.
    pub b_norm: f64,
}

pub fn boundary_quantities(
    edges: &[WeightedConfigEdge],
    partition: &Partition,
) -> BoundaryQuantities {
    let mut in_v1 = vec![false; partition.dim];
    for &i in &partition.v1 {
        in_v1[i as usize] = true;
    }

    let mut sum_v1 = vec![0.0f64; partition.v1.len()];
    let v1_pos = |i: u32| partition.v1.binary_search(&i).unwrap();
    // boundary sums on the V2 side, keyed by configuration index
    let mut sum_v2: std::collections::HashMap<u32, f64> = std::collections::HashMap::new();
    // boundary block entries in compact V1 × compact-boundary coordinates
    let mut cross: Vec<(usize, u32, f64)> = Vec::new();

    for e in edges {
        match (in_v1[e.i as usize], in_v1[e.j as usize]) {
            (true, false) => {
                let r = v1_pos(e.i);
                sum_v1[r] += e.weight;
                *sum_v2.entry(e.j).or_insert(0.0) += e.weight;
                cross.push((r, e.j, e.weight));
            }
            (false, true) => {
                let r = v1_pos(e.j);
                sum_v1[r] += e.weight;
                *sum_v2.entry(e.i).or_insert(0.0) += e.weight;
                cross.push((r, e.i, e.weight));
            }
            _ => {}
        }
    }

    let d1 = sum_v1.iter().cloned().fold(0.0, f64::max);
    let d2 = sum_v2.values().cloned().fold(0.0, f64::max);

    let a1 = induced_adjacency(edges, &partition.v1);
    let a1_norm = if a1.nnz() == a1.dim() || a1.max_abs() == 0.0 {
        0.0
    } else {
        spectral_norm_dense(&a1.to_dense())
    };

    // ‖B‖² = λ_max(B Bᵀ); the Gram matrix lives on V₁, which is small
    let nv1 = partition.v1.len();
    let b_norm = if cross.is_empty() {
        0.0
    } else {
        let mut boundary_cols: Vec<u32> = cross.iter().map(|&(_, c, _)| c).collect();
        boundary_cols.sort_unstable();
        boundary_cols.dedup();
        let mut b = nalgebra::DMatrix::<f64>::zeros(nv1, boundary_cols.len());
        for &(r, c, w) in &cross {
            let cc = boundary_cols.binary_search(&c).unwrap();
            b[(r, cc)] += w;
        }
        let gram = &b * b.transpose();
        spectral_norm_dense(&gram).sqrt()
    };

    BoundaryQuantities {
        d1,
        d2,
        a1_norm,
        b_norm,
    }
}

fn spectral_norm_dense(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// Indicator vectors of the droplet configurations as eigensolver start
/// columns. Rayleigh quotients on this block equal V_{N,1} + g·(A₁ entries),
/// so seeding the block Krylov iteration with it converges the droplet
/// cluster almost immediately.
pub fn droplet_start_block(partition: &Partition) -> nalgebra::DMatrix<f64> {
    let mut block = nalgebra::DMatrix::zeros(partition.dim, partition.v1.len());
    for (c, &i) in partition.v1.iter().enumerate() {
        block[(i as usize, c)] = 1.0;
    }
    block
}

/// The multiplication operator C bounding the V₂-induced adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CBound {
    /// C = 2M·V_N restricted to V₂ (the default; gives
    /// U₂ᵉᶠᶠ = (1 − M/Δ)·V_{N,2}).
    TwoMPotential,
    /// C = D_N, the weighted degree (always admissible since A₂ ≤ D₂ ≤ D).
    Degree,
}

/// A certified energy interval above the droplet band.
#[derive(Debug, Clone)]
pub struct GapCertificate {
    /// Coupling constant g = 1/(2Δ).
    pub g: f64,
    /// sup_{V₁} V_N + g‖A₁‖.
    pub u1_eff: f64,
    /// inf_{V₂} (V_N − gC); `None` when V₂ is empty.
    pub u2_eff: Option<f64>,
    pub d1: f64,
    pub d2: f64,
    /// The certified open interval, absent when the gap condition has no
    /// solutions (never an error).
    pub interval: Option<(f64, f64)>,
    /// |V₁|, the guaranteed dimension of the spectral projection below any
    /// certified energy.
    pub projection_lower_bound: usize,
}

impl GapCertificate {
    pub fn midpoint(&self) -> Option<f64> {
        self.interval.map(|(lo, hi)| 0.5 * (lo + hi))
    }

    pub fn width(&self) -> f64 {
        self.interval.map(|(lo, hi)| hi - lo).unwrap_or(0.0)
    }
}

/// Solve the gap condition `g²·d₁d₂ < (u2 − E)(E − u1)` for E; the open
/// interval of solutions, if any.
pub fn certified_interval(u1: f64, u2: f64, g: f64, d1: f64, d2: f64) -> Option<(f64, f64)> {
    if !(u2 > u1) {
        return None;
    }
    let half_gap = (u2 - u1) / 2.0;
    let disc = half_gap * half_gap - g * g * d1 * d2;
    if disc <= 0.0 {
        return None;
    }
    let mid = (u1 + u2) / 2.0;
    let r = disc.sqrt();
    Some((mid - r, mid + r))
}

/// Build the gap certificate from a partition and its boundary quantities.
///
/// Requires the droplet regime Δ > M. With [`CBound::Degree`] the caller
/// supplies the potential and the weighted degree to evaluate
/// `inf_{V₂}(V_N − g·D_N)` directly.
pub fn certificate(
    partition: &Partition,
    quantities: &BoundaryQuantities,
    params: SpinParams,
    c_bound: CBound,
    pot: &PotentialVector,
    degree: Option<&[f64]>,
) -> Result<GapCertificate> {
    params.require_droplet_valid()?;
    let g = 1.0 / (2.0 * params.delta);
    let u1_eff = partition.vn1() + g * quantities.a1_norm;
    let u2_eff = match c_bound {
        CBound::TwoMPotential => partition
            .vn2()
            .map(|v| (1.0 - params.max_occ as f64 / params.delta) * v),
        CBound::Degree => {
            let deg = degree.ok_or_else(|| {
                Error::InvalidSize("CBound::Degree needs the weighted degree vector".into())
            })?;
            let mut in_v1 = vec![false; partition.dim];
            for &i in &partition.v1 {
                in_v1[i as usize] = true;
            }
            let inf = (0..partition.dim)
                .filter(|&i| !in_v1[i])
                .map(|i| pot.value(i) - g * deg[i])
                .fold(f64::INFINITY, f64::min);
            if inf.is_finite() {
                Some(inf)
            } else {
                None
            }
        }
    };
    let interval = u2_eff
        .and_then(|u2| certified_interval(u1_eff, u2, g, quantities.d1, quantities.d2));
    Ok(GapCertificate {
        g,
        u1_eff,
        u2_eff,
        d1: quantities.d1,
        d2: quantities.d2,
        interval,
        projection_lower_bound: partition.v1_len(),
    })
}

/// How the projection-dimension count in a [`VerifyReport`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    /// Exact matrix inertia of H − E·Id.
    Inertia,
    /// Number of computed eigenvalues certainly below the midpoint; a
    /// rigorous lower bound by Rayleigh-Ritz interlacing.
    RitzLowerBound,
}

/// Outcome of checking a certificate against a computed spectrum.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub interval: Option<(f64, f64)>,
    /// Whether the computed spectrum reaches past the upper interval end.
    pub covered: bool,
    /// Eigenvalues below the certified midpoint, with its provenance.
    pub count_below_mid: Option<(usize, CountMethod)>,
    /// |V₁| that the count is compared against.
    pub projection_lower_bound: usize,
    /// All assertions passed (vacuously false when no interval exists).
    pub verified: bool,
}

/// Check a certificate against a computed spectrum:
/// (i) no eigenvalue may lie inside the certified interval, and
/// (ii) at least |V₁| eigenvalues must lie below its midpoint.
///
/// `exact_count_below_mid` is the inertia count at the midpoint when the
/// caller could compute one; otherwise the count falls back to the number of
/// computed eigenvalues whose residual interval lies below the midpoint,
/// which interlacing makes a valid lower bound.
///
/// A residual-certain eigenvalue strictly inside the interval is an
/// implementation bug (the gap condition is a theorem) and returns
/// [`Error::CertificateViolation`].
pub fn verify_certificate(
    cert: &GapCertificate,
    spectrum: &SpectrumResult,
    exact_count_below_mid: Option<usize>,
) -> Result<VerifyReport> {
    let Some((lo, hi)) = cert.interval else {
        return Ok(VerifyReport {
            interval: None,
            covered: false,
            count_below_mid: None,
            projection_lower_bound: cert.projection_lower_bound,
            verified: false,
        });
    };
    let mid = 0.5 * (lo + hi);

    for (&ev, &res) in spectrum
        .eigenvalues
        .iter()
        .zip(spectrum.residual_norms.iter())
    {
        if ev - res > lo + VERIFY_MARGIN && ev + res < hi - VERIFY_MARGIN {
            return Err(Error::CertificateViolation {
                eigenvalue: ev,
                lo,
                hi,
            });
        }
    }

    let covered = spectrum
        .eigenvalues
        .iter()
        .zip(spectrum.residual_norms.iter())
        .any(|(&ev, &res)| ev - res >= hi);

    let count_below_mid = match exact_count_below_mid {
        Some(c) => Some((c, CountMethod::Inertia)),
        None => {
            let c = spectrum
                .eigenvalues
                .iter()
                .zip(spectrum.residual_norms.iter())
                .filter(|(&ev, &res)| ev + res < mid)
                .count();
            Some((c, CountMethod::RitzLowerBound))
        }
    };
    let count_ok = count_below_mid
        .map(|(c, _)| c >= cert.projection_lower_bound)
        .unwrap_or(false);

    Ok(VerifyReport {
        interval: cert.interval,
        covered,
        count_below_mid,
        projection_lower_bound: cert.projection_lower_bound,
        verified: covered && count_ok,
    })
}

// ---------------------------------------------------------------------------
// Closed-form minimizer families and thresholds for the chain and the strip
// ---------------------------------------------------------------------------

/// The droplet family on a cycle of length `n` for N = kM, k ≥ 2: all
/// translates of the configurations `(j, M, …, M, M−j)` (k−1 interior sites
/// at M; j = M degenerates to k consecutive M's). Returns n·M configurations
/// sorted lexicographically.
pub fn chain_minimizer_family(n: usize, max_occ: usize, n_particles: usize) -> Result<Vec<Vec<u8>>> {
    let m = max_occ;
    if n_particles % m != 0 {
        return Err(Error::InvalidParticleNumber(format!(
            "chain droplet analysis needs N divisible by M, got N={n_particles}, M={m}"
        )));
    }
    let k = n_particles / m;
    if k < 2 {
        return Err(Error::InvalidParticleNumber(format!(
            "chain droplet analysis needs k = N/M >= 2, got k={k}"
        )));
    }
    if n < k + 3 {
        return Err(Error::InvalidSize(format!(
            "cycle length {n} too small for k={k}; need n >= k+3"
        )));
    }
    let mut family = Vec::with_capacity(n * m);
    for j in 1..=m {
        let pattern: Vec<u8> = if j == m {
            vec![m as u8; k]
        } else {
            let mut p = vec![j as u8];
            p.extend(std::iter::repeat(m as u8).take(k - 1));
            p.push((m - j) as u8);
            p
        };
        for shift in 0..n {
            let mut occ = vec![0u8; n];
            for (off, &v) in pattern.iter().enumerate() {
                occ[(shift + off) % n] = v;
            }
            family.push(occ);
        }
    }
    family.sort_unstable();
    family.dedup();
    Ok(family)
}

/// The rectangle family on a cylinder of `n` rings and width `l` for
/// N = kLM with k ≥ L/2: the n translates of the k×L window at occupation M.
pub fn strip_rectangle_family(
    n: usize,
    l: usize,
    max_occ: usize,
    n_particles: usize,
) -> Result<Vec<Vec<u8>>> {
    let m = max_occ;
    if n_particles % (l * m) != 0 {
        return Err(Error::InvalidParticleNumber(format!(
            "strip droplet analysis needs N divisible by L·M, got N={n_particles}, L={l}, M={m}"
        )));
    }
    let k = n_particles / (l * m);
    if 2 * k < l {
        return Err(Error::InvalidParticleNumber(format!(
            "strip droplet analysis needs k = N/(L·M) >= L/2, got k={k}, L={l}"
        )));
    }
    if n < k + 2 {
        return Err(Error::InvalidSize(format!(
            "cylinder length {n} too small for k={k}; need n >= k+2"
        )));
    }
    let mut family = Vec::with_capacity(n);
    for shift in 0..n {
        let mut occ = vec![0u8; n * l];
        for dz in 0..k {
            let z = (shift + dz) % n;
            for ell in 0..l {
                occ[z * l + ell] = m as u8;
            }
        }
        family.push(occ);
    }
    family.sort_unstable();
    family.dedup();
    Ok(family)
}

/// Chain a-priori window threshold: the window (M², (1−M/Δ)(M²+1)) is
/// nonempty iff Δ > M³ + M.
pub fn chain_apriori_threshold(max_occ: usize) -> f64 {
    let m = max_occ as f64;
    m * m * m + m
}

/// Chain certified-gap threshold Δ > M³ + 2M^{3/2} + M (with the d-bounds
/// d₁d₂ ≤ 4M³).
pub fn chain_certified_threshold(max_occ: usize) -> f64 {
    let m = max_occ as f64;
    m * m * m + 2.0 * m.powf(1.5) + m
}

/// Strip a-priori window threshold Δ > LM³ + M.
pub fn strip_apriori_threshold(l: usize, max_occ: usize) -> f64 {
    let m = max_occ as f64;
    l as f64 * m * m * m + m
}

/// Strip certified-gap threshold Δ > LM³ + (1 + √(2L))M (with d₁ = 2LM,
/// d₂ = M).
pub fn strip_certified_threshold(l: usize, max_occ: usize) -> f64 {
    let m = max_occ as f64;
    l as f64 * m * m * m + (1.0 + (2.0 * l as f64).sqrt()) * m
}

// ---------------------------------------------------------------------------
// JSON record
// ---------------------------------------------------------------------------

/// The certificate JSON schema emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRecord {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    pub graph: String,
    #[serde(rename = "VN1")]
    pub vn1: f64,
    #[serde(rename = "VN2")]
    pub vn2: Option<f64>,
    pub d1: f64,
    pub d2: f64,
    pub a1_norm: f64,
    pub b_norm: f64,
    pub interval: Option<(f64, f64)>,
    pub v1_size: usize,
    pub verified: bool,
}

impl CertificateRecord {
    pub fn new(
        params: SpinParams,
        n_particles: usize,
        graph: String,
        partition: &Partition,
        quantities: &BoundaryQuantities,
        cert: &GapCertificate,
        verified: bool,
    ) -> Self {
        Self {
            m: params.max_occ,
            n: n_particles,
            delta: params.delta,
            graph,
            vn1: partition.vn1(),
            vn2: partition.vn2(),
            d1: quantities.d1,
            d2: quantities.d2,
            a1_norm: quantities.a1_norm,
            b_norm: quantities.b_norm,
            interval: cert.interval,
            v1_size: partition.v1_len(),
            verified,
        }
    }
}
