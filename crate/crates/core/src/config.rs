//! Configuration graphs: the N-particle graph with maximal local occupation M.
//!
//! Vertices are occupation vectors `m: sites -> {0..M}` with `Σ m(x) = N`,
//! enumerated in lexicographic order (site 0 most significant). Two
//! configurations are adjacent when one arises from the other by moving a
//! single particle along a base-graph edge; the edge weight is
//!
//! ```text
//!   w(m,n) = Π_{x: m(x)≠n(x)} √( (M/2)(m(x)+n(x)+1) − m(x)n(x) )
//! ```
//!
//! and the interaction potential is `V_N(m) = Σ_{{x,y}∈E} v(m(x), m(y))` with
//! `v(a,b) = (M/2)(a+b) − ab`.
//!
//! Droplet-set selection and second-minimum comparisons must be tie-exact, so
//! the potential is kept as the integer `2·V_N` and squared edge weights as
//! the integer `4·w²`; floating point enters only once, through a square root
//! at assembly time.

use crate::error::{Error, Result};
use crate::lattice::BaseGraph;
use crate::sparse::SparseSym;
use crate::spin::SpinParams;

/// Desk-scale guardrails for enumeration and assembly.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Maximum number of configurations to materialize.
    pub max_configs: usize,
    /// Maximum number of stored nonzeros in an assembled operator.
    pub max_nnz: usize,
    /// Maximum dimension for dense eigensolves.
    pub max_dense: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_configs: 200_000,
            max_nnz: 20_000_000,
            max_dense: 6_000,
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Self {
            max_configs: usize::MAX,
            max_nnz: usize::MAX,
            max_dense: 6_000,
        }
    }
}

/// Number of occupation vectors of length `n_sites` with entries in `0..=m`
/// summing to `n_particles` (bounded compositions), saturating at `u128::MAX`.
pub fn composition_count(n_sites: usize, max_occ: usize, n_particles: usize) -> u128 {
    let mut ways = vec![0u128; n_particles + 1];
    ways[0] = 1;
    for _ in 0..n_sites {
        let mut next = vec![0u128; n_particles + 1];
        for (total, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for v in 0..=max_occ.min(n_particles - total) {
                next[total + v] = next[total + v].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[n_particles]
}

/// The enumerated vertex set of the configuration graph.
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    base: BaseGraph,
    max_occ: usize,
    n_particles: usize,
    n_sites: usize,
    /// All occupation vectors, flattened, lexicographically ascending.
    occupations: Vec<u8>,
}

impl ConfigSpace {
    /// Enumerate all occupation vectors with sum `n_particles`, values `0..=M`.
    pub fn enumerate(
        base: &BaseGraph,
        params: SpinParams,
        n_particles: usize,
        caps: &Caps,
    ) -> Result<Self> {
        let n_sites = base.n_vertices();
        let max_occ = params.max_occ;
        if n_particles > max_occ * n_sites {
            return Err(Error::InvalidParticleNumber(format!(
                "N = {n_particles} exceeds M·|V| = {}",
                max_occ * n_sites
            )));
        }
        if max_occ > u8::MAX as usize {
            return Err(Error::InvalidSize("max_occ exceeds 255".into()));
        }
        let count = composition_count(n_sites, max_occ, n_particles);
        if count > caps.max_configs as u128 {
            return Err(Error::DimensionCap {
                what: "configuration count",
                size: count.min(usize::MAX as u128) as usize,
                cap: caps.max_configs,
            });
        }
        let count = count as usize;
        let mut occupations = Vec::with_capacity(count * n_sites);
        let mut current = vec![0u8; n_sites];
        fill_lex(&mut occupations, &mut current, 0, n_particles, max_occ, n_sites);
        debug_assert_eq!(occupations.len(), count * n_sites);
        Ok(Self {
            base: base.clone(),
            max_occ,
            n_particles,
            n_sites,
            occupations,
        })
    }

    /// Rebuild a space from its raw occupation table (for deserialization).
    /// Validates entry range, per-configuration sums, and lexicographic order.
    pub fn from_raw_parts(
        base: BaseGraph,
        max_occ: usize,
        n_particles: usize,
        occupations: Vec<u8>,
    ) -> Result<Self> {
        let n_sites = base.n_vertices();
        if n_sites == 0 || occupations.len() % n_sites != 0 {
            return Err(Error::InvalidSize(
                "occupation table length is not a multiple of the site count".into(),
            ));
        }
        for occ in occupations.chunks_exact(n_sites) {
            if occ.iter().any(|&v| v as usize > max_occ) {
                return Err(Error::InvalidSize("occupation exceeds max_occ".into()));
            }
            if occ.iter().map(|&v| v as usize).sum::<usize>() != n_particles {
                return Err(Error::InvalidParticleNumber(
                    "configuration sum differs from N".into(),
                ));
            }
        }
        for pair in occupations.chunks_exact(n_sites).collect::<Vec<_>>().windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::InvalidSize(
                    "occupation table is not strictly lexicographically sorted".into(),
                ));
            }
        }
        Ok(Self {
            base,
            max_occ,
            n_particles,
            n_sites,
            occupations,
        })
    }

    pub fn len(&self) -> usize {
        if self.n_sites == 0 {
            0
        } else {
            self.occupations.len() / self.n_sites
        }
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn max_occ(&self) -> usize {
        self.max_occ
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    /// Occupation vector of configuration `i`.
    pub fn config(&self, i: usize) -> &[u8] {
        &self.occupations[i * self.n_sites..(i + 1) * self.n_sites]
    }

    /// Position of an occupation vector in the lexicographic ordering.
    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.config(mid).cmp(occ) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.occupations.chunks_exact(self.n_sites.max(1))
    }
}

/// Lexicographic generation: at each site take the smallest admissible value
/// first, i.e. leave as many particles as possible for the later sites.
fn fill_lex(
    out: &mut Vec<u8>,
    current: &mut [u8],
    site: usize,
    remaining: usize,
    max_occ: usize,
    n_sites: usize,
) {
    if site == n_sites {
        debug_assert_eq!(remaining, 0);
        out.extend_from_slice(current);
        return;
    }
    let tail_cap = max_occ * (n_sites - site - 1);
    let lo = remaining.saturating_sub(tail_cap);
    let hi = max_occ.min(remaining);
    for v in lo..=hi {
        current[site] = v as u8;
        fill_lex(out, current, site + 1, remaining - v, max_occ, n_sites);
    }
}

/// A weighted edge of the configuration graph.
///
/// `weight_sq_x4` is the exact integer `4·w²`; `weight = √(weight_sq_x4)/2`
/// is its only floating-point image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedConfigEdge {
    pub i: u32,
    pub j: u32,
    pub weight: f64,
    pub weight_sq_x4: u64,
}

/// Integer factor `M(a+b+1) − 2ab` of `4w²` contributed by one changed site
/// (twice the per-site weight factor), where the occupation moves between
/// `a` and `b = a∓1`.
fn site_factor_x2(max_occ: usize, a: usize, b: usize) -> u64 {
    (max_occ * (a + b + 1)) as u64 - 2 * (a * b) as u64
}

/// Build the weighted edge list of the configuration graph.
///
/// For every configuration and every directed base edge with an admissible
/// single-particle move the undirected edge is emitted exactly once
/// (`i < j`); the result is globally sorted by `(i, j)`.
pub fn build_edges(space: &ConfigSpace) -> Result<Vec<WeightedConfigEdge>> {
    let m = space.max_occ;
    let n = space.len();
    let mut edges = Vec::new();
    let mut target = vec![0u8; space.n_sites()];
    for i in 0..n {
        let occ = space.config(i);
        for &(x, y) in space.base.edges() {
            for (from, to) in [(x as usize, y as usize), (y as usize, x as usize)] {
                let a = occ[from] as usize;
                let b = occ[to] as usize;
                if a == 0 || b == m {
                    continue;
                }
                target.copy_from_slice(occ);
                target[from] -= 1;
                target[to] += 1;
                let j = space
                    .index_of(&target)
                    .expect("move target must be a valid configuration");
                if i < j {
                    // factor at the decreasing site (a -> a-1) and the
                    // increasing site (b -> b+1)
                    let w_sq_x4 =
                        site_factor_x2(m, a, a - 1) * site_factor_x2(m, b, b + 1);
                    edges.push(WeightedConfigEdge {
                        i: i as u32,
                        j: j as u32,
                        weight: (w_sq_x4 as f64).sqrt() / 2.0,
                        weight_sq_x4: w_sq_x4,
                    });
                }
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.i, e.j));
    Ok(edges)
}

/// The interaction potential, stored as the exact integer `2·V_N` per
/// configuration.
#[derive(Debug, Clone)]
pub struct PotentialVector {
    pub values_x2: Vec<i64>,
}

impl PotentialVector {
    pub fn value(&self, i: usize) -> f64 {
        self.values_x2[i] as f64 / 2.0
    }

    pub fn len(&self) -> usize {
        self.values_x2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_x2.is_empty()
    }
}

/// Twice the two-site potential: `2·v(a,b) = M(a+b) − 2ab`.
pub fn pair_potential_x2(max_occ: usize, a: usize, b: usize) -> i64 {
    (max_occ * (a + b)) as i64 - 2 * (a * b) as i64
}

/// Evaluate `2·V_N` over the whole configuration space.
pub fn potential(space: &ConfigSpace) -> PotentialVector {
    let m = space.max_occ;
    let values_x2 = space
        .iter()
        .map(|occ| {
            space
                .base
                .edges()
                .iter()
                .map(|&(x, y)| pair_potential_x2(m, occ[x as usize] as usize, occ[y as usize] as usize))
                .sum()
        })
        .collect();
    PotentialVector { values_x2 }
}

/// The assembled operators on the configuration graph.
pub struct SchrodingerOps {
    /// Weighted adjacency A_N.
    pub adjacency: SparseSym,
    /// Weighted degree D_N (diagonal).
    pub degree: Vec<f64>,
    /// The Schrödinger operator H = −(1/2Δ)·A_N + V_N (+ optional field term).
    pub hamiltonian: SparseSym,
}

impl SchrodingerOps {
    /// −L_N = D_N − A_N, the non-negative weighted Laplacian.
    pub fn neg_laplacian(&self) -> SparseSym {
        let dim = self.adjacency.dim();
        let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(dim);
        for r in 0..dim {
            let mut entries: Vec<(u32, f64)> = Vec::new();
            let mut has_diag = false;
            for (c, v) in self.adjacency.row(r) {
                if c as usize == r {
                    entries.push((c, self.degree[r] - v));
                    has_diag = true;
                } else {
                    entries.push((c, -v));
                }
            }
            if !has_diag {
                entries.push((r as u32, self.degree[r]));
            }
            rows.push(entries);
        }
        SparseSym::from_rows(rows)
    }
}

/// Assemble A_N, D_N and the Schrödinger operator from the edge list and the
/// potential. `field` is an optional per-site magnetic field W; it adds
/// `Σ_x W_x·m(x)` to the diagonal.
pub fn assemble(
    space: &ConfigSpace,
    edges: &[WeightedConfigEdge],
    pot: &PotentialVector,
    delta: f64,
    field: Option<&[f64]>,
    caps: &Caps,
) -> Result<SchrodingerOps> {
    let dim = space.len();
    let nnz = dim + 2 * edges.len();
    if nnz > caps.max_nnz {
        return Err(Error::DimensionCap {
            what: "operator nonzeros",
            size: nnz,
            cap: caps.max_nnz,
        });
    }
    if let Some(w) = field {
        if w.len() != space.n_sites() {
            return Err(Error::InvalidSize(format!(
                "field has {} entries for {} sites",
                w.len(),
                space.n_sites()
            )));
        }
    }

    let mut degree = vec![0.0f64; dim];
    let mut adj_edges = Vec::with_capacity(edges.len());
    let mut ham_edges = Vec::with_capacity(edges.len());
    let g = 1.0 / (2.0 * delta);
    for e in edges {
        degree[e.i as usize] += e.weight;
        degree[e.j as usize] += e.weight;
        adj_edges.push((e.i, e.j, e.weight));
        ham_edges.push((e.i, e.j, -g * e.weight));
    }

    let mut diag = vec![0.0f64; dim];
    for (i, d) in diag.iter_mut().enumerate() {
        *d = pot.values_x2[i] as f64 / 2.0;
        if let Some(w) = field {
            let occ = space.config(i);
            *d += occ
                .iter()
                .zip(w.iter())
                .map(|(&o, &wx)| o as f64 * wx)
                .sum::<f64>();
        }
    }

    let adjacency = SparseSym::from_sym_parts(dim, &vec![0.0; dim], &adj_edges);
    let hamiltonian = SparseSym::from_sym_parts(dim, &diag, &ham_edges);
    Ok(SchrodingerOps {
        adjacency,
        degree,
        hamiltonian,
    })
}

/// Weighted adjacency of the subgraph induced by a vertex subset, expressed
/// in the compact indexing of `subset` (which must be sorted ascending).
pub fn induced_adjacency(edges: &[WeightedConfigEdge], subset: &[u32]) -> SparseSym {
    let pos = |v: u32| subset.binary_search(&v).ok();
    let mut kept = Vec::new();
    for e in edges {
        if let (Some(a), Some(b)) = (pos(e.i), pos(e.j)) {
            kept.push((a as u32, b as u32, e.weight));
        }
    }
    SparseSym::from_sym_parts(subset.len(), &vec![0.0; subset.len()], &kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: usize) -> SpinParams {
        SpinParams::new(m, 2.0 * m as f64).unwrap()
    }

    /// Exhaustive oracle: filter the full {0..M}^n cube by particle count.
    fn enumerate_by_filter(n_sites: usize, m: usize, n_particles: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let total = (m + 1).pow(n_sites as u32);
        for code in 0..total {
            let mut c = code;
            let mut occ = vec![0u8; n_sites];
            for site in (0..n_sites).rev() {
                occ[site] = (c % (m + 1)) as u8;
                c /= m + 1;
            }
            if occ.iter().map(|&v| v as usize).sum::<usize>() == n_particles {
                out.push(occ);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_matches_filter_oracle() {
        let base = BaseGraph::path(3).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 2, &Caps::default()).unwrap();
        let got: Vec<Vec<u8>> = space.iter().map(|c| c.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
        assert_eq!(got, enumerate_by_filter(3, 2, 2));

        // a few more shapes against the oracle
        for (n, m, np) in [(4usize, 1usize, 2usize), (4, 3, 5), (5, 2, 6), (2, 4, 3)] {
            let base = BaseGraph::path(n).unwrap();
            let space = ConfigSpace::enumerate(&base, params(m), np, &Caps::default()).unwrap();
            let got: Vec<Vec<u8>> = space.iter().map(|c| c.to_vec()).collect();
            assert_eq!(got, enumerate_by_filter(n, m, np), "n={n} m={m} np={np}");
            assert_eq!(got.len() as u128, composition_count(n, m, np));
        }
    }

    #[test]
    fn enumerate_edge_cases() {
        let base = BaseGraph::path(4).unwrap();
        let space = ConfigSpace::enumerate(&base, params(3), 0, &Caps::default()).unwrap();
        assert_eq!(space.len(), 1);
        assert!(space.config(0).iter().all(|&v| v == 0));

        let base = BaseGraph::path(2).unwrap();
        let space = ConfigSpace::enumerate(&base, params(1), 2, &Caps::default()).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space.config(0), &[1, 1]);

        assert!(matches!(
            ConfigSpace::enumerate(&base, params(1), 3, &Caps::default()),
            Err(Error::InvalidParticleNumber(_))
        ));
    }

    #[test]
    fn dimension_cap_enforced() {
        let base = BaseGraph::cycle(12).unwrap();
        let caps = Caps {
            max_configs: 10,
            ..Caps::default()
        };
        let err = ConfigSpace::enumerate(&base, params(2), 6, &caps).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { .. }));
    }

    #[test]
    fn index_of_is_inverse_of_config() {
        let base = BaseGraph::cycle(5).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 4, &Caps::default()).unwrap();
        for i in 0..space.len() {
            assert_eq!(space.index_of(space.config(i)), Some(i));
        }
        assert_eq!(space.index_of(&[2, 2, 0, 0, 1]), None); // wrong sum
    }

    #[test]
    fn spin_half_weights_are_all_one() {
        // M = 1: both site factors are (1/2)(0+1+1) − 0 = 1, so w = 1 and the
        // construction reduces to the plain symmetric-product adjacency.
        let base = BaseGraph::cycle(6).unwrap();
        let space = ConfigSpace::enumerate(&base, params(1), 3, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        assert!(!edges.is_empty());
        for e in &edges {
            assert_eq!(e.weight_sq_x4, 4);
            assert_eq!(e.weight, 1.0);
        }
    }

    #[test]
    fn rectangle_breakoff_weight_is_m() {
        // On a cylinder, breaking one particle off a fully occupied rectangle
        // produces an edge of weight exactly M.
        for m in 2..=4 {
            let base = BaseGraph::cylinder(4, 2).unwrap();
            let space =
                ConfigSpace::enumerate(&base, params(m), 2 * 2 * m, &Caps::unlimited()).unwrap();
            // rectangle at columns {0,1}, sites indexed z*2+ell
            let mut rect = vec![0u8; 8];
            for site in [0usize, 1, 2, 3] {
                rect[site] = m as u8;
            }
            let i = space.index_of(&rect).unwrap() as u32;
            let edges = build_edges(&space).unwrap();
            let incident: Vec<&WeightedConfigEdge> =
                edges.iter().filter(|e| e.i == i || e.j == i).collect();
            // 2L boundary sites, one break-off each
            assert_eq!(incident.len(), 4);
            for e in incident {
                assert!((e.weight - m as f64).abs() < 1e-14);
                assert_eq!(e.weight_sq_x4, (4 * m * m) as u64);
            }
        }
    }

    #[test]
    fn weight_symmetry_under_reversal() {
        // w(m,n) = w(n,m): recompute each emitted edge from the other side.
        let base = BaseGraph::strip(3, 2, false).unwrap();
        let space = ConfigSpace::enumerate(&base, params(3), 4, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let m = space.max_occ();
        for e in &edges {
            let occ_i = space.config(e.i as usize);
            let occ_j = space.config(e.j as usize);
            let changed: Vec<usize> = (0..space.n_sites())
                .filter(|&s| occ_i[s] != occ_j[s])
                .collect();
            assert_eq!(changed.len(), 2);
            let f = |s: usize| site_factor_x2(m, occ_i[s] as usize, occ_j[s] as usize);
            assert_eq!(f(changed[0]) * f(changed[1]), e.weight_sq_x4);
            let g = |s: usize| site_factor_x2(m, occ_j[s] as usize, occ_i[s] as usize);
            assert_eq!(g(changed[0]) * g(changed[1]), e.weight_sq_x4);
        }
    }

    #[test]
    fn edge_list_is_canonical_and_deduplicated() {
        let base = BaseGraph::cycle(5).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 3, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        for w in edges.windows(2) {
            assert!((w[0].i, w[0].j) < (w[1].i, w[1].j));
        }
        for e in &edges {
            assert!(e.i < e.j);
            assert!(e.weight > 0.0);
        }
    }

    #[test]
    fn potential_values() {
        let m = 3;
        // v(0,0) = 0, v(M,M) = 0, v(0,1) = M/2
        assert_eq!(pair_potential_x2(m, 0, 0), 0);
        assert_eq!(pair_potential_x2(m, m, m), 0);
        assert_eq!(pair_potential_x2(m, 0, 1), m as i64);
    }

    #[test]
    fn chain_minimizer_potential_is_m_squared() {
        // V_N(m_j) = M² for every j on the cycle.
        let m = 2usize;
        let k = 2usize;
        let base = BaseGraph::cycle(10).unwrap();
        let space = ConfigSpace::enumerate(&base, params(m), k * m, &Caps::default()).unwrap();
        let pot = potential(&space);
        for j in 1..=m {
            let mut occ = vec![0u8; 10];
            occ[0] = j as u8;
            for s in 1..k {
                occ[s] = m as u8;
            }
            occ[k] = (m - j) as u8;
            let idx = space.index_of(&occ).unwrap();
            assert_eq!(pot.values_x2[idx], 2 * (m * m) as i64, "j={j}");
        }
    }

    #[test]
    fn degree_is_row_sum_of_adjacency() {
        let base = BaseGraph::cycle(6).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 3, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let pot = potential(&space);
        let ops = assemble(&space, &edges, &pot, 5.0, None, &Caps::default()).unwrap();
        for r in 0..space.len() {
            let row_sum: f64 = ops.adjacency.row(r).map(|(_, v)| v).sum();
            assert_eq!(row_sum, ops.degree[r], "row {r}");
        }
    }

    #[test]
    fn adjacency_is_bit_exact_symmetric() {
        let base = BaseGraph::strip(3, 2, false).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 4, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let pot = potential(&space);
        let ops = assemble(&space, &edges, &pot, 3.0, None, &Caps::default()).unwrap();
        assert!(ops.adjacency.is_symmetric_exact());
        assert!(ops.hamiltonian.is_symmetric_exact());
    }

    #[test]
    fn neg_laplacian_is_positive_semidefinite() {
        let base = BaseGraph::cycle(5).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 4, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let pot = potential(&space);
        let ops = assemble(&space, &edges, &pot, 5.0, None, &Caps::default()).unwrap();
        let neg_l = ops.neg_laplacian().to_dense();
        let eig = neg_l.symmetric_eigen().eigenvalues;
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-10, "min eigenvalue {min}");
    }

    #[test]
    fn zero_particle_hamiltonian_is_zero() {
        let base = BaseGraph::path(4).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 0, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let pot = potential(&space);
        let ops = assemble(&space, &edges, &pot, 4.0, None, &Caps::default()).unwrap();
        assert_eq!(space.len(), 1);
        assert!(edges.is_empty());
        assert_eq!(ops.hamiltonian.to_dense()[(0, 0)], 0.0);
    }

    #[test]
    fn potential_minimum_at_least_half_m() {
        // For a connected base graph and 0 < N < M·n, min V_N ≥ M/2,
        // i.e. min 2V_N ≥ M.
        for (base, m) in [
            (BaseGraph::cycle(6).unwrap(), 2usize),
            (BaseGraph::path(5).unwrap(), 3),
            (BaseGraph::strip(3, 2, false).unwrap(), 2),
        ] {
            let n_sites = base.n_vertices();
            for np in 1..m * n_sites {
                let space = ConfigSpace::enumerate(&base, params(m), np, &Caps::unlimited());
                let space = match space {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let pot = potential(&space);
                let min = pot.values_x2.iter().min().unwrap();
                assert!(*min >= m as i64, "N={np}: min 2V = {min}");
            }
        }
    }

    #[test]
    fn disjoint_edge_expectation_lower_bound() {
        // The finite mechanism behind unboundedness on infinite graphs: a
        // configuration with one particle on each of N pairwise-disjoint
        // edges has V_N ≥ N·M/2.
        for m in 1..=3usize {
            let n_pairs = 3;
            let base = BaseGraph::path(2 * n_pairs).unwrap();
            let space =
                ConfigSpace::enumerate(&base, params(m), n_pairs, &Caps::default()).unwrap();
            let mut occ = vec![0u8; 2 * n_pairs];
            for p in 0..n_pairs {
                occ[2 * p] = 1;
            }
            let pot = potential(&space);
            let idx = space.index_of(&occ).unwrap();
            assert!(pot.values_x2[idx] >= (n_pairs * m) as i64);
        }
    }

    #[test]
    fn field_term_adds_to_diagonal() {
        let base = BaseGraph::path(3).unwrap();
        let space = ConfigSpace::enumerate(&base, params(2), 2, &Caps::default()).unwrap();
        let edges = build_edges(&space).unwrap();
        let pot = potential(&space);
        let field = [0.5, -1.0, 2.0];
        let plain = assemble(&space, &edges, &pot, 4.0, None, &Caps::default()).unwrap();
        let with = assemble(&space, &edges, &pot, 4.0, Some(&field), &Caps::default()).unwrap();
        for i in 0..space.len() {
            let occ = space.config(i);
            let expect: f64 = occ
                .iter()
                .zip(field.iter())
                .map(|(&o, &w)| o as f64 * w)
                .sum();
            let d0 = plain.hamiltonian.entry(i, i as u32).unwrap();
            let d1 = with.hamiltonian.entry(i, i as u32).unwrap();
            assert!((d1 - d0 - expect).abs() < 1e-14);
        }
    }
}
