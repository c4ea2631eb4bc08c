//! Solver cross-validation on assembled configuration-graph Hamiltonians:
//! dense vs iterative eigenvalues, inertia counts vs the dense spectrum, the
//! uniform ground-state gap, and the droplet band.

use spingap_core::config::{self, Caps, ConfigSpace};
use spingap_core::lattice::BaseGraph;
use spingap_core::sparse::SparseSym;
use spingap_core::spectral::{self, ldl, LanczosOptions};
use spingap_core::spin::SpinParams;

fn hamiltonian(base: &BaseGraph, m: usize, np: usize, delta: f64) -> (ConfigSpace, SparseSym) {
    let params = SpinParams::new(m, delta).unwrap();
    let space = ConfigSpace::enumerate(base, params, np, &Caps::default()).unwrap();
    let edges = config::build_edges(&space).unwrap();
    let pot = config::potential(&space);
    let ops = config::assemble(&space, &edges, &pot, delta, None, &Caps::default()).unwrap();
    (space, ops.hamiltonian)
}

#[test]
fn iterative_agrees_with_dense() {
    let cases = [
        (BaseGraph::cycle(8).unwrap(), 2usize, 4usize, 10.0),
        (BaseGraph::cycle(5).unwrap(), 3, 4, 7.0),
        (BaseGraph::strip(3, 2, false).unwrap(), 2, 3, 5.0),
        (BaseGraph::path(7).unwrap(), 1, 3, 2.0),
    ];
    for (base, m, np, delta) in cases {
        let (_, h) = hamiltonian(&base, m, np, delta);
        let dense = spectral::dense_spectrum(&h.to_dense());
        let k = 10.min(h.dim());
        let iter = spectral::lowest_k(&h, k, 1e-10).unwrap();
        for i in 0..k {
            let diff = (dense.eigenvalues[i] - iter.eigenvalues[i]).abs();
            assert!(
                diff <= 1e-8,
                "M={m} N={np} pair {i}: dense {} vs iterative {}",
                dense.eigenvalues[i],
                iter.eigenvalues[i]
            );
        }
    }
}

#[test]
fn count_below_cross_checks_against_dense_spectrum() {
    let (_, h) = hamiltonian(&BaseGraph::cycle(8).unwrap(), 2, 4, 10.0);
    let dense = spectral::dense_spectrum(&h.to_dense());
    let caps = Caps::default();
    for e in [0.5, 1.9, 3.52, 4.1, 7.3] {
        let expect = dense.eigenvalues.iter().filter(|&&v| v < e).count();
        assert_eq!(spectral::count_below(&h, e, &caps).unwrap(), expect, "E={e}");
    }
}

#[test]
fn sparse_inertia_route_matches_dense_route() {
    // Exercise the LDLᵀ path on a configuration-graph operator directly and
    // compare with the tridiagonal Sturm route.
    let (_, h) = hamiltonian(&BaseGraph::cycle(6).unwrap(), 2, 3, 6.0);
    let dense = h.to_dense();
    for e in [0.77, 2.13, 3.505, 5.9] {
        let a = ldl::inertia_below(&h, e, usize::MAX).unwrap();
        let b = spectral::count_below_dense(&dense, e).unwrap();
        assert_eq!(a, b, "E={e}");
    }
}

#[test]
fn ground_state_gap_uniform_in_particle_number() {
    // On periodic graphs with 1 ≤ N ≤ M·n − 1 every sector satisfies
    // H ≥ (1 − M/Δ)·M/2.
    for (base, m, delta) in [
        (BaseGraph::cycle(5).unwrap(), 2usize, 6.0f64),
        (BaseGraph::cycle(6).unwrap(), 1, 3.0),
        (BaseGraph::cylinder(3, 2).unwrap(), 2, 8.0),
    ] {
        let n_sites = base.n_vertices();
        let bound = (1.0 - m as f64 / delta) * m as f64 / 2.0;
        for np in 1..m * n_sites {
            let (_, h) = hamiltonian(&base, m, np, delta);
            let min = if h.dim() <= 600 {
                spectral::dense_spectrum(&h.to_dense()).eigenvalues[0]
            } else {
                spectral::lowest_k(&h, 1, 1e-9).unwrap().eigenvalues[0]
            };
            assert!(
                min >= bound - 1e-8,
                "M={m} N={np}: min eigenvalue {min} < {bound}"
            );
        }
    }
}

#[test]
fn droplet_band_on_chain_instance() {
    let delta = 17.0;
    let (space, h) = hamiltonian(&BaseGraph::cycle(10).unwrap(), 2, 4, delta);
    let params = SpinParams::new(2, delta).unwrap();
    let pot = config::potential(&space);
    let part = spingap_core::gap::droplet_set(&space, &pot).unwrap();
    let spectrum = spectral::dense_spectrum(&h.to_dense());
    let band = spectral::droplet_band(&spectrum, params, part.vn2().unwrap()).unwrap();
    assert!(!band.is_empty());
    // every band eigenvalue respects the uniform ground-state gap
    let floor = (1.0 - 2.0 / delta) * 1.0;
    for &ev in &band {
        assert!(ev >= floor - 1e-8);
    }
    // the 20 droplet states all lie in the band
    assert!(band.len() >= 20, "band holds {} states", band.len());
}

#[test]
fn seeded_runs_are_reproducible() {
    let (_, h) = hamiltonian(&BaseGraph::cycle(8).unwrap(), 2, 4, 10.0);
    let opts = LanczosOptions {
        seed: 12345,
        ..Default::default()
    };
    let a = spectral::lowest_k_with(&h, 6, 1e-10, opts.clone()).unwrap();
    let b = spectral::lowest_k_with(&h, 6, 1e-10, opts).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.residual_norms, b.residual_norms);
}
