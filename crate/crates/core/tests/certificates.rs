//! End-to-end certificate pipelines: droplet detection, boundary data, the
//! certified interval, and verification against a computed spectrum. The gap
//! condition is a theorem, so every nonempty certificate must verify — this
//! holds across a whole anisotropy sweep.

use spingap_core::config::{self, Caps, ConfigSpace};
use spingap_core::gap::{self, CBound};
use spingap_core::lattice::BaseGraph;
use spingap_core::spectral;
use spingap_core::spin::SpinParams;

struct Instance {
    space: ConfigSpace,
    edges: Vec<config::WeightedConfigEdge>,
    pot: config::PotentialVector,
    part: gap::Partition,
    quantities: gap::BoundaryQuantities,
}

fn prepare(base: BaseGraph, m: usize, np: usize) -> Instance {
    let params = SpinParams::new(m, 10.0 * m as f64).unwrap();
    let space = ConfigSpace::enumerate(&base, params, np, &Caps::default()).unwrap();
    let edges = config::build_edges(&space).unwrap();
    let pot = config::potential(&space);
    let part = gap::droplet_set(&space, &pot).unwrap();
    let quantities = gap::boundary_quantities(&edges, &part);
    Instance {
        space,
        edges,
        pot,
        part,
        quantities,
    }
}

fn verify_at(inst: &Instance, delta: f64) -> Option<gap::VerifyReport> {
    let m = inst.space.max_occ();
    let params = SpinParams::new(m, delta).unwrap();
    let cert = gap::certificate(
        &inst.part,
        &inst.quantities,
        params,
        CBound::TwoMPotential,
        &inst.pot,
        None,
    )
    .unwrap();
    cert.interval?;
    let ops = config::assemble(
        &inst.space,
        &inst.edges,
        &inst.pot,
        delta,
        None,
        &Caps::default(),
    )
    .unwrap();
    let spectrum = spectral::dense_spectrum(&ops.hamiltonian.to_dense());
    let mid = cert.midpoint().unwrap();
    let count = spectral::count_below(&ops.hamiltonian, mid, &Caps::default()).unwrap();
    Some(
        gap::verify_certificate(&cert, &spectrum, Some(count))
            .expect("a certified interval must be free of spectrum"),
    )
}

#[test]
fn chain_certificate_verifies_at_reference_anisotropy() {
    let inst = prepare(BaseGraph::cycle(10).unwrap(), 2, 4);
    let rep = verify_at(&inst, 17.0).expect("Δ=17 certifies");
    assert!(rep.verified);
    assert!(rep.covered);
    let (count, method) = rep.count_below_mid.unwrap();
    assert!(count >= 20, "count {count}");
    assert_eq!(method, gap::CountMethod::Inertia);
}

#[test]
fn chain_certificate_sweeps_consistently() {
    // theorem consistency across a Δ grid: every nonempty certificate
    // verifies; widths never shrink as Δ grows
    let inst = prepare(BaseGraph::cycle(8).unwrap(), 2, 4);
    let mut prev_width = 0.0f64;
    let mut seen_nonempty = false;
    let mut delta = 10.0;
    while delta <= 30.0 {
        let params = SpinParams::new(2, delta).unwrap();
        let cert = gap::certificate(
            &inst.part,
            &inst.quantities,
            params,
            CBound::TwoMPotential,
            &inst.pot,
            None,
        )
        .unwrap();
        if cert.interval.is_some() {
            seen_nonempty = true;
            let rep = verify_at(&inst, delta).unwrap();
            assert!(rep.verified, "Δ={delta}");
        }
        let w = cert.width();
        assert!(w >= prev_width - 1e-12, "Δ={delta}: width shrank");
        prev_width = w;
        delta += 1.0;
    }
    assert!(seen_nonempty);
}

#[test]
fn snug_cylinder_gains_ring_row_minimizers() {
    // Finite-size coincidence: on cylinder(n, L) with n = k·L the two fully
    // occupied ring-rows also cost V = LM², so the droplet set is the k×L
    // rectangles PLUS the L rows. The droplet analyses use n > k·L.
    let inst = prepare(BaseGraph::cylinder(4, 2).unwrap(), 2, 8);
    assert_eq!(inst.part.vn1_x2, 16); // V_{N,1} = LM² = 8 either way
    assert_eq!(inst.part.v1_len(), 6); // 4 rectangles + 2 rows
    let rectangles = gap::strip_rectangle_family(4, 2, 2, 8).unwrap();
    for occ in &rectangles {
        let idx = inst.space.index_of(occ).unwrap() as u32;
        assert!(inst.part.is_v1(idx));
    }
    let mut row = vec![0u8; 8];
    for z in 0..4 {
        row[z * 2] = 2; // (z, ell=0) fully occupied
    }
    assert!(inst.part.is_v1(inst.space.index_of(&row).unwrap() as u32));
}

#[test]
fn strip_certificate_on_cylinder() {
    // cylinder(5,2), M=2, N=kLM=8: the rectangle family is the droplet set,
    // and Δ=23 > LM³ + (1+√(2L))M = 22 certifies a gap, verified from the
    // iterative spectrum.
    let inst = prepare(BaseGraph::cylinder(5, 2).unwrap(), 2, 8);
    assert_eq!(inst.part.vn1_x2, 16); // V_{N,1} = LM² = 8
    assert_eq!(inst.part.v1_len(), 5);
    // measured second-lowest level is at least LM² + 1
    assert!(inst.part.vn2_x2.unwrap() >= 18);

    assert!((inst.quantities.d1 - 8.0).abs() < 1e-12); // 2LM
    assert!((inst.quantities.d2 - 2.0).abs() < 1e-12); // M
    assert_eq!(inst.quantities.a1_norm, 0.0);

    let delta = 23.0;
    let params = SpinParams::new(2, delta).unwrap();
    let cert = gap::certificate(
        &inst.part,
        &inst.quantities,
        params,
        CBound::TwoMPotential,
        &inst.pot,
        None,
    )
    .unwrap();
    assert!(cert.interval.is_some());
    let ops = config::assemble(
        &inst.space,
        &inst.edges,
        &inst.pot,
        delta,
        None,
        &Caps::default(),
    )
    .unwrap();
    let opts = spectral::LanczosOptions {
        block_size: 8,
        max_basis: 2500,
        start: Some(gap::droplet_start_block(&inst.part)),
        ..Default::default()
    };
    let spectrum = spectral::lowest_k_with(&ops.hamiltonian, 10, 1e-5, opts).unwrap();
    let rep = gap::verify_certificate(&cert, &spectrum, None).unwrap();
    assert!(rep.verified, "report: {rep:?}");
    let (count, _) = rep.count_below_mid.unwrap();
    assert!(count >= 5, "count {count}");
}

#[test]
fn verification_works_from_iterative_spectrum_too() {
    // the same chain certificate verified with the k-lowest eigenvalues and
    // the interlacing count instead of the dense route
    let inst = prepare(BaseGraph::cycle(10).unwrap(), 2, 4);
    let delta = 17.0;
    let params = SpinParams::new(2, delta).unwrap();
    let cert = gap::certificate(
        &inst.part,
        &inst.quantities,
        params,
        CBound::TwoMPotential,
        &inst.pot,
        None,
    )
    .unwrap();
    let ops = config::assemble(
        &inst.space,
        &inst.edges,
        &inst.pot,
        delta,
        None,
        &Caps::default(),
    )
    .unwrap();
    let k = 30;
    let spectrum = spectral::lowest_k(&ops.hamiltonian, k, 1e-9).unwrap();
    let hi = cert.interval.unwrap().1;
    assert!(spectrum.eigenvalues.iter().any(|&e| e > hi));
    let rep = gap::verify_certificate(&cert, &spectrum, None).unwrap();
    assert!(rep.verified);
    let (count, method) = rep.count_below_mid.unwrap();
    assert_eq!(method, gap::CountMethod::RitzLowerBound);
    assert!(count >= 20, "count {count}");
}

#[test]
fn certificate_record_roundtrips_through_json() {
    let inst = prepare(BaseGraph::cycle(10).unwrap(), 2, 4);
    let delta = 17.0;
    let params = SpinParams::new(2, delta).unwrap();
    let cert = gap::certificate(
        &inst.part,
        &inst.quantities,
        params,
        CBound::TwoMPotential,
        &inst.pot,
        None,
    )
    .unwrap();
    let rep = verify_at(&inst, delta).unwrap();
    let record = gap::CertificateRecord::new(
        params,
        4,
        "cycle:10".into(),
        &inst.part,
        &inst.quantities,
        &cert,
        rep.verified,
    );
    let json = serde_json::to_string_pretty(&record).unwrap();
    let back: gap::CertificateRecord = serde_json::from_str(&json).unwrap();
    assert!(back.verified);
    assert_eq!(back.v1_size, 20);
    assert_eq!(back.vn1, 4.0);
    assert_eq!(back.vn2, Some(5.0));
}
