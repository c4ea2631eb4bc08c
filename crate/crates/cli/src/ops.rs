//! Command implementations.

use crate::{
    CBoundArg, CertifyArgs, CommonArgs, DropletsArgs, EquivalenceArgs, ExportArgs, ExportWhat,
    Mode, SpectrumArgs, SweepArgs,
};
use serde::Serialize;
use spingap_core::config::{self, Caps, ConfigSpace, PotentialVector, WeightedConfigEdge};
use spingap_core::gap::{self, CBound};
use spingap_core::hamiltonian;
use spingap_core::io as bin_io;
use spingap_core::lattice::BaseGraph;
use spingap_core::sparse::SparseSym;
use spingap_core::spectral::{self, LanczosOptions, SpectrumResult};
use spingap_core::spin::SpinParams;
use spingap_core::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

// ---------------------------------------------------------------------------
// parsing and output plumbing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Strip { n: usize, l: usize, periodic: bool },
    File(PathBuf),
}

pub fn parse_graph(spec: &str) -> Result<(GraphSpec, BaseGraph)> {
    let bad = |msg: &str| Error::Parse(format!("graph `{spec}`: {msg}"));
    if let Some((kind, rest)) = spec.split_once(':') {
        let parse_n = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad("expected an integer size"))
        };
        match kind {
            "path" => {
                let n = parse_n(rest)?;
                return Ok((GraphSpec::Path(n), BaseGraph::path(n)?));
            }
            "cycle" => {
                let n = parse_n(rest)?;
                return Ok((GraphSpec::Cycle(n), BaseGraph::cycle(n)?));
            }
            "strip" | "cylinder" => {
                let (n, l) = rest
                    .split_once('x')
                    .ok_or_else(|| bad("expected NxL"))
                    .and_then(|(a, b)| Ok((parse_n(a)?, parse_n(b)?)))?;
                let periodic = kind == "cylinder";
                return Ok((
                    GraphSpec::Strip { n, l, periodic },
                    BaseGraph::strip(n, l, periodic)?,
                ));
            }
            _ => {}
        }
    }
    let path = PathBuf::from(spec);
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        let graph = BaseGraph::parse_edge_list(&text)?;
        return Ok((GraphSpec::File(path), graph));
    }
    Err(bad(
        "expected path:N, cycle:N, strip:NxL, cylinder:NxL, or an existing edge-list file",
    ))
}

pub fn parse_field(path: &Path, n_sites: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut field = vec![0.0; n_sites];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let site: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("field line {}: expected `site value`", lineno + 1)))?;
        let value: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("field line {}: expected `site value`", lineno + 1)))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("field line {}: trailing tokens", lineno + 1)));
        }
        if site >= n_sites {
            return Err(Error::Parse(format!(
                "field line {}: site {site} out of range for {n_sites} sites",
                lineno + 1
            )));
        }
        field[site] = value;
    }
    Ok(field)
}

fn parse_usize_range(spec: &str) -> Result<(usize, usize)> {
    if let Some((a, b)) = spec.split_once(':') {
        let lo = a
            .parse()
            .map_err(|_| Error::Parse(format!("bad range `{spec}`")))?;
        let hi = b
            .parse()
            .map_err(|_| Error::Parse(format!("bad range `{spec}`")))?;
        if lo > hi {
            return Err(Error::Parse(format!("empty range `{spec}`")));
        }
        Ok((lo, hi))
    } else {
        let v = spec
            .parse()
            .map_err(|_| Error::Parse(format!("bad particle number `{spec}`")))?;
        Ok((v, v))
    }
}

fn parse_delta_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "bad delta range `{spec}`; expected start:stop:step"
        )));
    }
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad delta range `{spec}`")))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if !(step > 0.0) || stop < start {
        return Err(Error::Parse(format!("bad delta range `{spec}`")));
    }
    let mut deltas = Vec::new();
    let mut k = 0usize;
    loop {
        let d = start + step * k as f64;
        if d > stop + 1e-12 {
            break;
        }
        deltas.push(d);
        k += 1;
    }
    Ok(deltas)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

/// Shortest round-trip decimal form; exact f64 round-trip, `0` prints as `0`.
fn fmt(x: f64) -> String {
    format!("{x}")
}

fn caps_of(common: &CommonArgs) -> Caps {
    Caps {
        max_configs: common.cap_configs,
        max_nnz: common.cap_nnz,
        max_dense: common.cap_dense,
    }
}

fn validate_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(Error::InvalidSize("--threads must be at least 1".into()));
    }
    if threads > 1 {
        eprintln!("note: kernels are sequential; --threads {threads} does not change results");
    }
    Ok(())
}

struct Assembled {
    space: ConfigSpace,
    edges: Vec<WeightedConfigEdge>,
    pot: PotentialVector,
}

fn build_space(
    base: &BaseGraph,
    params: SpinParams,
    n_particles: usize,
    caps: &Caps,
) -> Result<Assembled> {
    let space = ConfigSpace::enumerate(base, params, n_particles, caps)?;
    let edges = config::build_edges(&space)?;
    let pot = config::potential(&space);
    Ok(Assembled { space, edges, pot })
}

// ---------------------------------------------------------------------------
// equivalence
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EquivalenceRun {
    graph: String,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    delta: f64,
    dim: usize,
    full_dim: usize,
    max_abs_diff: f64,
    pass: bool,
}

#[derive(Serialize)]
struct EquivalenceReport {
    tolerance: f64,
    all_within_tolerance: bool,
    runs: Vec<EquivalenceRun>,
}

pub fn run_equivalence(args: EquivalenceArgs) -> Result<i32> {
    const TOL: f64 = 1e-10;
    let t0 = Instant::now();
    let caps = Caps {
        max_configs: args.cap_configs,
        max_nnz: args.cap_nnz,
        max_dense: 6_000,
    };

    let mut cases: Vec<(String, BaseGraph, usize, usize, f64)> = Vec::new();
    match (&args.graph, args.max_occ, args.n_particles, args.delta) {
        (Some(spec), Some(m), Some(n), Some(delta)) => {
            let (_, base) = parse_graph(spec)?;
            cases.push((spec.clone(), base, m, n, delta));
        }
        (None, None, None, None) => {
            for (name, base) in [
                ("path:4".to_string(), BaseGraph::path(4)?),
                ("cycle:5".to_string(), BaseGraph::cycle(5)?),
                ("strip:3x2".to_string(), BaseGraph::strip(3, 2, false)?),
            ] {
                for m in 1..=3usize {
                    for n in 1..=3usize {
                        for delta in [2.0 * m as f64, 10.0 * m as f64] {
                            cases.push((name.clone(), base.clone(), m, n, delta));
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::Parse(
                "provide --graph, --M, --N and --delta together, or none of them \
                 to run the built-in matrix"
                    .into(),
            ));
        }
    }

    let mut runs = Vec::new();
    let mut all_pass = true;
    for (name, base, m, n, delta) in cases {
        let params = SpinParams::new(m, delta)?;
        let field = match &args.field_file {
            Some(path) => Some(parse_field(path, base.n_vertices())?),
            None => None,
        };
        let rep =
            hamiltonian::equivalence_check(&base, params, n, field.as_deref(), &caps, args.cap_full)?;
        let pass = rep.max_abs_diff <= TOL;
        all_pass &= pass;
        runs.push(EquivalenceRun {
            graph: name,
            m,
            n,
            delta,
            dim: rep.dim,
            full_dim: rep.full_dim,
            max_abs_diff: rep.max_abs_diff,
            pass,
        });
    }

    let report = EquivalenceReport {
        tolerance: TOL,
        all_within_tolerance: all_pass,
        runs,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(&args.out, &json)?;
    eprintln!(
        "equivalence: {} runs in {:.3}s",
        report.runs.len(),
        t0.elapsed().as_secs_f64()
    );
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

fn solve_spectrum(
    h: &SparseSym,
    k_lowest: Option<usize>,
    caps: &Caps,
    seed: u64,
) -> Result<SpectrumResult> {
    match k_lowest {
        Some(k) => {
            let opts = LanczosOptions {
                seed,
                ..Default::default()
            };
            spectral::lowest_k_with(h, k, 1e-9, opts)
        }
        None => spectral::dense_spectrum_sparse(h, caps),
    }
}

pub fn run_spectrum(args: SpectrumArgs) -> Result<i32> {
    validate_threads(args.common.threads)?;
    let t0 = Instant::now();
    let caps = caps_of(&args.common);
    let (_, base) = parse_graph(&args.common.graph)?;
    let (n_lo, n_hi) = parse_usize_range(&args.n_particles)?;
    let field = match &args.field_file {
        Some(path) => Some(parse_field(path, base.n_vertices())?),
        None => None,
    };

    let mut csv = String::from("N,index,eigenvalue,residual\n");
    for n in n_lo..=n_hi {
        let params = SpinParams::new(args.common.max_occ, args.delta)?;
        let built = build_space(&base, params, n, &caps)?;
        let ops = config::assemble(
            &built.space,
            &built.edges,
            &built.pot,
            args.delta,
            field.as_deref(),
            &caps,
        )?;
        let spec = solve_spectrum(&ops.hamiltonian, args.k_lowest, &caps, args.common.seed)?;
        for (i, (ev, res)) in spec
            .eigenvalues
            .iter()
            .zip(spec.residual_norms.iter())
            .enumerate()
        {
            csv.push_str(&format!("{n},{i},{},{}\n", fmt(*ev), fmt(*res)));
        }
    }
    emit(&args.common.out, &csv)?;
    eprintln!("spectrum: {:.3}s", t0.elapsed().as_secs_f64());
    Ok(0)
}

// ---------------------------------------------------------------------------
// droplets
// ---------------------------------------------------------------------------

fn occupation_array(occ: &[u8]) -> String {
    let inner: Vec<String> = occ.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

#[derive(Serialize)]
struct MinimizerEntry {
    index: usize,
    occupations: Vec<u8>,
    array: String,
}

#[derive(Serialize)]
struct DropletReport {
    graph: String,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    dim: usize,
    #[serde(rename = "VN1")]
    vn1: f64,
    #[serde(rename = "VN2")]
    vn2: Option<f64>,
    v1_size: usize,
    v2_size: usize,
    mode: String,
    /// Whether the measured minimizer set equals the closed-form family for
    /// the requested mode (absent in generic mode).
    family_matches: Option<bool>,
    minimizers: Vec<MinimizerEntry>,
}

/// The closed-form droplet family for the requested mode, as sorted indices.
fn mode_family(
    mode: Mode,
    spec: &GraphSpec,
    space: &ConfigSpace,
    n_particles: usize,
) -> Result<Option<Vec<u32>>> {
    let occs = match mode {
        Mode::Generic => return Ok(None),
        Mode::ChainDroplet => {
            let GraphSpec::Cycle(n) = spec else {
                return Err(Error::InvalidSize(
                    "--mode chain-droplet needs a cycle:N graph".into(),
                ));
            };
            gap::chain_minimizer_family(*n, space.max_occ(), n_particles)?
        }
        Mode::StripDroplet => {
            let GraphSpec::Strip {
                n,
                l,
                periodic: true,
            } = spec
            else {
                return Err(Error::InvalidSize(
                    "--mode strip-droplet needs a cylinder:NxL graph".into(),
                ));
            };
            gap::strip_rectangle_family(*n, *l, space.max_occ(), n_particles)?
        }
    };
    let idx: Result<Vec<u32>> = occs
        .iter()
        .map(|occ| {
            space
                .index_of(occ)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InvalidSize("family member outside the space".into()))
        })
        .collect();
    idx.map(Some)
}

pub fn run_droplets(args: DropletsArgs) -> Result<i32> {
    validate_threads(args.common.threads)?;
    let t0 = Instant::now();
    let caps = caps_of(&args.common);
    let (spec, base) = parse_graph(&args.common.graph)?;
    // delta is irrelevant for the potential; droplet analysis only needs M
    let params = SpinParams::new(args.common.max_occ, args.common.max_occ as f64 + 1.0)?;
    let built = build_space(&base, params, args.n_particles, &caps)?;
    let part = gap::droplet_set(&built.space, &built.pot)?;

    let family = mode_family(args.mode, &spec, &built.space, args.n_particles)?;
    let family_matches = family.as_ref().map(|f| f == &part.v1);

    let minimizers = part
        .v1
        .iter()
        .map(|&i| MinimizerEntry {
            index: i as usize,
            occupations: built.space.config(i as usize).to_vec(),
            array: occupation_array(built.space.config(i as usize)),
        })
        .collect();

    let report = DropletReport {
        graph: args.common.graph.clone(),
        m: args.common.max_occ,
        n: args.n_particles,
        dim: built.space.len(),
        vn1: part.vn1(),
        vn2: part.vn2(),
        v1_size: part.v1_len(),
        v2_size: part.v2_len(),
        mode: match args.mode {
            Mode::Generic => "generic",
            Mode::ChainDroplet => "chain-droplet",
            Mode::StripDroplet => "strip-droplet",
        }
        .into(),
        family_matches,
        minimizers,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(&args.common.out, &json)?;
    eprintln!("droplets: {:.3}s", t0.elapsed().as_secs_f64());
    Ok(0)
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct Certified {
    cert: gap::GapCertificate,
    part: gap::Partition,
    quantities: gap::BoundaryQuantities,
    verified: bool,
}

fn certify_instance(
    built: &Assembled,
    params: SpinParams,
    c_bound: CBound,
    caps: &Caps,
    seed: u64,
    k_lowest: Option<usize>,
) -> Result<Certified> {
    let part = gap::droplet_set(&built.space, &built.pot)?;
    let quantities = gap::boundary_quantities(&built.edges, &part);
    let ops = config::assemble(
        &built.space,
        &built.edges,
        &built.pot,
        params.delta,
        None,
        caps,
    )?;
    let cert = gap::certificate(
        &part,
        &quantities,
        params,
        c_bound,
        &built.pot,
        Some(&ops.degree),
    )?;

    let verified = if cert.interval.is_some() {
        let dim = ops.hamiltonian.dim();
        let (spectrum, exact_count) = if dim <= caps.max_dense && k_lowest.is_none() {
            let spectrum = spectral::dense_spectrum(&ops.hamiltonian.to_dense());
            let mid = cert.midpoint().unwrap();
            let count = spectral::count_below(&ops.hamiltonian, mid, caps)?;
            (spectrum, Some(count))
        } else {
            let k = k_lowest.unwrap_or(part.v1_len() + 4);
            let opts = LanczosOptions {
                seed,
                block_size: 8.max(part.v1_len().min(16)),
                max_basis: 2_000,
                start: Some(gap::droplet_start_block(&part)),
                check_every: 6,
                ..Default::default()
            };
            let spectrum = spectral::lowest_k_with(&ops.hamiltonian, k, 1e-6, opts)?;
            (spectrum, None)
        };
        let rep = gap::verify_certificate(&cert, &spectrum, exact_count)?;
        if let Some((count, method)) = rep.count_below_mid {
            eprintln!(
                "certify: count_below(midpoint) = {count} ({}), |V1| = {}",
                match method {
                    gap::CountMethod::Inertia => "exact inertia",
                    gap::CountMethod::RitzLowerBound => "rayleigh-ritz lower bound",
                },
                part.v1_len()
            );
        }
        rep.verified
    } else {
        eprintln!("certify: no certified interval at delta = {}", params.delta);
        false
    };

    Ok(Certified {
        cert,
        part,
        quantities,
        verified,
    })
}

pub fn run_certify(args: CertifyArgs) -> Result<i32> {
    validate_threads(args.common.threads)?;
    let t0 = Instant::now();
    let caps = caps_of(&args.common);
    let (spec, base) = parse_graph(&args.common.graph)?;
    let params = SpinParams::new(args.common.max_occ, args.delta)?;
    params.require_droplet_valid()?;
    let built = build_space(&base, params, args.n_particles, &caps)?;

    // mode validation happens before any heavy work
    let family = mode_family(args.mode, &spec, &built.space, args.n_particles)?;

    let c_bound = match args.c_bound {
        CBoundArg::Potential => CBound::TwoMPotential,
        CBoundArg::Degree => CBound::Degree,
    };
    let outcome = certify_instance(
        &built,
        params,
        c_bound,
        &caps,
        args.common.seed,
        args.k_lowest,
    )?;
    if let Some(family) = family {
        if family != outcome.part.v1 {
            eprintln!(
                "certify: note: measured minimizer set differs from the closed-form family \
                 ({} vs {} members)",
                outcome.part.v1_len(),
                family.len()
            );
        }
    }

    let record = gap::CertificateRecord::new(
        params,
        args.n_particles,
        args.common.graph.clone(),
        &outcome.part,
        &outcome.quantities,
        &outcome.cert,
        outcome.verified,
    );
    let mut json = serde_json::to_string_pretty(&record)?;
    json.push('\n');
    emit(&args.common.out, &json)?;
    eprintln!("certify: {:.3}s", t0.elapsed().as_secs_f64());
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn run_sweep(args: SweepArgs) -> Result<i32> {
    validate_threads(args.common.threads)?;
    let t0 = Instant::now();
    let caps = caps_of(&args.common);
    let (_, base) = parse_graph(&args.common.graph)?;
    let deltas = parse_delta_range(&args.delta_range)?;
    let probe = SpinParams::new(args.common.max_occ, args.common.max_occ as f64 + 1.0)?;
    let built = build_space(&base, probe, args.n_particles, &caps)?;
    let part = gap::droplet_set(&built.space, &built.pot)?;
    let quantities = gap::boundary_quantities(&built.edges, &part);

    let mut csv =
        String::from("delta,window_lo,window_hi,certified_lo,certified_hi,min_eig_in_window\n");
    for &delta in &deltas {
        let params = SpinParams::new(args.common.max_occ, delta)?;
        let mut window = (String::new(), String::new());
        let mut certified = (String::new(), String::new());
        let mut min_in_window = String::new();
        if params.droplet_valid() {
            let cert = gap::certificate(
                &part,
                &quantities,
                params,
                CBound::TwoMPotential,
                &built.pot,
                None,
            )?;
            if let Some(u2) = cert.u2_eff {
                window = (fmt(cert.u1_eff), fmt(u2));
                if let Some((lo, hi)) = cert.interval {
                    certified = (fmt(lo), fmt(hi));
                }
                if u2 > cert.u1_eff {
                    let ops = config::assemble(
                        &built.space,
                        &built.edges,
                        &built.pot,
                        delta,
                        None,
                        &caps,
                    )?;
                    let spectrum = if ops.hamiltonian.dim() <= caps.max_dense {
                        spectral::dense_spectrum(&ops.hamiltonian.to_dense())
                    } else {
                        let k = args.k_lowest.unwrap_or(part.v1_len() + 6);
                        let opts = LanczosOptions {
                            seed: args.common.seed,
                            block_size: 8.max(part.v1_len().min(16)),
                            max_basis: 2_000,
                            start: Some(gap::droplet_start_block(&part)),
                            check_every: 6,
                            ..Default::default()
                        };
                        spectral::lowest_k_with(&ops.hamiltonian, k, 1e-6, opts)?
                    };
                    if let Some(ev) = spectrum
                        .eigenvalues
                        .iter()
                        .find(|&&ev| ev > cert.u1_eff && ev < u2)
                    {
                        min_in_window = fmt(*ev);
                    }
                }
            }
        }
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(delta),
            window.0,
            window.1,
            certified.0,
            certified.1,
            min_in_window
        ));
    }
    emit(&args.common.out, &csv)?;
    eprintln!(
        "sweep: {} anisotropies in {:.3}s",
        deltas.len(),
        t0.elapsed().as_secs_f64()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

pub fn run_export(args: ExportArgs) -> Result<i32> {
    validate_threads(args.common.threads)?;
    let caps = caps_of(&args.common);
    let (_, base) = parse_graph(&args.common.graph)?;
    let delta = match (args.what, args.delta) {
        (ExportWhat::Hamiltonian, None) => {
            return Err(Error::Parse("--what hamiltonian needs --delta".into()))
        }
        (_, d) => d.unwrap_or(args.common.max_occ as f64 + 1.0),
    };
    let params = SpinParams::new(args.common.max_occ, delta)?;
    let built = build_space(&base, params, args.n_particles, &caps)?;

    let out: Box<dyn Write> = match &args.common.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut out = std::io::BufWriter::new(out);

    match args.what {
        ExportWhat::ConfigSpace => bin_io::write_config_space(&mut out, &built.space)?,
        _ => {
            let field = match &args.field_file {
                Some(path) => Some(parse_field(path, base.n_vertices())?),
                None => None,
            };
            let ops = config::assemble(
                &built.space,
                &built.edges,
                &built.pot,
                delta,
                field.as_deref(),
                &caps,
            )?;
            let mat = match args.what {
                ExportWhat::Adjacency => ops.adjacency.clone(),
                ExportWhat::Degree => {
                    SparseSym::from_sym_parts(ops.degree.len(), &ops.degree, &[])
                }
                ExportWhat::NegLaplacian => ops.neg_laplacian(),
                ExportWhat::Hamiltonian => ops.hamiltonian.clone(),
                ExportWhat::ConfigSpace => unreachable!(),
            };
            bin_io::write_operator(&mut out, &mat)?;
        }
    }
    out.flush()?;
    Ok(0)
}
