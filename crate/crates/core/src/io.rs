//! Serialization of configuration spaces and assembled operators.
//!
//! File layout: a single-line JSON header (UTF-8, `\n`-terminated) followed
//! by a little-endian binary payload.
//!
//! - kind `"config-space"`: header carries M, N, the site count, the
//!   configuration count, and the base graph's canonical edge list; the
//!   payload is the occupation table, `n_configs × n_sites` bytes in
//!   lexicographic order.
//! - kind `"sparse-symmetric"`: header carries the dimension and the stored
//!   triplet count; the payload is a stream of `(row: u64, col: u64,
//!   value: f64)` triplets, 24 bytes each, rows ascending.

use crate::config::ConfigSpace;
use crate::error::{Error, Result};
use crate::lattice::BaseGraph;
use crate::sparse::SparseSym;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

const FORMAT: &str = "spingap";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    config_space: Option<ConfigSpaceHeader>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<OperatorHeader>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigSpaceHeader {
    max_occ: usize,
    n_particles: usize,
    n_sites: usize,
    n_configs: usize,
    edges: Vec<(u32, u32)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorHeader {
    dim: usize,
    nnz: usize,
}

fn write_header(w: &mut impl Write, header: &Header) -> Result<()> {
    let line = serde_json::to_string(header)?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

fn read_header(r: &mut impl BufRead) -> Result<Header> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: Header = serde_json::from_str(line.trim_end())?;
    if header.format != FORMAT {
        return Err(Error::Parse(format!("unknown format `{}`", header.format)));
    }
    if header.version != VERSION {
        return Err(Error::Parse(format!(
            "unsupported version {} (expected {VERSION})",
            header.version
        )));
    }
    Ok(header)
}

pub fn write_config_space(w: &mut impl Write, space: &ConfigSpace) -> Result<()> {
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
        kind: "config-space".into(),
        config_space: Some(ConfigSpaceHeader {
            max_occ: space.max_occ(),
            n_particles: space.n_particles(),
            n_sites: space.n_sites(),
            n_configs: space.len(),
            edges: space.base().edges().to_vec(),
        }),
        operator: None,
    };
    write_header(w, &header)?;
    for occ in space.iter() {
        w.write_all(occ)?;
    }
    Ok(())
}

pub fn read_config_space(r: &mut impl BufRead) -> Result<ConfigSpace> {
    let header = read_header(r)?;
    let cs = header
        .config_space
        .ok_or_else(|| Error::Parse("header is not a config-space".into()))?;
    let base = BaseGraph::from_edge_list(&cs.edges)?;
    if base.n_vertices() != cs.n_sites {
        return Err(Error::Parse(format!(
            "edge list spans {} sites, header says {}",
            base.n_vertices(),
            cs.n_sites
        )));
    }
    let mut occupations = vec![0u8; cs.n_configs * cs.n_sites];
    r.read_exact(&mut occupations)?;
    ConfigSpace::from_raw_parts(base, cs.max_occ, cs.n_particles, occupations)
}

pub fn write_operator(w: &mut impl Write, mat: &SparseSym) -> Result<()> {
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
        kind: "sparse-symmetric".into(),
        config_space: None,
        operator: Some(OperatorHeader {
            dim: mat.dim(),
            nnz: mat.nnz(),
        }),
    };
    write_header(w, &header)?;
    for r in 0..mat.dim() {
        for (c, v) in mat.row(r) {
            w.write_all(&(r as u64).to_le_bytes())?;
            w.write_all(&(c as u64).to_le_bytes())?;
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_operator(r: &mut impl BufRead) -> Result<SparseSym> {
    let header = read_header(r)?;
    let op = header
        .operator
        .ok_or_else(|| Error::Parse("header is not a sparse-symmetric operator".into()))?;
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); op.dim];
    let mut buf = [0u8; 24];
    for _ in 0..op.nnz {
        r.read_exact(&mut buf)?;
        let row = u64::from_le_bytes(buf[0..8].try_into().unwrap()) as usize;
        let col = u64::from_le_bytes(buf[8..16].try_into().unwrap());
        let val = f64::from_le_bytes(buf[16..24].try_into().unwrap());
        if row >= op.dim || col as usize >= op.dim {
            return Err(Error::Parse(format!("triplet ({row},{col}) out of range")));
        }
        rows[row].push((col as u32, val));
    }
    let mat = SparseSym::from_rows(rows);
    if mat.nnz() != op.nnz {
        return Err(Error::Parse(
            "duplicate triplets collapsed; stream is not canonical".into(),
        ));
    }
    Ok(mat)
}
