//! Finite base graphs: paths, cycles, strips, cylinders, and edge lists.
//!
//! The infinite graphs of interest (the chain Z and the strip Z × {1..L})
//! are approximated by cycles and cylinders, periodic in the Z direction.
//! Periodicity preserves translation invariance, so every droplet sits in
//! "bulk" conditions and the minimizer counts of the droplet analysis hold
//! verbatim at finite size; open paths and strips exist for the equivalence
//! tests, which hold on any finite connected graph.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// A finite connected graph with a canonical edge list.
///
/// Edges are stored as `(min, max)` pairs, globally sorted and duplicate-free,
/// so two construction paths for the same graph produce identical
/// serializations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    n_vertices: usize,
    edges: Vec<(u32, u32)>,
    /// For strips: per-vertex (z, ell) coordinates.
    labels: Option<Vec<(i64, i64)>>,
}

impl BaseGraph {
    /// Open path on `n` vertices, edges {i, i+1}.
    pub fn path(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSize("path needs at least 1 vertex".into()));
        }
        let edges = (0..n.saturating_sub(1))
            .map(|i| (i as u32, (i + 1) as u32))
            .collect();
        Self::from_parts(n, edges, None)
    }

    /// Cycle on `n ≥ 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize(format!("cycle needs n >= 3 vertices, got {n}")));
        }
        let mut edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i as u32, (i + 1) as u32)).collect();
        edges.push((0, (n - 1) as u32));
        Self::from_parts(n, edges, None)
    }

    /// Strip of length `n` and width `l`: vertices (z, ell) with
    /// z in 0..n, ell in 0..l, adjacent when |z₁−z₂| + |ell₁−ell₂| = 1.
    /// With `periodic` the z direction wraps (a cylinder).
    pub fn strip(n: usize, l: usize, periodic: bool) -> Result<Self> {
        if n < 2 || l < 2 {
            return Err(Error::InvalidSize(format!(
                "strip needs n >= 2 and l >= 2, got n={n}, l={l}"
            )));
        }
        if periodic && n < 3 {
            return Err(Error::InvalidSize(format!(
                "periodic strip needs n >= 3 rings, got {n}"
            )));
        }
        let idx = |z: usize, ell: usize| (z * l + ell) as u32;
        let mut edges = Vec::new();
        let mut labels = Vec::with_capacity(n * l);
        for z in 0..n {
            for ell in 0..l {
                labels.push((z as i64, ell as i64));
                if ell + 1 < l {
                    edges.push((idx(z, ell), idx(z, ell + 1)));
                }
                if z + 1 < n {
                    edges.push((idx(z, ell), idx(z + 1, ell)));
                } else if periodic {
                    edges.push((idx(z, ell), idx(0, ell)));
                }
            }
        }
        Self::from_parts(n * l, edges, Some(labels))
    }

    /// Cylinder: strip periodic in the z direction.
    pub fn cylinder(n: usize, l: usize) -> Result<Self> {
        Self::strip(n, l, true)
    }

    /// Build from an explicit edge list; the vertex count is inferred as
    /// max index + 1. Rejects self-loops, duplicates, and disconnected graphs.
    pub fn from_edge_list(pairs: &[(u32, u32)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSize("edge list is empty".into()));
        }
        let n = pairs.iter().map(|&(a, b)| a.max(b)).max().unwrap() as usize + 1;
        Self::from_parts(n, pairs.to_vec(), None)
    }

    fn from_parts(
        n_vertices: usize,
        raw_edges: Vec<(u32, u32)>,
        labels: Option<Vec<(i64, i64)>>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &raw_edges {
            if a == b {
                return Err(Error::InvalidSize(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n_vertices || b as usize >= n_vertices {
                return Err(Error::InvalidSize(format!(
                    "edge ({a},{b}) out of range for {n_vertices} vertices"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidSize(format!("duplicate edge ({a},{b})")));
            }
        }
        let edges: Vec<(u32, u32)> = seen.into_iter().collect();
        let g = Self {
            n_vertices,
            edges,
            labels,
        };
        if !g.is_connected() {
            return Err(Error::DisconnectedGraph(format!(
                "{n_vertices} vertices, {} edges",
                g.edges.len()
            )));
        }
        Ok(g)
    }

    /// Parse the edge-list text format: one `u v` pair per line, 0-based
    /// integer ids, `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32> {
                tok.ok_or_else(|| Error::Parse(format!("line {}: expected `u v`", lineno + 1)))?
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: trailing tokens after `u v`",
                    lineno + 1
                )));
            }
            pairs.push((u, v));
        }
        Self::from_edge_list(&pairs)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[(i64, i64)]> {
        self.labels.as_deref()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n_vertices];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b as usize);
            adj[b as usize].push(a as usize);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n_vertices
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        let g = BaseGraph::cycle(4).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.n_edges(), 4);
        let mut deg = vec![0usize; 4];
        for &(a, b) in g.edges() {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
    }

    #[test]
    fn strip_counts() {
        // 2·(3−1) horizontal + 3 vertical = 7 edges on 6 vertices.
        let g = BaseGraph::strip(3, 2, false).unwrap();
        assert_eq!(g.n_vertices(), 6);
        assert_eq!(g.n_edges(), 7);
        // periodic: n·l ring edges + n·(l−1) rungs
        let c = BaseGraph::strip(8, 2, true).unwrap();
        assert_eq!(c.n_vertices(), 16);
        assert_eq!(c.n_edges(), 8 * 2 + 8);
    }

    #[test]
    fn strip_max_degree_interior() {
        let g = BaseGraph::strip(4, 3, false).unwrap();
        assert_eq!(g.max_degree(), 4);
        assert_eq!(BaseGraph::path(5).unwrap().max_degree(), 2);
    }

    #[test]
    fn triangle_from_edge_list() {
        let g = BaseGraph::from_edge_list(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn disconnected_rejected() {
        let err = BaseGraph::from_edge_list(&[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::DisconnectedGraph(_)));
    }

    #[test]
    fn duplicates_and_loops_rejected() {
        assert!(matches!(
            BaseGraph::from_edge_list(&[(0, 1), (1, 0)]),
            Err(Error::InvalidSize(_))
        ));
        assert!(matches!(
            BaseGraph::from_edge_list(&[(0, 0)]),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn canonical_edge_list_is_construction_independent() {
        let a = BaseGraph::path(4).unwrap();
        let b = BaseGraph::from_edge_list(&[(2, 3), (1, 0), (2, 1)]).unwrap();
        assert_eq!(a.edges(), b.edges());
        // cycle built from a shuffled edge list serializes identically
        let c = BaseGraph::cycle(5).unwrap();
        let d = BaseGraph::from_edge_list(&[(4, 0), (3, 4), (0, 1), (2, 1), (3, 2)]).unwrap();
        assert_eq!(c.edges(), d.edges());
    }

    #[test]
    fn parse_edge_list_format() {
        let text = "# triangle\n0 1\n1 2 # last\n\n2 0\n";
        let g = BaseGraph::parse_edge_list(text).unwrap();
        assert_eq!(g.n_edges(), 3);
        assert!(BaseGraph::parse_edge_list("0 1\n1").is_err());
        assert!(BaseGraph::parse_edge_list("0 1 2").is_err());
        let disc = BaseGraph::parse_edge_list("0 1\n2 3\n");
        assert!(matches!(disc, Err(Error::DisconnectedGraph(_))));
    }

    #[test]
    fn strip_labels_match_adjacency_rule() {
        let g = BaseGraph::strip(4, 3, false).unwrap();
        let labels = g.labels().unwrap();
        for &(a, b) in g.edges() {
            let (z1, l1) = labels[a as usize];
            let (z2, l2) = labels[b as usize];
            assert_eq!((z1 - z2).abs() + (l1 - l2).abs(), 1);
        }
    }
}
