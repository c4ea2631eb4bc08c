//! Row-compressed symmetric sparse matrices.
//!
//! Both triangles are stored explicitly, which keeps the mat-vec a single
//! forward pass over the rows. Assembly is canonical: rows ascending, column
//! indices sorted within each row, so two equal operators compare bit-exactly.

use nalgebra::DMatrix;

/// Symmetric sparse matrix in CSR layout with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    dim: usize,
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    val: Vec<f64>,
}

impl SparseSym {
    /// Build from a diagonal and an undirected off-diagonal edge list.
    ///
    /// Each `(i, j, v)` with `i != j` contributes the two entries `(i,j)` and
    /// `(j,i)`. Duplicate edges are summed.
    pub fn from_sym_parts(dim: usize, diag: &[f64], offdiag: &[(u32, u32, f64)]) -> Self {
        assert_eq!(diag.len(), dim);
        let mut counts = vec![0usize; dim];
        for &(i, j, _) in offdiag {
            assert!(i != j, "off-diagonal entry on the diagonal");
            counts[i as usize] += 1;
            counts[j as usize] += 1;
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut acc = 0usize;
        row_ptr.push(0);
        for r in 0..dim {
            acc += counts[r] + 1; // +1 for the diagonal slot
            row_ptr.push(acc);
        }
        let nnz = acc;
        let mut col = vec![0u32; nnz];
        let mut val = vec![0f64; nnz];
        let mut next = row_ptr[..dim].to_vec();
        for (r, &d) in diag.iter().enumerate() {
            col[next[r]] = r as u32;
            val[next[r]] = d;
            next[r] += 1;
        }
        for &(i, j, v) in offdiag {
            col[next[i as usize]] = j;
            val[next[i as usize]] = v;
            next[i as usize] += 1;
            col[next[j as usize]] = i;
            val[next[j as usize]] = v;
            next[j as usize] += 1;
        }
        let mut m = Self {
            dim,
            row_ptr,
            col,
            val,
        };
        m.sort_rows_and_compact();
        m
    }

    /// Build from per-row entry lists (columns may be unsorted; duplicates sum).
    pub fn from_rows(rows: Vec<Vec<(u32, f64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0usize);
        let mut col = Vec::new();
        let mut val = Vec::new();
        for entries in &rows {
            for &(c, v) in entries {
                col.push(c);
                val.push(v);
            }
            row_ptr.push(col.len());
        }
        let mut m = Self {
            dim,
            row_ptr,
            col,
            val,
        };
        m.sort_rows_and_compact();
        m
    }

    fn sort_rows_and_compact(&mut self) {
        let mut out_col = Vec::with_capacity(self.col.len());
        let mut out_val = Vec::with_capacity(self.val.len());
        let mut out_ptr = Vec::with_capacity(self.dim + 1);
        out_ptr.push(0usize);
        let mut scratch: Vec<(u32, f64)> = Vec::new();
        for r in 0..self.dim {
            scratch.clear();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                scratch.push((self.col[k], self.val[k]));
            }
            scratch.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut v = scratch[k].1;
                k += 1;
                while k < scratch.len() && scratch[k].0 == c {
                    v += scratch[k].1;
                    k += 1;
                }
                out_col.push(c);
                out_val.push(v);
            }
            out_ptr.push(out_col.len());
        }
        self.row_ptr = out_ptr;
        self.col = out_col;
        self.val = out_val;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.col.len()
    }

    /// Entries of row `r` as `(column, value)` pairs, columns ascending.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col[a..b]
            .iter()
            .zip(self.val[a..b].iter())
            .map(|(&c, &v)| (c, v))
    }

    /// y = A x.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            y[r] = acc;
        }
    }

    /// Y = A X for `b` right-hand sides stored row-major (`x[r*b + c]`).
    ///
    /// A single pass over the matrix serves all columns, which is what the
    /// block Krylov solver relies on.
    pub fn apply_block_rowmajor(&self, x: &[f64], b: usize, y: &mut [f64]) {
        assert_eq!(x.len(), self.dim * b);
        assert_eq!(y.len(), self.dim * b);
        let mut acc = vec![0.0f64; b];
        for r in 0..self.dim {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let v = self.val[k];
                let base = self.col[k] as usize * b;
                for (c, a) in acc.iter_mut().enumerate() {
                    *a += v * x[base + c];
                }
            }
            y[r * b..(r + 1) * b].copy_from_slice(&acc);
        }
    }

    /// Exact structural + value symmetry check (canonical layout makes the
    /// transpose comparison bit-exact).
    pub fn is_symmetric_exact(&self) -> bool {
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col[k] as usize;
                let v = self.val[k];
                match self.entry(c, r as u32) {
                    Some(w) if w.to_bits() == v.to_bits() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Value at `(r, c)` if stored.
    pub fn entry(&self, r: usize, c: u32) -> Option<f64> {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col[a..b]
            .binary_search(&c)
            .ok()
            .map(|k| self.val[a + k])
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c as usize)] += v;
            }
        }
        m
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.val.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The operator −A (same pattern, negated values).
    pub fn negated(&self) -> SparseSym {
        let mut out = self.clone();
        out.val.iter_mut().for_each(|v| *v = -*v);
        out
    }

    /// Largest absolute row sum. For a symmetric matrix this is the
    /// ℓ∞-induced norm, a rigorous upper bound on the spectral norm.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute entry-wise difference between two operators, including
    /// positions stored in only one of them.
    pub fn max_abs_diff(&self, other: &SparseSym) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            let a: Vec<(u32, f64)> = self.row(r).collect();
            let b: Vec<(u32, f64)> = other.row(r).collect();
            let (mut i, mut j) = (0usize, 0usize);
            while i < a.len() || j < b.len() {
                let d = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                    let d = a[i].1.abs();
                    i += 1;
                    d
                } else if i >= a.len() || b[j].0 < a[i].0 {
                    let d = b[j].1.abs();
                    j += 1;
                    d
                } else {
                    let d = (a[i].1 - b[j].1).abs();
                    i += 1;
                    j += 1;
                    d
                };
                worst = worst.max(d);
            }
        }
        worst
    }
}
