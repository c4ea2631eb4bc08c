//! Eigenvalue counting by sparse LDLᵀ inertia.
//!
//! Up-looking row factorization of `A − e·I` with the elimination tree
//! driving the per-row pattern (no reordering, no numerical pivoting). By
//! Sylvester's law the number of negative pivots equals the number of
//! eigenvalues below the shift. An indefinite shift can in principle hit a
//! zero pivot; by contract the caller keeps `e` away from eigenvalues, and a
//! pivot below the guard threshold aborts with `SingularShift` instead of
//! silently producing garbage.

use crate::error::{Error, Result};
use crate::sparse::SparseSym;

/// Exact number of eigenvalues of `mat` strictly below `e`, via the inertia
/// of the shifted factorization. `fill_cap` bounds the stored factor size.
pub fn inertia_below(mat: &SparseSym, e: f64, fill_cap: usize) -> Result<usize> {
    let n = mat.dim();
    let scale = mat.max_abs().max(e.abs()).max(1.0);
    let pivot_guard = 1e-13 * scale;

    let mut parent = vec![usize::MAX; n];
    let mut flag = vec![usize::MAX; n];
    // strictly-lower part of L, by column
    let mut cols: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut d = vec![0.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut pattern: Vec<usize> = Vec::new();
    let mut fill = 0usize;
    let mut negatives = 0usize;

    for k in 0..n {
        flag[k] = k;
        pattern.clear();
        let mut dk = -e;
        for (c, v) in mat.row(k) {
            let c = c as usize;
            if c > k {
                break; // columns ascending; upper triangle not needed
            }
            if c == k {
                dk += v;
                continue;
            }
            y[c] = v;
            // walk towards the root of the elimination tree, collecting the
            // not-yet-visited part of the path into the row pattern
            let mut i = c;
            while flag[i] != k {
                if parent[i] == usize::MAX {
                    parent[i] = k;
                }
                pattern.push(i);
                flag[i] = k;
                i = parent[i];
            }
        }
        // the sparse triangular solve must consume columns in ascending order
        pattern.sort_unstable();
        for &j in pattern.iter() {
            let yj = y[j];
            y[j] = 0.0;
            let lkj = yj / d[j];
            for &(i, lij) in &cols[j] {
                y[i as usize] -= lij * yj;
            }
            dk -= lkj * yj;
            cols[j].push((k as u32, lkj));
            fill += 1;
            if fill > fill_cap {
                return Err(Error::DimensionCap {
                    what: "ldl factor fill",
                    size: fill,
                    cap: fill_cap,
                });
            }
        }
        if dk.abs() < pivot_guard {
            return Err(Error::SingularShift {
                pivot_index: k,
                pivot: dk,
            });
        }
        if dk < 0.0 {
            negatives += 1;
        }
        d[k] = dk;
    }
    Ok(negatives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{count_below_dense, dense_spectrum};

    fn random_sparse(n: usize, seed: u64) -> SparseSym {
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) - 0.5
        };
        let mut diag = vec![0.0; n];
        for d in diag.iter_mut() {
            *d = next() * 3.0;
        }
        let mut offd = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if (i * 31 + j * 17) % 7 == 0 {
                    offd.push((i as u32, j as u32, next()));
                }
            }
        }
        SparseSym::from_sym_parts(n, &diag, &offd)
    }

    #[test]
    fn inertia_matches_dense_count() {
        for seed in [3u64, 11, 42] {
            let m = random_sparse(60, seed);
            let dense = m.to_dense();
            for e in [-3.0, -1.0, -0.2, 0.0, 0.4, 1.1, 3.5] {
                let want = count_below_dense(&dense, e).unwrap();
                let got = inertia_below(&m, e, usize::MAX).unwrap();
                assert_eq!(got, want, "seed={seed} e={e}");
            }
        }
    }

    #[test]
    fn inertia_matches_spectrum_count() {
        let m = random_sparse(48, 9);
        let s = dense_spectrum(&m.to_dense());
        for cut in [5usize, 20, 40] {
            let e = (s.eigenvalues[cut - 1] + s.eigenvalues[cut]) / 2.0;
            assert_eq!(inertia_below(&m, e, usize::MAX).unwrap(), cut);
        }
    }

    #[test]
    fn singular_shift_detected() {
        let m = SparseSym::from_sym_parts(3, &[1.0, 2.0, 3.0], &[]);
        let err = inertia_below(&m, 2.0, usize::MAX).unwrap_err();
        assert!(matches!(err, Error::SingularShift { .. }));
    }

    #[test]
    fn fill_cap_enforced() {
        let m = random_sparse(80, 5);
        let err = inertia_below(&m, 0.1, 10).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { .. }));
    }

    #[test]
    fn tridiagonal_has_no_fill() {
        let n = 50;
        let mut offd = Vec::new();
        for i in 0..n - 1 {
            offd.push((i as u32, (i + 1) as u32, -1.0));
        }
        let m = SparseSym::from_sym_parts(n, &vec![2.0; n], &offd);
        // factor fill of a tridiagonal is exactly n-1
        assert!(inertia_below(&m, 0.9, n - 1).is_ok());
        let dense = m.to_dense();
        for e in [0.3, 1.7, 3.9] {
            assert_eq!(
                inertia_below(&m, e, usize::MAX).unwrap(),
                count_below_dense(&dense, e).unwrap()
            );
        }
    }
}
