//! Small dense linear-algebra helpers shared by the oracles: generic complex
//! eigenvalues via the Schur form, and multiset matching of spectra.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues of a general dense complex matrix, by Schur decomposition.
/// No structure is assumed; this is the generic oracle the closed forms are
/// checked against.
pub fn complex_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 200 * n.max(25))
        .ok_or(Error::EigenFailed { n })?;
    let t = schur.unpack().1;
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Eigenvalues of a dense real matrix as complex numbers, sorted by
/// (re, im).
pub fn real_matrix_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    let mut eigs: Vec<Complex64> = m
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex::new(z.re, z.im))
        .collect();
    sort_complex(&mut eigs);
    eigs
}

/// Sorts complex values by (re, im); the crate's canonical spectrum order.
pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("non-NaN eigenvalues")
    });
}

/// Maximum pairwise distance after matching `a` against `b` as multisets.
///
/// Exhaustive over permutations for n ≤ 6 (exact), greedy nearest-neighbour
/// beyond that (adequate when the matching distance is far below the
/// spectral gaps, as in every oracle here). Returns `None` on length
/// mismatch.
pub fn multiset_match_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some(0.0);
    }
    if n <= 6 {
        let mut idx: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut idx, 0, &mut |perm| {
            let d = perm
                .iter()
                .enumerate()
                .map(|(i, &j)| (a[i] - b[j]).norm())
                .fold(0.0f64, f64::max);
            if d < best {
                best = d;
            }
        });
        return Some(best);
    }
    let mut used = vec![false; n];
    let mut worst = 0.0f64;
    for x in a {
        let mut bi = usize::MAX;
        let mut bd = f64::INFINITY;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < bd {
                    bd = d;
                    bi = j;
                }
            }
        }
        used[bi] = true;
        worst = worst.max(bd);
    }
    Some(worst)
}

fn permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}
