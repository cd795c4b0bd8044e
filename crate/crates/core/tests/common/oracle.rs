//! Dense rational row reduction, used as an independent oracle for the tables.

use geoprove_core::ar::{Terms, R};
use num_traits::Zero;

/// Row-reduces `m` in place; returns the pivot column of each nonzero row.
pub fn rref(m: &mut Vec<Vec<R>>) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c];
                for j in 0..cols {
                    let d = k * m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<R>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn dense(terms: &Terms, c: R, n: usize) -> Vec<R> {
    let mut v = vec![R::zero(); n + 1];
    for (s, k) in terms {
        v[*s as usize] = *k;
    }
    v[n] = c;
    v
}

pub fn coeffs_only(rows: &[Vec<R>]) -> Vec<Vec<R>> {
    rows.iter().map(|r| r[..r.len() - 1].to_vec()).collect()
}

/// Whether `rows` (augmented, consistent) imply `target`.
pub fn oracle_implies(rows: &[Vec<R>], target: &[R]) -> bool {
    let mut with = rows.to_vec();
    with.push(target.to_vec());
    rank(rows) == rank(&with)
}

/// Basis of implied relations `u x_i + w x_j = v`, computed by eliminating every
/// other symbol first.
pub fn oracle_pair(rows: &[Vec<R>], n: usize, i: usize, j: usize) -> Vec<[R; 3]> {
    let mut order: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    order.extend([i, j, n]);
    let mut m: Vec<Vec<R>> = rows.iter().map(|r| order.iter().map(|&k| r[k]).collect()).collect();
    let pivots = rref(&mut m);
    m.iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= n - 2)
        .map(|(r, _)| [r[n - 2], r[n - 1], r[n]])
        .collect()
}

pub fn span(vs: &[[R; 3]]) -> Vec<Vec<R>> {
    let mut m: Vec<Vec<R>> = vs.iter().map(|v| v.to_vec()).collect();
    rref(&mut m);
    m
}

pub fn q(p: i64, d: i64) -> R {
    R::new(p as i128, d as i128)
}

