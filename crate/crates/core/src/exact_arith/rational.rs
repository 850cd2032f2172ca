//! Dense rational linear algebra.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solves a square system given as an augmented `n x (n+1)` matrix.
/// Returns `None` when the coefficient block is singular.
pub fn solve_augmented(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let (src, dst) = if r < col {
                let (a, b) = m.split_at_mut(col);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = m.split_at_mut(r);
                (&a[col], &mut b[0])
            };
            for c in col..=n {
                if !src[c].is_zero() {
                    dst[c] -= &f * &src[c];
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Row-reduces in place and returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..cols {
                if !pivot_row[k].is_zero() {
                    row[k] -= &f * &pivot_row[k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn null_space(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn solve_small_system() {
        let m = vec![vec![r(2), r(1), r(5)], vec![r(1), r(3), r(10)]];
        let x = solve_augmented(m).unwrap();
        assert_eq!(x, vec![r(1), r(3)]);
        assert!(solve_augmented(vec![vec![r(1), r(2), r(0)], vec![r(2), r(4), r(1)]]).is_none());
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ];
        assert_eq!(rank(&rows), 2);
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            let dot: BigRational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
