//! Phase-I revised simplex with Bland's rule, over exact rationals or `f64`.
//!
//! Solves `A p = b, p >= 0` for a feasible `p`. Entering and leaving choices
//! are the smallest eligible indices, so the returned point is a function of
//! the column order alone.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Sign, with a tolerance for inexact types.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Pivot tolerance for floating point solves.
pub const F64_TOL: f64 = 1e-12;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if *self > F64_TOL {
            Ordering::Greater
        } else if *self < -F64_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| {
            if x.sign() == Ordering::Equal || y.sign() == Ordering::Equal {
                acc
            } else {
                acc.add(&x.mul(y))
            }
        })
}

/// Upper bound on pivots before giving up.
const MAX_PIVOTS: usize = 1_000_000;

/// A feasible `p >= 0` with `sum_j p_j cols[j] = b`, or `None`.
pub fn feasible_point<T: Scalar>(cols: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let m = b.len();
    let ncols = cols.len();
    let flip: Vec<bool> = b.iter().map(|x| x.sign() == Ordering::Less).collect();
    let signed = |v: &T, i: usize| {
        if flip[i] {
            T::zero().sub(v)
        } else {
            v.clone()
        }
    };
    let a: Vec<Vec<T>> = cols
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, v)| signed(v, i)).collect())
        .collect();
    let mut xb: Vec<T> = b.iter().enumerate().map(|(i, v)| signed(v, i)).collect();
    let mut basis: Vec<usize> = (ncols..ncols + m).collect();
    let mut binv: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { T::one() } else { T::zero() }).collect())
        .collect();

    for _ in 0..MAX_PIVOTS {
        let mut y = vec![T::zero(); m];
        for (i, &bi) in basis.iter().enumerate() {
            if bi >= ncols {
                for k in 0..m {
                    y[k] = y[k].add(&binv[i][k]);
                }
            }
        }
        let Some(j) = (0..ncols).find(|&j| dot(&y, &a[j]).sign() == Ordering::Greater) else {
            break;
        };
        let u: Vec<T> = binv.iter().map(|row| dot(row, &a[j])).collect();
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if u[i].sign() != Ordering::Greater {
                continue;
            }
            let ratio = xb[i].div(&u[i]);
            leave = match leave {
                None => Some((i, ratio)),
                Some((l, best)) => match ratio.sub(&best).sign() {
                    Ordering::Less => Some((i, ratio)),
                    Ordering::Equal if basis[i] < basis[l] => Some((i, ratio)),
                    _ => Some((l, best)),
                },
            };
        }
        // the phase-I objective is bounded below, so some row must leave
        let (l, theta) = leave?;
        for i in 0..m {
            if i != l {
                xb[i] = xb[i].sub(&theta.mul(&u[i]));
            }
        }
        xb[l] = theta;
        let piv = u[l].clone();
        let prow: Vec<T> = binv[l].iter().map(|v| v.div(&piv)).collect();
        for i in 0..m {
            if i != l && u[i].sign() != Ordering::Equal {
                let f = u[i].clone();
                for k in 0..m {
                    binv[i][k] = binv[i][k].sub(&f.mul(&prow[k]));
                }
            }
        }
        binv[l] = prow;
        basis[l] = j;
    }

    let residual = basis
        .iter()
        .zip(&xb)
        .filter(|(&bi, _)| bi >= ncols)
        .fold(T::zero(), |acc, (_, v)| acc.add(v));
    if residual.sign() == Ordering::Greater {
        return None;
    }
    let mut p = vec![T::zero(); ncols];
    for (&bi, v) in basis.iter().zip(xb) {
        if bi < ncols {
            p[bi] = v;
        }
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn midpoint_of_a_segment() {
        let cols = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let p = feasible_point(&cols, &[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(p, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn infeasible_target() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(feasible_point(&cols, &[-0.5, 1.5]).is_none());
    }

    #[test]
    fn redundant_rows_are_harmless() {
        // the second row repeats the first
        let cols = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        let p = feasible_point(&cols, &[q(2, 1), q(2, 1)]).unwrap();
        let lhs = &p[0] + &(&p[1] * q(2, 1));
        assert_eq!(lhs, q(2, 1));
    }

    #[test]
    fn float_and_exact_agree() {
        let cols = vec![
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1)],
            vec![q(1, 3), q(1, 3), q(1, 3)],
        ];
        let b = [q(1, 2), q(1, 4), q(1, 4)];
        let pe = feasible_point(&cols, &b).unwrap();
        let cf: Vec<Vec<f64>> = cols.iter().map(|c| c.iter().map(Scalar::to_f64).collect()).collect();
        let bf: Vec<f64> = b.iter().map(Scalar::to_f64).collect();
        let pf = feasible_point(&cf, &bf).unwrap();
        for (x, y) in pe.iter().zip(&pf) {
            assert!((Scalar::to_f64(x) - y).abs() < 1e-12);
        }
    }
}
