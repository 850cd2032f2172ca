//! Double description over the integers for pointed cones `{w : R w >= 0}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::PolytopeError;
use crate::exact_arith::rational;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<i128>,
    zeros: Bits,
}

fn dot(row: &[i64], v: &[i128]) -> Result<i128, PolytopeError> {
    let mut acc: i128 = 0;
    for (a, b) in row.iter().zip(v) {
        if *a == 0 || *b == 0 {
            continue;
        }
        acc = (*a as i128)
            .checked_mul(*b)
            .and_then(|t| acc.checked_add(t))
            .ok_or(PolytopeError::Overflow)?;
    }
    Ok(acc)
}

fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

/// Maximal linearly independent subset of rows, greedily in order.
fn independent_rows(rows: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(row.iter().map(|&x| BigRational::from_integer(x.into())).collect());
        if rational::rank(&trial) > basis.len() {
            basis = trial;
            picked.push(i);
            if picked.len() == dim {
                break;
            }
        }
    }
    picked
}

/// Extreme rays of the pointed cone `{w in R^dim : row . w >= 0}` as
/// primitive integer vectors, sorted lexicographically.
pub fn extreme_rays(rows: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i128>>, PolytopeError> {
    let basis = independent_rows(rows, dim);
    if basis.len() < dim {
        return Err(PolytopeError::Unbounded);
    }
    // Initial simplicial cone: the columns of B^{-1}.
    let m: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut rays = Vec::with_capacity(dim);
    for k in 0..dim {
        let aug: Vec<Vec<BigRational>> = m
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                r.push(if i == k { BigRational::one() } else { BigRational::zero() });
                r
            })
            .collect();
        let col = rational::solve_augmented(aug).ok_or(PolytopeError::Unbounded)?;
        let mut zeros = Bits::new(rows.len());
        for (i, &bi) in basis.iter().enumerate() {
            if i != k {
                zeros.set(bi);
            }
        }
        rays.push(Ray {
            v: integer_vector(&col)?,
            zeros,
        });
    }
    let mut done = vec![false; rows.len()];
    for &b in &basis {
        done[b] = true;
    }
    for (h, row) in rows.iter().enumerate() {
        if done[h] {
            continue;
        }
        done[h] = true;
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| dot(row, &r.v))
            .collect::<Result<_, _>>()?;
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if minus.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i] == 0 {
                    r.zeros.set(h);
                }
            }
            continue;
        }
        let need = dim.saturating_sub(2) as u32;
        let fresh: Vec<Ray> = plus
            .par_iter()
            .map(|&p| {
                let mut out = Vec::new();
                for &q in &minus {
                    let common = rays[p].zeros.and(&rays[q].zeros);
                    if common.count() < need {
                        continue;
                    }
                    let blocked = rays.iter().enumerate().any(|(t, r)| {
                        t != p && t != q && r.zeros.contains(&common)
                    });
                    if blocked {
                        continue;
                    }
                    let (vp, vq) = (vals[p], -vals[q]);
                    let mut v = Vec::with_capacity(dim);
                    for (a, b) in rays[p].v.iter().zip(&rays[q].v) {
                        let t = vp
                            .checked_mul(*b)
                            .and_then(|x| vq.checked_mul(*a).and_then(|y| x.checked_add(y)))
                            .ok_or(PolytopeError::Overflow)?;
                        v.push(t);
                    }
                    let mut zeros = common;
                    zeros.set(h);
                    out.push(Ray {
                        v: primitive(v),
                        zeros,
                    });
                }
                Ok(out)
            })
            .collect::<Result<Vec<Vec<Ray>>, PolytopeError>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i] > 0 {
                next.push(r);
            } else if vals[i] == 0 {
                r.zeros.set(h);
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn integer_vector(q: &[BigRational]) -> Result<Vec<i128>, PolytopeError> {
    let mut lcm = BigInt::one();
    for v in q {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<BigInt> = q.iter().map(|v| (v * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|v| {
            let x = if g.is_zero() { v.clone() } else { v / &g };
            x.to_i128().ok_or(PolytopeError::Overflow)
        })
        .collect()
}

/// Extreme rays by exhaustive search over `dim - 1` subsets of rows whose
/// common kernel is a line. Only for small instances.
pub fn brute_force_rays(rows: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i128>>, PolytopeError> {
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut out = Vec::new();
    let k = dim - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    if k > rows.len() {
        return Ok(out);
    }
    loop {
        let sub: Vec<Vec<BigRational>> = idx.iter().map(|&i| q[i].clone()).collect();
        let ns = rational::null_space(&sub, dim);
        if ns.len() == 1 {
            for sign in [1i64, -1] {
                let v: Vec<BigRational> = ns[0]
                    .iter()
                    .map(|x| x * BigRational::from_integer(sign.into()))
                    .collect();
                let feasible = q.iter().all(|r| {
                    let s: BigRational = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                    !s.is_negative()
                });
                if feasible {
                    out.push(integer_vector(&v)?);
                }
            }
        }
        let n = rows.len();
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            out.sort();
            out.dedup();
            return Ok(out);
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_cone() {
        // cone over the unit square: 0 <= x <= t, 0 <= y <= t
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]];
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays.len(), 4);
        assert_eq!(rays, brute_force_rays(&rows, 3).unwrap());
        assert!(rays.contains(&vec![1, 1, 1]));
    }

    #[test]
    fn unbounded_is_reported() {
        let rows = vec![vec![1, 0, 0], vec![1, 1, 0]];
        assert!(extreme_rays(&rows, 3).is_err());
    }
}
