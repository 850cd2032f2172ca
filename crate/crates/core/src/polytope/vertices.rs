//! Vertex sets of `Lambda`: enumeration, exact certification and the
//! Clifford action on vertices.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{dd, integer_row, LambdaHRep, Operator, OperatorVector, PolytopeError};
use crate::exact_arith::{exact_rank, rational, CycNumber, Matrix};
use crate::pauli::{CliffordElement, PhaseSpace};

/// Largest `|E|` for which vertex enumeration is attempted.
pub const ENUMERATION_LIMIT: usize = 16;

/// Active facets of a vertex and the rank of their functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub active: Vec<usize>,
    pub rank: usize,
}

/// Why a candidate is not a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    TraceNotOne,
    Violated { facet: usize },
    RankDeficient { active: Vec<usize>, rank: usize },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::TraceNotOne => write!(f, "trace is not one"),
            Rejection::Violated { facet } => write!(f, "facet {facet} is violated"),
            Rejection::RankDeficient { active, rank } => {
                write!(f, "{} active facets of rank {rank}", active.len())
            }
        }
    }
}

/// Exact certificate on operator-vector coordinates: every overlap is
/// nonnegative and the active functionals have rank `d^{2n} - 1`, so the
/// active system has `X` as its unique trace-one solution.
pub fn certify_vertex(x: &OperatorVector, h: &LambdaHRep) -> Result<Certificate, Rejection> {
    if !x.trace().is_one() {
        return Err(Rejection::TraceNotOne);
    }
    let order = h.space().order();
    let mut active = Vec::new();
    let mut active_rows = Vec::new();
    for (k, row) in h.functional_rows().iter().enumerate() {
        let v = row
            .iter()
            .zip(x.coords())
            .fold(CycNumber::zero(order), |acc, (a, b)| &acc + &(a * b));
        if v.is_zero() {
            active.push(k);
            active_rows.push(row.clone());
        } else if v.real_sign().map(|s| s.is_lt()).unwrap_or(true) {
            return Err(Rejection::Violated { facet: k });
        }
    }
    let rank = if active_rows.is_empty() {
        0
    } else {
        exact_rank(&Matrix::from_rows(active_rows))
    };
    if rank + 1 != h.dim() {
        return Err(Rejection::RankDeficient { active, rank });
    }
    Ok(Certificate { active, rank })
}

const P61: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Rank modulo the prime `2^61 - 1`; never exceeds the rational rank.
fn rank_mod_p(rows: &[&Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(P61 as i64) as u64).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = powmod(m[rank][c], P61 - 2);
        let piv: Vec<u64> = m[rank].iter().map(|&x| mulmod(x, inv)).collect();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                row[k] = (row[k] + P61 - mulmod(f, piv[k])) % P61;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Certificate on integer character coordinates. The rank is computed
/// modulo a large prime first, which bounds the rational rank from below,
/// and exactly over the rationals only when that bound falls short.
pub fn certify_w(ray: &[i64], rows: &[Vec<i64>]) -> Result<Certificate, Rejection> {
    let dim = ray.len();
    let mut active = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let v: i128 = row.iter().zip(ray).map(|(a, b)| *a as i128 * *b as i128).sum();
        match v.signum() {
            0 => active.push(k),
            -1 => return Err(Rejection::Violated { facet: k }),
            _ => {}
        }
    }
    if ray.iter().map(|&x| x as i128).sum::<i128>() <= 0 {
        return Err(Rejection::TraceNotOne);
    }
    let sel: Vec<&Vec<i64>> = active.iter().map(|&k| &rows[k]).collect();
    let mut rank = rank_mod_p(&sel);
    if rank + 1 != dim {
        let q: Vec<Vec<BigRational>> = sel
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        rank = rational::rank(&q);
    }
    if rank + 1 != dim {
        return Err(Rejection::RankDeficient { active, rank });
    }
    Ok(Certificate { active, rank })
}

/// Certified vertices of `Lambda`, each stored as the primitive integer
/// multiple of its character coordinates.
#[derive(Debug, Clone)]
pub struct VertexSet {
    space: PhaseSpace,
    rays: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    certificates: Vec<Certificate>,
    rejected: Vec<(Vec<i64>, Rejection)>,
}

fn key_of_w(w: &[BigRational]) -> Vec<i64> {
    integer_row(w)
}

impl VertexSet {
    /// Certifies candidate rays against `h`, dropping the failures, and
    /// indexes the survivors in sorted order.
    pub fn from_rays(h: &LambdaHRep, rays: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        let rows = h.rows()?;
        let checked: Vec<(Vec<i64>, Result<Certificate, Rejection>)> = rays
            .into_par_iter()
            .map(|r| {
                let c = certify_w(&r, rows);
                (r, c)
            })
            .collect();
        let mut good = Vec::new();
        let mut rejected = Vec::new();
        for (r, c) in checked {
            match c {
                Ok(c) => good.push((r, c)),
                Err(e) => rejected.push((r, e)),
            }
        }
        good.sort_by(|a, b| a.0.cmp(&b.0));
        good.dedup_by(|a, b| a.0 == b.0);
        let index = good
            .iter()
            .enumerate()
            .map(|(i, (r, _))| (r.clone(), i))
            .collect();
        let (rays, certificates) = good.into_iter().unzip();
        Ok(VertexSet {
            space: h.space().clone(),
            rays,
            index,
            certificates,
            rejected,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Primitive integer ray of vertex `alpha`.
    pub fn ray(&self, alpha: usize) -> &[i64] {
        &self.rays[alpha]
    }

    pub fn certificate(&self, alpha: usize) -> &Certificate {
        &self.certificates[alpha]
    }

    /// Candidates that failed certification.
    pub fn rejected(&self) -> &[(Vec<i64>, Rejection)] {
        &self.rejected
    }

    /// Exact character coordinates, summing to one.
    pub fn w(&self, alpha: usize) -> Vec<BigRational> {
        let r = &self.rays[alpha];
        let s: i64 = r.iter().sum();
        r.iter()
            .map(|&x| BigRational::new(x.into(), s.into()))
            .collect()
    }

    pub fn w_f64(&self, alpha: usize) -> Vec<f64> {
        let r = &self.rays[alpha];
        let s: i64 = r.iter().sum();
        r.iter().map(|&x| x as f64 / s as f64).collect()
    }

    pub fn operator(&self, alpha: usize) -> Operator {
        Operator::from_w(&self.space, &self.w(alpha))
    }

    pub fn vector(&self, alpha: usize) -> OperatorVector {
        OperatorVector::from_operator(&self.operator(alpha))
    }

    pub fn lookup_w(&self, w: &[BigRational]) -> Option<usize> {
        if w.len() != self.space.size() || w.iter().all(Zero::is_zero) {
            return None;
        }
        self.index.get(&key_of_w(w)).copied()
    }

    pub fn lookup(&self, x: &Operator) -> Option<usize> {
        self.lookup_w(&x.w_rational()?)
    }

    pub fn lookup_ray(&self, ray: &[i64]) -> Option<usize> {
        self.index.get(ray).copied()
    }

    /// `U.alpha` for every vertex; fails if an image is missing.
    pub fn clifford_permutation(&self, map: &WLinearMap) -> Result<Vec<usize>, PolytopeError> {
        (0..self.len())
            .into_par_iter()
            .map(|a| self.clifford_update(a, map))
            .collect()
    }

    /// Index of `U A_alpha U^dag`.
    pub fn clifford_update(&self, alpha: usize, map: &WLinearMap) -> Result<usize, PolytopeError> {
        let img = map.apply(&self.rays[alpha])?;
        self.index
            .get(&img)
            .copied()
            .ok_or_else(|| PolytopeError::MissingVertex(format!("{img:?}")))
    }

    /// Orbits under the group generated by `maps`, each sorted, ordered by
    /// their smallest element.
    pub fn orbits(&self, maps: &[WLinearMap]) -> Result<Vec<Vec<usize>>, PolytopeError> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for m in maps {
            let perm = self.clifford_permutation(m)?;
            for (a, &b) in perm.iter().enumerate() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for a in 0..n {
            let r = find(&mut parent, a);
            groups.entry(r).or_default().push(a);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        Ok(out)
    }
}

/// A linear map on character coordinates with a common denominator:
/// `w' = m w / den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WLinearMap {
    m: Vec<Vec<i64>>,
    den: i64,
}

impl WLinearMap {
    /// Image of a ray, as a primitive ray.
    pub fn apply(&self, ray: &[i64]) -> Result<Vec<i64>, PolytopeError> {
        let v: Vec<BigRational> = self
            .m
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(ray).map(|(a, b)| *a as i128 * *b as i128).sum();
                BigRational::from_integer(s.into())
            })
            .collect();
        if v.iter().all(Zero::is_zero) {
            return Err(PolytopeError::Overflow);
        }
        Ok(key_of_w(&v))
    }

    pub fn apply_w(&self, w: &[BigRational]) -> Vec<BigRational> {
        let den = BigRational::from_integer(self.den.into());
        self.m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(w)
                    .map(|(a, b)| BigRational::from_integer((*a).into()) * b)
                    .sum::<BigRational>()
                    / &den
            })
            .collect()
    }
}

/// Conjugation by `u` on character coordinates.
pub fn clifford_w_map(space: &PhaseSpace, u: &CliffordElement) -> Result<WLinearMap, PolytopeError> {
    let size = space.size();
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(size);
    for c in 0..size {
        let mut e = vec![BigRational::zero(); size];
        e[c] = BigRational::from_integer(1.into());
        let img = Operator::from_w(space, &e).conjugate(u);
        cols.push(img.w_rational().ok_or(PolytopeError::NonRationalFacets(space.d()))?);
    }
    let mut den = num_bigint::BigInt::from(1);
    for col in &cols {
        for v in col {
            den = num_integer::Integer::lcm(&den, v.denom());
        }
    }
    let m = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    (&cols[j][i] * &den)
                        .to_integer()
                        .to_i64()
                        .ok_or(PolytopeError::Overflow)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WLinearMap {
        m,
        den: den.to_i64().ok_or(PolytopeError::Overflow)?,
    })
}

fn guard(h: &LambdaHRep) -> Result<(), PolytopeError> {
    if h.dim() > ENUMERATION_LIMIT {
        return Err(PolytopeError::Guard {
            size: h.dim(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn to_i64(rays: Vec<Vec<i128>>) -> Result<Vec<Vec<i64>>, PolytopeError> {
    rays.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| PolytopeError::Overflow))
                .collect()
        })
        .collect()
}

/// All vertices of `Lambda` by integer double description, each certified.
pub fn enumerate_vertices(h: &LambdaHRep) -> Result<VertexSet, PolytopeError> {
    guard(h)?;
    let rays = dd::extreme_rays(h.rows()?, h.dim())?;
    VertexSet::from_rays(h, to_i64(rays)?)
}

/// Upper bound on the number of row subsets tried by the brute-force search.
const BRUTE_FORCE_LIMIT: u128 = 2_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// All vertices by exhaustive search over active sets.
pub fn brute_force_vertices(h: &LambdaHRep) -> Result<VertexSet, PolytopeError> {
    guard(h)?;
    let rows = h.rows()?;
    if binomial(rows.len(), h.dim() - 1) > BRUTE_FORCE_LIMIT {
        return Err(PolytopeError::Guard {
            size: h.dim(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let rays = dd::brute_force_rays(rows, h.dim())?;
    VertexSet::from_rays(h, to_i64(rays)?)
}

#[cfg(test)]
mod tests {
    use super::super::lambda_hrep;
    use super::*;
    use crate::pauli::clifford_generators;

    #[test]
    fn qubit_cube() {
        let h = lambda_hrep(2, 1).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.len(), 8);
        assert!(v.rejected().is_empty());
        let b = brute_force_vertices(&h).unwrap();
        assert_eq!(v.rays, b.rays);
        for a in 0..v.len() {
            let op = v.operator(a);
            for k in 1..4 {
                let x = op.coeff(k);
                assert!(x.is_one() || (-x).is_one());
            }
            let cert = certify_vertex(&v.vector(a), &h).unwrap();
            assert_eq!(cert.active.len(), 3);
            assert_eq!(cert.rank, 3);
            assert_eq!(v.lookup(&op), Some(a));
        }
        let mixed = OperatorVector::from_operator(&Operator::maximally_mixed(h.space()));
        assert!(matches!(
            certify_vertex(&mixed, &h),
            Err(Rejection::RankDeficient { .. })
        ));
    }

    #[test]
    fn qutrit_brute_force_agrees() {
        let h = lambda_hrep(3, 1).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        let b = brute_force_vertices(&h).unwrap();
        assert_eq!(v.rays, b.rays);
        assert!(v.len() >= 81);
    }

    #[test]
    fn clifford_permutes_vertices() {
        let h = lambda_hrep(3, 1).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        let maps: Vec<WLinearMap> = clifford_generators(3, 1)
            .unwrap()
            .iter()
            .map(|u| clifford_w_map(h.space(), u).unwrap())
            .collect();
        for m in &maps {
            let mut p = v.clifford_permutation(m).unwrap();
            p.sort();
            assert_eq!(p, (0..v.len()).collect::<Vec<_>>());
        }
        let orbits = v.orbits(&maps).unwrap();
        assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), v.len());
    }

    #[test]
    fn w_map_matches_conjugation() {
        let s = PhaseSpace::new(2, 1).unwrap();
        let h = crate::pauli::named_gate(&s, "H", &[0]).unwrap();
        let map = clifford_w_map(&s, &h).unwrap();
        let mut x = vec![CycNumber::zero(4); 4];
        x[0] = CycNumber::one(4);
        x[1] = CycNumber::from_frac(4, 1, 3);
        x[2] = CycNumber::from_frac(4, -1, 5);
        let op = Operator::from_coeffs(&s, x);
        let w = op.w_rational().unwrap();
        assert_eq!(
            map.apply_w(&w),
            op.conjugate(&h).w_rational().unwrap()
        );
    }
}
