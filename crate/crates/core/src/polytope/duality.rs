//! Polar duality and dilation in the affine space of trace-one Hermitian
//! operators, in character coordinates.
//!
//! For trace-one `X`, `Y` we have `Tr(XY) = d^n sum_c w_c(X) w_c(Y)`, so the
//! dual `M* = {Y : Tr(XY) >= 0 for X in M}` of a finite set is the cone cut
//! out by the rows `w(X)`, intersected with `sum_c w_c = 1`. The maximally
//! mixed state has `w_c = d^{-2n}` for every `c`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{dd, integer_row, LambdaHRep, Operator, PolytopeError, VertexSet};
use crate::exact_arith::CycNumber;
use crate::pauli::PhaseSpace;
use crate::stabilizer::{projector, IsotropicSubgroup, ValueAssignment};

/// Vertices of `{Y in Herm_1 : Tr(P Y) >= 0 for P in points}`, sorted.
pub fn polar_dual_vertices(
    space: &PhaseSpace,
    points: &[Vec<BigRational>],
) -> Result<Vec<Vec<BigRational>>, PolytopeError> {
    let rows: Vec<Vec<i64>> = points.iter().map(|p| integer_row(p)).collect();
    let rays = dd::extreme_rays(&rows, space.size())?;
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let s: i128 = r.iter().sum();
        if s <= 0 {
            return Err(PolytopeError::Unbounded);
        }
        out.push(
            r.iter()
                .map(|&x| BigRational::new(x.into(), s.into()))
                .collect(),
        );
    }
    out.sort();
    Ok(out)
}

/// `c . M = {1/d^n + c pi(X) : X in M}` with `pi(X) = X - 1/d^n`.
pub fn dilate(points: &[Vec<BigRational>], c: &BigRational) -> Vec<Vec<BigRational>> {
    points
        .iter()
        .map(|p| {
            let u = BigRational::new(1.into(), (p.len() as i64).into());
            p.iter().map(|x| &u + c * (x - &u)).collect()
        })
        .collect()
}

fn as_set(v: &[Vec<BigRational>]) -> BTreeSet<Vec<BigRational>> {
    v.iter().cloned().collect()
}

/// Outcome of the duality and dilation identities.
#[derive(Debug, Clone, Default)]
pub struct DualityReport {
    /// Vertices of `SP*` coincide with the given vertex set of `Lambda`.
    pub lambda_is_sp_dual: Option<bool>,
    /// Vertices of `Lambda*` are exactly the pure stabilizer states.
    pub sp_is_lambda_dual: Option<bool>,
    /// The Wigner simplex `conv{A_c}` is its own dual.
    pub simplex_self_dual: bool,
    /// `(c, (c.M)* == (1/c).M*)` on the Wigner simplex.
    pub dilation: Vec<(BigRational, bool)>,
    /// Common value of `Tr(A_c A_c)`; off-diagonal traces vanish when
    /// `wigner_gram_ok`.
    pub wigner_gram_scale: Option<BigRational>,
    pub wigner_gram_ok: bool,
    /// Inclusion-exclusion expansion of every `A_c` over a cover of `E` by
    /// cyclic subgroups (one qudit only).
    pub inclusion_exclusion: Option<bool>,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn unit(size: usize, c: usize) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); size];
    e[c] = BigRational::one();
    e
}

/// Runs the duality and dilation identities. The double-dual checks need a
/// vertex set of `Lambda` and are skipped without one.
pub fn duality_dilation_check(
    h: &LambdaHRep,
    vertices: Option<&VertexSet>,
) -> Result<DualityReport, PolytopeError> {
    let space = h.space();
    let size = space.size();
    let mut rep = DualityReport::default();

    if let Some(v) = vertices {
        let states: Vec<Vec<BigRational>> = h
            .states()
            .iter()
            .map(|s| {
                Operator::from_projector(s)
                    .w_rational()
                    .ok_or(PolytopeError::NonRationalFacets(space.d()))
            })
            .collect::<Result<_, _>>()?;
        let verts: Vec<Vec<BigRational>> = (0..v.len()).map(|a| v.w(a)).collect();
        let sp_dual = polar_dual_vertices(space, &states)?;
        let ok = as_set(&sp_dual) == as_set(&verts);
        rep.lambda_is_sp_dual = Some(ok);
        if !ok {
            rep.failures.push(format!(
                "SP* has {} vertices, the vertex set has {}",
                sp_dual.len(),
                verts.len()
            ));
        }
        let lambda_dual = polar_dual_vertices(space, &verts)?;
        let ok = as_set(&lambda_dual) == as_set(&states);
        rep.sp_is_lambda_dual = Some(ok);
        if !ok {
            rep.failures.push(format!(
                "Lambda* has {} vertices, there are {} stabilizer states",
                lambda_dual.len(),
                states.len()
            ));
        }
    }

    let simplex: Vec<Vec<BigRational>> = (0..size).map(|c| unit(size, c)).collect();
    let dual = polar_dual_vertices(space, &simplex)?;
    rep.simplex_self_dual = as_set(&dual) == as_set(&simplex);
    if !rep.simplex_self_dual {
        rep.failures.push("Wigner simplex is not self-dual".into());
    }
    for c in [
        BigRational::new(1.into(), 2.into()),
        BigRational::one(),
        BigRational::from_integer(2.into()),
    ] {
        let lhs = polar_dual_vertices(space, &dilate(&simplex, &c))?;
        let rhs = dilate(&dual, &c.recip());
        let ok = as_set(&lhs) == as_set(&rhs);
        if !ok {
            rep.failures.push(format!("dilation identity fails at c = {c}"));
        }
        rep.dilation.push((c, ok));
    }

    let mats: Vec<_> = (0..size)
        .map(|c| Operator::from_w(space, &unit(size, c)).to_matrix())
        .collect();
    let mut scale: Option<CycNumber> = None;
    let mut gram_ok = true;
    for (i, a) in mats.iter().enumerate() {
        for (j, b) in mats.iter().enumerate() {
            let t = a.mul(b).trace();
            if i == j {
                match &scale {
                    None => scale = Some(t),
                    Some(s) if *s != t => gram_ok = false,
                    _ => {}
                }
            } else if !t.is_zero() {
                gram_ok = false;
            }
        }
    }
    rep.wigner_gram_ok = gram_ok;
    rep.wigner_gram_scale = scale.and_then(|s| s.to_rational());
    if !gram_ok {
        rep.failures.push("Tr(A_c A_c') is not diagonal with constant diagonal".into());
    }

    if space.n() == 1 {
        let ok = inclusion_exclusion(space)?;
        rep.inclusion_exclusion = Some(ok);
        if !ok {
            rep.failures.push("inclusion-exclusion expansion of A_c fails".into());
        }
    }
    Ok(rep)
}

/// Checks `A_c = d^{-n} sum_{S nonempty} (-1)^{|S|+1} |L_S| Pi_{L_S}^{r}` where
/// `L_S` is the intersection of the cyclic subgroups indexed by `S` in a
/// cover of `E` and `r(b) = -[c, b]`, so that `omega^{-r(b)} = omega^{[c,b]}`.
fn inclusion_exclusion(space: &PhaseSpace) -> Result<bool, PolytopeError> {
    let size = space.size();
    let d = space.d();
    let cyclic: Vec<Vec<usize>> = (1..size).map(|a| space.span(&[a])).collect();
    let mut lines: Vec<Vec<usize>> = cyclic
        .iter()
        .filter(|l| {
            !cyclic
                .iter()
                .any(|m| m.len() > l.len() && l.iter().all(|x| m.binary_search(x).is_ok()))
        })
        .cloned()
        .collect();
    lines.sort();
    lines.dedup();
    let k = lines.len();
    if k > 20 {
        return Err(PolytopeError::Guard { size, limit: 20 });
    }
    for c in 0..size {
        let mut acc = vec![CycNumber::zero(space.order()); size];
        for mask in 1u32..(1 << k) {
            let mut inter: Vec<usize> = (0..size).collect();
            for (i, l) in lines.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    inter.retain(|x| l.binary_search(x).is_ok());
                }
            }
            let group = IsotropicSubgroup::generated_by(space, &inter)?;
            let r = ValueAssignment::from_pairs(
                inter
                    .iter()
                    .map(|&b| (b, (d - space.symp(c, b)) % d))
                    .collect(),
            );
            let p = Operator::from_projector(&projector(&group, &r)?);
            let f = BigRational::new(
                (group.order() as i64 * if mask.count_ones() % 2 == 1 { 1 } else { -1 }).into(),
                (space.dim() as i64).into(),
            );
            for (x, y) in acc.iter_mut().zip(p.coeffs()) {
                if !y.is_zero() {
                    *x = &*x + &y.scale(&f);
                }
            }
        }
        if Operator::from_coeffs(space, acc) != Operator::from_w(space, &unit(size, c)) {
            return Ok(false);
        }
    }
    Ok(true)
}
