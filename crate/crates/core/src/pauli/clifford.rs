use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{PauliError, PhasePoint, PhaseSpace};
use crate::exact_arith::{ComplexMatrix, CycMatrix, CycNumber, Matrix};

/// A Clifford unitary `U = sqrt(scale_sq) * M` with its derived action
/// `U T_a U^dag = omega^{phase[a]} T_{sym[a]}`.
#[derive(Debug, Clone)]
pub struct CliffordElement {
    name: String,
    space: PhaseSpace,
    matrix: Arc<CycMatrix>,
    scale_sq: BigRational,
    sym: Arc<Vec<usize>>,
    phase: Arc<Vec<u32>>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, o: &Self) -> bool {
        self.space == o.space && self.sym == o.sym && self.phase == o.phase
    }
}

impl CliffordElement {
    /// Validates `sqrt(scale_sq) * matrix` as unitary and Pauli-normalizing,
    /// deriving the symplectic map and phases by exact conjugation on all of `E`.
    pub fn from_matrix(
        space: &PhaseSpace,
        name: impl Into<String>,
        matrix: CycMatrix,
        scale_sq: BigRational,
    ) -> Result<Self, PauliError> {
        let dim = space.dim();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(PauliError::WrongSize {
                got: matrix.rows().max(matrix.cols()),
                expected: dim,
            });
        }
        let order = space.order();
        let scale = CycNumber::from_rational(order, scale_sq.clone());
        if matrix.get(0, 0).order() != order {
            return Err(PauliError::NotUnitary);
        }
        let adj = matrix.adjoint();
        let gram = matrix.mul(&adj).scale(&scale);
        if gram != CycMatrix::identity(dim, &CycNumber::zero(order)) {
            return Err(PauliError::NotUnitary);
        }
        let size = space.size();
        let mut sym = vec![0usize; size];
        let mut phase = vec![0u32; size];
        let mut seen = vec![false; size];
        for a in 0..size {
            let c = matrix.mul(&space.pauli_matrix(a)).mul(&adj).scale(&scale);
            let (k, b) = match_pauli(space, &c).ok_or_else(|| PauliError::NotClifford {
                label: space.point(a).to_string(),
            })?;
            if seen[b] {
                return Err(PauliError::NotClifford {
                    label: space.point(a).to_string(),
                });
            }
            seen[b] = true;
            sym[a] = b;
            phase[a] = k;
        }
        Ok(CliffordElement {
            name: name.into(),
            space: space.clone(),
            matrix: Arc::new(matrix),
            scale_sq,
            sym: Arc::new(sym),
            phase: Arc::new(phase),
        })
    }

    pub fn identity(space: &PhaseSpace) -> Self {
        let size = space.size();
        CliffordElement {
            name: "I".into(),
            space: space.clone(),
            matrix: Arc::new(CycMatrix::identity(
                space.dim(),
                &CycNumber::zero(space.order()),
            )),
            scale_sq: BigRational::one(),
            sym: Arc::new((0..size).collect()),
            phase: Arc::new(vec![0; size]),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.matrix
    }

    pub fn scale_sq(&self) -> &BigRational {
        &self.scale_sq
    }

    /// `S_U(a)` by label index.
    pub fn image(&self, a: usize) -> usize {
        self.sym[a]
    }

    /// `Phi_U(a)` in `Z_d`.
    pub fn phase(&self, a: usize) -> u32 {
        self.phase[a]
    }

    pub fn symplectic_map(&self) -> &[usize] {
        &self.sym
    }

    /// `U * V`, i.e. `V` applied first. The action is composed, not re-derived.
    pub fn compose(&self, v: &CliffordElement) -> CliffordElement {
        assert_eq!(self.space, v.space, "Clifford spaces differ");
        let d = self.space.d();
        let size = self.space.size();
        let mut sym = vec![0usize; size];
        let mut phase = vec![0u32; size];
        for a in 0..size {
            let b = v.sym[a];
            sym[a] = self.sym[b];
            phase[a] = (v.phase[a] + self.phase[b]) % d;
        }
        CliffordElement {
            name: format!("{}*{}", self.name, v.name),
            space: self.space.clone(),
            matrix: Arc::new(self.matrix.mul(&v.matrix)),
            scale_sq: &self.scale_sq * &v.scale_sq,
            sym: Arc::new(sym),
            phase: Arc::new(phase),
        }
    }

    /// `U^dag`.
    pub fn inverse(&self) -> CliffordElement {
        let d = self.space.d();
        let size = self.space.size();
        let mut sym = vec![0usize; size];
        let mut phase = vec![0u32; size];
        for a in 0..size {
            let b = self.sym[a];
            sym[b] = a;
            phase[b] = (d - self.phase[a]) % d;
        }
        CliffordElement {
            name: format!("{}^-1", self.name),
            space: self.space.clone(),
            matrix: Arc::new(self.matrix.adjoint()),
            scale_sq: self.scale_sq.clone(),
            sym: Arc::new(sym),
            phase: Arc::new(phase),
        }
    }

    /// Double-precision unitary.
    pub fn unitary_c64(&self) -> ComplexMatrix {
        let s = self.scale_sq.to_f64().unwrap_or(f64::NAN).sqrt();
        self.matrix.to_complex().scale(&Complex64::new(s, 0.0))
    }

    /// Exact `U X U^dag` for a matrix `X` over the phase field.
    pub fn conjugate_matrix(&self, x: &CycMatrix) -> CycMatrix {
        let scale = CycNumber::from_rational(self.space.order(), self.scale_sq.clone());
        self.matrix.mul(x).mul(&self.matrix.adjoint()).scale(&scale)
    }
}

/// Finds `(k, b)` with `c = omega^k T_b`, exactly.
fn match_pauli(space: &PhaseSpace, c: &CycMatrix) -> Option<(u32, usize)> {
    let dim = space.dim();
    let n = space.n();
    let d = space.d() as usize;
    let order = space.order();
    let zpo = space.zeta_per_omega();
    let col_nonzero = |j: usize| -> Option<usize> {
        let mut found = None;
        for i in 0..dim {
            if !c.get(i, j).is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    };
    let r0 = col_nonzero(0)?;
    let base = c.get(r0, 0);
    let mut bx = vec![0u32; n];
    let mut r = r0;
    for slot in bx.iter_mut().rev() {
        *slot = (r % d) as u32;
        r /= d;
    }
    let mut bz = vec![0u32; n];
    for (l, slot) in bz.iter_mut().enumerate() {
        let j = d.pow((n - 1 - l) as u32);
        let row = col_nonzero(j)?;
        let ratio = c.get(row, j) * &base.conj();
        let t = root_exponent(&ratio, order)?;
        if t % zpo != 0 {
            return None;
        }
        *slot = t / zpo;
    }
    let b = space.encode(&bz, &bx);
    let (row0, e0) = space.pauli_entry(b, 0);
    debug_assert_eq!(row0, r0);
    let t = root_exponent(&base.mul_root(-(e0 as i64)), order)?;
    if t % zpo != 0 {
        return None;
    }
    let k = t / zpo;
    let expected = space.pauli_matrix(b).scale(&space.omega(k as i64));
    (expected == *c).then_some((k, b))
}

fn root_exponent(x: &CycNumber, order: u32) -> Option<u32> {
    (0..order).find(|&t| *x == CycNumber::root(order, t as i64))
}

/// `(Phi_U(a), S_U(a))`.
pub fn clifford_conjugate(
    u: &CliffordElement,
    a: &PhasePoint,
) -> Result<(u32, PhasePoint), PauliError> {
    let idx = u.space.index(a)?;
    Ok((u.phase[idx], u.space.point(u.sym[idx])))
}

fn local_gate(d: u32, name: &str) -> Result<(CycMatrix, BigRational), PauliError> {
    let order = crate::exact_arith::field_order(d);
    let zpo = (order / d) as i64;
    let du = d as usize;
    let zero = CycNumber::zero(order);
    let one_q = BigRational::one();
    let m = match name {
        "F" | "H" => {
            let m = Matrix::from_fn(du, du, |j, k| CycNumber::root(order, zpo * (j * k) as i64));
            return Ok((m, BigRational::new(1.into(), (d as i64).into())));
        }
        "P" | "S" => Matrix::from_fn(du, du, |j, k| {
            if j != k {
                return zero.clone();
            }
            let j = j as i64;
            if d % 2 == 1 {
                CycNumber::root(order, zpo * (j * (j - 1) / 2))
            } else {
                CycNumber::root(order, j * j)
            }
        }),
        "X" => Matrix::from_fn(du, du, |j, k| {
            if j == (k + 1) % du {
                CycNumber::one(order)
            } else {
                zero.clone()
            }
        }),
        "Z" => Matrix::from_fn(du, du, |j, k| {
            if j == k {
                CycNumber::root(order, zpo * j as i64)
            } else {
                zero.clone()
            }
        }),
        _ => {
            let u: u32 = name
                .strip_prefix('M')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| PauliError::UnknownGate(name.into()))?;
            if u == 0 || u.gcd(&d) != 1 {
                return Err(PauliError::UnknownGate(name.into()));
            }
            Matrix::from_fn(du, du, |j, k| {
                if j == (k * u as usize) % du {
                    CycNumber::one(order)
                } else {
                    zero.clone()
                }
            })
        }
    };
    Ok((m, one_q))
}

/// Gate named `name` acting on `targets` of the `n`-qudit space.
///
/// Names: `F` (alias `H`), `P` (alias `S`), `X`, `Z`, `M<u>` for a unit `u`,
/// each on one target; `SUM` on `[control, target]`.
pub fn named_gate(
    space: &PhaseSpace,
    name: &str,
    targets: &[usize],
) -> Result<CliffordElement, PauliError> {
    let n = space.n();
    let d = space.d() as usize;
    let dim = space.dim();
    let order = space.order();
    let label = format!(
        "{}[{}]",
        name,
        targets
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    if name == "SUM" {
        let [c, t] = targets else {
            return Err(PauliError::UnknownGate(label));
        };
        if *c >= n || *t >= n || c == t {
            return Err(PauliError::UnknownGate(label));
        }
        let stride = |q: usize| d.pow((n - 1 - q) as u32);
        let m = Matrix::from_fn(dim, dim, |row, col| {
            let jc = (col / stride(*c)) % d;
            let jt = (col / stride(*t)) % d;
            let new_t = (jt + jc) % d;
            let image = col - jt * stride(*t) + new_t * stride(*t);
            if row == image {
                CycNumber::one(order)
            } else {
                CycNumber::zero(order)
            }
        });
        return CliffordElement::from_matrix(space, label, m, BigRational::one());
    }
    let [q] = targets else {
        return Err(PauliError::UnknownGate(label));
    };
    if *q >= n {
        return Err(PauliError::UnknownGate(label));
    }
    let (local, scale) = local_gate(space.d(), name)?;
    let zero = CycNumber::zero(order);
    let mut m = CycMatrix::identity(1, &zero);
    for k in 0..n {
        let f = if k == *q {
            local.clone()
        } else {
            CycMatrix::identity(d, &zero)
        };
        m = m.kron(&f);
    }
    CliffordElement::from_matrix(space, label, m, scale)
}

/// Fourier, phase, Pauli and unit-multiplication gates on every qudit, and
/// SUM on every ordered pair; each validated on all of `E`.
pub fn clifford_generators(d: u32, n: usize) -> Result<Vec<CliffordElement>, PauliError> {
    let space = PhaseSpace::new(d, n)?;
    let mut out = Vec::new();
    for q in 0..n {
        for name in ["F", "P", "X", "Z"] {
            out.push(named_gate(&space, name, &[q])?);
        }
        for u in 2..d {
            if u.gcd(&d) == 1 {
                out.push(named_gate(&space, &format!("M{u}"), &[q])?);
            }
        }
    }
    for c in 0..n {
        for t in 0..n {
            if c != t {
                out.push(named_gate(&space, "SUM", &[c, t])?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(d: u32, z: &[u32], x: &[u32]) -> PhasePoint {
        PhasePoint::new(d, z.to_vec(), x.to_vec()).unwrap()
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let s = PhaseSpace::new(2, 1).unwrap();
        let h = named_gate(&s, "H", &[0]).unwrap();
        assert_eq!(
            clifford_conjugate(&h, &pp(2, &[1], &[0])).unwrap(),
            (0, pp(2, &[0], &[1]))
        );
        let id = CliffordElement::identity(&s);
        let y = pp(2, &[1], &[1]);
        assert_eq!(clifford_conjugate(&id, &y).unwrap(), (0, y));
    }

    #[test]
    fn qutrit_fourier_image_of_z() {
        let s = PhaseSpace::new(3, 1).unwrap();
        let f = named_gate(&s, "F", &[0]).unwrap();
        let (k, img) = clifford_conjugate(&f, &pp(3, &[1], &[0])).unwrap();
        assert!(img == pp(3, &[0], &[1]) || img == pp(3, &[0], &[2]));
        // exact conjugation oracle
        let z = s.pauli_matrix(s.index(&pp(3, &[1], &[0])).unwrap());
        let lhs = f.conjugate_matrix(&z);
        let rhs = s.pauli_matrix(s.index(&img).unwrap()).scale(&s.omega(k as i64));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_clifford_rejected() {
        let s = PhaseSpace::new(2, 1).unwrap();
        // T gate diag(1, zeta_8) lives outside Q(i)
        let m = Matrix::from_fn(2, 2, |j, k| {
            if j != k {
                CycNumber::zero(4)
            } else if j == 0 {
                CycNumber::one(4)
            } else {
                CycNumber::from_frac(4, 3, 5) + CycNumber::root(4, 1).scale(&BigRational::new(4.into(), 5.into()))
            }
        });
        let err = CliffordElement::from_matrix(&s, "R", m, BigRational::one()).unwrap_err();
        assert!(matches!(err, PauliError::NotClifford { .. }));
    }

    #[test]
    fn generators_validate() {
        for (d, n) in [(2, 1), (3, 1), (4, 1), (2, 2)] {
            let g = clifford_generators(d, n).unwrap();
            assert!(!g.is_empty());
        }
    }

    #[test]
    fn compose_matches_matrix_product() {
        let s = PhaseSpace::new(3, 2).unwrap();
        let a = named_gate(&s, "F", &[0]).unwrap();
        let b = named_gate(&s, "SUM", &[0, 1]).unwrap();
        let ab = a.compose(&b);
        let direct = CliffordElement::from_matrix(
            &s,
            "direct",
            ab.matrix().clone(),
            ab.scale_sq().clone(),
        )
        .unwrap();
        assert_eq!(ab, direct);
        let inv = ab.inverse().compose(&ab);
        assert_eq!(inv, CliffordElement::identity(&s));
    }
}
