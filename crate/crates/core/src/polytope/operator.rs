//! Operators on `d^n` dimensions in Pauli coefficients, in character
//! coordinates, and in the real coordinates of [`OperatorVector`].

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact_arith::{ComplexMatrix, CycMatrix, CycNumber, Matrix};
use crate::pauli::{CliffordElement, PhaseSpace};
use crate::stabilizer::StabilizerProjector;

use super::PolytopeError;

/// `X = d^{-n} sum_a x_a T_a` with `x_a = Tr(T_a^dag X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operator {
    space: PhaseSpace,
    x: Vec<CycNumber>,
}

impl Operator {
    pub fn from_coeffs(space: &PhaseSpace, x: Vec<CycNumber>) -> Self {
        assert_eq!(x.len(), space.size(), "coefficient count");
        Operator {
            space: space.clone(),
            x,
        }
    }

    /// `1 / d^n`.
    pub fn maximally_mixed(space: &PhaseSpace) -> Self {
        let mut x = vec![CycNumber::zero(space.order()); space.size()];
        x[0] = CycNumber::one(space.order());
        Operator::from_coeffs(space, x)
    }

    pub fn from_matrix(space: &PhaseSpace, m: &CycMatrix) -> Self {
        let dim = space.dim();
        let order = space.order();
        let x = (0..space.size())
            .map(|a| {
                let mut acc = CycNumber::zero(order);
                for k in 0..dim {
                    let (row, e) = space.pauli_entry(a, k);
                    let v = m.get(row, k);
                    if !v.is_zero() {
                        acc = &acc + &v.mul_root(-(e as i64));
                    }
                }
                acc
            })
            .collect();
        Operator::from_coeffs(space, x)
    }

    pub fn from_projector(p: &StabilizerProjector) -> Self {
        Operator::from_coeffs(p.space(), p.pauli_coeffs())
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.x
    }

    pub fn coeff(&self, a: usize) -> &CycNumber {
        &self.x[a]
    }

    pub fn trace(&self) -> &CycNumber {
        &self.x[0]
    }

    /// `X^dag = X` iff `x_{-a} = zeta^{-kappa(a)} conj(x_a)` for every `a`.
    pub fn is_hermitian(&self) -> bool {
        (0..self.space.size()).all(|a| {
            self.x[self.space.neg(a)] == self.x[a].conj().mul_root(-(self.space.kappa(a) as i64))
        })
    }

    pub fn to_matrix(&self) -> CycMatrix {
        let dim = self.space.dim();
        let order = self.space.order();
        let inv = BigRational::new(1.into(), (dim as i64).into());
        let mut m = Matrix::zeros(dim, dim, &CycNumber::zero(order));
        for (a, xa) in self.x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let s = xa.scale(&inv);
            for j in 0..dim {
                let (row, e) = self.space.pauli_entry(a, j);
                let v = m.get(row, j) + &s.mul_root(e as i64);
                m.set(row, j, v);
            }
        }
        m
    }

    pub fn to_complex_matrix(&self) -> ComplexMatrix {
        let dim = self.space.dim();
        let mut m = Matrix::zeros(dim, dim, &Complex64::zero());
        let inv = 1.0 / dim as f64;
        for (a, xa) in self.x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let s = xa.to_complex64() * inv;
            for j in 0..dim {
                let (row, e) = self.space.pauli_entry(a, j);
                let ph = Complex64::from_polar(
                    1.0,
                    std::f64::consts::TAU * e as f64 / self.space.order() as f64,
                );
                let v = m.get(row, j) + s * ph;
                m.set(row, j, v);
            }
        }
        m
    }

    /// `U X U^dag`: `x'_{S(a)} = omega^{Phi(a)} x_a`.
    pub fn conjugate(&self, u: &CliffordElement) -> Operator {
        let mut x = vec![CycNumber::zero(self.space.order()); self.space.size()];
        for (a, xa) in self.x.iter().enumerate() {
            x[u.image(a)] = xa.mul_root((u.phase(a) * self.space.zeta_per_omega()) as i64);
        }
        Operator::from_coeffs(&self.space, x)
    }

    /// `Tr(T_a X) = zeta^{kappa(a)} x_{-a}`.
    pub fn pauli_expectation(&self, a: usize) -> CycNumber {
        self.x[self.space.neg(a)].mul_root(self.space.kappa(a) as i64)
    }

    /// `Tr(Pi_I^r X) = |I|^{-1} sum_{b in I} omega^{-r(b)} Tr(T_b X)`.
    pub fn projector_trace(&self, p: &StabilizerProjector) -> CycNumber {
        let zpo = self.space.zeta_per_omega() as i64;
        let mut acc = CycNumber::zero(self.space.order());
        for (b, r) in p.assignment().pairs() {
            acc = &acc + &self.pauli_expectation(b).mul_root(-(r as i64) * zpo);
        }
        acc.scale(&BigRational::new(1.into(), (p.group().order() as i64).into()))
    }

    /// Character coordinates `w_c = d^{-2n} sum_u omega^{[c,u]} x_{-u}`,
    /// so that `X = sum_c w_c A_c`. They are real for Hermitian `X` only
    /// when [`PhaseSpace::adjoint_is_inverse_label`] holds.
    pub fn w_coords(&self) -> Vec<CycNumber> {
        let size = self.space.size();
        let zpo = self.space.zeta_per_omega() as i64;
        let inv = BigRational::new(1.into(), (size as i64).into());
        (0..size)
            .map(|c| {
                let mut acc = CycNumber::zero(self.space.order());
                for u in 0..size {
                    let xu = &self.x[self.space.neg(u)];
                    if !xu.is_zero() {
                        acc = &acc + &xu.mul_root(self.space.symp(c, u) as i64 * zpo);
                    }
                }
                acc.scale(&inv)
            })
            .collect()
    }

    /// Character coordinates when all are rational.
    pub fn w_rational(&self) -> Option<Vec<BigRational>> {
        self.w_coords().iter().map(CycNumber::to_rational).collect()
    }

    /// `x_a = sum_c w_c omega^{[c,a]}`.
    pub fn from_w(space: &PhaseSpace, w: &[BigRational]) -> Operator {
        let size = space.size();
        let zpo = space.zeta_per_omega() as i64;
        let order = space.order();
        let x = (0..size)
            .map(|a| {
                let mut acc = CycNumber::zero(order);
                for (c, wc) in w.iter().enumerate() {
                    if !wc.is_zero() {
                        acc = &acc
                            + &CycNumber::root(order, space.symp(c, a) as i64 * zpo).scale(wc);
                    }
                }
                acc
            })
            .collect();
        Operator::from_coeffs(space, x)
    }

    /// Numeric character coordinates.
    pub fn w_f64(&self) -> Vec<f64> {
        w_of_coeffs_f64(&self.space, &self.x.iter().map(CycNumber::to_complex64).collect::<Vec<_>>())
    }

    /// Compact key for exact lookup.
    pub fn key(&self) -> Vec<CycNumber> {
        self.x.clone()
    }
}

/// Numeric Pauli coefficients `x_a = Tr(T_a^dag M)` of a complex matrix.
pub fn coeffs_of_matrix_f64(space: &PhaseSpace, m: &ComplexMatrix) -> Vec<Complex64> {
    let dim = space.dim();
    (0..space.size())
        .map(|a| {
            let mut acc = Complex64::zero();
            for k in 0..dim {
                let (row, e) = space.pauli_entry(a, k);
                let ph = Complex64::from_polar(
                    1.0,
                    -std::f64::consts::TAU * e as f64 / space.order() as f64,
                );
                acc += m.get(row, k) * ph;
            }
            acc
        })
        .collect()
}

/// Numeric character coordinates from Pauli coefficients.
pub fn w_of_coeffs_f64(space: &PhaseSpace, x: &[Complex64]) -> Vec<f64> {
    let size = space.size();
    let d = space.d() as f64;
    (0..size)
        .map(|c| {
            let mut acc = Complex64::zero();
            for u in 0..size {
                let t = std::f64::consts::TAU * space.symp(c, u) as f64 / d;
                acc += x[space.neg(u)] * Complex64::from_polar(1.0, t);
            }
            acc.re / size as f64
        })
        .collect()
}

/// Real coordinates of a Hermitian operator: diagonal entries, then for each
/// `i < j` the pair `u = Re X_ij` and `v = (X_ij - conj X_ij) / theta` with
/// `theta = zeta_N - zeta_N^{-1}`. All coordinates lie in the real subfield.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorVector {
    d: u32,
    n: usize,
    coords: Vec<CycNumber>,
}

fn theta(order: u32) -> CycNumber {
    CycNumber::root(order, 1) - CycNumber::root(order, -1)
}

fn half(order: u32) -> CycNumber {
    CycNumber::from_frac(order, 1, 2)
}

impl OperatorVector {
    pub fn from_matrix(space: &PhaseSpace, m: &CycMatrix) -> Result<Self, PolytopeError> {
        if !m.is_hermitian() {
            return Err(PolytopeError::NotHermitian);
        }
        let dim = space.dim();
        let order = space.order();
        let th_inv = theta(order).try_inv().expect("theta is nonzero");
        let mut coords = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            coords.push(m.get(i, i).clone());
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let v = m.get(i, j);
                let c = v.conj();
                coords.push(&(v + &c) * &half(order));
                coords.push(&(v - &c) * &th_inv);
            }
        }
        Ok(OperatorVector {
            d: space.d(),
            n: space.n(),
            coords,
        })
    }

    pub fn from_operator(op: &Operator) -> Self {
        Self::from_matrix(op.space(), &op.to_matrix()).expect("Hermitian operator")
    }

    pub fn from_coords(space: &PhaseSpace, coords: Vec<CycNumber>) -> Result<Self, PolytopeError> {
        if coords.len() != space.dim() * space.dim() {
            return Err(PolytopeError::Format(format!(
                "expected {} coordinates, got {}",
                space.dim() * space.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_real() || c.order() != space.order()) {
            return Err(PolytopeError::Format("coordinates must be real field elements".into()));
        }
        Ok(OperatorVector {
            d: space.d(),
            n: space.n(),
            coords,
        })
    }

    pub fn space(&self) -> PhaseSpace {
        PhaseSpace::new(self.d, self.n).expect("valid dimensions")
    }

    pub fn coords(&self) -> &[CycNumber] {
        &self.coords
    }

    pub fn to_matrix(&self) -> CycMatrix {
        let space = self.space();
        let dim = space.dim();
        let order = space.order();
        let th2 = &theta(order) * &half(order);
        let mut m = Matrix::zeros(dim, dim, &CycNumber::zero(order));
        for i in 0..dim {
            m.set(i, i, self.coords[i].clone());
        }
        let mut k = dim;
        for i in 0..dim {
            for j in i + 1..dim {
                let u = &self.coords[k];
                let v = &self.coords[k + 1];
                let tv = &th2 * v;
                m.set(i, j, u + &tv);
                m.set(j, i, u - &tv);
                k += 2;
            }
        }
        m
    }

    pub fn to_operator(&self) -> Operator {
        Operator::from_matrix(&self.space(), &self.to_matrix())
    }

    /// Exact trace.
    pub fn trace(&self) -> CycNumber {
        let dim = (self.d as usize).pow(self.n as u32);
        let order = self.coords[0].order();
        self.coords[..dim]
            .iter()
            .fold(CycNumber::zero(order), |acc, c| &acc + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|c| c.to_complex64().re)
            .collect()
    }
}

/// Row `f` with `Tr(sigma X) = f . coords(X)` for Hermitian `sigma`.
pub fn functional_row(space: &PhaseSpace, sigma: &CycMatrix) -> Vec<CycNumber> {
    let dim = space.dim();
    let order = space.order();
    let mth2 = -(&theta(order) * &half(order));
    let mut row = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        row.push(sigma.get(i, i).clone());
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let s = sigma.get(i, j);
            let c = s.conj();
            row.push(s + &c);
            row.push(&mth2 * &(s - &c));
        }
    }
    row
}

/// Row of the trace functional.
pub fn trace_row(space: &PhaseSpace) -> Vec<CycNumber> {
    let dim = space.dim();
    let order = space.order();
    (0..dim * dim)
        .map(|k| {
            if k < dim {
                CycNumber::one(order)
            } else {
                CycNumber::zero(order)
            }
        })
        .collect()
}
