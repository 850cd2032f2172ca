//! Elements of the cyclotomic field `Q(zeta_N)` in the power basis modulo the
//! `N`-th cyclotomic polynomial.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{self, ComplexInterval};
use super::ArithError;

/// Multiplication table for `Q(zeta_N)`.
#[derive(Debug)]
pub struct FieldTable {
    order: u32,
    degree: usize,
    /// `powers[k]` is `zeta^k` in the power basis, as sparse integer coordinates.
    powers: Vec<Vec<(usize, i64)>>,
}

impl FieldTable {
    fn build(order: u32) -> Self {
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let n = order as usize;
        let mut powers: Vec<Vec<(usize, i64)>> = Vec::with_capacity(n);
        let mut current = vec![0i64; degree];
        current[0] = 1;
        for _ in 0..n {
            powers.push(
                current
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (i, *c))
                    .collect(),
            );
            // multiply by zeta, then reduce the x^degree term with the monic relation
            let top = current[degree - 1];
            for i in (1..degree).rev() {
                current[i] = current[i - 1];
            }
            current[0] = 0;
            if top != 0 {
                for (i, c) in current.iter_mut().enumerate() {
                    *c -= top * phi[i];
                }
            }
        }
        FieldTable {
            order,
            degree,
            powers,
        }
    }
}

/// Integer coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_k with k | n, k < n
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for k in 1..n {
        if n.is_multiple_of(k) {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(k));
        }
    }
    cache.write().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

pub(crate) fn field_table(order: u32) -> Arc<FieldTable> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().unwrap().get(&order) {
        return Arc::clone(t);
    }
    let t = Arc::new(FieldTable::build(order));
    tables
        .write()
        .unwrap()
        .entry(order)
        .or_insert_with(|| Arc::clone(&t))
        .clone()
}

/// Order `N` of the cyclotomic field that holds the Pauli phases for local dimension `d`.
pub fn field_order(d: u32) -> u32 {
    if d % 2 == 1 {
        d
    } else {
        2 * d
    }
}

/// An exact element of `Q(zeta_N)`.
///
/// Coefficients are kept reduced modulo `Phi_N`, so structural equality is
/// field equality.
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<FieldTable>,
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    pub fn zero(order: u32) -> Self {
        let field = field_table(order);
        let coeffs = vec![BigRational::zero(); field.degree];
        CycNumber { field, coeffs }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = q;
        x
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(order: u32, num: i64, den: i64) -> Self {
        Self::from_rational(
            order,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn root(order: u32, k: i64) -> Self {
        let field = field_table(order);
        let idx = k.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); field.degree];
        for &(i, c) in &field.powers[idx] {
            coeffs[i] = BigRational::from_integer(BigInt::from(c));
        }
        CycNumber { field, coeffs }
    }

    /// Builds from power-basis coefficients, reducing any excess length modulo `Phi_N`.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Self {
        let field = field_table(order);
        let mut acc = vec![BigRational::zero(); field.degree];
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &field.powers[k % field.order as usize] {
                acc[i] += &c * BigRational::from_integer(BigInt::from(p));
            }
        }
        CycNumber { field, coeffs: acc }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when this element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<(), ArithError> {
        if self.field.order != other.field.order {
            return Err(ArithError::OrderMismatch {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycNumber {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycNumber {
            field: Arc::clone(&self.field),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        if other.is_rational() {
            return Ok(self.scale(&other.coeffs[0]));
        }
        if self.is_rational() {
            return Ok(other.scale(&self.coeffs[0]));
        }
        let n = self.field.order as usize;
        let mut acc = vec![BigRational::zero(); self.field.degree];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                for &(k, c) in &self.field.powers[(i + j) % n] {
                    if c == 1 {
                        acc[k] += &prod;
                    } else if c == -1 {
                        acc[k] -= &prod;
                    } else {
                        acc[k] += &prod * BigRational::from_integer(BigInt::from(c));
                    }
                }
            }
        }
        Ok(CycNumber {
            field: Arc::clone(&self.field),
            coeffs: acc,
        })
    }

    pub fn try_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(self.order(), q.recip()));
        }
        // Solve (multiplication-by-self matrix) * y = e_0.
        let deg = self.field.degree;
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); deg + 1]; deg];
        for j in 0..deg {
            let col = self.mul_root(j as i64);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeffs[i].clone();
            }
        }
        m[0][deg] = BigRational::one();
        let sol = super::rational::solve_augmented(m).ok_or(ArithError::DivisionByZero)?;
        Ok(CycNumber {
            field: Arc::clone(&self.field),
            coeffs: sol,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_mul(&other.try_inv()?)
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Self {
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplication by `zeta_N^k`.
    pub fn mul_root(&self, k: i64) -> Self {
        let n = self.field.order as i64;
        let shift = k.rem_euclid(n) as usize;
        if shift == 0 {
            return self.clone();
        }
        let mut acc = vec![BigRational::zero(); self.field.degree];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(k, c) in &self.field.powers[(i + shift) % n as usize] {
                acc[k] += a * BigRational::from_integer(BigInt::from(c));
            }
        }
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: acc,
        }
    }

    /// Complex conjugate, via `zeta -> zeta^{N-1}`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let n = self.field.order as usize;
        let mut acc = vec![BigRational::zero(); self.field.degree];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(k, c) in &self.field.powers[(n - i) % n] {
                acc[k] += a * BigRational::from_integer(BigInt::from(c));
            }
        }
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: acc,
        }
    }

    pub fn is_real(&self) -> bool {
        self.is_rational() || self.conj() == *self
    }

    /// `|x|^2 = x * conj(x)`, a real element of the field.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    /// Fast double-precision value.
    pub fn to_complex64(&self) -> Complex64 {
        let n = self.field.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        Complex64::new(re, im)
    }

    /// Enclosing complex interval with target width about `2^-precision`.
    pub fn to_interval(&self, precision: u32) -> ComplexInterval {
        interval::enclose(self, precision)
    }

    /// Sign of a real element: exact for rationals, otherwise by interval
    /// refinement (which terminates because the canonical form has already
    /// ruled out zero).
    pub fn real_sign(&self) -> Result<Ordering, ArithError> {
        if let Some(q) = self.to_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        if !self.is_real() {
            return Err(ArithError::NotReal);
        }
        let mut bits = 64;
        loop {
            let iv = self.to_interval(bits);
            if iv.re_lo().is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.re_hi().is_negative() {
                return Ok(Ordering::Less);
            }
            bits *= 2;
        }
    }

    /// Compares two real elements exactly.
    pub fn real_cmp(&self, other: &Self) -> Result<Ordering, ArithError> {
        self.try_sub(other)?.real_sign()
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycNumber {}

impl Hash for CycNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({})", self)
    }
}

/// Serialization `"N; c0, c1, ..."` with rationals as `p/q` (or `p` when integral).
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.field.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {}", c)?;
        }
        Ok(())
    }
}

impl FromStr for CycNumber {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let (order, rest) = s.split_once(';').ok_or_else(bad)?;
        let order: u32 = order.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let coeffs = rest
            .split(',')
            .map(|t| parse_rational(t.trim()).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        let field = field_table(order);
        if coeffs.len() != field.degree {
            return Err(bad());
        }
        Ok(CycNumber { field, coeffs })
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(t.parse().ok()?)),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            /// Panics when the operands live in different fields.
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                self.$checked(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$checked(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

/// Field operation selector for [`cyc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

/// Applies one field operation. Unary operations ignore `y`.
pub fn cyc_arith(x: &CycNumber, y: &CycNumber, op: CycOp) -> Result<CycNumber, ArithError> {
    match op {
        CycOp::Add => x.try_add(y),
        CycOp::Sub => x.try_sub(y),
        CycOp::Mul => x.try_mul(y),
        CycOp::Neg => {
            x.check_order(y)?;
            Ok(-x)
        }
        CycOp::Inv => {
            x.check_order(y)?;
            x.try_inv()
        }
    }
}

/// Complex conjugate together with a realness flag.
pub fn cyc_conj_and_realness(x: &CycNumber) -> (CycNumber, bool) {
    let c = x.conj();
    let real = c == *x;
    (c, real)
}

/// Enclosing complex interval of `x` at `precision` bits (at least 53).
pub fn cyc_to_float(x: &CycNumber, precision: u32) -> ComplexInterval {
    x.to_interval(precision.max(53))
}
