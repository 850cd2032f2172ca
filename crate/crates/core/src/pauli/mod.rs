//! Generalized Pauli operators on `n` qudits of dimension `d`, their phase
//! conventions and the symplectic structure of the label space `E`.

mod clifford;

pub use clifford::{clifford_conjugate, clifford_generators, named_gate, CliffordElement};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::exact_arith::{field_order, ComplexMatrix, CycMatrix, CycNumber, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("dimension mismatch: ({0}, {1}) vs ({2}, {3})")]
    DimensionMismatch(u32, usize, u32, usize),
    #[error("unsupported dimensions d={d}, n={n}")]
    BadDimensions { d: u32, n: usize },
    #[error("conjugated Pauli operator for label {label} matches no phased Pauli; not a Clifford")]
    NotClifford { label: String },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("matrix has wrong size {got}, expected {expected}")]
    WrongSize { got: usize, expected: usize },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("cannot parse phase point {0:?}")]
    Parse(String),
}

/// A label `a = (a_Z, a_X)` in `E = Z_d^n x Z_d^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    d: u32,
    z: Vec<u32>,
    x: Vec<u32>,
}

impl PhasePoint {
    pub fn new(d: u32, z: Vec<u32>, x: Vec<u32>) -> Result<Self, PauliError> {
        if d < 2 || z.is_empty() {
            return Err(PauliError::BadDimensions { d, n: z.len() });
        }
        if z.len() != x.len() {
            return Err(PauliError::DimensionMismatch(d, z.len(), d, x.len()));
        }
        Ok(PhasePoint {
            d,
            z: z.into_iter().map(|v| v % d).collect(),
            x: x.into_iter().map(|v| v % d).collect(),
        })
    }

    pub fn zero(d: u32, n: usize) -> Self {
        PhasePoint {
            d,
            z: vec![0; n],
            x: vec![0; n],
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().chain(&self.x).all(|v| *v == 0)
    }

    fn check(&self, o: &Self) -> Result<(), PauliError> {
        if self.d != o.d || self.n() != o.n() {
            return Err(PauliError::DimensionMismatch(
                self.d,
                self.n(),
                o.d,
                o.n(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, PauliError> {
        self.check(o)?;
        let d = self.d;
        Ok(PhasePoint {
            d,
            z: self.z.iter().zip(&o.z).map(|(a, b)| (a + b) % d).collect(),
            x: self.x.iter().zip(&o.x).map(|(a, b)| (a + b) % d).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        let d = self.d as i64;
        let f = |v: &u32| ((*v as i64 * k).rem_euclid(d)) as u32;
        PhasePoint {
            d: self.d,
            z: self.z.iter().map(f).collect(),
            x: self.x.iter().map(f).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }
}

/// Textual form `Z:(v,...)|X:(v,...)`.
impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "Z:({})|X:({})", join(&self.z), join(&self.x))
    }
}

impl PhasePoint {
    /// Parses the textual form for local dimension `d`.
    pub fn parse(s: &str, d: u32) -> Result<Self, PauliError> {
        let bad = || PauliError::Parse(s.to_string());
        let (zs, xs) = s.trim().split_once('|').ok_or_else(bad)?;
        let vec = |part: &str, tag: &str| -> Result<Vec<u32>, PauliError> {
            let inner = part
                .trim()
                .strip_prefix(tag)
                .and_then(|r| r.trim().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            inner
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        let z = vec(zs, "Z:")?;
        let x = vec(xs, "X:")?;
        if z.iter().chain(&x).any(|v| *v >= d) {
            return Err(bad());
        }
        PhasePoint::new(d, z, x)
    }
}

impl FromStr for PhasePoint {
    type Err = PauliError;

    /// Parses with `d` inferred as one more than the largest component (at least 2);
    /// prefer [`PhasePoint::parse`] when `d` is known.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let probe = PhasePoint::parse(s, u32::MAX)?;
        let d = probe
            .z
            .iter()
            .chain(&probe.x)
            .max()
            .map_or(2, |m| (m + 1).max(2));
        PhasePoint::parse(s, d)
    }
}

/// Index arithmetic on `E` for fixed `(d, n)`.
///
/// Labels are indexed by the base-`d` digits `(z_1..z_n, x_1..x_n)`, most
/// significant first; computational basis states by `(j_1..j_n)` likewise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseSpace {
    d: u32,
    n: usize,
    order: u32,
    inv2: u32,
}

impl PhaseSpace {
    pub fn new(d: u32, n: usize) -> Result<Self, PauliError> {
        if d < 2 || n == 0 || (d as u64).pow(2 * n as u32) > 1 << 24 {
            return Err(PauliError::BadDimensions { d, n });
        }
        let inv2 = if d % 2 == 1 { d.div_ceil(2) } else { 0 };
        Ok(PhaseSpace {
            d,
            n,
            order: field_order(d),
            inv2,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|E| = d^{2n}`.
    pub fn size(&self) -> usize {
        (self.d as usize).pow(2 * self.n as u32)
    }

    /// Hilbert space dimension `d^n`.
    pub fn dim(&self) -> usize {
        (self.d as usize).pow(self.n as u32)
    }

    /// Cyclotomic order `N` of the phase field.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `N / d`: exponent of `zeta_N` equal to one power of `omega`.
    pub fn zeta_per_omega(&self) -> u32 {
        self.order / self.d
    }

    /// `omega^k` as a field element.
    pub fn omega(&self, k: i64) -> CycNumber {
        CycNumber::root(self.order, k * self.zeta_per_omega() as i64)
    }

    pub fn digits(&self, idx: usize) -> (Vec<u32>, Vec<u32>) {
        let d = self.d as usize;
        let mut all = vec![0u32; 2 * self.n];
        let mut r = idx;
        for slot in all.iter_mut().rev() {
            *slot = (r % d) as u32;
            r /= d;
        }
        let x = all.split_off(self.n);
        (all, x)
    }

    fn encode(&self, z: &[u32], x: &[u32]) -> usize {
        let d = self.d as usize;
        z.iter()
            .chain(x)
            .fold(0usize, |acc, v| acc * d + (*v as usize % d))
    }

    pub fn index(&self, p: &PhasePoint) -> Result<usize, PauliError> {
        if p.d != self.d || p.n() != self.n {
            return Err(PauliError::DimensionMismatch(self.d, self.n, p.d, p.n()));
        }
        Ok(self.encode(&p.z, &p.x))
    }

    pub fn point(&self, idx: usize) -> PhasePoint {
        let (z, x) = self.digits(idx);
        PhasePoint { d: self.d, z, x }
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.size()).map(|i| self.point(i))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (az, ax) = self.digits(a);
        let (bz, bx) = self.digits(b);
        let d = self.d;
        let z: Vec<u32> = az.iter().zip(&bz).map(|(p, q)| (p + q) % d).collect();
        let x: Vec<u32> = ax.iter().zip(&bx).map(|(p, q)| (p + q) % d).collect();
        self.encode(&z, &x)
    }

    pub fn scale(&self, k: i64, a: usize) -> usize {
        let (z, x) = self.digits(a);
        let d = self.d as i64;
        let f = |v: &u32| ((*v as i64 * k).rem_euclid(d)) as u32;
        let z: Vec<u32> = z.iter().map(f).collect();
        let x: Vec<u32> = x.iter().map(f).collect();
        self.encode(&z, &x)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.scale(-1, a)
    }

    /// Integer symplectic form `<a_Z|b_X> - <a_X|b_Z>` on representatives in `[0, d)`.
    fn symp_int(&self, a: &(Vec<u32>, Vec<u32>), b: &(Vec<u32>, Vec<u32>)) -> i64 {
        let mut s = 0i64;
        for k in 0..self.n {
            s += a.0[k] as i64 * b.1[k] as i64 - a.1[k] as i64 * b.0[k] as i64;
        }
        s
    }

    /// `[a, b] mod d`.
    pub fn symp(&self, a: usize, b: usize) -> u32 {
        let s = self.symp_int(&self.digits(a), &self.digits(b));
        s.rem_euclid(self.d as i64) as u32
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.symp(a, b) == 0
    }

    /// `beta(a, b)` with `T_a T_b = omega^{-beta} T_{a+b}`; see [`beta`].
    pub fn beta(&self, a: usize, b: usize) -> Rational64 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let s = self.symp_int(&pa, &pb);
        let d = self.d as i64;
        if self.d % 2 == 1 {
            Rational64::from_integer((-s * self.inv2 as i64).rem_euclid(d))
        } else {
            let mut c = 0i64;
            for k in 0..self.n {
                let tz = (pa.0[k] + pb.0[k]) as i64;
                let tx = (pa.1[k] + pb.1[k]) as i64;
                c += (tz / d) * (tx % d) + (tz % d) * (tx / d);
            }
            Rational64::new(-(s - d * c), 2)
        }
    }

    /// `beta` reduced into `Z_d` when it is integral (always for odd `d`;
    /// for even `d` exactly when `[a,b]` is even, in particular on commuting pairs).
    pub fn beta_mod(&self, a: usize, b: usize) -> Option<u32> {
        let b = self.beta(a, b);
        b.is_integer()
            .then(|| b.to_integer().rem_euclid(self.d as i64) as u32)
    }

    /// Exponent `e` in `T_a T_b = zeta_N^e T_{a+b}`.
    pub fn compose_zeta(&self, a: usize, b: usize) -> u32 {
        let beta = self.beta(a, b) * Rational64::from_integer(self.zeta_per_omega() as i64);
        debug_assert!(beta.is_integer());
        (-beta.to_integer()).rem_euclid(self.order as i64) as u32
    }

    /// Exponent `kappa(a)` in `T_a T_{-a} = zeta_N^kappa`, so that
    /// `T_a^dag = zeta_N^{-kappa(a)} T_{-a}`. Zero for all `a` when `d` is odd
    /// or `d = 2`; nonzero for some `a` at every other even `d`.
    pub fn kappa(&self, a: usize) -> u32 {
        self.compose_zeta(a, self.neg(a))
    }

    /// True when `T_a^dag = T_{-a}` for every label.
    pub fn adjoint_is_inverse_label(&self) -> bool {
        self.d % 2 == 1 || self.d == 2
    }

    /// A closed form for `beta` from integer inner products alone: no carry
    /// term, and `+[a,b]/2` for odd `d`. Differs from [`Self::beta`] on many
    /// pairs; kept for comparison.
    pub fn beta_integer_form(&self, a: usize, b: usize) -> Rational64 {
        let s = self.symp_int(&self.digits(a), &self.digits(b));
        let d = self.d as i64;
        if self.d % 2 == 1 {
            Rational64::from_integer((s * self.inv2 as i64).rem_euclid(d))
        } else {
            Rational64::new(-s, 2)
        }
    }

    /// Phase function `phi(a)` in units of `mu = zeta_N`.
    pub fn phi(&self, a: usize) -> u32 {
        let (z, x) = self.digits(a);
        let ip: u64 = z.iter().zip(&x).map(|(p, q)| *p as u64 * *q as u64).sum();
        if self.d % 2 == 1 {
            let d = self.d as u64;
            ((d - ip % d) % d * self.inv2 as u64 % d) as u32
        } else {
            let m = 2 * self.d as u64;
            ((m - ip % m) % m) as u32
        }
    }

    /// Basis index of `j + a_X` together with the `zeta_N` exponent of
    /// `<j+a_X| T_a |j>`.
    pub fn pauli_entry(&self, a: usize, j: usize) -> (usize, u32) {
        let (az, ax) = self.digits(a);
        let d = self.d as usize;
        let mut jd = vec![0u32; self.n];
        let mut r = j;
        for slot in jd.iter_mut().rev() {
            *slot = (r % d) as u32;
            r /= d;
        }
        let mut row = 0usize;
        let mut ip = 0u64;
        for k in 0..self.n {
            let t = (jd[k] + ax[k]) % self.d;
            row = row * d + t as usize;
            ip += az[k] as u64 * t as u64;
        }
        let e = (self.phi(a) as u64 + self.zeta_per_omega() as u64 * (ip % self.d as u64))
            % self.order as u64;
        (row, e as u32)
    }

    /// Exact matrix of `T_a`.
    pub fn pauli_matrix(&self, a: usize) -> CycMatrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim, &CycNumber::zero(self.order));
        for j in 0..dim {
            let (row, e) = self.pauli_entry(a, j);
            m.set(row, j, CycNumber::root(self.order, e as i64));
        }
        m
    }

    /// Double-precision matrix of `T_a`.
    pub fn pauli_matrix_c64(&self, a: usize) -> ComplexMatrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim, &Complex64::new(0.0, 0.0));
        for j in 0..dim {
            let (row, e) = self.pauli_entry(a, j);
            m.set(row, j, Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / self.order as f64));
        }
        m
    }

    /// Span of the given labels (a subgroup of `E`), sorted by index.
    pub fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut out = vec![0usize];
        seen[0] = true;
        let mut i = 0;
        while i < out.len() {
            let a = out[i];
            for &g in gens {
                let s = self.add(a, g);
                if !seen[s] {
                    seen[s] = true;
                    out.push(s);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Embeds a label of the first `m` qudits (`m <= n`) into `E_n`.
    pub fn embed_leading(&self, small: &PhaseSpace, a: usize) -> usize {
        let (z, x) = small.digits(a);
        let pad = self.n - small.n;
        let z: Vec<u32> = z.into_iter().chain(std::iter::repeat_n(0, pad)).collect();
        let x: Vec<u32> = x.into_iter().chain(std::iter::repeat_n(0, pad)).collect();
        self.encode(&z, &x)
    }

    /// Embeds a label of the last `n - m` qudits into `E_n`.
    pub fn embed_trailing(&self, small: &PhaseSpace, a: usize) -> usize {
        let (z, x) = small.digits(a);
        let pad = self.n - small.n;
        let z: Vec<u32> = std::iter::repeat_n(0, pad).chain(z).collect();
        let x: Vec<u32> = std::iter::repeat_n(0, pad).chain(x).collect();
        self.encode(&z, &x)
    }

    /// Restriction of a label to its first `m` qudits.
    pub fn project_leading(&self, small: &PhaseSpace, a: usize) -> usize {
        let (z, x) = self.digits(a);
        small.encode(&z[..small.n], &x[..small.n])
    }
}

fn space_of(a: &PhasePoint, b: &PhasePoint) -> Result<PhaseSpace, PauliError> {
    a.check(b)?;
    PhaseSpace::new(a.d, a.n())
}

/// `[a, b] = <a_Z|b_X> - <a_X|b_Z> mod d`.
pub fn symplectic_product(a: &PhasePoint, b: &PhasePoint) -> Result<u32, PauliError> {
    let s = space_of(a, b)?;
    Ok(s.symp(s.index(a)?, s.index(b)?))
}

/// Composition phase `beta(a,b)` with `T_a T_b = omega^{-beta(a,b)} T_{a+b}`.
///
/// Odd `d`: `-[a,b] * 2^{-1} mod d`. Even `d`: the rational `-([a,b] - d c)/2`
/// where inner products are taken on representatives in `[0,d)` and `c`
/// accounts for the carry when `a+b` is reduced modulo `d`.
pub fn beta(a: &PhasePoint, b: &PhasePoint) -> Result<Rational64, PauliError> {
    let s = space_of(a, b)?;
    Ok(s.beta(s.index(a)?, s.index(b)?))
}

/// Exact matrix of `T_a = mu^{phi(a)} Z(a_Z) X(a_X)`.
pub fn pauli_matrix(a: &PhasePoint) -> CycMatrix {
    let s = PhaseSpace::new(a.d, a.n()).expect("valid phase point");
    s.pauli_matrix(s.index(a).expect("same space"))
}

/// `(-beta(a,b), a+b)`, the data of `T_a T_b = omega^{-beta} T_{a+b}`.
pub fn compose_check(a: &PhasePoint, b: &PhasePoint) -> Result<(Rational64, PhasePoint), PauliError> {
    Ok((-beta(a, b)?, a.add(b)?))
}
