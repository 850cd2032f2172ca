//! Dense matrices over an exact or floating field.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclotomic::CycNumber;

/// Scalar operations needed by [`Matrix`]. Constructors take a prototype so
/// that cyclotomic entries can inherit their field order.
pub trait Entry: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj_ref(&self) -> Self;
    fn is_zero_entry(&self) -> bool;
}

impl Entry for CycNumber {
    fn zero_like(&self) -> Self {
        CycNumber::zero(self.order())
    }
    fn one_like(&self) -> Self {
        CycNumber::one(self.order())
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj_ref(&self) -> Self {
        self.conj()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
}

impl Entry for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::zero()
    }
    fn one_like(&self) -> Self {
        Complex64::one()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj_ref(&self) -> Self {
        self.conj()
    }
    fn is_zero_entry(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Entry for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj_ref(&self) -> Self {
        self.clone()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CycMatrix = Matrix<CycNumber>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, proto: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![proto.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m.data[i * n + i] = proto.one_like();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let proto = self.data.first().or(o.data.first()).expect("empty matrix");
        let mut out = Self::zeros(self.rows, o.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_entry() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero_entry() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add_ref(&a.mul_ref(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.mul_ref(s))
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj_ref())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> T {
        let mut t = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols)
                .mul_ref(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Entry::is_zero_entry)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl CycMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(CycNumber::to_complex64)
    }
}

impl ComplexMatrix {
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// Exact rank of a cyclotomic matrix by Gaussian elimination.
pub fn exact_rank(m: &CycMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.data.iter().all(|x| x.to_rational().is_some()) {
        let rows: Vec<Vec<BigRational>> = (0..m.rows)
            .map(|i| m.row(i).iter().map(|x| x.to_rational().unwrap()).collect())
            .collect();
        return super::rational::rank(&rows);
    }
    let mut a: Vec<Vec<CycNumber>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].try_inv().expect("nonzero pivot");
        let pivot: Vec<CycNumber> = a[rank].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..m.cols {
                if !pivot[k].is_zero() {
                    row[k] = &row[k] - &(&f * &pivot[k]);
                }
            }
        }
        rank += 1;
    }
    rank
}
