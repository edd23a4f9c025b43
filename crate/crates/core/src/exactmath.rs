//! Exact scalars (rationals and prime fields) and dense/sparse exact linear
//! algebra.
//!
//! Every echelon form produced here is the reduced row echelon form, so the
//! outputs of [`Matrix::solve`] and [`Matrix::kernel_basis`] are canonical:
//! free variables are set to zero and kernel vectors are indexed by the free
//! columns in increasing order.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// The ground field of an algebra instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "prime {p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Prime field Z/p. Moduli are limited to 32 bits so products fit in u64.
    pub fn prime(p: u64) -> Result<Self, MathError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(MathError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den` in this field. Panics when `den` is zero in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n / d
    }

    pub fn sign(&self, parity: u8) -> Scalar {
        if parity % 2 == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses `p/q` or an integer. Prime-field inputs are reduced modulo p.
    pub fn parse(&self, text: &str) -> Result<Scalar, MathError> {
        let err = || MathError::Parse(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| err())?,
                BigInt::from_str(d.trim()).map_err(|_| err())?,
            ),
            None => (BigInt::from_str(text.trim()).map_err(|_| err())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        match *self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| x.mod_floor(&m).to_u64().unwrap();
                let d = reduce(&den);
                if d == 0 {
                    return Err(err());
                }
                let n = Scalar::Mod { value: reduce(&num), modulus: p };
                Ok(n / Scalar::Mod { value: d, modulus: p })
            }
        }
    }
}

/// An element of a [`Field`]. Rationals are always kept in lowest terms with a
/// positive denominator (guaranteed by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn same_field(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!("scalar field mismatch: {} vs {}", self.field(), other.field());
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.same_field(rhs);
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| match (a, b) {
    (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
    (Scalar::Mod { value: x, modulus }, Scalar::Mod { value: y, .. }) => Scalar::Mod {
        value: (x + y) % modulus,
        modulus: *modulus,
    },
    _ => unreachable!(),
});

binop!(Sub, sub, |a, b| match (a, b) {
    (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
    (Scalar::Mod { value: x, modulus }, Scalar::Mod { value: y, .. }) => Scalar::Mod {
        value: (x + modulus - y) % modulus,
        modulus: *modulus,
    },
    _ => unreachable!(),
});

binop!(Mul, mul, |a, b| match (a, b) {
    (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
    (Scalar::Mod { value: x, modulus }, Scalar::Mod { value: y, .. }) => Scalar::Mod {
        value: x * y % modulus,
        modulus: *modulus,
    },
    _ => unreachable!(),
});

binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero scalar");
    a * &inv
});

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Column vectors are plain coordinate lists.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: Field, len: usize) -> Vector {
    vec![field.zero(); len]
}

pub fn unit_vector(field: Field, len: usize, index: usize) -> Vector {
    let mut v = zero_vector(field, len);
    v[index] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

/// Sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

/// Incrementally maintained reduced row echelon form of a row space.
///
/// Rows are kept fully reduced at all times: every pivot column is zero in
/// every row except its own, and pivots are normalized to one.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<SparseRow>,
    /// pivot column -> row index in `rows`
    pivot_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivot_of_col: vec![None; ncols] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }

    /// Reduces a dense vector against the current rows.
    pub fn reduce_dense(&self, v: &mut [Scalar]) {
        let hits: Vec<(usize, Scalar)> = (0..self.ncols)
            .filter(|&c| self.pivot_of_col[c].is_some() && !v[c].is_zero())
            .map(|c| (c, v[c].clone()))
            .collect();
        for (c, coeff) in hits {
            let row = &self.rows[self.pivot_of_col[c].unwrap()];
            for (j, x) in row {
                v[*j] = &v[*j] - &(&coeff * x);
            }
        }
    }

    /// True when `v` lies in the row space.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce_dense(&mut w);
        is_zero_vector(&w)
    }

    /// Adds a sparse row; returns whether it increased the rank.
    pub fn insert_sparse(&mut self, row: &[(usize, Scalar)]) -> bool {
        let mut dense = zero_vector(self.field, self.ncols);
        for (j, x) in row {
            dense[*j] = &dense[*j] + x;
        }
        self.insert_dense(dense)
    }

    /// Adds a dense row; returns whether it increased the rank.
    pub fn insert_dense(&mut self, mut dense: Vector) -> bool {
        self.reduce_dense(&mut dense);
        let Some(pivot) = dense.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = dense[pivot].inv().unwrap();
        let new_row: SparseRow = dense
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x * &inv))
            .collect();
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pivot, |(j, _)| *j) {
                let coeff = row[pos].1.clone();
                *row = sparse_axpy(row, &(-&coeff), &new_row);
            }
        }
        self.pivot_of_col[pivot] = Some(self.rows.len());
        self.rows.push(new_row);
        true
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of_col[c].is_some()).collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of_col[c].is_none()).collect()
    }

    /// Rows sorted by pivot column (the canonical RREF).
    pub fn rows(&self) -> Vec<&SparseRow> {
        self.pivots()
            .into_iter()
            .map(|c| &self.rows[self.pivot_of_col[c].unwrap()])
            .collect()
    }

    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseRow> {
        self.pivot_of_col[col].map(|r| &self.rows[r])
    }

    /// Basis of the null space of the row space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for f in self.free_columns() {
            let mut v = zero_vector(self.field, self.ncols);
            v[f] = self.field.one();
            for row in &self.rows {
                let pivot = row[0].0;
                if let Ok(pos) = row.binary_search_by_key(&f, |(j, _)| *j) {
                    v[pivot] = -&row[pos].1;
                }
            }
            out.push(v);
        }
        out
    }
}

fn sparse_axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense exact matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows. All entries must belong to `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self, MathError> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MathError::DimensionMismatch { expected: cols, found: row.len() });
            }
            for x in row {
                if x.field() != field {
                    return Err(MathError::FieldMismatch(field, x.field()));
                }
                data.push(x);
            }
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("ragged integer matrix")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, nrows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(field, nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (x, y) in self.row(r).iter().zip(v) {
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.get(k, c);
                    if !y.is_zero() {
                        let v = out.get(r, c) + &(x * y);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: add_vectors(&self.data, &other.data),
        }
    }

    /// Row echelon form of the row space.
    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert_dense(self.row(r).to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Solves `self * x = v`. Returns `None` when inconsistent; underdetermined
    /// systems get the solution with all free variables zero.
    pub fn solve(&self, v: &[Scalar]) -> Result<Option<Vector>, MathError> {
        if v.len() != self.rows {
            return Err(MathError::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field) {
            return Err(MathError::FieldMismatch(self.field, x.field()));
        }
        let mut e = Echelon::new(self.field, self.cols + 1);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(v[r].clone());
            e.insert_dense(row);
        }
        if e.is_pivot(self.cols) {
            return Ok(None);
        }
        let mut x = zero_vector(self.field, self.cols);
        for row in e.rows() {
            let pivot = row[0].0;
            if let Some((_, rhs)) = row.iter().find(|(j, _)| *j == self.cols) {
                x[pivot] = rhs.clone();
            }
        }
        Ok(Some(x))
    }

    /// Null-space basis canonicalized by the reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        self.echelon().kernel_basis()
    }

    pub fn invert(&self) -> Result<Option<Matrix>, MathError> {
        if self.rows != self.cols {
            return Err(MathError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut e = Echelon::new(self.field, 2 * n);
        for r in 0..n {
            let mut row = self.row(r).to_vec();
            row.extend(unit_vector(self.field, n, r));
            e.insert_dense(row);
        }
        if (0..n).any(|c| !e.is_pivot(c)) {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for (i, row) in e.rows().into_iter().enumerate() {
            for (j, x) in row {
                if *j >= n {
                    inv.set(i, j - n, x.clone());
                }
            }
        }
        Ok(Some(inv))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Scalar, MathError> {
        if self.rows != self.cols {
            return Err(MathError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != col {
                for c in 0..n {
                    let tmp = a.get(p, c).clone();
                    a.set(p, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                }
                det = -det;
            }
            let pivot = a.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for r in col + 1..n {
                let factor = a.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c) - &(&factor * a.get(col, c));
                    a.set(r, c, v);
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64) -> Scalar {
        Q.from_i64(n)
    }

    #[test]
    fn solve_identity() {
        let m = Matrix::identity(Q, 2);
        assert_eq!(m.solve(&[q(3), q(5)]).unwrap(), Some(vec![q(3), q(5)]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = Matrix::from_i64(Q, &[&[1, 1], &[2, 2]]);
        assert_eq!(m.solve(&[q(1), q(3)]).unwrap(), None);
    }

    #[test]
    fn solve_mod_five_matches_exhaustive_search() {
        let f5 = Field::prime(5).unwrap();
        let m = Matrix::from_i64(f5, &[&[2]]);
        let target = f5.from_i64(3);
        let brute: Vec<i64> =
            (0..5).filter(|&x| f5.from_i64(2) * f5.from_i64(x) == target).collect();
        assert_eq!(brute, vec![4]);
        assert_eq!(m.solve(&[target]).unwrap(), Some(vec![f5.from_i64(4)]));
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let m = Matrix::from_i64(Q, &[&[1, 1, 0]]);
        assert_eq!(m.solve(&[q(2)]).unwrap(), Some(vec![q(2), q(0), q(0)]));
    }

    #[test]
    fn solve_rejects_field_mismatch() {
        let m = Matrix::identity(Q, 1);
        let f7 = Field::prime(7).unwrap();
        assert!(matches!(m.solve(&[f7.one()]), Err(MathError::FieldMismatch(..))));
    }

    #[test]
    fn kernel_cases() {
        assert!(Matrix::identity(Q, 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(Q, 2, 3).kernel_basis().len(), 3);
        let k = Matrix::from_i64(Q, &[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn invert_cases() {
        assert_eq!(Matrix::identity(Q, 3).invert().unwrap(), Some(Matrix::identity(Q, 3)));
        assert_eq!(Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]).invert().unwrap(), None);
        let m = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let inv = m.invert().unwrap().unwrap();
        let expected = Matrix::from_rows(
            Q,
            vec![vec![q(-2), q(1)], vec![Q.ratio(3, 2), Q.ratio(-1, 2)]],
        )
        .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(m.matmul(&inv), Matrix::identity(Q, 2));
        assert!(matches!(Matrix::zeros(Q, 2, 3).invert(), Err(MathError::NotSquare { .. })));
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn parse_scalars() {
        assert_eq!(Q.parse("-6/4").unwrap(), Q.ratio(-3, 2));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse("1/2").unwrap(), f7.from_i64(4));
        assert!(Q.parse("1/0").is_err());
        assert_eq!(Q.ratio(-3, 2).to_string(), "-3/2");
    }

    #[test]
    fn determinant_matches_invertibility() {
        let m = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.determinant().unwrap(), q(-2));
        assert!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).determinant().unwrap().is_zero());
    }
}
