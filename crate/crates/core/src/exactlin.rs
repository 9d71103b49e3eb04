//! Exact linear algebra over the rationals and small prime fields.
//!
//! Elimination is fraction-free: every row is scaled to integers and reduced
//! with Bareiss' algorithm, so intermediate entries are minors of the input
//! and all divisions are exact. Rationals only reappear during
//! back-substitution.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Column vector of rationals.
pub type Vector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_vector(entries: &[i64]) -> Vector {
    entries.iter().map(|&x| int(x)).collect()
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

/// Standard basis vector `e_i` of `Q^n` (0-based).
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Rational, a: &[Rational]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vector(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix entry count mismatch");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed for the empty case.
    pub fn from_rows(rows: &[Vector], cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r.iter().cloned());
        }
        Self::new(rows.len(), cols, entries)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector], rows: usize) -> Self {
        Self::from_rows(columns, rows).transpose()
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows.iter().map(|r| int_vector(r)).collect();
        Self::from_rows(&rows, cols)
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vector {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        determinant(self)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            columns.push(solve(self, &unit(n, j))?);
        }
        Some(Self::from_columns(&columns, n))
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "dot product length mismatch");
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Clears denominators row by row.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

fn bareiss(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                // The update reduces to scaling by pivot/prev, still exact.
                for x in row[c + 1..ncols].iter_mut() {
                    if !x.is_zero() {
                        *x = &pivot_row[c] * &*x / &prev;
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(pivots.len());
    Echelon {
        rows: m,
        pivots,
        swaps,
    }
}

fn echelon_of_rows<'a>(rows: impl Iterator<Item = &'a [Rational]>, ncols: usize) -> Echelon {
    let m: Vec<Vec<BigInt>> = rows
        .map(|r| {
            assert_eq!(r.len(), ncols, "row length mismatch");
            integer_row(r)
        })
        .collect();
    bareiss(m, ncols)
}

/// Rank over `Q`.
pub fn rank(m: &Matrix) -> usize {
    echelon_of_rows((0..m.rows()).map(|i| m.row(i)), m.cols())
        .pivots
        .len()
}

/// Rank of a family of vectors of common dimension `dim`.
pub fn rank_of(vectors: &[Vector], dim: usize) -> usize {
    echelon_of_rows(vectors.iter().map(Vec::as_slice), dim)
        .pivots
        .len()
}

pub fn is_independent(vectors: &[Vector], dim: usize) -> bool {
    rank_of(vectors, dim) == vectors.len()
}

fn determinant(m: &Matrix) -> Rational {
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let ech = bareiss(rows, n);
    if ech.pivots.len() < n {
        return Rational::zero();
    }
    let mut det = ech.rows[n - 1][n - 1].clone();
    if ech.swaps % 2 == 1 {
        det = -det;
    }
    Rational::new(det, scale)
}

fn back_substitute(ech: &Echelon, ncols: usize, x: &mut [Rational], rhs: Option<usize>) {
    for (r, &p) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = match rhs {
            Some(b) => Rational::from_integer(row[b].clone()),
            None => Rational::zero(),
        };
        for j in p + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &x[j] * Rational::from_integer(row[j].clone());
            }
        }
        x[p] = acc / Rational::from_integer(row[p].clone());
    }
}

/// One exact solution of `a x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    assert_eq!(a.rows(), b.len(), "solve: right-hand side length mismatch");
    let n = a.cols();
    let augmented: Vec<Vector> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let ech = echelon_of_rows(augmented.iter().map(Vec::as_slice), n + 1);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zero_vector(n);
    back_substitute(&ech, n, &mut x, Some(n));
    Some(x)
}

/// Basis of `{x : a x = 0}`, one vector per free column in increasing order.
pub fn nullspace(a: &Matrix) -> Vec<Vector> {
    let n = a.cols();
    let ech = echelon_of_rows((0..a.rows()).map(|i| a.row(i)), n);
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vector(n);
            x[f] = Rational::one();
            back_substitute(&ech, n, &mut x, None);
            x
        })
        .collect()
}

/// Coefficients expressing `v` in the given (independent) vectors, if `v`
/// lies in their span.
pub fn coordinates(v: &[Rational], basis: &[Vector]) -> Option<Vector> {
    let dim = v.len();
    solve(&Matrix::from_columns(basis, dim), v)
}

pub fn in_span(v: &[Rational], basis: &[Vector]) -> bool {
    let dim = v.len();
    if is_zero_vector(v) {
        return true;
    }
    let mut all = basis.to_vec();
    let r = rank_of(&all, dim);
    all.push(v.to_vec());
    rank_of(&all, dim) == r
}

/// True when `span(a) == span(b)`.
pub fn same_span(a: &[Vector], b: &[Vector], dim: usize) -> bool {
    let ra = rank_of(a, dim);
    if ra != rank_of(b, dim) {
        return false;
    }
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    rank_of(&all, dim) == ra
}

// ---------------------------------------------------------------------------
// Bilinear forms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Skew,
    Symmetric,
}

/// Bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
    kind: FormKind,
}

impl BilinearForm {
    pub fn new(gram: Matrix, kind: FormKind) -> Result<Self> {
        if !gram.is_square() {
            return precondition("Gram matrix must be square");
        }
        let ok = match kind {
            FormKind::Skew => gram.is_antisymmetric(),
            FormKind::Symmetric => gram.is_symmetric(),
        };
        if !ok {
            return precondition(format!(
                "Gram matrix does not have the declared {kind:?} symmetry"
            ));
        }
        Ok(Self { gram, kind })
    }

    /// Skew form with hyperbolic pairs `(0,1), (2,3), ...` on `Q^{2 pairs}`,
    /// padded with `extra` zero rows and columns.
    pub fn standard_skew(pairs: usize, extra: usize) -> Self {
        let n = 2 * pairs + extra;
        let mut g = Matrix::zeros(n, n);
        for p in 0..pairs {
            g[(2 * p, 2 * p + 1)] = Rational::one();
            g[(2 * p + 1, 2 * p)] = -Rational::one();
        }
        Self {
            gram: g,
            kind: FormKind::Skew,
        }
    }

    pub fn standard_symmetric(n: usize) -> Self {
        Self {
            gram: Matrix::identity(n),
            kind: FormKind::Symmetric,
        }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank(&self.gram) == self.dim()
    }
}

/// `u^T G v`.
pub fn form_value(f: &BilinearForm, u: &[Rational], v: &[Rational]) -> Rational {
    assert!(
        u.len() == f.dim() && v.len() == f.dim(),
        "form_value: vector dimension does not match the form"
    );
    dot(u, &f.gram.mul_vec(v))
}

/// Gram matrix of `f` on the given independent vectors; the kind is kept.
pub fn restrict_form(f: &BilinearForm, basis: &[Vector]) -> Result<BilinearForm> {
    if !is_independent(basis, f.dim()) {
        return precondition("restrict_form: basis vectors are linearly dependent");
    }
    let k = basis.len();
    let images: Vec<Vector> = basis.iter().map(|u| f.gram.mul_vec(u)).collect();
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = dot(&basis[i], &images[j]);
        }
    }
    Ok(BilinearForm {
        gram: g,
        kind: f.kind,
    })
}

/// Basis of the left kernel `{v : f(v, .) = 0}`; empty iff `f` is nondegenerate.
pub fn form_kernel(f: &BilinearForm) -> Vec<Vector> {
    nullspace(&f.gram.transpose())
}

// ---------------------------------------------------------------------------
// Prime fields

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of `F_p` for a small prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldScalar {
    value: u64,
    modulus: u64,
}

impl PrimeFieldScalar {
    /// Panics when `modulus` is not prime.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(is_prime(modulus), "modulus {modulus} is not prime");
        Self::reduce(value, modulus)
    }

    fn reduce(value: i64, modulus: u64) -> Self {
        Self {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| self.pow(self.modulus - 2))
    }
}

impl Add for PrimeFieldScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for PrimeFieldScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for PrimeFieldScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for PrimeFieldScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

/// The handful of field operations shared by code that runs over both `Q`
/// and `F_p`.
pub trait FieldElement:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_element(&self) -> bool;

    fn is_one_element(&self) -> bool {
        *self == self.one_like()
    }

    fn lift_i64(&self, n: i64) -> Self;
}

impl FieldElement for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
    fn lift_i64(&self, n: i64) -> Self {
        int(n)
    }
}

impl FieldElement for PrimeFieldScalar {
    fn zero_like(&self) -> Self {
        Self {
            value: 0,
            modulus: self.modulus,
        }
    }
    fn one_like(&self) -> Self {
        Self {
            value: 1 % self.modulus,
            modulus: self.modulus,
        }
    }
    fn is_zero_element(&self) -> bool {
        self.value == 0
    }
    fn lift_i64(&self, n: i64) -> Self {
        Self::reduce(n, self.modulus)
    }
}

/// `x^e` for a nonzero rational and any integer exponent.
pub fn rational_pow(x: &Rational, e: i64) -> Rational {
    assert!(!x.is_zero() || e >= 0, "negative power of zero");
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn abs_rational(x: &Rational) -> Rational {
    x.abs()
}
