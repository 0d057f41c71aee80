//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Matrices are
//! dense and row-major; vectors are rows, so a matrix acts on a row vector
//! from the right (`x·A`).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense matrix of exact rationals. `BigRational` keeps every entry normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntegerMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` is needed to give empty matrices a width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a matrix with {cols} columns", r.len())));
            }
            data.extend(r);
        }
        Ok(IntegerMatrix { rows: n, cols, data })
    }

    /// Small-integer constructor, mostly for fixtures and tests. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<BigInt> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        IntegerMatrix { rows: rows.len(), cols, data }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape("subtraction of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(IntegerMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scaled(&self, k: &BigInt) -> IntegerMatrix {
        IntegerMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// `x·A` for a row vector `x`.
    pub fn left_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        out
    }

    /// `A·y` for a column vector `y`.
    pub fn right_apply(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(y.len(), self.cols, "vector length mismatch");
        self.row_iter().map(|r| dot(r, y)).collect()
    }

    /// Stacks rows of `self` on top of rows of `other`.
    pub fn vstack(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape("vstack of matrices with different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntegerMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack of matrices with different heights".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let dst = out.row_mut(i);
            dst[..self.cols].clone_from_slice(self.row(i));
            dst[self.cols..].clone_from_slice(other.row(i));
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntegerMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row_vec(i)).collect();
        IntegerMatrix::from_rows(self.cols, rows).expect("rows share the source width")
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -&*x;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -&*x;
        }
    }

    /// Replaces rows `a`, `b` by `(p·a + q·b, r·a + s·b)`.
    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j].clone();
            let y = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = p * &x + q * &y;
            self.data[b * self.cols + j] = r * &x + s * &y;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        nonzero_rows(&h)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    /// Is this a square integer matrix with determinant ±1?
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Exact inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntegerMatrix> {
        let inv = self.to_rational().inverse()?;
        inv.to_integer().ok_or_else(|| Error::Precondition("matrix is not unimodular".into()))
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        self.try_mul(rhs).expect("matrix shapes are compatible")
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape("ragged rational rows".into()));
            }
            data.extend(r);
        }
        Ok(RationalMatrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigRational> {
        self.row(i).to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
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

    pub fn try_mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape("rational product shape mismatch".into()));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `x·A` for a rational row vector.
    pub fn left_apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        out
    }

    /// Gauss–Jordan inverse; fails on singular input.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(Error::Degenerate)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &piv;
                inv[(k, j)] = &inv[(k, j)] / &piv;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let d = &f * &a[(k, j)];
                    a[(i, j)] -= d;
                    let d = &f * &inv[(k, j)];
                    inv[(i, j)] -= d;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }

    /// Least common multiple of all denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bilinear form `x·G·yᵀ`.
pub fn bilinear(gram: &IntegerMatrix, x: &[BigInt], y: &[BigInt]) -> BigInt {
    dot(&gram.left_apply(x), y)
}

pub fn bilinear_q(gram: &RationalMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    dot_q(&gram.left_apply(x), y)
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn vec_from_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// gcd of all entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive_vector(v: &[BigInt]) -> bool {
    content(v).is_one()
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub(crate) fn nonzero_rows(m: &IntegerMatrix) -> usize {
    m.row_iter().filter(|r| r.iter().any(|x| !x.is_zero())).count()
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and `H = U·A`.
///
/// `H` is in row-echelon form with positive pivots and every entry above a
/// pivot reduced into `[0, pivot)`; zero rows sit at the bottom. Columns are
/// scanned left to right and each column is cleared from the top down, so the
/// transform is reproducible.
pub fn hnf(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut p = 0;
    for col in 0..n {
        if p == m {
            break;
        }
        for r in p + 1..m {
            if h[(r, col)].is_zero() {
                continue;
            }
            let x = h[(p, col)].clone();
            let y = h[(r, col)].clone();
            let (g, s, t) = extended_gcd(&x, &y);
            let xr = &x / &g;
            let yr = &y / &g;
            let neg_yr = -yr;
            h.combine_rows(p, r, &s, &t, &neg_yr, &xr);
            u.combine_rows(p, r, &s, &t, &neg_yr, &xr);
        }
        if h[(p, col)].is_zero() {
            continue;
        }
        if h[(p, col)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let piv = h[(p, col)].clone();
        for r in 0..p {
            let q = h[(r, col)].div_floor(&piv);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(r, p, &k);
                u.add_row_multiple(r, p, &k);
            }
        }
        p += 1;
    }
    (h, u)
}

/// Result of a Smith normal form computation: `D = U·A·V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl Smith {
    /// Diagonal entries `d₁ | d₂ | …` (including trailing zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries greater than one.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
    }
}

/// Smith normal form with both transforms.
pub fn snf(a: &IntegerMatrix) -> Smith {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let piv = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&piv);
                let k = -q;
                d.add_row_multiple(i, t, &k);
                u.add_row_multiple(i, t, &k);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&piv);
                let k = -q;
                d.add_col_multiple(j, t, &k);
                v.add_col_multiple(j, t, &k);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull a row with a non-multiple into row t
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { d, u, v }
}

/// Basis (as rows, in Hermite normal form) of the integer left kernel `{x : x·A = 0}`.
///
/// The basis spans a saturated sublattice of `ℤ^rows`.
pub fn kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let (h, u) = hnf(a);
    let r = nonzero_rows(&h);
    let k = u.select_rows(r..a.rows());
    hnf(&k).0
}

/// Some integer `x` with `x·A = b`, or `None` when no integral solution exists.
pub fn solve_integral(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.cols() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} columns", b.len(), a.cols())));
    }
    let (h, u) = hnf(a);
    let m = a.rows();
    let mut residual = b.to_vec();
    let mut y = vec![BigInt::zero(); m];
    for i in 0..m {
        let Some(pc) = h.row(i).iter().position(|x| !x.is_zero()) else {
            break;
        };
        let (q, rem) = residual[pc].div_rem(&h[(i, pc)]);
        if !rem.is_zero() {
            return Ok(None);
        }
        if !q.is_zero() {
            for (res, hij) in residual.iter_mut().zip(h.row(i)) {
                *res -= &q * hij;
            }
        }
        y[i] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(u.left_apply(&y)))
}

/// Solves `x·A = b` over the rationals when `A` has full row rank; `None` if inconsistent.
pub fn solve_rational(a: &RationalMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    // Work on the transposed system Aᵀ·xᵀ = bᵀ with an augmented column.
    let m = a.rows();
    let n = a.cols();
    let mut aug = RationalMatrix::zeros(n, m + 1);
    for i in 0..m {
        for j in 0..n {
            aug[(j, i)] = a[(i, j)].clone();
        }
    }
    for (j, bj) in b.iter().enumerate() {
        aug[(j, m)] = bj.clone();
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..n).find(|&r| !aug[(r, col)].is_zero()) else {
            continue;
        };
        aug.swap_rows(p, row);
        let piv = aug[(row, col)].clone();
        for j in 0..=m {
            aug[(row, j)] = &aug[(row, j)] / &piv;
        }
        for r in 0..n {
            if r != row && !aug[(r, col)].is_zero() {
                let f = aug[(r, col)].clone();
                for j in 0..=m {
                    let d = &f * &aug[(row, j)];
                    aug[(r, j)] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..n).any(|r| !aug[(r, m)].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, m)].clone();
    }
    Some(x)
}

/// Completes a primitive integer vector to a unimodular matrix whose first row is `v`.
pub fn complete_to_unimodular(v: &[BigInt]) -> Result<IntegerMatrix> {
    let n = v.len();
    let col = IntegerMatrix::from_vec(n, 1, v.to_vec())?;
    let (h, u) = hnf(&col);
    if !h[(0, 0)].is_one() {
        return Err(Error::NotPrimitive(format!("vector with content {}", content(v))));
    }
    // u·v = e₁, so the first column of u⁻¹ is v; its transpose has v as first row.
    Ok(u.unimodular_inverse()?.transpose())
}
