//! Exact short-vector machinery: integral LLL and Fincke–Pohst enumeration.
//!
//! There is no floating point anywhere in here. Enumeration first runs on
//! 128-bit rationals with checked arithmetic and transparently restarts on
//! big rationals if any intermediate value overflows, so the result is
//! always exact.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{IntegerMatrix, RationalMatrix};
use crate::serial;

/// Output of [`lll_reduce`]: `gram = T·G·Tᵀ` for the unimodular `transform` T.
#[derive(Clone, Debug)]
pub struct LllReduced {
    pub gram: IntegerMatrix,
    pub transform: IntegerMatrix,
}

/// The usual `δ = 99/100`.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

/// Integral LLL on a positive definite Gram matrix.
///
/// Works entirely with the integers `dᵢ` (leading principal minors) and
/// `λᵢⱼ = dⱼ·μᵢⱼ`, so no rational Gram–Schmidt data is ever stored.
pub fn lll_reduce(gram: &IntegerMatrix, delta: &BigRational) -> Result<LllReduced> {
    if !gram.is_symmetric() {
        return Err(Error::Shape("LLL needs a symmetric Gram matrix".into()));
    }
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta >= &BigRational::one() {
        return Err(Error::Precondition(format!("LLL parameter {delta} outside (1/4, 1)")));
    }
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let n = gram.rows();
    let mut g = gram.clone();
    let mut h = IntegerMatrix::identity(n);
    if n == 0 {
        return Ok(LllReduced { gram: g, transform: h });
    }
    // 1-based bookkeeping: d[0] = 1, d[i] for vector i (stored at index i-1)
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = g[(0, 0)].clone();
    if !d[1].is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut k = 2;
    let mut k_max = 1;

    while k <= n {
        if k > k_max {
            k_max = k;
            for j in 1..=k {
                let mut u = g[(k - 1, j - 1)].clone();
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            redi(&mut g, &mut h, &d, &mut lam, k, k - 1);
            let lhs = &dq * &d[k] * &d[k - 2];
            let rhs = &dp * &d[k - 1] * &d[k - 1] - &dq * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swapi(&mut g, &mut h, &mut d, &mut lam, k, k_max);
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    redi(&mut g, &mut h, &d, &mut lam, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(LllReduced { gram: g, transform: h })
}

fn redi(g: &mut IntegerMatrix, h: &mut IntegerMatrix, d: &[BigInt], lam: &mut [Vec<BigInt>], k: usize, l: usize) {
    let two_lam: BigInt = &lam[k][l] * 2;
    if two_lam.abs() <= d[l] {
        return;
    }
    // nearest integer to λ/d
    let q = (&two_lam + &d[l]).div_floor(&(&d[l] * 2));
    let neg = -&q;
    g.add_row_multiple(k - 1, l - 1, &neg);
    g.add_col_multiple(k - 1, l - 1, &neg);
    h.add_row_multiple(k - 1, l - 1, &neg);
    lam[k][l] -= &q * &d[l];
    for i in 1..l {
        let v = &q * &lam[l][i];
        lam[k][i] -= v;
    }
}

fn swapi(
    g: &mut IntegerMatrix,
    h: &mut IntegerMatrix,
    d: &mut [BigInt],
    lam: &mut [Vec<BigInt>],
    k: usize,
    k_max: usize,
) {
    g.swap_rows(k - 1, k - 2);
    g.swap_cols(k - 1, k - 2);
    h.swap_rows(k - 1, k - 2);
    for j in 1..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
    for i in k + 1..=k_max {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
        lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k];
    }
    d[k - 1] = b;
}

/// Exact scalar used by the enumeration kernel; every operation may refuse (overflow).
trait Exact: Clone + PartialOrd {
    fn from_big(x: &BigRational) -> Option<Self>;
    fn from_int(x: i64) -> Self;
    fn nil() -> Self;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn mul_int(&self, k: i64) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
    /// Integers `x` with `(x - center)² ≤ radius_sq`, as an inclusive range.
    fn window(center: &Self, radius_sq: &Self) -> Option<(i64, i64)>;
}

type Q128 = Ratio<i128>;

impl Exact for Q128 {
    fn from_big(x: &BigRational) -> Option<Self> {
        Some(Ratio::new_raw(x.numer().to_i128()?, x.denom().to_i128()?))
    }
    fn from_int(x: i64) -> Self {
        Ratio::from_integer(x as i128)
    }
    fn nil() -> Self {
        Ratio::from_integer(0)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn mul_int(&self, k: i64) -> Option<Self> {
        if k == 0 {
            return Some(Self::nil());
        }
        let k = k as i128;
        let g = k.gcd(self.denom());
        let num = self.numer().checked_mul(&(k / g))?;
        Some(Ratio::new_raw(num, self.denom() / g))
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn window(center: &Self, radius_sq: &Self) -> Option<(i64, i64)> {
        let (a, b) = (*center.numer(), *center.denom());
        let (p, q) = (*radius_sq.numer(), *radius_sq.denom());
        if p < 0 {
            return Some((1, 0));
        }
        let x = p.checked_mul(b)?.checked_mul(b)? / q;
        let m = x.isqrt();
        let lo = -(a.checked_sub(m)?.checked_neg()?.div_euclid(b));
        let hi = a.checked_add(m)?.div_euclid(b);
        Some((i64::try_from(lo).ok()?, i64::try_from(hi).ok()?))
    }
}

impl Exact for BigRational {
    fn from_big(x: &BigRational) -> Option<Self> {
        Some(x.clone())
    }
    fn from_int(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn mul_int(&self, k: i64) -> Option<Self> {
        Some(self * BigInt::from(k))
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn window(center: &Self, radius_sq: &Self) -> Option<(i64, i64)> {
        if radius_sq.is_negative() {
            return Some((1, 0));
        }
        let (a, b) = (center.numer(), center.denom());
        let x = (radius_sq.numer() * b * b).div_floor(radius_sq.denom());
        let m = x.sqrt();
        let lo = -((-(a - &m)).div_floor(b));
        let hi = (a + &m).div_floor(b);
        Some((lo.to_i64()?, hi.to_i64()?))
    }
}

/// Rational Cholesky data: `q(x) = Σ Bᵢ (xᵢ + Σ_{j>i} μⱼᵢ xⱼ)²`.
struct Decomposition {
    b: Vec<BigRational>,
    /// `mu[j][i]` for `j > i`.
    mu: Vec<Vec<BigRational>>,
}

fn decompose(gram: &RationalMatrix) -> Result<Decomposition> {
    let n = gram.rows();
    let mut b = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[(i, j)].clone();
            for l in 0..j {
                s -= &mu[i][l] * &mu[j][l] * &b[l];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = gram[(i, i)].clone();
        for l in 0..i {
            s -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        if !s.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        b[i] = s;
    }
    Ok(Decomposition { b, mu })
}

/// Search parameters for the enumeration kernel.
struct Search<'a> {
    dec: &'a Decomposition,
    center: &'a [BigRational],
    bound: &'a BigRational,
    /// Enumerate one vector per ± pair and skip zero (zero center only).
    symmetric: bool,
}

/// Depth-first Fincke–Pohst. Returns `None` if the scalar type overflowed.
fn run_kernel<S: Exact>(
    search: &Search<'_>,
    visit: &mut dyn FnMut(&[i64], &BigRational) -> ControlFlow<()>,
) -> Option<()> {
    let n = search.dec.b.len();
    if n == 0 {
        return Some(());
    }
    let b: Vec<S> = search.dec.b.iter().map(S::from_big).collect::<Option<_>>()?;
    let mu: Vec<Vec<S>> = search
        .dec
        .mu
        .iter()
        .map(|row| row.iter().map(S::from_big).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let c: Vec<S> = search.center.iter().map(S::from_big).collect::<Option<_>>()?;
    let bound = S::from_big(search.bound)?;
    let shifted = search.center.iter().any(|x| !x.is_zero());

    let mut x = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let mut t: Vec<S> = vec![S::nil(); n];
    let mut rem: Vec<S> = vec![S::nil(); n];
    // zero_above[i]: all coordinates above level i are zero
    let mut zero_above = vec![true; n];

    let center_at = |level: usize, x: &[i64]| -> Option<S> {
        let mut acc = c[level].clone();
        for j in level + 1..n {
            if shifted {
                let diff = S::from_int(x[j]).sub(&c[j])?;
                acc = acc.sub(&mu[j][level].mul(&diff)?)?;
            } else if x[j] != 0 {
                acc = acc.sub(&mu[j][level].mul_int(x[j])?)?;
            }
        }
        Some(acc)
    };
    let open = |level: usize, x: &mut [i64], hi: &mut [i64], t: &mut [S], rem: &[S], zero_above: &[bool]| -> Option<()> {
        let r = rem[level].div(&b[level])?;
        let (lo, h) = S::window(&t[level], &r)?;
        hi[level] = h;
        x[level] = if search.symmetric && zero_above[level] { lo.max(if level == 0 { 1 } else { 0 }) } else { lo };
        Some(())
    };

    let mut level = n - 1;
    t[level] = c[level].clone();
    rem[level] = bound.clone();
    open(level, &mut x, &mut hi, &mut t, &rem, &zero_above)?;
    loop {
        if x[level] > hi[level] {
            level += 1;
            if level == n {
                return Some(());
            }
            x[level] += 1;
            continue;
        }
        let diff = S::from_int(x[level]).sub(&t[level])?;
        let used = b[level].mul(&diff.mul(&diff)?)?;
        let next = rem[level].sub(&used)?;
        if level == 0 {
            let norm = bound.sub(&next)?.to_big();
            if visit(&x, &norm).is_break() {
                return Some(());
            }
            x[0] += 1;
            continue;
        }
        let za = zero_above[level] && x[level] == 0;
        level -= 1;
        zero_above[level] = za;
        rem[level] = next;
        t[level] = center_at(level, &x)?;
        open(level, &mut x, &mut hi, &mut t, &rem, &zero_above)?;
    }
}

/// Runs the kernel on 128-bit rationals, falling back to big rationals on overflow.
///
/// The visitor is re-run from scratch after a fallback, so it must be able to
/// reset: `reset` is called before each attempt.
fn enumerate_exact<V>(search: &Search<'_>, state: &mut V, reset: fn(&mut V), visit: fn(&mut V, &[i64], &BigRational) -> ControlFlow<()>) {
    reset(state);
    let ok = run_kernel::<Q128>(search, &mut |x, nrm| visit(state, x, nrm));
    if ok.is_none() {
        log::debug!("enumeration overflowed 128-bit rationals, restarting with big rationals");
        reset(state);
        run_kernel::<BigRational>(search, &mut |x, nrm| visit(state, x, nrm))
            .expect("big rational arithmetic never overflows");
    }
}

/// A positive definite form prepared for enumeration: LLL-reduced, decomposed.
pub struct Enumerator {
    transform: IntegerMatrix,
    inverse: RationalMatrix,
    dec: Decomposition,
    dim: usize,
}

impl Enumerator {
    /// Prepares an integral positive definite Gram matrix.
    pub fn new(gram: &IntegerMatrix) -> Result<Self> {
        let red = lll_reduce(gram, &default_delta())?;
        Self::from_reduced(red)
    }

    /// Prepares a rational positive definite Gram matrix (scaled to integers for LLL).
    pub fn new_rational(gram: &RationalMatrix) -> Result<Self> {
        let den = gram.denominator_lcm();
        let scaled = gram
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| (x * &den).to_integer()).collect())
            .collect();
        let scaled = IntegerMatrix::from_rows(gram.cols(), scaled)?;
        let red = lll_reduce(&scaled, &default_delta())?;
        let tq = red.transform.to_rational();
        let g = tq.try_mul(gram)?.try_mul(&tq.transpose())?;
        let inverse = red.transform.unimodular_inverse()?.to_rational();
        Ok(Enumerator { dim: gram.rows(), dec: decompose(&g)?, inverse, transform: red.transform })
    }

    fn from_reduced(red: LllReduced) -> Result<Self> {
        let dim = red.gram.rows();
        let dec = decompose(&red.gram.to_rational())?;
        let inverse = red.transform.unimodular_inverse()?.to_rational();
        Ok(Enumerator { transform: red.transform, inverse, dec, dim })
    }

    fn to_original(&self, y: &[i64]) -> Vec<BigInt> {
        let y: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        self.transform.left_apply(&y)
    }

    /// Every nonzero `x` with `q(x) ≤ bound`, one per ± pair, with norms.
    pub fn short_vectors(&self, bound: &BigRational) -> Vec<(Vec<BigInt>, BigRational)> {
        let zero = vec![BigRational::zero(); self.dim];
        let search = Search { dec: &self.dec, center: &zero, bound, symmetric: true };
        let mut found: Vec<(Vec<i64>, BigRational)> = Vec::new();
        enumerate_exact(&search, &mut found, |f| f.clear(), |f, x, nrm| {
            f.push((x.to_vec(), nrm.clone()));
            ControlFlow::Continue(())
        });
        found.into_iter().map(|(y, nrm)| (self.to_original(&y), nrm)).collect()
    }

    /// First nonzero vector with `q(x) ≤ bound` in depth-first order.
    pub fn first_short_vector(&self, bound: &BigRational) -> Option<(Vec<BigInt>, BigRational)> {
        let zero = vec![BigRational::zero(); self.dim];
        let search = Search { dec: &self.dec, center: &zero, bound, symmetric: true };
        let mut hit: Option<(Vec<i64>, BigRational)> = None;
        enumerate_exact(&search, &mut hit, |h| *h = None, |h, x, nrm| {
            *h = Some((x.to_vec(), nrm.clone()));
            ControlFlow::Break(())
        });
        hit.map(|(y, nrm)| (self.to_original(&y), nrm))
    }

    /// Every integer `x` with `q(x - center) ≤ bound`, with the value `q(x - center)`.
    pub fn close_vectors(&self, center: &[BigRational], bound: &BigRational) -> Vec<(Vec<BigInt>, BigRational)> {
        assert_eq!(center.len(), self.dim);
        // q(yT - c) = q'(y - c·T⁻¹)
        let shifted = self.inverse.left_apply(center);
        let search = Search { dec: &self.dec, center: &shifted, bound, symmetric: false };
        let mut found: Vec<(Vec<i64>, BigRational)> = Vec::new();
        enumerate_exact(&search, &mut found, |f| f.clear(), |f, x, nrm| {
            f.push((x.to_vec(), nrm.clone()));
            ControlFlow::Continue(())
        });
        found.into_iter().map(|(y, nrm)| (self.to_original(&y), nrm)).collect()
    }
}

/// Flips a vector so its first nonzero coordinate is positive.
pub fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// All short vectors of a lattice up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectorReport {
    pub bound: BigInt,
    /// Basis coordinates, canonical sign, lexicographically sorted.
    pub vectors: Vec<Vec<BigInt>>,
    pub norms: Vec<BigInt>,
    pub complete: bool,
}

impl ShortVectorReport {
    pub fn count_pairs(&self) -> usize {
        self.vectors.len()
    }

    pub fn to_document(&self, limit: Option<usize>) -> ShortVectorDocument {
        let keep = limit.unwrap_or(usize::MAX).min(self.vectors.len());
        ShortVectorDocument {
            bound: serial::int_to_string(&self.bound),
            count_pairs: self.vectors.len(),
            vectors: self.vectors[..keep].iter().map(|v| serial::ints_to_strings(v)).collect(),
            truncated: keep < self.vectors.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShortVectorDocument {
    pub bound: String,
    pub count_pairs: usize,
    pub vectors: Vec<Vec<String>>,
    pub truncated: bool,
}

fn require_positive_definite(gram: &IntegerMatrix) -> Result<()> {
    let (_, q, z) = crate::lattice::inertia(gram);
    if q > 0 || z > 0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// Complete list of `v` with `0 < (v,v) ≤ bound`, up to sign, in basis coordinates.
pub fn short_vectors_of_gram(gram: &IntegerMatrix, bound: &BigInt) -> Result<ShortVectorReport> {
    require_positive_definite(gram)?;
    let en = Enumerator::new(gram)?;
    let mut found: Vec<(Vec<BigInt>, BigInt)> = en
        .short_vectors(&BigRational::from_integer(bound.clone()))
        .into_iter()
        .map(|(v, nrm)| (canonical_sign(v), nrm.to_integer()))
        .collect();
    found.sort();
    let (vectors, norms) = found.into_iter().unzip();
    Ok(ShortVectorReport { bound: bound.clone(), vectors, norms, complete: true })
}

pub fn short_vectors(l: &Lattice, bound: &BigInt) -> Result<ShortVectorReport> {
    short_vectors_of_gram(&l.gram(), bound)
}

/// First vector of norm at most `bound` in the deterministic search order.
pub fn first_short_vector(l: &Lattice, bound: &BigInt) -> Result<Option<(Vec<BigInt>, BigInt)>> {
    let gram = l.gram();
    require_positive_definite(&gram)?;
    let en = Enumerator::new(&gram)?;
    Ok(en
        .first_short_vector(&BigRational::from_integer(bound.clone()))
        .map(|(v, nrm)| (canonical_sign(v), nrm.to_integer())))
}

/// A vector of minimal norm, found by probing bounds 2, 4, 6, ….
pub fn minimal_vector(l: &Lattice) -> Result<(Vec<BigInt>, BigInt)> {
    let gram = l.gram();
    require_positive_definite(&gram)?;
    if l.rank() == 0 {
        return Err(Error::Precondition("minimum of the zero lattice".into()));
    }
    let en = Enumerator::new(&gram)?;
    let mut bound = BigInt::from(2);
    loop {
        if let Some((v, nrm)) = en.first_short_vector(&BigRational::from_integer(bound.clone())) {
            return Ok((canonical_sign(v), nrm.to_integer()));
        }
        bound += 2;
    }
}

pub fn min_norm(l: &Lattice) -> Result<BigInt> {
    Ok(minimal_vector(l)?.1)
}

/// No vectors of norm 2 (and, for even lattices, none shorter).
pub fn is_rootless(l: &Lattice) -> Result<bool> {
    if l.rank() == 0 {
        return Ok(true);
    }
    Ok(first_short_vector(l, &BigInt::from(2))?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard;

    fn gs_check(gram: &IntegerMatrix, delta: &BigRational) {
        // independent rational Gram–Schmidt
        let dec = decompose(&gram.to_rational()).unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for i in 1..gram.rows() {
            for j in 0..i {
                assert!(dec.mu[i][j].abs() <= half, "not size reduced at ({i},{j})");
            }
            let rhs = (delta - &dec.mu[i][i - 1] * &dec.mu[i][i - 1]) * &dec.b[i - 1];
            assert!(dec.b[i] >= rhs, "Lovász condition fails at {i}");
        }
    }

    #[test]
    fn lll_identity_and_reduced() {
        let id = IntegerMatrix::identity(3);
        let r = lll_reduce(&id, &default_delta()).unwrap();
        assert_eq!(r.gram, id);
        let g = IntegerMatrix::from_i64(&[&[4, 2], &[2, 4]]);
        let r = lll_reduce(&g, &default_delta()).unwrap();
        assert_eq!(r.gram, g);
    }

    /// Lagrange–Gauss reduction of a binary form, returning the sorted diagonal.
    fn lagrange_diagonal(a: i64, b: i64, c: i64) -> (i64, i64) {
        // form a x² + 2b xy + c y²
        let (mut a, mut b, mut c) = (a, b, c);
        loop {
            if a > c {
                std::mem::swap(&mut a, &mut c);
            }
            let q = ((b as f64) / (a as f64)).round() as i64;
            if q == 0 {
                return (a, c);
            }
            c = c - 2 * q * b + q * q * a;
            b -= q * a;
        }
    }

    #[test]
    fn lll_skewed_rank_two() {
        // basis (2,0), (3,1) of the standard plane
        let g = IntegerMatrix::from_i64(&[&[4, 6], &[6, 10]]);
        let r = lll_reduce(&g, &default_delta()).unwrap();
        let (lo, hi) = lagrange_diagonal(4, 6, 10);
        let mut d = vec![r.gram[(0, 0)].clone(), r.gram[(1, 1)].clone()];
        d.sort();
        assert_eq!(d, vec![BigInt::from(lo), BigInt::from(hi)]);
        assert!(d[1] <= BigInt::from(10));
        assert_eq!(&(&r.transform * &g) * &r.transform.transpose(), r.gram);
        gs_check(&r.gram, &default_delta());
    }

    #[test]
    fn lll_rejects_indefinite() {
        let u = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(lll_reduce(&u, &default_delta()), Err(Error::NotPositiveDefinite)));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(lll_reduce(&IntegerMatrix::identity(2), &bad).is_err());
    }

    #[test]
    fn lll_conditions_on_e8_mixed() {
        let e8 = standard::e8_gram();
        let t = IntegerMatrix::from_i64(&[
            &[1, 3, 0, 0, 0, 0, 0, 0],
            &[0, 1, 5, 0, 0, 0, 0, 0],
            &[0, 0, 1, -4, 0, 0, 0, 0],
            &[0, 0, 0, 1, 7, 0, 0, 0],
            &[0, 0, 0, 0, 1, 2, 0, 0],
            &[0, 0, 0, 0, 0, 1, -3, 0],
            &[0, 0, 0, 0, 0, 0, 1, 6],
            &[0, 0, 0, 0, 0, 0, 0, 1],
        ]);
        let g = &(&t * &e8) * &t.transpose();
        let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
        let r = lll_reduce(&g, &delta).unwrap();
        assert!(r.transform.is_unimodular());
        assert_eq!(&(&r.transform * &g) * &r.transform.transpose(), r.gram);
        gs_check(&r.gram, &delta);
    }

    #[test]
    fn short_vector_examples() {
        let rep = short_vectors(&standard::a1(), &BigInt::from(2)).unwrap();
        assert_eq!(rep.vectors, vec![vec![BigInt::from(1)]]);
        let four = Lattice::from_gram("A1(2)", IntegerMatrix::from_i64(&[&[4]])).unwrap();
        assert!(short_vectors(&four, &BigInt::from(2)).unwrap().vectors.is_empty());
        let rep = short_vectors(&standard::e8(), &BigInt::from(2)).unwrap();
        assert_eq!(rep.count_pairs(), 120);
        assert!(rep.norms.iter().all(|n| n == &BigInt::from(2)));
        let rep4 = short_vectors(&standard::e8(), &BigInt::from(4)).unwrap();
        assert_eq!(rep4.count_pairs(), 120 + 1080);
        assert!(matches!(
            short_vectors(&standard::hyperbolic_plane(), &BigInt::from(2)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn minimum_and_rootless() {
        assert_eq!(min_norm(&standard::a1()).unwrap(), BigInt::from(2));
        assert_eq!(min_norm(&standard::e8_2()).unwrap(), BigInt::from(4));
        assert!(!is_rootless(&standard::e8()).unwrap());
        assert!(is_rootless(&standard::e8_2()).unwrap());
        let zero = standard::e8().sublattice("0", &IntegerMatrix::zeros(0, 8)).unwrap();
        assert!(is_rootless(&zero).unwrap());
    }

    #[test]
    fn close_vectors_with_center() {
        // Z² with center (1/2, 0): the two nearest points are (0,0) and (1,0)
        let en = Enumerator::new(&IntegerMatrix::identity(2)).unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let c = vec![half.clone(), BigRational::zero()];
        let mut pts: Vec<Vec<BigInt>> =
            en.close_vectors(&c, &BigRational::new(BigInt::one(), BigInt::from(4))).into_iter().map(|p| p.0).collect();
        pts.sort();
        assert_eq!(pts, vec![vec![BigInt::from(0), BigInt::from(0)], vec![BigInt::from(1), BigInt::from(0)]]);
    }

    #[test]
    fn windows_agree() {
        for (cn, cd, rn, rd) in [(1, 2, 9, 4), (-7, 3, 5, 1), (0, 1, 0, 1), (5, 7, 1, 100), (-1, 2, 1, 4)] {
            let c = BigRational::new(BigInt::from(cn), BigInt::from(cd));
            let r = BigRational::new(BigInt::from(rn), BigInt::from(rd));
            let a = <BigRational as Exact>::window(&c, &r).unwrap();
            let b = Q128::window(&Q128::new(cn as i128, cd as i128), &Q128::new(rn as i128, rd as i128)).unwrap();
            assert_eq!(a, b);
            // brute force
            let inside: Vec<i64> = (-20..=20)
                .filter(|&x| {
                    let d = BigRational::from_integer(BigInt::from(x)) - &c;
                    &d * &d <= r
                })
                .collect();
            if inside.is_empty() {
                assert!(a.0 > a.1);
            } else {
                assert_eq!((inside[0], *inside.last().unwrap()), a);
            }
        }
    }
}
