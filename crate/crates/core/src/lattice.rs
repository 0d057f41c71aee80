//! Lattices inside a fixed ambient quadratic space, discriminant forms and
//! finite group actions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, IntegerMatrix, RationalMatrix};

/// Group orders up to this size have their full q-value multiset compared.
pub const FULL_COMPARISON_LIMIT: u64 = 1_000_000;

/// A finitely generated sublattice of an ambient quadratic space.
///
/// `basis` rows are ambient coordinates; the ambient Gram matrix may be
/// degenerate or indefinite, but the basis rows are always independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub label: String,
    ambient_gram: IntegerMatrix,
    basis: IntegerMatrix,
}

impl Lattice {
    pub fn new(label: impl Into<String>, ambient_gram: IntegerMatrix, basis: IntegerMatrix) -> Result<Self> {
        if !ambient_gram.is_symmetric() {
            return Err(Error::Shape("ambient Gram matrix must be square and symmetric".into()));
        }
        if basis.cols() != ambient_gram.rows() {
            return Err(Error::Shape(format!(
                "basis has {} columns, ambient dimension is {}",
                basis.cols(),
                ambient_gram.rows()
            )));
        }
        if basis.rank() != basis.rows() {
            return Err(Error::DependentBasis);
        }
        Ok(Lattice { label: label.into(), ambient_gram, basis })
    }

    /// Gram-only lattice: the ambient space is the lattice itself.
    pub fn from_gram(label: impl Into<String>, gram: IntegerMatrix) -> Result<Self> {
        let n = gram.rows();
        Self::new(label, gram, IntegerMatrix::identity(n))
    }

    pub fn ambient_gram(&self) -> &IntegerMatrix {
        &self.ambient_gram
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_gram.rows()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Gram matrix of the basis, `B·G·Bᵀ`.
    pub fn gram(&self) -> IntegerMatrix {
        let bg = &self.basis * &self.ambient_gram;
        &bg * &self.basis.transpose()
    }

    pub fn det(&self) -> BigInt {
        self.gram().det().expect("Gram matrices are square")
    }

    pub fn is_even(&self) -> bool {
        let g = self.gram();
        (0..g.rows()).all(|i| g[(i, i)].is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Ambient inner product.
    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        bilinear(&self.ambient_gram, x, y)
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.inner(x, x)
    }

    /// Ambient vector for basis coordinates.
    pub fn vector(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.left_apply(coords)
    }

    /// Basis coordinates of an ambient vector, if it lies in the lattice.
    pub fn coords_of(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        linalg::solve_integral(&self.basis, v)
    }

    /// Rational basis coordinates of an ambient vector in the span.
    pub fn rational_coords_of(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        linalg::solve_rational(&self.basis.to_rational(), v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        matches!(self.coords_of(v), Ok(Some(_)))
    }

    /// Coordinates (rows) of `sub`'s basis in terms of this lattice's basis.
    pub fn coords_of_sublattice(&self, sub: &Lattice) -> Result<IntegerMatrix> {
        if sub.ambient_gram != self.ambient_gram {
            return Err(Error::NotContained(format!("'{}' lives in a different ambient space", sub.label)));
        }
        let mut rows = Vec::with_capacity(sub.rank());
        for (i, r) in sub.basis.row_iter().enumerate() {
            match self.coords_of(r)? {
                Some(c) => rows.push(c),
                None => {
                    return Err(Error::NotContained(format!(
                        "basis vector {i} of '{}' is not in '{}'",
                        sub.label, self.label
                    )))
                }
            }
        }
        IntegerMatrix::from_rows(self.rank(), rows)
    }

    /// Sublattice spanned by `coords·basis`.
    pub fn sublattice(&self, label: impl Into<String>, coords: &IntegerMatrix) -> Result<Lattice> {
        Lattice::new(label, self.ambient_gram.clone(), coords.try_mul(&self.basis)?)
    }

    /// Same ambient space, different basis rows (ambient coordinates).
    pub fn in_same_space(&self, label: impl Into<String>, basis: IntegerMatrix) -> Result<Lattice> {
        Lattice::new(label, self.ambient_gram.clone(), basis)
    }

    /// Gram-only copy of this lattice.
    pub fn detached(&self) -> Lattice {
        let g = self.gram();
        let n = g.rows();
        Lattice { label: self.label.clone(), ambient_gram: g, basis: IntegerMatrix::identity(n) }
    }

    /// Orthogonal direct sum of the two Gram matrices (self-ambient).
    pub fn orthogonal_sum(&self, other: &Lattice, label: impl Into<String>) -> Lattice {
        let (a, b) = (self.gram(), other.gram());
        let n = a.rows() + b.rows();
        let mut g = IntegerMatrix::zeros(n, n);
        for i in 0..a.rows() {
            for j in 0..a.rows() {
                g[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows() {
            for j in 0..b.rows() {
                g[(a.rows() + i, a.rows() + j)] = b[(i, j)].clone();
            }
        }
        Lattice { label: label.into(), ambient_gram: g, basis: IntegerMatrix::identity(n) }
    }

    /// Gram-only lattice with the form multiplied by `k`.
    pub fn rescaled(&self, k: i64, label: impl Into<String>) -> Lattice {
        let g = self.gram().scaled(&BigInt::from(k));
        let n = g.rows();
        Lattice { label: label.into(), ambient_gram: g, basis: IntegerMatrix::identity(n) }
    }

    /// `(positive, negative, zero)` eigenvalue counts of the Gram matrix.
    pub fn inertia(&self) -> (usize, usize, usize) {
        inertia(&self.gram())
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        let (p, q, z) = self.inertia();
        if z > 0 {
            return Err(Error::Degenerate);
        }
        Ok((p, q))
    }

    pub fn is_positive_definite(&self) -> bool {
        let (_, q, z) = self.inertia();
        q == 0 && z == 0
    }

    /// The sublattice `{x ∈ L : (x, s) = 0 for all s ∈ S}`; always saturated.
    pub fn orthogonal_complement(&self, sub: &Lattice) -> Result<Lattice> {
        let c = self.coords_of_sublattice(sub)?;
        self.orthogonal_complement_coords(&c, format!("{}^perp", sub.label))
    }

    /// Complement of the sublattice given by basis coordinates `c`.
    pub fn orthogonal_complement_coords(&self, c: &IntegerMatrix, label: impl Into<String>) -> Result<Lattice> {
        let pairing = &self.gram() * &c.transpose();
        let k = linalg::kernel(&pairing);
        self.sublattice(label, &k)
    }

    /// Primitive closure `(S ⊗ ℚ) ∩ L` together with the index `[S_sat : S]`.
    pub fn saturate(&self, sub: &Lattice) -> Result<(Lattice, BigInt)> {
        let c = self.coords_of_sublattice(sub)?;
        let index = saturation_index_of_coords(&c);
        let rel = linalg::kernel(&c.transpose());
        let sat = if rel.rows() == 0 {
            IntegerMatrix::identity(self.rank())
        } else {
            linalg::kernel(&rel.transpose())
        };
        Ok((self.sublattice(format!("sat({})", sub.label), &sat)?, index))
    }

    pub fn saturation_index(&self, sub: &Lattice) -> Result<BigInt> {
        let c = self.coords_of_sublattice(sub)?;
        Ok(saturation_index_of_coords(&c))
    }

    pub fn is_primitive_sublattice(&self, sub: &Lattice) -> Result<bool> {
        Ok(self.saturation_index(sub)?.is_one())
    }

    /// Is `g` (acting on basis coordinates, `x ↦ x·g`) an isometry?
    pub fn is_isometry(&self, g: &IntegerMatrix) -> bool {
        let k = self.rank();
        if g.rows() != k || g.cols() != k {
            return false;
        }
        let gram = self.gram();
        &(g * &gram) * &g.transpose() == gram
    }

    fn check_isometry(&self, g: &IntegerMatrix) -> Result<()> {
        if self.is_isometry(g) {
            Ok(())
        } else {
            Err(Error::NotIsometry(format!("{}x{} matrix on '{}'", g.rows(), g.cols(), self.label)))
        }
    }

    /// Fixed sublattice `L^G`.
    pub fn invariant_sublattice(&self, action: &GroupAction) -> Result<Lattice> {
        let k = self.rank();
        let mut stacked = IntegerMatrix::zeros(k, 0);
        for g in &action.generators {
            self.check_isometry(g)?;
            stacked = stacked.hstack(&g.try_sub(&IntegerMatrix::identity(k))?)?;
        }
        let fixed = linalg::kernel(&stacked);
        self.sublattice(format!("{}^G", self.label), &fixed)
    }

    /// Coinvariant sublattice `S_G(L)`, the complement of `L^G`.
    pub fn coinvariant_sublattice(&self, action: &GroupAction) -> Result<Lattice> {
        let inv = self.invariant_sublattice(action)?;
        Ok(self.orthogonal_complement(&inv)?.with_label(format!("S_G({})", self.label)))
    }

    pub fn discriminant_form(&self) -> Result<DiscriminantForm> {
        DiscriminantForm::of(self)
    }

    /// Does the isometry `g` act as the identity on the discriminant group?
    pub fn acts_trivially_on_discriminant(&self, g: &IntegerMatrix) -> Result<bool> {
        self.check_isometry(g)?;
        let disc = self.discriminant_form()?;
        let g_minus_1 = g.try_sub(&IntegerMatrix::identity(self.rank()))?.to_rational();
        Ok((0..disc.generator_coords.rows())
            .all(|i| g_minus_1.left_apply(disc.generator_coords.row(i)).iter().all(|x| x.is_integer())))
    }
}

/// Product of the invariant factors of a full-row-rank coordinate matrix.
fn saturation_index_of_coords(c: &IntegerMatrix) -> BigInt {
    linalg::snf(c).diagonal().iter().filter(|d| !d.is_zero()).product()
}

/// Exact inertia of a symmetric integer matrix by rational congruence diagonalization.
pub fn inertia(gram: &IntegerMatrix) -> (usize, usize, usize) {
    let (_, diag) = diagonalize(gram);
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    let neg = diag.iter().filter(|d| d.is_negative()).count();
    (pos, neg, diag.len() - pos - neg)
}

/// Rational `P` and diagonal `d` with `P·G·Pᵀ = diag(d)`; zero entries come last.
pub fn diagonalize(gram: &IntegerMatrix) -> (RationalMatrix, Vec<BigRational>) {
    let n = gram.rows();
    let mut a = gram.to_rational();
    let mut p = RationalMatrix::identity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                sym_swap(&mut a, i, k);
                row_swap(&mut p, i, k);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // zero diagonal with a nonzero off-diagonal: x_i += x_j makes a_ii = 2 a_ij
                sym_add(&mut a, i, j);
                row_add(&mut p, i, j, &BigRational::one());
                sym_swap(&mut a, i, k);
                row_swap(&mut p, i, k);
            } else {
                break;
            }
        }
        let piv = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &piv;
            for j in k..n {
                let d = &f * &a[(k, j)];
                a[(i, j)] -= d;
            }
            for j in k..n {
                let d = &f * &a[(j, k)];
                a[(j, i)] -= d;
            }
            row_add(&mut p, i, k, &-f);
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    (p, diag)
}

fn row_swap(p: &mut RationalMatrix, i: usize, j: usize) {
    for c in 0..p.cols() {
        let t = p[(i, c)].clone();
        p[(i, c)] = p[(j, c)].clone();
        p[(j, c)] = t;
    }
}

/// row_i += k·row_j
fn row_add(p: &mut RationalMatrix, i: usize, j: usize, k: &BigRational) {
    for c in 0..p.cols() {
        let v = k * &p[(j, c)];
        p[(i, c)] += v;
    }
}

fn sym_swap(a: &mut RationalMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// row_i += row_j, col_i += col_j
fn sym_add(a: &mut RationalMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a[(j, c)].clone();
        a[(i, c)] += v;
    }
    for r in 0..n {
        let v = a[(r, j)].clone();
        a[(r, i)] += v;
    }
}

/// Reduces a rational into `[0, m)`.
pub fn reduce_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let q = (x / &m).floor();
    x - q * m
}

/// The finite quadratic form `(A_L, q)` of an even nondegenerate lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    /// `d₁ | d₂ | …`, all greater than one.
    pub invariant_factors: Vec<BigInt>,
    /// Generators of `A_L` as ambient vectors of `L^∨`.
    pub generator_lifts: RationalMatrix,
    /// The same generators in basis coordinates, reduced into `[0, 1)`.
    pub generator_coords: RationalMatrix,
    /// `q(gᵢ)` in `[0, 2)`.
    pub q_values: Vec<BigRational>,
    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    pub pairing: RationalMatrix,
}

/// Outcome of comparing two discriminant forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormComparison {
    pub equal: bool,
    /// True when all group elements were compared, false for the generator-only fallback.
    pub exhaustive: bool,
}

impl DiscriminantForm {
    pub fn of(lattice: &Lattice) -> Result<Self> {
        let gram = lattice.gram();
        let k = gram.rows();
        if inertia(&gram).2 > 0 {
            return Err(Error::Degenerate);
        }
        if !lattice.is_even() {
            return Err(Error::Precondition(format!("'{}' is not even", lattice.label)));
        }
        let smith = linalg::snf(&gram);
        let gram_inv = gram.to_rational().inverse()?;
        let v_inv = smith.v.unimodular_inverse()?.to_rational();
        let duals = v_inv.try_mul(&gram_inv)?;

        let mut factors = Vec::new();
        let mut coords = Vec::new();
        for (i, d) in smith.diagonal().into_iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d);
            coords.push(duals.row(i).iter().map(|x| x - x.floor()).collect::<Vec<_>>());
        }
        let generator_coords = RationalMatrix::from_rows(k, coords)?;
        let generator_lifts = generator_coords.try_mul(&lattice.basis().to_rational())?;
        let gq = gram.to_rational();
        let l = factors.len();
        let mut pairing = RationalMatrix::zeros(l, l);
        let mut q_values = Vec::with_capacity(l);
        for i in 0..l {
            for j in 0..l {
                let b = linalg::bilinear_q(&gq, generator_coords.row(i), generator_coords.row(j));
                if i == j {
                    q_values.push(reduce_mod(&b, 2));
                }
                pairing[(i, j)] = reduce_mod(&b, 1);
            }
        }
        Ok(DiscriminantForm { invariant_factors: factors, generator_lifts, generator_coords, q_values, pairing })
    }

    /// Minimal number of generators of the group.
    pub fn ell(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// `q(Σ aᵢ gᵢ)` in `[0, 2)`.
    pub fn q_of(&self, coeffs: &[BigInt]) -> BigRational {
        let mut total = BigRational::zero();
        for (i, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ai = BigRational::from_integer(a.clone());
            total += &ai * &ai * &self.q_values[i];
            for (j, b) in coeffs.iter().enumerate().skip(i + 1) {
                if !b.is_zero() {
                    total += BigRational::from_integer(BigInt::from(2) * a * b) * &self.pairing[(i, j)];
                }
            }
        }
        reduce_mod(&total, 2)
    }

    /// Multiset of q-values over every group element, or `None` past `limit`.
    pub fn value_multiset(&self, limit: u64) -> Option<BTreeMap<BigRational, u64>> {
        let order = self.order().to_u64().filter(|&o| o <= limit)?;
        let mut counts = BTreeMap::new();
        let mut digits = vec![BigInt::zero(); self.ell()];
        for _ in 0..order {
            *counts.entry(self.q_of(&digits)).or_insert(0) += 1;
            for (d, f) in digits.iter_mut().zip(&self.invariant_factors) {
                *d += 1;
                if &*d < f {
                    break;
                }
                *d = BigInt::zero();
            }
        }
        Some(counts)
    }

    /// Equality policy: same invariant factors and same multiset of q-values.
    pub fn compare(&self, other: &DiscriminantForm) -> FormComparison {
        self.compare_with(other, false)
    }

    /// Compares `self` against `(A, -q)` of `other`.
    pub fn compare_negated(&self, other: &DiscriminantForm) -> FormComparison {
        self.compare_with(other, true)
    }

    fn compare_with(&self, other: &DiscriminantForm, negate: bool) -> FormComparison {
        if self.invariant_factors != other.invariant_factors {
            return FormComparison { equal: false, exhaustive: true };
        }
        let flip = |m: BTreeMap<BigRational, u64>| -> BTreeMap<BigRational, u64> {
            if !negate {
                return m;
            }
            m.into_iter().map(|(q, c)| (reduce_mod(&-q, 2), c)).collect()
        };
        match (self.value_multiset(FULL_COMPARISON_LIMIT), other.value_multiset(FULL_COMPARISON_LIMIT)) {
            (Some(a), Some(b)) => FormComparison { equal: a == flip(b), exhaustive: true },
            _ => {
                log::warn!(
                    "discriminant group of order {} is too large; comparing generator values only",
                    self.order()
                );
                let mut a = self.q_values.clone();
                let mut b: Vec<BigRational> = other
                    .q_values
                    .iter()
                    .map(|q| if negate { reduce_mod(&-q, 2) } else { q.clone() })
                    .collect();
                a.sort();
                b.sort();
                FormComparison { equal: a == b, exhaustive: false }
            }
        }
    }
}

/// Finitely many isometries acting on basis coordinates by `x ↦ x·g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub generators: Vec<IntegerMatrix>,
}

impl GroupAction {
    pub fn new(generators: Vec<IntegerMatrix>) -> Self {
        GroupAction { generators }
    }

    pub fn trivial() -> Self {
        GroupAction { generators: Vec::new() }
    }

    /// `{±1}` on a rank-`k` lattice.
    pub fn minus_identity(k: usize) -> Self {
        GroupAction { generators: vec![IntegerMatrix::identity(k).scaled(&BigInt::from(-1))] }
    }
}

/// Standard Gram matrices used throughout the crate and its tests.
pub mod standard {
    use super::*;

    pub fn a1() -> Lattice {
        Lattice::from_gram("A1", IntegerMatrix::from_i64(&[&[2]])).unwrap()
    }

    pub fn a2() -> Lattice {
        Lattice::from_gram("A2", IntegerMatrix::from_i64(&[&[2, -1], &[-1, 2]])).unwrap()
    }

    pub fn hyperbolic_plane() -> Lattice {
        Lattice::from_gram("U", IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap()
    }

    /// Cartan matrix of E₈ (Bourbaki labelling, node 2 attached to node 4).
    pub fn e8_gram() -> IntegerMatrix {
        let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        let mut g = IntegerMatrix::identity(8).scaled(&BigInt::from(2));
        for (i, j) in edges {
            g[(i, j)] = BigInt::from(-1);
            g[(j, i)] = BigInt::from(-1);
        }
        g
    }

    pub fn e8() -> Lattice {
        Lattice::from_gram("E8", e8_gram()).unwrap()
    }

    /// E₈ with its form doubled.
    pub fn e8_2() -> Lattice {
        Lattice::from_gram("E8(2)", e8_gram().scaled(&BigInt::from(2))).unwrap()
    }
}
