//! The even unimodular lattice `II₂₅,₁`, its Weyl vectors, Leech roots and
//! the Leech lattice as `w^⊥/ℤw`.
//!
//! Two presentations are provided. The coordinate model realizes `II₂₅,₁`
//! inside `ℝ^{25,1}` as the vectors whose coordinates are all integers or all
//! half-integers with even coordinate sum. The `Λ ⊕ U` presentation glues a
//! Leech Gram matrix to a hyperbolic plane `U = ⟨e, f⟩`; there `e` is a Weyl
//! vector by construction.
//!
//! Note on `w₀`: the isotropic Weyl vector of the coordinate model is
//! `(0, 1, …, 24 | 70)`, since `0² + 1² + … + 24² = 4900 = 70²`. The vector
//! `(0, 1, …, 24 | 25)` that sometimes appears in print has norm 4275 and is
//! rejected by [`check_weyl_vector`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumeration;
use crate::error::{Error, Result};
use crate::lattice::{inertia, Lattice};
use crate::linalg::{self, IntegerMatrix, RationalMatrix};

/// Number of coordinates of the model, `x₀ … x₂₄ | x₂₅`.
pub const MODEL_DIM: usize = 26;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn q_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// The coordinate model of `II₂₅,₁` with an explicit integral basis.
#[derive(Clone, Debug)]
pub struct LorentzianModel {
    /// Self-ambient lattice: the Gram matrix of the basis below.
    pub lattice: Lattice,
    /// Basis vectors in `ℝ^{25,1}` coordinates (rows).
    coordinates: RationalMatrix,
    coordinates_inv: RationalMatrix,
}

/// Invariants of an even unimodular Lorentzian presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzianCertificate {
    pub rank: usize,
    pub det: BigInt,
    pub even: bool,
    pub signature: (usize, usize),
}

impl LorentzianCertificate {
    pub fn of(l: &Lattice) -> Self {
        let (p, q, _) = l.inertia();
        LorentzianCertificate { rank: l.rank(), det: l.det(), even: l.is_even(), signature: (p, q) }
    }

    /// det −1, even, signature (25,1).
    pub fn is_ii_25_1(&self) -> bool {
        self.rank == MODEL_DIM && self.det == BigInt::from(-1) && self.even && self.signature == (25, 1)
    }
}

/// Lorentzian form `Σ_{i<25} xᵢyᵢ − x₂₅y₂₅` on model coordinates.
pub fn lorentz_inner(x: &[BigRational], y: &[BigRational]) -> BigRational {
    assert_eq!(x.len(), MODEL_DIM);
    assert_eq!(y.len(), MODEL_DIM);
    let space: BigRational = x[..25].iter().zip(&y[..25]).map(|(a, b)| a * b).sum();
    space - &x[25] * &y[25]
}

/// Membership in the coordinate model: all coordinates in `ℤ` or all in
/// `ℤ + ½`, and the coordinate sum even.
pub fn is_model_vector(x: &[BigRational]) -> bool {
    if x.len() != MODEL_DIM {
        return false;
    }
    let h = half();
    let all_int = x.iter().all(|c| c.is_integer());
    let all_half = x.iter().all(|c| (c - &h).is_integer());
    if !(all_int || all_half) {
        return false;
    }
    let sum: BigRational = x.iter().sum();
    sum.is_integer() && sum.to_integer().is_even()
}

impl LorentzianModel {
    /// Builds the model with basis `eᵢ − eᵢ₊₁` (i = 0…23), `e₂₃ + e₂₄`
    /// (together a D₂₅ root basis on the first 25 coordinates) and the glue
    /// vector `(½, …, ½ | −½)`.
    pub fn build() -> Self {
        let mut rows = Vec::with_capacity(MODEL_DIM);
        for i in 0..24 {
            let mut r = vec![BigRational::zero(); MODEL_DIM];
            r[i] = q_int(1);
            r[i + 1] = q_int(-1);
            rows.push(r);
        }
        let mut r = vec![BigRational::zero(); MODEL_DIM];
        r[23] = q_int(1);
        r[24] = q_int(1);
        rows.push(r);
        let mut glue = vec![half(); MODEL_DIM];
        glue[25] = -half();
        rows.push(glue);

        let coordinates = RationalMatrix::from_rows(MODEL_DIM, rows).expect("fixed shape");
        let mut gram = IntegerMatrix::zeros(MODEL_DIM, MODEL_DIM);
        for i in 0..MODEL_DIM {
            for j in 0..MODEL_DIM {
                let v = lorentz_inner(coordinates.row(i), coordinates.row(j));
                assert!(v.is_integer(), "model basis is integral");
                gram[(i, j)] = v.to_integer();
            }
        }
        let lattice = Lattice::from_gram("II_25_1", gram).expect("basis is independent");
        let coordinates_inv = coordinates.inverse().expect("basis is independent");
        LorentzianModel { lattice, coordinates, coordinates_inv }
    }

    pub fn certificate(&self) -> LorentzianCertificate {
        LorentzianCertificate::of(&self.lattice)
    }

    /// Basis coordinates of a model vector, or `None` if it is not in the lattice span.
    pub fn lattice_coords(&self, x: &[BigRational]) -> Option<Vec<BigInt>> {
        if x.len() != MODEL_DIM {
            return None;
        }
        let c = self.coordinates_inv.left_apply(x);
        c.iter().all(|v| v.is_integer()).then(|| c.iter().map(|v| v.to_integer()).collect())
    }

    /// Model coordinates of a lattice vector.
    pub fn model_coords(&self, v: &[BigInt]) -> Vec<BigRational> {
        self.coordinates.left_apply(&linalg::to_rational_vec(v))
    }

    pub fn basis_coordinates(&self) -> &RationalMatrix {
        &self.coordinates
    }
}

/// The coordinates `(0, 1, …, 24 | 70)`.
pub fn w0_coordinates() -> Vec<BigRational> {
    let mut w: Vec<BigRational> = (0..25).map(q_int).collect();
    w.push(q_int(70));
    w
}

/// A verified Weyl vector: basis coordinates in some presentation of `II₂₅,₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylVector(Vec<BigInt>);

impl WeylVector {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    /// Verifies `w` (basis coordinates of `ii`) and wraps it.
    pub fn verify(ii: &Lattice, w: Vec<BigInt>) -> Result<Self> {
        match check_weyl_vector(ii, &w)? {
            WeylDiagnosis::Weyl => Ok(WeylVector(w)),
            other => Err(Error::Precondition(format!("not a Weyl vector: {other}"))),
        }
    }
}

/// Result of [`check_weyl_vector`]; the first failing check is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeylDiagnosis {
    Weyl,
    Imprimitive { content: BigInt },
    NotIsotropic { norm: BigInt },
    QuotientNotUnimodular { rank: usize, det: BigInt, even: bool, positive_definite: bool },
    QuotientHasRoots { root: Vec<BigInt> },
}

impl WeylDiagnosis {
    pub fn is_weyl(&self) -> bool {
        matches!(self, WeylDiagnosis::Weyl)
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeylDiagnosis::Weyl => "weyl",
            WeylDiagnosis::Imprimitive { .. } => "imprimitive",
            WeylDiagnosis::NotIsotropic { .. } => "not-isotropic",
            WeylDiagnosis::QuotientNotUnimodular { .. } => "quotient-not-even-unimodular",
            WeylDiagnosis::QuotientHasRoots { .. } => "quotient-has-roots",
        }
    }
}

impl std::fmt::Display for WeylDiagnosis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeylDiagnosis::Weyl => write!(f, "Weyl vector"),
            WeylDiagnosis::Imprimitive { content } => write!(f, "imprimitive (content {content})"),
            WeylDiagnosis::NotIsotropic { norm } => write!(f, "not isotropic (norm {norm})"),
            WeylDiagnosis::QuotientNotUnimodular { rank, det, even, positive_definite } => write!(
                f,
                "quotient is not even unimodular positive definite of rank 24 (rank {rank}, det {det}, even {even}, positive definite {positive_definite})"
            ),
            WeylDiagnosis::QuotientHasRoots { .. } => write!(f, "quotient contains roots"),
        }
    }
}

/// `w^⊥/ℤw` with the section used to represent it.
#[derive(Clone, Debug)]
pub struct IsotropicQuotient {
    /// Rank-24 Gram-only lattice.
    pub lattice: Lattice,
    /// Rows: basis coordinates (in the presentation) of representatives in `w^⊥`.
    pub section: IntegerMatrix,
}

/// Checks primitivity and isotropy of `w`, which the quotient needs.
fn check_isotropic_primitive(ii: &Lattice, w: &[BigInt]) -> Result<()> {
    if w.len() != ii.rank() {
        return Err(Error::Shape(format!("vector of length {} for a rank {} lattice", w.len(), ii.rank())));
    }
    let c = linalg::content(w);
    if !c.is_one() {
        return Err(Error::NotPrimitive(format!("vector has content {c}")));
    }
    let norm = linalg::bilinear(&ii.gram(), w, w);
    if !norm.is_zero() {
        return Err(Error::Precondition(format!("vector has norm {norm}, not 0")));
    }
    Ok(())
}

/// `w^⊥/ℤw` for a primitive isotropic `w` (basis coordinates of `ii`).
///
/// The section is deterministic: `w^⊥` gets its Hermite-normal-form kernel
/// basis, which is then changed unimodularly so that `w` is the first basis
/// vector; the remaining rows represent the quotient.
pub fn quotient_mod_isotropic(ii: &Lattice, w: &[BigInt]) -> Result<IsotropicQuotient> {
    check_isotropic_primitive(ii, w)?;
    let gram = ii.gram();
    let pairing = IntegerMatrix::from_vec(w.len(), 1, gram.right_apply(w))?;
    let perp = linalg::kernel(&pairing);
    let c = linalg::solve_integral(&perp, w)?.ok_or_else(|| Error::NoSolution("w is not in its own complement".into()))?;
    let change = linalg::complete_to_unimodular(&c)?;
    let adapted = &change * &perp;
    let section = adapted.select_rows(1..adapted.rows());
    let q = &(&section * &gram) * &section.transpose();
    let lattice = Lattice::from_gram("w_perp/w", q)?;
    Ok(IsotropicQuotient { lattice, section })
}

/// Runs, in order: primitive; isotropic; quotient even unimodular positive
/// definite of rank 24; quotient rootless.
pub fn check_weyl_vector(ii: &Lattice, w: &[BigInt]) -> Result<WeylDiagnosis> {
    if w.len() != ii.rank() {
        return Err(Error::Shape(format!("vector of length {} for a rank {} lattice", w.len(), ii.rank())));
    }
    let c = linalg::content(w);
    if !c.is_one() {
        return Ok(WeylDiagnosis::Imprimitive { content: c });
    }
    let norm = linalg::bilinear(&ii.gram(), w, w);
    if !norm.is_zero() {
        return Ok(WeylDiagnosis::NotIsotropic { norm });
    }
    let quot = quotient_mod_isotropic(ii, w)?;
    let lat = &quot.lattice;
    let (p, q, z) = lat.inertia();
    let positive_definite = q == 0 && z == 0;
    let det = lat.det();
    let even = lat.is_even();
    if lat.rank() != 24 || !det.is_one() || !even || !positive_definite {
        return Ok(WeylDiagnosis::QuotientNotUnimodular { rank: p + q + z, det, even, positive_definite });
    }
    match enumeration::first_short_vector(lat, &BigInt::from(2))? {
        Some((v, _)) => Ok(WeylDiagnosis::QuotientHasRoots { root: quot.section.left_apply(&v) }),
        None => Ok(WeylDiagnosis::Weyl),
    }
}

/// `w₀ = (0, 1, …, 24 | 70)` in the model, fully verified.
pub fn weyl_vector_w0(model: &LorentzianModel) -> Result<WeylVector> {
    let w = model
        .lattice_coords(&w0_coordinates())
        .ok_or_else(|| Error::NotContained("w0 is not a model vector".into()))?;
    WeylVector::verify(&model.lattice, w)
}

/// The Leech lattice as `w₀^⊥/ℤw₀`, LLL-reduced, as a Gram-only lattice.
pub fn build_leech(model: &LorentzianModel) -> Result<Lattice> {
    let w = model
        .lattice_coords(&w0_coordinates())
        .ok_or_else(|| Error::NotContained("w0 is not a model vector".into()))?;
    let quot = quotient_mod_isotropic(&model.lattice, &w)?;
    let red = enumeration::lll_reduce(&quot.lattice.gram(), &enumeration::default_delta())?;
    Lattice::from_gram("Leech", red.gram)
}

/// `Λ ⊕ U` with `e`, `f` the last two basis vectors, `(e,f) = 1`.
pub fn lambda_u_presentation(leech: &Lattice) -> Lattice {
    let u = crate::lattice::standard::hyperbolic_plane();
    leech.orthogonal_sum(&u, "Leech+U")
}

/// A hyperbolic plane `⟨e, f⟩` inside a presentation of `II₂₅,₁`, where `e`
/// is a (candidate) Weyl vector; `leech` is `⟨e, f⟩^⊥ ≅ e^⊥/ℤe`.
#[derive(Clone, Debug)]
pub struct HyperbolicFrame {
    pub ii: Lattice,
    pub e: Vec<BigInt>,
    pub f: Vec<BigInt>,
    /// Sublattice of `ii` in the same ambient space.
    pub leech: Lattice,
}

impl HyperbolicFrame {
    /// The canonical frame of [`lambda_u_presentation`].
    pub fn lambda_u(ii: &Lattice) -> Result<Self> {
        let n = ii.rank();
        if n < 2 {
            return Err(Error::Shape("presentation too small".into()));
        }
        let mut e = vec![BigInt::zero(); n];
        e[n - 2] = BigInt::one();
        let mut f = vec![BigInt::zero(); n];
        f[n - 1] = BigInt::one();
        Self::with_plane(ii, e, f)
    }

    /// Completes a primitive isotropic `e` to a hyperbolic plane in a unimodular `ii`.
    pub fn around(ii: &Lattice, e: &[BigInt]) -> Result<Self> {
        check_isotropic_primitive(ii, e)?;
        let gram = ii.gram();
        // z with (z, e) = 1 exists because e is primitive and ii unimodular
        let col = IntegerMatrix::from_vec(e.len(), 1, gram.right_apply(e))?;
        let z = linalg::solve_integral(&col, &[BigInt::one()])?
            .ok_or_else(|| Error::NoSolution("no vector pairs to 1 with e; is the lattice unimodular?".into()))?;
        let zz = linalg::bilinear(&gram, &z, &z);
        let k = zz / 2;
        let f: Vec<BigInt> = z.iter().zip(e).map(|(zi, ei)| zi - &k * ei).collect();
        Self::with_plane(ii, e.to_vec(), f)
    }

    fn with_plane(ii: &Lattice, e: Vec<BigInt>, f: Vec<BigInt>) -> Result<Self> {
        let gram = ii.gram();
        let ee = linalg::bilinear(&gram, &e, &e);
        let ff = linalg::bilinear(&gram, &f, &f);
        let ef = linalg::bilinear(&gram, &e, &f);
        if !ee.is_zero() || !ff.is_zero() || !ef.is_one() {
            return Err(Error::Precondition("e, f do not span a hyperbolic plane".into()));
        }
        let plane = IntegerMatrix::from_rows(e.len(), vec![e.clone(), f.clone()])?;
        let leech = ii.orthogonal_complement_coords(&plane, "<e,f>^perp")?;
        Ok(HyperbolicFrame { ii: ii.clone(), e, f, leech })
    }

    /// Ambient-to-basis: converts Leech-copy coordinates into `ii` basis coordinates.
    pub fn lift(&self, lambda: &[BigInt]) -> Result<Vec<BigInt>> {
        let amb = self.leech.vector(lambda);
        self.ii
            .coords_of(&amb)?
            .ok_or_else(|| Error::NotContained("lifted vector is not in the presentation".into()))
    }

    /// `r = λ + ((λ,λ)/2 − 1)·e − f`, the Leech root attached to `λ ∈ Λ`.
    pub fn leech_root_from_lambda(&self, lambda: &[BigInt]) -> Result<Vec<BigInt>> {
        let lam = self.lift(lambda)?;
        let norm = linalg::bilinear(&self.ii.gram(), &lam, &lam);
        if norm.is_odd() {
            return Err(Error::Precondition("odd norm in an even lattice".into()));
        }
        let k = norm / 2 - 1;
        Ok(lam.iter().zip(&self.e).zip(&self.f).map(|((l, e), f)| l + &k * e - f).collect())
    }
}

/// `(r, r) = 2` and `(r, w) = −1`.
pub fn is_leech_root(ii: &Lattice, r: &[BigInt], w: &[BigInt]) -> bool {
    let g = ii.gram();
    linalg::bilinear(&g, r, r) == BigInt::from(2) && linalg::bilinear(&g, r, w) == BigInt::from(-1)
}

/// Reflection `σ_r(x) = x − (x, r)·r` in a root.
pub fn reflect(ii: &Lattice, r: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
    let k = linalg::bilinear(&ii.gram(), x, r);
    x.iter().zip(r).map(|(xi, ri)| xi - &k * ri).collect()
}

/// A Weyl vector together with a negative-norm reference vector selecting
/// the Lobachevsky cone component `𝒟`.
#[derive(Clone, Debug)]
pub struct ChamberFrame {
    pub w: WeylVector,
    pub cone_reference: Vec<BigInt>,
}

impl ChamberFrame {
    pub fn new(ii: &Lattice, w: WeylVector, cone_reference: Vec<BigInt>) -> Result<Self> {
        if !linalg::bilinear(&ii.gram(), &cone_reference, &cone_reference).is_negative() {
            return Err(Error::Precondition("cone reference must have negative norm".into()));
        }
        Ok(ChamberFrame { w, cone_reference })
    }

    /// `x` lies in the component `𝒟` containing the reference.
    pub fn in_cone(&self, ii: &Lattice, x: &[BigInt]) -> bool {
        let g = ii.gram();
        linalg::bilinear(&g, x, x).is_negative() && linalg::bilinear(&g, x, &self.cone_reference).is_negative()
    }

    /// `x` pairs negatively with every supplied Leech root of `w`.
    pub fn on_negative_side(&self, ii: &Lattice, x: &[BigInt], roots: &[Vec<BigInt>]) -> bool {
        let g = ii.gram();
        roots.iter().all(|r| is_leech_root(ii, r, self.w.coords()) && linalg::bilinear(&g, x, r).is_negative())
    }
}

/// One sampled Leech root and the checks run on it.
#[derive(Clone, Debug)]
pub struct ConwaySample {
    pub lambda: Vec<BigInt>,
    pub root: Vec<BigInt>,
    pub is_leech_root: bool,
    /// `(r, w + r) = 1`.
    pub crosses_wall: bool,
    /// `(w + r)² = 0`.
    pub reflected_isotropic: bool,
    pub reflected: WeylDiagnosis,
}

impl ConwaySample {
    pub fn passed(&self) -> bool {
        self.is_leech_root && self.crosses_wall && self.reflected_isotropic && self.reflected.is_weyl()
    }
}

#[derive(Clone, Debug)]
pub struct ConwayReport {
    pub samples: Vec<ConwaySample>,
}

impl ConwayReport {
    pub fn passed(&self) -> usize {
        self.samples.iter().filter(|s| s.passed()).count()
    }

    pub fn total(&self) -> usize {
        self.samples.len()
    }
}

/// Samples Leech roots of `w` and checks that reflecting `w` in each gives
/// another Weyl vector (the Weyl vector of the adjacent chamber).
///
/// The samples are `λ = 0`, then a minimal vector of the Leech copy, then
/// random combinations of Leech basis vectors with coefficients in {−1, 0, 1}.
pub fn conway_sample_check(ii: &Lattice, w: &WeylVector, samples: usize, seed: u64) -> Result<ConwayReport> {
    let frame = HyperbolicFrame::around(ii, w.coords())?;
    let n = frame.leech.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gram = ii.gram();
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let lambda = match i {
            0 => vec![BigInt::zero(); n],
            1 => enumeration::minimal_vector(&frame.leech)?.0,
            _ => loop {
                let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-1i64..=1))).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    break v;
                }
            },
        };
        let root = frame.leech_root_from_lambda(&lambda)?;
        let reflected: Vec<BigInt> = w.coords().iter().zip(&root).map(|(a, b)| a + b).collect();
        let sample = ConwaySample {
            is_leech_root: is_leech_root(ii, &root, w.coords()),
            crosses_wall: linalg::bilinear(&gram, &root, &reflected).is_one(),
            reflected_isotropic: linalg::bilinear(&gram, &reflected, &reflected).is_zero(),
            reflected: check_weyl_vector(ii, &reflected)?,
            root,
            lambda,
        };
        log::info!("conway sample {i}: {}", if sample.passed() { "pass" } else { "FAIL" });
        out.push(sample);
    }
    Ok(ConwayReport { samples: out })
}

/// Certifies that `l` is a Leech lattice: rank 24, det 1, even, positive definite, rootless.
pub fn is_leech_type(l: &Lattice) -> Result<bool> {
    if l.rank() != 24 || !l.det().is_one() || !l.is_even() {
        return Ok(false);
    }
    let (_, q, z) = inertia(&l.gram());
    if q > 0 || z > 0 {
        return Ok(false);
    }
    enumeration::is_rootless(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(ints: &[i64]) -> Vec<BigRational> {
        ints.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn model_invariants() {
        let m = LorentzianModel::build();
        let cert = m.certificate();
        assert_eq!(cert.det, BigInt::from(-1));
        assert!(cert.even);
        assert_eq!(cert.signature, (25, 1));
        assert!(cert.is_ii_25_1());
    }

    #[test]
    fn membership_examples() {
        let mut v = coords(&[0; 26]);
        v[0] = q_int(1);
        v[1] = q_int(1);
        assert!(is_model_vector(&v));
        let mut h = vec![half(); 26];
        h[25] = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert!(is_model_vector(&h));
        assert_eq!(lorentz_inner(&h, &h), q_int(4));
        let odd = vec![half(); 26];
        assert!(!is_model_vector(&odd));
        let m = LorentzianModel::build();
        assert!(m.lattice_coords(&h).is_some());
        assert!(m.lattice_coords(&odd).is_none());
    }

    #[test]
    fn w0_is_isotropic_and_printed_variant_is_not() {
        let w = w0_coordinates();
        assert_eq!(lorentz_inner(&w, &w), q_int(0));
        assert!(is_model_vector(&w));
        let mut printed = w.clone();
        printed[25] = q_int(25);
        assert_eq!(lorentz_inner(&printed, &printed), q_int(4275));
        // coordinate sum 325 is odd, so it is not even a lattice vector
        assert!(!is_model_vector(&printed));
        assert!(LorentzianModel::build().lattice_coords(&printed).is_none());
    }

    #[test]
    fn cheap_weyl_failures() {
        let m = LorentzianModel::build();
        let w = m.lattice_coords(&w0_coordinates()).unwrap();
        let doubled: Vec<BigInt> = w.iter().map(|x| x * 2).collect();
        assert!(matches!(check_weyl_vector(&m.lattice, &doubled).unwrap(), WeylDiagnosis::Imprimitive { .. }));
        let mut v = coords(&[0; 26]);
        v[0] = q_int(1);
        v[1] = q_int(1);
        let vc = m.lattice_coords(&v).unwrap();
        assert!(matches!(check_weyl_vector(&m.lattice, &vc).unwrap(), WeylDiagnosis::NotIsotropic { .. }));
        assert!(quotient_mod_isotropic(&m.lattice, &vc).is_err());
        assert!(quotient_mod_isotropic(&m.lattice, &doubled).is_err());
    }

    #[test]
    fn leech_root_formula_in_a_small_frame() {
        // E8 ⊕ U stands in for Λ ⊕ U: the formula only needs the hyperbolic plane
        let ii = crate::lattice::standard::e8().orthogonal_sum(&crate::lattice::standard::hyperbolic_plane(), "E8+U");
        let frame = HyperbolicFrame::lambda_u(&ii).unwrap();
        let zero = vec![BigInt::zero(); 8];
        let r = frame.leech_root_from_lambda(&zero).unwrap();
        let minus_e_minus_f: Vec<BigInt> = frame.e.iter().zip(&frame.f).map(|(a, b)| -a - b).collect();
        assert_eq!(r, minus_e_minus_f);
        assert!(is_leech_root(&ii, &r, &frame.e));
        // norm 2 → λ − f; norm 4 → λ + e − f; norm 8 → λ + 3e − f
        for (lam, k) in [
            (vec![1i64, 0, 0, 0, 0, 0, 0, 0], 0),
            (vec![1, 1, 0, 0, 0, 0, 0, 0], 1),
            (vec![2, 0, 0, 0, 0, 0, 0, 0], 3),
        ] {
            let lam: Vec<BigInt> = linalg::vec_from_i64(&lam);
            let lifted = frame.lift(&lam).unwrap();
            let norm = linalg::bilinear(&ii.gram(), &lifted, &lifted);
            assert_eq!(norm.clone() / 2 - 1, BigInt::from(k));
            let r = frame.leech_root_from_lambda(&lam).unwrap();
            assert!(is_leech_root(&ii, &r, &frame.e));
            let expected: Vec<BigInt> =
                lifted.iter().zip(&frame.e).zip(&frame.f).map(|((l, e), f)| l + BigInt::from(k) * e - f).collect();
            assert_eq!(r, expected);
            // w + r is isotropic and (r, w + r) = 1
            let wr: Vec<BigInt> = frame.e.iter().zip(&r).map(|(a, b)| a + b).collect();
            assert!(linalg::bilinear(&ii.gram(), &wr, &wr).is_zero());
            assert!(linalg::bilinear(&ii.gram(), &r, &wr).is_one());
            assert_eq!(reflect(&ii, &r, &frame.e), wr);
        }
        assert!(!is_leech_root(&ii, &frame.f, &frame.e));
    }

    #[test]
    fn frame_around_arbitrary_isotropic_vector() {
        let m = LorentzianModel::build();
        let w = m.lattice_coords(&w0_coordinates()).unwrap();
        let frame = HyperbolicFrame::around(&m.lattice, &w).unwrap();
        assert_eq!(frame.leech.rank(), 24);
        assert!(frame.leech.det().is_one());
        assert!(frame.leech.is_positive_definite());
    }

    #[test]
    fn chamber_frame_predicates() {
        let ii = crate::lattice::standard::e8().orthogonal_sum(&crate::lattice::standard::hyperbolic_plane(), "E8+U");
        let frame = HyperbolicFrame::lambda_u(&ii).unwrap();
        // e − f has norm −2
        let reference: Vec<BigInt> = frame.e.iter().zip(&frame.f).map(|(a, b)| a - b).collect();
        let w = WeylVector(frame.e.clone());
        assert!(ChamberFrame::new(&ii, w.clone(), frame.e.clone()).is_err());
        let ch = ChamberFrame::new(&ii, w, reference.clone()).unwrap();
        assert!(ch.in_cone(&ii, &reference));
        let neg: Vec<BigInt> = reference.iter().map(|x| -x).collect();
        assert!(!ch.in_cone(&ii, &neg));
        let r = frame.leech_root_from_lambda(&vec![BigInt::zero(); 8]).unwrap();
        // (e − f, −e − f) = −1 + 1 = 0: on the wall, not strictly negative
        assert!(!ch.on_negative_side(&ii, &reference, std::slice::from_ref(&r)));
        // 2(e − f) + e = 3e − 2f pairs with −e − f to −3 + 2 = −1
        let x: Vec<BigInt> = reference.iter().zip(&frame.e).map(|(a, b)| a * 2 + b).collect();
        assert!(ch.on_negative_side(&ii, &x, &[r]));
    }
}
