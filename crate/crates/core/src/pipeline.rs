//! Leech pairs and the construction of a primitive embedding `S ↪ Λ`.
//!
//! The construction runs inside an even unimodular lattice `II` of signature
//! (25,1). Given a rootless `S ⊂ II` and a root `α ⊥ S` with `S ⊕ ℤα`
//! primitive, it looks for a Weyl vector `w ⊥ S` with `(w, α) = −1`. Then
//! `α` and `w` span a unimodular plane, its complement `Λ'` is a Leech
//! lattice, and `S ⊂ Λ'` is primitive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::borcherds::{self, HyperbolicFrame, LorentzianCertificate, WeylDiagnosis, WeylVector};
use crate::enumeration::{self, Enumerator};
use crate::error::{Error, Result};
use crate::lattice::{self, GroupAction, Lattice};
use crate::linalg::{self, IntegerMatrix, RationalMatrix};
use crate::serial::{self, LatticeDocument, VectorDocument};

/// Results of the Leech-pair checks on `(G, S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeechPairReport {
    pub even: bool,
    pub positive_definite: bool,
    pub rootless: bool,
    pub isometries: bool,
    pub discriminant_trivial: bool,
    pub invariant_trivial: bool,
    pub verdict: bool,
}

/// Runs every check; failures are fields of the report, not errors.
pub fn verify_leech_pair(s: &Lattice, g: &GroupAction) -> LeechPairReport {
    let even = s.is_even();
    let positive_definite = s.is_positive_definite();
    let rootless = positive_definite && enumeration::is_rootless(s).unwrap_or(false);
    let isometries = g.generators.iter().all(|m| s.is_isometry(m));
    let nondegenerate = !s.det().is_zero();
    let discriminant_trivial = isometries
        && nondegenerate
        && g.generators.iter().all(|m| s.acts_trivially_on_discriminant(m).unwrap_or(false));
    let invariant_trivial = isometries && s.invariant_sublattice(g).map(|l| l.rank() == 0).unwrap_or(false);
    let verdict = even && positive_definite && rootless && isometries && discriminant_trivial && invariant_trivial;
    LeechPairReport { even, positive_definite, rootless, isometries, discriminant_trivial, invariant_trivial, verdict }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOne {
    /// `rank S + ℓ(A_S)`.
    pub value: usize,
    pub holds: bool,
}

/// `rank S + ℓ(A_S) ≤ 24`.
pub fn check_condition_1(s: &Lattice) -> Result<ConditionOne> {
    if s.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let value = s.rank() + s.discriminant_form()?.ell();
    Ok(ConditionOne { value, holds: value <= 24 })
}

/// A source lattice, a target lattice and the source basis in target coordinates.
#[derive(Clone, Debug)]
pub struct LatticeEmbedding {
    pub source: Lattice,
    pub target: Lattice,
    pub matrix: IntegerMatrix,
}

impl LatticeEmbedding {
    pub fn image(&self) -> Result<Lattice> {
        self.target.sublattice(format!("{} image", self.source.label), &self.matrix)
    }

    pub fn preserves_gram(&self) -> bool {
        self.image().map(|im| im.gram() == self.source.gram()).unwrap_or(false)
    }
}

/// `Λ ⊕ U` built from a certified Leech lattice, with `e`, `f` the last two
/// basis vectors.
#[derive(Clone, Debug)]
pub struct LeechSetting {
    pub leech: Lattice,
    pub ii: Lattice,
    pub frame: HyperbolicFrame,
}

impl LeechSetting {
    /// `leech` must be rank 24, det 1, even, positive definite and rootless.
    pub fn new(leech: &Lattice) -> Result<Self> {
        let leech = leech.detached();
        if !borcherds::is_leech_type(&leech)? {
            return Err(Error::Precondition("the ambient lattice is not a Leech lattice".into()));
        }
        let ii = borcherds::lambda_u_presentation(&leech);
        let frame = HyperbolicFrame::lambda_u(&ii)?;
        Ok(LeechSetting { leech, ii, frame })
    }

    /// Leech coordinates padded with zero `e`, `f` components.
    pub fn lift(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        out.resize(self.ii.rank(), BigInt::zero());
        out
    }

    pub fn lift_rows(&self, m: &IntegerMatrix) -> IntegerMatrix {
        let rows = m.row_iter().map(|r| self.lift(r)).collect();
        IntegerMatrix::from_rows(self.ii.rank(), rows).expect("padded rows have the presentation width")
    }
}

/// `α` with the vector `v ∈ S^⊥ ∩ Λ` it was built from.
#[derive(Clone, Debug)]
pub struct A1Attachment {
    pub v: Vec<BigInt>,
    pub alpha: Vec<BigInt>,
    /// `S ⊕ ℤα` inside the presentation.
    pub embedding: LatticeEmbedding,
}

/// `α = v + e − ((v,v)/2 − 1)·f` for a minimal `v ∈ S^⊥ ∩ Λ`, or `α = e + f`
/// when `S = Λ`. `s_coords` are basis coordinates in the Leech lattice.
pub fn attach_a1(setting: &LeechSetting, s_coords: &IntegerMatrix) -> Result<A1Attachment> {
    let leech = &setting.leech;
    let s = leech.sublattice("S", s_coords)?;
    if !leech.is_primitive_sublattice(&s)? {
        return Err(Error::NotPrimitive("S is not primitive in the Leech lattice".into()));
    }
    let (e, f) = (&setting.frame.e, &setting.frame.f);
    let n = leech.rank();
    let (v, alpha) = if s.rank() == n {
        let alpha: Vec<BigInt> = e.iter().zip(f).map(|(a, b)| a + b).collect();
        (vec![BigInt::zero(); n], alpha)
    } else {
        let t = leech.orthogonal_complement(&s)?;
        let (tv, norm) = enumeration::minimal_vector(&t)?;
        let v = t.vector(&tv);
        let k = norm / 2 - 1;
        let lifted = setting.lift(&v);
        let alpha = lifted.iter().zip(e).zip(f).map(|((x, ei), fi)| x + ei - &k * fi).collect();
        (v, alpha)
    };

    let ii = &setting.ii;
    let gram = ii.gram();
    if linalg::bilinear(&gram, &alpha, &alpha) != BigInt::from(2) {
        return Err(Error::Precondition("alpha does not have norm 2".into()));
    }
    let s_ii = setting.lift_rows(s_coords);
    if s_ii.row_iter().any(|r| !linalg::bilinear(&gram, r, &alpha).is_zero()) {
        return Err(Error::Precondition("alpha is not orthogonal to S".into()));
    }
    let mut plus = s_ii;
    plus.push_row(alpha.clone());
    let source = s.detached().orthogonal_sum(&lattice::standard::a1(), "S+A1");
    let embedding = LatticeEmbedding { source, target: ii.clone(), matrix: plus };
    let image = embedding.image()?;
    if !ii.is_primitive_sublattice(&image)? {
        return Err(Error::NotPrimitive("S + Z alpha is not primitive".into()));
    }
    Ok(A1Attachment { v, alpha, embedding })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct WeylSearchResult {
    pub w: Option<WeylVector>,
    pub candidates_tested: usize,
    pub height_bound_used: u64,
    pub status: SearchStatus,
}

/// Searches for a Weyl vector `w` with `w ⊥ S` and `(w, α) = −1`.
///
/// Every such `w` is `−α/2 + y` with `y` in `V = (S ⊕ ℤα)^⊥ ⊗ ℚ` and
/// `(y, y) = −1/2`, and `y` runs over a coset of `K = (S ⊕ ℤα)^⊥`. The coset
/// is enumerated by increasing value of the positive definite majorant
/// `q_M(y) = q(y) − 2(y, d)²/(d, d)` for a negative-norm `d ∈ K`, one unit of
/// `q_M` per round, for at most `height_bound` rounds. `d` is the primitive
/// integral direction of the projection of `reference` to `V` when that is
/// negative, else the first negative vector of a diagonalization of `K`.
///
/// Candidates are tested in order of `(q_M, coordinates)`, so the result is
/// deterministic.
pub fn find_orthogonal_weyl_vector(
    ii: &Lattice,
    s_ii: &IntegerMatrix,
    alpha: &[BigInt],
    height_bound: u64,
    reference: Option<&[BigInt]>,
) -> Result<WeylSearchResult> {
    let gram = ii.gram();
    let n = ii.rank();
    if alpha.len() != n || s_ii.cols() != n {
        return Err(Error::Shape("vectors must be in presentation coordinates".into()));
    }
    let alpha_norm = linalg::bilinear(&gram, alpha, alpha);
    if alpha_norm != BigInt::from(2) {
        return Err(Error::Precondition(format!("alpha norm: (alpha, alpha) = {alpha_norm}, expected 2")));
    }
    if s_ii.row_iter().any(|r| !linalg::bilinear(&gram, r, alpha).is_zero()) {
        return Err(Error::Precondition("alpha is not orthogonal to S".into()));
    }

    let mut constraints = s_ii.clone();
    constraints.push_row(alpha.to_vec());
    let a = &gram * &constraints.transpose();
    let mut rhs = vec![BigInt::zero(); constraints.rows()];
    *rhs.last_mut().expect("alpha row") = BigInt::from(-1);
    let x0 = linalg::solve_integral(&a, &rhs)?
        .ok_or_else(|| Error::NoSolution("no x with x perpendicular to S and (x, alpha) = -1".into()))?;
    let k = linalg::kernel(&a);
    let gk = &(&k * &gram) * &k.transpose();
    let m = k.rows();
    let (p, q, z) = lattice::inertia(&gk);
    if q != 1 || z != 0 || p + 1 != m {
        return Err(Error::Precondition(format!(
            "complement of S + Z alpha has inertia ({p}, {q}, {z}); S must be positive definite"
        )));
    }
    let gk_inv = gk.to_rational().inverse()?;
    // rational K-coordinates of the projection of x to V
    let project = |x: &[BigInt]| -> Vec<BigRational> {
        let pairings = linalg::to_rational_vec(&k.right_apply(&gram.right_apply(x)));
        gk_inv.left_apply(&pairings)
    };

    let d = majorant_direction(&gk, reference.map(project));
    let dd = linalg::bilinear(&gk, &d, &d);
    let gd = linalg::to_rational_vec(&gk.right_apply(&d));
    let mut majorant = gk.to_rational();
    let scale = BigRational::new(BigInt::from(2), dd);
    for i in 0..m {
        for j in 0..m {
            let corr = &scale * &gd[i] * &gd[j];
            majorant[(i, j)] -= corr;
        }
    }

    let c0 = project(&x0);
    let center: Vec<BigRational> = c0.iter().map(|c| -c).collect();
    let enumerator = Enumerator::new_rational(&majorant)?;
    let mut tested = 0;
    for bound in 1..=height_bound {
        let hi = BigRational::from_integer(BigInt::from(bound));
        let lo = BigRational::from_integer(BigInt::from(bound - 1));
        let mut shell: Vec<(Vec<BigInt>, BigRational)> = enumerator
            .close_vectors(&center, &hi)
            .into_iter()
            .filter(|(_, val)| bound == 1 || *val > lo)
            .collect();
        shell.sort_by(|(x, a), (y, b)| a.cmp(b).then_with(|| x.cmp(y)));
        log::debug!("weyl search round {bound}: {} candidates", shell.len());
        for (coeffs, _) in shell {
            tested += 1;
            let kx = k.left_apply(&coeffs);
            let w: Vec<BigInt> = x0.iter().zip(&kx).map(|(a, b)| a + b).collect();
            if !linalg::bilinear(&gram, &w, &w).is_zero() || !linalg::content(&w).is_one() {
                continue;
            }
            if let WeylDiagnosis::Weyl = borcherds::check_weyl_vector(ii, &w)? {
                assert!(s_ii.row_iter().all(|r| linalg::bilinear(&gram, r, &w).is_zero()));
                assert_eq!(linalg::bilinear(&gram, &w, alpha), BigInt::from(-1));
                return Ok(WeylSearchResult {
                    w: Some(WeylVector::verify(ii, w)?),
                    candidates_tested: tested,
                    height_bound_used: bound,
                    status: SearchStatus::Found,
                });
            }
        }
    }
    Ok(WeylSearchResult { w: None, candidates_tested: tested, height_bound_used: height_bound, status: SearchStatus::Exhausted })
}

/// Primitive integral vector of negative norm in a Lorentzian Gram matrix,
/// preferring the direction of `hint`.
fn majorant_direction(gk: &IntegerMatrix, hint: Option<Vec<BigRational>>) -> Vec<BigInt> {
    if let Some(h) = hint {
        let d = primitive_multiple(&h);
        if d.iter().any(|x| !x.is_zero()) && linalg::bilinear(gk, &d, &d).is_negative() {
            return d;
        }
    }
    let (p, diag) = lattice::diagonalize(gk);
    let i = diag.iter().position(|x| x.is_negative()).expect("Lorentzian form has a negative direction");
    primitive_multiple(p.row(i))
}

fn primitive_multiple(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let c = linalg::content(&ints);
    if c.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &c).collect()
}

/// Facts certified about `S ↪ Λ'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    pub target_rank: usize,
    pub target_det: BigInt,
    pub target_even: bool,
    pub target_positive_definite: bool,
    pub target_rootless: bool,
    pub image_saturation_index: BigInt,
    pub gram_preserved: bool,
    pub complement_disc_consistent: bool,
}

impl EmbeddingCertificate {
    /// Rank 24, det 1, even, positive definite, rootless, primitive image, Gram preserved.
    pub fn is_valid(&self) -> bool {
        self.target_rank == 24
            && self.target_det.is_one()
            && self.target_even
            && self.target_positive_definite
            && self.target_rootless
            && self.image_saturation_index.is_one()
            && self.gram_preserved
    }

    pub fn all_true(&self) -> bool {
        self.is_valid() && self.complement_disc_consistent
    }
}

#[derive(Clone, Debug)]
pub struct Extraction {
    /// `⟨α, w⟩^⊥` in the presentation, LLL-reduced.
    pub leech_prime: Lattice,
    pub embedding: LatticeEmbedding,
    pub certificate: EmbeddingCertificate,
}

/// Builds `Λ' = ⟨α, w⟩^⊥` and the embedding of `S` into it.
///
/// `s_ii` is the basis of `S` in presentation coordinates and `s` is `S`
/// itself (its Gram must match).
pub fn extract_primitive_embedding(
    ii: &Lattice,
    s: &Lattice,
    s_ii: &IntegerMatrix,
    alpha: &[BigInt],
    w: &[BigInt],
) -> Result<Extraction> {
    let gram = ii.gram();
    let pair = |x: &[BigInt], y: &[BigInt]| linalg::bilinear(&gram, x, y);
    let fault = |name: &str, detail: String| Err(Error::Precondition(format!("{name}: {detail}")));
    if pair(alpha, alpha) != BigInt::from(2) {
        return fault("alpha norm", format!("(alpha, alpha) = {}", pair(alpha, alpha)));
    }
    if !pair(w, w).is_zero() {
        return fault("w isotropic", format!("(w, w) = {}", pair(w, w)));
    }
    if pair(alpha, w) != BigInt::from(-1) {
        return fault("alpha-w pairing", format!("(alpha, w) = {}, expected -1", pair(alpha, w)));
    }
    if s_ii.row_iter().any(|r| !pair(r, w).is_zero()) {
        return fault("w perpendicular to S", "some basis vector of S pairs nontrivially with w".into());
    }
    if s_ii.row_iter().any(|r| !pair(r, alpha).is_zero()) {
        return fault("alpha perpendicular to S", "some basis vector of S pairs nontrivially with alpha".into());
    }
    let s_in_ii = ii.sublattice("S", s_ii)?;
    if !ii.is_primitive_sublattice(&s_in_ii)? {
        return fault("S primitive", "S is not primitive in the presentation".into());
    }
    if s_in_ii.gram() != s.gram() {
        return fault("S Gram", "the basis does not realize the Gram matrix of S".into());
    }

    let plane = IntegerMatrix::from_rows(ii.rank(), vec![alpha.to_vec(), w.to_vec()])?;
    let raw = ii.orthogonal_complement_coords(&plane, "Leech'")?;
    let reduced = enumeration::lll_reduce(&raw.gram(), &enumeration::default_delta())?;
    let leech_prime = ii.sublattice("Leech'", &(&reduced.transform * &ii.coords_of_sublattice(&raw)?))?;

    let matrix = leech_prime.coords_of_sublattice(&s_in_ii)?;
    let target = leech_prime.detached();
    let embedding = LatticeEmbedding { source: s.detached(), target: target.clone(), matrix };
    let image = embedding.image()?;

    let target_positive_definite = target.is_positive_definite();
    let target_rootless = target_positive_definite && enumeration::is_rootless(&target)?;
    let image_saturation_index = target.saturation_index(&image)?;
    let complement_disc_consistent =
        image_saturation_index.is_one() && complement_disc_check(&target, &image)?;
    let certificate = EmbeddingCertificate {
        target_rank: target.rank(),
        target_det: target.det(),
        target_even: target.is_even(),
        target_positive_definite,
        target_rootless,
        image_saturation_index,
        gram_preserved: embedding.preserves_gram(),
        complement_disc_consistent,
    };
    Ok(Extraction { leech_prime, embedding, certificate })
}

/// For primitive `S` in a unimodular `L` with complement `T`: `A_T ≅ A_S`
/// with `q_T = −q_S`.
pub fn complement_disc_check(l: &Lattice, image: &Lattice) -> Result<bool> {
    if !l.is_primitive_sublattice(image)? {
        return Err(Error::NotPrimitive("image is not primitive".into()));
    }
    let t = l.orthogonal_complement(image)?;
    let a_s = image.discriminant_form()?;
    let a_t = t.discriminant_form()?;
    Ok(a_t.compare_negated(&a_s).equal)
}

/// One generator of `G` extended by the identity on `S^⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedAction {
    pub integral: bool,
    pub isometry: bool,
    pub fixes_w: bool,
    pub fixes_complement: bool,
}

impl ExtendedAction {
    pub fn holds(&self) -> bool {
        self.integral && self.isometry && self.fixes_w && self.fixes_complement
    }
}

/// Extends `g` (acting on `S` basis coordinates) by the identity on `S^⊥`
/// and checks that the result is an integral isometry of `ii` fixing `w` and
/// every vector of `complement`.
pub fn check_extended_action(
    ii: &Lattice,
    s_ii: &IntegerMatrix,
    g: &IntegerMatrix,
    w: &[BigInt],
    complement: &IntegerMatrix,
) -> Result<ExtendedAction> {
    let n = ii.rank();
    let k = s_ii.rows();
    if g.rows() != k || g.cols() != k {
        return Err(Error::Shape(format!("generator is {}x{}, S has rank {k}", g.rows(), g.cols())));
    }
    let perp = ii.orthogonal_complement_coords(s_ii, "S^perp")?;
    let frame = s_ii.vstack(&ii.coords_of_sublattice(&perp)?)?;
    let mut block = RationalMatrix::identity(n);
    for i in 0..k {
        for j in 0..k {
            block[(i, j)] = BigRational::from_integer(g[(i, j)].clone());
        }
    }
    let fq = frame.to_rational();
    let ext = fq.inverse()?.try_mul(&block)?.try_mul(&fq)?;
    let Some(ext) = ext.to_integer() else {
        return Ok(ExtendedAction { integral: false, isometry: false, fixes_w: false, fixes_complement: false });
    };
    Ok(ExtendedAction {
        integral: true,
        isometry: ii.is_isometry(&ext),
        fixes_w: ext.left_apply(w) == w,
        fixes_complement: complement.row_iter().all(|r| ext.left_apply(r) == r),
    })
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub height_bound: u64,
    pub seed: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { height_bound: DEFAULT_HEIGHT_BOUND, seed: 0 }
    }
}

/// Enough for every shipped fixture; each finds its vector in the first round.
pub const DEFAULT_HEIGHT_BOUND: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Valid,
    CheckFailed(String),
    Exhausted,
}

/// Everything produced by a pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub s: Lattice,
    pub group: GroupAction,
    pub options: PipelineOptions,
    pub pair_report: LeechPairReport,
    pub condition_1: ConditionOne,
    pub presentation: Lattice,
    pub presentation_certificate: LorentzianCertificate,
    pub s_ii: IntegerMatrix,
    pub alpha: Vec<BigInt>,
    pub search: WeylSearchResult,
    pub extraction: Option<Extraction>,
    pub extended_actions: Vec<ExtendedAction>,
    pub warnings: Vec<String>,
    pub outcome: Outcome,
}

/// Runs the construction for `S` given as a sublattice of a Leech lattice
/// (its ambient Gram is the Leech Gram, its basis rows Leech coordinates).
///
/// The group enters only through the pair report and the extended-action
/// check; the embedding stages need only the lattice-level preconditions.
pub fn run_full_pipeline(s: &Lattice, g: &GroupAction, options: &PipelineOptions) -> Result<PipelineRun> {
    let leech = Lattice::from_gram("Leech", s.ambient_gram().clone()).map_err(|e| e.at_stage("leech"))?;
    let setting = LeechSetting::new(&leech).map_err(|e| e.at_stage("leech"))?;
    let attachment = attach_a1(&setting, s.basis()).map_err(|e| e.at_stage("attach"))?;
    let s_ii = setting.lift_rows(s.basis());
    run_in_presentation(s, g, &setting.ii, s_ii, attachment.alpha, Some(&setting.frame.e), options)
}

/// Runs the construction from an explicit witness `S ⊕ ℤα ⊂ II`: the
/// rows of `witness` are a basis of `S` followed by `α`, in the coordinates
/// of the (self-ambient) lattice `ii`.
pub fn run_from_witness(ii: &Lattice, witness: &IntegerMatrix, g: &GroupAction, options: &PipelineOptions) -> Result<PipelineRun> {
    if witness.rows() == 0 || witness.cols() != ii.rank() {
        return Err(Error::Shape("witness rows must be S then alpha in presentation coordinates".into()));
    }
    let k = witness.rows() - 1;
    let s_ii = witness.select_rows(0..k);
    let alpha = witness.row_vec(k);
    let s = ii.sublattice("S", &s_ii).map_err(|e| e.at_stage("witness"))?.detached();
    let image = ii.sublattice("S+A1", witness).map_err(|e| e.at_stage("witness"))?;
    if !ii.is_primitive_sublattice(&image).map_err(|e| e.at_stage("witness"))? {
        return Err(Error::NotPrimitive("S + Z alpha is not primitive".into()).at_stage("witness"));
    }
    run_in_presentation(&s, g, ii, s_ii, alpha, None, options)
}

fn run_in_presentation(
    s: &Lattice,
    g: &GroupAction,
    ii: &Lattice,
    s_ii: IntegerMatrix,
    alpha: Vec<BigInt>,
    reference: Option<&[BigInt]>,
    options: &PipelineOptions,
) -> Result<PipelineRun> {
    let presentation_certificate = LorentzianCertificate::of(ii);
    if !presentation_certificate.is_ii_25_1() {
        return Err(Error::Precondition("presentation is not even unimodular of signature (25,1)".into())
            .at_stage("presentation"));
    }
    let pair_report = verify_leech_pair(s, g);
    let condition_1 = check_condition_1(s).map_err(|e| e.at_stage("condition-1"))?;
    let mut warnings = Vec::new();
    if !pair_report.verdict {
        warnings.push(format!(
            "(G, S) is not a Leech pair (failed: {}); the embedding stages use lattice preconditions only",
            failed_pair_checks(&pair_report).join(", ")
        ));
    }
    if !condition_1.holds {
        warnings.push(format!("rank + l(A_S) = {} exceeds 24", condition_1.value));
    }
    let search = find_orthogonal_weyl_vector(ii, &s_ii, &alpha, options.height_bound, reference)
        .map_err(|e| e.at_stage("search"))?;
    let mut run = PipelineRun {
        s: s.clone(),
        group: g.clone(),
        options: options.clone(),
        pair_report,
        condition_1,
        presentation: ii.clone(),
        presentation_certificate,
        s_ii,
        alpha,
        search,
        extraction: None,
        extended_actions: Vec::new(),
        warnings,
        outcome: Outcome::Exhausted,
    };
    let Some(w) = run.search.w.clone() else {
        return Ok(run);
    };
    let extraction = extract_primitive_embedding(ii, s, &run.s_ii, &run.alpha, w.coords())
        .map_err(|e| e.at_stage("extract"))?;

    let s_in = ii.sublattice("S", &run.s_ii)?;
    let t = extraction.leech_prime.orthogonal_complement(&s_in).map_err(|e| e.at_stage("extended-action"))?;
    let t_coords = ii.coords_of_sublattice(&t)?;
    let mut actions = Vec::new();
    for gen in &g.generators {
        let a = if s.is_isometry(gen) {
            check_extended_action(ii, &run.s_ii, gen, w.coords(), &t_coords).map_err(|e| e.at_stage("extended-action"))?
        } else {
            ExtendedAction { integral: false, isometry: false, fixes_w: false, fixes_complement: false }
        };
        actions.push(a);
    }
    let actions_hold = actions.iter().all(ExtendedAction::holds);
    let cert = &extraction.certificate;
    run.outcome = if !cert.is_valid() {
        Outcome::CheckFailed("embedding certificate is not valid".into())
    } else if !cert.complement_disc_consistent {
        Outcome::CheckFailed("complement discriminant form is inconsistent".into())
    } else if !actions_hold && run.pair_report.verdict {
        Outcome::CheckFailed("extended action check failed for a Leech pair".into())
    } else {
        Outcome::Valid
    };
    if !actions_hold && !run.pair_report.verdict {
        run.warnings.push("G does not extend by the identity on the complement of S".into());
    }
    run.extraction = Some(extraction);
    run.extended_actions = actions;
    Ok(run)
}

fn failed_pair_checks(r: &LeechPairReport) -> Vec<&'static str> {
    let checks = [
        ("even", r.even),
        ("positive definite", r.positive_definite),
        ("rootless", r.rootless),
        ("isometries", r.isometries),
        ("trivial action on the discriminant", r.discriminant_trivial),
        ("trivial invariant lattice", r.invariant_trivial),
    ];
    checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect()
}

#[derive(Serialize)]
struct SearchDocument {
    status: SearchStatus,
    candidates_tested: usize,
    height_bound_used: u64,
    w: Option<Vec<String>>,
}

#[derive(Serialize)]
struct AlphaDocument {
    alpha: VectorDocument,
}

#[derive(Serialize)]
struct EmbeddingDocument {
    source_gram: Vec<Vec<String>>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct PairDocument {
    report: LeechPairReport,
    condition_1: ConditionOne,
}

/// Serialized certificate, one field per check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub outcome: String,
    pub detail: Option<String>,
    pub seed: u64,
    pub height_bound: u64,
    pub pair_verdict: bool,
    pub condition_1_value: usize,
    pub condition_1_holds: bool,
    pub presentation_det: String,
    pub presentation_even: bool,
    pub presentation_signature: (usize, usize),
    pub search_status: SearchStatus,
    pub target_rank: Option<usize>,
    pub target_det: Option<String>,
    pub target_even: Option<bool>,
    pub target_positive_definite: Option<bool>,
    pub target_rootless: Option<bool>,
    pub image_saturation_index: Option<String>,
    pub gram_preserved: Option<bool>,
    pub complement_disc_consistent: Option<bool>,
    pub extended_actions: Vec<ExtendedAction>,
    pub warnings: Vec<String>,
}

impl PipelineRun {
    pub fn certificate_document(&self) -> CertificateDocument {
        let cert = self.extraction.as_ref().map(|x| &x.certificate);
        let (outcome, detail) = match &self.outcome {
            Outcome::Valid => ("valid", None),
            Outcome::CheckFailed(why) => ("check-failed", Some(why.clone())),
            Outcome::Exhausted => ("exhausted", None),
        };
        CertificateDocument {
            outcome: outcome.into(),
            detail,
            seed: self.options.seed,
            height_bound: self.options.height_bound,
            pair_verdict: self.pair_report.verdict,
            condition_1_value: self.condition_1.value,
            condition_1_holds: self.condition_1.holds,
            presentation_det: serial::int_to_string(&self.presentation_certificate.det),
            presentation_even: self.presentation_certificate.even,
            presentation_signature: self.presentation_certificate.signature,
            search_status: self.search.status,
            target_rank: cert.map(|c| c.target_rank),
            target_det: cert.map(|c| serial::int_to_string(&c.target_det)),
            target_even: cert.map(|c| c.target_even),
            target_positive_definite: cert.map(|c| c.target_positive_definite),
            target_rootless: cert.map(|c| c.target_rootless),
            image_saturation_index: cert.map(|c| serial::int_to_string(&c.image_saturation_index)),
            gram_preserved: cert.map(|c| c.gram_preserved),
            complement_disc_consistent: cert.map(|c| c.complement_disc_consistent),
            extended_actions: self.extended_actions.clone(),
            warnings: self.warnings.clone(),
        }
    }

    /// Named JSON documents for every intermediate result, in a fixed order.
    pub fn artifacts(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("S.json".to_string(), serial::to_json(&LatticeDocument::from_lattice(&self.s))),
            (
                "pair_report.json".into(),
                serial::to_json(&PairDocument { report: self.pair_report.clone(), condition_1: self.condition_1.clone() }),
            ),
            ("presentation.json".into(), serial::to_json(&LatticeDocument::from_lattice(&self.presentation))),
            ("alpha.json".into(), serial::to_json(&AlphaDocument { alpha: VectorDocument::from_ints(&self.alpha) })),
            (
                "weyl_search.json".into(),
                serial::to_json(&SearchDocument {
                    status: self.search.status,
                    candidates_tested: self.search.candidates_tested,
                    height_bound_used: self.search.height_bound_used,
                    w: self.search.w.as_ref().map(|w| serial::ints_to_strings(w.coords())),
                }),
            ),
        ];
        if let Some(x) = &self.extraction {
            out.push(("leech_prime.json".into(), serial::to_json(&LatticeDocument::from_lattice(&x.leech_prime))));
            out.push((
                "embedding.json".into(),
                serial::to_json(&EmbeddingDocument {
                    source_gram: serial::matrix_to_strings(&x.embedding.source.gram()),
                    matrix: serial::matrix_to_strings(&x.embedding.matrix),
                }),
            ));
        }
        out.push(("certificate.json".into(), serial::to_json(&self.certificate_document())));
        out
    }
}
