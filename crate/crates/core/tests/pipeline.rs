use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use leechkit_core::borcherds::{self, LorentzianModel};
use leechkit_core::enumeration;
use leechkit_core::pipeline::{self, LeechSetting, Outcome, PipelineOptions, SearchStatus};
use leechkit_core::{fixtures, linalg, Error, GroupAction, IntegerMatrix, Lattice};

fn setting() -> LeechSetting {
    LeechSetting::new(fixtures::leech()).unwrap()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[test]
fn attach_to_whole_leech_is_e_plus_f() {
    let st = setting();
    let att = pipeline::attach_a1(&st, &IntegerMatrix::identity(24)).unwrap();
    assert_eq!(att.alpha, add(&st.frame.e, &st.frame.f));
    assert_eq!(st.ii.norm(&att.alpha), BigInt::from(2));
}

#[test]
fn attach_to_a_minimal_vector() {
    let st = setting();
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let att = pipeline::attach_a1(&st, fx.s.basis()).unwrap();
    let leech = fixtures::leech();
    assert_eq!(leech.norm(&att.v), BigInt::from(4));
    assert!(leech.inner(&att.v, fx.s.basis().row(0)).is_zero());
    // v of norm 4 makes alpha = v + e − f, a Leech root for e
    let expected: Vec<BigInt> = st.lift(&att.v).iter().zip(&st.frame.e).zip(&st.frame.f).map(|((x, e), f)| x + e - f).collect();
    assert_eq!(att.alpha, expected);
    assert!(borcherds::is_leech_root(&st.ii, &att.alpha, &st.frame.e));
    let image = att.embedding.image().unwrap();
    assert!(st.ii.is_primitive_sublattice(&image).unwrap());
    assert!(att.embedding.preserves_gram());
}

#[test]
fn attach_rejects_imprimitive_input() {
    let st = setting();
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let doubled = fx.s.basis().scaled(&BigInt::from(2));
    assert!(matches!(pipeline::attach_a1(&st, &doubled), Err(Error::NotPrimitive(_))));
}

#[test]
fn rank_two_search_finds_minus_e_or_minus_f() {
    let st = setting();
    let alpha = add(&st.frame.e, &st.frame.f);
    let s_ii = st.lift_rows(&IntegerMatrix::identity(24));
    let r = pipeline::find_orthogonal_weyl_vector(&st.ii, &s_ii, &alpha, 1, Some(&st.frame.e)).unwrap();
    assert_eq!(r.status, SearchStatus::Found);
    let w = r.w.unwrap();
    let minus_e: Vec<BigInt> = st.frame.e.iter().map(|x| -x).collect();
    let minus_f: Vec<BigInt> = st.frame.f.iter().map(|x| -x).collect();
    assert!(w.coords() == minus_e.as_slice() || w.coords() == minus_f.as_slice());
    // the same search without a reference uses a diagonalization direction
    let r = pipeline::find_orthogonal_weyl_vector(&st.ii, &s_ii, &alpha, 1, None).unwrap();
    assert_eq!(r.status, SearchStatus::Found);
}

#[test]
fn search_rejects_doubled_alpha() {
    let st = setting();
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let att = pipeline::attach_a1(&st, fx.s.basis()).unwrap();
    let s_ii = st.lift_rows(fx.s.basis());
    let doubled: Vec<BigInt> = att.alpha.iter().map(|x| x * 2).collect();
    let r = pipeline::find_orthogonal_weyl_vector(&st.ii, &s_ii, &doubled, 4, None);
    assert!(matches!(r, Err(Error::Precondition(m)) if m.starts_with("alpha norm")));
}

#[test]
fn found_vectors_satisfy_every_equation() {
    let st = setting();
    for name in ["leech-itself", "rank1-min"] {
        let fx = fixtures::fixture(name, 0).unwrap();
        let att = pipeline::attach_a1(&st, fx.s.basis()).unwrap();
        let s_ii = st.lift_rows(fx.s.basis());
        let r = pipeline::find_orthogonal_weyl_vector(&st.ii, &s_ii, &att.alpha, 2, Some(&st.frame.e)).unwrap();
        let w = r.w.expect("found");
        let g = st.ii.gram();
        assert!(s_ii.row_iter().all(|s| linalg::bilinear(&g, s, w.coords()).is_zero()));
        assert_eq!(linalg::bilinear(&g, &att.alpha, w.coords()), BigInt::from(-1));
        assert!(linalg::bilinear(&g, w.coords(), w.coords()).is_zero());
        assert!(borcherds::check_weyl_vector(&st.ii, w.coords()).unwrap().is_weyl());
    }
}

#[test]
fn extraction_faults_are_named() {
    let st = setting();
    let fx = fixtures::fixture("leech-itself", 0).unwrap();
    let s_ii = st.lift_rows(fx.s.basis());
    let alpha = add(&st.frame.e, &st.frame.f);
    let minus_e: Vec<BigInt> = st.frame.e.iter().map(|x| -x).collect();
    let cases: [(Vec<BigInt>, Vec<BigInt>, &str); 3] = [
        (alpha.clone(), st.frame.e.iter().map(|x| x * -2).collect(), "alpha-w pairing"),
        (alpha.iter().map(|x| x * 2).collect(), minus_e.clone(), "alpha norm"),
        (alpha.clone(), add(&minus_e, &st.frame.f), "w isotropic"),
    ];
    for (a, w, name) in cases {
        match pipeline::extract_primitive_embedding(&st.ii, &fx.s, &s_ii, &a, &w) {
            Err(Error::Precondition(m)) => assert!(m.starts_with(name), "{m}"),
            other => panic!("expected {name}, got {other:?}"),
        }
    }
    let x = pipeline::extract_primitive_embedding(&st.ii, &fx.s, &s_ii, &alpha, &minus_e).unwrap();
    assert!(x.certificate.all_true());
    // ⟨α, w⟩ has Gram [[2, −1], [−1, 0]]
    let g = st.ii.gram();
    assert_eq!(linalg::bilinear(&g, &alpha, &minus_e), BigInt::from(-1));
}

#[test]
fn complement_check_on_doubled_image_faults() {
    let run = {
        let fx = fixtures::fixture("rank1-min", 0).unwrap();
        pipeline::run_full_pipeline(&fx.s, &fx.group, &PipelineOptions::default()).unwrap()
    };
    let x = run.extraction.unwrap();
    let image = x.embedding.image().unwrap();
    assert!(pipeline::complement_disc_check(&x.embedding.target, &image).unwrap());
    let doubled = x.embedding.target.sublattice("2S", &x.embedding.matrix.scaled(&BigInt::from(2))).unwrap();
    assert!(matches!(pipeline::complement_disc_check(&x.embedding.target, &doubled), Err(Error::NotPrimitive(_))));
    let whole = x.embedding.target.sublattice("all", &IntegerMatrix::identity(24)).unwrap();
    assert!(pipeline::complement_disc_check(&x.embedding.target, &whole).unwrap());
}

#[test]
fn artifacts_are_deterministic() {
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let opts = PipelineOptions { height_bound: 3, seed: 5 };
    let a = pipeline::run_full_pipeline(&fx.s, &fx.group, &opts).unwrap().artifacts();
    let b = pipeline::run_full_pipeline(&fx.s, &fx.group, &opts).unwrap().artifacts();
    assert_eq!(a, b);
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names.last(), Some(&"certificate.json"));
    assert!(names.contains(&"weyl_search.json") && names.contains(&"embedding.json"));
}

#[test]
fn rank_one_pipeline_warns_but_certifies() {
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let run = pipeline::run_full_pipeline(&fx.s, &fx.group, &PipelineOptions::default()).unwrap();
    assert!(!run.pair_report.verdict);
    assert!(!run.pair_report.discriminant_trivial);
    assert_eq!(run.outcome, Outcome::Valid);
    assert!(!run.warnings.is_empty());
    assert!(run.extended_actions.iter().all(|a| !a.integral));
}

#[test]
fn witness_input_runs_without_a_reference() {
    // the attachment is itself an S ⊕ Zα witness inside the presentation
    let st = setting();
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let att = pipeline::attach_a1(&st, fx.s.basis()).unwrap();
    let r = pipeline::run_from_witness(&st.ii, &att.embedding.matrix, &fx.group, &PipelineOptions::default()).unwrap();
    assert_eq!(r.outcome, Outcome::Valid);
    assert!(r.extraction.unwrap().certificate.all_true());
}

#[test]
fn quotient_is_independent_of_the_section() {
    let m = LorentzianModel::build();
    let w = m.lattice_coords(&borcherds::w0_coordinates()).unwrap();
    let q1 = borcherds::quotient_mod_isotropic(&m.lattice, &w).unwrap();
    // a second section: shift every representative by a multiple of w
    let shifted: Vec<Vec<BigInt>> = q1
        .section
        .row_iter()
        .enumerate()
        .map(|(i, r)| r.iter().zip(&w).map(|(x, wi)| x + BigInt::from(i as i64 - 7) * wi).collect())
        .collect();
    let sec2 = IntegerMatrix::from_rows(26, shifted).unwrap();
    let g2 = &(&sec2 * &m.lattice.gram()) * &sec2.transpose();
    let l2 = Lattice::from_gram("alt", g2).unwrap();
    assert_eq!(l2.det(), q1.lattice.det());
    assert_eq!(l2.gram(), q1.lattice.gram());
    // a different Weyl vector gives an isometric quotient: unimodular and rootless
    let setting = LeechSetting::new(fixtures::leech()).unwrap();
    let q3 = borcherds::quotient_mod_isotropic(&setting.ii, &setting.frame.e).unwrap();
    assert!(q3.lattice.det().is_one());
    assert!(q3.lattice.is_even() && q1.lattice.is_even());
    assert!(enumeration::is_rootless(&q1.lattice).unwrap());
    assert!(enumeration::is_rootless(&q3.lattice).unwrap());
    assert_eq!(enumeration::min_norm(&q3.lattice).unwrap(), BigInt::from(4));
}

#[test]
fn successful_runs_satisfy_condition_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for rank in [2, 5] {
        let s = fixtures::random_primitive_sublattice(rank, &mut rng).unwrap();
        let g = GroupAction::minus_identity(rank);
        let run = pipeline::run_full_pipeline(&s, &g, &PipelineOptions::default()).unwrap();
        assert_eq!(run.search.status, SearchStatus::Found);
        let x = run.extraction.as_ref().unwrap();
        assert!(x.certificate.all_true(), "{:?}", x.certificate);
        let image = x.embedding.image().unwrap();
        let t = x.embedding.target.orthogonal_complement(&image).unwrap();
        let ell_t = t.discriminant_form().unwrap().ell();
        assert!(ell_t <= 24 - rank);
        assert!(pipeline::check_condition_1(&s).unwrap().holds);
    }
}

#[test]
fn leech_roots_from_lambda_are_injective() {
    let st = setting();
    let shell = fixtures::minimal_shell();
    let mut seen = std::collections::BTreeSet::new();
    for v in shell.vectors.iter().step_by(4001).take(40) {
        for sign in [1i64, -1] {
            let lam: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x * sign)).collect();
            let r = st.frame.leech_root_from_lambda(&lam).unwrap();
            assert!(borcherds::is_leech_root(&st.ii, &r, &st.frame.e));
            let wr = add(&st.frame.e, &r);
            assert!(st.ii.norm(&wr).is_zero());
            assert!(seen.insert(r));
        }
    }
    let zero = vec![BigInt::zero(); 24];
    let r0 = st.frame.leech_root_from_lambda(&zero).unwrap();
    assert_eq!(r0, add(&st.frame.e, &st.frame.f).iter().map(|x| -x).collect::<Vec<_>>());
    assert!(!borcherds::is_leech_root(&st.ii, &st.frame.f, &st.frame.e));
    assert!(BigInt::one() == st.ii.inner(&st.frame.e, &st.frame.f));
}
