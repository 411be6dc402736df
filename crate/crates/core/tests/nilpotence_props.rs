use malcev_core::nilpotence::{
    assoc_powers, bk_chain, check_lemma_bn, check_lemma_laqt, jk_nil_index, left_powers, nilpotence_report,
    right_powers, strong_bound, strong_powers,
};
use malcev_core::{corpus, Algebra, Element, FieldSpec, NilIndex, NilpotenceError, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebras() -> Vec<(&'static str, Algebra)> {
    let mut v = corpus::malcev_corpus(FieldSpec::Rationals);
    v.extend(corpus::malcev_corpus(FieldSpec::prime(3).unwrap()));
    v
}

fn random_ideal<'a>(a: &'a Algebra, coords: &[i64]) -> Subspace<'a> {
    let n = a.dim();
    let v: Vec<i64> = (0..n).map(|i| coords[i % coords.len()]).collect();
    Subspace::span(a, [Element::from_i64s(a.field(), &v)]).unwrap().ideal_closure()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theorem_checks_on_random_ideals(idx in 0usize..16, coords in proptest::collection::vec(-2i64..=2, 1..8)) {
        let all = algebras();
        let (name, a) = &all[idx % all.len()];
        let b = random_ideal(a, &coords);
        let report = nilpotence_report(&b).unwrap();
        prop_assert!(report.all_checks_passed(), "{}: {:?}", name, report.checks);

        let cap = a.dim() + 1;
        let right = right_powers(&b, cap);
        let left = left_powers(&b, cap);
        prop_assert_eq!(&right.terms, &left.terms);
        if let Some(n) = right.nil_index {
            let bound = strong_bound(n);
            let strong = strong_powers(&b, bound).unwrap();
            let assoc = assoc_powers(&b, bound);
            let s = strong.nil_index.expect("strong index within the bound");
            prop_assert!(s <= bound);
            for k in 1..=s {
                prop_assert!(right.term(k).unwrap().is_subspace_of(assoc.term(k).unwrap()));
                prop_assert!(assoc.term(k).unwrap().is_subspace_of(strong.term(k).unwrap()));
            }
        }
        let bk = bk_chain(&b, cap).unwrap();
        for w in bk.terms.windows(2) {
            prop_assert!(w[1].is_ideal() && w[1].is_subspace_of(&w[0]));
        }
    }

    #[test]
    fn lemma_samples_hold(idx in 0usize..16, coords in proptest::collection::vec(-2i64..=2, 1..8), seed in any::<u64>()) {
        let all = algebras();
        let (name, a) = &all[idx % all.len()];
        let b = random_ideal(a, &coords);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bn = check_lemma_bn(&b, 4, 10, &mut rng).unwrap();
        prop_assert!(bn.passed(), "{}: {:?}", name, bn.failure);
        let laqt = check_lemma_laqt(&b, 4, 10, &mut rng).unwrap();
        prop_assert!(laqt.passed(), "{}: {:?}", name, laqt.failure);
    }
}

#[test]
fn strong_powers_are_ideals_and_descend() {
    for (name, a) in algebras() {
        let full = Subspace::full(&a);
        let strong = strong_powers(&full, 2 * a.dim() + 2).unwrap();
        for w in strong.terms.windows(2) {
            assert!(w[1].is_ideal(), "{name}");
            assert!(w[1].is_subspace_of(&w[0]), "{name}");
        }
    }
}

#[test]
fn lie_members_have_jk_index_one() {
    for (name, a) in algebras() {
        if malcev_core::identities::is_lie(&a).verdict {
            assert_eq!(jk_nil_index(&Subspace::full(&a), a.dim() + 1).unwrap(), NilIndex::Index(1), "{name}");
        }
    }
}

#[test]
fn non_ideals_and_non_malcev_are_rejected() {
    let a = corpus::example_malcev4(FieldSpec::Rationals);
    let e1 = Subspace::span(&a, [a.basis(0)]).unwrap();
    assert_eq!(strong_powers(&e1, 3).unwrap_err(), NilpotenceError::NotAnIdeal);
    assert_eq!(bk_chain(&e1, 3).unwrap_err(), NilpotenceError::NotAnIdeal);
    assert_eq!(jk_nil_index(&e1, 3).unwrap_err(), NilpotenceError::NotAnIdeal);
    let o = corpus::octonions(FieldSpec::Rationals);
    assert_eq!(nilpotence_report(&Subspace::full(&o)).unwrap_err(), NilpotenceError::NotMalcev);
}

#[test]
fn nilpotent_corpus_indices() {
    let q = FieldSpec::Rationals;
    for (a, right) in [(corpus::heisenberg(q), 3), (corpus::filiform4(q), 4), (corpus::nil_malcev5a(q), 4)] {
        let r = nilpotence_report(&Subspace::full(&a)).unwrap();
        assert_eq!(r.right_index, NilIndex::Index(right));
        assert_eq!(r.left_index, NilIndex::Index(right));
        assert_eq!(r.bound_4n2, Some(strong_bound(right)));
        assert_eq!(r.bound_satisfied, Some(true));
        assert!(r.all_checks_passed());
    }
}
