//! Property tests for the algebraic invariants.

use proptest::prelude::*;

use soergel_core::bsmod::{hom_dim_at_degree, predicted_hom_dim, BSElement, Gen};
use soergel_core::coxeter::{eval, hilbert, is_reduced, parabolic_elements, reduced_words, Parabolic, Word};
use soergel_core::exprgraph::{build_expanded_from_word, classify_cycles};
use soergel_core::hecke::{b_word, LaurentPoly};
use soergel_core::induced::{epsilon_symmetry, Membrane};
use soergel_core::poly_core::{coeff, demazure, partial_parabolic, reflect, Monomial, MultiPoly};
use soergel_core::thick::ProjectorFamily;

const NVARS: usize = 4;

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::array::uniform4(0u8..3), -5i64..=5), 0..5).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e).unwrap(), coeff(c))))
    })
}

fn word(alphabet: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=alphabet, 0..=max_len).prop_map(Word::new)
}

fn interval() -> impl Strategy<Value = Parabolic> {
    (1usize..=3, 0usize..3).prop_map(|(lo, len)| Parabolic::interval(lo, (lo + len).min(3)))
}

fn flip(w: &Word, n: u8) -> Word {
    w.relabel(|c| n + 1 - c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflection_is_a_multiplicative_involution(p in poly(), q in poly(), i in 1usize..=NVARS) {
        prop_assert_eq!(reflect(i, &reflect(i, &p).unwrap()).unwrap(), p.clone());
        prop_assert_eq!(reflect(i, &(&p * &q)).unwrap(), &reflect(i, &p).unwrap() * &reflect(i, &q).unwrap());
    }

    #[test]
    fn demazure_squares_to_zero(p in poly(), i in 1usize..=NVARS) {
        prop_assert!(demazure(i, &demazure(i, &p).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn twisted_leibniz(p in poly(), q in poly(), i in 1usize..=NVARS) {
        let lhs = demazure(i, &(&p * &q)).unwrap();
        let rhs = &(&demazure(i, &p).unwrap() * &q) + &(&reflect(i, &p).unwrap() * &demazure(i, &q).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parabolic_demazure_is_linear_over_invariants(p in poly(), r in poly(), j in interval()) {
        // Everything in the image of the parabolic Demazure operator is invariant.
        let q = partial_parabolic(&j, &r).unwrap();
        prop_assert_eq!(partial_parabolic(&j, &(&q * &p)).unwrap(), &q * &partial_parabolic(&j, &p).unwrap());
    }

    #[test]
    fn reduced_words_spell_the_element(w in word(3, 6)) {
        let perm = eval(&w, 3).unwrap();
        let words = reduced_words(&perm);
        prop_assert!(!words.is_empty());
        for r in &words {
            prop_assert!(is_reduced(r));
            prop_assert_eq!(eval(r, 3).unwrap(), perm.clone());
        }
        let flipped = reduced_words(&eval(&flip(&w, 3), 3).unwrap());
        prop_assert_eq!(flipped.len(), words.len());
    }

    #[test]
    fn hilbert_polynomial_counts_the_group(mask in 1u32..16) {
        let j = Parabolic::new((1..=4).filter(|k| mask & (1 << (k - 1)) != 0));
        let h = hilbert(&j);
        prop_assert!(h.is_palindromic());
        prop_assert_eq!(h.at_one() as usize, parabolic_elements(&j, 4).len());
    }

    #[test]
    fn cycle_census_respects_the_diagram_flip(w in word(4, 5)) {
        let reduced = eval(&w, 4).unwrap().reduced_word();
        prop_assume!(!reduced.is_empty());
        let g = build_expanded_from_word(&reduced).unwrap();
        let h = build_expanded_from_word(&flip(&reduced, 4)).unwrap();
        prop_assert!(g.is_connected());
        prop_assert_eq!(classify_cycles(&g), classify_cycles(&h));
    }

    #[test]
    fn trace_is_symmetric(x in word(3, 4), y in word(3, 4)) {
        let (bx, by) = (b_word(&x, 3).unwrap(), b_word(&y, 3).unwrap());
        prop_assert_eq!(bx.mul(&by).epsilon(), by.mul(&bx).epsilon());
    }

    #[test]
    fn omega_bars_coefficients_and_reverses(x in word(3, 4), a in -3i32..=3, c in 1i64..4) {
        let scalar = LaurentPoly::monomial(a, c);
        let elt = b_word(&x, 3).unwrap().scale(&scalar);
        prop_assert_eq!(elt.omega(), b_word(&x.omega(), 3).unwrap().scale(&scalar.bar()));
        prop_assert_eq!(elt.omega().omega(), elt.clone());
        prop_assert_eq!(elt.omega().epsilon(), &scalar.bar() * &b_word(&x, 3).unwrap().epsilon());
    }

    #[test]
    fn cyclic_trace_identity_behind_induction(i in word(4, 4), j in word(4, 4), jj in interval()) {
        prop_assert!(epsilon_symmetry(&jj, &i, &j).unwrap());
    }

    #[test]
    fn right_action_is_an_action(w in word(3, 3), f in poly(), g in poly()) {
        let x = BSElement::one_tensor(w).left_mul(&MultiPoly::var(2));
        prop_assert_eq!(x.right_mul(&f).right_mul(&g), x.right_mul(&(&f * &g)));
        prop_assert_eq!(x.right_mul(&f).left_mul(&g), x.left_mul(&g).right_mul(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hom_dimensions_follow_the_pairing(x in word(2, 3), y in word(2, 3), m in -3i32..=3) {
        prop_assert_eq!(hom_dim_at_degree(&x, &y, m, 2).unwrap() as i64, predicted_hom_dim(&x, &y, m, 2).unwrap());
    }

    #[test]
    fn transitions_carry_one_tensors(a in 0usize..4, b in 0usize..4) {
        let family = ProjectorFamily::new(&Parabolic::interval(1, 2)).unwrap();
        let classes = family.classes();
        let (x, y) = (&classes[a % classes.len()], &classes[b % classes.len()]);
        prop_assert!(family.check_one_tensor(x, y).unwrap());
    }

    #[test]
    fn inducing_commutes_with_realizing(k in 0usize..6) {
        let gens = [Gen::Merge(1), Gen::Split(2), Gen::Unit(3), Gen::Counit(1), Gen::Six(2, 3), Gen::Cross(1, 3)];
        let membrane = Membrane::new(&Parabolic::interval(1, 2)).unwrap();
        prop_assert!(membrane.check_functor_square(&gens[k]).unwrap().passed());
    }
}

#[test]
fn literal_trace_identity_fails_somewhere() {
    // The form with i and j swapped is not an identity: J = {1}, i = 2, j = 12.
    let j = Parabolic::new([1]);
    let (i, jw): (Word, Word) = ("2".parse().unwrap(), "12".parse().unwrap());
    let bj = b_word(&"1".parse().unwrap(), 3).unwrap();
    let lhs = b_word(&jw, 3).unwrap().mul(&bj).mul(&b_word(&i.omega(), 3).unwrap()).epsilon();
    let rhs = bj.mul(&b_word(&i, 3).unwrap()).mul(&b_word(&jw.omega(), 3).unwrap()).epsilon();
    assert_eq!(lhs, LaurentPoly::from_pairs([(4, 1), (2, 2)]));
    assert_eq!(rhs, LaurentPoly::from_pairs([(4, 1), (2, 2), (0, 1)]));
    assert!(epsilon_symmetry(&j, &i, &jw).unwrap());
}
