use proptest::prelude::*;

use elemgroups::elementary::{e, ElemCtx, ElemLetter};
use elemgroups::exactmat::{commutator, Matrix};
use elemgroups::formring::FormRing;
use elemgroups::rings::{Elem, Ring};
use elemgroups::steinberg::{st_evaluate, st_free_reduce, StWord};
use elemgroups::unitary::{random_word, unitary_inverse, unitary_membership, UnitaryCtx};
use elemgroups::word::{Syllable, Word};

fn free() -> Ring {
    Ring::free(&["x", "y"], true, -1).unwrap()
}

/// Integer combinations of short words in x, x*, y, y*.
fn free_elem() -> impl Strategy<Value = String> {
    let word = prop::collection::vec(prop::sample::select(vec!["x", "x*", "y", "y*"]), 0..3)
        .prop_map(|w| if w.is_empty() { String::new() } else { w.join("") });
    prop::collection::vec((-3i64..4, word), 1..4).prop_map(|terms| {
        let mut out = String::new();
        for (k, (c, w)) in terms.into_iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                out.push_str(if c < 0 { "-" } else { "" });
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&if w.is_empty() { format!("{}", c.abs()) } else { format!("{}·{w}", c.abs()) });
        }
        out
    })
}

fn residue(m: u64) -> impl Strategy<Value = Elem> {
    (0..m).prop_map(Elem::Residue)
}

proptest! {
    #[test]
    fn free_ring_axioms(a in free_elem(), b in free_elem(), c in free_elem()) {
        let r = free();
        let (a, b, c) = (r.parse(&a).unwrap(), r.parse(&b).unwrap(), r.parse(&c).unwrap());
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
        prop_assert!(r.is_zero(&r.add(&a, &r.neg(&a))));
        // * is an anti-automorphism of order two
        prop_assert_eq!(r.star(&r.mul(&a, &b)).unwrap(), r.mul(&r.star(&b).unwrap(), &r.star(&a).unwrap()));
        prop_assert_eq!(r.star(&r.star(&a).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
    }

    #[test]
    fn residue_matrix_products_associate(v in prop::collection::vec(residue(6), 27)) {
        let r = Ring::modular(6).unwrap();
        let m = |k: usize| Matrix::from_rows(&r, v[9 * k..9 * k + 9].chunks(3).map(|c| c.to_vec()).collect()).unwrap();
        let (a, b, c) = (m(0), m(1), m(2));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().transpose(), b.transpose().mul(&a.transpose()).unwrap());
    }

    #[test]
    fn elementary_words_evaluate_homomorphically(
        letters in prop::collection::vec((1usize..4, 1usize..4, -2i64..3, any::<bool>()), 0..8),
        split in 0usize..8,
    ) {
        let r = Ring::integers();
        let syllables: Vec<Syllable<ElemLetter>> = letters
            .into_iter()
            .filter(|(i, j, _, _)| i != j)
            .map(|(i, j, c, inverse)| Syllable { letter: ElemLetter { i, j, r: r.from_int(c) }, inverse })
            .collect();
        let w = Word { syllables };
        let ctx = ElemCtx { ring: r.clone(), n: 3 };
        let g = w.evaluate(&ctx).unwrap();
        prop_assert!(g.mul(&w.inverse().evaluate(&ctx).unwrap()).unwrap().is_identity());
        let k = split.min(w.len());
        let u = Word { syllables: w.syllables[..k].to_vec() };
        let v = Word { syllables: w.syllables[k..].to_vec() };
        prop_assert_eq!(u.evaluate(&ctx).unwrap().mul(&v.evaluate(&ctx).unwrap()).unwrap(), g.clone());
        let red = w.free_reduce();
        prop_assert!(red.len() <= w.len());
        prop_assert_eq!(red.evaluate(&ctx).unwrap(), g);
        prop_assert_eq!(red.free_reduce(), red);
    }

    #[test]
    fn steinberg_reduction_preserves_evaluation(
        letters in prop::collection::vec((1usize..5, 1usize..5, -1i64..2, any::<bool>()), 0..10),
    ) {
        let r = Ring::modular(4).unwrap();
        let syl: Vec<_> = letters.into_iter().filter(|(i, j, _, _)| i != j).map(|(i, j, c, inv)| (i, j, r.from_int(c), inv)).collect();
        let w = StWord::from_syllables(4, syl).unwrap();
        let doubled = w.then(&w.inverse()).unwrap();
        prop_assert!(st_free_reduce(&doubled).is_empty());
        prop_assert_eq!(st_evaluate(&r, &st_free_reduce(&w)).unwrap(), st_evaluate(&r, &w).unwrap());
    }

    #[test]
    fn unitary_products_invert_by_block_formula(seed in any::<u64>(), len in 1usize..8) {
        use rand::SeedableRng;
        let f = FormRing::symplectic(&Ring::modular(5).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&f, 2, len, &mut rng).unwrap();
        let g = w.evaluate(&UnitaryCtx { form: f.clone(), n: 2 }).unwrap();
        prop_assert!(unitary_membership(&f, g.value()).unwrap());
        let inv = unitary_inverse(&f, g.value()).unwrap();
        prop_assert_eq!(inv.inverse_matrix(), g.inverse_matrix());
    }

    #[test]
    fn commutator_of_adjacent_elementaries(a in -20i64..20, b in -20i64..20) {
        let r = Ring::integers();
        let c = commutator(&e(&r, 3, 1, 2, &r.from_int(a)).unwrap(), &e(&r, 3, 2, 3, &r.from_int(b)).unwrap()).unwrap();
        prop_assert_eq!(c, e(&r, 3, 1, 3, &r.from_int(a * b)).unwrap());
    }
}
