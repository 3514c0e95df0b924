use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use resfin::exactalg::{parse_expr, Monomial, MonomialOrder, PolyMatrix2, PolyRing, RatPoly, Rationals};
use resfin::finitering::{mat_det, mat_mul, CommRing, FiniteRing};
use resfin::presentation::{parse_presentation, Letter, Word};

fn ring() -> Arc<PolyRing> {
    PolyRing::new(["x", "y", "z"], MonomialOrder::Grevlex)
}

fn arb_poly() -> impl Strategy<Value = Vec<(i64, i64, [u16; 3])>> {
    prop::collection::vec((-20i64..=20, 1i64..=4, [0u16..=3, 0u16..=3, 0u16..=3]), 0..=5)
}

fn build(r: &Arc<PolyRing>, t: &[(i64, i64, [u16; 3])]) -> RatPoly {
    let terms = t
        .iter()
        .map(|(n, d, e)| (Monomial::from_exponents(e), BigRational::new(BigInt::from(*n), BigInt::from(*d))))
        .collect();
    RatPoly::from_terms(r, Rationals, terms)
}

const RINGS: [&str; 6] = ["Z/6", "Z/8", "Z/2[t]/(t^2+t+1)", "Z/3[x]/(x^2)", "Z/2 * Z/3", "Z/2[a]/(a^2+a+1)[x]/(x^2)"];

fn arb_ring_elems(k: usize) -> impl Strategy<Value = (FiniteRing, Vec<u32>)> {
    prop::sample::select(RINGS.to_vec()).prop_flat_map(move |spec| {
        let r = FiniteRing::parse(spec).unwrap();
        let n = r.size();
        (Just(r), prop::collection::vec(0..n, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn polynomial_ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let r = ring();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.pow(2), &a * &a);
    }

    #[test]
    fn polynomial_text_round_trips(a in arb_poly()) {
        let r = ring();
        let a = build(&r, &a);
        prop_assert_eq!(parse_expr(&r, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn products_do_not_depend_on_the_order(a in arb_poly(), b in arb_poly()) {
        let r = ring();
        let lex = r.with_order(MonomialOrder::Lex);
        let (a, b) = (build(&r, &a), build(&r, &b));
        let p = &a * &b;
        let q = &a.in_ring(&lex) * &b.in_ring(&lex);
        prop_assert_eq!(q.in_ring(&r), p);
    }

    #[test]
    fn adjugate_gives_determinant(e in prop::collection::vec(arb_poly(), 4)) {
        let r = ring();
        let e: Vec<RatPoly> = e.iter().map(|t| build(&r, t)).collect();
        let m = PolyMatrix2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        let prod = m.mul(&m.adjugate());
        let d = m.det();
        let zero = RatPoly::zero(&r, Rationals);
        prop_assert_eq!(&prod.entries, &[d.clone(), zero.clone(), zero, d]);
    }

    #[test]
    fn finite_ring_laws((r, v) in arb_ring_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(r.mul_e(a, r.add_e(b, c)), r.add_e(r.mul_e(a, b), r.mul_e(a, c)));
        prop_assert_eq!(r.mul_e(r.mul_e(a, b), c), r.mul_e(a, r.mul_e(b, c)));
        prop_assert_eq!(r.mul_e(a, b), r.mul_e(b, a));
        prop_assert_eq!(r.add_e(a, r.neg_e(a)), 0);
        if let Some(i) = r.inverse_e(a) {
            prop_assert_eq!(r.mul_e(a, i), r.one_e());
        }
        prop_assert_eq!(r.parse_elem(&r.format_elem(&a)).unwrap(), a);
    }

    #[test]
    fn determinant_is_multiplicative((r, v) in arb_ring_elems(8)) {
        let x = [v[0], v[1], v[2], v[3]];
        let y = [v[4], v[5], v[6], v[7]];
        prop_assert_eq!(mat_det(&r, &mat_mul(&r, &x, &y)), r.mul_e(mat_det(&r, &x), mat_det(&r, &y)));
    }

    #[test]
    fn word_inverse_and_display(ls in prop::collection::vec((0usize..3, any::<bool>()), 0..30)) {
        let p = parse_presentation("gens: a b c;").unwrap();
        let w = Word::from_letters(ls.into_iter().map(|(g, i)| Letter::new(g, i)).collect()).reduce();
        prop_assert_eq!(w.invert().invert(), w.clone());
        prop_assert!(w.concat(&w.invert()).reduce().is_empty());
        let text = w.display_with(p.generators()).to_string();
        prop_assert_eq!(p.parse_word(&text).unwrap().reduce(), w);
    }
}
