use num_bigint::BigInt;

use super::*;
use crate::presentation::{parse_presentation, Word};
use crate::universal::KKind;

fn ring(spec: &str) -> FiniteRing {
    FiniteRing::parse(spec).unwrap()
}

fn el(r: &FiniteRing, s: &str) -> Elem {
    r.parse_element(s).unwrap()
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

#[test]
fn small_rings_and_units() {
    let z4 = ring("Z/4");
    assert_eq!(z4.size(), 4);
    assert_eq!(z4.units_e(), &[1, 3]);
    let f4 = ring("Z/2[t]/(t^2+t+1)");
    assert_eq!(f4.size(), 4);
    let t = el(&f4, "t");
    let b = el(&f4, "t+1");
    assert_eq!(f4.mul_e(t, b), f4.one_e());
    let r = ring("Z/2[t]/(t^2+t+1)[x]/(x^2)");
    assert_eq!(r.size(), 16);
    // Units of F4[x]/(x^2) are exactly the elements with a nonzero constant term.
    let direct = (0..16).filter(|&y| (0..16).any(|z| r.mul_e(y, z) == r.one_e())).count();
    assert_eq!(r.units_e().len(), direct);
    assert_eq!(direct, 12);
}

#[test]
fn unit_inverses() {
    let z5 = ring("Z/5");
    assert_eq!(z5.inverse_e(2), Some(3));
    assert_eq!(ring("Z/4").inverse_e(2), None);
    let r = ring("Z/2[a]/(a^2+a+1)[x]/(x^2)");
    let y = el(&r, "a + 1 + x");
    let inv = r.inverse_e(y).unwrap();
    assert_eq!(r.mul_e(y, inv), r.one_e());
    assert_eq!(inv, el(&r, "a + (a+1)*x"));
}

#[test]
fn spec_errors() {
    assert!(matches!(FiniteRing::parse("Z/4[x]/(2*x^2+1)"), Err(RingError::NonMonic(_))));
    assert!(matches!(FiniteRing::parse("Z/1000[x]/(x^3)"), Err(RingError::TooLarge { .. })));
    assert!(matches!(FiniteRing::parse("Z4"), Err(RingError::Malformed(_))));
    assert!(matches!(FiniteRing::parse("Z/4[x]/(x^2"), Err(RingError::Malformed(_))));
    assert!(matches!(FiniteRing::parse("Z/3[x]/(5)"), Err(RingError::Malformed(_))));
}

#[test]
fn element_text_round_trips() {
    for spec in ["Z/6", "Z/2[t]/(t^2+t+1)[x]/(x^2)", "Z/2 * Z/3", "Z/3[x]/(x^2+1)"] {
        let r = ring(spec);
        assert_eq!(ring(r.spec()), r, "{spec}");
        for y in 0..r.size() {
            assert_eq!(el(&r, &r.format(y)), y, "{spec}: {}", r.format(y));
        }
    }
    assert_eq!(ring("Z/2[t]/(t^2+t+1)[x]/(x^2)").spec(), "Z/2[t]/(t^2 + t + 1)[x]/(x^2)");
    let p = ring("Z/2 * Z/3");
    assert_eq!(p.format(el(&p, "(1, 2)")), "(1, 2)");
    assert_eq!(el(&p, "5"), el(&p, "(1, 2)"));
}

#[test]
fn ring_axioms_exhaustive() {
    for spec in ["Z/6", "Z/2[t]/(t^2)", "Z/2[t]/(t^2+t+1)", "Z/3[x]/(x^2+1)", "Z/2 * Z/4"] {
        let r = ring(spec);
        let n = r.size();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(r.mul_e(a, b), r.mul_e(b, a));
                assert_eq!(r.add_e(a, b), r.add_e(b, a));
                for c in 0..n {
                    assert_eq!(r.mul_e(a, r.add_e(b, c)), r.add_e(r.mul_e(a, b), r.mul_e(a, c)));
                    assert_eq!(r.mul_e(a, r.mul_e(b, c)), r.mul_e(r.mul_e(a, b), c));
                }
            }
            assert_eq!(r.add_e(a, r.neg_e(a)), 0);
            assert_eq!(r.mul_e(a, r.one_e()), a);
        }
    }
}

/// Naive count of matrices with the required determinant, without any
/// projective identification.
fn naive_count(r: &FiniteRing, special: bool) -> usize {
    let n = r.size();
    let mut k = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let det = r.sub_e(r.mul_e(a, d), r.mul_e(b, c));
                    if (special && det == r.one_e()) || (!special && r.inverse_e(det).is_some()) {
                        k += 1;
                    }
                }
            }
        }
    }
    k
}

#[test]
fn group_orders() {
    let z2 = ring("Z/2");
    let f3 = ring("Z/3");
    let order = |r: &FiniteRing, k| enumerate_group(r, k, DEFAULT_BUDGET).unwrap().len();
    assert_eq!(order(&z2, KKind::SL2), 6);
    assert_eq!(order(&z2, KKind::GL2), 6);
    assert_eq!(order(&f3, KKind::PSL2), 12);
    assert_eq!(order(&f3, KKind::PGL2), 24);
    // q(q^2-1) and (q^2-1)(q^2-q), divided by the scalar subgroups.
    let f4 = ring("Z/2[t]/(t^2+t+1)");
    assert_eq!(naive_count(&f4, true), 60);
    assert_eq!(order(&f4, KKind::PSL2), 60);
    assert_eq!(naive_count(&f3, false), 48);
    assert_eq!(order(&f3, KKind::PGL2), 48 / 2);
    let z4 = ring("Z/4");
    assert_eq!(order(&z4, KKind::SL2), naive_count(&z4, true));
    assert_eq!(order(&z4, KKind::GL2), naive_count(&z4, false));
    assert!(enumerate_group(&ring("Z/100"), KKind::SL2, 1 << 20).is_err());
}

#[test]
fn group_axioms_on_small_rings() {
    let specs = ["Z/2", "Z/3", "Z/4", "Z/5", "Z/6", "Z/2[t]/(t^2+t+1)", "Z/2[t]/(t^2)", "Z/2 * Z/2", "Z/3[x]/(x^2+1)"];
    for spec in specs {
        let r = ring(spec);
        for kind in KKind::ALL {
            if r.size() > 6 && !kind.is_special() {
                continue;
            }
            let g = FiniteGroup::new(&r, kind, DEFAULT_BUDGET).unwrap();
            let n = g.order() as u32;
            let e = g.identity();
            for x in 0..n {
                assert_eq!(g.mul(x, e), x);
                assert_eq!(g.mul(e, x), x);
                assert_eq!(g.mul(x, g.inv(x)), e);
                // Closure against direct matrix arithmetic.
                let y = (x * 7 + 3) % n;
                let m = mat_mul(&r, g.matrix(x), g.matrix(y));
                assert_eq!(g.index_of(&m), Some(g.mul(x, y)), "{spec} {kind}");
            }
            let step = (n / 13).max(1);
            for x in (0..n).step_by(step as usize) {
                for y in (0..n).step_by(step as usize) {
                    for z in (0..n).step_by(step as usize) {
                        assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                    }
                }
            }
        }
    }
}

#[test]
fn reduction_mod_two_is_a_homomorphism() {
    let z4 = ring("Z/4");
    let z2 = ring("Z/2");
    let g4 = FiniteGroup::new(&z4, KKind::SL2, DEFAULT_BUDGET).unwrap();
    let g2 = FiniteGroup::new(&z2, KKind::SL2, DEFAULT_BUDGET).unwrap();
    let f = |i: u32| g2.index_of(&g4.matrix(i).map(|e| e % 2)).unwrap();
    for x in 0..g4.order() as u32 {
        for y in 0..g4.order() as u32 {
            assert_eq!(f(g4.mul(x, y)), g2.mul(f(x), f(y)));
        }
    }
}

#[test]
fn functoriality_checks() {
    for kind in KKind::ALL {
        let c = check_functoriality(&ring("Z/4"), &ring("Z/2"), &reduction_map(4, 2).unwrap(), kind, DEFAULT_BUDGET).unwrap();
        assert!(c.ring_hom && c.group_hom, "{kind}");
        assert_eq!(c.ring_pairs, 16);
    }
    // squaring on Z/3 is not additive
    let sq = check_functoriality(&ring("Z/3"), &ring("Z/3"), &[0, 1, 1], KKind::SL2, DEFAULT_BUDGET).unwrap();
    assert!(!sq.ring_hom);
    // Z/2 -> Z/4, 1 -> 1 is not a ring map, and does not send SL2 into SL2
    let up = check_functoriality(&ring("Z/2"), &ring("Z/4"), &[0, 1], KKind::SL2, DEFAULT_BUDGET).unwrap();
    assert!(!up.ring_hom && !up.group_hom);
    assert!(check_functoriality(&ring("Z/4"), &ring("Z/2"), &[0, 1], KKind::SL2, DEFAULT_BUDGET).is_err());
    assert!(reduction_map(6, 4).is_err());
}

#[test]
fn product_isomorphism_checks() {
    for kind in KKind::ALL {
        let c = check_product_isomorphism(&ring("Z/2 * Z/3"), kind, DEFAULT_BUDGET).unwrap();
        assert!(c.bijective && c.homomorphism, "{kind}");
        assert_eq!(c.order, c.factor_orders.iter().product::<usize>());
    }
    assert_eq!(check_product_isomorphism(&ring("Z/2 * Z/3"), KKind::SL2, DEFAULT_BUDGET).unwrap().order, 144);
    assert!(check_product_isomorphism(&ring("Z/6"), KKind::SL2, DEFAULT_BUDGET).is_err());
}

#[test]
fn sl2_of_a_product_is_the_product() {
    let p = ring("Z/2 * Z/3");
    let (z2, z3) = (ring("Z/2"), ring("Z/3"));
    let gp = FiniteGroup::new(&p, KKind::SL2, DEFAULT_BUDGET).unwrap();
    let g2 = FiniteGroup::new(&z2, KKind::SL2, DEFAULT_BUDGET).unwrap();
    let g3 = FiniteGroup::new(&z3, KKind::SL2, DEFAULT_BUDGET).unwrap();
    assert_eq!(gp.order(), g2.order() * g3.order());
    let split = |i: u32| {
        let m = gp.matrix(i);
        let a = m.map(|e| p.project(e)[0]);
        let b = m.map(|e| p.project(e)[1]);
        (g2.index_of(&a).unwrap(), g3.index_of(&b).unwrap())
    };
    let mut seen = std::collections::HashSet::new();
    for x in 0..gp.order() as u32 {
        assert!(seen.insert(split(x)));
        for y in 0..gp.order() as u32 {
            let (a, b) = split(x);
            let (c, d) = split(y);
            assert_eq!(split(gp.mul(x, y)), (g2.mul(a, c), g3.mul(b, d)));
        }
    }
}

fn cyclic(n: usize) -> crate::presentation::Presentation {
    parse_presentation(&format!("gens: a; rels: a^{n};")).unwrap()
}

#[test]
fn unitriangular_rep_of_cyclic_groups() {
    for n in 2..7u32 {
        let r = FiniteRing::zmod(n).unwrap();
        let rep = Representation::new(cyclic(n as usize), r, KKind::SL2, vec![[1, 1, 0, 1]]).unwrap();
        assert!(evaluate_rep(&rep, &Word::empty()).is_identity());
        assert!(evaluate_rep(&rep, &Word::power(0, n as i64)).is_identity());
        assert!(!evaluate_rep(&rep, &Word::power(0, 1)).is_identity());
    }
}

#[test]
fn witness_for_cyclic_group_of_order_four() {
    let p = cyclic(4);
    let w = Word::power(0, 1);
    let z4 = ring("Z/4");
    let wit = search_separating_rep(&p, &w, &z4, KKind::SL2, &opts()).unwrap().unwrap();
    assert!(wit.revalidate());
    let manual = Representation::new(p.clone(), z4, KKind::SL2, vec![[1, 1, 0, 1]]).unwrap();
    assert!(!manual.kills(&w));
    // Tampering with the stored image is detected.
    let mut bad = wit.clone();
    bad.image = [1, 0, 0, 1];
    assert!(!bad.revalidate());
}

#[test]
fn s5_has_no_separating_rep_over_f3() {
    let p = parse_presentation(include_str!("../../data/s5.pres")).unwrap();
    let w = p.parse_word("x1 x2").unwrap();
    assert!(search_separating_rep(&p, &w, &ring("Z/3"), KKind::PSL2, &opts()).unwrap().is_none());
}

#[test]
fn dihedral_group_of_order_eight_over_f17() {
    let p = parse_presentation("gens: a b; rels: a^4, b^2, b a b a;").unwrap();
    let w = p.parse_word("a^2").unwrap();
    let f17 = ring("Z/17");
    let wit = search_separating_rep(&p, &w, &f17, KKind::PSL2, &opts()).unwrap().unwrap();
    assert!(wit.revalidate());
    // 2 has order 8 mod 17, so diag(2, 2^{-1}) has order 4 in PSL2.
    assert_eq!(f17.pow_e(2, 8), 1);
    assert_ne!(f17.pow_e(2, 4), 1);
    let rep = Representation::new(p, f17.clone(), KKind::PSL2, vec![[2, 0, 0, 9], [0, 1, 16, 0]]).unwrap();
    assert!(!rep.kills(&w));
    assert_eq!(rep.image_order(100).unwrap(), 8);
}

#[test]
fn search_respects_budget() {
    let p = parse_presentation("gens: a b c d;").unwrap();
    let w = p.parse_word("a").unwrap();
    let err = search_separating_rep(&p, &w, &ring("Z/3"), KKind::SL2, &SearchOptions { budget: 1 << 12 });
    assert!(matches!(err, Err(RingError::Budget(_))));
}

#[test]
fn s4_images_in_pgl2_and_psl2_of_f3() {
    let p = parse_presentation("gens: x1 x2 x3; rels: x1^2, x2^2, x3^2, (x1 x2)^3, (x2 x3)^3, (x1 x3)^2;").unwrap();
    let f3 = ring("Z/3");
    let pgl = survey_images(&p, &f3, KKind::PGL2, &opts()).unwrap();
    let psl = survey_images(&p, &f3, KKind::PSL2, &opts()).unwrap();
    assert_eq!((pgl.group_order, pgl.max_image_order), (24, 24));
    // PSL2(F3) has order 12 but no subgroup of order 6, so only the sign
    // quotient of S4 fits.
    assert_eq!((psl.group_order, psl.max_image_order), (12, 2));
    assert!(pgl.best.unwrap().validate().is_ok());
}

fn free_cyclic() -> crate::presentation::Presentation {
    parse_presentation("gens: a;").unwrap()
}

#[test]
fn finite_quotients_of_integral_data() {
    let p = free_cyclic();
    let w = Word::power(0, 1);
    let q = finite_quotient_witness(&IntegralRep::parse(&p, KKind::SL2, None, &[["1", "6", "0", "1"]]).unwrap(), &w).unwrap();
    assert_eq!((q.case, q.modulus), (QuotientCase::OffDiagonal, 4));
    assert_eq!(q.image, [1, 2, 0, 1]);
    // diag(3,3): c - 1 = 2 first survives mod 3, but det 9 is a unit only from m = 4.
    let q = finite_quotient_witness(&IntegralRep::parse(&p, KKind::GL2, None, &[["3", "0", "0", "3"]]).unwrap(), &w).unwrap();
    assert_eq!((q.case, q.modulus), (QuotientCase::Scalar, 4));
    let q = finite_quotient_witness(&IntegralRep::parse(&p, KKind::GL2, None, &[["2", "0", "0", "1"]]).unwrap(), &w).unwrap();
    assert_eq!((q.case, q.modulus), (QuotientCase::DiagonalDifference, 3));
    let id = IntegralRep::parse(&p, KKind::SL2, None, &[["1", "0", "0", "1"]]).unwrap();
    assert!(matches!(finite_quotient_witness(&id, &w), Err(RingError::NoWitness(_))));
    // Projective kinds ignore scalars.
    let s = IntegralRep::parse(&p, KKind::PGL2, None, &[["3", "0", "0", "3"]]).unwrap();
    assert!(matches!(finite_quotient_witness(&s, &w), Err(RingError::NoWitness(_))));
}

#[test]
fn finite_quotient_over_cyclotomic_data() {
    // D4 with a -> diag(t, t^{-1}) over Z[t]/(t^2+1), where t^{-1} = -t.
    let p = parse_presentation("gens: a b; rels: a^2, b^2, b a b a;").unwrap();
    let rep = IntegralRep::parse(&p, KKind::PSL2, Some("t^2+1"), &[["t", "0", "0", "-t"], ["0", "1", "-1", "0"]]).unwrap();
    let w = p.parse_word("a").unwrap();
    let q = finite_quotient_witness(&rep, &w).unwrap();
    assert_eq!((q.case, q.modulus), (QuotientCase::DiagonalDifference, 3));
    assert_eq!(q.ring.spec(), "Z/3[t]/(t^2 + 1)");
    let inverse_letter = p.parse_word("a^-1 b").unwrap();
    assert!(!q.representation.kills(&inverse_letter));
    assert_eq!(rep.modulus.as_deref(), Some(&[BigInt::from(1), BigInt::from(0), BigInt::from(1)][..]));
}

fn z2_squared() -> crate::presentation::Presentation {
    parse_presentation("gens: a b; rels: a b a^-1 b^-1;").unwrap()
}

#[test]
fn products_separate_the_union() {
    let p = z2_squared();
    let (wa, wb) = (p.parse_word("a").unwrap(), p.parse_word("b").unwrap());
    let r2 = Representation::new(p.clone(), ring("Z/2"), KKind::SL2, vec![[1, 1, 0, 1], [1, 0, 0, 1]]).unwrap();
    let r3 = Representation::new(p.clone(), ring("Z/3"), KKind::SL2, vec![[1, 0, 0, 1], [1, 1, 0, 1]]).unwrap();
    assert!(!r2.kills(&wa) && r2.kills(&wb));
    assert!(r3.kills(&wa) && !r3.kills(&wb));
    let c = product_combine(&[r2.clone(), r3.clone()]).unwrap();
    assert_eq!(c.ring.spec(), "Z/2 * Z/3");
    assert!(!c.kills(&wa) && !c.kills(&wb));
    for (g, m) in c.images.iter().enumerate() {
        assert_eq!(m.map(|e| c.ring.project(e)[0]), r2.images[g]);
        assert_eq!(m.map(|e| c.ring.project(e)[1]), r3.images[g]);
    }
    let twice = product_combine(&[r2.clone(), r2.clone()]).unwrap();
    for m in &twice.images {
        let parts = m.map(|e| twice.ring.project(e));
        assert!(parts.iter().all(|v| v[0] == v[1]));
    }
    let one = product_combine(std::slice::from_ref(&r3)).unwrap();
    assert_eq!(one.ring.size(), 3);
    assert!(!one.kills(&wb));
    let other = Representation::new(p.clone(), ring("Z/3"), KKind::GL2, vec![[1, 0, 0, 1]; 2]).unwrap();
    assert!(product_combine(&[r2, other]).is_err());
}

#[test]
fn square_root_lift_over_f3() {
    let p = cyclic(2);
    let f3 = ring("Z/3");
    let rep = Representation::new(p.clone(), f3.clone(), KKind::PGL2, vec![[1, 0, 0, 2]]).unwrap();
    let lift = lift_pgl_to_psl(&rep).unwrap();
    let r = &lift.representation.ring;
    assert_eq!(r.spec(), "Z/3[x]/(x^2 + 1)");
    assert_eq!(r.size(), 9);
    assert_eq!(lift.representation.kind, KKind::PSL2);
    assert_eq!(mat_det(r, &lift.representation.images[0]), r.one_e());
    assert!(lift.retraction.injective);
    assert_eq!(lift.retraction.product_pairs, 81);
    // Projectivizing the lift recovers the original image through R -> R'.
    assert!(proj_equal(r, &lift.representation.images[0], &rep.images[0]));
    assert!(!lift.representation.kills(&Word::power(0, 1)));
}

#[test]
fn square_root_lift_trivial_and_f5_cases() {
    let p = cyclic(4);
    let f5 = ring("Z/5");
    let rep = Representation::new(p.clone(), f5.clone(), KKind::PGL2, vec![[1, 0, 0, 2]]).unwrap();
    let lift = lift_pgl_to_psl(&rep).unwrap();
    assert_eq!(lift.representation.ring.spec(), "Z/5[x]/(x^2 + 2)");
    assert!(lift.retraction.injective);
    // Determinant one: the adjoined root squares to 1.
    let rep1 = Representation::new(p, f5, KKind::PGL2, vec![[2, 0, 0, 3]]).unwrap();
    let lift1 = lift_pgl_to_psl(&rep1).unwrap();
    let r = &lift1.representation.ring;
    let x = lift1.roots[0];
    assert_eq!(r.mul_e(x, x), r.one_e());
    assert!(lift1.retraction.injective);
    for w in 1..4 {
        let w = Word::power(0, w);
        assert_eq!(lift1.representation.kills(&w), rep1.kills(&w));
    }
}

#[test]
fn square_root_lift_several_generators() {
    let p = parse_presentation("gens: a b; rels: a^2, b^2, (a b)^2;").unwrap();
    let f5 = ring("Z/5");
    let rep = Representation::new(p.clone(), f5, KKind::PGL2, vec![[1, 0, 0, 4], [0, 1, 2, 0]]).unwrap();
    let lift = lift_pgl_to_psl(&rep).unwrap();
    assert_eq!(lift.representation.ring.size(), 625);
    assert!(lift.retraction.injective);
    for w in ["a", "b", "a b", "a b a"] {
        let w = p.parse_word(w).unwrap();
        assert_eq!(lift.representation.kills(&w), rep.kills(&w));
    }
    let nonunit = Representation { images: vec![[1, 0, 0, 0], [1, 0, 0, 1]], ..rep };
    assert!(matches!(lift_pgl_to_psl(&nonunit), Err(RingError::NotAUnit(_))));
}

#[test]
fn rationals_and_projective_equality() {
    let q = RationalField;
    let a = parse_mat(&q, "[[2, -1], [2, -2]]").unwrap();
    let b = parse_mat(&q, "[[-4, 2], [-4, 4]]").unwrap();
    assert!(proj_equal(&q, &a, &b));
    assert_eq!(q.format_elem(&q.parse_elem("-3/6").unwrap()), "-1/2");
    assert!(matches!(AnyRing::parse("QQ"), Ok(AnyRing::Rational(_))));
    // In Z/2 x Z/2 no entry of this matrix is a unit; equality falls back to the unit set.
    let p = ring("Z/2 * Z/2");
    let m = parse_mat(&p, "[[(1,0), (0,1)], [(0,1), (1,0)]]").unwrap();
    assert!(proj_equal(&p, &m, &m));
    assert!(!proj_equal(&p, &m, &mat_identity(&p)));
}
