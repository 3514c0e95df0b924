use super::*;
use crate::exactalg::{parse_expr, IntPoly, Integers, Rationals};
use crate::finitering::{mat_mul, parse_mat, proj_equal, FiniteRing, RationalField};
use crate::groebner::{GbOptions, GroebnerBasis};

const FINITE: &str = include_str!("../../data/quaternion-finite.tri");
const RATIONAL: &str = include_str!("../../data/quaternion-rational.tri");

fn f4x() -> FiniteRing {
    FiniteRing::parse("Z/2[a]/(a^2+a+1)[x]/(x^2)").unwrap()
}

#[test]
fn quaternionic_edge_classes() {
    let f = TriangulationFile::parse(FINITE).unwrap();
    let tri = &f.triangulation;
    assert!(tri.is_closed());
    let classes = tri.edge_classes();
    assert_eq!(classes.len(), 3);
    assert!(classes.iter().all(|c| c.incidences.len() == 4));
    // each class meets both tetrahedra in a pair of opposite edges
    for c in &classes {
        for t in 0..2 {
            let es: Vec<usize> = c.incidences.iter().filter(|i| i.0 == t).map(|i| i.1).collect();
            assert_eq!(es.len(), 2);
            assert!(OPPOSITE_PAIRS.iter().any(|p| p.contains(&es[0]) && p.contains(&es[1])));
        }
    }
}

#[test]
fn quaternionic_gluing_equations() {
    let f = TriangulationFile::parse(FINITE).unwrap();
    let sys = f.triangulation.gluing_system();
    let mut eqs: Vec<String> = sys.describe();
    eqs.truncate(3);
    eqs.sort();
    assert_eq!(eqs, ["r^2*sp^2 = 1", "rp^2*s^2 = 1", "rpp^2*spp^2 = 1"]);
    assert_eq!(sys.parameter_relations.len(), 6);
    assert!(sys.edge_equations.iter().all(|e| !e.degenerate));
}

#[test]
fn lone_tetrahedron_has_six_degenerate_classes() {
    let f = TriangulationFile::parse("tets: 1;").unwrap();
    let sys = f.triangulation.gluing_system();
    assert_eq!(f.triangulation.edge_classes().len(), 6);
    assert!(!f.triangulation.is_closed());
    assert_eq!(sys.edge_equations.len(), 6);
    assert!(sys.edge_equations.iter().all(|e| e.degenerate));
}

#[test]
fn bad_pairings_are_rejected() {
    let twice = "tets: 2; pair: (0,3) -> (1,2) perm [3,0,1]; pair: (0,3) -> (1,3) perm [0,1,2];";
    assert!(matches!(TriangulationFile::parse(twice), Err(ThurstonError::Pairing(_))));
    let wrong_face = "tets: 2; pair: (0,3) -> (1,2) perm [0,1,2];";
    assert!(matches!(TriangulationFile::parse(wrong_face), Err(ThurstonError::Pairing(_))));
    let repeated = "tets: 2; pair: (0,3) -> (1,2) perm [3,0,1]; pair: (1,2) -> (0,3) perm [1,2,0];";
    assert_eq!(TriangulationFile::parse(repeated).unwrap().triangulation.pairings().len(), 1);
    assert!(matches!(TriangulationFile::parse("tets: 1; bogus: 3;"), Err(ThurstonError::Parse(_))));
}

#[test]
fn rational_labelling_and_klein_four_holonomy() {
    let f = TriangulationFile::parse(RATIONAL).unwrap();
    let q = RationalField;
    let report = analyse(&f, &q).unwrap();
    assert!(report.labelling.as_ref().unwrap().ok);
    let img = report.image.unwrap();
    assert_eq!(img.name.as_deref(), Some("V4"));
    let h = holonomy(&f.triangulation, &f.labels_in(&q).unwrap().unwrap(), &q).unwrap();
    assert!(proj_equal(&q, &h.matrices[0], &parse_mat(&q, "1 0 0 1").unwrap()));
    for (m, want) in h.matrices[1..].iter().zip(["[[2, -1], [2, -2]]", "[[1, -1], [2, -1]]", "[[0, 1], [2, 0]]"]) {
        assert!(proj_equal(&q, m, &parse_mat(&q, want).unwrap()), "{want}");
    }
}

#[test]
fn finite_labelling_and_quaternion_holonomy() {
    let f = TriangulationFile::parse(FINITE).unwrap();
    let r = f4x();
    let report = analyse(&f, &r).unwrap();
    assert!(report.labelling.as_ref().unwrap().ok, "{:?}", report.labelling);
    let img = report.image.as_ref().unwrap();
    assert_eq!(img.name.as_deref(), Some("Q8"));
    assert_eq!(img.order, 8);

    let h = holonomy(&f.triangulation, &f.labels_in(&r).unwrap().unwrap(), &r).unwrap();
    let expected = [
        "[[a, 1], [a, a + (a+1)*x]]",
        "[[1, 1], [a + (a+1)*x, 1 + a*x]]",
        "[[x, 1 + x], [a + (a+1)*x, 0]]",
    ];
    for (m, want) in h.matrices[1..].iter().zip(expected) {
        assert!(proj_equal(&r, m, &parse_mat(&r, want).unwrap()), "{want}");
    }
    let j = parse_mat(&r, "[[1, (a+1)*x], [x, 1]]").unwrap();
    for m in &h.matrices[1..] {
        assert!(proj_equal(&r, &mat_mul(&r, m, m), &j));
    }
    let id = parse_mat(&r, "1 0 0 1").unwrap();
    assert!(!proj_equal(&r, &j, &id));
    assert!(proj_equal(&r, &mat_mul(&r, &j, &j), &id));
    let prod = mat_mul(&r, &mat_mul(&r, &h.matrices[1], &h.matrices[2]), &h.matrices[3]);
    assert!(proj_equal(&r, &prod, &j));
}

#[test]
fn enumeration_over_small_rings() {
    let f = TriangulationFile::parse(FINITE).unwrap();
    let z2 = FiniteRing::zmod(2).unwrap();
    assert!(enumerate_labellings(&f.triangulation, &z2, 1 << 20).unwrap().is_empty());

    let r = f4x();
    let all = enumerate_labellings(&f.triangulation, &r, 1 << 20).unwrap();
    let known = f.params_in(&r).unwrap().unwrap();
    assert!(all.contains(&known));
    let minus_one = r.neg_e(r.one_e());
    for l in &all {
        assert!(verify_labelling(&f.triangulation, l, &r).ok);
        for p in l {
            assert_eq!(r.mul_e(r.mul_e(p[0], p[1]), p[2]), minus_one);
        }
    }
    assert!(enumerate_labellings(&f.triangulation, &r, 1000).is_err());
}

#[test]
fn mobius_maps_and_general_position() {
    let r = f4x();
    let p = |u: &str, v: &str| ProjPoint::new(&r, r.parse_elem(u).unwrap(), r.parse_elem(v).unwrap()).unwrap();
    let std = [p("1", "0"), p("0", "1"), p("1", "1")];
    let dst = [p("1", "a"), p("a", "1"), p("1", "x")];
    let m = mobius_three_points(&r, &std, &dst).unwrap();
    for (s, d) in std.iter().zip(&dst) {
        assert!(s.apply(&r, &m).unwrap().same_point(&r, d));
    }
    let close = [p("1", "0"), p("1", "x"), p("0", "1")];
    assert!(matches!(mobius_three_points(&r, &std, &close), Err(ThurstonError::NotGeneralPosition(_))));
    assert!(matches!(
        ProjPoint::new(&r, r.parse_elem("x").unwrap(), r.parse_elem("a*x").unwrap()),
        Err(ThurstonError::NotUnimodular(_))
    ));
    // neither coordinate is a unit
    let z6 = FiniteRing::zmod(6).unwrap();
    let q = ProjPoint::new(&z6, 2, 3).unwrap();
    assert_eq!(z6.add_e(z6.mul_e(q.alpha, 2), z6.mul_e(q.beta, 3)), 1);
    // [4, 3] = 5 [2, 3]
    let q2 = ProjPoint::new(&z6, 4, 3).unwrap();
    assert!(q.same_point(&z6, &q2));
    assert_eq!(q2.ratio(&z6, &q), Some(5));
}

#[test]
fn convention_is_recorded_and_changes_relations() {
    let mut f = TriangulationFile::parse(RATIONAL).unwrap();
    let q = RationalField;
    assert!(analyse(&f, &q).unwrap().convention.starts_with("cyclic"));
    f.triangulation.set_convention(ParameterConvention::Reversed);
    let rep = analyse(&f, &q).unwrap();
    assert!(rep.convention.starts_with("reversed"));
    assert!(!rep.labelling.unwrap().ok);
    let text = RATIONAL.replace("tets: 2;", "tets: 2; convention: reversed;");
    assert_eq!(TriangulationFile::parse(&text).unwrap().triangulation.convention(), ParameterConvention::Reversed);
}

#[test]
fn slot_override_moves_parameters() {
    let f = TriangulationFile::parse("tets: 1; slots: 0 = (12, 01, 02);").unwrap();
    let t = &f.triangulation;
    assert_eq!(t.parameter_of_edge(0, edge_index(0, 1)), 1);
    assert_eq!(t.parameter_of_edge(0, edge_index(0, 3)), 0);
    assert_eq!(t.parameter_of_edge(0, edge_index(1, 3)), 2);
    assert!(TriangulationFile::parse("tets: 1; slots: 0 = (01, 23, 02);").is_err());
}

// With the parameter relations, the two remaining edge equations reduce to
// 2(r sp - 1) = 0 modulo r^2 sp^2 = 1.
#[test]
fn edge_equations_reduce_to_two_times_r_sp_minus_one() {
    let f = TriangulationFile::parse(RATIONAL).unwrap();
    let sys = f.triangulation.gluing_system();
    let ring = sys.ring.clone();
    let e = |s: &str| parse_expr(&ring, s).unwrap().to_integers().unwrap();
    let by_text: Vec<(String, IntPoly)> = sys.describe().into_iter().zip(sys.all()).collect();
    let get = |s: &str| by_text.iter().find(|(t, _)| t == s).unwrap().1.clone();
    let blue = get("r^2*sp^2 = 1");
    let black = get("rp^2*s^2 = 1");
    let red = get("rpp^2*spp^2 = 1");
    let one = IntPoly::one(&ring, Integers);

    // Clearing denominators: rp (1 - r) = 1 and s sp = sp - 1 turn the black
    // equation into E2; r rpp = r - 1 and spp (1 - sp) = 1 turn red into E3.
    let e2 = &black * &e("(1-r)^2*sp^2");
    let e3 = &red * &e("r^2*(1-sp)^2");
    let u_rp = &e("rp*(1-r)") - &one;
    let u_s = &e("s*sp") - &e("sp - 1");
    let u_r = &e("r*rpp") - &e("r - 1");
    let u_spp = &e("spp*(1-sp)") - &one;
    let target2 = &e("2*sp*(r*sp - 1)") - &blue;
    let target3 = &e("2*r*(r*sp - 1)") - &blue;
    let gens: Vec<_> = [u_rp, u_s, u_r, u_spp].iter().map(|p| p.to_rationals()).collect();
    let gb = GroebnerBasis::compute(&gens, Rationals, &GbOptions::default()).unwrap();
    assert!(gb.normal_form(&(&e2 - &target2).to_rationals()).is_zero());
    assert!(gb.normal_form(&(&e3 - &target3).to_rationals()).is_zero());
    // in Z[r, sp]: E2 = 2 sp (r sp - 1) - (r^2 sp^2 - 1), E3 likewise
    assert_eq!(&e("(sp-1)^2 - (1-r)^2*sp^2"), &(&e("2*sp*(r*sp - 1)") - &blue));
    assert_eq!(&e("(r-1)^2 - r^2*(1-sp)^2"), &(&e("2*r*(r*sp - 1)") - &blue));

    // over Q the whole system is equivalent to r^2 sp^2 = 1, r sp = 1
    let all: Vec<_> = sys.all().iter().map(|p| p.to_rationals()).collect();
    let gb = GroebnerBasis::compute(&all, Rationals, &GbOptions::default()).unwrap();
    assert!(gb.normal_form(&e("2*(r*sp - 1)").to_rationals()).is_zero());
}
