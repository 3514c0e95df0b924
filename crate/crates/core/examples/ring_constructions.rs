//! Finite quotients of integral data, products of representations, and
//! adjoining square roots to lift PGL2 to PSL2.

use resfin::finitering::{finite_quotient_witness, format_mat, lift_pgl_to_psl, product_combine, FiniteRing, IntegralRep, Representation};
use resfin::presentation::parse_presentation;
use resfin::universal::KKind;

fn main() {
    let z = parse_presentation("gens: a;").unwrap();
    let a = z.parse_word("a").unwrap();
    for (kind, m) in [(KKind::SL2, ["1", "6", "0", "1"]), (KKind::GL2, ["2", "0", "0", "1"]), (KKind::GL2, ["3", "0", "0", "3"])] {
        let rep = IntegralRep::parse(&z, kind, None, &[m]).unwrap();
        let q = finite_quotient_witness(&rep, &a).unwrap();
        println!("{kind} a -> {m:?}: {} survives mod {}, image {}", q.case, q.modulus, format_mat(&q.ring, &q.image));
    }

    let d4 = parse_presentation("gens: a b; rels: a^4, b^2, b a b a;").unwrap();
    let rep = IntegralRep::parse(&d4, KKind::PSL2, Some("t^4+1"), &[["t", "0", "0", "-t^3"], ["0", "1", "-1", "0"]]).unwrap();
    let q = finite_quotient_witness(&rep, &d4.parse_word("a^2 b").unwrap()).unwrap();
    println!("D4, a^2 b over Z[t]/(t^4+1): nontrivial modulo {}", q.modulus);

    let v4 = parse_presentation("gens: a b; rels: a b a^-1 b^-1;").unwrap();
    let r2 = Representation::new(v4.clone(), FiniteRing::zmod(2).unwrap(), KKind::SL2, vec![[1, 1, 0, 1], [1, 0, 0, 1]]).unwrap();
    let r3 = Representation::new(v4.clone(), FiniteRing::zmod(3).unwrap(), KKind::SL2, vec![[1, 0, 0, 1], [1, 1, 0, 1]]).unwrap();
    let c = product_combine(&[r2, r3]).unwrap();
    println!("product over {}: {}", c.ring.spec(), c.describe());

    let c2 = parse_presentation("gens: a; rels: a^2;").unwrap();
    let base = Representation::new(c2, FiniteRing::zmod(3).unwrap(), KKind::PGL2, vec![[1, 0, 0, 2]]).unwrap();
    let lift = lift_pgl_to_psl(&base).unwrap();
    println!("PGL2(F3) -> PSL2({}): {}", lift.representation.ring.spec(), lift.representation.describe());
    println!("  retraction injective: {}", lift.retraction.injective);
}
