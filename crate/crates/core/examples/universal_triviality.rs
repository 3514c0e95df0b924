//! Decide whether a word dies in every SL2 representation, via membership
//! in the universal ideal.

use resfin::exactalg::CoefficientDomain;
use resfin::groebner::MembershipOptions;
use resfin::presentation::parse_presentation;
use resfin::universal::{KKind, UniversalModel};

fn main() {
    let p = parse_presentation(include_str!("../data/s5.pres")).unwrap();
    let names = "a b c d i j k l p q r s w x y z".split(' ').map(String::from).collect();
    let model = UniversalModel::build_with_names(&p, KKind::SL2, names).unwrap();
    println!("{} variables, {} ideal generators", model.ring().nvars(), model.ideal().generators().len());

    let w = p.parse_word("x1 x2").unwrap();
    for f in model.triviality_conditions(&w) {
        println!("  condition: {f}");
    }
    let opts = MembershipOptions::default();
    for d in [CoefficientDomain::PrimeField(3), CoefficientDomain::PrimeField(5), CoefficientDomain::Rationals, CoefficientDomain::Integers] {
        let v = model.test_triviality(&w, d, &opts).unwrap();
        println!("x1 x2 in SL2 over {d}: {}", v.status);
        for (f, m) in &v.entries {
            if let Some(n) = &m.diagnostics.note {
                println!("  {f}: {n}");
            }
        }
    }

    // in a free group nothing but the identity is killed
    let free = parse_presentation("gens: a b;").unwrap();
    let m = UniversalModel::build(&free, KKind::PSL2);
    let v = m.test_triviality(&free.parse_word("a b a^-1 b^-1").unwrap(), CoefficientDomain::Rationals, &opts).unwrap();
    println!("[a, b] in PSL2 of a free group: {}", v.status);
}
