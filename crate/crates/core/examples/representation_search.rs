//! Exhaustive search for representations into K(R) over small rings.

use resfin::finitering::{search_separating_rep, survey_images, FiniteRing, SearchOptions};
use resfin::presentation::parse_presentation;
use resfin::universal::KKind;

fn main() {
    let opts = SearchOptions::default();

    let c4 = parse_presentation("gens: a; rels: a^4;").unwrap();
    let a = c4.parse_word("a").unwrap();
    let z4 = FiniteRing::zmod(4).unwrap();
    match search_separating_rep(&c4, &a, &z4, KKind::SL2, &opts).unwrap() {
        Some(w) => println!("Z/4 in SL2(Z/4): {w} (revalidated: {})", w.revalidate()),
        None => println!("Z/4 in SL2(Z/4): none"),
    }

    let s5 = parse_presentation(include_str!("../data/s5.pres")).unwrap();
    let w = s5.parse_word("x1 x2").unwrap();
    for spec in ["Z/2", "Z/3", "Z/4", "Z/2[t]/(t^2+t+1)"] {
        let r = FiniteRing::parse(spec).unwrap();
        let found = search_separating_rep(&s5, &w, &r, KKind::PSL2, &opts).unwrap();
        println!("S5, x1 x2 in PSL2({spec}): {}", if found.is_some() { "separated" } else { "always killed" });
    }

    let s4 = parse_presentation(include_str!("../data/s4.pres")).unwrap();
    let f3 = FiniteRing::zmod(3).unwrap();
    for kind in [KKind::PGL2, KKind::PSL2] {
        let s = survey_images(&s4, &f3, kind, &opts).unwrap();
        println!(
            "S4 -> {kind}(F3): group of order {}, {} homomorphisms, largest image {}",
            s.group_order, s.homomorphisms, s.max_image_order
        );
    }
}
