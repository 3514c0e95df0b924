//! Parse a presentation and manipulate words.

use resfin::presentation::{parse_presentation, Word};

fn main() {
    let p = parse_presentation(include_str!("../data/s5.pres")).expect("valid presentation");
    println!("{} generators, {} relators", p.generator_count(), p.relators().len());
    println!("{p}");

    let w = p.parse_word("x1 x2 x2^-1 x3 x1^2").unwrap();
    let names = p.generators();
    println!("w           = {}", w.display_with(names));
    println!("reduced     = {}", w.reduce().display_with(names));
    println!("inverse     = {}", w.invert().reduce().display_with(names));
    println!("(x1 x2)^3   = {}", p.parse_word("x1 x2").unwrap().pow(3).display_with(names));
    println!("x4^-2       = {}", Word::power(3, -2).display_with(names));
}
