//! Buchberger's algorithm over Q and over a prime field.

use resfin::exactalg::{parse_expr, MonomialOrder, PolyRing, PrimeField, Rationals};
use resfin::groebner::{GbOptions, GroebnerBasis};

fn main() {
    for order in [MonomialOrder::Lex, MonomialOrder::Grevlex] {
        let ring = PolyRing::new(["x", "y", "z"], order);
        let gens: Vec<_> = ["x^2 + y + z - 1", "x + y^2 + z - 1", "x + y + z^2 - 1"]
            .iter()
            .map(|s| parse_expr(&ring, s).unwrap())
            .collect();
        let gb = GroebnerBasis::compute(&gens, Rationals, &GbOptions::default()).unwrap();
        println!("{order:?} basis over qq ({} elements):", gb.basis().len());
        for g in gb.basis() {
            println!("  {g}");
        }
        println!("  normal form of x*y*z: {}", gb.normal_form(&parse_expr(&ring, "x*y*z").unwrap()));

        let f5 = PrimeField::new(5).unwrap();
        let modp: Vec<_> = gens.iter().map(|g| g.map_domain(&f5).unwrap()).collect();
        let gb5 = GroebnerBasis::compute(&modp, f5, &GbOptions::default()).unwrap();
        println!("  over fp:5: {} elements, S-pairs reduce to zero: {}", gb5.basis().len(), gb5.check_s_pairs());
    }
}
