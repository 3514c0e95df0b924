//! Exact multivariate polynomials: parsing, arithmetic and division.

use resfin::exactalg::{parse_expr, MonomialOrder, PolyMatrix2, PolyRing, Rationals};

fn main() {
    let ring = PolyRing::new(["x", "y", "z"], MonomialOrder::Grevlex);
    let p = |s: &str| parse_expr(&ring, s).unwrap();

    let f = p("x^3*y - 2/3*x*z + 1");
    let g = p("x*y - z");
    println!("f     = {f}");
    println!("g     = {g}");
    println!("f*g   = {}", &f * &g);
    println!("f^2   = {}", f.pow(2));

    let (q, r) = f.divmod(&[g.clone(), p("z^2 - 1")]).unwrap();
    println!("f = ({}) g + ({}) (z^2 - 1) + {r}", q[0], q[1]);

    let m = PolyMatrix2::new(p("x"), p("y"), p("z"), p("1"));
    println!("det [[x, y], [z, 1]] = {}", m.det());
    let id = m.mul(&m.adjugate());
    println!("M adj(M) = [[{}, {}], [{}, {}]]", id.entries[0], id.entries[1], id.entries[2], id.entries[3]);
    println!("identity over qq: {}", PolyMatrix2::identity(&ring, Rationals).is_identity());
}
