//! Ideal membership with certificates that can be written, re-read and
//! checked by multiplication alone.

use resfin::exactalg::{parse_expr, CoefficientDomain, MonomialOrder, PolyRing};
use resfin::groebner::{verify_certificate, Ideal, MembershipCertificate, MembershipOptions};

fn main() {
    let ring = PolyRing::new(["x", "y", "z"], MonomialOrder::Grevlex);
    let p = |s: &str| parse_expr(&ring, s).unwrap();
    let ideal = Ideal::new(&ring, vec![p("x*(1-y^2)^2"), p("y*z - 1")]);
    let opts = MembershipOptions::default();

    for (f, domain) in [
        ("x*(1-y^2)", CoefficientDomain::Rationals),
        ("x*(1-y^2)^3", CoefficientDomain::Rationals),
        ("x*(1-y^2)^2*z + y*z^2 - z", CoefficientDomain::Integers),
        ("x*(1-y^2)^2*z + y*z^2 - z", CoefficientDomain::PrimeField(7)),
    ] {
        let v = ideal.is_member(&p(f), domain, &opts).unwrap();
        println!("{f} over {domain}: {}", v.status);
        if let Some(c) = v.certificate {
            let path = std::env::temp_dir().join("resfin-example.cert");
            c.write(&path).unwrap();
            let back = MembershipCertificate::read(&path).unwrap();
            println!("  certificate of degree {} re-read and verified: {}", back.degree(), verify_certificate(&back));
        }
    }
}
