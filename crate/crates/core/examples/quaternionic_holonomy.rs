//! Gluing equations, shape labellings and holonomy of a two-tetrahedron
//! triangulation, over Q and over F4[x]/(x^2).

use resfin::finitering::{FiniteRing, RationalField};
use resfin::thurston::{analyse, enumerate_labellings, TriangulationFile};

fn main() {
    let rational = TriangulationFile::parse(include_str!("../data/quaternion-rational.tri")).unwrap();
    let rep = analyse(&rational, &RationalField).unwrap();
    println!("convention: {}", rep.convention);
    for e in &rep.equations {
        println!("  {e}");
    }
    println!("over Q: labelling ok = {}, image {}", rep.labelling.unwrap().ok, rep.image.unwrap());

    let finite = TriangulationFile::parse(include_str!("../data/quaternion-finite.tri")).unwrap();
    let r = FiniteRing::parse(finite.ring.as_deref().unwrap()).unwrap();
    let rep = analyse(&finite, &r).unwrap();
    println!("over {}: labelling ok = {}", rep.ring, rep.labelling.unwrap().ok);
    for (i, m) in rep.holonomy.iter().enumerate() {
        println!("  phi{} -> {m}", i + 1);
    }
    println!("  image {}", rep.image.unwrap());
    let all = enumerate_labellings(&finite.triangulation, &r, 1 << 24).unwrap();
    println!("  {} labellings solve the gluing system", all.len());
}
