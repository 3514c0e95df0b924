//! Finite commutative rings from specifications, and their matrix groups.

use resfin::finitering::{enumerate_group, CommRing, FiniteRing, DEFAULT_BUDGET};
use resfin::universal::KKind;

fn main() {
    for spec in ["Z/6", "Z/2[t]/(t^2+t+1)", "Z/3[x]/(x^2)", "Z/2 * Z/3", "Z/2[a]/(a^2+a+1)[x]/(x^2)"] {
        let r = FiniteRing::parse(spec).unwrap();
        let units = (0..r.size()).filter(|&e| r.inverse_e(e).is_some()).count();
        let orders: Vec<String> = KKind::ALL
            .iter()
            .map(|&k| format!("|{k}| = {}", enumerate_group(&r, k, DEFAULT_BUDGET).unwrap().len()))
            .collect();
        println!("{}: {} elements, {units} units; {}", r.spec(), r.size(), orders.join(", "));
    }

    let f4x = FiniteRing::parse("Z/2[a]/(a^2+a+1)[x]/(x^2)").unwrap();
    let u = f4x.parse_elem("a + x").unwrap();
    let inv = f4x.inverse_e(u).unwrap();
    println!("(a + x)^-1 = {} in {}", f4x.format_elem(&inv), f4x.spec());
}
