//! Exhaustive checks that `K` is a functor on finite rings and turns
//! products into products.

use std::collections::HashSet;

use serde::Serialize;

use crate::universal::KKind;

use super::group::FiniteGroup;
use super::ring::{Elem, FiniteRing};
use super::RingError;

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialityCheck {
    pub source: String,
    pub target: String,
    pub kind: KKind,
    pub ring_pairs: u64,
    pub group_pairs: u64,
    pub ring_hom: bool,
    pub group_hom: bool,
}

/// Check that `map` (indexed by source element) is a unital ring
/// homomorphism and that the induced map `K(src) -> K(dst)` is a group
/// homomorphism, on all pairs.
pub fn check_functoriality(
    src: &FiniteRing,
    dst: &FiniteRing,
    map: &[Elem],
    kind: KKind,
    budget: u64,
) -> Result<FunctorialityCheck, RingError> {
    if map.len() != src.size() as usize {
        return Err(RingError::Mismatch(format!("map has {} entries for a ring of size {}", map.len(), src.size())));
    }
    let n = src.size();
    let mut ring_hom = map[src.one_e() as usize] == dst.one_e();
    for a in 0..n {
        for b in 0..n {
            let (fa, fb) = (map[a as usize], map[b as usize]);
            ring_hom &= map[src.add_e(a, b) as usize] == dst.add_e(fa, fb);
            ring_hom &= map[src.mul_e(a, b) as usize] == dst.mul_e(fa, fb);
        }
    }
    let gs = FiniteGroup::new(src, kind, budget)?;
    let gd = FiniteGroup::new(dst, kind, budget)?;
    let f: Vec<Option<u32>> = (0..gs.order() as u32).map(|i| gd.index_of(&gs.matrix(i).map(|e| map[e as usize]))).collect();
    let mut group_hom = f.iter().all(Option::is_some);
    if group_hom {
        for x in 0..gs.order() as u32 {
            for y in 0..gs.order() as u32 {
                group_hom &= f[gs.mul(x, y) as usize] == Some(gd.mul(f[x as usize].unwrap(), f[y as usize].unwrap()));
            }
        }
    }
    Ok(FunctorialityCheck {
        source: src.spec().to_string(),
        target: dst.spec().to_string(),
        kind,
        ring_pairs: (n as u64).pow(2),
        group_pairs: (gs.order() as u64).pow(2),
        ring_hom,
        group_hom,
    })
}

/// The reduction `Z/n -> Z/d` for `d | n`, as an index map.
pub fn reduction_map(n: u32, d: u32) -> Result<Vec<Elem>, RingError> {
    if d == 0 || n % d != 0 {
        return Err(RingError::Mismatch(format!("{d} does not divide {n}")));
    }
    Ok((0..n).map(|e| e % d).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheck {
    pub ring: String,
    pub kind: KKind,
    pub order: usize,
    pub factor_orders: Vec<usize>,
    pub bijective: bool,
    pub homomorphism: bool,
}

/// Check that the coordinate projections give an isomorphism
/// `K(R_1 * ... * R_k) -> K(R_1) x ... x K(R_k)`.
pub fn check_product_isomorphism(ring: &FiniteRing, kind: KKind, budget: u64) -> Result<ProductCheck, RingError> {
    let factors = ring.factors().ok_or_else(|| RingError::Mismatch(format!("{} is not a product", ring.spec())))?;
    let gp = FiniteGroup::new(ring, kind, budget)?;
    let gs: Vec<FiniteGroup> = factors.iter().map(|f| FiniteGroup::new(f, kind, budget)).collect::<Result<_, _>>()?;
    let split = |i: u32| -> Option<Vec<u32>> {
        let m = gp.matrix(i);
        gs.iter().enumerate().map(|(k, g)| g.index_of(&m.map(|e| ring.project(e)[k]))).collect()
    };
    let parts: Vec<Option<Vec<u32>>> = (0..gp.order() as u32).map(split).collect();
    let product: usize = gs.iter().map(FiniteGroup::order).product();
    let distinct: HashSet<&Vec<u32>> = parts.iter().flatten().collect();
    let bijective = parts.iter().all(Option::is_some) && distinct.len() == gp.order() && product == gp.order();
    let mut homomorphism = bijective;
    if bijective {
        for x in 0..gp.order() as u32 {
            for y in 0..gp.order() as u32 {
                let (px, py) = (parts[x as usize].as_ref().unwrap(), parts[y as usize].as_ref().unwrap());
                let want: Vec<u32> = gs.iter().enumerate().map(|(k, g)| g.mul(px[k], py[k])).collect();
                homomorphism &= parts[gp.mul(x, y) as usize].as_ref() == Some(&want);
            }
        }
    }
    Ok(ProductCheck {
        ring: ring.spec().to_string(),
        kind,
        order: gp.order(),
        factor_orders: gs.iter().map(FiniteGroup::order).collect(),
        bijective,
        homomorphism,
    })
}
