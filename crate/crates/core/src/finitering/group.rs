//! Explicit enumeration of `K(R)` for a finite ring `R`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::universal::KKind;

use super::matrix::{canonical, in_group, mat_identity, mat_inverse, mat_mul, GroupElement2};
use super::ring::{Elem, FiniteRing, Mat2};
use super::RingError;

/// Default bound on candidate tuples for enumeration and search.
pub const DEFAULT_BUDGET: u64 = 1 << 24;
const TABLE_LIMIT: usize = 4096;

/// `K(R)` with elements stored as canonical matrices and indexed `0..order`.
pub struct FiniteGroup {
    ring: FiniteRing,
    kind: KKind,
    elements: Vec<Mat2<Elem>>,
    index: HashMap<Mat2<Elem>, u32>,
    identity: u32,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl FiniteGroup {
    /// Enumerate `K(R)`; fails when `|R|^4` exceeds `budget`.
    pub fn new(ring: &FiniteRing, kind: KKind, budget: u64) -> Result<Self, RingError> {
        let n = ring.size() as u64;
        if (n as u128).pow(4) > budget as u128 {
            return Err(RingError::Budget(format!("|R|^4 = {} exceeds the budget {budget}", (n as u128).pow(4))));
        }
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        let n = n as u32;
        // Every PSL2 class has a determinant-one representative.
        let test = if kind == KKind::PSL2 { KKind::SL2 } else { kind };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let m = [a, b, c, d];
                        if !in_group(ring, test, &m) {
                            continue;
                        }
                        let m = canonical(ring, kind, &m);
                        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(m) {
                            e.insert(elements.len() as u32);
                            elements.push(m);
                        }
                    }
                }
            }
        }
        let identity = index[&canonical(ring, kind, &mat_identity(ring))];
        let inverse = elements
            .iter()
            .map(|m| index[&canonical(ring, kind, &mat_inverse(ring, m).expect("group element invertible"))])
            .collect();
        let mut g = Self { ring: ring.clone(), kind, elements, index, identity, inverse, table: None };
        if g.elements.len() <= TABLE_LIMIT {
            let table: Vec<u32> = (0..g.elements.len())
                .into_par_iter()
                .flat_map_iter(|i| {
                    let g = &g;
                    (0..g.elements.len()).map(move |j| g.mul_slow(i as u32, j as u32))
                })
                .collect();
            g.table = Some(table);
        }
        Ok(g)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn kind(&self) -> KKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn matrix(&self, i: u32) -> &Mat2<Elem> {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Mat2<Elem>] {
        &self.elements
    }

    /// Index of the class of `m`, if `m` lies in the group.
    pub fn index_of(&self, m: &Mat2<Elem>) -> Option<u32> {
        self.index.get(&canonical(&self.ring, self.kind, m)).copied()
    }

    pub fn inv(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        match &self.table {
            Some(t) => t[i as usize * self.elements.len() + j as usize],
            None => self.mul_slow(i, j),
        }
    }

    fn mul_slow(&self, i: u32, j: u32) -> u32 {
        let m = mat_mul(&self.ring, &self.elements[i as usize], &self.elements[j as usize]);
        self.index[&canonical(&self.ring, self.kind, &m)]
    }

    pub fn element_order(&self, i: u32) -> usize {
        let mut x = i;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Indices of the subgroup generated by `gens`, identity first.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    pub fn group_element(&self, i: u32) -> GroupElement2<FiniteRing> {
        GroupElement2 { ring: self.ring.clone(), kind: self.kind, matrix: self.elements[i as usize] }
    }
}

/// All elements of `K(R)`, projective kinds deduplicated up to unit scalar.
pub fn enumerate_group(ring: &FiniteRing, kind: KKind, budget: u64) -> Result<Vec<GroupElement2<FiniteRing>>, RingError> {
    let g = FiniteGroup::new(ring, kind, budget)?;
    Ok((0..g.order() as u32).map(|i| g.group_element(i)).collect())
}
