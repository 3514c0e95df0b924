use std::sync::Arc;

use super::domain::Domain;
use super::poly::{PolyRing, Polynomial};

/// Row-major 2×2 matrix of polynomials over a common ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix2<D: Domain> {
    pub entries: [Polynomial<D>; 4],
}

impl<D: Domain> PolyMatrix2<D> {
    pub fn new(a: Polynomial<D>, b: Polynomial<D>, c: Polynomial<D>, d: Polynomial<D>) -> Self {
        debug_assert!(a.same_ring(&b) && a.same_ring(&c) && a.same_ring(&d));
        Self { entries: [a, b, c, d] }
    }

    pub fn identity(ring: &Arc<PolyRing>, domain: D) -> Self {
        let one = Polynomial::one(ring, domain.clone());
        let zero = Polynomial::zero(ring, domain);
        Self::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn scalar(s: &Polynomial<D>) -> Self {
        let zero = Polynomial::zero(s.ring(), s.domain().clone());
        Self::new(s.clone(), zero.clone(), zero, s.clone())
    }

    pub fn a(&self) -> &Polynomial<D> {
        &self.entries[0]
    }
    pub fn b(&self) -> &Polynomial<D> {
        &self.entries[1]
    }
    pub fn c(&self) -> &Polynomial<D> {
        &self.entries[2]
    }
    pub fn d(&self) -> &Polynomial<D> {
        &self.entries[3]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        Self::new(&(a * e) + &(b * g), &(a * f) + &(b * h), &(c * e) + &(d * g), &(c * f) + &(d * h))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        Self::new(a - e, b - f, c - g, d - h)
    }

    pub fn det(&self) -> Polynomial<D> {
        let [a, b, c, d] = &self.entries;
        &(a * d) - &(b * c)
    }

    /// `[[d, -b], [-c, a]]`, so that `M * adj(M) = det(M) * Id`.
    pub fn adjugate(&self) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::new(d.clone(), -b, -c, a.clone())
    }

    pub fn scale(&self, s: &Polynomial<D>) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::new(a * s, b * s, c * s, d * s)
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        a.is_one() && b.is_zero() && c.is_zero() && d.is_one()
    }
}
