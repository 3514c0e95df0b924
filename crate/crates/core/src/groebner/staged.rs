//! Certificates assembled basis element by basis element.
//!
//! Each element `h` of a reduced basis is certified by a small echelon
//! search over the inputs plus the elements already certified; the
//! partial cofactors are then substituted back so that every certificate
//! is expressed over the inputs alone. The target is finally divided by
//! the basis and the quotients composed with the element certificates.

use crate::exactalg::{FieldDomain, Polynomial};

use super::certificate::{macaulay_rows, macaulay_search, EchelonDomain};
use super::engine::GroebnerBasis;

/// Limits for [`staged_lift`].
#[derive(Clone, Copy, Debug)]
pub struct StagedLimits {
    pub max_degree: u32,
    pub max_rows: usize,
}

/// Certificate of every basis element over the inputs, or `None` when some
/// element has no certificate within the limits.
pub fn certify_basis<D: EchelonDomain + FieldDomain>(
    gb: &GroebnerBasis<D>,
    limits: StagedLimits,
) -> Option<Vec<Vec<Polynomial<D>>>> {
    let ring = gb.ring();
    let d = gb.domain();
    let inputs = gb.inputs();
    let n_in = inputs.len();
    let basis = gb.basis();
    let mut proven: Vec<Option<Vec<Polynomial<D>>>> = vec![None; basis.len()];
    // Inputs that are themselves basis elements need no search.
    for (k, h) in basis.iter().enumerate() {
        if let Some(i) = inputs.iter().position(|g| g == h) {
            let mut c = vec![Polynomial::zero(ring, d.clone()); n_in];
            c[i] = Polynomial::one(ring, d.clone());
            proven[k] = Some(c);
        }
    }
    // Smallest leading monomials first: they make later searches shallow.
    let order: Vec<usize> = (0..basis.len()).collect();
    loop {
        let pending: Vec<usize> = order.iter().copied().filter(|&k| proven[k].is_none()).collect();
        if pending.is_empty() {
            break;
        }
        let mut progress = false;
        'deg: for deg in 0..=limits.max_degree {
            let helpers: Vec<usize> = (0..basis.len()).filter(|&k| proven[k].is_some()).collect();
            let mut gens: Vec<Polynomial<D>> = inputs.to_vec();
            gens.extend(helpers.iter().map(|&k| basis[k].clone()));
            if macaulay_rows(ring.nvars(), gens.len(), deg) > limits.max_rows {
                break;
            }
            for &k in &pending {
                let Some(cof) = macaulay_search(&basis[k], &gens, deg, d) else { continue };
                let mut total: Vec<Polynomial<D>> = cof[..n_in].to_vec();
                for (j, &hk) in helpers.iter().enumerate() {
                    let b = &cof[n_in + j];
                    if b.is_zero() {
                        continue;
                    }
                    for (t, c) in total.iter_mut().zip(proven[hk].as_ref().unwrap()) {
                        *t = &*t + &(b * c);
                    }
                }
                proven[k] = Some(total);
                progress = true;
                break 'deg;
            }
        }
        if !progress {
            return None;
        }
    }
    Some(proven.into_iter().map(Option::unwrap).collect())
}

/// Cofactors of `f` over the inputs of `gb`, built from per-element
/// certificates. `None` when `f` is not in the ideal or some basis element
/// could not be certified within the limits.
pub fn staged_lift<D: EchelonDomain + FieldDomain>(
    f: &Polynomial<D>,
    gb: &GroebnerBasis<D>,
    certified: &[Vec<Polynomial<D>>],
) -> Option<Vec<Polynomial<D>>> {
    let ring = gb.ring();
    let d = gb.domain();
    let (quotients, r) = gb.reduce_with_quotients(f, true);
    if !r.is_zero() {
        return None;
    }
    let mut out = vec![Polynomial::zero(ring, d.clone()); gb.inputs().len()];
    for (k, q) in quotients.into_iter().enumerate() {
        if q.is_empty() {
            continue;
        }
        let q = Polynomial::from_terms(ring, d.clone(), q);
        for (o, c) in out.iter_mut().zip(&certified[k]) {
            *o = &*o + &(&q * c);
        }
    }
    Some(out)
}
