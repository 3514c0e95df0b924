//! Ring manipulations that turn one representation into another: reduction
//! of integral data to a finite quotient, products of representations, and
//! adjoining square roots to move from PGL2 to PSL2.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactalg::{parse_expr, MonomialOrder, PolyRing};
use crate::presentation::{Presentation, Word};
use crate::universal::KKind;

use super::matrix::{format_mat, mat_det, mat_scale};
use super::ring::{bigint_mod, Elem, FiniteRing, Mat2, DEFAULT_SIZE_LIMIT};
use super::search::Representation;
use super::RingError;

/// Largest modulus tried by [`finite_quotient_witness`].
pub const MAX_QUOTIENT_MODULUS: u64 = 1 << 16;

/// Coefficients low to high of an element of `ℤ[t]/(f)`.
type Zt = Vec<BigInt>;

/// Matrices over `ℤ` or `ℤ[t]/(f)` with `f` monic.
#[derive(Clone, Debug)]
pub struct IntegralRep {
    pub presentation: Presentation,
    pub kind: KKind,
    pub var: String,
    /// `f` low to high, leading 1 included; `None` for `ℤ`.
    pub modulus: Option<Vec<BigInt>>,
    pub images: Vec<Mat2<Zt>>,
}

impl IntegralRep {
    /// Read images written as integer polynomials in `t` (four entries per
    /// generator, row major); `modulus` is the monic `f` or `None` for ℤ.
    pub fn parse(presentation: &Presentation, kind: KKind, modulus: Option<&str>, images: &[[&str; 4]]) -> Result<Self, RingError> {
        let var = "t".to_string();
        let pr = PolyRing::new([var.as_str()], MonomialOrder::Grevlex);
        let read = |s: &str| -> Result<Zt, RingError> {
            let p = parse_expr(&pr, s).map_err(|e| RingError::Malformed(format!("`{s}`: {e}")))?;
            let mut out = Vec::new();
            for (m, c) in p.terms() {
                if !c.is_integer() {
                    return Err(RingError::Malformed(format!("`{s}` has a non-integer coefficient")));
                }
                let e = m.exponents()[0] as usize;
                if out.len() <= e {
                    out.resize(e + 1, BigInt::zero());
                }
                out[e] = c.numer().clone();
            }
            Ok(out)
        };
        let modulus = match modulus {
            Some(f) => {
                let f = read(f)?;
                if f.len() < 2 || !f.last().unwrap().is_one() {
                    return Err(RingError::NonMonic(format!("{f:?}")));
                }
                Some(f)
            }
            None => None,
        };
        let mut out = Self { presentation: presentation.clone(), kind, var, modulus, images: Vec::new() };
        for m in images {
            let mut e = Vec::with_capacity(4);
            for s in m {
                e.push(out.reduce(read(s)?));
            }
            out.images.push([e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()]);
        }
        if out.images.len() != presentation.generator_count() {
            return Err(RingError::Mismatch(format!(
                "{} images for {} generators",
                out.images.len(),
                presentation.generator_count()
            )));
        }
        Ok(out)
    }

    fn reduce(&self, mut p: Zt) -> Zt {
        if let Some(f) = &self.modulus {
            let d = f.len() - 1;
            while p.len() > d {
                let c = p.pop().unwrap();
                if c.is_zero() {
                    continue;
                }
                let k = p.len() - d;
                for (i, fi) in f[..d].iter().enumerate() {
                    p[k + i] -= &c * fi;
                }
            }
        }
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn add(&self, a: &Zt, b: &Zt) -> Zt {
        let mut out = vec![BigInt::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] += x;
        }
        self.reduce(out)
    }

    fn neg(&self, a: &Zt) -> Zt {
        a.iter().map(|x| -x).collect()
    }

    fn mul(&self, a: &Zt, b: &Zt) -> Zt {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn mat_mul(&self, x: &Mat2<Zt>, y: &Mat2<Zt>) -> Mat2<Zt> {
        let e = |i: usize, j: usize| self.add(&self.mul(&x[2 * i], &y[j]), &self.mul(&x[2 * i + 1], &y[2 + j]));
        [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
    }

    fn det(&self, x: &Mat2<Zt>) -> Zt {
        self.add(&self.mul(&x[0], &x[3]), &self.neg(&self.mul(&x[1], &x[2])))
    }

    /// `(M, D)` with `ρ(w) = M / D`: inverses are taken as adjugates and
    /// their determinants collected in `D`.
    fn evaluate(&self, w: &Word) -> (Mat2<Zt>, Zt) {
        let one = vec![BigInt::one()];
        let mut acc: Mat2<Zt> = [one.clone(), Vec::new(), Vec::new(), one.clone()];
        let mut den = one;
        for l in w.letters() {
            let m = &self.images[l.generator];
            if l.inverse {
                let adj = [m[3].clone(), self.neg(&m[1]), self.neg(&m[2]), m[0].clone()];
                acc = self.mat_mul(&acc, &adj);
                den = self.mul(&den, &self.det(m));
            } else {
                acc = self.mat_mul(&acc, m);
            }
        }
        (acc, den)
    }

    fn ring_mod(&self, m: u64) -> Result<FiniteRing, RingError> {
        let base = FiniteRing::zmod(m as u32)?;
        match &self.modulus {
            None => Ok(base),
            Some(f) => {
                let lower: Vec<Elem> = f[..f.len() - 1].iter().map(|c| bigint_mod(c, m) as Elem).collect();
                FiniteRing::quotient(&base, &self.var, lower, DEFAULT_SIZE_LIMIT)
            }
        }
    }

    fn elem_mod(&self, ring: &FiniteRing, p: &Zt) -> Elem {
        let base = ring.base().cloned().unwrap_or_else(|| ring.clone());
        if self.modulus.is_none() {
            return p.first().map_or(0, |c| ring.from_bigint(c));
        }
        let d = self.modulus.as_ref().unwrap().len() - 1;
        let mut cs = vec![0; d];
        for (i, c) in p.iter().enumerate() {
            cs[i] = base.from_bigint(c);
        }
        ring.from_base_coords(&cs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientCase {
    /// A nonzero off-diagonal entry survives.
    OffDiagonal,
    /// A nonzero difference of diagonal entries survives.
    DiagonalDifference,
    /// `ρ(w) = c·Id` with `c ≠ 1`.
    Scalar,
}

impl fmt::Display for QuotientCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientCase::OffDiagonal => "(i) off-diagonal entry",
            QuotientCase::DiagonalDifference => "(ii) diagonal difference",
            QuotientCase::Scalar => "(iii) scalar",
        })
    }
}

#[derive(Clone, Debug)]
pub struct QuotientWitness {
    pub case: QuotientCase,
    pub modulus: u64,
    pub ring: FiniteRing,
    pub representation: Representation,
    pub image: Mat2<Elem>,
}

/// Reduce integral data modulo the smallest `m ≥ 2` that keeps `ρ(w)`
/// nontrivial and keeps every generator image in `K(Z/m)`.
pub fn finite_quotient_witness(rep: &IntegralRep, w: &Word) -> Result<QuotientWitness, RingError> {
    let (m, den) = rep.evaluate(w);
    let nonzero = |p: &Zt| p.iter().any(|c| !c.is_zero());
    let diff = rep.add(&m[0], &rep.neg(&m[3]));
    let (case, datum) = if nonzero(&m[1]) {
        (QuotientCase::OffDiagonal, m[1].clone())
    } else if nonzero(&m[2]) {
        (QuotientCase::OffDiagonal, m[2].clone())
    } else if nonzero(&diff) {
        (QuotientCase::DiagonalDifference, diff)
    } else if !rep.kind.is_projective() && nonzero(&rep.add(&m[0], &rep.neg(&den))) {
        (QuotientCase::Scalar, rep.add(&m[0], &rep.neg(&den)))
    } else {
        return Err(RingError::NoWitness(format!(
            "{} maps to the identity",
            w.display_with(rep.presentation.generators())
        )));
    };
    let dets: Vec<Zt> = rep.images.iter().map(|x| rep.det(x)).collect();
    for modulus in 2..=MAX_QUOTIENT_MODULUS {
        let mb = BigInt::from(modulus);
        if datum.iter().all(|c| c.is_multiple_of(&mb)) {
            continue;
        }
        let ring = rep.ring_mod(modulus)?;
        let ok = dets.iter().all(|d| {
            let e = rep.elem_mod(&ring, d);
            if rep.kind.is_special() {
                e == ring.one_e()
            } else {
                ring.inverse_e(e).is_some()
            }
        });
        if !ok {
            continue;
        }
        let images: Vec<Mat2<Elem>> = rep.images.iter().map(|x| x.clone().map(|e| rep.elem_mod(&ring, &e))).collect();
        let representation = Representation::new(rep.presentation.clone(), ring.clone(), rep.kind, images)?;
        let image = representation.evaluate(w);
        if representation.kills(w) {
            return Err(RingError::NoWitness(format!("reduction mod {modulus} kills the word unexpectedly")));
        }
        return Ok(QuotientWitness { case, modulus, ring, representation, image });
    }
    Err(RingError::NoWitness(format!("no modulus up to {MAX_QUOTIENT_MODULUS} keeps the data nontrivial")))
}

/// Entrywise combination of representations into the product of their rings.
pub fn product_combine(reps: &[Representation]) -> Result<Representation, RingError> {
    let first = reps.first().ok_or_else(|| RingError::Mismatch("empty list of representations".into()))?;
    for r in &reps[1..] {
        if r.presentation != first.presentation {
            return Err(RingError::Mismatch("representations of different presentations".into()));
        }
        if r.kind != first.kind {
            return Err(RingError::Mismatch(format!("kinds {} and {} differ", first.kind, r.kind)));
        }
    }
    let ring = FiniteRing::product(reps.iter().map(|r| r.ring.clone()).collect(), DEFAULT_SIZE_LIMIT)?;
    let n = first.presentation.generator_count();
    let mut images = Vec::with_capacity(n);
    for g in 0..n {
        let mut m = [0; 4];
        for (k, slot) in m.iter_mut().enumerate() {
            let parts: Vec<Elem> = reps.iter().flat_map(|r| r.ring.project(r.images[g][k])).collect();
            *slot = ring.inject(&parts);
        }
        images.push(m);
    }
    Representation::new(first.presentation.clone(), ring, first.kind, images)
}

/// Outcome of the injectivity check for `R → R′`.
#[derive(Clone, Debug, Serialize)]
pub struct RetractionCheck {
    /// `φ(ε(r)) = r` for this many `r` (all of `R`).
    pub fixed_points: usize,
    /// Pairs `(r, s)` on which `ε` was checked to be additive and multiplicative.
    pub homomorphism_pairs: u64,
    /// Pairs `(y, z)` of `R′` with `φ(yz)` matching the monomial formula.
    pub product_pairs: u64,
    pub injective: bool,
}

#[derive(Clone, Debug)]
pub struct PslLift {
    pub base: FiniteRing,
    pub representation: Representation,
    /// Determinants `a_i` of the original generator images.
    pub determinants: Vec<Elem>,
    /// The adjoined square roots `x_i` of `a_i^{-1}`, as elements of `R′`.
    pub roots: Vec<Elem>,
    pub retraction: RetractionCheck,
}

const PRODUCT_PAIR_LIMIT: u64 = 1 << 20;

/// Adjoin `x_i` with `x_i² = a_i^{-1}` for each generator determinant `a_i`
/// and rescale each image by `x_i`, giving a PSL2 representation over
/// `R′ = R[x_1..x_k]/(x_i² - a_i^{-1})`.
pub fn lift_pgl_to_psl(rep: &Representation) -> Result<PslLift, RingError> {
    if rep.kind != KKind::PGL2 {
        return Err(RingError::Mismatch(format!("expected a PGL2 representation, got {}", rep.kind)));
    }
    let base = rep.ring.clone();
    if base.factors().is_some() {
        return Err(RingError::Malformed("square-root adjunction over product rings is not supported".into()));
    }
    let k = rep.images.len();
    let mut dets = Vec::with_capacity(k);
    let mut inv_dets = Vec::with_capacity(k);
    for (g, m) in rep.images.iter().enumerate() {
        let a = mat_det(&base, m);
        let inv = base.inverse_e(a).ok_or_else(|| {
            RingError::NotAUnit(format!(
                "determinant {} of the image {} of {}",
                base.format(a),
                format_mat(&base, m),
                rep.presentation.generators()[g]
            ))
        })?;
        dets.push(a);
        inv_dets.push(inv);
    }
    let mut levels = vec![base.clone()];
    let mut roots_at = Vec::with_capacity(k);
    for (g, &inv) in inv_dets.iter().enumerate() {
        let prev = levels.last().unwrap();
        let name = fresh_name(prev, if k == 1 { "x".to_string() } else { format!("x{}", g + 1) });
        // x² - a^{-1}: lower coefficients [-a^{-1}, 0]; indices of R persist upwards.
        let next = FiniteRing::quotient(prev, &name, vec![prev.neg_e(inv), 0], DEFAULT_SIZE_LIMIT)?;
        roots_at.push(next.generator().unwrap());
        levels.push(next);
    }
    let top = levels.last().unwrap().clone();
    let images: Vec<Mat2<Elem>> = rep.images.iter().zip(&roots_at).map(|(m, x)| mat_scale(&top, x, m)).collect();
    let representation = Representation::new(rep.presentation.clone(), top.clone(), KKind::PSL2, images)?;
    let retraction = check_retraction(&base, &levels, &inv_dets);
    Ok(PslLift { base, representation, determinants: dets, roots: roots_at, retraction })
}

fn fresh_name(ring: &FiniteRing, mut name: String) -> String {
    while ring.tower_vars().contains(&name) {
        name.push('_');
    }
    name
}

/// Coefficients of `y ∈ R′` on the square-free monomials `x^S`, with bit
/// `i` of the index standing for `x_{i+1}`.
fn square_free_coeffs(levels: &[FiniteRing], y: Elem) -> Vec<Elem> {
    let k = levels.len() - 1;
    let mut out = vec![0; 1 << k];
    out[0] = y;
    for lvl in (1..=k).rev() {
        let bit = 1usize << (lvl - 1);
        // Masks filled so far only use bits above `bit`.
        for m in (0..1usize << k).step_by(bit << 1) {
            let cs = levels[lvl].base_coords(out[m]);
            out[m] = cs[0];
            out[m | bit] = cs[1];
        }
    }
    out
}

/// `φ` sends `x^n` to 0 when some exponent is odd and to `Π a_i^{-n_i/2}`
/// otherwise. Checks `φ ∘ ε = id`, that `ε` is a ring map, and that `φ`
/// computed in `R′` agrees with the monomial formula applied to unreduced
/// products (so `φ` vanishes on the ideal).
fn check_retraction(base: &FiniteRing, levels: &[FiniteRing], inv_dets: &[Elem]) -> RetractionCheck {
    let top = levels.last().unwrap();
    let phi = |y: Elem| square_free_coeffs(levels, y)[0];
    let s = base.size();
    let mut ok = true;
    for r in 0..s {
        ok &= phi(r) == r;
    }
    let mut hom_pairs = 0u64;
    for r in 0..s {
        for q in 0..s {
            ok &= top.add_e(r, q) == base.add_e(r, q) && top.mul_e(r, q) == base.mul_e(r, q);
            hom_pairs += 1;
        }
    }
    let k = inv_dets.len();
    let weight: Vec<Elem> = (0..1usize << k)
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).fold(base.one_e(), |acc, i| base.mul_e(acc, inv_dets[i])))
        .collect();
    let n = top.size() as u64;
    let total = n * n;
    let stride = total.div_ceil(PRODUCT_PAIR_LIMIT).max(1);
    let mut pairs = 0u64;
    let mut idx = 0u64;
    while idx < total {
        let (y, z) = ((idx / n) as Elem, (idx % n) as Elem);
        let (cy, cz) = (square_free_coeffs(levels, y), square_free_coeffs(levels, z));
        // x^S x^T has an odd exponent exactly off the diagonal S = T.
        let formula = (0..cy.len()).fold(base.zero_e(), |acc, m| {
            base.add_e(acc, base.mul_e(base.mul_e(cy[m], cz[m]), weight[m]))
        });
        ok &= phi(top.mul_e(y, z)) == formula;
        pairs += 1;
        idx += stride;
    }
    RetractionCheck { fixed_points: s as usize, homomorphism_pairs: hom_pairs, product_pairs: pairs, injective: ok }
}
