//! 2×2 matrices over a [`CommRing`] and the groups `K(R)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::universal::KKind;

use super::ring::{CommRing, Mat2};
use super::RingError;

pub fn mat_identity<R: CommRing>(r: &R) -> Mat2<R::Elem> {
    [r.one(), r.zero(), r.zero(), r.one()]
}

pub fn mat_mul<R: CommRing>(r: &R, x: &Mat2<R::Elem>, y: &Mat2<R::Elem>) -> Mat2<R::Elem> {
    let e = |i: usize, j: usize| r.add(&r.mul(&x[2 * i], &y[j]), &r.mul(&x[2 * i + 1], &y[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

pub fn mat_det<R: CommRing>(r: &R, x: &Mat2<R::Elem>) -> R::Elem {
    r.sub(&r.mul(&x[0], &x[3]), &r.mul(&x[1], &x[2]))
}

pub fn mat_adjugate<R: CommRing>(r: &R, x: &Mat2<R::Elem>) -> Mat2<R::Elem> {
    [x[3].clone(), r.neg(&x[1]), r.neg(&x[2]), x[0].clone()]
}

pub fn mat_scale<R: CommRing>(r: &R, s: &R::Elem, x: &Mat2<R::Elem>) -> Mat2<R::Elem> {
    x.clone().map(|e| r.mul(s, &e))
}

/// Inverse, or `None` when the determinant is not a unit.
pub fn mat_inverse<R: CommRing>(r: &R, x: &Mat2<R::Elem>) -> Option<Mat2<R::Elem>> {
    let inv = r.inverse(&mat_det(r, x))?;
    Some(mat_scale(r, &inv, &mat_adjugate(r, x)))
}

/// `x = λ y` for some unit `λ`.
pub fn proj_equal<R: CommRing>(r: &R, x: &Mat2<R::Elem>, y: &Mat2<R::Elem>) -> bool {
    // A unit entry of `y` forces λ; otherwise fall back to the unit set.
    for k in 0..4 {
        if let Some(inv) = r.inverse(&y[k]) {
            let lambda = r.mul(&x[k], &inv);
            return r.is_unit(&lambda) && mat_scale(r, &lambda, y) == *x;
        }
    }
    r.proj_normal(x) == r.proj_normal(y)
}

/// Identity test in `K(R)`: exact for SL2/GL2, up to unit scalar otherwise.
pub fn is_identity<R: CommRing>(r: &R, kind: KKind, x: &Mat2<R::Elem>) -> bool {
    if kind.is_projective() {
        r.is_zero(&x[1]) && r.is_zero(&x[2]) && x[0] == x[3] && r.is_unit(&x[0])
    } else {
        *x == mat_identity(r)
    }
}

/// Canonical form used for hashing group elements.
pub fn canonical<R: CommRing>(r: &R, kind: KKind, x: &Mat2<R::Elem>) -> Mat2<R::Elem> {
    if kind.is_projective() {
        r.proj_normal(x)
    } else {
        x.clone()
    }
}

/// Membership of a matrix (any representative) in `K(R)`.
pub fn in_group<R: CommRing>(r: &R, kind: KKind, x: &Mat2<R::Elem>) -> bool {
    let d = mat_det(r, x);
    match kind {
        KKind::SL2 => d == r.one(),
        KKind::GL2 | KKind::PGL2 => r.is_unit(&d),
        // A representative of a PSL2 class may differ from det 1 by λ².
        KKind::PSL2 => {
            d == r.one()
                || r.elements().is_some_and(|es| {
                    es.iter().filter(|u| r.is_unit(u)).any(|u| r.mul(&r.mul(u, u), &d) == r.one())
                })
        }
    }
}

/// An element of `K(R)`.
#[derive(Clone, Debug)]
pub struct GroupElement2<R: CommRing> {
    pub ring: R,
    pub kind: KKind,
    pub matrix: Mat2<R::Elem>,
}

impl<R: CommRing> GroupElement2<R> {
    pub fn new(ring: R, kind: KKind, matrix: Mat2<R::Elem>) -> Result<Self, RingError> {
        if !in_group(&ring, kind, &matrix) {
            return Err(RingError::NotInGroup(format!(
                "{} is not in {kind}({})",
                format_mat(&ring, &matrix),
                ring.describe()
            )));
        }
        Ok(Self { ring, kind, matrix })
    }

    pub fn is_identity(&self) -> bool {
        is_identity(&self.ring, self.kind, &self.matrix)
    }

    pub fn det(&self) -> R::Elem {
        mat_det(&self.ring, &self.matrix)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { ring: self.ring.clone(), kind: self.kind, matrix: mat_mul(&self.ring, &self.matrix, &other.matrix) }
    }

    pub fn canonical(&self) -> Mat2<R::Elem> {
        canonical(&self.ring, self.kind, &self.matrix)
    }
}

impl<R: CommRing> PartialEq for GroupElement2<R> {
    fn eq(&self, other: &Self) -> bool {
        if self.kind.is_projective() {
            proj_equal(&self.ring, &self.matrix, &other.matrix)
        } else {
            self.matrix == other.matrix
        }
    }
}

impl<R: CommRing> fmt::Display for GroupElement2<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_mat(&self.ring, &self.matrix))
    }
}

pub fn format_mat<R: CommRing>(r: &R, x: &Mat2<R::Elem>) -> String {
    let e: Vec<String> = x.iter().map(|v| r.format_elem(v)).collect();
    format!("[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
}

/// Parse `[[a, b], [c, d]]` (or `a b c d`) with entries in the ring's element syntax.
pub fn parse_mat<R: CommRing>(r: &R, text: &str) -> Result<Mat2<R::Elem>, RingError> {
    let t = text.trim();
    let parts: Vec<String> = if t.starts_with('[') {
        let inner = t.replace(['[', ']'], " ");
        split_commas(&inner)
    } else {
        t.split_whitespace().map(str::to_string).collect()
    };
    if parts.len() != 4 {
        return Err(RingError::Malformed(format!("expected four matrix entries in `{text}`")));
    }
    let mut out = Vec::with_capacity(4);
    for p in &parts {
        out.push(r.parse_elem(p)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

pub(crate) fn split_commas(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Subgroup generated by `gens`, by breadth-first closure. Elements are
/// canonical forms; the identity comes first.
pub fn generate_subgroup<R: CommRing>(
    r: &R,
    kind: KKind,
    gens: &[Mat2<R::Elem>],
    limit: usize,
) -> Result<Vec<Mat2<R::Elem>>, RingError> {
    let id = canonical(r, kind, &mat_identity(r));
    let gens: Vec<Mat2<R::Elem>> = gens.iter().map(|g| canonical(r, kind, g)).collect();
    let mut seen: HashSet<Mat2<R::Elem>> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = canonical(r, kind, &mat_mul(r, &x, g));
            if seen.contains(&y) {
                continue;
            }
            if out.len() >= limit {
                return Err(RingError::Budget(format!("subgroup closure exceeded {limit} elements")));
            }
            seen.insert(y.clone());
            out.push(y.clone());
            queue.push_back(y);
        }
    }
    Ok(out)
}
