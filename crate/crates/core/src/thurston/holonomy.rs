//! Points of the projective line over a ring, Möbius maps through three
//! points, and the holonomy of a labelled triangulation.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::finitering::{canonical, format_mat, generate_subgroup, mat_adjugate, mat_det, mat_mul, CommRing, Mat2};
use crate::universal::KKind;

use super::triangulation::Triangulation;
use super::ThurstonError;

/// A unimodular pair `[u, v]` with a certificate `alpha u + beta v = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint<E> {
    pub u: E,
    pub v: E,
    pub alpha: E,
    pub beta: E,
}

impl<E: Clone + PartialEq> ProjPoint<E> {
    /// Find a certificate: unit coordinates first, then an exhaustive search
    /// over `alpha` when the ring is finite.
    pub fn new<R: CommRing<Elem = E>>(r: &R, u: E, v: E) -> Result<Self, ThurstonError> {
        if let Some(a) = r.inverse(&u) {
            return Ok(Self { u, v, alpha: a, beta: r.zero() });
        }
        if let Some(b) = r.inverse(&v) {
            return Ok(Self { u, v, alpha: r.zero(), beta: b });
        }
        if let Some(elems) = r.elements() {
            let one = r.one();
            for a in &elems {
                let rest = r.sub(&one, &r.mul(a, &u));
                for b in &elems {
                    if r.mul(b, &v) == rest {
                        return Ok(Self { u, v, alpha: a.clone(), beta: b.clone() });
                    }
                }
            }
        }
        Err(ThurstonError::NotUnimodular(format!("[{}, {}]", r.format_elem(&u), r.format_elem(&v))))
    }

    pub fn with_certificate<R: CommRing<Elem = E>>(r: &R, u: E, v: E, alpha: E, beta: E) -> Result<Self, ThurstonError> {
        let s = r.add(&r.mul(&alpha, &u), &r.mul(&beta, &v));
        if s != r.one() {
            return Err(ThurstonError::NotUnimodular(format!(
                "certificate gives {} instead of 1",
                r.format_elem(&s)
            )));
        }
        Ok(Self { u, v, alpha, beta })
    }

    /// Equal up to a unit scalar. For unimodular pairs this is the vanishing
    /// of the cross determinant.
    pub fn same_point<R: CommRing<Elem = E>>(&self, r: &R, other: &Self) -> bool {
        r.is_zero(&cross(r, self, other))
    }

    /// The unit `lambda` with `self = lambda * other`, when they agree.
    pub fn ratio<R: CommRing<Elem = E>>(&self, r: &R, other: &Self) -> Option<E> {
        if !self.same_point(r, other) {
            return None;
        }
        Some(r.add(&r.mul(&other.alpha, &self.u), &r.mul(&other.beta, &self.v)))
    }

    pub fn apply<R: CommRing<Elem = E>>(&self, r: &R, m: &Mat2<E>) -> Result<Self, ThurstonError> {
        let u = r.add(&r.mul(&m[0], &self.u), &r.mul(&m[1], &self.v));
        let v = r.add(&r.mul(&m[2], &self.u), &r.mul(&m[3], &self.v));
        ProjPoint::new(r, u, v)
    }

    pub fn format<R: CommRing<Elem = E>>(&self, r: &R) -> String {
        format!("[{}, {}]", r.format_elem(&self.u), r.format_elem(&self.v))
    }
}

fn cross<R: CommRing>(r: &R, p: &ProjPoint<R::Elem>, q: &ProjPoint<R::Elem>) -> R::Elem {
    r.sub(&r.mul(&p.u, &q.v), &r.mul(&q.u, &p.v))
}

/// Matrix sending `[1,0]`, `[0,1]`, `[1,1]` to the three points.
fn frame<R: CommRing>(r: &R, pts: &[ProjPoint<R::Elem>; 3], side: &str) -> Result<Mat2<R::Elem>, ThurstonError> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !r.is_unit(&cross(r, &pts[i], &pts[j])) {
            return Err(ThurstonError::NotGeneralPosition(format!(
                "{side} points {} and {} have non-unit cross determinant",
                pts[i].format(r),
                pts[j].format(r)
            )));
        }
    }
    let d_inv = r.inverse(&cross(r, &pts[0], &pts[1])).unwrap();
    let lambda = r.mul(&cross(r, &pts[2], &pts[1]), &d_inv);
    let mu = r.mul(&cross(r, &pts[0], &pts[2]), &d_inv);
    Ok([
        r.mul(&lambda, &pts[0].u),
        r.mul(&mu, &pts[1].u),
        r.mul(&lambda, &pts[0].v),
        r.mul(&mu, &pts[1].v),
    ])
}

/// The Möbius transformation taking `src[i]` to `dst[i]`. Both triples
/// must have unit pairwise cross determinants; the result is re-checked on
/// all three points.
pub fn mobius_three_points<R: CommRing>(
    r: &R,
    src: &[ProjPoint<R::Elem>; 3],
    dst: &[ProjPoint<R::Elem>; 3],
) -> Result<Mat2<R::Elem>, ThurstonError> {
    let a = frame(r, src, "source")?;
    let b = frame(r, dst, "target")?;
    let m = mat_mul(r, &b, &mat_adjugate(r, &a));
    if !r.is_unit(&mat_det(r, &m)) {
        return Err(ThurstonError::Verification("Möbius map has non-unit determinant".into()));
    }
    for (p, q) in src.iter().zip(dst) {
        if !p.apply(r, &m)?.same_point(r, q) {
            return Err(ThurstonError::Verification(format!(
                "Möbius map sends {} to {} instead of {}",
                p.format(r),
                p.apply(r, &m)?.format(r),
                q.format(r)
            )));
        }
    }
    Ok(m)
}

/// Per tetrahedron, the labels of its four vertices.
pub type VertexLabels<E> = Vec<[ProjPoint<E>; 4]>;

#[derive(Clone, Debug)]
pub struct Holonomy<E> {
    /// One matrix per face pairing, in pairing order, sending the source
    /// face labels to the target face labels.
    pub matrices: Vec<Mat2<E>>,
}

pub fn holonomy<R: CommRing>(
    tri: &Triangulation,
    labels: &VertexLabels<R::Elem>,
    r: &R,
) -> Result<Holonomy<R::Elem>, ThurstonError> {
    if labels.len() != tri.tet_count() {
        return Err(ThurstonError::Parse(format!(
            "{} tetrahedra labelled, {} expected",
            labels.len(),
            tri.tet_count()
        )));
    }
    let mut matrices = Vec::new();
    for p in tri.pairings() {
        let vs = p.source_vertices();
        let src = vs.map(|v| labels[p.source.0][v].clone());
        let dst = vs.map(|v| labels[p.target.0][p.vertex_map[v]].clone());
        let m = mobius_three_points(r, &src, &dst).map_err(|e| match e {
            ThurstonError::NotGeneralPosition(msg) => {
                ThurstonError::NotGeneralPosition(format!("pairing {:?} -> {:?}: {msg}", p.source, p.target))
            }
            e => e,
        })?;
        matrices.push(m);
    }
    Ok(Holonomy { matrices })
}

/// The holonomy image as a subgroup of `PGL2(R)`.
#[derive(Clone, Debug, Serialize)]
pub struct ImageIdentification {
    pub order: usize,
    /// `trivial`, `C2`, `V4` or `Q8` when the image is one of these.
    pub name: Option<String>,
    pub abelian: bool,
    /// Number of elements of order 2.
    pub involutions: usize,
    pub elements: Vec<String>,
    /// `table[i][j]` is the index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
}

impl fmt::Display for ImageIdentification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n} (order {})", self.order),
            None => write!(f, "order {}", self.order),
        }
    }
}

pub fn identify_image<R: CommRing>(
    r: &R,
    gens: &[Mat2<R::Elem>],
    limit: usize,
) -> Result<ImageIdentification, ThurstonError> {
    let kind = KKind::PGL2;
    let elems = generate_subgroup(r, kind, gens, limit)?;
    let index: HashMap<&Mat2<R::Elem>, usize> = elems.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = elems.len();
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|x| elems.iter().map(|y| index[&canonical(r, kind, &mat_mul(r, x, y))]).collect())
        .collect();
    let abelian = (0..n).all(|i| (0..i).all(|j| table[i][j] == table[j][i]));
    let involutions = (1..n).filter(|&i| table[i][i] == 0).count();
    let name = match n {
        1 => Some("trivial"),
        2 => Some("C2"),
        4 if involutions == 3 => Some("V4"),
        8 if involutions == 1 && !abelian => Some("Q8"),
        _ => None,
    };
    Ok(ImageIdentification {
        order: n,
        name: name.map(String::from),
        abelian,
        involutions,
        elements: elems.iter().map(|m| format_mat(r, m)).collect(),
        table,
    })
}
