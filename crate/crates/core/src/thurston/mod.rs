//! Triangulations with shape parameters in a commutative ring.
//!
//! A triangulation file is a list of `;`-terminated statements (`#` starts a
//! comment):
//!
//! ```text
//! ring: Z/2[a]/(a^2+a+1)[x]/(x^2);   optional default ring
//! tets: 2;
//! convention: cyclic;                 or reversed
//! pair: (0,3) -> (1,2) perm [3,0,1];  face 3 of tet 0 onto face 2 of tet 1
//! names: 0 = (r, rp, rpp);            parameter variable names
//! slots: 0 = (01, 12, 02);            edges carrying t, t', t''
//! label: (0,0) = [1,0];               vertex 0 of tet 0
//! params: 0 = (a, a, a);              values of t, t', t''
//! ```
//!
//! Faces are numbered by the opposite vertex. `perm` lists the images of
//! the source face's vertices in increasing order. By default `t` sits on
//! edges 01 and 23, `t'` on 12 and 03, `t''` on 02 and 13.

mod holonomy;
mod triangulation;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::finitering::matrix::split_commas;
use crate::finitering::{format_mat, CommRing, RingError};

pub use holonomy::{holonomy, identify_image, mobius_three_points, Holonomy, ImageIdentification, ProjPoint, VertexLabels};
pub use triangulation::{
    edge_index, enumerate_labellings, face_vertices, verify_labelling, EdgeClass, EdgeEquation, EquationCheck,
    FacePairing, GluingSystem, LabellingReport, ParameterConvention, TetParams, Triangulation, EDGES, OPPOSITE_PAIRS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThurstonError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent pairing: {0}")]
    Pairing(String),
    #[error("not unimodular: {0}")]
    NotUnimodular(String),
    #[error("NOT_GENERAL_POSITION: {0}")]
    NotGeneralPosition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A parsed triangulation file. Labels and parameters are kept as text
/// until a ring is chosen.
#[derive(Clone, Debug)]
pub struct TriangulationFile {
    pub triangulation: Triangulation,
    pub ring: Option<String>,
    labels: BTreeMap<(usize, usize), [String; 2]>,
    params: BTreeMap<usize, [String; 3]>,
}

fn parse_pair(s: &str, open: char, close: char) -> Result<Vec<String>, ThurstonError> {
    let s = s.trim();
    let inner = s
        .strip_prefix(open)
        .and_then(|x| x.strip_suffix(close))
        .ok_or_else(|| ThurstonError::Parse(format!("expected `{open}...{close}`, found `{s}`")))?;
    Ok(split_commas(inner))
}

fn parse_usizes(s: &str, open: char, close: char, n: usize) -> Result<Vec<usize>, ThurstonError> {
    let parts = parse_pair(s, open, close)?;
    if parts.len() != n {
        return Err(ThurstonError::Parse(format!("expected {n} entries in `{s}`")));
    }
    parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| ThurstonError::Parse(format!("bad index `{p}`"))))
        .collect()
}

fn three(parts: Vec<String>, what: &str) -> Result<[String; 3], ThurstonError> {
    <[String; 3]>::try_from(parts).map_err(|_| ThurstonError::Parse(format!("{what} needs three entries")))
}

impl TriangulationFile {
    pub fn parse(text: &str) -> Result<Self, ThurstonError> {
        let body: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
        let mut tets = None;
        let mut ring = None;
        let mut convention = ParameterConvention::Cyclic;
        let mut pairings = Vec::new();
        let mut names = Vec::new();
        let mut slots = Vec::new();
        let mut labels = BTreeMap::new();
        let mut params = BTreeMap::new();
        for stmt in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, rest) = stmt
                .split_once(':')
                .ok_or_else(|| ThurstonError::Parse(format!("statement `{stmt}` has no keyword")))?;
            let rest = rest.trim();
            match key.trim() {
                "tets" => tets = Some(rest.parse::<usize>().map_err(|_| ThurstonError::Parse(format!("bad count `{rest}`")))?),
                "ring" => ring = Some(rest.to_string()),
                "convention" => convention = rest.parse().map_err(ThurstonError::Parse)?,
                "pair" => {
                    let (lhs, rhs) = rest
                        .split_once("->")
                        .ok_or_else(|| ThurstonError::Parse(format!("pairing `{rest}` needs `->`")))?;
                    let (target, perm) = rhs
                        .split_once("perm")
                        .ok_or_else(|| ThurstonError::Parse(format!("pairing `{rest}` needs `perm`")))?;
                    let s = parse_usizes(lhs, '(', ')', 2)?;
                    let t = parse_usizes(target, '(', ')', 2)?;
                    let images = parse_usizes(perm, '[', ']', 3)?;
                    if s[1] > 3 {
                        return Err(ThurstonError::Parse(format!("face {} out of range", s[1])));
                    }
                    let mut map = [0; 4];
                    map[s[1]] = t[1];
                    for (v, w) in face_vertices(s[1]).into_iter().zip(images) {
                        map[v] = w;
                    }
                    pairings.push(FacePairing { source: (s[0], s[1]), target: (t[0], t[1]), vertex_map: map });
                }
                "names" | "slots" | "params" => {
                    let (idx, tuple) = rest
                        .split_once('=')
                        .ok_or_else(|| ThurstonError::Parse(format!("`{key}` needs `=`")))?;
                    let t: usize = idx.trim().parse().map_err(|_| ThurstonError::Parse(format!("bad tetrahedron `{idx}`")))?;
                    let entries = three(parse_pair(tuple, '(', ')')?, key)?;
                    match key.trim() {
                        "names" => names.push((t, entries)),
                        "params" => {
                            params.insert(t, entries);
                        }
                        _ => {
                            let mut s = [0; 3];
                            for (k, e) in entries.iter().enumerate() {
                                let b = e.as_bytes();
                                let ok = b.len() == 2 && b[0].is_ascii_digit() && b[1].is_ascii_digit();
                                let (x, y) = (b.first().map_or(9, |c| c - b'0'), b.get(1).map_or(9, |c| c - b'0'));
                                if !ok || x == y || x > 3 || y > 3 {
                                    return Err(ThurstonError::Parse(format!("bad edge `{e}`")));
                                }
                                let edge = edge_index(x as usize, y as usize);
                                s[k] = OPPOSITE_PAIRS.iter().position(|p| p.contains(&edge)).unwrap();
                            }
                            slots.push((t, s));
                        }
                    }
                }
                "label" => {
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| ThurstonError::Parse("`label` needs `=`".into()))?;
                    let at = parse_usizes(lhs, '(', ')', 2)?;
                    let uv = parse_pair(rhs, '[', ']')?;
                    let uv = <[String; 2]>::try_from(uv).map_err(|_| ThurstonError::Parse(format!("label `{rhs}` needs two entries")))?;
                    if at[1] > 3 {
                        return Err(ThurstonError::Parse(format!("vertex {} out of range", at[1])));
                    }
                    labels.insert((at[0], at[1]), uv);
                }
                other => return Err(ThurstonError::Parse(format!("unknown statement `{other}`"))),
            }
        }
        let tets = tets.ok_or_else(|| ThurstonError::Parse("missing `tets:`".into()))?;
        let mut tri = Triangulation::new(tets, pairings)?;
        tri.set_convention(convention);
        for (t, n) in names {
            tri.set_names(t, n)?;
        }
        for (t, s) in slots {
            tri.set_slots(t, s)?;
        }
        if let Some(&(t, _)) = labels.keys().find(|k| k.0 >= tets) {
            return Err(ThurstonError::Parse(format!("label for missing tetrahedron {t}")));
        }
        if let Some(&t) = params.keys().find(|&&t| t >= tets) {
            return Err(ThurstonError::Parse(format!("parameters for missing tetrahedron {t}")));
        }
        Ok(Self { triangulation: tri, ring, labels, params })
    }

    pub fn has_labels(&self) -> bool {
        !self.labels.is_empty()
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    /// Vertex labels in `r`, if the file gives any; all must be present.
    pub fn labels_in<R: CommRing>(&self, r: &R) -> Result<Option<VertexLabels<R::Elem>>, ThurstonError> {
        if self.labels.is_empty() {
            return Ok(None);
        }
        let mut out = Vec::new();
        for t in 0..self.triangulation.tet_count() {
            let mut row = Vec::new();
            for v in 0..4 {
                let [u, w] = self
                    .labels
                    .get(&(t, v))
                    .ok_or_else(|| ThurstonError::Parse(format!("no label for vertex {v} of tetrahedron {t}")))?;
                row.push(ProjPoint::new(r, r.parse_elem(u)?, r.parse_elem(w)?)?);
            }
            out.push(<[ProjPoint<R::Elem>; 4]>::try_from(row).unwrap());
        }
        Ok(Some(out))
    }

    pub fn params_in<R: CommRing>(&self, r: &R) -> Result<Option<TetParams<R::Elem>>, ThurstonError> {
        if self.params.is_empty() {
            return Ok(None);
        }
        let mut out = Vec::new();
        for t in 0..self.triangulation.tet_count() {
            let p = self
                .params
                .get(&t)
                .ok_or_else(|| ThurstonError::Parse(format!("no parameters for tetrahedron {t}")))?;
            out.push([r.parse_elem(&p[0])?, r.parse_elem(&p[1])?, r.parse_elem(&p[2])?]);
        }
        Ok(Some(out))
    }
}

/// Everything that can be computed from a triangulation file over a ring.
#[derive(Clone, Debug, Serialize)]
pub struct ThurstonReport {
    pub ring: String,
    pub convention: String,
    pub tets: usize,
    pub closed: bool,
    pub edge_classes: Vec<Vec<(usize, usize)>>,
    pub degenerate_classes: usize,
    pub equations: Vec<String>,
    pub labelling: Option<LabellingReport>,
    pub holonomy: Vec<String>,
    pub image: Option<ImageIdentification>,
}

pub const IMAGE_LIMIT: usize = 1 << 16;

pub fn analyse<R: CommRing>(file: &TriangulationFile, r: &R) -> Result<ThurstonReport, ThurstonError> {
    let tri = &file.triangulation;
    let sys = tri.gluing_system();
    let labelling = file.params_in(r)?.map(|p| verify_labelling(tri, &p, r));
    let (holonomy, image) = match file.labels_in(r)? {
        Some(l) => {
            let h = holonomy(tri, &l, r)?;
            let img = identify_image(r, &h.matrices, IMAGE_LIMIT)?;
            (h.matrices.iter().map(|m| format_mat(r, m)).collect(), Some(img))
        }
        None => (Vec::new(), None),
    };
    Ok(ThurstonReport {
        ring: r.describe(),
        convention: tri.convention().to_string(),
        tets: tri.tet_count(),
        closed: tri.is_closed(),
        edge_classes: tri.edge_classes().into_iter().map(|c| c.incidences).collect(),
        degenerate_classes: sys.edge_equations.iter().filter(|e| e.degenerate).count(),
        equations: sys.describe(),
        labelling,
        holonomy,
        image,
    })
}

#[cfg(test)]
mod tests;
