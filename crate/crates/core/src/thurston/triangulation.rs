//! Face pairings, edge classes and the gluing equations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactalg::{format_poly, Integers, IntPoly, MonomialOrder, PolyRing};
use crate::finitering::{CommRing, FiniteRing, RingError};

use super::ThurstonError;

/// Edges of a tetrahedron by vertex pair, indexed 0..6.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Pairs of opposite edges: `{01,23}`, `{12,03}`, `{02,13}`.
pub const OPPOSITE_PAIRS: [[usize; 2]; 3] = [[0, 5], [3, 2], [1, 4]];

pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

fn opposite_pair_of(edge: usize) -> usize {
    OPPOSITE_PAIRS.iter().position(|p| p.contains(&edge)).unwrap()
}

/// Identification of face `source.1` of tetrahedron `source.0` with face
/// `target.1` of `target.0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacePairing {
    pub source: (usize, usize),
    pub target: (usize, usize),
    /// Vertex map of the source tetrahedron; `vertex_map[source.1] = target.1`.
    pub vertex_map: [usize; 4],
}

impl FacePairing {
    /// The source face's vertices in increasing order.
    pub fn source_vertices(&self) -> [usize; 3] {
        face_vertices(self.source.1)
    }

    pub fn inverse(&self) -> FacePairing {
        let mut inv = [0; 4];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            inv[w] = v;
        }
        FacePairing { source: self.target, target: self.source, vertex_map: inv }
    }
}

pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// Relations tying the three parameters of each tetrahedron together.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum ParameterConvention {
    /// `t'(1-t) = 1`, `t''(1-t') = 1`, `t(1-t'') = 1`.
    #[default]
    Cyclic,
    /// `t(1-t') = 1`, `t'(1-t'') = 1`, `t''(1-t) = 1`.
    Reversed,
}

impl fmt::Display for ParameterConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParameterConvention::Cyclic => "cyclic: t'(1-t) = 1, t''(1-t') = 1, t(1-t'') = 1",
            ParameterConvention::Reversed => "reversed: t(1-t') = 1, t'(1-t'') = 1, t''(1-t) = 1",
        })
    }
}

impl std::str::FromStr for ParameterConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "cyclic" => Ok(Self::Cyclic),
            "reversed" => Ok(Self::Reversed),
            _ => Err(format!("unknown parameter convention `{s}`")),
        }
    }
}

impl ParameterConvention {
    /// `(i, j)` pairs with relation `p_j (1 - p_i) = 1`.
    fn relations(self) -> [(usize, usize); 3] {
        match self {
            ParameterConvention::Cyclic => [(0, 1), (1, 2), (2, 0)],
            ParameterConvention::Reversed => [(1, 0), (2, 1), (0, 2)],
        }
    }
}

/// Tetrahedra glued along faces.
#[derive(Clone, Debug, Serialize)]
pub struct Triangulation {
    tets: usize,
    pairings: Vec<FacePairing>,
    /// Per tetrahedron, the opposite-edge pair carrying `t`, `t'`, `t''`.
    slots: Vec<[usize; 3]>,
    names: Vec<[String; 3]>,
    convention: ParameterConvention,
}

/// Edge classes as `(tet, edge)` incidences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub incidences: Vec<(usize, usize)>,
}

impl Triangulation {
    /// Check pairings and build. A face may be paired at most once (listing
    /// the inverse of a pairing as well is allowed and ignored).
    pub fn new(tets: usize, pairings: Vec<FacePairing>) -> Result<Self, ThurstonError> {
        let mut seen: BTreeMap<(usize, usize), FacePairing> = BTreeMap::new();
        let mut kept = Vec::new();
        for p in pairings {
            for &(t, f) in &[p.source, p.target] {
                if t >= tets || f > 3 {
                    return Err(ThurstonError::Pairing(format!("face ({t},{f}) out of range")));
                }
            }
            let mut sorted = p.vertex_map;
            sorted.sort_unstable();
            if sorted != [0, 1, 2, 3] || p.vertex_map[p.source.1] != p.target.1 {
                return Err(ThurstonError::Pairing(format!(
                    "vertex map {:?} does not send face {} to face {}",
                    p.vertex_map, p.source.1, p.target.1
                )));
            }
            if p.source == p.target {
                return Err(ThurstonError::Pairing(format!("face {:?} paired with itself", p.source)));
            }
            match (seen.get(&p.source), seen.get(&p.target)) {
                (None, None) => {
                    seen.insert(p.source, p.clone());
                    seen.insert(p.target, p.inverse());
                    kept.push(p);
                }
                (Some(q), _) if *q == p => {}
                _ => {
                    return Err(ThurstonError::Pairing(format!(
                        "pairing {:?} -> {:?} is not involutive with the earlier pairings",
                        p.source, p.target
                    )))
                }
            }
        }
        let names = (0..tets).map(|t| [format!("z{t}"), format!("z{t}p"), format!("z{t}pp")]).collect();
        Ok(Self { tets, pairings: kept, slots: vec![[0, 1, 2]; tets], names, convention: ParameterConvention::Cyclic })
    }

    pub fn tet_count(&self) -> usize {
        self.tets
    }

    pub fn pairings(&self) -> &[FacePairing] {
        &self.pairings
    }

    /// Every face of every tetrahedron is paired.
    pub fn is_closed(&self) -> bool {
        2 * self.pairings.len() == 4 * self.tets
    }

    pub fn convention(&self) -> ParameterConvention {
        self.convention
    }

    pub fn set_convention(&mut self, c: ParameterConvention) {
        self.convention = c;
    }

    pub fn names(&self) -> &[[String; 3]] {
        &self.names
    }

    pub fn set_names(&mut self, tet: usize, names: [String; 3]) -> Result<(), ThurstonError> {
        if tet >= self.tets {
            return Err(ThurstonError::Pairing(format!("tetrahedron {tet} out of range")));
        }
        self.names[tet] = names;
        Ok(())
    }

    /// Assign `t`, `t'`, `t''` of a tetrahedron to opposite-edge pairs (a
    /// permutation of `0..3`, indices into [`OPPOSITE_PAIRS`]).
    pub fn set_slots(&mut self, tet: usize, slots: [usize; 3]) -> Result<(), ThurstonError> {
        let mut s = slots;
        s.sort_unstable();
        if tet >= self.tets || s != [0, 1, 2] {
            return Err(ThurstonError::Pairing(format!("bad slot assignment {slots:?} for tetrahedron {tet}")));
        }
        self.slots[tet] = slots;
        Ok(())
    }

    /// Which parameter (0, 1, 2 for `t`, `t'`, `t''`) sits on an edge.
    pub fn parameter_of_edge(&self, tet: usize, edge: usize) -> usize {
        let pair = opposite_pair_of(edge);
        self.slots[tet].iter().position(|&p| p == pair).unwrap()
    }

    /// Partition of all `(tet, edge)` incidences under the face
    /// identifications.
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let n = self.tets * 6;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for p in &self.pairings {
            let vs = p.source_vertices();
            for i in 0..3 {
                for j in i + 1..3 {
                    let a = p.source.0 * 6 + edge_index(vs[i], vs[j]);
                    let b = p.target.0 * 6 + edge_index(p.vertex_map[vs[i]], p.vertex_map[vs[j]]);
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            classes.entry(r).or_default().push((x / 6, x % 6));
        }
        classes.into_values().map(|incidences| EdgeClass { incidences }).collect()
    }

    /// Polynomial ring with one variable per tetrahedron parameter.
    pub fn parameter_ring(&self) -> Arc<PolyRing> {
        PolyRing::new(self.names.iter().flatten().cloned(), MonomialOrder::Grevlex)
    }

    pub fn gluing_system(&self) -> GluingSystem {
        let ring = self.parameter_ring();
        let var = |t: usize, k: usize| IntPoly::var(&ring, Integers, 3 * t + k);
        let one = IntPoly::one(&ring, Integers);
        let mut edge_equations = Vec::new();
        for class in self.edge_classes() {
            let mut prod = one.clone();
            for &(t, e) in &class.incidences {
                prod = &prod * &var(t, self.parameter_of_edge(t, e));
            }
            let degenerate = class.incidences.len() == 1;
            edge_equations.push(EdgeEquation { class, poly: &prod - &one, degenerate });
        }
        let mut parameter_relations = Vec::new();
        for t in 0..self.tets {
            for (i, j) in self.convention.relations() {
                let p = &(&var(t, j) * &(&one - &var(t, i))) - &one;
                parameter_relations.push(p);
            }
        }
        GluingSystem { ring, edge_equations, parameter_relations, convention: self.convention }
    }
}

#[derive(Clone, Debug)]
pub struct EdgeEquation {
    pub class: EdgeClass,
    /// `Π (incident parameters) - 1`.
    pub poly: IntPoly,
    /// The class has a single incidence.
    pub degenerate: bool,
}

/// Edge equations and per-tetrahedron parameter relations, each as a
/// polynomial that must vanish.
#[derive(Clone, Debug)]
pub struct GluingSystem {
    pub ring: Arc<PolyRing>,
    pub edge_equations: Vec<EdgeEquation>,
    pub parameter_relations: Vec<IntPoly>,
    pub convention: ParameterConvention,
}

impl GluingSystem {
    pub fn all(&self) -> Vec<IntPoly> {
        self.edge_equations.iter().map(|e| e.poly.clone()).chain(self.parameter_relations.iter().cloned()).collect()
    }

    /// Equations written as `lhs = 1`.
    pub fn describe(&self) -> Vec<String> {
        self.all().iter().map(|p| format!("{} = 1", format_poly(&(p + &IntPoly::one(&self.ring, Integers))))).collect()
    }
}

/// Per tetrahedron, the values of `(t, t', t'')`.
pub type TetParams<E> = Vec<[E; 3]>;

fn eval_int<R: CommRing>(r: &R, p: &IntPoly, point: &[R::Elem]) -> R::Elem {
    let mut acc = r.zero();
    for (m, c) in p.terms() {
        let c = i64::try_from(c).expect("small gluing coefficients");
        let mut t = r.from_int(c);
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                t = r.mul(&t, &point[i]);
            }
        }
        acc = r.add(&acc, &t);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationCheck {
    pub equation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabellingReport {
    pub convention: String,
    pub checks: Vec<EquationCheck>,
    pub ok: bool,
}

/// Evaluate every gluing and parameter equation at the labelling.
pub fn verify_labelling<R: CommRing>(tri: &Triangulation, params: &TetParams<R::Elem>, ring: &R) -> LabellingReport {
    let sys = tri.gluing_system();
    let point: Vec<R::Elem> = params.iter().flat_map(|p| p.iter().cloned()).collect();
    let mut checks = Vec::new();
    if params.len() != tri.tet_count() {
        checks.push(EquationCheck { equation: format!("{} parameter triples given", params.len()), holds: false });
    } else {
        for (p, text) in sys.all().iter().zip(sys.describe()) {
            checks.push(EquationCheck { equation: text, holds: ring.is_zero(&eval_int(ring, p, &point)) });
        }
    }
    let ok = checks.iter().all(|c| c.holds);
    LabellingReport { convention: sys.convention.to_string(), checks, ok }
}

/// Every labelling over a finite ring satisfying the system. For each
/// tetrahedron the search runs over `(t, t'')` with `t'` fixed by the
/// relation involving `1 - t`.
pub fn enumerate_labellings(tri: &Triangulation, ring: &FiniteRing, budget: u64) -> Result<Vec<TetParams<u32>>, ThurstonError> {
    let n = ring.size() as u128;
    let space = n.pow(2 * tri.tet_count() as u32);
    if space > budget as u128 {
        return Err(RingError::Budget(format!("{space} candidate labellings exceed the budget {budget}")).into());
    }
    let conv = tri.convention();
    let one = ring.one_e();
    let rel = |p: &[u32; 3]| conv.relations().iter().all(|&(i, j)| ring.mul_e(p[j], ring.sub_e(one, p[i])) == one);
    let mut per_tet = Vec::new();
    for _ in 0..tri.tet_count() {
        let mut c = Vec::new();
        for t in 0..ring.size() {
            for t2 in 0..ring.size() {
                let tp = match conv {
                    ParameterConvention::Cyclic => ring.inverse_e(ring.sub_e(one, t)),
                    // t (1 - t') = 1 gives t' = 1 - t^{-1}.
                    ParameterConvention::Reversed => ring.inverse_e(t).map(|i| ring.sub_e(one, i)),
                };
                if let Some(tp) = tp {
                    let p = [t, tp, t2];
                    if rel(&p) {
                        c.push(p);
                    }
                }
            }
        }
        per_tet.push(c);
    }
    let sys = tri.gluing_system();
    let edges: Vec<IntPoly> = sys.edge_equations.iter().map(|e| e.poly.clone()).collect();
    if tri.tet_count() == 0 {
        return Ok(vec![Vec::new()]);
    }
    let found: Vec<TetParams<u32>> = per_tet[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut out = Vec::new();
            let mut cur = vec![first];
            extend(&per_tet, &mut cur, &mut |params| {
                let point: Vec<u32> = params.iter().flatten().copied().collect();
                if edges.iter().all(|p| eval_int(ring, p, &point) == 0) {
                    out.push(params.to_vec());
                }
            });
            out
        })
        .collect();
    Ok(found)
}

fn extend(per_tet: &[Vec<[u32; 3]>], cur: &mut Vec<[u32; 3]>, visit: &mut impl FnMut(&[[u32; 3]])) {
    if cur.len() == per_tet.len() {
        visit(cur);
        return;
    }
    for &p in &per_tet[cur.len()] {
        cur.push(p);
        extend(per_tet, cur, visit);
        cur.pop();
    }
}
