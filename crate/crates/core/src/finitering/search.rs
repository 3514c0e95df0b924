//! Representations over finite rings and exhaustive witness search.

use std::fmt;

use rayon::prelude::*;

use crate::presentation::{Presentation, Word};
use crate::universal::KKind;

use super::group::{FiniteGroup, DEFAULT_BUDGET};
use super::matrix::{format_mat, generate_subgroup, in_group, is_identity, mat_identity, mat_inverse, mat_mul, GroupElement2};
use super::ring::{Elem, FiniteRing, Mat2};
use super::RingError;

/// A homomorphism from a presented group to `K(R)`, given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub presentation: Presentation,
    pub ring: FiniteRing,
    pub kind: KKind,
    pub images: Vec<Mat2<Elem>>,
}

impl Representation {
    /// Checked constructor: images lie in `K(R)` and every relator evaluates
    /// to the identity.
    pub fn new(presentation: Presentation, ring: FiniteRing, kind: KKind, images: Vec<Mat2<Elem>>) -> Result<Self, RingError> {
        let rep = Self { presentation, ring, kind, images };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<(), RingError> {
        let p = &self.presentation;
        if self.images.len() != p.generator_count() {
            return Err(RingError::Mismatch(format!(
                "{} images for {} generators",
                self.images.len(),
                p.generator_count()
            )));
        }
        for (g, m) in self.images.iter().enumerate() {
            if !in_group(&self.ring, self.kind, m) {
                return Err(RingError::NotInGroup(format!(
                    "image of {} is {}, not in {}({})",
                    p.generators()[g],
                    format_mat(&self.ring, m),
                    self.kind,
                    self.ring
                )));
            }
        }
        for r in p.relators() {
            if !self.kills(r) {
                return Err(RingError::NotARepresentation(format!(
                    "relator {} maps to {}",
                    r.display_with(p.generators()),
                    format_mat(&self.ring, &self.evaluate(r))
                )));
            }
        }
        Ok(())
    }

    /// Matrix product along the word (some representative for projective kinds).
    pub fn evaluate(&self, w: &Word) -> Mat2<Elem> {
        let r = &self.ring;
        let mut acc = mat_identity(r);
        for l in w.letters() {
            let m = &self.images[l.generator];
            let m = if l.inverse { mat_inverse(r, m).expect("unit determinant") } else { *m };
            acc = mat_mul(r, &acc, &m);
        }
        acc
    }

    pub fn kills(&self, w: &Word) -> bool {
        is_identity(&self.ring, self.kind, &self.evaluate(w))
    }

    /// Order of the image subgroup.
    pub fn image_order(&self, limit: usize) -> Result<usize, RingError> {
        Ok(generate_subgroup(&self.ring, self.kind, &self.images, limit)?.len())
    }

    pub fn describe(&self) -> String {
        let gens = self.presentation.generators();
        self.images
            .iter()
            .enumerate()
            .map(|(g, m)| format!("{} -> {}", gens[g], format_mat(&self.ring, m)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}: {}", self.kind, self.ring, self.describe())
    }
}

pub fn evaluate_rep(rep: &Representation, w: &Word) -> GroupElement2<FiniteRing> {
    GroupElement2 { ring: rep.ring.clone(), kind: rep.kind, matrix: rep.evaluate(w) }
}

/// A representation together with a word it does not kill.
#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub representation: Representation,
    pub word: Word,
    pub image: Mat2<Elem>,
}

impl SeparationWitness {
    /// Recheck relators, the stored image and its non-triviality by direct
    /// matrix arithmetic.
    pub fn revalidate(&self) -> bool {
        let rep = &self.representation;
        rep.validate().is_ok() && {
            let m = rep.evaluate(&self.word);
            evaluate_rep(rep, &self.word) == GroupElement2 { ring: rep.ring.clone(), kind: rep.kind, matrix: self.image }
                && !is_identity(&rep.ring, rep.kind, &m)
        }
    }
}

impl fmt::Display for SeparationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.representation.presentation.generators();
        write!(
            f,
            "{}; image of {}: {}",
            self.representation,
            self.word.display_with(gens),
            format_mat(&self.representation.ring, &self.image)
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Bound on candidate tuples (and on `|R|^4` for group enumeration).
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET }
    }
}

/// Relators compiled to group indices, with candidate lists per generator.
struct Space<'a> {
    group: &'a FiniteGroup,
    n: usize,
    candidates: Vec<Vec<u32>>,
    /// Relators to check once generator `k` is assigned (those whose
    /// largest generator is `k` and that involve more than one generator).
    checks: Vec<Vec<&'a Word>>,
}

fn eval_indices(group: &FiniteGroup, assign: &[u32], w: &Word) -> u32 {
    let mut acc = group.identity();
    for l in w.letters() {
        let g = assign[l.generator];
        acc = group.mul(acc, if l.inverse { group.inv(g) } else { g });
    }
    acc
}

impl<'a> Space<'a> {
    fn new(p: &'a Presentation, group: &'a FiniteGroup, budget: u64) -> Result<Self, RingError> {
        let n = p.generator_count();
        let mut candidates = Vec::with_capacity(n);
        let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); n];
        let mut single: Vec<Vec<&Word>> = vec![Vec::new(); n];
        for r in p.relators() {
            let mut gens: Vec<usize> = r.letters().iter().map(|l| l.generator).collect();
            gens.sort_unstable();
            gens.dedup();
            match gens.as_slice() {
                [] => {}
                [g] => single[*g].push(r),
                _ => checks[*gens.last().unwrap()].push(r),
            }
        }
        let mut assign = vec![group.identity(); n];
        for (g, rels) in single.iter().enumerate() {
            let mut c = Vec::new();
            for x in 0..group.order() as u32 {
                assign[g] = x;
                if rels.iter().all(|r| eval_indices(group, &assign, r) == group.identity()) {
                    c.push(x);
                }
            }
            assign[g] = group.identity();
            candidates.push(c);
        }
        let space: u128 = candidates.iter().map(|c| c.len() as u128).product();
        if space > budget as u128 {
            return Err(RingError::Budget(format!("{space} candidate tuples exceed the budget {budget}")));
        }
        Ok(Self { group, n, candidates, checks })
    }

    /// Depth-first search over assignments extending `assign[..k]`; stops at
    /// the first leaf where `visit` returns `Some`.
    fn dfs<T>(&self, k: usize, assign: &mut Vec<u32>, visit: &mut impl FnMut(&[u32]) -> Option<T>) -> Option<T> {
        if k == self.n {
            return visit(assign);
        }
        for &x in &self.candidates[k] {
            assign[k] = x;
            if self.checks[k].iter().all(|r| eval_indices(self.group, assign, r) == self.group.identity()) {
                if let Some(t) = self.dfs(k + 1, assign, visit) {
                    return Some(t);
                }
            }
        }
        None
    }

    /// Parallel over the first generator; the result is the first hit in
    /// enumeration order.
    fn find_first<T: Send>(&self, visit: impl Fn(&[u32]) -> Option<T> + Sync) -> Option<T> {
        if self.n == 0 {
            return visit(&[]);
        }
        self.candidates[0].par_iter().find_map_first(|&x| {
            let mut assign = vec![self.group.identity(); self.n];
            assign[0] = x;
            if !self.checks[0].iter().all(|r| eval_indices(self.group, &assign, r) == self.group.identity()) {
                return None;
            }
            self.dfs(1, &mut assign, &mut |a| visit(a))
        })
    }

    fn for_each(&self, visit: impl Fn(&[u32]) + Sync) {
        let _: Option<()> = self.find_first(|a| {
            visit(a);
            None
        });
    }

    fn representation(&self, p: &Presentation, assign: &[u32]) -> Representation {
        Representation {
            presentation: p.clone(),
            ring: self.group.ring().clone(),
            kind: self.group.kind(),
            images: assign.iter().map(|&i| *self.group.matrix(i)).collect(),
        }
    }
}

/// Exhaustive search for a representation into `K(R)` that does not kill
/// `w`. `Ok(None)` means no such representation exists.
pub fn search_separating_rep(
    p: &Presentation,
    w: &Word,
    ring: &FiniteRing,
    kind: KKind,
    opts: &SearchOptions,
) -> Result<Option<SeparationWitness>, RingError> {
    if let Some(g) = w.max_generator() {
        if g >= p.generator_count() {
            return Err(RingError::Mismatch(format!("word uses generator {g} outside the presentation")));
        }
    }
    let group = FiniteGroup::new(ring, kind, opts.budget)?;
    search_in_group(p, w, &group, opts)
}

/// As [`search_separating_rep`] with a prebuilt group.
pub fn search_in_group(
    p: &Presentation,
    w: &Word,
    group: &FiniteGroup,
    opts: &SearchOptions,
) -> Result<Option<SeparationWitness>, RingError> {
    let space = Space::new(p, group, opts.budget)?;
    let hit = space.find_first(|a| (eval_indices(group, a, w) != group.identity()).then(|| a.to_vec()));
    Ok(hit.map(|a| {
        let representation = space.representation(p, &a);
        let image = representation.evaluate(w);
        SeparationWitness { representation, word: w.clone(), image }
    }))
}

/// Summary of all homomorphisms into `K(R)`.
#[derive(Clone, Debug)]
pub struct ImageSurvey {
    pub group_order: usize,
    pub homomorphisms: u64,
    pub max_image_order: usize,
    /// First representation (in enumeration order) reaching the maximum.
    pub best: Option<Representation>,
}

/// Enumerate every homomorphism `G → K(R)` and record image orders.
pub fn survey_images(p: &Presentation, ring: &FiniteRing, kind: KKind, opts: &SearchOptions) -> Result<ImageSurvey, RingError> {
    let group = FiniteGroup::new(ring, kind, opts.budget)?;
    let space = Space::new(p, &group, opts.budget)?;
    let found = std::sync::Mutex::new(Vec::<(usize, Vec<u32>)>::new());
    space.for_each(|a| {
        let order = group.generated(a).len();
        found.lock().unwrap().push((order, a.to_vec()));
    });
    let mut found = found.into_inner().unwrap();
    found.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
    let homomorphisms = found.len() as u64;
    let max_image_order = found.first().map_or(0, |f| f.0);
    let best = found.first().map(|(_, a)| space.representation(p, a));
    Ok(ImageSurvey { group_order: group.order(), homomorphisms, max_image_order, best })
}

/// Order of the image of `rep`, computed inside an enumerated `K(R)`.
pub fn image_order_in(group: &FiniteGroup, rep: &Representation) -> Option<usize> {
    let gens: Option<Vec<u32>> = rep.images.iter().map(|m| group.index_of(m)).collect();
    Some(group.generated(&gens?).len())
}
