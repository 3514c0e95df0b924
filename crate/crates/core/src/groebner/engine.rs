//! Buchberger completion over a field with an optional derivation trace.
//!
//! Every polynomial the engine creates is stored in a table. When tracing is
//! on, each entry also records how it was obtained as a combination
//! `Σ c·m·entry[k]` of earlier entries; the first `n` entries are the input
//! generators. Expanding the trace gives cofactors over the inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::exactalg::{Domain, FieldDomain, Monomial, MonomialOrder, PolyRing, Polynomial};

type Terms<E> = Vec<(Monomial, E)>;
type Step<E> = (E, Monomial, usize);

/// Resource limit hit during a computation.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step budget of {budget} exhausted ({basis_size} basis elements so far)")]
pub struct BudgetExhausted {
    pub budget: u64,
    pub basis_size: usize,
}

#[derive(Clone, Debug)]
pub struct GbOptions {
    /// Elementary reduction steps allowed before giving up.
    pub max_steps: u64,
    /// Record derivations so that members can be lifted to cofactors.
    pub track: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        Self { max_steps: 200_000_000, track: false }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GbStats {
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub steps: u64,
}

/// Derivation record for a traced basis.
#[derive(Debug)]
pub(crate) struct Trace<E> {
    pub(crate) inputs: usize,
    pub(crate) steps: Vec<Vec<Step<E>>>,
    // The polynomial of every table entry.
    pub(crate) polys: Vec<Terms<E>>,
}

/// Cofactors produced by [`GroebnerBasis::lift_with_budget`].
#[derive(Clone, Debug)]
pub enum Lift<D: Domain> {
    /// Cofactors over the inputs.
    Flat(Vec<Polynomial<D>>),
    Chain(ChainLift<D>),
}

/// A derivation through intermediate members of the ideal. Lemma `j` is
/// given by sparse cofactors over the inputs followed by lemmas `0..j`;
/// the final cofactors range over the inputs followed by all lemmas.
#[derive(Clone, Debug)]
pub struct ChainLift<D: Domain> {
    pub lemmas: Vec<(Polynomial<D>, Vec<(usize, Polynomial<D>)>)>,
    pub cofactors: Vec<Polynomial<D>>,
}

/// A Gröbner basis of the ideal generated by `inputs`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<D: FieldDomain> {
    ring: Arc<PolyRing>,
    domain: D,
    inputs: Vec<Polynomial<D>>,
    basis: Vec<Polynomial<D>>,
    reduced: bool,
    stats: GbStats,
    // Derivation record and the table index of each basis element.
    trace: Option<Arc<Trace<D::Elem>>>,
    basis_ids: Vec<usize>,
}

struct Elem<E> {
    terms: Terms<E>,
    mask: u64,
    active: bool,
}

fn divmask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

/// `a - c*q*b` for sorted term lists.
fn sub_scaled<D: FieldDomain>(
    d: &D,
    order: MonomialOrder,
    a: &[(Monomial, D::Elem)],
    c: &D::Elem,
    q: &Monomial,
    b: &[(Monomial, D::Elem)],
) -> Terms<D::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj = b.first().map(|t| t.0.mul(q));
    while i < a.len() || bj.is_some() {
        let ord = match (&bj, a.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(m), Some((am, _))) => order.cmp(am, m),
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let v = d.neg(&d.mul(c, &b[j].1));
                if !d.is_zero(&v) {
                    out.push((bj.take().unwrap(), v));
                }
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(q));
            }
            Ordering::Equal => {
                let v = d.sub(&a[i].1, &d.mul(c, &b[j].1));
                if !d.is_zero(&v) {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(q));
            }
        }
    }
    out
}

#[derive(PartialEq, Eq)]
struct Pair {
    lcm: Monomial,
    order: MonomialOrder,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    // BinaryHeap is a max-heap: the smallest lcm must compare greatest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.lcm, &self.lcm)
            .then_with(|| other.j.cmp(&self.j))
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Engine<D: FieldDomain> {
    ring: Arc<PolyRing>,
    d: D,
    order: MonomialOrder,
    elems: Vec<Elem<D::Elem>>,
    steps_log: Option<Vec<Vec<Step<D::Elem>>>>,
    stats: GbStats,
    budget: u64,
}

impl<D: FieldDomain> Engine<D> {
    fn lm(&self, k: usize) -> &Monomial {
        &self.elems[k].terms[0].0
    }

    fn spend(&mut self) -> Result<(), BudgetExhausted> {
        self.stats.steps += 1;
        if self.stats.steps > self.budget {
            return Err(BudgetExhausted {
                budget: self.budget,
                basis_size: self.elems.iter().filter(|e| e.active).count(),
            });
        }
        Ok(())
    }

    /// First active element (in insertion order) whose leading monomial divides `m`.
    fn find_divisor(&self, m: &Monomial) -> Option<(usize, Monomial)> {
        let mm = divmask(m);
        self.elems.iter().enumerate().find_map(|(k, e)| {
            if !e.active || e.mask & !mm != 0 {
                return None;
            }
            e.terms[0].0.quotient_of(m).map(|q| (k, q))
        })
    }

    /// Full reduction against the active elements. Returns the remainder;
    /// reduction steps `(c, q, k)` with `p = remainder + Σ c·q·elem[k]` are
    /// appended to `log` when given.
    fn reduce(
        &mut self,
        mut p: Terms<D::Elem>,
        mut log: Option<&mut Vec<Step<D::Elem>>>,
    ) -> Result<Terms<D::Elem>, BudgetExhausted> {
        let mut rem: Terms<D::Elem> = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let (lm, lc) = &p[start];
            match self.find_divisor(lm) {
                Some((k, q)) => {
                    self.spend()?;
                    let g = &self.elems[k].terms;
                    let c = self.d.div(lc, &g[0].1);
                    let next = sub_scaled(&self.d, self.order, &p[start + 1..], &c, &q, &g[1..]);
                    if let Some(log) = log.as_deref_mut() {
                        log.push((c, q, k));
                    }
                    p = next;
                    start = 0;
                }
                None => {
                    rem.push(p[start].clone());
                    start += 1;
                }
            }
        }
        Ok(rem)
    }

    fn push(&mut self, terms: Terms<D::Elem>, steps: Vec<Step<D::Elem>>, active: bool) -> usize {
        let mask = terms.first().map(|t| divmask(&t.0)).unwrap_or(0);
        self.elems.push(Elem { terms, mask, active });
        if let Some(log) = &mut self.steps_log {
            log.push(steps);
        }
        self.elems.len() - 1
    }

    /// Make `r` monic and store it. `steps` expresses `r` itself.
    fn push_monic(&mut self, mut r: Terms<D::Elem>, mut steps: Vec<Step<D::Elem>>) -> usize {
        let inv = self.d.inv(&r[0].1);
        if !self.d.is_one(&inv) {
            for t in r.iter_mut() {
                t.1 = self.d.mul(&t.1, &inv);
            }
            for s in steps.iter_mut() {
                s.0 = self.d.mul(&s.0, &inv);
            }
        }
        self.push(r, steps, true)
    }

    /// Gebauer–Möller update after element `t` became active.
    fn update(&mut self, t: usize, pairs: &mut BinaryHeap<Pair>) {
        let lm_t = self.lm(t).clone();
        let candidates: Vec<usize> = (0..t).filter(|&i| self.elems[i].active).collect();
        let lcms: Vec<Monomial> = candidates.iter().map(|&i| self.lm(i).lcm(&lm_t)).collect();
        let coprime: Vec<bool> = candidates.iter().map(|&i| self.lm(i).is_coprime(&lm_t)).collect();

        // Chain criterion among the new pairs.
        let mut keep = vec![true; candidates.len()];
        for a in 0..candidates.len() {
            if coprime[a] {
                continue;
            }
            for b in 0..candidates.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if lcms[b].divides(&lcms[a]) && (lcms[b] != lcms[a] || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }

        // Old pairs made redundant by t.
        let order = self.order;
        let old: Vec<Pair> = std::mem::take(pairs).into_vec();
        for p in old {
            let li = self.lm(p.i).lcm(&lm_t);
            let lj = self.lm(p.j).lcm(&lm_t);
            let redundant = lm_t.divides(&p.lcm) && li != p.lcm && lj != p.lcm;
            if !redundant {
                pairs.push(p);
            }
        }
        for (a, &i) in candidates.iter().enumerate() {
            if keep[a] && !coprime[a] {
                pairs.push(Pair { lcm: lcms[a].clone(), order, i, j: t });
            }
        }

        // Elements whose leading monomial is now redundant.
        for i in candidates {
            if lm_t.divides(self.lm(i)) {
                self.elems[i].active = false;
            }
        }
    }

    fn spoly(&self, i: usize, j: usize, lcm: &Monomial) -> (Terms<D::Elem>, Vec<Step<D::Elem>>) {
        let (gi, gj) = (&self.elems[i].terms, &self.elems[j].terms);
        let qi = self.lm(i).quotient_of(lcm).unwrap();
        let qj = self.lm(j).quotient_of(lcm).unwrap();
        // Both are monic: qi*gi - qj*gj, leading terms cancel.
        let ci = self.d.one();
        let a = gi[1..].iter().map(|(m, c)| (m.mul(&qi), c.clone())).collect::<Vec<_>>();
        let s = sub_scaled(&self.d, self.order, &a, &self.d.one(), &qj, &gj[1..]);
        let steps = if self.steps_log.is_some() {
            vec![(ci, qi, i), (self.d.neg(&self.d.one()), qj, j)]
        } else {
            Vec::new()
        };
        (s, steps)
    }

    /// Reduce `p` fully and store it as an active element if nonzero.
    fn insert(&mut self, p: Terms<D::Elem>, mut steps: Vec<Step<D::Elem>>) -> Result<Option<usize>, BudgetExhausted> {
        let tracking = self.steps_log.is_some();
        let mut red = Vec::new();
        let r = self.reduce(p, tracking.then_some(&mut red))?;
        if r.is_empty() {
            return Ok(None);
        }
        // r = p - Σ red
        for (c, q, k) in red {
            steps.push((self.d.neg(&c), q, k));
        }
        Ok(Some(self.push_monic(r, steps)))
    }
}

impl<D: FieldDomain> GroebnerBasis<D> {
    /// Reduced Gröbner basis of `gens` in the order of their common ring.
    pub fn compute(gens: &[Polynomial<D>], domain: D, opts: &GbOptions) -> Result<Self, BudgetExhausted> {
        let ring = gens.first().map(|g| g.ring().clone()).expect("at least one generator");
        Self::compute_in(&ring, gens, domain, opts)
    }

    pub fn compute_in(
        ring: &Arc<PolyRing>,
        gens: &[Polynomial<D>],
        domain: D,
        opts: &GbOptions,
    ) -> Result<Self, BudgetExhausted> {
        let order = ring.order();
        let inputs: Vec<Polynomial<D>> = gens.iter().map(|g| g.in_ring(ring)).collect();
        let mut e = Engine {
            ring: ring.clone(),
            d: domain.clone(),
            order,
            elems: Vec::new(),
            steps_log: opts.track.then(Vec::new),
            stats: GbStats::default(),
            budget: opts.max_steps,
        };
        for g in &inputs {
            e.push(g.terms().to_vec(), Vec::new(), false);
        }
        let mut pairs = BinaryHeap::new();
        for k in 0..inputs.len() {
            if inputs[k].is_zero() {
                continue;
            }
            let steps = if opts.track { vec![(domain.one(), Monomial::one(ring.nvars()), k)] } else { Vec::new() };
            if let Some(t) = e.insert(inputs[k].terms().to_vec(), steps)? {
                e.update(t, &mut pairs);
            }
        }
        while let Some(p) = pairs.pop() {
            e.stats.pairs_reduced += 1;
            e.spend()?;
            let (s, steps) = e.spoly(p.i, p.j, &p.lcm);
            match e.insert(s, steps)? {
                Some(t) => {
                    if e.elems[t].terms[0].0.is_one() {
                        // Unit ideal: nothing else matters.
                        pairs.clear();
                    }
                    e.update(t, &mut pairs);
                }
                None => e.stats.zero_reductions += 1,
            }
        }
        Self::finish(e, inputs)
    }

    /// Minimalise and inter-reduce the active elements.
    fn finish(mut e: Engine<D>, inputs: Vec<Polynomial<D>>) -> Result<Self, BudgetExhausted> {
        let order = e.order;
        let mut lead: Vec<usize> = (0..e.elems.len()).filter(|&k| e.elems[k].active).collect();
        // Minimal basis: drop elements whose leading monomial another one divides.
        let mut minimal = Vec::new();
        for &k in &lead {
            let lm = e.lm(k);
            let dominated = lead.iter().any(|&o| {
                o != k && e.lm(o).divides(lm) && (e.lm(o) != lm || o < k)
            });
            if !dominated {
                minimal.push(k);
            }
        }
        for &k in &lead {
            e.elems[k].active = minimal.contains(&k);
        }
        lead = minimal;
        // Inter-reduce the tails; leading monomials are unaffected.
        let mut ids = Vec::with_capacity(lead.len());
        for &k in &lead {
            let head = e.elems[k].terms[0].clone();
            let tail = e.elems[k].terms[1..].to_vec();
            e.elems[k].active = false;
            let tracking = e.steps_log.is_some();
            let mut red = Vec::new();
            let r = e.reduce(tail, tracking.then_some(&mut red))?;
            let mut terms = vec![head];
            terms.extend(r);
            let mut steps = Vec::new();
            if tracking {
                steps.push((e.d.one(), Monomial::one(e.ring.nvars()), k));
                for (c, q, j) in red {
                    steps.push((e.d.neg(&c), q, j));
                }
            }
            e.elems[k].active = true;
            let id = e.push(terms, steps, false);
            ids.push((k, id));
        }
        // Swap the reduced versions in.
        for &(old, new) in &ids {
            e.elems[old].active = false;
            e.elems[new].active = true;
        }
        let mut ids: Vec<usize> = ids.into_iter().map(|(_, n)| n).collect();
        ids.sort_by(|&a, &b| order.cmp(e.lm(a), e.lm(b)));
        let basis = ids
            .iter()
            .map(|&k| Polynomial::from_sorted_terms(&e.ring, e.d.clone(), e.elems[k].terms.clone()))
            .collect();
        let trace = e.steps_log.take().map(|steps| {
            let polys = e.elems.iter_mut().map(|el| std::mem::take(&mut el.terms)).collect();
            Arc::new(Trace { inputs: inputs.len(), steps, polys })
        });
        Ok(Self {
            ring: e.ring,
            domain: e.d,
            inputs,
            basis,
            reduced: true,
            stats: e.stats,
            trace,
            basis_ids: ids,
        })
    }

    pub fn basis(&self) -> &[Polynomial<D>] {
        &self.basis
    }

    pub fn inputs(&self) -> &[Polynomial<D>] {
        &self.inputs
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    pub fn is_traced(&self) -> bool {
        self.trace.is_some()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    /// Remainder of `f` modulo the basis (first-divisor rule).
    pub fn normal_form(&self, f: &Polynomial<D>) -> Polynomial<D> {
        self.reduce_with_quotients(f, false).1
    }

    /// `f = Σ q_k basis[k] + r`; quotients only when `want_quotients`.
    pub fn reduce_with_quotients(&self, f: &Polynomial<D>, want_quotients: bool) -> (Vec<Terms<D::Elem>>, Polynomial<D>) {
        let f = f.in_ring(&self.ring);
        let order = self.order();
        let d = &self.domain;
        let masks: Vec<u64> = self.basis.iter().map(|g| divmask(g.lead_monomial().unwrap())).collect();
        let mut quotients: Vec<Terms<D::Elem>> = vec![Vec::new(); if want_quotients { self.basis.len() } else { 0 }];
        let mut p = f.terms().to_vec();
        let mut rem = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let (lm, lc) = &p[start];
            let mm = divmask(lm);
            let hit = self.basis.iter().enumerate().find_map(|(k, g)| {
                if masks[k] & !mm != 0 {
                    return None;
                }
                g.lead_monomial().unwrap().quotient_of(lm).map(|q| (k, q))
            });
            match hit {
                Some((k, q)) => {
                    let g = self.basis[k].terms();
                    let c = d.div(lc, &g[0].1);
                    p = sub_scaled(d, order, &p[start + 1..], &c, &q, &g[1..]);
                    start = 0;
                    if want_quotients {
                        quotients[k].push((q, c));
                    }
                }
                None => {
                    rem.push(p[start].clone());
                    start += 1;
                }
            }
        }
        (quotients, Polynomial::from_sorted_terms(&self.ring, d.clone(), rem))
    }

    /// Cofactors `c` over the input generators with `f = Σ c_i inputs[i]`,
    /// when `f` is in the ideal and the basis was computed with tracing.
    pub fn lift(&self, f: &Polynomial<D>) -> Option<Vec<Polynomial<D>>> {
        match self.lift_with_budget(f, usize::MAX)? {
            Lift::Flat(c) => Some(c),
            Lift::Chain(_) => None,
        }
    }

    /// Like [`lift`](Self::lift), but gives up on flat cofactors once an
    /// intermediate polynomial exceeds `max_terms` terms and returns the
    /// derivation as a chain of lemmas instead.
    pub fn lift_with_budget(&self, f: &Polynomial<D>, max_terms: usize) -> Option<Lift<D>> {
        let trace = self.trace.as_ref()?;
        let (quotients, r) = self.reduce_with_quotients(f, true);
        if !r.is_zero() {
            return None;
        }
        let mut top: Vec<Step<D::Elem>> = Vec::new();
        for (b, q) in quotients.into_iter().enumerate() {
            for (m, c) in q {
                top.push((c, m, self.basis_ids[b]));
            }
        }
        if let Some(c) = expand(&self.ring, &self.domain, trace, &top, max_terms) {
            return Some(Lift::Flat(c));
        }
        Some(Lift::Chain(chain(&self.ring, &self.domain, trace, &top)))
    }

    /// Every S-polynomial of basis pairs reduces to zero.
    pub fn check_s_pairs(&self) -> bool {
        let d = &self.domain;
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let (gi, gj) = (&self.basis[i], &self.basis[j]);
                let (mi, ci) = gi.lead_term().unwrap();
                let (mj, cj) = gj.lead_term().unwrap();
                let l = mi.lcm(mj);
                let s = &gi.mul_term(&mi.quotient_of(&l).unwrap(), &d.inv(ci))
                    - &gj.mul_term(&mj.quotient_of(&l).unwrap(), &d.inv(cj));
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Expand trace steps into cofactors over the inputs.
///
/// Works backwards: `f = Σ_k P_k · entry[k]`, and each derived entry hands
/// its multiplier `P_k` to the entries it was built from. Only one
/// polynomial per entry is ever held, so shared ancestors are merged before
/// they are expanded further.
fn expand<D: FieldDomain>(
    ring: &Arc<PolyRing>,
    d: &D,
    trace: &Trace<D::Elem>,
    top: &[Step<D::Elem>],
    max_terms: usize,
) -> Option<Vec<Polynomial<D>>> {
    let total = trace.steps.len();
    let mut acc: Vec<Terms<D::Elem>> = vec![Vec::new(); total];
    for (c, m, k) in top {
        acc[*k].push((m.clone(), c.clone()));
    }
    // Term products allowed before giving up on flat cofactors.
    let mut work = max_terms.saturating_mul(16);
    for k in (trace.inputs..total).rev() {
        if acc[k].is_empty() {
            continue;
        }
        let pk = Polynomial::from_terms(ring, d.clone(), std::mem::take(&mut acc[k]));
        work = work.checked_sub(pk.len() * trace.steps[k].len())?;
        for (c, m, src) in &trace.steps[k] {
            let target = &mut acc[*src];
            for (pm, pc) in pk.terms() {
                target.push((pm.mul(m), d.mul(pc, c)));
            }
            if target.len() > 4096 {
                *target = Polynomial::from_terms(ring, d.clone(), std::mem::take(target)).into_terms();
                if target.len() > max_terms {
                    return None;
                }
            }
        }
    }
    acc.truncate(trace.inputs);
    let out: Vec<Polynomial<D>> = acc.into_iter().map(|t| Polynomial::from_terms(ring, d.clone(), t)).collect();
    (out.iter().map(|p| p.len()).sum::<usize>() <= max_terms).then_some(out)
}

/// The entries `top` depends on, as lemmas in table order.
fn chain<D: FieldDomain>(ring: &Arc<PolyRing>, d: &D, trace: &Trace<D::Elem>, top: &[Step<D::Elem>]) -> ChainLift<D> {
    let n = trace.inputs;
    let mut needed = vec![false; trace.steps.len()];
    let mut stack: Vec<usize> = top.iter().map(|s| s.2).collect();
    while let Some(k) = stack.pop() {
        if k < n || needed[k] {
            continue;
        }
        needed[k] = true;
        stack.extend(trace.steps[k].iter().map(|s| s.2));
    }
    let mut slot = vec![usize::MAX; trace.steps.len()];
    for (k, s) in slot.iter_mut().enumerate().take(n) {
        *s = k;
    }
    let group = |steps: &[Step<D::Elem>], slot: &[usize]| -> Vec<(usize, Polynomial<D>)> {
        let mut by: std::collections::BTreeMap<usize, Terms<D::Elem>> = Default::default();
        for (c, m, src) in steps {
            by.entry(slot[*src]).or_default().push((m.clone(), c.clone()));
        }
        by.into_iter()
            .map(|(i, t)| (i, Polynomial::from_terms(ring, d.clone(), t)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    };
    let mut lemmas = Vec::new();
    for k in n..trace.steps.len() {
        if !needed[k] {
            continue;
        }
        let uses = group(&trace.steps[k], &slot);
        let poly = Polynomial::from_sorted_terms(ring, d.clone(), trace.polys[k].clone());
        slot[k] = n + lemmas.len();
        lemmas.push((poly, uses));
    }
    let mut cofactors = vec![Polynomial::zero(ring, d.clone()); n + lemmas.len()];
    for (i, p) in group(top, &slot) {
        cofactors[i] = p;
    }
    ChainLift { lemmas, cofactors }
}
