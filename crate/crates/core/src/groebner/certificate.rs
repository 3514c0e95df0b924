//! Membership certificates: cofactors `g_i` with `f = Σ g_i f_i`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactalg::text::parse_vars_header;
use crate::exactalg::{
    format_poly, parse_expr, poly_arith, CoefficientDomain, Domain, Integers, Monomial, MonomialOrder, PolyOp,
    PolyRing, Polynomial, PrimeField, RatPoly, Rationals,
};

use super::GroebnerError;

/// Explicit witness that `target` lies in the ideal of `generators`.
///
/// Polynomials are stored with rational coefficients; for `zz` they must be
/// integral and for `fp:p` they are read modulo `p`.
///
/// Without lemmas, `target = Σ cofactors[i] * generators[i]`. With lemmas,
/// each lemma is itself shown to be a combination of the generators and the
/// lemmas before it, and the cofactors run over the generators followed by
/// the lemmas.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCertificate {
    pub domain: CoefficientDomain,
    pub target: RatPoly,
    pub generators: Vec<RatPoly>,
    pub lemmas: Vec<Lemma>,
    pub cofactors: Vec<RatPoly>,
}

/// An intermediate ideal member with sparse cofactors `(index, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma {
    pub poly: RatPoly,
    pub uses: Vec<(usize, RatPoly)>,
}

impl MembershipCertificate {
    /// A certificate without lemmas.
    pub fn flat(domain: CoefficientDomain, target: RatPoly, generators: Vec<RatPoly>, cofactors: Vec<RatPoly>) -> Self {
        Self { domain, target, generators, lemmas: Vec::new(), cofactors }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.target.ring()
    }

    /// Largest total degree among the cofactors (0 when all vanish).
    pub fn degree(&self) -> u32 {
        let lemma = self.lemmas.iter().flat_map(|l| l.uses.iter().map(|u| &u.1));
        self.cofactors.iter().chain(lemma).filter_map(|c| c.total_degree()).max().unwrap_or(0)
    }

    /// Rescale a rational certificate into an integral one for `N * target`
    /// with the smallest `N` this derivation allows. Each lemma is scaled
    /// by the least integer that makes it and its cofactors integral.
    /// `None` if a generator is not integral.
    pub fn integral_multiple(&self) -> Option<(BigInt, MembershipCertificate)> {
        if !self.generators.iter().all(|g| g.is_integral()) {
            return None;
        }
        let n = self.generators.len();
        let mut scale: Vec<BigRational> = vec![BigRational::one(); n];
        let denoms = |p: &RatPoly, l: &mut BigInt| {
            for (_, c) in p.terms() {
                *l = l.lcm(c.denom());
            }
        };
        let mut lemmas = Vec::with_capacity(self.lemmas.len());
        for lem in &self.lemmas {
            // uses relative to the scaled earlier entries
            let rel: Vec<(usize, RatPoly)> = lem
                .uses
                .iter()
                .map(|(i, c)| Some((*i, c.scale(&scale.get(*i)?.recip()))))
                .collect::<Option<_>>()?;
            let mut l = BigInt::one();
            denoms(&lem.poly, &mut l);
            for (_, c) in &rel {
                denoms(c, &mut l);
            }
            let sj = BigRational::from_integer(l);
            lemmas.push(Lemma { poly: lem.poly.scale(&sj), uses: rel.iter().map(|(i, c)| (*i, c.scale(&sj))).collect() });
            scale.push(sj);
        }
        let rel: Vec<RatPoly> =
            self.cofactors.iter().zip(&scale).map(|(c, s)| c.scale(&s.recip())).collect();
        let mut l = BigInt::one();
        denoms(&self.target, &mut l);
        for c in &rel {
            denoms(c, &mut l);
        }
        let big_n = BigRational::from_integer(l.clone());
        let cert = MembershipCertificate {
            domain: CoefficientDomain::Integers,
            target: self.target.scale(&big_n),
            generators: self.generators.clone(),
            lemmas,
            cofactors: rel.iter().map(|c| c.scale(&big_n)).collect(),
        };
        Some((l, cert))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# membership certificate: target = sum of cofactor_i * generator_i\n");
        let _ = writeln!(s, "vars: {};", self.ring().vars().join(" "));
        let _ = writeln!(s, "domain: {};", self.domain);
        let _ = writeln!(s, "target:\n{}", format_poly(&self.target));
        let _ = writeln!(s, "generators: {}", self.generators.len());
        for g in &self.generators {
            let _ = writeln!(s, "{}", format_poly(g));
        }
        if !self.lemmas.is_empty() {
            let _ = writeln!(s, "lemmas: {}", self.lemmas.len());
            for l in &self.lemmas {
                let _ = writeln!(s, "lemma:\n{}", format_poly(&l.poly));
                let _ = writeln!(s, "uses: {}", l.uses.len());
                for (i, c) in &l.uses {
                    let _ = writeln!(s, "{i}: {}", format_poly(c));
                }
            }
        }
        let _ = writeln!(s, "cofactors: {}", self.cofactors.len());
        for c in &self.cofactors {
            let _ = writeln!(s, "{}", format_poly(c));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GroebnerError> {
        let bad = |m: &str| GroebnerError::CertificateFormat(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let ring = parse_vars_header(lines.next().ok_or_else(|| bad("missing vars"))?, MonomialOrder::Grevlex)?;
        let domain: CoefficientDomain = lines
            .next()
            .and_then(|l| l.strip_prefix("domain:"))
            .and_then(|l| l.trim().strip_suffix(';'))
            .ok_or_else(|| bad("missing domain"))?
            .parse()?;
        if lines.next() != Some("target:") {
            return Err(bad("missing target"));
        }
        let target = parse_expr(&ring, lines.next().ok_or_else(|| bad("missing target polynomial"))?)?;
        let mut lines = lines.peekable();
        let count = |l: Option<&str>, name: &str| -> Result<usize, GroebnerError> {
            l.and_then(|l| l.strip_prefix(name))
                .and_then(|l| l.strip_prefix(':'))
                .and_then(|l| l.trim().parse().ok())
                .ok_or_else(|| bad(&format!("missing `{name}: <count>`")))
        };
        let poly = |l: Option<&str>, name: &str| -> Result<RatPoly, GroebnerError> {
            Ok(parse_expr(&ring, l.ok_or_else(|| bad(&format!("truncated {name}")))?)?)
        };
        let n = count(lines.next(), "generators")?;
        let generators = (0..n).map(|_| poly(lines.next(), "generators")).collect::<Result<Vec<_>, _>>()?;
        let mut lemmas = Vec::new();
        if lines.peek().is_some_and(|l| l.starts_with("lemmas:")) {
            let m = count(lines.next(), "lemmas")?;
            for _ in 0..m {
                if lines.next() != Some("lemma:") {
                    return Err(bad("missing `lemma:`"));
                }
                let p = poly(lines.next(), "lemma")?;
                let k = count(lines.next(), "uses")?;
                let mut uses = Vec::with_capacity(k);
                for _ in 0..k {
                    let l = lines.next().ok_or_else(|| bad("truncated uses"))?;
                    let (i, c) = l.split_once(':').ok_or_else(|| bad("expected `<index>: <cofactor>`"))?;
                    let i: usize = i.trim().parse().map_err(|_| bad("bad lemma index"))?;
                    uses.push((i, poly(Some(c.trim()), "uses")?));
                }
                lemmas.push(Lemma { poly: p, uses });
            }
        }
        let n = count(lines.next(), "cofactors")?;
        let cofactors = (0..n).map(|_| poly(lines.next(), "cofactors")).collect::<Result<Vec<_>, _>>()?;
        if lines.next().is_some() {
            return Err(bad("trailing input"));
        }
        Ok(Self { domain, target, generators, lemmas, cofactors })
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    pub fn read(path: &Path) -> Result<Self, GroebnerError> {
        let text = std::fs::read_to_string(path).map_err(|e| GroebnerError::Io(e.to_string()))?;
        Self::from_text(&text)
    }
}

/// Check `Σ g_i f_i = f` with plain ring arithmetic over the certificate's
/// domain, after checking each lemma the same way.
pub fn verify_certificate(cert: &MembershipCertificate) -> bool {
    if cert.generators.len() + cert.lemmas.len() != cert.cofactors.len() {
        return false;
    }
    match cert.domain {
        CoefficientDomain::Integers => verify_in(cert, &Integers),
        CoefficientDomain::Rationals => verify_in(cert, &Rationals),
        CoefficientDomain::PrimeField(p) => match PrimeField::new(p) {
            Ok(f) => verify_in(cert, &f),
            Err(_) => false,
        },
    }
}

fn verify_in<D: Domain>(cert: &MembershipCertificate, d: &D) -> bool {
    let ring = cert.target.ring();
    let conv = |p: &RatPoly| -> Option<Polynomial<D>> {
        if p.ring().vars() != ring.vars() {
            return None;
        }
        p.in_ring(ring).map_domain(d)
    };
    let Some(mut known) = cert.generators.iter().map(conv).collect::<Option<Vec<_>>>() else { return false };
    // value - Σ c_i known[i] == 0
    let combination_is = |value: &Polynomial<D>, terms: &mut dyn Iterator<Item = (usize, &RatPoly)>, known: &[Polynomial<D>]| {
        let mut acc = value.clone();
        for (i, c) in terms {
            let (Some(f), Some(c)) = (known.get(i), conv(c)) else { return false };
            let Ok(prod) = poly_arith(&c, f, PolyOp::Mul) else { return false };
            let Ok(next) = poly_arith(&acc, &prod, PolyOp::Sub) else { return false };
            acc = next;
        }
        acc.is_zero()
    };
    for l in &cert.lemmas {
        let Some(p) = conv(&l.poly) else { return false };
        if !combination_is(&p, &mut l.uses.iter().map(|(i, c)| (*i, c)), &known) {
            return false;
        }
        known.push(p);
    }
    let Some(target) = conv(&cert.target) else { return false };
    combination_is(&target, &mut cert.cofactors.iter().enumerate(), &known)
}

/// Outcome of a degree-bounded certificate search.
#[derive(Clone, Debug)]
pub enum CertificateSearch {
    Found(MembershipCertificate),
    /// No certificate with cofactor degree ≤ `max_degree` exists over the domain.
    NotFound { max_degree: u32 },
    Inconclusive { max_degree: u32, reason: String },
}

impl CertificateSearch {
    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Self::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Coefficient rings in which the echelon search can run.
///
/// For fields `exact_div` always succeeds; over ℤ the Bézout step keeps the
/// pivot rows a basis of the row lattice, so integer solvability is decided
/// exactly.
pub trait EchelonDomain: Domain {
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    /// `(g, s, t)` with `g = s a + t b` generating `(a, b)`.
    fn bezout(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem);
    fn normalize_unit(&self, a: &Self::Elem) -> Self::Elem;
}

impl EchelonDomain for Rationals {
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a / b)
    }
    fn bezout(&self, a: &BigRational, _b: &BigRational) -> (BigRational, BigRational, BigRational) {
        (a.clone(), BigRational::one(), BigRational::zero())
    }
    fn normalize_unit(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

impl EchelonDomain for PrimeField {
    fn exact_div(&self, a: &u64, b: &u64) -> Option<u64> {
        use crate::exactalg::FieldDomain;
        Some(self.div(a, b))
    }
    fn bezout(&self, a: &u64, _b: &u64) -> (u64, u64, u64) {
        (*a, 1, 0)
    }
    fn normalize_unit(&self, a: &u64) -> u64 {
        use crate::exactalg::FieldDomain;
        self.inv(a)
    }
}

impl EchelonDomain for Integers {
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn bezout(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }
    fn normalize_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

/// Number of monomials of degree ≤ `deg` in `n` variables, saturating.
pub fn monomial_count(n: usize, deg: u32) -> usize {
    // C(n + deg, deg)
    let mut c: u128 = 1;
    for i in 1..=deg as u128 {
        c = c * (n as u128 + i) / i;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// Rows in the degree-`deg` linear system for `gens`.
pub fn macaulay_rows(nvars: usize, gens: usize, deg: u32) -> usize {
    monomial_count(nvars, deg).saturating_mul(gens)
}

type SparseRow<E> = Vec<(u32, E)>;

/// `a*x + b*y` for rows sorted by increasing column index.
fn row_axpy<D: Domain>(d: &D, a: &D::Elem, x: &[(u32, D::Elem)], b: &D::Elem, y: &[(u32, D::Elem)]) -> SparseRow<D::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, d.add(&d.mul(a, &p.1), &d.mul(b, &q.1)))
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, d.mul(a, &p.1))
            }
            (Some(p), None) => {
                i += 1;
                (p.0, d.mul(a, &p.1))
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, d.mul(b, &q.1))
            }
            (None, None) => unreachable!(),
        };
        if !d.is_zero(&v) {
            out.push((col, v));
        }
    }
    out
}

/// Row-lattice echelon form. Column 0 is the largest monomial. Every
/// stored row carries a trace `row = Σ c · entry[id]` over earlier
/// entries; entries below `originals` are the rows `m * f_i`.
struct Echelon<'a, D: EchelonDomain> {
    d: &'a D,
    pivots: HashMap<u32, usize>,
    rows: Vec<SparseRow<D::Elem>>,
    traces: Vec<Vec<(D::Elem, usize)>>,
}

impl<D: EchelonDomain> Echelon<'_, D> {
    fn store(&mut self, row: SparseRow<D::Elem>, trace: Vec<(D::Elem, usize)>) -> usize {
        self.rows.push(row);
        self.traces.push(trace);
        self.rows.len() - 1
    }

    fn scaled(&self, t: &[(D::Elem, usize)], c: &D::Elem) -> Vec<(D::Elem, usize)> {
        t.iter().map(|(a, k)| (self.d.mul(a, c), *k)).collect()
    }

    /// Reduce `row` (with trace) and keep it as a pivot if it survives.
    /// With `target` set the row is only reduced, never stored; returns
    /// whether it reached zero.
    fn insert(&mut self, mut row: SparseRow<D::Elem>, mut trace: Vec<(D::Elem, usize)>, target: bool) -> (bool, Vec<(D::Elem, usize)>) {
        let d = self.d;
        loop {
            let Some((col, lc)) = row.first().cloned() else { return (true, trace) };
            let Some(&pid) = self.pivots.get(&col) else {
                if target {
                    return (false, trace);
                }
                let u = d.normalize_unit(&lc);
                let row = row.iter().map(|(c, v)| (*c, d.mul(v, &u))).collect();
                let mut t = self.scaled(&trace, &u);
                compact(d, &mut t);
                let id = self.store(row, t);
                self.pivots.insert(col, id);
                return (false, Vec::new());
            };
            let pc = self.rows[pid][0].1.clone();
            if let Some(c) = d.exact_div(&lc, &pc) {
                let neg = d.neg(&c);
                row = row_axpy(d, &d.one(), &row, &neg, &self.rows[pid]);
                trace.push((neg, pid));
                continue;
            }
            if target {
                return (false, trace);
            }
            // Bézout step: the pivot becomes s·P + t·R, the row continues as
            // (lc/g)·P − (pc/g)·R whose leading entry cancels.
            let (g, s, t) = d.bezout(&pc, &lc);
            let a = d.exact_div(&lc, &g).expect("gcd divides");
            let b = d.neg(&d.exact_div(&pc, &g).expect("gcd divides"));
            let new_row = row_axpy(d, &s, &self.rows[pid], &t, &row);
            let mut new_trace = vec![(s, pid)];
            new_trace.extend(self.scaled(&trace, &t));
            let rest = row_axpy(d, &a, &self.rows[pid], &b, &row);
            let mut rest_trace = vec![(a, pid)];
            rest_trace.extend(self.scaled(&trace, &b));
            let u = d.normalize_unit(&new_row[0].1);
            let new_row = new_row.iter().map(|(c, v)| (*c, d.mul(v, &u))).collect();
            let mut nt = self.scaled(&new_trace, &u);
            compact(d, &mut nt);
            let id = self.store(new_row, nt);
            self.pivots.insert(col, id);
            row = rest;
            trace = rest_trace;
        }
    }
}

fn compact<D: Domain>(d: &D, t: &mut Vec<(D::Elem, usize)>) {
    t.sort_by_key(|x| x.1);
    let mut out: Vec<(D::Elem, usize)> = Vec::with_capacity(t.len());
    for (c, k) in t.drain(..) {
        match out.last_mut() {
            Some(last) if last.1 == k => last.0 = d.add(&last.0, &c),
            _ => out.push((c, k)),
        }
    }
    out.retain(|x| !d.is_zero(&x.0));
    *t = out;
}

/// Degree-bounded search by echelon reduction of the rows `m * f_i`,
/// `deg m ≤ max_degree`. Exact and complete for the given domain: `None`
/// means no certificate with cofactors of degree ≤ `max_degree` exists.
pub fn macaulay_search<D: EchelonDomain>(
    f: &Polynomial<D>,
    gens: &[Polynomial<D>],
    max_degree: u32,
    d: &D,
) -> Option<Vec<Polynomial<D>>> {
    let ring = f.ring().clone();
    let order = ring.order();
    let n = ring.nvars();
    let gens: Vec<Polynomial<D>> = gens.iter().map(|g| g.in_ring(&ring)).collect();
    let mults = Monomial::all_up_to_degree(n, max_degree);
    // Column index: every monomial that occurs, largest first.
    let mut cols: Vec<Monomial> = f.terms().iter().map(|t| t.0.clone()).collect();
    for g in &gens {
        for m in &mults {
            cols.extend(g.terms().iter().map(|t| t.0.mul(m)));
        }
    }
    cols.sort_by(|a, b| order.cmp(b, a));
    cols.dedup();
    let index: HashMap<&Monomial, u32> = cols.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let to_row = |p: &[(Monomial, D::Elem)], m: &Monomial| -> SparseRow<D::Elem> {
        let mut r: SparseRow<D::Elem> = p.iter().map(|(t, c)| (index[&t.mul(m)], c.clone())).collect();
        r.sort_by_key(|x| x.0);
        r
    };
    let one = Monomial::one(n);
    let mut labels: Vec<(usize, usize, &Monomial)> = Vec::new();
    let mut ech = Echelon { d, pivots: HashMap::new(), rows: Vec::new(), traces: Vec::new() };
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for m in &mults {
            let row = to_row(g.terms(), m);
            let id = ech.store(row.clone(), Vec::new());
            labels.push((id, i, m));
            ech.insert(row, vec![(d.one(), id)], false);
        }
    }
    let (zero, trace) = ech.insert(to_row(f.terms(), &one), Vec::new(), true);
    if !zero {
        return None;
    }
    // f + Σ trace = 0; push the weights back to the original rows.
    let mut weight: Vec<D::Elem> = vec![d.zero(); ech.rows.len()];
    for (c, k) in trace {
        weight[k] = d.sub(&weight[k], &c);
    }
    for k in (0..ech.rows.len()).rev() {
        if d.is_zero(&weight[k]) || ech.traces[k].is_empty() {
            continue;
        }
        let w = weight[k].clone();
        for (c, src) in &ech.traces[k] {
            weight[*src] = d.add(&weight[*src], &d.mul(&w, c));
        }
    }
    let mut cof: Vec<Vec<(Monomial, D::Elem)>> = vec![Vec::new(); gens.len()];
    for (k, i, m) in &labels {
        let k = *k;
        if !d.is_zero(&weight[k]) {
            cof[*i].push(((*m).clone(), weight[k].clone()));
        }
    }
    Some(cof.into_iter().map(|t| Polynomial::from_terms(&ring, d.clone(), t)).collect())
}
