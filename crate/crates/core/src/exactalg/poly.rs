use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::domain::{Domain, FieldDomain, Integers, Rationals};
use super::monomial::{Monomial, MonomialOrder};
use super::AlgError;

/// Variable names plus the active term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Self { vars: vars.into_iter().map(Into::into).collect(), order })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Self { vars: self.vars.clone(), order })
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Sparse multivariate polynomial with terms sorted in descending term order.
#[derive(Clone)]
pub struct Polynomial<D: Domain> {
    ring: Arc<PolyRing>,
    domain: D,
    terms: Vec<(Monomial, D::Elem)>,
}

pub type IntPoly = Polynomial<Integers>;
pub type RatPoly = Polynomial<Rationals>;

impl<D: Domain> Polynomial<D> {
    pub fn zero(ring: &Arc<PolyRing>, domain: D) -> Self {
        Self { ring: ring.clone(), domain, terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, domain: D, c: D::Elem) -> Self {
        let mut p = Self::zero(ring, domain);
        if !p.domain.is_zero(&c) {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn one(ring: &Arc<PolyRing>, domain: D) -> Self {
        let c = domain.one();
        Self::constant(ring, domain, c)
    }

    pub fn from_i64(ring: &Arc<PolyRing>, domain: D, n: i64) -> Self {
        let c = domain.from_i64(n);
        Self::constant(ring, domain, c)
    }

    pub fn var(ring: &Arc<PolyRing>, domain: D, i: usize) -> Self {
        let c = domain.one();
        Self::monomial(ring, domain, Monomial::var(ring.nvars(), i), c)
    }

    /// Variable by name; panics if undeclared.
    pub fn var_named(ring: &Arc<PolyRing>, domain: D, name: &str) -> Self {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("no variable `{name}`"));
        Self::var(ring, domain, i)
    }

    pub fn monomial(ring: &Arc<PolyRing>, domain: D, m: Monomial, c: D::Elem) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length");
        let mut p = Self::zero(ring, domain);
        if !p.domain.is_zero(&c) {
            p.terms.push((m, c));
        }
        p
    }

    /// Build from arbitrary terms: sorts, merges duplicates and drops zeros.
    pub fn from_terms(ring: &Arc<PolyRing>, domain: D, mut terms: Vec<(Monomial, D::Elem)>) -> Self {
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, D::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length");
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = domain.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if domain.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if domain.is_zero(lc) {
                out.pop();
            }
        }
        Self { ring: ring.clone(), domain, terms: out }
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, domain: D, terms: Vec<(Monomial, D::Elem)>) -> Self {
        Self { ring: ring.clone(), domain, terms }
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

    pub fn terms(&self) -> &[(Monomial, D::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, D::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Nonzero constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit_constant() && self.domain.is_one(&self.terms[0].1)
    }

    pub fn lead_term(&self) -> Option<&(Monomial, D::Elem)> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<&D::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coeff_of(&self, m: &Monomial) -> D::Elem {
        let order = self.order();
        match self.terms.binary_search_by(|(t, _)| order.cmp(m, t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.domain.zero(),
        }
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring.vars == other.ring.vars)
            && self.domain == other.domain
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgError> {
        if self.ring.vars != other.ring.vars {
            return Err(AlgError::RingMismatch(format!(
                "variables [{}] vs [{}]",
                self.ring.vars.join(" "),
                other.ring.vars.join(" ")
            )));
        }
        if self.domain != other.domain {
            return Err(AlgError::RingMismatch(format!(
                "domains {} vs {}",
                self.domain.kind(),
                other.domain.kind()
            )));
        }
        Ok(())
    }

    /// Re-sort under a different order; variables stay the same.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if order == self.order() {
            return self.clone();
        }
        let ring = self.ring.with_order(order);
        Self::from_terms(&ring, self.domain.clone(), self.terms.clone())
    }

    /// Move into another ring over the same variables (typically the same
    /// ring under a different `Arc`, or a different order).
    pub fn in_ring(&self, ring: &Arc<PolyRing>) -> Self {
        assert_eq!(ring.vars, self.ring.vars, "in_ring needs identical variables");
        if ring.order() == self.order() {
            return Self { ring: ring.clone(), domain: self.domain.clone(), terms: self.terms.clone() };
        }
        Self::from_terms(ring, self.domain.clone(), self.terms.clone())
    }

    /// Map each variable `i` to variable `var_map[i]` of `target`.
    pub fn embed(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, &x) in m.exponents().iter().enumerate() {
                    e.exps_mut()[var_map[i]] += x;
                }
                (e, c.clone())
            })
            .collect();
        Self::from_terms(target, self.domain.clone(), terms)
    }

    /// Embed by matching variable names; fails if a used variable is absent.
    pub fn embed_by_name(&self, target: &Arc<PolyRing>) -> Result<Self, AlgError> {
        let map = self
            .ring
            .vars
            .iter()
            .map(|v| target.var_index(v).ok_or_else(|| AlgError::UnknownVariable(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.embed(target, &map))
    }

    /// Coefficient-wise image in another domain; `None` if some coefficient
    /// has no image.
    pub fn map_domain<E: Domain>(&self, target: &E) -> Option<Polynomial<E>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let q = self.domain.to_rational(c);
            let v = target.from_rational(&q)?;
            if !target.is_zero(&v) {
                terms.push((m.clone(), v));
            }
        }
        Some(Polynomial { ring: self.ring.clone(), domain: target.clone(), terms })
    }

    pub fn to_rationals(&self) -> RatPoly {
        self.map_domain(&Rationals).expect("every coefficient has a rational image")
    }

    pub fn scale(&self, c: &D::Elem) -> Self {
        if self.domain.is_zero(c) {
            return Self::zero(&self.ring, self.domain.clone());
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, a)| {
                let v = self.domain.mul(a, c);
                (!self.domain.is_zero(&v)).then(|| (m.clone(), v))
            })
            .collect();
        Self { ring: self.ring.clone(), domain: self.domain.clone(), terms }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &D::Elem) -> Self {
        if self.domain.is_zero(c) {
            return Self::zero(&self.ring, self.domain.clone());
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(t, a)| {
                let v = self.domain.mul(a, c);
                (!self.domain.is_zero(&v)).then(|| (t.mul(m), v))
            })
            .collect();
        Self { ring: self.ring.clone(), domain: self.domain.clone(), terms }
    }

    /// `self - c * m * g`, one merge pass.
    pub fn sub_mul_term(&self, c: &D::Elem, m: &Monomial, g: &Self) -> Self {
        let order = self.order();
        let d = &self.domain;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| g.terms[k].0.mul(m);
        let mut gj = if g.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || gj.is_some() {
            let ord = match (&gj, self.terms.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(b), Some((a, _))) => order.cmp(a, b),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let v = d.neg(&d.mul(c, &g.terms[j].1));
                    if !d.is_zero(&v) {
                        out.push((gj.take().unwrap(), v));
                    }
                    j += 1;
                    gj = (j < g.terms.len()).then(|| shifted(j));
                }
                Ordering::Equal => {
                    let v = d.sub(&self.terms[i].1, &d.mul(c, &g.terms[j].1));
                    if !d.is_zero(&v) {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                    gj = (j < g.terms.len()).then(|| shifted(j));
                }
            }
        }
        Self { ring: self.ring.clone(), domain: self.domain.clone(), terms: out }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let order = self.order();
        let d = &self.domain;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let other_c = |c: &D::Elem| if negate_other { d.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ca) = &self.terms[i];
            let (b, cb) = &other.terms[j];
            match order.cmp(a, b) {
                Ordering::Greater => {
                    out.push((a.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.clone(), other_c(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = if negate_other { d.sub(ca, cb) } else { d.add(ca, cb) };
                    if !d.is_zero(&v) {
                        out.push((a.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), other_c(c))));
        Self { ring: self.ring.clone(), domain: self.domain.clone(), terms: out }
    }

    fn mul_poly(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring, self.domain.clone());
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_term(m, c);
        }
        let d = &self.domain;
        let mut prods = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                prods.push((ma.mul(mb), d.mul(ca, cb)));
            }
        }
        Self::from_terms(&self.ring, self.domain.clone(), prods)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_ring(other)?;
        Ok(self.merge(&other.in_ring(&self.ring), false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_ring(other)?;
        Ok(self.merge(&other.in_ring(&self.ring), true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_ring(other)?;
        Ok(self.mul_poly(&other.in_ring(&self.ring)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.ring, self.domain.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at a point given by a closure over the coefficient domain.
    pub fn eval_with<T, R>(&self, ring: &R, coeff: impl Fn(&D::Elem) -> T, point: &[T]) -> T
    where
        R: EvalRing<T>,
        T: Clone,
    {
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = ring.mul(&t, &point[i]);
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

/// Minimal ring interface for [`Polynomial::eval_with`].
pub trait EvalRing<T> {
    fn zero(&self) -> T;
    fn add(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
}

impl<D: FieldDomain> Polynomial<D> {
    /// Scale so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if self.domain.is_one(c) => self.clone(),
            Some(c) => {
                let inv = self.domain.inv(c);
                self.scale(&inv)
            }
        }
    }

    /// Multivariate division: `f = Σ q_i d_i + r` where no term of `r` is
    /// divisible by any leading monomial of the divisors. The first divisor
    /// (in list order) whose leading monomial divides is used.
    pub fn divmod(&self, divisors: &[Self]) -> Result<(Vec<Self>, Self), AlgError> {
        for d in divisors {
            self.check_ring(d)?;
            if d.is_zero() {
                return Err(AlgError::ZeroDivisor);
            }
        }
        let divisors: Vec<Self> = divisors.iter().map(|d| d.in_ring(&self.ring)).collect();
        let dom = &self.domain;
        let mut quotients = vec![Self::zero(&self.ring, dom.clone()); divisors.len()];
        let mut rem_terms = Vec::new();
        let mut p = self.clone();
        while let Some((lm, lc)) = p.lead_term().cloned() {
            let hit = divisors.iter().enumerate().find_map(|(k, d)| {
                let (dm, dc) = d.lead_term().unwrap();
                dm.quotient_of(&lm).map(|q| (k, q, dom.div(&lc, dc)))
            });
            match hit {
                Some((k, q, c)) => {
                    p = p.sub_mul_term(&c, &q, &divisors[k]);
                    quotients[k] = &quotients[k] + &Self::monomial(&self.ring, dom.clone(), q, c);
                }
                None => {
                    rem_terms.push((lm, lc));
                    p.terms.remove(0);
                }
            }
        }
        Ok((quotients, Self::from_sorted_terms(&self.ring, dom.clone(), rem_terms)))
    }
}

impl Polynomial<Integers> {
    /// Gcd of the coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
        }
        if let Some(lc) = self.lead_coeff() {
            if lc.is_negative() {
                g = -g;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a / &c)).collect();
        Self::from_sorted_terms(&self.ring, Integers, terms)
    }
}

impl Polynomial<Rationals> {
    /// Clear denominators: returns the integer polynomial `l * self` with
    /// `l` the lcm of the denominators.
    pub fn clear_denominators(&self) -> IntPoly {
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), (c * num_rational::BigRational::from_integer(l.clone())).to_integer()))
            .collect();
        Polynomial::from_sorted_terms(&self.ring, Integers, terms)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<IntPoly> {
        self.map_domain(&Integers)
    }
}

/// Checked arithmetic on two polynomials in the same ring.
pub fn poly_arith<D: Domain>(f: &Polynomial<D>, g: &Polynomial<D>, op: PolyOp) -> Result<Polynomial<D>, AlgError> {
    match op {
        PolyOp::Add => f.try_add(g),
        PolyOp::Sub => f.try_sub(g),
        PolyOp::Mul => f.try_mul(g),
    }
}

impl<D: Domain> PartialEq for Polynomial<D> {
    fn eq(&self, other: &Self) -> bool {
        if self.ring.vars != other.ring.vars || self.domain != other.domain {
            return false;
        }
        if self.order() == other.order() {
            self.terms == other.terms
        } else {
            self.terms == other.in_ring(&self.ring).terms
        }
    }
}

impl<D: Domain> fmt::Debug for Polynomial<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<D: Domain> fmt::Display for Polynomial<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<D: Domain> $tr<&Polynomial<D>> for &Polynomial<D> {
            type Output = Polynomial<D>;
            fn $method(self, rhs: &Polynomial<D>) -> Polynomial<D> {
                assert!(self.same_ring(rhs), "polynomial ring mismatch");
                let rhs = if rhs.order() == self.order() { std::borrow::Cow::Borrowed(rhs) } else { std::borrow::Cow::Owned(rhs.in_ring(&self.ring)) };
                $body(self, &*rhs)
            }
        }
        impl<D: Domain> $tr<Polynomial<D>> for Polynomial<D> {
            type Output = Polynomial<D>;
            fn $method(self, rhs: Polynomial<D>) -> Polynomial<D> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Polynomial<D>, b: &Polynomial<D>| a.merge(b, false));
forward_binop!(Sub, sub, |a: &Polynomial<D>, b: &Polynomial<D>| a.merge(b, true));
forward_binop!(Mul, mul, |a: &Polynomial<D>, b: &Polynomial<D>| a.mul_poly(b));

impl<D: Domain> Neg for &Polynomial<D> {
    type Output = Polynomial<D>;
    fn neg(self) -> Polynomial<D> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.domain.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), domain: self.domain.clone(), terms }
    }
}

impl<D: Domain> Neg for Polynomial<D> {
    type Output = Polynomial<D>;
    fn neg(self) -> Polynomial<D> {
        -&self
    }
}
