//! Finite commutative rings built as towers over `Z/n`, plus ℚ.
//!
//! Elements of a [`FiniteRing`] are plain indices in `0..size`. A tower
//! level `B[v]/(m)` of degree `d` encodes `c_0 + c_1 v + ... + c_{d-1} v^{d-1}`
//! as `Σ c_i |B|^i`, so an element of `B` keeps its index when viewed in
//! the extension. Products use mixed radix over their factors.

use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::exactalg::{format_poly, parse_expr, Monomial, MonomialOrder, PolyRing, RatPoly, Rationals};

use super::RingError;

pub type Elem = u32;

/// Default bound on the number of ring elements.
pub const DEFAULT_SIZE_LIMIT: u64 = 1 << 20;
const TABLE_LIMIT: u32 = 1024;
const INVERSE_TABLE_LIMIT: u32 = 1 << 13;
const NO_INVERSE: u32 = u32::MAX;

/// 2×2 matrix `[a, b, c, d]`, row major.
pub type Mat2<E> = [E; 4];

/// Commutative ring with identity, as needed by the matrix code.
pub trait CommRing: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, text: &str) -> Result<Self::Elem, RingError>;
    fn describe(&self) -> String;
    /// All elements, or `None` for an infinite ring.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// Canonical representative of the class `{λM : λ a unit}`.
    fn proj_normal(&self, m: &Mat2<Self::Elem>) -> Mat2<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inverse(a).is_some()
    }

    fn is_finite(&self) -> bool {
        self.elements().is_some()
    }
}

/// A finite commutative ring given by a tower specification.
#[derive(Clone)]
pub struct FiniteRing(Arc<Node>);

struct Node {
    shape: Shape,
    size: u32,
    spec: String,
    /// Tower variables from the base upwards; empty for products.
    vars: Vec<String>,
    tables: Option<Tables>,
    inverses: OnceLock<Vec<u32>>,
    units: OnceLock<Vec<u32>>,
}

enum Shape {
    Zmod(u32),
    Quotient { base: FiniteRing, modulus: Vec<Elem> },
    Product(Vec<FiniteRing>),
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

type Coords = SmallVec<[u32; 8]>;

impl FiniteRing {
    pub fn zmod(n: u32) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::Malformed(format!("Z/{n} is not allowed (need n >= 2)")));
        }
        Ok(Self::finish(Shape::Zmod(n), n, format!("Z/{n}"), Vec::new()))
    }

    /// `base[var]/(var^d + m_{d-1} var^{d-1} + ... + m_0)` with `lower = [m_0, ..., m_{d-1}]`.
    pub fn quotient(base: &FiniteRing, var: &str, lower: Vec<Elem>, limit: u64) -> Result<Self, RingError> {
        if lower.is_empty() {
            return Err(RingError::Malformed("modulus must have degree at least 1".into()));
        }
        if matches!(base.0.shape, Shape::Product(_)) {
            return Err(RingError::Malformed("polynomial quotients of products are not supported".into()));
        }
        if base.0.vars.iter().any(|v| v == var) {
            return Err(RingError::Malformed(format!("tower variable `{var}` used twice")));
        }
        if lower.iter().any(|&c| c >= base.size()) {
            return Err(RingError::Malformed("modulus coefficient out of range".into()));
        }
        let size = check_size((base.size() as u128).pow(lower.len() as u32), limit)?;
        let mut vars = base.0.vars.clone();
        vars.push(var.to_string());
        let ring_vars: Vec<String> = vars.iter().rev().cloned().collect();
        let pr = PolyRing::new(ring_vars, MonomialOrder::Grevlex);
        let d = lower.len();
        let mut m = base.to_ratpoly_in(&pr, &base.one(), &top_exps(&vars, d));
        for (i, &c) in lower.iter().enumerate() {
            m = &m + &base.to_ratpoly_in(&pr, &c, &top_exps(&vars, i));
        }
        let spec = format!("{}[{var}]/({})", base.0.spec, format_poly(&m));
        Ok(Self::finish(Shape::Quotient { base: base.clone(), modulus: lower }, size, spec, vars))
    }

    pub fn product(factors: Vec<FiniteRing>, limit: u64) -> Result<Self, RingError> {
        let mut flat = Vec::new();
        for f in factors {
            match &f.0.shape {
                Shape::Product(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(f),
            }
        }
        if flat.is_empty() {
            return Err(RingError::Malformed("empty product".into()));
        }
        let size = check_size(flat.iter().map(|f| f.size() as u128).product(), limit)?;
        let spec = flat.iter().map(|f| f.0.spec.as_str()).collect::<Vec<_>>().join(" * ");
        Ok(Self::finish(Shape::Product(flat), size, spec, Vec::new()))
    }

    fn finish(shape: Shape, size: u32, spec: String, vars: Vec<String>) -> Self {
        let mut node = Node { shape, size, spec, vars, tables: None, inverses: OnceLock::new(), units: OnceLock::new() };
        if size <= TABLE_LIMIT {
            let r = FiniteRing(Arc::new(node));
            let n = size as usize;
            let mut add = Vec::with_capacity(n * n);
            let mut mul = Vec::with_capacity(n * n);
            for a in 0..size {
                for b in 0..size {
                    add.push(r.add_raw(a, b));
                    mul.push(r.mul_raw(a, b));
                }
            }
            node = Arc::into_inner(r.0).unwrap();
            node.tables = Some(Tables { add, mul });
        }
        FiniteRing(Arc::new(node))
    }

    /// Parse a ring specification such as `Z/2[t]/(t^2+t+1)[x]/(x^2)` or
    /// `Z/2 * Z/3`.
    pub fn parse(spec: &str) -> Result<Self, RingError> {
        Self::parse_with_limit(spec, DEFAULT_SIZE_LIMIT)
    }

    pub fn parse_with_limit(spec: &str, limit: u64) -> Result<Self, RingError> {
        let parts = split_top(spec, b'*');
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| parse_tower(p, limit)).collect::<Result<Vec<_>, _>>()?;
            return Self::product(factors, limit);
        }
        parse_tower(spec, limit)
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn spec(&self) -> &str {
        &self.0.spec
    }

    /// Tower variables from the base upwards.
    pub fn tower_vars(&self) -> &[String] {
        &self.0.vars
    }

    /// Factors of a product ring, or `None`.
    pub fn factors(&self) -> Option<&[FiniteRing]> {
        match &self.0.shape {
            Shape::Product(f) => Some(f),
            _ => None,
        }
    }

    /// Base ring of a quotient level, or `None`.
    pub fn base(&self) -> Option<&FiniteRing> {
        match &self.0.shape {
            Shape::Quotient { base, .. } => Some(base),
            _ => None,
        }
    }

    /// The class of the newest tower variable, or `None` for `Z/n` and products.
    pub fn generator(&self) -> Option<Elem> {
        self.base().map(|b| if self.degree() == 1 { self.reduce_linear() } else { b.size() })
    }

    fn reduce_linear(&self) -> Elem {
        // v = -m_0 when the modulus is linear.
        let Shape::Quotient { base, modulus } = &self.0.shape else { unreachable!() };
        base.neg_e(modulus[0])
    }

    fn degree(&self) -> usize {
        match &self.0.shape {
            Shape::Quotient { modulus, .. } => modulus.len(),
            _ => 0,
        }
    }

    pub fn zero_e(&self) -> Elem {
        0
    }

    pub fn one_e(&self) -> Elem {
        match &self.0.shape {
            Shape::Zmod(_) => 1,
            Shape::Quotient { base, .. } => base.one_e(),
            Shape::Product(fs) => self.from_coords(&fs.iter().map(|f| f.one_e()).collect::<Coords>()),
        }
    }

    pub fn add_e(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.size + b) as usize],
            None => self.add_raw(a, b),
        }
    }

    pub fn mul_e(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.size + b) as usize],
            None => self.mul_raw(a, b),
        }
    }

    pub fn neg_e(&self, a: Elem) -> Elem {
        match &self.0.shape {
            Shape::Zmod(n) => (n - a) % n,
            Shape::Quotient { base, .. } => self.from_coords(&self.coords(a).iter().map(|&c| base.neg_e(c)).collect::<Coords>()),
            Shape::Product(fs) => {
                self.from_coords(&self.coords(a).iter().zip(fs).map(|(&c, f)| f.neg_e(c)).collect::<Coords>())
            }
        }
    }

    pub fn sub_e(&self, a: Elem, b: Elem) -> Elem {
        self.add_e(a, self.neg_e(b))
    }

    pub fn from_int_e(&self, n: i64) -> Elem {
        match &self.0.shape {
            Shape::Zmod(m) => n.rem_euclid(*m as i64) as u32,
            Shape::Quotient { base, .. } => base.from_int_e(n),
            Shape::Product(fs) => self.from_coords(&fs.iter().map(|f| f.from_int_e(n)).collect::<Coords>()),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        let c = self.characteristic();
        let r = n.mod_floor(&BigInt::from(c)).to_i64().unwrap();
        self.from_int_e(r)
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> u64 {
        match &self.0.shape {
            Shape::Zmod(n) => *n as u64,
            Shape::Quotient { base, .. } => base.characteristic(),
            Shape::Product(fs) => fs.iter().fold(1u64, |acc, f| acc.lcm(&f.characteristic())),
        }
    }

    pub fn pow_e(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one_e();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_e(acc, base);
            }
            base = self.mul_e(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse_e(&self, a: Elem) -> Option<Elem> {
        if self.0.size <= INVERSE_TABLE_LIMIT {
            let t = self.0.inverses.get_or_init(|| self.inverse_table());
            let v = t[a as usize];
            return (v != NO_INVERSE).then_some(v);
        }
        self.inverse_direct(a)
    }

    fn inverse_direct(&self, a: Elem) -> Option<Elem> {
        match &self.0.shape {
            Shape::Zmod(n) => {
                let e = (a as i64).extended_gcd(&(*n as i64));
                (e.gcd == 1).then(|| e.x.rem_euclid(*n as i64) as u32)
            }
            Shape::Product(fs) => {
                let cs = self.coords(a);
                let mut out = Coords::new();
                for (c, f) in cs.iter().zip(fs) {
                    out.push(f.inverse_e(*c)?);
                }
                Some(self.from_coords(&out))
            }
            Shape::Quotient { .. } => {
                let one = self.one_e();
                (0..self.0.size).find(|&b| self.mul_e(a, b) == one)
            }
        }
    }

    fn inverse_table(&self) -> Vec<u32> {
        let n = self.0.size;
        match &self.0.shape {
            Shape::Quotient { .. } => {
                let one = self.one_e();
                let mut inv = vec![NO_INVERSE; n as usize];
                for a in 0..n {
                    if inv[a as usize] != NO_INVERSE {
                        continue;
                    }
                    for b in a..n {
                        if self.mul_e(a, b) == one {
                            inv[a as usize] = b;
                            inv[b as usize] = a;
                            break;
                        }
                    }
                }
                inv
            }
            _ => (0..n).map(|a| self.inverse_direct(a).unwrap_or(NO_INVERSE)).collect(),
        }
    }

    pub fn units_e(&self) -> &[Elem] {
        self.0.units.get_or_init(|| (0..self.0.size).filter(|&a| self.inverse_e(a).is_some()).collect())
    }

    /// Coordinates of a product element in each factor.
    pub fn project(&self, a: Elem) -> Vec<Elem> {
        match &self.0.shape {
            Shape::Product(_) => self.coords(a).to_vec(),
            _ => vec![a],
        }
    }

    /// Product element with the given factor coordinates.
    pub fn inject(&self, parts: &[Elem]) -> Elem {
        match &self.0.shape {
            Shape::Product(fs) => {
                assert_eq!(parts.len(), fs.len());
                self.from_coords(parts)
            }
            _ => parts[0],
        }
    }

    /// Coefficients `c_0..c_{d-1}` of a quotient-level element over its base.
    pub fn base_coords(&self, a: Elem) -> Vec<Elem> {
        match &self.0.shape {
            Shape::Quotient { .. } => self.coords(a).to_vec(),
            _ => vec![a],
        }
    }

    pub fn from_base_coords(&self, cs: &[Elem]) -> Elem {
        self.from_coords(cs)
    }

    fn coords(&self, mut a: Elem) -> Coords {
        match &self.0.shape {
            Shape::Zmod(_) => smallvec::smallvec![a],
            Shape::Quotient { base, modulus } => {
                let b = base.size();
                (0..modulus.len())
                    .map(|_| {
                        let c = a % b;
                        a /= b;
                        c
                    })
                    .collect()
            }
            Shape::Product(fs) => fs
                .iter()
                .map(|f| {
                    let c = a % f.size();
                    a /= f.size();
                    c
                })
                .collect(),
        }
    }

    fn from_coords(&self, cs: &[u32]) -> Elem {
        match &self.0.shape {
            Shape::Zmod(_) => cs[0],
            Shape::Quotient { base, .. } => cs.iter().rev().fold(0, |acc, &c| acc * base.size() + c),
            Shape::Product(fs) => cs.iter().zip(fs).rev().fold(0, |acc, (&c, f)| acc * f.size() + c),
        }
    }

    fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.shape {
            Shape::Zmod(n) => ((a as u64 + b as u64) % *n as u64) as u32,
            Shape::Quotient { base, .. } => {
                let (x, y) = (self.coords(a), self.coords(b));
                self.from_coords(&x.iter().zip(&y).map(|(&p, &q)| base.add_e(p, q)).collect::<Coords>())
            }
            Shape::Product(fs) => {
                let (x, y) = (self.coords(a), self.coords(b));
                self.from_coords(&x.iter().zip(&y).zip(fs).map(|((&p, &q), f)| f.add_e(p, q)).collect::<Coords>())
            }
        }
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.shape {
            Shape::Zmod(n) => ((a as u64 * b as u64) % *n as u64) as u32,
            Shape::Quotient { base, modulus } => {
                let d = modulus.len();
                let (x, y) = (self.coords(a), self.coords(b));
                let mut prod: SmallVec<[u32; 16]> = smallvec::smallvec![0; 2 * d - 1];
                for (i, &p) in x.iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    for (j, &q) in y.iter().enumerate() {
                        prod[i + j] = base.add_e(prod[i + j], base.mul_e(p, q));
                    }
                }
                for k in (d..2 * d - 1).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[k - d + i] = base.sub_e(prod[k - d + i], base.mul_e(c, m));
                    }
                }
                self.from_coords(&prod[..d])
            }
            Shape::Product(fs) => {
                let (x, y) = (self.coords(a), self.coords(b));
                self.from_coords(&x.iter().zip(&y).zip(fs).map(|((&p, &q), f)| f.mul_e(p, q)).collect::<Coords>())
            }
        }
    }

    /// Element as a polynomial over the tower variables (outermost first)
    /// with integer coefficients in `0..n`.
    fn to_ratpoly_in(&self, pr: &Arc<PolyRing>, a: &Elem, shift: &[u16]) -> RatPoly {
        let mut terms = Vec::new();
        self.expand(*a, &mut Vec::new(), &mut terms);
        let nv = pr.nvars();
        let terms = terms
            .into_iter()
            .map(|(exps, c)| {
                // `exps` runs from the base upwards; ring variables run outermost first.
                let mut e = vec![0u16; nv];
                for (k, &x) in exps.iter().enumerate() {
                    e[nv - 1 - k] = x;
                }
                for (slot, &s) in e.iter_mut().zip(shift) {
                    *slot += s;
                }
                (Monomial::from_exponents(&e), BigRational::from_integer(BigInt::from(c)))
            })
            .collect();
        RatPoly::from_terms(pr, Rationals, terms)
    }

    fn expand(&self, a: Elem, prefix: &mut Vec<u16>, out: &mut Vec<(Vec<u16>, u32)>) {
        match &self.0.shape {
            Shape::Zmod(_) => {
                if a != 0 {
                    out.push((prefix.clone(), a));
                }
            }
            Shape::Quotient { base, .. } => {
                for (i, c) in self.coords(a).into_iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut sub = Vec::new();
                    base.expand(c, &mut Vec::new(), &mut sub);
                    for (mut exps, k) in sub {
                        exps.resize(base.0.vars.len(), 0);
                        exps.push(i as u16);
                        let mut full = prefix.clone();
                        full.extend(exps);
                        out.push((full, k));
                    }
                }
            }
            Shape::Product(_) => unreachable!("products have no polynomial form"),
        }
    }

    fn poly_ring(&self) -> Arc<PolyRing> {
        PolyRing::new(self.0.vars.iter().rev().cloned(), MonomialOrder::Grevlex)
    }

    /// Evaluate a rational polynomial over the tower variables.
    fn eval_ratpoly(&self, p: &RatPoly, text: &str) -> Result<Elem, RingError> {
        let vars = &self.0.vars;
        let n = vars.len();
        let mut var_elems = Vec::with_capacity(n);
        for name in vars.iter().rev() {
            var_elems.push(self.tower_var(name));
        }
        let mut acc = self.zero_e();
        for (m, c) in p.terms() {
            let mut t = self.rational_e(c).ok_or_else(|| RingError::BadElement {
                text: text.to_string(),
                msg: format!("denominator of {c} is not invertible"),
            })?;
            for (i, &e) in m.exponents().iter().enumerate() {
                t = self.mul_e(t, self.pow_e(var_elems[i], e as u64));
            }
            acc = self.add_e(acc, t);
        }
        Ok(acc)
    }

    fn tower_var(&self, name: &str) -> Elem {
        let mut level = self;
        loop {
            if level.0.vars.last().map(String::as_str) == Some(name) {
                return level.generator().unwrap();
            }
            level = level.base().expect("tower variable exists");
        }
    }

    pub fn rational_e(&self, q: &BigRational) -> Option<Elem> {
        let num = self.from_bigint(q.numer());
        let den = self.inverse_e(self.from_bigint(q.denom()))?;
        Some(self.mul_e(num, den))
    }

    pub fn format(&self, a: Elem) -> String {
        match &self.0.shape {
            Shape::Zmod(_) => a.to_string(),
            Shape::Product(fs) => {
                let parts: Vec<String> = self.coords(a).iter().zip(fs).map(|(&c, f)| f.format(c)).collect();
                format!("({})", parts.join(", "))
            }
            Shape::Quotient { .. } => {
                let pr = self.poly_ring();
                format_poly(&self.to_ratpoly_in(&pr, &a, &[]))
            }
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Elem, RingError> {
        let bad = |msg: String| RingError::BadElement { text: text.to_string(), msg };
        match &self.0.shape {
            Shape::Product(fs) => {
                let t = text.trim();
                if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                    let parts = split_top(inner, b',');
                    if parts.len() > 1 {
                        if parts.len() != fs.len() {
                            return Err(bad(format!("expected {} components", fs.len())));
                        }
                        let cs = parts.iter().zip(fs).map(|(p, f)| f.parse_element(p)).collect::<Result<Coords, _>>()?;
                        return Ok(self.from_coords(&cs));
                    }
                }
                let pr = PolyRing::new(Vec::<String>::new(), MonomialOrder::Grevlex);
                let q = parse_expr(&pr, t).map_err(|e| bad(e.to_string()))?;
                let c = q.lead_coeff().cloned().unwrap_or_else(BigRational::zero);
                self.rational_e(&c).ok_or_else(|| bad("denominator not invertible".into()))
            }
            _ => {
                let pr = self.poly_ring();
                let q = parse_expr(&pr, text).map_err(|e| bad(e.to_string()))?;
                self.eval_ratpoly(&q, text)
            }
        }
    }

    pub fn element(&self, value: Elem) -> RingElement {
        RingElement { ring: self.clone(), value }
    }
}

fn check_size(size: u128, limit: u64) -> Result<u32, RingError> {
    let limit = limit.min(u32::MAX as u64 - 1);
    if size > limit as u128 {
        return Err(RingError::TooLarge { size, limit });
    }
    Ok(size as u32)
}

fn top_exps(vars: &[String], e: usize) -> Vec<u16> {
    let mut v = vec![0u16; vars.len()];
    v[0] = e as u16;
    v
}

/// Split at `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: u8) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &c) in s.as_bytes().iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_tower(spec: &str, limit: u64) -> Result<FiniteRing, RingError> {
    let s = spec.trim();
    let bad = |m: &str| RingError::Malformed(format!("`{spec}`: {m}"));
    let rest = s.strip_prefix("Z/").ok_or_else(|| bad("expected `Z/n`"))?;
    let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return Err(bad("expected a modulus after `Z/`"));
    }
    let n: u64 = rest[..digits].parse().map_err(|_| bad("modulus too large"))?;
    check_size(n as u128, limit)?;
    let mut ring = FiniteRing::zmod(n as u32)?;
    let mut rest = rest[digits..].trim_start();
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(|| bad("expected `[var]/(poly)`"))?;
        let close = body.find(']').ok_or_else(|| bad("missing `]`"))?;
        let var = body[..close].trim();
        let ok = var.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(bad(&format!("bad variable `{var}`")));
        }
        let after = body[close + 1..].trim_start();
        let after = after.strip_prefix('/').ok_or_else(|| bad("expected `/(`"))?.trim_start();
        let inner = after.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
        let mut depth = 1;
        let mut end = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let end = end.ok_or_else(|| bad("unbalanced parentheses"))?;
        let poly_text = &inner[..end];
        ring = adjoin_parsed(&ring, var, poly_text, limit)?;
        rest = inner[end + 1..].trim_start();
    }
    Ok(ring)
}

/// Reduce a modulus written over the base variables plus `var`.
fn adjoin_parsed(base: &FiniteRing, var: &str, text: &str, limit: u64) -> Result<FiniteRing, RingError> {
    let mut names: Vec<String> = vec![var.to_string()];
    names.extend(base.0.vars.iter().rev().cloned());
    if base.0.vars.iter().any(|v| v == var) {
        return Err(RingError::Malformed(format!("tower variable `{var}` used twice")));
    }
    let pr = PolyRing::new(names, MonomialOrder::Grevlex);
    let q = parse_expr(&pr, text).map_err(|e| RingError::Malformed(format!("modulus `{text}`: {e}")))?;
    let deg = q.terms().iter().map(|(m, _)| m.exponents()[0] as usize).max().unwrap_or(0);
    if deg == 0 {
        return Err(RingError::Malformed(format!("modulus `{text}` has degree 0 in `{var}`")));
    }
    let base_pr = base.poly_ring();
    let mut coeffs: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
    for (m, c) in q.terms() {
        let e = m.exponents();
        coeffs[e[0] as usize].push((Monomial::from_exponents(&e[1..]), c.clone()));
    }
    let mut vals = Vec::with_capacity(deg + 1);
    for terms in coeffs {
        let p = RatPoly::from_terms(&base_pr, Rationals, terms);
        vals.push(base.eval_ratpoly(&p, text)?);
    }
    if vals[deg] != base.one_e() {
        return Err(RingError::NonMonic(text.trim().to_string()));
    }
    vals.pop();
    FiniteRing::quotient(base, var, vals, limit)
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.0.spec)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.spec)
    }
}

/// An element together with its ring, for display and checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    pub ring: FiniteRing,
    pub value: Elem,
}

impl RingElement {
    pub fn inverse(&self) -> Option<RingElement> {
        self.ring.inverse_e(self.value).map(|v| self.ring.element(v))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(self.value))
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl CommRing for FiniteRing {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        0
    }
    fn one(&self) -> Elem {
        self.one_e()
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.add_e(*a, *b)
    }
    fn neg(&self, a: &Elem) -> Elem {
        self.neg_e(*a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_e(*a, *b)
    }
    fn from_int(&self, n: i64) -> Elem {
        self.from_int_e(n)
    }
    fn inverse(&self, a: &Elem) -> Option<Elem> {
        self.inverse_e(*a)
    }
    fn format_elem(&self, a: &Elem) -> String {
        self.format(*a)
    }
    fn parse_elem(&self, text: &str) -> Result<Elem, RingError> {
        self.parse_element(text)
    }
    fn describe(&self) -> String {
        self.0.spec.clone()
    }
    fn elements(&self) -> Option<Vec<Elem>> {
        Some((0..self.0.size).collect())
    }
    fn proj_normal(&self, m: &Mat2<Elem>) -> Mat2<Elem> {
        let mut best = *m;
        for &u in self.units_e() {
            let c = m.map(|x| self.mul_e(u, x));
            if c < best {
                best = c;
            }
        }
        best
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl CommRing for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse_elem(&self, text: &str) -> Result<BigRational, RingError> {
        let pr = PolyRing::new(Vec::<String>::new(), MonomialOrder::Grevlex);
        let q = parse_expr(&pr, text)
            .map_err(|e| RingError::BadElement { text: text.to_string(), msg: e.to_string() })?;
        Ok(q.lead_coeff().cloned().unwrap_or_else(BigRational::zero))
    }
    fn describe(&self) -> String {
        "Q".to_string()
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn proj_normal(&self, m: &Mat2<BigRational>) -> Mat2<BigRational> {
        match m.iter().find(|x| !x.is_zero()) {
            Some(p) => {
                let inv = p.recip();
                m.clone().map(|x| x * &inv)
            }
            None => m.clone(),
        }
    }
}

/// Either a finite ring or ℚ, as selected by a ring specification string
/// (`Q` or `QQ` for the rationals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyRing {
    Finite(FiniteRing),
    Rational(RationalField),
}

impl AnyRing {
    pub fn parse(spec: &str) -> Result<Self, RingError> {
        match spec.trim() {
            "Q" | "QQ" => Ok(AnyRing::Rational(RationalField)),
            s => Ok(AnyRing::Finite(FiniteRing::parse(s)?)),
        }
    }
}

/// Sign-aware helper used when reducing integer data modulo `m`.
pub(crate) fn bigint_mod(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    debug_assert!(!r.is_negative());
    r.to_u64().unwrap()
}
