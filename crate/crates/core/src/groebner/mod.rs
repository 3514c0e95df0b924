//! Gröbner bases over fields, ideal membership and checkable certificates.
//!
//! Membership over ℚ and 𝔽_p is decided by normal forms. Membership over ℤ
//! is answered through certificates: a rational non-member is a non-member
//! over ℤ, and a member is confirmed over ℤ only by an integral certificate.

mod certificate;
mod engine;
mod staged;

use std::collections::HashMap;

use num_traits::One;
use std::sync::{Arc, Mutex};

pub use certificate::{
    macaulay_rows, macaulay_search, monomial_count, verify_certificate, CertificateSearch, EchelonDomain,
    Lemma, MembershipCertificate,
};
pub use engine::{BudgetExhausted, ChainLift, GbOptions, GbStats, GroebnerBasis, Lift};
pub use staged::{certify_basis, staged_lift, StagedLimits};

use crate::exactalg::{
    AlgError, CoefficientDomain, Domain, FieldDomain, Integers, MonomialOrder, PolyRing, Polynomial, PrimeField, RatPoly,
    Rationals,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("polynomial is not in the ideal's ring")]
    RingMismatch,
    #[error("coefficients of the input have no image in {0}")]
    NoImage(CoefficientDomain),
    #[error("malformed certificate: {0}")]
    CertificateFormat(String),
    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
    #[error("{0}")]
    Io(String),
}

/// Reduced Gröbner basis of `gens` with respect to `order`.
pub fn buchberger<D: FieldDomain>(
    gens: &[Polynomial<D>],
    order: MonomialOrder,
    domain: D,
    opts: &GbOptions,
) -> Result<GroebnerBasis<D>, BudgetExhausted> {
    let ring = match gens.first() {
        Some(g) => g.ring().with_order(order),
        None => PolyRing::new(Vec::<String>::new(), order),
    };
    GroebnerBasis::compute_in(&ring, gens, domain, opts)
}

/// Remainder of `f` modulo a Gröbner basis.
pub fn normal_form<D: FieldDomain>(f: &Polynomial<D>, gb: &GroebnerBasis<D>) -> Result<Polynomial<D>, GroebnerError> {
    if f.ring().vars() != gb.ring().vars() {
        return Err(GroebnerError::RingMismatch);
    }
    Ok(gb.normal_form(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum MembershipStatus {
    Member,
    NonMember,
    Inconclusive,
}

impl std::fmt::Display for MembershipStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Member => "MEMBER",
            Self::NonMember => "NON_MEMBER",
            Self::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub basis_size: Option<usize>,
    pub degree_bound: Option<u32>,
    pub steps: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub domain: CoefficientDomain,
    pub certificate: Option<MembershipCertificate>,
    /// Nonzero remainder witnessing non-membership (rational representative).
    pub normal_form: Option<RatPoly>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct MembershipOptions {
    pub order: MonomialOrder,
    pub max_steps: u64,
    /// Attach a certificate to MEMBER verdicts over fields.
    pub certificate: bool,
    /// Highest cofactor degree tried by the echelon search over ℤ.
    pub max_degree: u32,
    /// Echelon systems with more rows than this are skipped.
    pub max_rows: usize,
    /// Flat cofactors larger than this are replaced by a chain of lemmas.
    pub max_lift_terms: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self { order: MonomialOrder::Grevlex, max_steps: 200_000_000, certificate: true, max_degree: 4, max_rows: 20_000, max_lift_terms: 100_000 }
    }
}

enum Cached {
    Q(Arc<GroebnerBasis<Rationals>>),
    P(Arc<GroebnerBasis<PrimeField>>),
}

/// An ideal of a polynomial ring with integer or rational generators.
pub struct Ideal {
    ring: Arc<PolyRing>,
    generators: Vec<RatPoly>,
    cache: Mutex<HashMap<(CoefficientDomain, MonomialOrder), Cached>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Self::new(&self.ring, self.generators.clone())
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ideal").field("vars", &self.ring.vars()).field("generators", &self.generators).finish()
    }
}

impl Ideal {
    /// Zero generators are dropped; no generators means the zero ideal.
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<RatPoly>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).map(|g| g.in_ring(ring)).collect();
        Self { ring: ring.clone(), generators, cache: Mutex::new(HashMap::new()) }
    }

    pub fn from_integer(ring: &Arc<PolyRing>, generators: &[Polynomial<Integers>]) -> Self {
        Self::new(ring, generators.iter().map(|g| g.to_rationals()).collect())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[RatPoly] {
        &self.generators
    }

    fn check(&self, f: &RatPoly) -> Result<(), GroebnerError> {
        if f.ring().vars() != self.ring.vars() {
            return Err(GroebnerError::RingMismatch);
        }
        Ok(())
    }

    /// Gröbner basis over ℚ, cached per order.
    pub fn basis_qq(&self, order: MonomialOrder, track: bool, max_steps: u64) -> Result<Arc<GroebnerBasis<Rationals>>, BudgetExhausted> {
        let key = (CoefficientDomain::Rationals, order);
        if let Some(Cached::Q(gb)) = self.cache.lock().unwrap().get(&key) {
            if gb.is_traced() || !track {
                return Ok(gb.clone());
            }
        }
        let ring = self.ring.with_order(order);
        let gb = Arc::new(GroebnerBasis::compute_in(&ring, &self.generators, Rationals, &GbOptions { max_steps, track })?);
        self.cache.lock().unwrap().insert(key, Cached::Q(gb.clone()));
        Ok(gb)
    }

    /// Gröbner basis over 𝔽_p, cached per order.
    pub fn basis_fp(
        &self,
        field: PrimeField,
        order: MonomialOrder,
        track: bool,
        max_steps: u64,
    ) -> Result<Arc<GroebnerBasis<PrimeField>>, GroebnerError> {
        let key = (field.kind(), order);
        if let Some(Cached::P(gb)) = self.cache.lock().unwrap().get(&key) {
            if gb.is_traced() || !track {
                return Ok(gb.clone());
            }
        }
        let ring = self.ring.with_order(order);
        let gens = self
            .generators
            .iter()
            .map(|g| g.map_domain(&field).ok_or(GroebnerError::NoImage(field.kind())))
            .collect::<Result<Vec<_>, _>>()?;
        let gb = Arc::new(GroebnerBasis::compute_in(&ring, &gens, field, &GbOptions { max_steps, track })?);
        self.cache.lock().unwrap().insert(key, Cached::P(gb.clone()));
        Ok(gb)
    }

    /// Whether the ideal contains 1 over ℚ.
    pub fn is_unit_qq(&self, opts: &MembershipOptions) -> Result<bool, BudgetExhausted> {
        Ok(self.basis_qq(opts.order, false, opts.max_steps)?.is_unit_ideal())
    }

    pub fn is_member(&self, f: &RatPoly, domain: CoefficientDomain, opts: &MembershipOptions) -> Result<MembershipVerdict, GroebnerError> {
        is_member(f, self, domain, opts)
    }

    pub fn certificate_search(&self, f: &RatPoly, max_degree: u32, domain: CoefficientDomain, opts: &MembershipOptions) -> CertificateSearch {
        search_impl(f, self, max_degree, domain, opts)
    }
}

fn inconclusive(domain: CoefficientDomain, diagnostics: Diagnostics) -> MembershipVerdict {
    MembershipVerdict { status: MembershipStatus::Inconclusive, domain, certificate: None, normal_form: None, diagnostics }
}

/// Decide `f ∈ I` over `domain`.
pub fn is_member(f: &RatPoly, ideal: &Ideal, domain: CoefficientDomain, opts: &MembershipOptions) -> Result<MembershipVerdict, GroebnerError> {
    ideal.check(f)?;
    let f = f.in_ring(ideal.ring());
    match domain {
        CoefficientDomain::Rationals => Ok(member_qq(&f, ideal, opts)),
        CoefficientDomain::PrimeField(p) => {
            let field = PrimeField::new(p)?;
            let fp = f.map_domain(&field).ok_or(GroebnerError::NoImage(domain))?;
            let gb = match ideal.basis_fp(field, opts.order, opts.certificate, opts.max_steps) {
                Ok(gb) => gb,
                Err(GroebnerError::Budget(e)) => {
                    return Ok(inconclusive(
                        domain,
                        Diagnostics { basis_size: Some(e.basis_size), steps: e.budget, note: Some(e.to_string()), ..Default::default() },
                    ))
                }
                Err(e) => return Err(e),
            };
            Ok(field_verdict(&fp, &f, ideal, &gb, domain, opts))
        }
        CoefficientDomain::Integers => Ok(member_zz(&f, ideal, opts)),
    }
}

fn field_verdict<D: FieldDomain>(
    f: &Polynomial<D>,
    f_q: &RatPoly,
    ideal: &Ideal,
    gb: &GroebnerBasis<D>,
    domain: CoefficientDomain,
    opts: &MembershipOptions,
) -> MembershipVerdict {
    let nf = gb.normal_form(f);
    let mut diagnostics =
        Diagnostics { basis_size: Some(gb.basis().len()), steps: gb.stats().steps, ..Default::default() };
    if !nf.is_zero() {
        return MembershipVerdict {
            status: MembershipStatus::NonMember,
            domain,
            certificate: None,
            normal_form: Some(nf.to_rationals().in_ring(ideal.ring())),
            diagnostics,
        };
    }
    let certificate = if opts.certificate {
        gb.lift_with_budget(f, opts.max_lift_terms).map(|lift| certificate_from_lift(lift, domain, f_q, ideal))
    } else {
        None
    };
    diagnostics.degree_bound = certificate.as_ref().map(|c| c.degree());
    MembershipVerdict { status: MembershipStatus::Member, domain, certificate, normal_form: None, diagnostics }
}

fn certificate_from_lift<D: FieldDomain>(lift: Lift<D>, domain: CoefficientDomain, f: &RatPoly, ideal: &Ideal) -> MembershipCertificate {
    let ring = ideal.ring();
    let q = |p: &Polynomial<D>| p.to_rationals().in_ring(ring);
    match lift {
        Lift::Flat(cof) => MembershipCertificate::flat(domain, f.clone(), ideal.generators().to_vec(), cof.iter().map(q).collect()),
        Lift::Chain(chain) => MembershipCertificate {
            domain,
            target: f.clone(),
            generators: ideal.generators().to_vec(),
            lemmas: chain
                .lemmas
                .iter()
                .map(|(p, uses)| Lemma { poly: q(p), uses: uses.iter().map(|(i, c)| (*i, q(c))).collect() })
                .collect(),
            cofactors: chain.cofactors.iter().map(q).collect(),
        },
    }
}

fn member_qq(f: &RatPoly, ideal: &Ideal, opts: &MembershipOptions) -> MembershipVerdict {
    let domain = CoefficientDomain::Rationals;
    if ideal.generators().is_empty() {
        return zero_ideal_verdict(f, domain);
    }
    match ideal.basis_qq(opts.order, opts.certificate, opts.max_steps) {
        Ok(gb) => field_verdict(f, f, ideal, &gb, domain, opts),
        Err(e) => inconclusive(domain, Diagnostics { basis_size: Some(e.basis_size), steps: e.budget, note: Some(e.to_string()), ..Default::default() }),
    }
}

fn zero_ideal_verdict(f: &RatPoly, domain: CoefficientDomain) -> MembershipVerdict {
    let member = f.is_zero();
    MembershipVerdict {
        status: if member { MembershipStatus::Member } else { MembershipStatus::NonMember },
        domain,
        certificate: member.then(|| MembershipCertificate::flat(domain, f.clone(), vec![], vec![])),
        normal_form: (!member).then(|| f.clone()),
        diagnostics: Diagnostics::default(),
    }
}

fn member_zz(f: &RatPoly, ideal: &Ideal, opts: &MembershipOptions) -> MembershipVerdict {
    let domain = CoefficientDomain::Integers;
    if !f.is_integral() || !ideal.generators().iter().all(|g| g.is_integral()) {
        return inconclusive(domain, Diagnostics { note: Some("non-integral input".into()), ..Default::default() });
    }
    let mut q_opts = opts.clone();
    q_opts.certificate = true;
    let q = member_qq(f, ideal, &q_opts);
    match q.status {
        MembershipStatus::NonMember => MembershipVerdict {
            domain,
            diagnostics: Diagnostics { note: Some("not a member over ℚ, hence not over ℤ".into()), ..q.diagnostics },
            ..q
        },
        MembershipStatus::Inconclusive => MembershipVerdict { domain, ..q },
        MembershipStatus::Member => {
            let scaled = q.certificate.as_ref().and_then(|c| c.integral_multiple());
            if let Some((n, cert)) = &scaled {
                if n.is_one() {
                    return MembershipVerdict {
                        status: MembershipStatus::Member,
                        domain,
                        diagnostics: Diagnostics { degree_bound: Some(cert.degree()), ..q.diagnostics },
                        certificate: Some(cert.clone()),
                        normal_form: None,
                    };
                }
            }
            let search = search_impl(f, ideal, opts.max_degree, domain, opts);
            match search {
                CertificateSearch::Found(cert) => MembershipVerdict {
                    status: MembershipStatus::Member,
                    domain,
                    diagnostics: Diagnostics { degree_bound: Some(cert.degree()), ..q.diagnostics },
                    certificate: Some(cert),
                    normal_form: None,
                },
                CertificateSearch::NotFound { max_degree } | CertificateSearch::Inconclusive { max_degree, .. } => {
                    let mut note = match &search {
                        CertificateSearch::Inconclusive { reason, .. } => reason.clone(),
                        _ => format!("member over ℚ; no integral certificate with cofactor degree ≤ {max_degree}"),
                    };
                    if let Some((n, _)) = scaled.filter(|_| !note.contains("clears only")) {
                        note = format!("{note}; the rational certificate clears only to {n}·f");
                    }
                    inconclusive(domain, Diagnostics { degree_bound: Some(max_degree), note: Some(note), ..q.diagnostics })
                }
            }
        }
    }
}

/// Search for a certificate of `f` over `gens` with cofactor degree ≤ `max_degree`.
pub fn certificate_search(
    f: &RatPoly,
    gens: &[RatPoly],
    max_degree: u32,
    domain: CoefficientDomain,
    opts: &MembershipOptions,
) -> CertificateSearch {
    let ideal = Ideal::new(f.ring(), gens.to_vec());
    search_impl(f, &ideal, max_degree, domain, opts)
}

fn search_impl(f: &RatPoly, ideal: &Ideal, max_degree: u32, domain: CoefficientDomain, opts: &MembershipOptions) -> CertificateSearch {
    let gens = ideal.generators();
    let ring = ideal.ring().with_order(opts.order);
    let f = f.in_ring(&ring);
    let found = |cof: Vec<RatPoly>| {
        CertificateSearch::Found(MembershipCertificate::flat(
            domain,
            f.in_ring(ideal.ring()),
            gens.to_vec(),
            cof.into_iter().map(|c| c.in_ring(ideal.ring())).collect(),
        ))
    };
    if f.is_zero() {
        return found(vec![RatPoly::zero(&ring, Rationals); gens.len()]);
    }
    let small = macaulay_rows(ring.nvars(), gens.len(), max_degree) <= opts.max_rows;
    let gens_r: Vec<RatPoly> = gens.iter().map(|g| g.in_ring(&ring)).collect();
    // The rational route: a traced basis, its lifted certificate.
    let lifted = || {
        let mut q_opts = opts.clone();
        q_opts.certificate = true;
        member_qq(&f.in_ring(ideal.ring()), ideal, &q_opts)
    };
    let too_large = |what: &str, deg: u32| {
        CertificateSearch::Inconclusive {
            max_degree,
            reason: format!("{what} of degree {deg} exceeds the bound; echelon system too large"),
        }
    };
    match domain {
        CoefficientDomain::Integers => {
            let (Some(fz), Some(gz)) = (f.to_integers(), gens_r.iter().map(|g| g.to_integers()).collect::<Option<Vec<_>>>())
            else {
                return CertificateSearch::Inconclusive { max_degree, reason: "non-integral input".into() };
            };
            let q = lifted();
            match q.status {
                MembershipStatus::NonMember => return CertificateSearch::NotFound { max_degree },
                MembershipStatus::Inconclusive if !small => {
                    return CertificateSearch::Inconclusive { max_degree, reason: q.diagnostics.note.unwrap_or_default() }
                }
                _ => {}
            }
            let scaled = q.certificate.as_ref().and_then(|c| c.integral_multiple());
            if let Some((n, cert)) = &scaled {
                if n.is_one() && cert.degree() <= max_degree {
                    return CertificateSearch::Found(cert.clone());
                }
            }
            if small {
                return match macaulay_search(&fz, &gz, max_degree, &Integers) {
                    Some(cof) => found(cof.iter().map(|c| c.to_rationals()).collect()),
                    None => CertificateSearch::NotFound { max_degree },
                };
            }
            match scaled {
                Some((n, cert)) if !n.is_one() => CertificateSearch::Inconclusive {
                    max_degree,
                    reason: format!(
                        "rational certificate of degree {} clears only to {n}·f; echelon system too large",
                        cert.degree()
                    ),
                },
                Some((_, cert)) => too_large("integral certificate", cert.degree()),
                None => CertificateSearch::Inconclusive { max_degree, reason: "no rational certificate".into() },
            }
        }
        CoefficientDomain::Rationals => {
            if small {
                return match macaulay_search(&f, &gens_r, max_degree, &Rationals) {
                    Some(cof) => found(cof),
                    None => CertificateSearch::NotFound { max_degree },
                };
            }
            let q = lifted();
            match (q.status, q.certificate) {
                (MembershipStatus::NonMember, _) => CertificateSearch::NotFound { max_degree },
                (MembershipStatus::Member, Some(cert)) if cert.degree() <= max_degree => CertificateSearch::Found(cert),
                (MembershipStatus::Member, Some(cert)) => too_large("rational certificate", cert.degree()),
                _ => CertificateSearch::Inconclusive { max_degree, reason: q.diagnostics.note.unwrap_or_default() },
            }
        }
        CoefficientDomain::PrimeField(p) => {
            let Ok(field) = PrimeField::new(p) else {
                return CertificateSearch::Inconclusive { max_degree, reason: format!("{p} is not prime") };
            };
            let (Some(ff), Some(gf)) = (f.map_domain(&field), gens_r.iter().map(|g| g.map_domain(&field)).collect::<Option<Vec<_>>>())
            else {
                return CertificateSearch::Inconclusive { max_degree, reason: "input has no image mod p".into() };
            };
            if !small {
                return CertificateSearch::Inconclusive { max_degree, reason: "echelon system too large".into() };
            }
            match macaulay_search(&ff, &gf, max_degree, &field) {
                Some(cof) => found(cof.iter().map(|c| c.to_rationals()).collect()),
                None => CertificateSearch::NotFound { max_degree },
            }
        }
    }
}
