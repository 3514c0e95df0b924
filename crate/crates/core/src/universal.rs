//! Universal 2×2 representations of a finitely presented group.
//!
//! For a presentation `⟨g_1..g_n | r_1..r_m⟩` and `K ∈ {SL2, GL2, PSL2,
//! PGL2}` this builds the polynomial ring `S_K` over ℤ, the ideal `I_K` and
//! the generic matrices `p(g_i)`. A word `w` dies in every representation
//! into `K(R)` for every commutative ring `R` exactly when the entry
//! conditions of `p(w)` lie in `I_K`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::exactalg::{CoefficientDomain, Integers, IntPoly, MonomialOrder, PolyMatrix2, PolyRing, Polynomial, RatPoly};
use crate::groebner::{GroebnerError, Ideal, MembershipOptions, MembershipStatus, MembershipVerdict};
use crate::presentation::{Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KKind {
    SL2,
    GL2,
    PSL2,
    PGL2,
}

impl KKind {
    pub const ALL: [KKind; 4] = [KKind::SL2, KKind::GL2, KKind::PSL2, KKind::PGL2];

    pub fn is_projective(self) -> bool {
        matches!(self, KKind::PSL2 | KKind::PGL2)
    }

    /// Determinant must be 1 (as opposed to any unit).
    pub fn is_special(self) -> bool {
        matches!(self, KKind::SL2 | KKind::PSL2)
    }
}

impl fmt::Display for KKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KKind::SL2 => "SL2",
            KKind::GL2 => "GL2",
            KKind::PSL2 => "PSL2",
            KKind::PGL2 => "PGL2",
        })
    }
}

impl FromStr for KKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Ok(KKind::SL2),
            "gl2" => Ok(KKind::GL2),
            "psl2" => Ok(KKind::PSL2),
            "pgl2" => Ok(KKind::PGL2),
            _ => Err(format!("unknown group kind `{s}` (expected sl2, gl2, psl2 or pgl2)")),
        }
    }
}

/// `S_K`, `I_K` and the generic generator matrices.
#[derive(Clone, Debug)]
pub struct UniversalModel {
    presentation: Presentation,
    kind: KKind,
    ring: Arc<PolyRing>,
    generator_matrices: Vec<PolyMatrix2<Integers>>,
    inverse_matrices: Vec<PolyMatrix2<Integers>>,
    ideal_generators: Vec<IntPoly>,
    ideal: Ideal,
}

/// Default variable names: `g_a g_b g_c g_d` per generator `g`, then
/// `y_g`, then `lambda_j` per relator.
pub fn default_variable_names(p: &Presentation, kind: KKind) -> Vec<String> {
    let mut v = Vec::new();
    for g in p.generators() {
        for e in ["a", "b", "c", "d"] {
            v.push(format!("{g}_{e}"));
        }
    }
    if !kind.is_special() {
        for g in p.generators() {
            v.push(format!("y_{g}"));
        }
    }
    if kind.is_projective() {
        for j in 1..=p.relators().len() {
            v.push(format!("lambda_{j}"));
        }
    }
    v
}

/// Number of variables of `S_K`.
pub fn variable_count(p: &Presentation, kind: KKind) -> usize {
    let n = p.generator_count();
    4 * n + if kind.is_special() { 0 } else { n } + if kind.is_projective() { p.relators().len() } else { 0 }
}

impl UniversalModel {
    pub fn build(p: &Presentation, kind: KKind) -> Self {
        Self::build_with_names(p, kind, default_variable_names(p, kind)).expect("default names fit")
    }

    /// Same model with caller-chosen variable names (in the layout order).
    pub fn build_with_names(p: &Presentation, kind: KKind, names: Vec<String>) -> Result<Self, String> {
        let want = variable_count(p, kind);
        if names.len() != want {
            return Err(format!("expected {want} variable names, got {}", names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(format!("duplicate variable name `{n}`"));
            }
        }
        let ring = PolyRing::new(names, MonomialOrder::Grevlex);
        let n = p.generator_count();
        let var = |i: usize| Polynomial::var(&ring, Integers, i);
        let one = Polynomial::one(&ring, Integers);
        let generator_matrices: Vec<_> =
            (0..n).map(|g| PolyMatrix2::new(var(4 * g), var(4 * g + 1), var(4 * g + 2), var(4 * g + 3))).collect();
        let y = |g: usize| var(4 * n + g);
        let lambda_base = 4 * n + if kind.is_special() { 0 } else { n };
        let inverse_matrices = generator_matrices
            .iter()
            .enumerate()
            .map(|(g, m)| if kind.is_special() { m.adjugate() } else { m.adjugate().scale(&y(g)) })
            .collect();
        let mut model = Self {
            presentation: p.clone(),
            kind,
            ring: ring.clone(),
            generator_matrices,
            inverse_matrices,
            ideal_generators: Vec::new(),
            ideal: Ideal::new(&ring, vec![]),
        };
        let mut gens = Vec::new();
        for g in 0..n {
            let det = model.generator_matrices[g].det();
            gens.push(if kind.is_special() { &det - &one } else { &(&det * &y(g)) - &one });
        }
        if kind == KKind::PSL2 {
            for j in 0..p.relators().len() {
                let l = var(lambda_base + j);
                gens.push(&(&l * &l) - &one);
            }
        }
        for (j, r) in p.relators().iter().enumerate() {
            let m = model.eval_word(r);
            let target = if kind.is_projective() {
                PolyMatrix2::scalar(&var(lambda_base + j))
            } else {
                PolyMatrix2::identity(&ring, Integers)
            };
            gens.extend(m.sub(&target).entries);
        }
        model.ideal = Ideal::from_integer(&ring, &gens);
        model.ideal_generators = gens;
        Ok(model)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn kind(&self) -> KKind {
        self.kind
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generator_matrix(&self, g: usize) -> &PolyMatrix2<Integers> {
        &self.generator_matrices[g]
    }

    pub fn inverse_matrix(&self, g: usize) -> &PolyMatrix2<Integers> {
        &self.inverse_matrices[g]
    }

    /// Ideal generators in layout order: determinant relations, `λ² − 1`
    /// (PSL2 only), then the four entries of each relator condition.
    pub fn ideal_generators(&self) -> &[IntPoly] {
        &self.ideal_generators
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// `p(w)` as a product of generator and inverse matrices.
    pub fn eval_word(&self, w: &Word) -> PolyMatrix2<Integers> {
        let mut acc = PolyMatrix2::identity(&self.ring, Integers);
        for l in w.letters() {
            let m = if l.inverse { &self.inverse_matrices[l.generator] } else { &self.generator_matrices[l.generator] };
            acc = acc.mul(m);
        }
        acc
    }

    /// Polynomials that must lie in `I_K` for `w` to die: the entries of
    /// `p(w) − Id`, or for projective kinds `b`, `c` and `a − d`.
    pub fn triviality_conditions(&self, w: &Word) -> Vec<IntPoly> {
        let m = self.eval_word(w);
        let [a, b, c, d] = m.entries;
        if self.kind.is_projective() {
            vec![b, c, &a - &d]
        } else {
            let one = Polynomial::one(&self.ring, Integers);
            vec![&a - &one, b, c, &d - &one]
        }
    }

    pub fn test_triviality(&self, w: &Word, domain: CoefficientDomain, opts: &MembershipOptions) -> Result<TrivialityVerdict, GroebnerError> {
        test_triviality(self, w, domain, opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrivialityStatus {
    Trivial,
    Nontrivial,
    Inconclusive,
    DegenerateUnitIdeal,
}

impl fmt::Display for TrivialityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "TRIVIAL",
            Self::Nontrivial => "NONTRIVIAL",
            Self::Inconclusive => "INCONCLUSIVE",
            Self::DegenerateUnitIdeal => "DEGENERATE_UNIT_IDEAL",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TrivialityVerdict {
    pub status: TrivialityStatus,
    pub domain: CoefficientDomain,
    /// The tested polynomials, paired with their membership verdicts.
    pub entries: Vec<(RatPoly, MembershipVerdict)>,
}

/// Decide whether `w` is killed by the universal representation.
pub fn test_triviality(
    model: &UniversalModel,
    w: &Word,
    domain: CoefficientDomain,
    opts: &MembershipOptions,
) -> Result<TrivialityVerdict, GroebnerError> {
    let ideal = model.ideal();
    let one = RatPoly::one(model.ring(), crate::exactalg::Rationals);
    let unit = ideal.is_member(&one, domain, &MembershipOptions { certificate: false, ..opts.clone() })?;
    if unit.status == MembershipStatus::Member {
        return Ok(TrivialityVerdict { status: TrivialityStatus::DegenerateUnitIdeal, domain, entries: vec![(one, unit)] });
    }
    let mut entries = Vec::new();
    for c in model.triviality_conditions(w) {
        let c = c.to_rationals();
        let v = ideal.is_member(&c, domain, opts)?;
        entries.push((c, v));
    }
    let statuses: Vec<_> = entries.iter().map(|(_, v)| v.status).collect();
    let status = if statuses.contains(&MembershipStatus::NonMember) {
        TrivialityStatus::Nontrivial
    } else if statuses.iter().all(|s| *s == MembershipStatus::Member) {
        TrivialityStatus::Trivial
    } else {
        TrivialityStatus::Inconclusive
    };
    Ok(TrivialityVerdict { status, domain, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::verify_certificate;
    use crate::presentation::parse_presentation;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn ideal_sizes_follow_the_layout() {
        let m = UniversalModel::build(&pres("gens: a; rels: a^3;"), KKind::SL2);
        assert_eq!(m.ring().nvars(), 4);
        assert_eq!(m.ideal_generators().len(), 5);
        let m = UniversalModel::build(&pres("gens: a b; rels: a b a^-1 b^-1;"), KKind::PGL2);
        assert_eq!(m.ring().nvars(), 11);
        assert_eq!(m.ideal_generators().len(), 6);
        let m = UniversalModel::build(&pres("gens: a b; rels: a^2, b^2;"), KKind::PSL2);
        assert_eq!(m.ring().vars().last().unwrap(), "lambda_2");
        assert_eq!(m.ideal_generators().len(), 2 + 2 + 8);
    }

    #[test]
    fn words_evaluate_multiplicatively() {
        let p = pres("gens: a b;");
        let m = UniversalModel::build(&p, KKind::SL2);
        let a = p.parse_word("a").unwrap();
        assert_eq!(&m.eval_word(&a), m.generator_matrix(0));
        assert!(m.eval_word(&Word::empty()).is_identity());
        let aai = p.parse_word("a a^-1").unwrap();
        let det = m.generator_matrix(0).det();
        assert_eq!(m.eval_word(&aai), PolyMatrix2::scalar(&det));
    }

    #[test]
    fn relator_generators_kill_themselves() {
        let p = pres("gens: a b; rels: a^2, b^3, (a b)^2;".replace("(a b)^2", "a b a b").as_str());
        for k in KKind::ALL {
            let m = UniversalModel::build(&p, k);
            for (j, _) in p.relators().iter().enumerate() {
                let v = m.test_triviality(&p.relators()[j], CoefficientDomain::PrimeField(2), &Default::default()).unwrap();
                assert!(matches!(v.status, TrivialityStatus::Trivial | TrivialityStatus::DegenerateUnitIdeal), "{k}");
            }
        }
    }

    #[test]
    fn single_relator_kills_generator() {
        let p = pres("gens: a; rels: a;");
        for k in KKind::ALL {
            let m = UniversalModel::build(&p, k);
            let v = m.test_triviality(&p.parse_word("a").unwrap(), CoefficientDomain::Rationals, &Default::default()).unwrap();
            assert_eq!(v.status, TrivialityStatus::Trivial, "{k}");
            for (_, e) in &v.entries {
                assert!(verify_certificate(e.certificate.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn free_generator_survives() {
        let p = pres("gens: a;");
        let m = UniversalModel::build(&p, KKind::SL2);
        let v = m.test_triviality(&p.parse_word("a").unwrap(), CoefficientDomain::Rationals, &Default::default()).unwrap();
        assert_eq!(v.status, TrivialityStatus::Nontrivial);
        // The off-diagonal entry a_b is its own normal form.
        assert_eq!(v.entries[1].1.status, MembershipStatus::NonMember);
    }

    #[test]
    fn inverses_are_inverse_modulo_the_ideal() {
        let p = pres("gens: a b; rels: a b a^-1 b^-1;");
        for k in [KKind::SL2, KKind::GL2] {
            let m = UniversalModel::build(&p, k);
            for g in 0..2 {
                let prod = m.generator_matrix(g).mul(m.inverse_matrix(g));
                let one = Polynomial::one(m.ring(), Integers);
                let conds = [&prod.entries[0] - &one, prod.entries[1].clone(), prod.entries[2].clone(), &prod.entries[3] - &one];
                for d in [CoefficientDomain::PrimeField(2), CoefficientDomain::Rationals] {
                    for c in &conds {
                        let v = m.ideal().is_member(&c.to_rationals(), d, &Default::default()).unwrap();
                        assert_eq!(v.status, MembershipStatus::Member, "{k} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn custom_names_are_checked() {
        // The trivial representation always exists, so none of these ideals
        // is the unit ideal.
        let p = pres("gens: a; rels: a, a^-1;");
        let m = UniversalModel::build(&p, KKind::SL2);
        assert!(!m.ideal().is_unit_qq(&Default::default()).unwrap());
        let mut names = default_variable_names(&p, KKind::SL2);
        names[0] = "a".into();
        assert!(UniversalModel::build_with_names(&p, KKind::SL2, names.clone()).is_ok());
        names[1] = "a".into();
        assert!(UniversalModel::build_with_names(&p, KKind::SL2, names).is_err());
    }
}
