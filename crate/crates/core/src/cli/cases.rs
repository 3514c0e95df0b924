//! Scripted case studies.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::{parse_expr, CoefficientDomain, MonomialOrder, PolyMatrix2, PolyRing, Rationals};
use crate::finitering::{
    check_functoriality, check_product_isomorphism, finite_quotient_witness, generate_subgroup, lift_pgl_to_psl,
    mat_mul, parse_mat, product_combine, proj_equal, reduction_map, search_separating_rep, survey_images,
    FiniteRing, IntegralRep, QuotientCase, RationalField, Representation, RingError, SearchOptions, DEFAULT_BUDGET,
};
use crate::groebner::{Ideal, MembershipOptions, MembershipStatus};
use crate::presentation::{parse_presentation, Presentation, Word};
use crate::thurston::{analyse, enumerate_labellings, holonomy, TriangulationFile};
use crate::universal::{KKind, TrivialityStatus, UniversalModel};

use super::report::{CaseDir, CaseStudyReport, Format};
use super::CliError;

pub const S5_PRES: &str = include_str!("../../data/s5.pres");
pub const S4_PRES: &str = include_str!("../../data/s4.pres");
pub const DEHN41_PRES: &str = include_str!("../../data/dehn41.pres");
pub const DEHN41_ORIGINAL_PRES: &str = include_str!("../../data/dehn41-original.pres");
pub const HEISENBERG_PRES: &str = include_str!("../../data/heisenberg.pres");
pub const QUATERNION_FINITE_TRI: &str = include_str!("../../data/quaternion-finite.tri");
pub const QUATERNION_RATIONAL_TRI: &str = include_str!("../../data/quaternion-rational.tri");

pub const CASES: [&str; 11] = [
    "s5",
    "s4-witness",
    "heisenberg",
    "dehn41",
    "dehn41-original",
    "quaternion-finite",
    "quaternion-rational",
    "dihedral:<k>",
    "abelian:<n>",
    "free-sl2z:<L>",
    "lift-demo",
];

#[derive(Clone, Debug)]
pub struct CaseOptions {
    pub out: PathBuf,
    pub format: Format,
    pub search_budget: u64,
    pub membership: MembershipOptions,
}

impl Default for CaseOptions {
    fn default() -> Self {
        Self {
            out: PathBuf::from("resfin-reports"),
            format: Format::Text,
            search_budget: DEFAULT_BUDGET,
            membership: MembershipOptions::default(),
        }
    }
}

/// Run a case study, write its report under `opts.out` and return it.
pub fn run_case_study(name: &str, opts: &CaseOptions) -> Result<CaseStudyReport, CliError> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let known = CASES.iter().any(|c| match c.split_once(':') {
        Some((b, _)) => b == base,
        None => *c == base && arg.is_none(),
    });
    if !known {
        return Err(CliError::UnknownCase(name.to_string()));
    }
    let n = match arg {
        Some(a) => a.parse().map_err(|_| CliError::Usage(format!("bad parameter in `{name}`")))?,
        None if base == "free-sl2z" => 8,
        None => 4,
    };
    let dir = CaseDir::create(&opts.out, name)?;
    let mut r = CaseStudyReport::new(name);
    match base {
        "s5" if arg.is_none() => s5(&mut r, &dir, opts)?,
        "s4-witness" if arg.is_none() => s4_witness(&mut r, opts)?,
        "heisenberg" if arg.is_none() => heisenberg(&mut r, &dir, opts)?,
        "dehn41" if arg.is_none() => dehn41(&mut r, &dir, opts)?,
        "dehn41-original" if arg.is_none() => dehn41_original(&mut r, &dir, opts)?,
        "quaternion-finite" if arg.is_none() => quaternion_finite(&mut r, opts)?,
        "quaternion-rational" if arg.is_none() => quaternion_rational(&mut r)?,
        "dihedral" => dihedral(&mut r, n)?,
        "abelian" => abelian(&mut r, n, opts)?,
        "free-sl2z" => free_sl2z(&mut r, n),
        "lift-demo" if arg.is_none() => lift_demo(&mut r)?,
        _ => return Err(CliError::UnknownCase(name.to_string())),
    }
    dir.write_report(&r, opts.format)?;
    Ok(r)
}

fn pres(text: &str) -> Result<Presentation, CliError> {
    Ok(parse_presentation(text)?)
}

fn names(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

/// Run `test_triviality`, persist every certificate and record one check.
#[allow(clippy::too_many_arguments)]
fn triviality(
    r: &mut CaseStudyReport,
    dir: &CaseDir,
    model: &UniversalModel,
    w: &Word,
    label: &str,
    domain: CoefficientDomain,
    opts: &MembershipOptions,
    expected: &[&str],
) -> Result<TrivialityStatus, CliError> {
    let step = format!("{label} in {} over {domain}", model.kind());
    let v = r.timed(&step, || model.test_triviality(w, domain, opts))?;
    let stem_base: String = format!("{label}-{}-{domain}", model.kind())
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect();
    let mut files = Vec::new();
    let mut detail = Vec::new();
    let mut missing = false;
    for (i, (poly, verdict)) in v.entries.iter().enumerate() {
        let mut line = format!("{poly}: {}", verdict.status);
        if let Some(n) = &verdict.diagnostics.note {
            line.push_str(&format!(" ({n})"));
        }
        detail.push(line);
        match &verdict.certificate {
            Some(c) if verdict.status == MembershipStatus::Member => {
                files.push(dir.persist(r, &format!("{stem_base}-{}", i + 1), c)?);
            }
            None if verdict.status == MembershipStatus::Member => missing = true,
            _ => {}
        }
    }
    let check = r.record(&format!("{label} killed in {}", model.kind()), Some(domain.to_string()), v.status.to_string(), expected);
    check.certificates = files;
    if missing {
        check.matches = false;
        detail.push("a member verdict has no certificate".into());
    }
    check.detail = Some(detail.join("\n"));
    Ok(v.status)
}

const FIELDS: [CoefficientDomain; 3] =
    [CoefficientDomain::PrimeField(2), CoefficientDomain::PrimeField(3), CoefficientDomain::PrimeField(5)];

fn s5(r: &mut CaseStudyReport, dir: &CaseDir, opts: &CaseOptions) -> Result<(), CliError> {
    let p = pres(S5_PRES)?;
    r.input("presentation", "data/s5.pres");
    r.input("variables", "a b c d i j k l p q r s w x y z");
    r.input("word", "x1 x2");
    let model = UniversalModel::build_with_names(&p, KKind::SL2, names("a b c d i j k l p q r s w x y z"))
        .map_err(CliError::Usage)?;
    let w = p.parse_word("x1 x2")?;
    for d in FIELDS {
        triviality(r, dir, &model, &w, "x1 x2", d, &opts.membership, &["TRIVIAL"])?;
    }
    triviality(r, dir, &model, &w, "x1 x2", CoefficientDomain::Rationals, &opts.membership, &["TRIVIAL", "INCONCLUSIVE"])?;
    triviality(r, dir, &model, &w, "x1 x2", CoefficientDomain::Integers, &opts.membership, &["TRIVIAL", "INCONCLUSIVE"])?;
    // F25 contains PGL2(F5) = S5 inside PSL2, so the lambda-model separates x1 x2 there
    let f25_budget = opts.search_budget.max(1 << 40);
    r.input("F25 search budget", f25_budget.to_string());
    let rings = [
        ("Z/2", "NONE", opts.search_budget),
        ("Z/3", "NONE", opts.search_budget),
        ("Z/4", "NONE", opts.search_budget),
        ("Z/2[t]/(t^2+t+1)", "NONE", opts.search_budget),
        ("Z/5[t]/(t^2+t+2)", "WITNESS", f25_budget),
    ];
    for (spec, expected, budget) in rings {
        let ring = FiniteRing::parse(spec)?;
        let found = r.timed(&format!("search PSL2({spec})"), || {
            search_separating_rep(&p, &w, &ring, KKind::PSL2, &SearchOptions { budget })
        });
        let status = match &found {
            Ok(Some(_)) => "WITNESS".to_string(),
            Ok(None) => "NONE".to_string(),
            Err(RingError::Budget(_)) => "INCONCLUSIVE".to_string(),
            Err(e) => return Err(e.clone().into()),
        };
        r.record(&format!("separating representation of x1 x2 in PSL2({spec})"), None, status, &[expected]);
    }
    Ok(())
}

fn s4_witness(r: &mut CaseStudyReport, opts: &CaseOptions) -> Result<(), CliError> {
    let p = pres(S4_PRES)?;
    r.input("presentation", "data/s4.pres");
    r.input("ring", "Z/3");
    let f3 = FiniteRing::zmod(3)?;
    let so = SearchOptions { budget: opts.search_budget };
    let pgl = r.timed("survey PGL2(Z/3)", || survey_images(&p, &f3, KKind::PGL2, &so))?;
    let psl = r.timed("survey PSL2(Z/3)", || survey_images(&p, &f3, KKind::PSL2, &so))?;
    r.record("largest image of S4 in PGL2(Z/3)", None, pgl.max_image_order.to_string(), &["24"]).detail =
        Some(format!("|PGL2(Z/3)| = {}, {} homomorphisms", pgl.group_order, pgl.homomorphisms));
    r.record("largest image of S4 in PSL2(Z/3)", None, psl.max_image_order.to_string(), &["2"]).detail =
        Some(format!("|PSL2(Z/3)| = {}, {} homomorphisms", psl.group_order, psl.homomorphisms));
    let claim = if psl.max_image_order == 24 { "CONFIRMED" } else { "REFUTED" };
    r.record("S4 isomorphic to PSL2(F3)", None, claim, &["REFUTED"]).detail = Some(format!(
        "faithful image in PGL2(F3): {}; PSL2(F3) has order {} and admits images of order at most {}",
        pgl.max_image_order == 24,
        psl.group_order,
        psl.max_image_order
    ));
    r.note("S4 is isomorphic to PGL2(F3); PSL2(F3) is isomorphic to A4");
    let best = pgl.best.ok_or_else(|| CliError::Usage("no PGL2 representation found".into()))?;
    r.note(format!("faithful representation: {}", best.describe()));
    let lift = r.timed("lift to PSL2", || lift_pgl_to_psl(&best))?;
    let lr = &lift.representation;
    let image = generate_subgroup(&lr.ring, KKind::PSL2, &lr.images, 1 << 12)?;
    r.record("image of the PSL2 lift", Some(lr.ring.spec().to_string()), image.len().to_string(), &["24"]);
    let inj = if lift.retraction.injective { "INJECTIVE" } else { "NOT_INJECTIVE" };
    r.record("retraction check for Z/3 -> R'", None, inj, &["INJECTIVE"]).detail = Some(format!(
        "{} fixed points, {} homomorphism pairs, {} product pairs",
        lift.retraction.fixed_points, lift.retraction.homomorphism_pairs, lift.retraction.product_pairs
    ));
    Ok(())
}

fn heisenberg(r: &mut CaseStudyReport, dir: &CaseDir, opts: &CaseOptions) -> Result<(), CliError> {
    let p = pres(HEISENBERG_PRES)?;
    r.input("presentation", "data/heisenberg.pres");
    r.input("ideal", "x*(1-y^2)^2, y*z-1");
    let ring = PolyRing::new(["x", "y", "z"], MonomialOrder::Grevlex);
    let e = |s: &str| parse_expr(&ring, s).map_err(CliError::from);
    let ideal = Ideal::new(&ring, vec![e("x*(1-y^2)^2")?, e("y*z-1")?]);
    let mo = &opts.membership;
    for n in 1..=3 {
        let f = e(&format!("{n}*x*(1-y^2)"))?;
        let v = r.timed(&format!("{n} x(1-y^2) membership"), || ideal.is_member(&f, CoefficientDomain::Rationals, mo))?;
        let c = r.record(&format!("{n}*x*(1-y^2) in I"), Some("qq".into()), v.status.to_string(), &["NON_MEMBER"]);
        c.detail = v.normal_form.map(|nf| format!("normal form {nf}"));
    }
    let m = |a: &str, b: &str, c: &str, d: &str| -> Result<PolyMatrix2<Rationals>, CliError> {
        Ok(PolyMatrix2::new(e(a)?, e(b)?, e(c)?, e(d)?))
    };
    let gens = [m("1", "x", "0", "1")?, m("y", "0", "0", "z")?, m("1", "x*(1-y^2)", "0", "1")?];
    for (ri, rel) in p.relators().iter().enumerate() {
        let mut acc = PolyMatrix2::identity(&ring, Rationals);
        for l in rel.letters() {
            let g = &gens[l.generator];
            acc = acc.mul(&if l.inverse { g.adjugate() } else { g.clone() });
        }
        let diff = acc.sub(&PolyMatrix2::identity(&ring, Rationals));
        let mut statuses = Vec::new();
        let mut files = Vec::new();
        for (k, f) in diff.entries.iter().enumerate() {
            let v = ideal.is_member(f, CoefficientDomain::Rationals, mo)?;
            if let Some(c) = &v.certificate {
                files.push(dir.persist(r, &format!("relator-{}-entry-{}", ri + 1, k + 1), c)?);
            }
            statuses.push((v.status, v.certificate.is_some()));
        }
        let all = statuses.iter().all(|s| s.0 == MembershipStatus::Member && s.1);
        let name = format!("relator {} holds modulo I", rel.display_with(p.generators()));
        let c = r.record(&name, Some("qq".into()), if all { "MEMBER" } else { "NOT_ALL_MEMBER" }, &["MEMBER"]);
        c.certificates = files;
    }
    r.note("rho(a) = [[1, x], [0, 1]], rho(b) = [[y, 0], [0, z]], rho(c) = [[1, x(1-y^2)], [0, 1]]");
    Ok(())
}

fn dehn41(r: &mut CaseStudyReport, dir: &CaseDir, opts: &CaseOptions) -> Result<(), CliError> {
    let p = pres(DEHN41_PRES)?;
    r.input("presentation", "data/dehn41.pres");
    r.input("variables", "i j k l p q r s w x y z");
    r.input("word", "b^4");
    let model =
        UniversalModel::build_with_names(&p, KKind::SL2, names("i j k l p q r s w x y z")).map_err(CliError::Usage)?;
    let w = p.parse_word("b^4")?;
    for d in FIELDS {
        triviality(r, dir, &model, &w, "b^4", d, &opts.membership, &["TRIVIAL"])?;
    }
    triviality(r, dir, &model, &w, "b^4", CoefficientDomain::Rationals, &opts.membership, &["TRIVIAL"])?;
    triviality(r, dir, &model, &w, "b^4", CoefficientDomain::Integers, &opts.membership, &["TRIVIAL", "INCONCLUSIVE"])?;
    Ok(())
}

fn dehn41_original(r: &mut CaseStudyReport, dir: &CaseDir, opts: &CaseOptions) -> Result<(), CliError> {
    let p = pres(DEHN41_ORIGINAL_PRES)?;
    r.input("presentation", "data/dehn41-original.pres");
    r.input("word", "a^4");
    let model = UniversalModel::build(&p, KKind::SL2);
    let w = p.parse_word("a^4")?;
    for d in FIELDS {
        triviality(r, dir, &model, &w, "a^4", d, &opts.membership, &["TRIVIAL"])?;
    }
    triviality(r, dir, &model, &w, "a^4", CoefficientDomain::Rationals, &opts.membership, &["TRIVIAL", "INCONCLUSIVE"])?;
    Ok(())
}

fn quaternion_rational(r: &mut CaseStudyReport) -> Result<(), CliError> {
    let f = TriangulationFile::parse(QUATERNION_RATIONAL_TRI)?;
    r.input("triangulation", "data/quaternion-rational.tri");
    r.input("ring", "Q");
    let q = RationalField;
    let rep = r.timed("analyse", || analyse(&f, &q))?;
    r.input("convention", rep.convention.clone());
    let lab = rep.labelling.as_ref().map_or("MISSING", |l| if l.ok { "VERIFIED" } else { "REJECTED" });
    r.record("solution (1) at r = 2", Some("Q".into()), lab, &["VERIFIED"]);
    let sizes: Vec<usize> = rep.edge_classes.iter().map(Vec::len).collect();
    r.record("edge classes", None, format!("{sizes:?}"), &["[4, 4, 4]"]);
    let img = rep.image.as_ref().and_then(|i| i.name.clone()).unwrap_or_else(|| "UNNAMED".into());
    r.record("holonomy image", Some("Q".into()), img, &["V4"]);
    for (i, m) in rep.holonomy.iter().enumerate() {
        r.note(format!("rho(phi{}) = {m}", i + 1));
    }
    Ok(())
}

fn quaternion_finite(r: &mut CaseStudyReport, opts: &CaseOptions) -> Result<(), CliError> {
    let f = TriangulationFile::parse(QUATERNION_FINITE_TRI)?;
    let ring = FiniteRing::parse(f.ring.as_deref().unwrap_or("Z/2[a]/(a^2+a+1)[x]/(x^2)"))?;
    r.input("triangulation", "data/quaternion-finite.tri");
    r.input("ring", ring.spec());
    let rep = r.timed("analyse", || analyse(&f, &ring))?;
    r.input("convention", rep.convention.clone());
    let lab = rep.labelling.as_ref().map_or("MISSING", |l| if l.ok { "VERIFIED" } else { "REJECTED" });
    r.record("solution (2)", Some(ring.spec().into()), lab, &["VERIFIED"]);
    let all = r.timed("enumerate labellings", || enumerate_labellings(&f.triangulation, &ring, opts.search_budget))?;
    let known = f.params_in(&ring)?.unwrap_or_default();
    let c = r.record("enumeration contains solution (2)", Some(ring.spec().into()), if all.contains(&known) { "YES" } else { "NO" }, &["YES"]);
    c.detail = Some(format!("{} labellings satisfy the system", all.len()));
    let img = rep.image.as_ref().and_then(|i| i.name.clone()).unwrap_or_else(|| "UNNAMED".into());
    r.record("holonomy image", Some(ring.spec().into()), img, &["Q8"]);

    let labels = f.labels_in(&ring)?.ok_or_else(|| CliError::Usage("triangulation has no labels".into()))?;
    let h = holonomy(&f.triangulation, &labels, &ring)?;
    let j = parse_mat(&ring, "[[1, (a+1)*x], [x, 1]]")?;
    let id = parse_mat(&ring, "1 0 0 1")?;
    let squares = h.matrices[1..].iter().all(|m| proj_equal(&ring, &mat_mul(&ring, m, m), &j));
    r.record("rho'(phi_i)^2 = J for i = 2, 3, 4", None, squares.to_string(), &["true"]);
    let jj = proj_equal(&ring, &mat_mul(&ring, &j, &j), &id) && !proj_equal(&ring, &j, &id);
    r.record("J^2 = 1, J != 1", None, jj.to_string(), &["true"]);
    let prod = mat_mul(&ring, &mat_mul(&ring, &h.matrices[1], &h.matrices[2]), &h.matrices[3]);
    r.record("rho'(phi2) rho'(phi3) rho'(phi4) = J", None, proj_equal(&ring, &prod, &j).to_string(), &["true"]);
    for (i, m) in rep.holonomy.iter().enumerate() {
        r.note(format!("rho'(phi{}) = {m}", i + 1));
    }
    Ok(())
}

fn smallest_prime_1_mod(n: u64) -> u64 {
    let is_prime = |p: u64| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    (1..).map(|j| j * n + 1).find(|&p| is_prime(p)).unwrap()
}

fn dihedral(r: &mut CaseStudyReport, k: usize) -> Result<(), CliError> {
    if k < 2 {
        return Err(CliError::Usage("dihedral:<k> needs k >= 2".into()));
    }
    let p = pres(&format!("gens: a b; rels: a^{k}, b^2, b a b a;"))?;
    r.input("presentation", p.to_string());
    let modulus = format!("t^{k}+1");
    let tinv = format!("-t^{}", k - 1);
    r.input("integral representation", format!("a -> diag(t, {tinv}), b -> [[0, 1], [-1, 0]] over Z[t]/({modulus})"));
    let rep = IntegralRep::parse(&p, KKind::PSL2, Some(&modulus), &[["t", "0", "0", &tinv], ["0", "1", "-1", "0"]])?;
    let mut moduli = Vec::new();
    let mut all = true;
    for i in 0..k {
        for j in 0..2 {
            if i == 0 && j == 0 {
                continue;
            }
            let w = Word::power(0, i as i64).concat(&Word::power(1, j as i64));
            match finite_quotient_witness(&rep, &w) {
                Ok(q) if !q.representation.kills(&w) => moduli.push(format!("a^{i} b^{j}: mod {} ({})", q.modulus, q.case)),
                Ok(_) => all = false,
                Err(e) => {
                    all = false;
                    moduli.push(format!("a^{i} b^{j}: {e}"));
                }
            }
        }
    }
    let c = r.record("every non-identity element survives a finite quotient", Some("PSL2".into()), if all { "SEPARATED" } else { "NOT_SEPARATED" }, &["SEPARATED"]);
    c.detail = Some(moduli.join("\n"));

    let q = smallest_prime_1_mod(2 * k as u64);
    let fp = FiniteRing::zmod(q as u32)?;
    let xi = (2..q as u32)
        .map(|g| fp.pow_e(g, (q as u64 - 1) / (2 * k as u64)))
        .find(|&x| fp.pow_e(x, k as u64) == fp.neg_e(fp.one_e()))
        .expect("cyclic unit group");
    let xi_inv = fp.inverse_e(xi).unwrap();
    let minus = fp.neg_e(fp.one_e());
    let rep_p = Representation::new(p.clone(), fp.clone(), KKind::PSL2, vec![[xi, 0, 0, xi_inv], [0, 1, minus, 0]])?;
    let order = rep_p.image_order(1 << 16)?;
    r.input("prime field", format!("Z/{q} with xi = {xi} of order {}", 2 * k));
    let c = r.record("image order in PSL2(Z/p)", Some(format!("Z/{q}")), order.to_string(), &[&(2 * k).to_string()]);
    c.detail = Some(format!("faithful iff the image has order {}", 2 * k));
    Ok(())
}

fn abelian(r: &mut CaseStudyReport, n: usize, opts: &CaseOptions) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage("abelian:<n> needs n >= 2".into()));
    }
    let p = pres(&format!("gens: a; rels: a^{n};"))?;
    r.input("presentation", p.to_string());
    let zn = FiniteRing::zmod(n as u32)?;
    for kind in KKind::ALL {
        let rep = Representation::new(p.clone(), zn.clone(), kind, vec![[1, 1, 0, 1]])?;
        let order = rep.image_order(1 << 16)?;
        r.record(&format!("a -> [[1, 1], [0, 1]] in {kind}(Z/{n})"), None, order.to_string(), &[&n.to_string()]);
    }
    let a = Word::power(0, 1);
    let found = r.timed("search SL2(Z/n)", || search_separating_rep(&p, &a, &zn, KKind::SL2, &SearchOptions { budget: opts.search_budget }));
    let (status, detail) = match found {
        Ok(Some(w)) => (if w.revalidate() { "WITNESS" } else { "INVALID" }, Some(w.to_string())),
        Ok(None) => ("NONE", None),
        Err(RingError::Budget(m)) => ("INCONCLUSIVE", Some(m)),
        Err(e) => return Err(e.into()),
    };
    r.record(&format!("exhaustive search for a in SL2(Z/{n})"), None, status, &["WITNESS"]).detail = detail;

    let z = pres("gens: a;")?;
    let rep = IntegralRep::parse(&z, KKind::SL2, None, &[["1", "1", "0", "1"]])?;
    let mut lines = Vec::new();
    let mut ok = true;
    for j in 1..=n {
        let w = Word::power(0, j as i64);
        match finite_quotient_witness(&rep, &w) {
            Ok(q) => {
                ok &= q.case == QuotientCase::OffDiagonal && !q.representation.kills(&w);
                lines.push(format!("a^{j}: mod {}", q.modulus));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("a^{j}: {e}"));
            }
        }
    }
    r.record("powers of a in Z survive finite quotients", Some("SL2".into()), if ok { "SEPARATED" } else { "NOT_SEPARATED" }, &["SEPARATED"])
        .detail = Some(lines.join("\n"));
    Ok(())
}

/// Result of checking every reduced word up to a length in the two
/// generators `[[1,2],[0,1]]` and `[[1,0],[2,1]]` of `SL2(Z)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FreeWordCheck {
    pub max_length: usize,
    pub words: u64,
    /// Words evaluating to the identity.
    pub identity: Vec<String>,
    /// Words evaluating to `-1` (trivial in `PSL2`).
    pub minus_identity: Vec<String>,
    /// Largest over all words of the smallest `m` with the image not the
    /// identity mod `m`.
    pub max_modulus: u64,
}

type BigMat = [BigInt; 4];

fn big_mul(x: &BigMat, y: &BigMat) -> BigMat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

pub fn check_free_words(max_length: usize) -> FreeWordCheck {
    let m = |a: i64, b: i64, c: i64, d: i64| -> BigMat { [a.into(), b.into(), c.into(), d.into()] };
    let letters = [m(1, 2, 0, 1), m(1, -2, 0, 1), m(1, 0, 2, 1), m(1, 0, -2, 1)];
    let names = ["A", "A^-1", "B", "B^-1"];
    let mut out = FreeWordCheck { max_length, words: 0, identity: Vec::new(), minus_identity: Vec::new(), max_modulus: 0 };
    let mut stack: Vec<(Vec<usize>, BigMat)> = (0..4).map(|l| (vec![l], letters[l].clone())).collect();
    let one = BigInt::one();
    while let Some((word, mat)) = stack.pop() {
        out.words += 1;
        let text = || word.iter().map(|&l| names[l]).collect::<Vec<_>>().join(" ");
        let diff = [&mat[0] - &one, mat[1].clone(), mat[2].clone(), &mat[3] - &one];
        let g = diff.iter().fold(BigInt::zero(), |g, e| g.gcd(e));
        if g.is_zero() {
            out.identity.push(text());
        } else {
            let g = g.abs();
            let modulus = (2u64..).find(|&m| !(&g % m).is_zero()).unwrap();
            out.max_modulus = out.max_modulus.max(modulus);
        }
        if mat[1].is_zero() && mat[2].is_zero() && mat[0] == -&one && mat[3] == -&one {
            out.minus_identity.push(text());
        }
        if word.len() < max_length {
            let last = *word.last().unwrap();
            for l in 0..4 {
                if l == last ^ 1 {
                    continue;
                }
                let mut w = word.clone();
                w.push(l);
                stack.push((w, big_mul(&mat, &letters[l])));
            }
        }
    }
    out
}

fn free_sl2z(r: &mut CaseStudyReport, len: usize) {
    r.input("generators", "A = [[1, 2], [0, 1]], B = [[1, 0], [2, 1]]");
    r.input("maximal word length", len.to_string());
    let c = r.timed("enumerate reduced words", || check_free_words(len));
    let expect = 2 * (3u64.pow(len as u32) - 1);
    let status = if c.identity.is_empty() { "NON_IDENTITY" } else { "IDENTITY_FOUND" };
    r.record("reduced words are not the identity in SL2(Z)", None, status, &["NON_IDENTITY"]).detail =
        Some(format!("{} words (expected {expect}), separated modulo at most {}", c.words, c.max_modulus));
    let status = if c.minus_identity.is_empty() { "NON_IDENTITY" } else { "MINUS_IDENTITY_FOUND" };
    r.record("reduced words are not -1 in SL2(Z)", None, status, &["NON_IDENTITY"]);
    r.record("word count", None, c.words.to_string(), &[&expect.to_string()]);
}

fn lift_demo(r: &mut CaseStudyReport) -> Result<(), CliError> {
    let z = pres("gens: a;")?;
    let a = Word::power(0, 1);
    let cases: [(&str, KKind, [&str; 4], &str); 4] = [
        ("a -> [[1, 6], [0, 1]]", KKind::SL2, ["1", "6", "0", "1"], "(i) off-diagonal entry mod 4"),
        ("a -> diag(2, 1)", KKind::GL2, ["2", "0", "0", "1"], "(ii) diagonal difference mod 3"),
        ("a -> diag(3, 3)", KKind::GL2, ["3", "0", "0", "3"], "(iii) scalar mod 4"),
        ("a -> identity", KKind::SL2, ["1", "0", "0", "1"], "NO_WITNESS"),
    ];
    for (name, kind, m, expected) in cases {
        let rep = IntegralRep::parse(&z, kind, None, &[m])?;
        let status = match finite_quotient_witness(&rep, &a) {
            Ok(q) => format!("{} mod {}", q.case, q.modulus),
            Err(RingError::NoWitness(_)) => "NO_WITNESS".to_string(),
            Err(e) => return Err(e.into()),
        };
        r.record(&format!("finite quotient for {name}"), Some(kind.to_string()), status, &[expected]);
    }
    r.note("diag(3, 3) reduced mod 3 has determinant 0, so the smallest admissible modulus is 4");

    let v4 = pres("gens: a b; rels: a b a^-1 b^-1;")?;
    let (wa, wb) = (v4.parse_word("a")?, v4.parse_word("b")?);
    let r2 = Representation::new(v4.clone(), FiniteRing::zmod(2)?, KKind::SL2, vec![[1, 1, 0, 1], [1, 0, 0, 1]])?;
    let r3 = Representation::new(v4.clone(), FiniteRing::zmod(3)?, KKind::SL2, vec![[1, 0, 0, 1], [1, 1, 0, 1]])?;
    let c = product_combine(&[r2, r3])?;
    let both = !c.kills(&wa) && !c.kills(&wb);
    r.record("product over Z/2 * Z/3 separates a and b", Some(c.ring.spec().into()), both.to_string(), &["true"]);

    let c2 = pres("gens: a; rels: a^2;")?;
    let f3 = FiniteRing::zmod(3)?;
    let base = Representation::new(c2, f3, KKind::PGL2, vec![[1, 0, 0, 2]])?;
    let lift = lift_pgl_to_psl(&base)?;
    let lr = &lift.representation;
    r.record("square-root lift ring", None, lr.ring.spec(), &["Z/3[x]/(x^2 + 1)"]).detail =
        Some(format!("lifted image {}", lr.describe()));
    r.record("retraction check for Z/3 -> F9", None, if lift.retraction.injective { "INJECTIVE" } else { "NOT_INJECTIVE" }, &["INJECTIVE"]);

    let ring = |s: &str| FiniteRing::parse(s);
    let homs: Vec<(FiniteRing, FiniteRing, Vec<u32>)> = vec![
        (ring("Z/4")?, ring("Z/2")?, reduction_map(4, 2)?),
        (ring("Z/6")?, ring("Z/2")?, reduction_map(6, 2)?),
        (ring("Z/6")?, ring("Z/3")?, reduction_map(6, 3)?),
        (ring("Z/2[t]/(t^2)")?, ring("Z/2")?, (0..4).map(|e| e % 2).collect()),
        (ring("Z/2 * Z/3")?, ring("Z/3")?, {
            let p = ring("Z/2 * Z/3")?;
            (0..6).map(|e| p.project(e)[1]).collect()
        }),
    ];
    for (src, dst, map) in &homs {
        let mut ok = true;
        for kind in KKind::ALL {
            let f = check_functoriality(src, dst, map, kind, DEFAULT_BUDGET)?;
            ok &= f.ring_hom && f.group_hom;
        }
        r.record(&format!("K({}) -> K({}) is a homomorphism", src.spec(), dst.spec()), Some("all K".into()), ok.to_string(), &["true"]);
    }
    for spec in ["Z/2 * Z/3", "Z/2 * Z/2"] {
        let mut ok = true;
        for kind in KKind::ALL {
            let c = check_product_isomorphism(&ring(spec)?, kind, DEFAULT_BUDGET)?;
            ok &= c.bijective && c.homomorphism;
        }
        r.record(&format!("K({spec}) is the product of the factors"), Some("all K".into()), ok.to_string(), &["true"]);
    }
    Ok(())
}
