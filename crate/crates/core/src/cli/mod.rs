//! Command-line front end: `resfin check|search|thurston|casestudy|verify-cert`.
//!
//! Exit codes:
//!
//! | command       | 0         | 1            | 2            | 3     |
//! |---------------|-----------|--------------|--------------|-------|
//! | `check`       | TRIVIAL   | NONTRIVIAL   | INCONCLUSIVE | error |
//! | `search`      | found     | none exists  | budget hit   | error |
//! | `thurston`    | verified  | rejected     | budget hit   | error |
//! | `casestudy`   | all match | mismatch     |              | error |
//! | `verify-cert` | valid     | invalid      |              | unreadable |

mod cases;
mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::exactalg::{AlgError, CoefficientDomain, MonomialOrder};
use crate::finitering::{search_separating_rep, AnyRing, CommRing, FiniteRing, RingError, SearchOptions, DEFAULT_BUDGET};
use crate::groebner::{verify_certificate, GroebnerError, MembershipCertificate, MembershipOptions};
use crate::presentation::{parse_presentation, PresentationError};
use crate::thurston::{analyse, enumerate_labellings, ParameterConvention, ThurstonError, TriangulationFile};
use crate::universal::{KKind, TrivialityStatus, UniversalModel};

pub use cases::{check_free_words, run_case_study, CaseOptions, FreeWordCheck, CASES};
pub use report::{CaseDir, CaseStudyReport, CertificateRecord, Check, Format, Input, Timing};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown case study `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Thurston(#[from] ThurstonError),
}

#[derive(Debug, Parser)]
#[command(name = "resfin", version, about = "Certified checks on 2x2 matrix representations of presented groups")]
pub struct Cli {
    /// Bound on enumerated candidates in finite searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for reports and certificates.
    #[arg(long, global = true, default_value = "resfin-reports")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a word is trivial in every representation into K(R).
    Check {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "sl2")]
        k: KKind,
        #[arg(long, default_value = "qq")]
        domain: CoefficientDomain,
        /// Highest cofactor degree tried over the integers.
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
        /// Space-separated variable names for the universal ring.
        #[arg(long)]
        names: Option<String>,
        /// Write certificates for member entries into this directory.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Search for a representation into K(R) that does not kill a word.
    Search {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "sl2")]
        k: KKind,
    },
    /// Gluing equations and holonomy of a labelled triangulation.
    Thurston {
        #[command(subcommand)]
        action: ThurstonAction,
    },
    /// Run a scripted case study and write its report.
    Casestudy {
        /// One of: s5, s4-witness, heisenberg, dehn41, dehn41-original,
        /// quaternion-finite, quaternion-rational, dihedral:<k>, abelian:<n>,
        /// free-sl2z:<L>, lift-demo.
        name: String,
    },
    /// Re-check a membership certificate file.
    VerifyCert { file: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct TriangulationArgs {
    #[arg(long)]
    pub triangulation: PathBuf,
    /// Coefficient ring; defaults to the `ring:` line of the file.
    #[arg(long)]
    pub ring: Option<String>,
    /// Override the file's parameter convention (`cyclic` or `reversed`).
    #[arg(long)]
    pub convention: Option<ParameterConvention>,
}

#[derive(Debug, Subcommand)]
pub enum ThurstonAction {
    /// Check the stored shape parameters against the gluing system.
    Verify(TriangulationArgs),
    /// List every solution of the gluing system over a finite ring.
    Enumerate(TriangulationArgs),
    /// Compute face-pairing holonomy from vertex labels and name its image.
    Holonomy(TriangulationArgs),
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(format: Format, text: String, json: serde_json::Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::JsonLines => println!("{json}"),
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { presentation, word, k, domain, max_degree, order, names, emit_cert } => {
            let p = parse_presentation(&read(presentation)?)?;
            let w = p.parse_word(word)?;
            let model = match names {
                Some(n) => UniversalModel::build_with_names(&p, *k, n.split_whitespace().map(String::from).collect())
                    .map_err(CliError::Usage)?,
                None => UniversalModel::build(&p, *k),
            };
            let opts = MembershipOptions { order: *order, max_degree: *max_degree, ..MembershipOptions::default() };
            let v = model.test_triviality(&w, *domain, &opts)?;
            let mut text = format!("{} [{}]\n", v.status, v.domain);
            let mut entries = Vec::new();
            for (i, (f, m)) in v.entries.iter().enumerate() {
                let mut file = None;
                if let (Some(dir), Some(c)) = (emit_cert, &m.certificate) {
                    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                    let path = dir.join(format!("entry-{}.cert", i + 1));
                    c.write(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    file = Some(path.display().to_string());
                }
                text.push_str(&format!("  {f}: {}", m.status));
                if let Some(n) = &m.diagnostics.note {
                    text.push_str(&format!(" ({n})"));
                }
                if let Some(path) = &file {
                    text.push_str(&format!(" certificate {path}"));
                }
                text.push('\n');
                entries.push(serde_json::json!({
                    "entry": f.to_string(),
                    "status": m.status.to_string(),
                    "note": m.diagnostics.note,
                    "certificate": file,
                }));
            }
            let json = serde_json::json!({"status": v.status.to_string(), "domain": v.domain.to_string(), "entries": entries});
            emit(cli.format, text, json);
            Ok(match v.status {
                TrivialityStatus::Trivial => 0,
                TrivialityStatus::Nontrivial => 1,
                _ => 2,
            })
        }
        Command::Search { presentation, word, ring, k } => {
            let p = parse_presentation(&read(presentation)?)?;
            let w = p.parse_word(word)?;
            let r = FiniteRing::parse(ring)?;
            match search_separating_rep(&p, &w, &r, *k, &SearchOptions { budget: cli.budget }) {
                Ok(Some(wit)) => {
                    let ok = wit.revalidate();
                    emit(
                        cli.format,
                        format!("FOUND\n{wit}\nrevalidated: {ok}\n"),
                        serde_json::json!({"status": "FOUND", "witness": wit.to_string(), "revalidated": ok}),
                    );
                    Ok(if ok { 0 } else { 3 })
                }
                Ok(None) => {
                    emit(cli.format, "NONE\n".into(), serde_json::json!({"status": "NONE"}));
                    Ok(1)
                }
                Err(RingError::Budget(m)) => {
                    emit(cli.format, format!("BUDGET_EXCEEDED: {m}\n"), serde_json::json!({"status": "BUDGET_EXCEEDED", "detail": m}));
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Thurston { action } => thurston(cli, action),
        Command::Casestudy { name } => {
            let opts = CaseOptions { out: cli.out.clone(), format: cli.format, search_budget: cli.budget, ..CaseOptions::default() };
            let r = run_case_study(name, &opts)?;
            print!("{}", r.render(cli.format));
            Ok(if r.success() { 0 } else { 1 })
        }
        Command::VerifyCert { file } => {
            let cert = match MembershipCertificate::read(file) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return Ok(3);
                }
            };
            let ok = verify_certificate(&cert);
            let status = if ok { "VALID" } else { "INVALID" };
            emit(
                cli.format,
                format!("{status} [{}] {}\n", cert.domain, cert.target),
                serde_json::json!({"status": status, "domain": cert.domain.to_string(), "target": cert.target.to_string()}),
            );
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn load(args: &TriangulationArgs) -> Result<(TriangulationFile, AnyRing), CliError> {
    let mut f = TriangulationFile::parse(&read(&args.triangulation)?)?;
    if let Some(c) = args.convention {
        f.triangulation.set_convention(c);
    }
    let spec = args
        .ring
        .clone()
        .or_else(|| f.ring.clone())
        .ok_or_else(|| CliError::Usage("no ring given and the file has no `ring:` line".into()))?;
    Ok((f, AnyRing::parse(&spec)?))
}

fn thurston(cli: &Cli, action: &ThurstonAction) -> Result<i32, CliError> {
    match action {
        ThurstonAction::Verify(args) | ThurstonAction::Holonomy(args) => {
            let verify = matches!(action, ThurstonAction::Verify(_));
            let (f, ring) = load(args)?;
            if verify && !f.has_params() {
                return Err(CliError::Usage("the file has no `params:` lines".into()));
            }
            if !verify && !f.has_labels() {
                return Err(CliError::Usage("the file has no `label:` lines".into()));
            }
            let result = match &ring {
                AnyRing::Finite(r) => analyse(&f, r),
                AnyRing::Rational(q) => analyse(&f, q),
            };
            let rep = match result {
                Ok(r) => r,
                Err(e @ (ThurstonError::NotGeneralPosition(_) | ThurstonError::NotUnimodular(_))) => {
                    emit(cli.format, format!("{e}\n"), serde_json::json!({"status": "REJECTED", "detail": e.to_string()}));
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let mut text = format!("ring: {}\nconvention: {}\n", rep.ring, rep.convention);
            for e in &rep.equations {
                text.push_str(&format!("equation: {e}\n"));
            }
            let ok = if verify {
                let l = rep.labelling.as_ref().unwrap();
                for c in &l.checks {
                    text.push_str(&format!("  {}: {}\n", c.equation, if c.holds { "holds" } else { "FAILS" }));
                }
                text.push_str(if l.ok { "VERIFIED\n" } else { "REJECTED\n" });
                l.ok
            } else {
                for (i, m) in rep.holonomy.iter().enumerate() {
                    text.push_str(&format!("pairing {}: {m}\n", i + 1));
                }
                if let Some(img) = &rep.image {
                    text.push_str(&format!("image: {img}\n"));
                }
                true
            };
            emit(cli.format, text, serde_json::to_value(&rep).unwrap_or_default());
            Ok(if ok { 0 } else { 1 })
        }
        ThurstonAction::Enumerate(args) => {
            let (f, ring) = load(args)?;
            let AnyRing::Finite(r) = ring else {
                return Err(CliError::Usage("enumeration needs a finite ring".into()));
            };
            let all = match enumerate_labellings(&f.triangulation, &r, cli.budget) {
                Ok(a) => a,
                Err(ThurstonError::Ring(RingError::Budget(m))) => {
                    emit(cli.format, format!("BUDGET_EXCEEDED: {m}\n"), serde_json::json!({"status": "BUDGET_EXCEEDED", "detail": m}));
                    return Ok(2);
                }
                Err(e) => return Err(e.into()),
            };
            let fmt = |l: &[[u32; 3]]| -> String {
                l.iter()
                    .map(|p| format!("({})", p.iter().map(|&e| r.format_elem(&e)).collect::<Vec<_>>().join(", ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let mut text = format!("{} solutions over {}\n", all.len(), r.spec());
            for l in &all {
                text.push_str(&fmt(l));
                text.push('\n');
            }
            let json = serde_json::json!({
                "ring": r.spec(),
                "solutions": all.iter().map(|l| fmt(l)).collect::<Vec<_>>(),
            });
            emit(cli.format, text, json);
            Ok(if all.is_empty() { 1 } else { 0 })
        }
    }
}
