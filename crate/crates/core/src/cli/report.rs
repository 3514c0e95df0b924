//! Case-study reports and certificate persistence.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::groebner::{verify_certificate, MembershipCertificate};

use super::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub name: String,
    pub value: String,
}

/// One scripted check with the statuses it is allowed to produce.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub domain: Option<String>,
    pub status: String,
    pub expected: Vec<String>,
    pub matches: bool,
    pub certificates: Vec<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRecord {
    pub file: String,
    pub domain: String,
    pub target: String,
    pub revalidated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub step: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseStudyReport {
    pub case: String,
    pub version: String,
    pub inputs: Vec<Input>,
    pub checks: Vec<Check>,
    pub certificates: Vec<CertificateRecord>,
    pub notes: Vec<String>,
    pub timings: Vec<Timing>,
}

impl CaseStudyReport {
    pub fn new(case: &str) -> Self {
        Self {
            case: case.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            checks: Vec::new(),
            certificates: Vec::new(),
            notes: Vec::new(),
            timings: Vec::new(),
        }
    }

    /// Every check produced an expected status and every certificate
    /// re-read from disk verified.
    pub fn success(&self) -> bool {
        self.checks.iter().all(|c| c.matches) && self.certificates.iter().all(|c| c.revalidated)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn input(&mut self, name: &str, value: impl Into<String>) {
        self.inputs.push(Input { name: name.to_string(), value: value.into() });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn record(&mut self, name: &str, domain: Option<String>, status: impl Into<String>, expected: &[&str]) -> &mut Check {
        let status = status.into();
        let matches = expected.contains(&status.as_str());
        self.checks.push(Check {
            name: name.to_string(),
            domain,
            status,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            matches,
            certificates: Vec::new(),
            detail: None,
        });
        self.checks.last_mut().unwrap()
    }

    pub fn timed<T>(&mut self, step: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.push(Timing { step: step.to_string(), millis: t.elapsed().as_millis() });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::JsonLines => self.render_json_lines(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case: {}", self.case);
        let _ = writeln!(s, "version: {}", self.version);
        for i in &self.inputs {
            let _ = writeln!(s, "input: {} = {}", i.name, i.value);
        }
        for c in &self.checks {
            let dom = c.domain.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default();
            let mark = if c.matches { "ok" } else { "MISMATCH" };
            let _ = writeln!(s, "check: {}{dom}: {} (expected {}) {mark}", c.name, c.status, c.expected.join(" | "));
            if let Some(d) = &c.detail {
                for line in d.lines() {
                    let _ = writeln!(s, "    {line}");
                }
            }
            for f in &c.certificates {
                let _ = writeln!(s, "    certificate: {f}");
            }
        }
        for c in &self.certificates {
            let _ = writeln!(
                s,
                "certificate: {} [{}] {} revalidated={}",
                c.file, c.domain, c.target, c.revalidated
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for t in &self.timings {
            let _ = writeln!(s, "time: {} {} ms", t.step, t.millis);
        }
        let _ = writeln!(s, "result: {}", if self.success() { "PASS" } else { "FAIL" });
        s
    }

    fn render_json_lines(&self) -> String {
        let mut lines = vec![serde_json::json!({"type": "case", "case": self.case, "version": self.version})];
        lines.extend(self.inputs.iter().map(|i| serde_json::json!({"type": "input", "input": i})));
        lines.extend(self.checks.iter().map(|c| serde_json::json!({"type": "check", "check": c})));
        lines.extend(self.certificates.iter().map(|c| serde_json::json!({"type": "certificate", "certificate": c})));
        lines.extend(self.notes.iter().map(|n| serde_json::json!({"type": "note", "note": n})));
        lines.extend(self.timings.iter().map(|t| serde_json::json!({"type": "timing", "timing": t})));
        lines.push(serde_json::json!({"type": "result", "success": self.success()}));
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Directory layout of one case: `<out>/<case>/report.*` and
/// `<out>/<case>/certificates/*.cert`.
pub struct CaseDir {
    root: PathBuf,
}

impl CaseDir {
    pub fn create(out: &Path, case: &str) -> Result<Self, CliError> {
        let name: String = case.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '-' }).collect();
        let root = out.join(name);
        fs::create_dir_all(root.join("certificates")).map_err(|e| CliError::Io(format!("{}: {e}", root.display())))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Write a certificate, read it back and verify the copy on disk.
    pub fn persist(&self, report: &mut CaseStudyReport, stem: &str, cert: &MembershipCertificate) -> Result<String, CliError> {
        let file = format!("certificates/{stem}.cert");
        let path = self.root.join(&file);
        cert.write(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let revalidated = MembershipCertificate::read(&path).map(|c| verify_certificate(&c)).unwrap_or(false);
        report.certificates.push(CertificateRecord {
            file: file.clone(),
            domain: cert.domain.to_string(),
            target: cert.target.to_string(),
            revalidated,
        });
        Ok(file)
    }

    pub fn write_report(&self, report: &CaseStudyReport, format: Format) -> Result<PathBuf, CliError> {
        let path = self.root.join(match format {
            Format::Text => "report.txt",
            Format::JsonLines => "report.jsonl",
        });
        fs::write(&path, report.render(format)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
