//! Run a scripted case study and print its report.
//!
//! `cargo run --example case_study -- dihedral:5`

use resfin::cli::{run_case_study, CaseOptions, Format};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "lift-demo".to_string());
    let opts = CaseOptions { out: std::env::temp_dir().join("resfin-reports"), ..CaseOptions::default() };
    match run_case_study(&name, &opts) {
        Ok(r) => print!("{}", r.render(Format::Text)),
        Err(e) => eprintln!("{e}"),
    }
}
