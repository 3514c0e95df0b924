use resfin::cli::{run_case_study, CaseOptions, CaseStudyReport, Format};

fn run(name: &str, format: Format) -> (tempfile::TempDir, CaseStudyReport) {
    let tmp = tempfile::tempdir().unwrap();
    let opts = CaseOptions { out: tmp.path().to_path_buf(), format, ..CaseOptions::default() };
    let r = run_case_study(name, &opts).unwrap();
    assert!(r.success(), "{}", r.render(Format::Text));
    (tmp, r)
}

#[test]
fn s5_case_study() {
    let (tmp, r) = run("s5", Format::Text);
    for d in ["fp:2", "fp:3", "fp:5"] {
        let c = r.checks.iter().find(|c| c.domain.as_deref() == Some(d)).unwrap();
        assert_eq!(c.status, "TRIVIAL");
        assert_eq!(c.certificates.len(), 4);
        for f in &c.certificates {
            assert!(tmp.path().join("s5").join(f).exists());
        }
    }
    assert!(r.certificates.iter().all(|c| c.revalidated));
    let searches: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("separating")).collect();
    assert_eq!(searches.len(), 5);
    assert!(searches[..4].iter().all(|c| c.status == "NONE"));
    assert_eq!(searches[4].status, "WITNESS");
}

#[test]
fn s4_witness_records_which_group_matches() {
    let (_tmp, r) = run("s4-witness", Format::JsonLines);
    assert_eq!(r.check("S4 isomorphic to PSL2(F3)").unwrap().status, "REFUTED");
    assert_eq!(r.check("largest image of S4 in PGL2(Z/3)").unwrap().status, "24");
    assert_eq!(r.check("retraction check for Z/3 -> R'").unwrap().status, "INJECTIVE");
}

#[test]
fn quaternionic_case_studies() {
    let (_t, r) = run("quaternion-finite", Format::Text);
    assert_eq!(r.check("holonomy image").unwrap().status, "Q8");
    assert!(r.inputs.iter().any(|i| i.name == "convention" && i.value.starts_with("cyclic")));
    let (_t, r) = run("quaternion-rational", Format::Text);
    assert_eq!(r.check("holonomy image").unwrap().status, "V4");
}

#[test]
fn parametrised_case_studies() {
    for k in 2..=6 {
        let (_t, r) = run(&format!("dihedral:{k}"), Format::Text);
        assert_eq!(r.checks[1].status, (2 * k).to_string());
    }
    for n in [2, 3, 5, 6] {
        run(&format!("abelian:{n}"), Format::Text);
    }
    let (_t, r) = run("free-sl2z:5", Format::Text);
    assert_eq!(r.check("word count").unwrap().status, "484");
}

#[test]
fn reports_are_written_in_the_chosen_format() {
    let (tmp, r) = run("lift-demo", Format::JsonLines);
    let text = std::fs::read_to_string(tmp.path().join("lift-demo/report.jsonl")).unwrap();
    assert_eq!(text, r.render(Format::JsonLines));
    assert_eq!(text.lines().count(), 1 + r.inputs.len() + r.checks.len() + r.certificates.len() + r.notes.len() + r.timings.len() + 1);
    assert!(!tmp.path().join("lift-demo/report.txt").exists());
}
