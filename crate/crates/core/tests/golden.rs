//! Every named experiment at default parameters against its stored report.
//! Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;

use expoly::experiments::{run_experiment, ExperimentConfig, OutputFormat, Verdict, EXPERIMENTS};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.txt"))
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in EXPERIMENTS {
        let report = run_experiment(&ExperimentConfig::new(name)).unwrap();
        assert!(report.ok(), "{name}: {}", report.render(OutputFormat::Text));
        let text = report.render(OutputFormat::Structured);
        let path = golden_path(name);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, expected, "{name} differs from its golden file");
    }
}

#[test]
fn parallel_and_sequential_reports_agree() {
    for name in EXPERIMENTS {
        let mut cfg = ExperimentConfig::new(name);
        let seq = run_experiment(&cfg).unwrap();
        cfg.parallel = true;
        let par = run_experiment(&cfg).unwrap();
        assert_eq!(
            seq.render(OutputFormat::Structured),
            par.render(OutputFormat::Structured),
            "{name}"
        );
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = ExperimentConfig::new("xy-not-eradical");
    let a = run_experiment(&cfg).unwrap().render(OutputFormat::Structured);
    let b = run_experiment(&cfg).unwrap().render(OutputFormat::Structured);
    assert_eq!(a, b);
}

#[test]
fn timings_only_on_request() {
    let mut cfg = ExperimentConfig::new("no-prime-above");
    let r = run_experiment(&cfg).unwrap();
    assert!(r.steps.iter().all(|s| s.millis.is_none()));
    cfg.timings = true;
    let r = run_experiment(&cfg).unwrap();
    assert!(r.steps.iter().all(|s| s.millis.is_some()));
}

#[test]
fn negative_claims_record_their_bounds() {
    for name in EXPERIMENTS {
        let r = run_experiment(&ExperimentConfig::new(name)).unwrap();
        for s in r.steps.iter().filter(|s| s.verdict == Verdict::NotFound) {
            assert!(s.depth.is_some() && s.budget.is_some(), "{name}/{}", s.label);
        }
        for s in r.steps.iter().filter(|s| s.verdict == Verdict::Proved) {
            assert!(s.certificate.is_some(), "{name}/{}", s.label);
        }
    }
}
