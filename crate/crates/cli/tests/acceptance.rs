//! Acceptance criteria 1 to 6. Each prints one PASS or FAIL line; the test
//! fails if any criterion does. Time limits are wall-clock and pinned here.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use expoly::eideal::{
    parse_membership_certificate, BoundedVerdict, EIdealPresentation, SaturationPolicy, MEMBERSHIP_HEADER,
};
use expoly::experiments::{run_experiment, ExperimentConfig, ExperimentReport, StepReport, Verdict};
use expoly::radical::{parse_radical_certificate, refute_eradical};
use expoly::{parse_epoly, parse_list, Vars};

const LIMIT_MEMBER: Duration = Duration::from_secs(1);
const LIMIT_NOT_IN_XY: Duration = Duration::from_secs(30);
const LIMIT_ERAD: Duration = Duration::from_secs(5);
const LIMIT_REFUTE: Duration = Duration::from_secs(10);
const LIMIT_CHAIN: Duration = Duration::from_secs(60);
const LIMIT_ZARISKI_MACINTYRE: Duration = Duration::from_secs(30);
const LIMIT_SELFTEST: Duration = Duration::from_secs(300);

fn expoly(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_expoly"))
        .args(args)
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn certify(file: &Path, ideal: &str, target: &str) -> bool {
    let (o, _) = expoly(&["certify", "--file", file.to_str().unwrap(), "--ideal", ideal, "--target", target]);
    o.status.code() == Some(0)
}

/// Re-checks an embedded certificate against the ideal and target echoed
/// in the step.
fn recheck(step: &StepReport) -> bool {
    let (Some(cert), Some(target)) = (&step.certificate, &step.target) else {
        return false;
    };
    let Ok(vars) = Vars::new(step.vars.clone()) else {
        return false;
    };
    let gens = match step.ideal.iter().map(|g| parse_epoly(g, &vars)).collect::<Result<Vec<_>, _>>() {
        Ok(g) => g,
        Err(_) => return false,
    };
    let (Ok(pres), Ok(target)) = (EIdealPresentation::new(vars.len(), gens), parse_epoly(target, &vars)) else {
        return false;
    };
    if cert.starts_with(MEMBERSHIP_HEADER) {
        matches!(parse_membership_certificate(cert), Ok((c, _)) if c.verify(&pres, &target).is_ok())
    } else {
        matches!(parse_radical_certificate(cert), Ok((c, _)) if c.verify(&pres, &target).is_ok())
    }
}

fn step<'a>(r: &'a ExperimentReport, label: &str) -> Result<&'a StepReport, String> {
    r.step(label).ok_or_else(|| format!("{}: no step `{label}`", r.experiment))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let target = "x*(E(y)-1)";
    let mut notes = vec![];
    for (ideal, depth) in [("x", "0"), ("y", "1")] {
        let file = dir.path().join(format!("{ideal}.cert"));
        let (o, t) = expoly(&["member", "--ideal", ideal, "--target", target, "--depth", depth, "--out", file.to_str().unwrap()]);
        check(o.status.code() == Some(0), || format!("member in ({ideal})^E exited {:?}", o.status.code()))?;
        check(t < LIMIT_MEMBER, || format!("member in ({ideal})^E took {t:?}"))?;
        check(certify(&file, ideal, target), || format!("certificate for ({ideal})^E rejected by certify"))?;
        notes.push(format!("({ideal})^E {:.0?}", t));
    }
    let (o, t) = expoly(&["member", "--ideal", "x*y", "--target", target, "--depth", "3"]);
    let text = stdout(&o);
    check(o.status.code() == Some(1), || format!("(xy)^E exited {:?}", o.status.code()))?;
    check(text.contains("not-found (depth 3"), || format!("(xy)^E report: {text}"))?;
    check(t < LIMIT_NOT_IN_XY, || format!("(xy)^E took {t:?}"))?;
    notes.push(format!("(xy)^E NotFoundUpToDepth(3) {:.0?}", t));
    Ok(notes.join(", "))
}

fn criterion_2() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("erad.cert");
    let ideal = "x*y, E(x)+1, E(y)+1";
    let (o, t) = expoly(&["erad", "--ideal", ideal, "--target", "2", "--level", "1", "--out", file.to_str().unwrap()]);
    let text = stdout(&o);
    check(o.status.code() == Some(0), || format!("erad exited {:?}: {text}", o.status.code()))?;
    check(t < LIMIT_ERAD, || format!("erad took {t:?}"))?;
    check(text.contains("Erad(x*y, E(x) + 1, E(y) + 1) = (1)"), || format!("report: {text}"))?;
    let body = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
    let (cert, vars) = parse_radical_certificate(&body).map_err(|e| e.to_string())?;
    check(cert.level == 1, || format!("level {}", cert.level))?;
    let split = match cert.steps.first() {
        Some(expoly::radical::RadicalStep::Split(s)) => s,
        _ => return Err("first step is not a split".into()),
    };
    let x = parse_epoly("x", &vars).unwrap();
    let y = parse_epoly("y", &vars).unwrap();
    check(split.b1 == x && split.b2 == y, || format!("split ({}, {})", split.b1, split.b2))?;
    check(certify(&file, ideal, "2"), || "certify rejected the radical certificate".into())?;
    Ok(format!("level 1, split (x, y), {:.0?}", t))
}

fn criterion_3() -> Result<String, String> {
    let vars = Vars::standard(2);
    let p = |s: &str| parse_epoly(s, &vars).unwrap();
    let pres = EIdealPresentation::new(2, vec![p("x*y")]).unwrap();
    let start = Instant::now();
    let r = refute_eradical(&pres, &SaturationPolicy::with_depth(3))
        .map_err(|e| e.to_string())?
        .ok_or("no refutation")?;
    let t = start.elapsed();
    check(r.a == p("x*(E(y) - 1)") && r.b1 == p("x") && r.b2 == p("y"), || {
        format!("triple a = {}, b1 = {}, b2 = {}", r.a, r.b1, r.b2)
    })?;
    check(r.product.verify(&pres, &p("x*y")).is_ok(), || "product certificate".into())?;
    let left = pres.augmented(&r.b1).unwrap();
    let right = pres.augmented(&r.b2).unwrap();
    check(r.left.verify(&left, &r.a).is_ok(), || "left certificate".into())?;
    check(r.right.verify(&right, &r.a).is_ok(), || "right certificate".into())?;
    check(
        matches!(r.non_membership, BoundedVerdict::NotFoundUpToDepth { depth: 3, .. }),
        || format!("non-membership {:?}", r.non_membership),
    )?;
    check(t < LIMIT_REFUTE, || format!("took {t:?}"))?;
    Ok(format!("a = x*(E(y) - 1), b1 = x, b2 = y, {:.0?}", t))
}

fn criterion_4() -> Result<String, String> {
    let start = Instant::now();
    for n in 1..=4u32 {
        let mut cfg = ExperimentConfig::new("noetherian-prime-chain");
        cfg.n = Some(n);
        let r = run_experiment(&cfg).map_err(|e| e.to_string())?;
        for i in 0..=n {
            let s = step(&r, &format!("member-{i}"))?;
            check(s.verdict == Verdict::Proved && recheck(s), || format!("n={n}: {} is {:?}", s.claim, s.verdict))?;
        }
        let s = step(&r, &format!("strict-{n}"))?;
        check(s.claim == format!("p{} notin A{n}", n + 1), || s.claim.clone())?;
        check(s.verdict == Verdict::NotFound, || format!("n={n}: {} is {:?}", s.claim, s.verdict))?;
        check(s.depth.is_some() && s.budget.is_some() && s.policy.is_some(), || "bounds not recorded".into())?;
        check(
            s.detail.iter().any(|d| d.starts_with("evaluation point: E(b0*x)=1, E(b1*x)=1, E(b2*x)=-2"))
                && s.detail.iter().any(|d| d == "stage vanishes, target value 3"),
            || format!("n={n}: evaluation cross-check missing: {:?}", s.detail),
        )?;
        let chain: Vec<String> = (0..=n).map(|i| format!("A{i}")).collect();
        check(r.conclusion.starts_with(&chain.join(" ⊊ ")), || r.conclusion.clone())?;
    }
    let t = start.elapsed();
    check(t < LIMIT_CHAIN, || format!("took {t:?}"))?;
    Ok(format!("n = 1..4, strict step evaluates to 3, {:.0?}", t))
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new("zariski-chain");
    cfg.k = Some(5);
    let r = run_experiment(&cfg).map_err(|e| e.to_string())?;
    for j in 1..=5 {
        let s = step(&r, &format!("inclusion-{j}"))?;
        check(s.verdict == Verdict::Proved && recheck(s), || format!("{} is {:?}", s.claim, s.verdict))?;
    }
    // the inclusion at k = 5 itself, against an independent parse
    let vars = Vars::standard(1);
    let s = step(&r, "inclusion-5")?;
    let expected_target = parse_epoly("E(x/24) - 1", &vars).unwrap();
    let expected_ideal = parse_list("E(x/120) - 1", &vars).unwrap();
    check(
        s.target.as_deref().map(|t| parse_epoly(t, &vars).unwrap()) == Some(expected_target)
            && s.ideal.iter().map(|g| parse_epoly(g, &vars).unwrap()).collect::<Vec<_>>() == expected_ideal,
        || format!("inclusion-5 claim: {}", s.claim),
    )?;
    for n in 0..=5u32 {
        let mut cfg = ExperimentConfig::new("macintyre-not-fg");
        cfg.n = Some(n);
        let r = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let s = step(&r, &format!("stage-{n}"))?;
        let expected = format!("E(x/{}) - 1 notin", 1u64 << (n + 1));
        check(s.claim.starts_with(&expected), || s.claim.clone())?;
        check(s.verdict == Verdict::NotFound && s.depth.is_some(), || format!("{} is {:?}", s.claim, s.verdict))?;
    }
    let t = start.elapsed();
    check(t < LIMIT_ZARISKI_MACINTYRE, || format!("took {t:?}"))?;
    Ok(format!("k = 5 inclusions replayed, Macintyre n = 0..5 not found, {:.0?}", t))
}

fn criterion_6() -> Result<String, String> {
    let (o, t) = expoly(&["selftest", "--seed", "0"]);
    let text = stdout(&o);
    check(o.status.code() == Some(0), || format!("selftest exited {:?}:\n{text}", o.status.code()))?;
    let cases = |suite: &str| -> Option<u64> {
        let line = text.lines().find(|l| l.starts_with(&format!("{suite}: pass (")))?;
        line.split('(').nth(1)?.split(' ').next()?.parse().ok()
    };
    for suite in ["ring-axioms", "exp-homomorphism", "canonical-form", "parse-format", "encode-decode"] {
        check(cases(suite).is_some_and(|c| c >= 1000), || format!("{suite}: {text}"))?;
    }
    check(cases("groebner-oracle").is_some_and(|c| c >= 20), || format!("groebner-oracle: {text}"))?;
    check(cases("verdict-invariance").is_some_and(|c| c > 0), || format!("verdict-invariance: {text}"))?;
    check(cases("certificate-mutation") == Some(100), || format!("certificate-mutation: {text}"))?;
    check(text.contains("certificate-mutation: pass (100 cases, 0 failures)"), || text.clone())?;
    check(t < LIMIT_SELFTEST, || format!("took {t:?}"))?;
    Ok(format!("all suites pass, {:.0?}", t))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<String, String>); 6] = [
        ("1 xy counterexample", criterion_1),
        ("2 no prime above", criterion_2),
        ("3 E-radical refutation", criterion_3),
        ("4 prime chain strictness", criterion_4),
        ("5 Zariski and Macintyre chains", criterion_5),
        ("6 property suites", criterion_6),
    ];
    // written to the stdout handle directly so the lines survive output capture
    let mut stdout = std::io::stdout();
    let mut failed = vec![];
    for (name, f) in criteria {
        let line = match f() {
            Ok(note) => format!("PASS criterion {name}: {note}\n"),
            Err(why) => {
                failed.push(name);
                format!("FAIL criterion {name}: {why}\n")
            }
        };
        stdout.write_all(line.as_bytes()).unwrap();
    }
    stdout.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
