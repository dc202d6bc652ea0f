//! Seeded property suites over every module, with independent oracles.
//!
//! Each suite draws its cases from its own ChaCha stream derived from the
//! seed, so results do not depend on the order or concurrency in which
//! suites run.

mod oracle;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::base::{int, rat, BaseCoeff, Rational};
use crate::eideal::{
    prove_membership, stage_membership, stage_membership_in, EIdealPresentation, MembershipCertificate,
    SaturationPolicy, StageVerdict, Step,
};
use crate::epoly::{format_epoly, parse_epoly, EPoly, Vars};
use crate::laurent::{
    extract_lattice, laurent_membership, replay_residual, LMono, LaurentPoly, MembershipOptions, MonomialOrder,
};

pub const SUITES: [&str; 8] = [
    "ring-axioms",
    "exp-homomorphism",
    "canonical-form",
    "parse-format",
    "encode-decode",
    "groebner-oracle",
    "verdict-invariance",
    "certificate-mutation",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Cases for the randomized suites.
    pub cases: usize,
    /// Instances compared against the linear-algebra oracle.
    pub oracle_instances: usize,
    pub mutations: usize,
    pub parallel: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            cases: 1000,
            oracle_instances: 60,
            mutations: 100,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, for diagnosis.
    pub first_failure: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "expoly-selftest v1");
        let _ = writeln!(out, "seed: {}", self.seed);
        for s in &self.suites {
            let verdict = if s.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{}: {verdict} ({} cases, {} failures)", s.name, s.cases, s.failures);
            for n in &s.notes {
                let _ = writeln!(out, "    {n}");
            }
            if let Some(f) = &s.first_failure {
                let _ = writeln!(out, "    first failure: {f}");
            }
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            first: None,
            notes: vec![],
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first,
            notes: self.notes,
        }
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let run = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
        match SUITES[i] {
            "ring-axioms" => ring_axioms(&mut rng, cfg.cases),
            "exp-homomorphism" => exp_homomorphism(&mut rng, cfg.cases),
            "canonical-form" => canonical_form(&mut rng, cfg.cases),
            "parse-format" => parse_format(&mut rng, cfg.cases),
            "encode-decode" => encode_decode(&mut rng, cfg.cases),
            "groebner-oracle" => groebner_oracle(&mut rng, cfg.oracle_instances),
            "verdict-invariance" => verdict_invariance(&mut rng),
            _ => certificate_mutation(&mut rng, cfg.mutations),
        }
    };
    let suites = if cfg.parallel {
        (0..SUITES.len()).into_par_iter().map(run).collect()
    } else {
        (0..SUITES.len()).map(run).collect()
    };
    SelftestReport { seed: cfg.seed, suites }
}

/// Shape of random exponential polynomials.
#[derive(Clone, Copy)]
struct Shape {
    nvars: usize,
    height: u32,
    terms: usize,
    degree: u32,
    symbols: bool,
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-5i64..=5);
    let d = if rng.gen_bool(0.2) { rng.gen_range(2i64..=3) } else { 1 };
    rat(if n == 0 { 1 } else { n }, d)
}

fn random_coeff(rng: &mut ChaCha8Rng, symbols: bool) -> BaseCoeff {
    let r = random_rational(rng);
    if symbols && rng.gen_bool(0.25) {
        BaseCoeff::symbol(rng.gen_range(0..2)).scale(&r)
    } else {
        BaseCoeff::from_rational(r)
    }
}

fn random_epoly(rng: &mut ChaCha8Rng, s: Shape) -> EPoly {
    let mut p = EPoly::zero(s.nvars);
    let terms = rng.gen_range(0..=s.terms);
    for _ in 0..terms {
        let mut t = EPoly::from_coeff(s.nvars, random_coeff(rng, s.symbols));
        for i in 0..s.nvars {
            let e = rng.gen_range(0..=s.degree);
            if e > 0 {
                t = &t * &EPoly::var(s.nvars, i).pow(e);
            }
        }
        if s.height > 0 && rng.gen_bool(0.6) {
            let inner = Shape {
                height: rng.gen_range(0..s.height),
                terms: 2,
                degree: 1,
                ..s
            };
            t = &t * &random_epoly(rng, inner).exp_apply();
        }
        p = &p + &t;
    }
    p
}

fn shape(rng: &mut ChaCha8Rng, symbols: bool) -> Shape {
    Shape {
        nvars: rng.gen_range(1..=3),
        height: rng.gen_range(0..=2),
        terms: 4,
        degree: 2,
        symbols,
    }
}

fn ring_axioms(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("ring-axioms");
    for _ in 0..cases {
        let s = shape(rng, true);
        let (p, q, r) = (random_epoly(rng, s), random_epoly(rng, s), random_epoly(rng, s));
        let zero = EPoly::zero(s.nvars);
        let one = EPoly::one(s.nvars);
        let ok = &p + &q == &q + &p
            && &p * &q == &q * &p
            && &(&p + &q) + &r == &p + &(&q + &r)
            && &(&p * &q) * &r == &p * &(&q * &r)
            && &p * &(&q + &r) == &(&p * &q) + &(&p * &r)
            && &p + &zero == p
            && &p * &one == p
            && (&p * &zero).is_zero()
            && (&p + &(-&p)).is_zero();
        t.check(ok, || format!("p = {p}, q = {q}, r = {r}"));
    }
    t.finish()
}

fn exp_homomorphism(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("exp-homomorphism");
    for _ in 0..cases {
        let s = shape(rng, true);
        let (p, q) = (random_epoly(rng, s), random_epoly(rng, s));
        let sum = (&p + &q).exp_apply();
        let prod = &p.exp_apply() * &q.exp_apply();
        let neg = &p.exp_apply() * &(-&p).exp_apply();
        let ok = sum == prod
            && EPoly::zero(s.nvars).exp_apply().is_one()
            && neg.is_one()
            && sum.validate().is_ok();
        t.check(ok, || format!("p = {p}, q = {q}"));
    }
    t.finish()
}

fn canonical_form(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("canonical-form");
    for _ in 0..cases {
        let s = shape(rng, true);
        let (p, q) = (random_epoly(rng, s), random_epoly(rng, s));
        let sum = &p + &q;
        let prod = &p * &q;
        let ok = (&p - &p).is_zero()
            && &sum - &q == p
            && p.validate().is_ok()
            && sum.validate().is_ok()
            && prod.validate().is_ok()
            && p.exp_minus_one().validate().is_ok();
        t.check(ok, || format!("p = {p}, q = {q}"));
    }
    t.finish()
}

fn parse_format(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("parse-format");
    for _ in 0..cases {
        let s = shape(rng, true);
        let p = random_epoly(rng, s);
        let vars = Vars::standard(s.nvars);
        let text = format_epoly(&p, &vars);
        let back = parse_epoly(&text, &vars);
        t.check(back.as_ref().ok() == Some(&p), || format!("`{text}` read back as {back:?}"));
    }
    t.finish()
}

fn encode_decode(rng: &mut ChaCha8Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("encode-decode");
    for _ in 0..cases {
        let s = shape(rng, false);
        let (p, q) = (random_epoly(rng, s), random_epoly(rng, s));
        let prod = &p * &q;
        let lattice = extract_lattice(s.nvars, &[p.clone(), q.clone(), prod.clone()]);
        let ok = match (lattice.encode(&p), lattice.encode(&q), lattice.encode(&prod)) {
            (Ok(a), Ok(b), Ok(c)) => lattice.decode(&a) == p && a.mul(&b) == c,
            _ => false,
        };
        t.check(ok, || format!("p = {p}, q = {q}"));
    }
    t.finish()
}

/// Random homogeneous polynomial of degree `d` in `n` variables.
fn random_form(rng: &mut ChaCha8Rng, n: usize, d: u32, terms: usize) -> LaurentPoly {
    let monos = oracle::monomials(n, d);
    let mut f = LaurentPoly::zero(n, 0);
    for _ in 0..terms {
        let m = monos.choose(rng).expect("at least one monomial").clone();
        f.add_term(LMono { x: m, u: vec![] }, int(rng.gen_range(-3..=3)));
    }
    f
}

fn groebner_oracle(rng: &mut ChaCha8Rng, instances: usize) -> SuiteResult {
    let mut t = Tally::new("groebner-oracle");
    let (mut yes, mut no) = (0, 0);
    let opts = MembershipOptions::default();
    for _ in 0..instances {
        let n = rng.gen_range(2..=3);
        let ngens = rng.gen_range(1..=n - 1);
        let gens: Vec<LaurentPoly> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=2);
                random_form(rng, n, d, 3)
            })
            .collect();
        let d = rng.gen_range(2..=4);
        let target = if rng.gen_bool(0.5) {
            let mut f = LaurentPoly::zero(n, 0);
            for g in &gens {
                let gd = g.terms().next().map_or(0, |(m, _)| m.x.iter().sum::<u32>());
                if gd <= d && !g.is_zero() {
                    f = f.add(&random_form(rng, n, d - gd, 2).mul(g));
                }
            }
            f
        } else {
            random_form(rng, n, d, 3)
        };
        let expected = oracle::in_ideal_homogeneous(&target, &gens, d);
        let got = laurent_membership(&target, &gens, opts);
        let ok = match &got {
            Ok(v) if v.is_in() == expected => match v {
                crate::laurent::MembershipVerdict::In { cofactors } => {
                    target.is_zero() || replay_residual(&target, &gens, cofactors).is_zero()
                }
                _ => true,
            },
            _ => false,
        };
        if expected {
            yes += 1;
        } else {
            no += 1;
        }
        t.check(ok, || format!("target {target:?} gens {gens:?}: oracle {expected}, engine {got:?}"));
    }
    t.notes.push(format!("{yes} members, {no} non-members"));
    if yes == 0 || no == 0 {
        t.check(false, || "oracle instances cover only one verdict".into());
    }
    t.finish()
}

/// Ideal, target and saturation depth in the variables `x, y`.
pub const CORPUS: [(&str, &str, u32); 10] = [
    ("x", "x*(E(y) - 1)", 0),
    ("y", "x*(E(y) - 1)", 1),
    ("x*y", "x*(E(y) - 1)", 1),
    ("E(x) - 1", "E(x/2) - 1", 1),
    ("E(x/2) - 1", "E(x) - 1", 0),
    ("x*y, E(x) + 1, E(y) + 1", "2", 1),
    ("x^2 - y", "x^4 - y^2", 0),
    ("x - 1", "E(x) - 1", 1),
    ("x + E(y)", "x^2 - E(2*y)", 0),
    ("E(x) - 2, y", "E(x+y) - 2", 1),
];

fn corpus_case(i: usize) -> (EIdealPresentation, EPoly, u32) {
    let (ideal, target, depth) = CORPUS[i];
    let vars = Vars::standard(2);
    let gens = crate::epoly::parse_list(ideal, &vars).expect("corpus parses");
    let target = parse_epoly(target, &vars).expect("corpus parses");
    (EIdealPresentation::new(2, gens).expect("corpus arity"), target, depth)
}

fn replays(target: &EPoly, elements: &[EPoly], v: &StageVerdict) -> bool {
    match v {
        StageVerdict::In(cof) => {
            let sum = cof
                .iter()
                .fold(EPoly::zero(target.nvars()), |acc, (m, i)| &acc + &(m * &elements[*i]));
            &sum == target
        }
        StageVerdict::NotIn(_) => true,
    }
}

fn verdict_invariance(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("verdict-invariance");
    let extra_atoms = {
        let vars = Vars::standard(2);
        crate::epoly::parse_list("x/3, y/2, x*y, E(x)", &vars).expect("atoms parse")
    };
    let mut members = 0;
    for i in 0..CORPUS.len() {
        let (pres, target, depth) = corpus_case(i);
        let policy = SaturationPolicy::with_depth(depth);
        let elements = match crate::eideal::saturate(&pres, &policy) {
            Ok(e) => e,
            Err(e) => {
                t.check(false, || format!("corpus {i}: {e}"));
                continue;
            }
        };
        let base = stage_membership(&target, &elements, MembershipOptions::default());
        let Ok(base) = base else {
            t.check(false, || format!("corpus {i}: {base:?}"));
            continue;
        };
        if base.is_in() {
            members += 1;
        }
        t.check(replays(&target, &elements, &base), || format!("corpus {i}: cofactors do not replay"));
        let expect = base.is_in();

        let mut variants: Vec<(String, Vec<EPoly>)> = vec![];
        let mut rev = elements.clone();
        rev.reverse();
        variants.push(("reversed".into(), rev));
        for k in 0..3 {
            let mut sh = elements.clone();
            sh.shuffle(rng);
            variants.push((format!("shuffle {k}"), sh));
        }
        for (name, els) in &variants {
            let v = stage_membership(&target, els, MembershipOptions::default());
            t.check(
                matches!(&v, Ok(v) if v.is_in() == expect && replays(&target, els, v)),
                || format!("corpus {i} {name}: {v:?}"),
            );
        }
        for order in [MonomialOrder::Lex, MonomialOrder::Block(2), MonomialOrder::Block(1)] {
            let opts = MembershipOptions {
                order,
                ..MembershipOptions::default()
            };
            let v = stage_membership(&target, &elements, opts);
            t.check(
                matches!(&v, Ok(v) if v.is_in() == expect && replays(&target, &elements, v)),
                || format!("corpus {i} {order:?}: {v:?}"),
            );
        }
        let mut all = elements.clone();
        all.push(target.clone());
        let lattice = extract_lattice(2, &all);
        for k in 1..=extra_atoms.len() {
            let bigger = lattice.enlarged(&extra_atoms[..k]);
            let v = stage_membership_in(&target, &elements, &bigger, MembershipOptions::default());
            t.check(
                matches!(&v, Ok(v) if v.is_in() == expect && replays(&target, &elements, v)),
                || format!("corpus {i} enlarged by {k} atoms: {v:?}"),
            );
        }
    }
    t.notes.push(format!("{members} of {} corpus targets are stage members", CORPUS.len()));
    t.finish()
}

fn nonzero_delta(rng: &mut ChaCha8Rng, nvars: usize) -> EPoly {
    let c = EPoly::constant(nvars, random_rational(rng));
    if rng.gen_bool(0.5) {
        &c * &EPoly::var(nvars, rng.gen_range(0..nvars))
    } else {
        c
    }
}

/// Applies one semantic corruption. Every corruption changes the value of
/// the derivation or breaks its structure, so a sound checker rejects all.
fn mutate(
    rng: &mut ChaCha8Rng,
    cert: &MembershipCertificate,
    values: &[EPoly],
    ngens: usize,
    kind: usize,
) -> (MembershipCertificate, &'static str) {
    let mut m = cert.clone();
    let nvars = cert.target.nvars();
    let last = m.steps.len() - 1;
    let live: Vec<usize> = match &m.steps[last] {
        Step::Comb(pairs) => (0..pairs.len()).filter(|&k| !values[pairs[k].1].is_zero()).collect(),
        _ => vec![],
    };
    match (kind % 5, &mut m.steps[last]) {
        (0, Step::Comb(pairs)) if !live.is_empty() => {
            let k = *live.choose(rng).expect("nonempty");
            pairs[k].0 = &pairs[k].0 + &nonzero_delta(rng, nvars);
            (m, "multiplier")
        }
        (1, Step::Comb(pairs)) if !pairs.is_empty() => {
            let k = rng.gen_range(0..pairs.len());
            let old = pairs[k].1;
            let other = (0..last).find(|&j| values[j] != values[old]);
            match other {
                Some(j) => {
                    pairs[k].1 = j;
                    (m, "retarget")
                }
                None => {
                    pairs[k].1 = last + 1 + rng.gen_range(0..3);
                    (m, "dangling-ref")
                }
            }
        }
        (2, Step::Comb(pairs)) if !pairs.is_empty() => {
            let k = rng.gen_range(0..pairs.len());
            pairs[k].1 = last + rng.gen_range(0..3);
            (m, "forward-ref")
        }
        (3, _) => {
            let gen_steps: Vec<usize> = (0..m.steps.len()).filter(|&j| matches!(m.steps[j], Step::Gen(_))).collect();
            match gen_steps.choose(rng) {
                Some(&j) => {
                    m.steps[j] = Step::Gen(ngens + rng.gen_range(0..3));
                    (m, "generator-index")
                }
                None => {
                    m.target = &m.target + &nonzero_delta(rng, nvars);
                    (m, "target")
                }
            }
        }
        _ => {
            m.target = &m.target + &nonzero_delta(rng, nvars);
            (m, "target")
        }
    }
}

fn certificate_mutation(rng: &mut ChaCha8Rng, mutations: usize) -> SuiteResult {
    let mut t = Tally::new("certificate-mutation");
    let mut base: Vec<(EIdealPresentation, MembershipCertificate, Vec<EPoly>)> = vec![];
    for i in 0..CORPUS.len() {
        let (pres, target, depth) = corpus_case(i);
        if let Ok(v) = prove_membership(&target, &pres, &SaturationPolicy::with_depth(depth)) {
            if let Some(c) = v.certificate() {
                if c.verify(&pres, &target).is_ok() {
                    let values = c.replay(&pres).expect("valid certificates replay");
                    base.push((pres, c.clone(), values));
                }
            }
        }
    }
    if base.is_empty() {
        t.check(false, || "no base certificates".into());
        return t.finish();
    }
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    for i in 0..mutations {
        let (pres, cert, values) = &base[i % base.len()];
        let (bad, kind) = mutate(rng, cert, values, pres.gens().len(), i / base.len() + i);
        *kinds.entry(kind).or_default() += 1;
        let verdict = bad.verify(pres, &bad.target);
        t.check(verdict.is_err(), || format!("{kind} mutation accepted: {bad:?}"));
    }
    t.notes.push(format!("{} base certificates", base.len()));
    let kinds: Vec<String> = kinds.iter().map(|(k, n)| format!("{k} {n}")).collect();
    t.notes.push(format!("mutations: {}", kinds.join(", ")));
    t.finish()
}
