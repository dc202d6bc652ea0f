//! Strict Horn clauses over the signature `{+, -, *, e, 0, 1}` and bounded
//! forward chaining.

use std::collections::BTreeMap;
use std::fmt;

use crate::epoly::{EPoly, GMonomial};
use crate::base::BaseCoeff;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Zero,
    One,
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Exp(Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn exp(a: Term) -> Term {
        Term::Exp(Box::new(a))
    }

    pub fn eval(&self, assign: &[EPoly], nvars: usize) -> EPoly {
        match self {
            Term::Var(i) => assign[*i].clone(),
            Term::Zero => EPoly::zero(nvars),
            Term::One => EPoly::one(nvars),
            Term::Add(a, b) => &a.eval(assign, nvars) + &b.eval(assign, nvars),
            Term::Sub(a, b) => &a.eval(assign, nvars) - &b.eval(assign, nvars),
            Term::Mul(a, b) => &a.eval(assign, nvars) * &b.eval(assign, nvars),
            Term::Exp(a) => a.eval(assign, nvars).exp_apply(),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Zero | Term::One => None,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => a.max_var().max(b.max_var()),
            Term::Exp(a) => a.max_var(),
        }
    }

    fn has_exp(&self) -> bool {
        match self {
            Term::Var(_) | Term::Zero | Term::One => false,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => a.has_exp() || b.has_exp(),
            Term::Exp(_) => true,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) | Term::Sub(..) => 1,
            Term::Mul(..) => 2,
            _ => 3,
        }
    }
}

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |t: &Term, min: u8, f: &mut fmt::Formatter<'_>| {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Var(i) => match VAR_NAMES.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "v{i}"),
            },
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Add(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " + ")?;
                wrap(b, 2, f)
            }
            Term::Sub(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " - ")?;
                wrap(b, 2, f)
            }
            Term::Mul(a, b) => {
                wrap(a, 2, f)?;
                write!(f, "*")?;
                wrap(b, 3, f)
            }
            Term::Exp(a) => write!(f, "e^({a})"),
        }
    }
}

/// `premises[0] ∧ ... → conclusion`; a clause with no premises is a fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClause {
    pub premises: Vec<Term>,
    pub conclusion: Term,
}

impl HornClause {
    pub fn new(premises: Vec<Term>, conclusion: Term) -> Self {
        HornClause { premises, conclusion }
    }

    pub fn arity(&self) -> usize {
        self.premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .filter_map(Term::max_var)
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Variables occurring as a whole premise; these range over facts only.
    fn bare_vars(&self) -> Vec<bool> {
        let mut out = vec![false; self.arity()];
        for p in &self.premises {
            if let Term::Var(i) = p {
                out[*i] = true;
            }
        }
        out
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "{} -> ", ps.join(" & "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub name: String,
    pub clauses: Vec<HornClause>,
}

impl RuleSet {
    /// `0`, `x ∧ y → x - y`, `x → xy`.
    pub fn ideal() -> Self {
        RuleSet {
            name: "IDEAL".into(),
            clauses: ideal_clauses(),
        }
    }

    /// The ideal clauses and `x → e^x - 1`.
    pub fn eideal() -> Self {
        let mut clauses = ideal_clauses();
        clauses.push(HornClause::new(
            vec![Term::var(0)],
            Term::sub(Term::exp(Term::var(0)), Term::One),
        ));
        RuleSet {
            name: "EIDEAL".into(),
            clauses,
        }
    }

    /// The ideal clauses and `x*x → x`.
    pub fn radical() -> Self {
        let mut clauses = ideal_clauses();
        clauses.push(HornClause::new(
            vec![Term::mul(Term::var(0), Term::var(0))],
            Term::var(0),
        ));
        RuleSet {
            name: "RADICAL".into(),
            clauses,
        }
    }

    pub fn custom(name: &str, clauses: Vec<HornClause>) -> Self {
        RuleSet {
            name: name.into(),
            clauses,
        }
    }
}

fn ideal_clauses() -> Vec<HornClause> {
    vec![
        HornClause::new(vec![], Term::Zero),
        HornClause::new(vec![Term::var(0), Term::var(1)], Term::sub(Term::var(0), Term::var(1))),
        HornClause::new(vec![Term::var(0)], Term::mul(Term::var(0), Term::var(1))),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TradBudget {
    pub rounds: u32,
    /// Total clause instantiations tried, across rounds.
    pub max_instances: u64,
    /// Degree bound for `x` monomials in the term bank.
    pub bank_degree: u32,
}

impl Default for TradBudget {
    fn default() -> Self {
        TradBudget {
            rounds: 2,
            max_instances: 20_000,
            bank_degree: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Element `i` of the input.
    Given(usize),
    Clause {
        clause: usize,
        assignment: Vec<EPoly>,
        /// Indices of the facts matching the premises, in order.
        premises: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub value: EPoly,
    pub justification: Justification,
    /// Nesting of exponential clauses along the derivation.
    pub exp_depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradResult {
    pub elements: Vec<Derived>,
    pub instances: u64,
    /// The instance budget ran out before the last round finished.
    pub exhausted: bool,
}

impl TradResult {
    pub fn contains(&self, p: &EPoly) -> bool {
        self.elements.iter().any(|d| &d.value == p)
    }
}

/// Multipliers for clause variables that are not whole premises:
/// `x` monomials up to `degree` and `E(a)` for the augmentation part `a`
/// of each input.
pub fn term_bank(xs: &[EPoly], nvars: usize, degree: u32) -> Vec<EPoly> {
    let mut bank = Vec::new();
    let mut exps: Vec<Vec<u32>> = vec![vec![0; nvars]];
    let mut frontier = exps.clone();
    for _ in 0..degree {
        let mut next = Vec::new();
        for e in &frontier {
            for i in 0..nvars {
                let mut m = e.clone();
                m[i] += 1;
                if !exps.contains(&m) && !next.contains(&m) {
                    next.push(m);
                }
            }
        }
        exps.extend(next.iter().cloned());
        frontier = next;
    }
    for e in exps {
        bank.push(EPoly::term(
            GMonomial::new(e, EPoly::zero(nvars)),
            BaseCoeff::one(),
        ));
    }
    for x in xs {
        let (_, a) = x.split_constant();
        if !a.is_zero() {
            let t = a.exp_apply();
            if !bank.contains(&t) {
                bank.push(t);
            }
        }
    }
    bank
}

/// Forward chaining of `rules` from `xs`. Each round instantiates every
/// clause over the facts known at the start of the round; variables that
/// are whole premises range over facts, the others over facts and the
/// term bank. Instantiations are enumerated in a fixed order and counted
/// globally, so a larger budget yields a superset.
pub fn trad_bounded(rules: &RuleSet, xs: &[EPoly], nvars: usize, budget: TradBudget) -> Result<TradResult> {
    for x in xs {
        if x.nvars() != nvars {
            return Err(Error::VarMismatch {
                left: nvars,
                right: x.nvars(),
            });
        }
    }
    let bank = term_bank(xs, nvars, budget.bank_degree);
    let mut elements: Vec<Derived> = Vec::new();
    let mut index: BTreeMap<EPoly, usize> = BTreeMap::new();
    for (i, x) in xs.iter().enumerate() {
        if !index.contains_key(x) {
            index.insert(x.clone(), elements.len());
            elements.push(Derived {
                value: x.clone(),
                justification: Justification::Given(i),
                exp_depth: 0,
            });
        }
    }
    let mut instances = 0u64;
    for _ in 0..budget.rounds {
        let facts: Vec<EPoly> = elements.iter().map(|d| d.value.clone()).collect();
        let snapshot = index.clone();
        let mut wide = facts.clone();
        for b in &bank {
            if !snapshot.contains_key(b) {
                wide.push(b.clone());
            }
        }
        let mut fresh: Vec<Derived> = Vec::new();
        for (ci, clause) in rules.clauses.iter().enumerate() {
            let bare = clause.bare_vars();
            let domains: Vec<&[EPoly]> = bare
                .iter()
                .map(|&b| if b { facts.as_slice() } else { wide.as_slice() })
                .collect();
            if domains.iter().any(|d| d.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; domains.len()];
            loop {
                instances += 1;
                if instances > budget.max_instances {
                    elements.extend(fresh);
                    return Ok(TradResult {
                        elements,
                        instances: budget.max_instances,
                        exhausted: true,
                    });
                }
                let assign: Vec<EPoly> = idx.iter().zip(&domains).map(|(&k, d)| d[k].clone()).collect();
                let premises: Option<Vec<usize>> = clause
                    .premises
                    .iter()
                    .map(|p| snapshot.get(&p.eval(&assign, nvars)).copied())
                    .collect();
                if let Some(premises) = premises {
                    let value = clause.conclusion.eval(&assign, nvars);
                    if !index.contains_key(&value) {
                        let depth = premises.iter().map(|&p| elements[p].exp_depth).max().unwrap_or(0)
                            + u32::from(clause.conclusion.has_exp());
                        index.insert(value.clone(), elements.len() + fresh.len());
                        fresh.push(Derived {
                            value,
                            justification: Justification::Clause {
                                clause: ci,
                                assignment: assign,
                                premises,
                            },
                            exp_depth: depth,
                        });
                    }
                }
                if !advance(&mut idx, &domains) {
                    break;
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        elements.extend(fresh);
    }
    Ok(TradResult {
        elements,
        instances,
        exhausted: false,
    })
}

fn advance(idx: &mut [usize], domains: &[&[EPoly]]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < domains[k].len() {
            return true;
        }
        idx[k] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoly::{parse_epoly, Vars};

    fn ep(s: &str) -> EPoly {
        parse_epoly(s, &Vars::standard(2)).unwrap()
    }

    #[test]
    fn rule_sets_print() {
        let r: Vec<String> = RuleSet::eideal().clauses.iter().map(|c| c.to_string()).collect();
        assert_eq!(r, vec!["0", "x & y -> x - y", "x -> x*y", "x -> e^(x) - 1"]);
        assert_eq!(RuleSet::radical().clauses[3].to_string(), "x*x -> x");
    }

    #[test]
    fn worked_examples() {
        let b = TradBudget::default();
        let r = trad_bounded(&RuleSet::radical(), &[ep("x^2")], 2, b).unwrap();
        assert!(r.contains(&ep("x")));
        let r = trad_bounded(&RuleSet::ideal(), &[ep("x"), ep("y")], 2, b).unwrap();
        assert!(r.contains(&ep("x - y")));
        assert!(!r.contains(&ep("E(x) - 1")));
        let r = trad_bounded(&RuleSet::eideal(), &[ep("x")], 2, b).unwrap();
        assert!(r.contains(&ep("E(x) - 1")));
        assert!(r.contains(&ep("0")));
    }

    #[test]
    fn monotone_in_budget() {
        let xs = [ep("x*y"), ep("E(x) + 1")];
        let mut prev: Vec<EPoly> = vec![];
        for max in [5, 50, 200, 1000, 5000] {
            let b = TradBudget {
                max_instances: max,
                ..Default::default()
            };
            let r = trad_bounded(&RuleSet::eideal(), &xs, 2, b).unwrap();
            let vals: Vec<EPoly> = r.elements.iter().map(|d| d.value.clone()).collect();
            assert!(vals.starts_with(&prev), "budget {max}");
            prev = vals;
        }
    }

    #[test]
    fn justifications_replay() {
        let rules = RuleSet::eideal();
        let r = trad_bounded(&rules, &[ep("x"), ep("y^2")], 2, TradBudget::default()).unwrap();
        for d in &r.elements {
            if let Justification::Clause {
                clause,
                assignment,
                premises,
            } = &d.justification
            {
                let c = &rules.clauses[*clause];
                assert_eq!(c.conclusion.eval(assignment, 2), d.value);
                for (p, &k) in c.premises.iter().zip(premises) {
                    assert_eq!(p.eval(assignment, 2), r.elements[k].value);
                }
            }
        }
    }

    #[test]
    fn bank() {
        let b = term_bank(&[ep("x + E(y) + 3")], 2, 2);
        assert_eq!(b.len(), 7);
        assert!(b.contains(&ep("x*y")));
        assert!(b.contains(&ep("E(x + E(y))")));
    }
}
