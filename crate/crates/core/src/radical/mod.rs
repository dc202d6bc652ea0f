//! Horn-clause closures, the level-`n` radical operator, and bounded
//! refutation of E-radicality.

mod certificate;
mod conditions;
mod horn;

pub use certificate::{
    check_radical_certificate, parse_radical_certificate, PrimeSplit, RadicalCertificate, RadicalStep,
};
pub use conditions::{
    check_prime_conditions, tilde_substitute, Cond3Violation, ConditionBounds, ConditionsReport, UserAssertions,
    MAX_LISTED,
};
pub use horn::{term_bank, trad_bounded, Derived, HornClause, Justification, RuleSet, Term, TradBudget, TradResult};

use crate::base::BaseCoeff;
use crate::eideal::{prove_membership, BoundedVerdict, EIdealPresentation, MembershipCertificate, SaturationPolicy};
use crate::epoly::{EPoly, GMonomial};
use crate::error::Result;

/// Factorizations `g = b1 * b2` read off the shape of `g`: the common
/// monomial `x^m` of its terms is split as `x^c * (g / x^c)` for
/// `0 < c <= m`, largest `c` first in graded lex order, skipping unit
/// cofactors and swapped repeats.
pub fn syntactic_splits(g: &EPoly) -> Vec<(EPoly, EPoly)> {
    let n = g.nvars();
    let Some(mut common) = g.terms().next().map(|(m, _)| m.xexp().to_vec()) else {
        return vec![];
    };
    for (m, _) in g.terms() {
        for (c, &e) in common.iter_mut().zip(m.xexp()) {
            *c = (*c).min(e);
        }
    }
    let mut divisors: Vec<Vec<u32>> = vec![vec![]];
    for &e in &common {
        divisors = divisors
            .into_iter()
            .flat_map(|d| {
                (0..=e).map(move |k| {
                    let mut d = d.clone();
                    d.push(k);
                    d
                })
            })
            .collect();
    }
    divisors.retain(|d| d.iter().any(|&k| k > 0));
    divisors.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    let mut out: Vec<(EPoly, EPoly)> = Vec::new();
    for c in divisors {
        let b1 = EPoly::term(GMonomial::new(c.clone(), EPoly::zero(n)), BaseCoeff::one());
        let b2 = EPoly::from_terms(
            n,
            g.terms().map(|(m, coef)| {
                let xe: Vec<u32> = m.xexp().iter().zip(&c).map(|(a, b)| a - b).collect();
                (GMonomial::new(xe, m.exparg().clone()), coef.clone())
            }),
        );
        if is_unit(&b2) || out.iter().any(|(p, q)| p == &b2 && q == &b1) {
            continue;
        }
        out.push((b1, b2));
    }
    out
}

/// Single terms without `x` are units: `c * t^a` with `c` rational.
fn is_unit(p: &EPoly) -> bool {
    p.num_terms() == 1
        && p
            .terms()
            .all(|(m, c)| m.xexp().iter().all(|&e| e == 0) && c.as_rational().is_some())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadicalVerdict {
    Proved(RadicalCertificate),
    NotFound { max_level: u32, depth: u32 },
}

impl RadicalVerdict {
    pub fn certificate(&self) -> Option<&RadicalCertificate> {
        match self {
            RadicalVerdict::Proved(c) => Some(c),
            RadicalVerdict::NotFound { .. } => None,
        }
    }
}

/// Searches for a certificate of `target` in the level-`max_level`
/// radical of `X`. Levels are tried from the bottom; splits come from
/// [`syntactic_splits`] of the generators. The returned certificate has the
/// lowest level found.
pub fn erad_search(target: &EPoly, pres: &EIdealPresentation, max_level: u32, policy: &SaturationPolicy) -> Result<RadicalVerdict> {
    for level in 0..=max_level {
        if let Some(c) = search_at(target, pres, level, policy)? {
            return Ok(RadicalVerdict::Proved(c));
        }
    }
    Ok(RadicalVerdict::NotFound {
        max_level,
        depth: policy.depth,
    })
}

/// A certificate using exactly one split at the top when `level > 0`.
fn search_at(target: &EPoly, pres: &EIdealPresentation, level: u32, policy: &SaturationPolicy) -> Result<Option<RadicalCertificate>> {
    if level == 0 {
        return Ok(match prove_membership(target, pres, policy)? {
            BoundedVerdict::Proved(c) => Some(RadicalCertificate::from_membership(&c, 0)),
            BoundedVerdict::NotFoundUpToDepth { .. } => None,
        });
    }
    let below = |t: &EPoly, p: &EIdealPresentation| -> Result<Option<RadicalCertificate>> {
        for l in 0..level {
            if let Some(c) = search_at(t, p, l, policy)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    };
    for g in pres.gens() {
        for (b1, b2) in syntactic_splits(g) {
            let Some(product) = below(&(&b1 * &b2), pres)? else {
                continue;
            };
            let Some(left) = below(target, &pres.augmented(&b1)?)? else {
                continue;
            };
            let Some(right) = below(target, &pres.augmented(&b2)?)? else {
                continue;
            };
            return Ok(Some(RadicalCertificate {
                level,
                target: target.clone(),
                steps: vec![RadicalStep::Split(Box::new(PrimeSplit {
                    b1,
                    b2,
                    element: target.clone(),
                    product,
                    left,
                    right,
                }))],
            }));
        }
    }
    Ok(None)
}

/// An instance of `b1*b2 ∈ J`, `a ∈ (J, b1)^E ∩ (J, b2)^E`, `a ∉ J` up
/// to the policy depth. With `J` E-radical the last could not happen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub a: EPoly,
    pub b1: EPoly,
    pub b2: EPoly,
    pub product: MembershipCertificate,
    pub left: MembershipCertificate,
    pub right: MembershipCertificate,
    /// Always `NotFoundUpToDepth`.
    pub non_membership: BoundedVerdict,
}

/// Tries the splits of each generator with candidates
/// `b1 (E(b2) - 1)`, `(E(b1) - 1) b2`, `(E(b1) - 1)(E(b2) - 1)`.
pub fn refute_eradical(pres: &EIdealPresentation, policy: &SaturationPolicy) -> Result<Option<Refutation>> {
    for g in pres.gens() {
        for (b1, b2) in syntactic_splits(g) {
            let BoundedVerdict::Proved(product) = prove_membership(&(&b1 * &b2), pres, policy)? else {
                continue;
            };
            let (with_b1, with_b2) = (pres.augmented(&b1)?, pres.augmented(&b2)?);
            let candidates = [
                &b1 * &b2.exp_minus_one(),
                &b1.exp_minus_one() * &b2,
                &b1.exp_minus_one() * &b2.exp_minus_one(),
            ];
            for a in candidates {
                let BoundedVerdict::Proved(left) = prove_membership(&a, &with_b1, policy)? else {
                    continue;
                };
                let BoundedVerdict::Proved(right) = prove_membership(&a, &with_b2, policy)? else {
                    continue;
                };
                let nm = prove_membership(&a, pres, policy)?;
                if nm.is_proved() {
                    continue;
                }
                return Ok(Some(Refutation {
                    a,
                    b1,
                    b2,
                    product: product.clone(),
                    left,
                    right,
                    non_membership: nm,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eideal::{check_certificate, CertError};
    use crate::epoly::{parse_epoly, parse_list, Vars};

    fn ep(s: &str) -> EPoly {
        parse_epoly(s, &Vars::standard(2)).unwrap()
    }

    fn pres(s: &str) -> EIdealPresentation {
        EIdealPresentation::new(2, parse_list(s, &Vars::standard(2)).unwrap()).unwrap()
    }

    fn no_prime_above() -> (EIdealPresentation, RadicalCertificate) {
        let x = pres("x*y, E(x) + 1, E(y) + 1");
        let two = ep("2");
        let left = RadicalCertificate {
            level: 0,
            target: two.clone(),
            steps: vec![
                RadicalStep::Gen(1),
                RadicalStep::Gen(3),
                RadicalStep::Exp(1),
                RadicalStep::Comb(vec![(ep("1"), 0), (ep("-1"), 2)]),
            ],
        };
        let right = RadicalCertificate {
            steps: vec![
                RadicalStep::Gen(2),
                RadicalStep::Gen(3),
                RadicalStep::Exp(1),
                RadicalStep::Comb(vec![(ep("1"), 0), (ep("-1"), 2)]),
            ],
            ..left.clone()
        };
        let product = RadicalCertificate {
            level: 0,
            target: ep("x*y"),
            steps: vec![RadicalStep::Gen(0)],
        };
        let cert = RadicalCertificate {
            level: 1,
            target: two.clone(),
            steps: vec![RadicalStep::Split(Box::new(PrimeSplit {
                b1: ep("x"),
                b2: ep("y"),
                element: two,
                product,
                left,
                right,
            }))],
        };
        (x, cert)
    }

    #[test]
    fn hand_built_split_certificate() {
        let (x, cert) = no_prime_above();
        assert_eq!(cert.verify(&x, &ep("2")), Ok(()));
        let mut bad = cert.clone();
        if let RadicalStep::Split(p) = &mut bad.steps[0] {
            p.b2 = ep("x");
        }
        assert!(matches!(
            bad.verify(&x, &ep("2")),
            Err(CertError::Sub { which: "product", .. })
        ));
        let mut flat = cert.clone();
        flat.level = 0;
        assert!(matches!(flat.verify(&x, &ep("2")), Err(CertError::SplitNotAllowed { .. })));
        assert!(check_radical_certificate(&cert.padded(3), &x, &ep("2")));
    }

    #[test]
    fn product_of_x_and_x_is_not_in_stage() {
        // x^2 is outside the stage ideal, so no product certificate exists.
        let x = pres("x*y, E(x) + 1, E(y) + 1");
        let v = prove_membership(&ep("x^2"), &x, &SaturationPolicy::with_depth(2)).unwrap();
        assert!(!v.is_proved());
    }

    #[test]
    fn search_finds_split() {
        let x = pres("x*y, E(x) + 1, E(y) + 1");
        let v = erad_search(&ep("2"), &x, 1, &SaturationPolicy::with_depth(1)).unwrap();
        let c = v.certificate().unwrap();
        assert_eq!(c.level, 1);
        assert!(check_radical_certificate(c, &x, &ep("2")));
        match &c.steps[0] {
            RadicalStep::Split(p) => assert_eq!((&p.b1, &p.b2), (&ep("x"), &ep("y"))),
            s => panic!("{s:?}"),
        }
        let v = erad_search(&ep("2"), &x, 0, &SaturationPolicy::with_depth(1)).unwrap();
        assert_eq!(v, RadicalVerdict::NotFound { max_level: 0, depth: 1 });
    }

    #[test]
    fn search_small_cases() {
        let p = pres("x*y");
        let t = ep("x*(E(y) - 1)");
        let v = erad_search(&t, &p, 1, &SaturationPolicy::with_depth(1)).unwrap();
        assert!(check_radical_certificate(v.certificate().unwrap(), &p, &t));
        let p = pres("x");
        let v = erad_search(&ep("x"), &p, 0, &SaturationPolicy::default()).unwrap();
        assert_eq!(v.certificate().unwrap().steps, vec![RadicalStep::Gen(0)]);
    }

    #[test]
    fn level_zero_agrees_with_membership() {
        let p = pres("y");
        let t = ep("x*E(y) - x");
        let BoundedVerdict::Proved(m) = prove_membership(&t, &p, &SaturationPolicy::with_depth(1)).unwrap() else {
            panic!()
        };
        let r = RadicalCertificate::from_membership(&m, 0);
        assert_eq!(check_radical_certificate(&r, &p, &t), check_certificate(&m, &p, &t));
        assert_eq!(r.as_membership().unwrap(), m);
    }

    #[test]
    fn refutes_xy() {
        let p = pres("x*y");
        let r = refute_eradical(&p, &SaturationPolicy::with_depth(3)).unwrap().unwrap();
        assert_eq!(r.a, ep("x*(E(y) - 1)"));
        assert_eq!((r.b1.clone(), r.b2.clone()), (ep("x"), ep("y")));
        assert!(check_certificate(&r.product, &p, &ep("x*y")));
        assert!(check_certificate(&r.left, &p.augmented(&r.b1).unwrap(), &r.a));
        assert!(check_certificate(&r.right, &p.augmented(&r.b2).unwrap(), &r.a));
        assert!(matches!(r.non_membership, BoundedVerdict::NotFoundUpToDepth { depth: 3, .. }));
    }

    #[test]
    fn nothing_to_refute() {
        let pol = SaturationPolicy::with_depth(3);
        assert!(refute_eradical(&pres("x"), &pol).unwrap().is_none());
        let empty = EIdealPresentation::new(2, vec![]).unwrap();
        assert!(refute_eradical(&empty, &pol).unwrap().is_none());
    }

    #[test]
    fn splits() {
        assert_eq!(syntactic_splits(&ep("x*y")), vec![(ep("x"), ep("y"))]);
        assert_eq!(syntactic_splits(&ep("x")), vec![]);
        assert_eq!(syntactic_splits(&ep("E(x) + 1")), vec![]);
        assert_eq!(
            syntactic_splits(&ep("x*E(y) + x^2")),
            vec![(ep("x"), ep("E(y) + x"))]
        );
        assert_eq!(syntactic_splits(&ep("x^2")), vec![(ep("x"), ep("x"))]);
    }

    #[test]
    fn text_round_trip() {
        let (_, cert) = no_prime_above();
        let vars = Vars::standard(2);
        let text = cert.to_text(&vars);
        let (back, v2) = parse_radical_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(&v2), text);
        assert!(parse_radical_certificate(&text.replace("\"split\"", "\"gen\"")).is_err());
    }

    #[test]
    fn eideal_closure_is_engine_provable() {
        let xs = [ep("x*y"), ep("x - y")];
        let r = trad_bounded(&RuleSet::eideal(), &xs, 2, TradBudget::default()).unwrap();
        let p = EIdealPresentation::new(2, xs.to_vec()).unwrap();
        let rules = RuleSet::eideal();
        let mut explicit = Vec::new();
        let mut depth = 0;
        for d in &r.elements {
            depth = depth.max(d.exp_depth);
            if let Justification::Clause { clause: 3, assignment, .. } = &d.justification {
                explicit.push(assignment[0].clone());
            }
        }
        assert_eq!(rules.clauses[3].to_string(), "x -> e^(x) - 1");
        let pol = SaturationPolicy {
            depth,
            rule: crate::eideal::TargetRule::Explicit(explicit),
            ..Default::default()
        };
        for d in &r.elements {
            let v = prove_membership(&d.value, &p, &pol).unwrap();
            assert!(v.is_proved(), "{}", d.value);
        }
    }
}
