//! E-ideals given by finitely many generators.
//!
//! The E-ideal generated by `X` is the smallest ideal containing `X` and
//! closed under `a -> E(a) - 1`. It is approached in stages: `G_0 = X`,
//! and `G_(k+1)` adds `E(g) - 1` for the elements `g` of `G_k` chosen by a
//! [`TargetRule`]. Ring-ideal membership in each stage is decided exactly
//! in a Laurent ring, so a negative answer is exact for the stage and says
//! nothing about deeper stages.

mod certificate;

use std::collections::BTreeSet;

pub use certificate::{
    check_certificate, parse_membership_certificate, read_document, CertDoc, CertError, MembershipCertificate,
    Step, StepDoc, MEMBERSHIP_HEADER, RADICAL_HEADER,
};
#[allow(unused_imports)]
pub(crate) use certificate::{check_ref, combine, parse_canonical, render_document, step_from_doc, step_to_doc};

use crate::epoly::EPoly;
use crate::error::{Error, Result};
use crate::laurent::{extract_lattice, laurent_membership, ExponentLattice, MembershipOptions, MembershipVerdict};

/// Generators of an E-ideal. Zero generators and duplicates are dropped;
/// the order of the remaining generators is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EIdealPresentation {
    nvars: usize,
    gens: Vec<EPoly>,
}

impl EIdealPresentation {
    pub fn new(nvars: usize, gens: Vec<EPoly>) -> Result<Self> {
        let mut out = EIdealPresentation { nvars, gens: vec![] };
        for g in gens {
            out.push(g)?;
        }
        Ok(out)
    }

    fn push(&mut self, g: EPoly) -> Result<()> {
        if g.nvars() != self.nvars {
            return Err(Error::VarMismatch {
                left: self.nvars,
                right: g.nvars(),
            });
        }
        if !g.is_zero() && !self.gens.contains(&g) {
            self.gens.push(g);
        }
        Ok(())
    }

    /// `X ∪ {b}`.
    pub fn augmented(&self, b: &EPoly) -> Result<Self> {
        let mut out = self.clone();
        out.push(b.clone())?;
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[EPoly] {
        &self.gens
    }
}

/// Which stage elements receive `a -> E(a) - 1` in each round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetRule {
    /// Every element of the current stage.
    GeneratorsOnly,
    /// Every element and every product of two elements.
    GeneratorsAndProducts,
    /// The listed elements, each once it lies in the ring ideal of the
    /// current stage.
    Explicit(Vec<EPoly>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationPolicy {
    pub depth: u32,
    pub rule: TargetRule,
    pub membership: MembershipOptions,
    /// Largest allowed stage.
    pub max_elements: usize,
    /// Drop unneeded stage elements from certificates.
    pub minimize: bool,
}

impl Default for SaturationPolicy {
    fn default() -> Self {
        SaturationPolicy {
            depth: 0,
            rule: TargetRule::GeneratorsOnly,
            membership: MembershipOptions::default(),
            max_elements: 512,
            minimize: true,
        }
    }
}

impl SaturationPolicy {
    pub fn with_depth(depth: u32) -> Self {
        SaturationPolicy {
            depth,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Origin {
    Gen(usize),
    Exp(usize),
    /// `E(sum m * element) - 1`.
    ExpOf(Vec<(EPoly, usize)>),
}

/// The stages `G_0 ⊆ ... ⊆ G_depth`, stored as one growing list.
#[derive(Clone, Debug)]
pub struct Saturation {
    elements: Vec<EPoly>,
    origins: Vec<Origin>,
    round_ends: Vec<usize>,
}

impl Saturation {
    pub fn compute(pres: &EIdealPresentation, policy: &SaturationPolicy) -> Result<Self> {
        let mut s = Saturation {
            elements: vec![],
            origins: vec![],
            round_ends: vec![],
        };
        let mut seen: BTreeSet<EPoly> = BTreeSet::new();
        for (k, g) in pres.gens().iter().enumerate() {
            s.add(&mut seen, g.clone(), Origin::Gen(k), policy)?;
        }
        s.round_ends.push(s.elements.len());
        let mut expanded: BTreeSet<EPoly> = BTreeSet::new();
        for _ in 0..policy.depth {
            let end = s.elements.len();
            let mut fresh: Vec<(EPoly, Origin)> = Vec::new();
            let mut select = |alpha: EPoly, origin: Origin, expanded: &mut BTreeSet<EPoly>| {
                if expanded.insert(alpha.clone()) {
                    fresh.push((alpha.exp_minus_one(), origin));
                }
            };
            match &policy.rule {
                TargetRule::GeneratorsOnly => {
                    for i in 0..end {
                        select(s.elements[i].clone(), Origin::Exp(i), &mut expanded);
                    }
                }
                TargetRule::GeneratorsAndProducts => {
                    for i in 0..end {
                        select(s.elements[i].clone(), Origin::Exp(i), &mut expanded);
                    }
                    for i in 0..end {
                        for j in i..end {
                            let prod = &s.elements[i] * &s.elements[j];
                            select(prod, Origin::ExpOf(vec![(s.elements[j].clone(), i)]), &mut expanded);
                        }
                    }
                }
                TargetRule::Explicit(list) => {
                    for alpha in list {
                        if expanded.contains(alpha) || alpha.is_zero() {
                            continue;
                        }
                        if let Some(i) = s.elements[..end].iter().position(|e| e == alpha) {
                            select(alpha.clone(), Origin::Exp(i), &mut expanded);
                            continue;
                        }
                        if let StageVerdict::In(cof) =
                            stage_membership(alpha, &s.elements[..end], policy.membership)?
                        {
                            select(alpha.clone(), Origin::ExpOf(cof), &mut expanded);
                        }
                    }
                }
            }
            drop(select);
            for (v, o) in fresh {
                s.add(&mut seen, v, o, policy)?;
            }
            s.round_ends.push(s.elements.len());
        }
        Ok(s)
    }

    fn add(&mut self, seen: &mut BTreeSet<EPoly>, v: EPoly, origin: Origin, policy: &SaturationPolicy) -> Result<()> {
        if v.is_zero() || !seen.insert(v.clone()) {
            return Ok(());
        }
        if self.elements.len() >= policy.max_elements {
            return Err(Error::Budget(format!(
                "saturation stage exceeds {} elements",
                policy.max_elements
            )));
        }
        self.elements.push(v);
        self.origins.push(origin);
        Ok(())
    }

    pub fn depth(&self) -> u32 {
        (self.round_ends.len() - 1) as u32
    }

    /// `G_d`; depths past the computed one give the last stage.
    pub fn stage(&self, d: u32) -> &[EPoly] {
        let d = (d as usize).min(self.round_ends.len() - 1);
        &self.elements[..self.round_ends[d]]
    }

    /// Certificate ending in the given element or combination of elements.
    fn certificate(&self, target: &EPoly, last: CertTail) -> MembershipCertificate {
        let mut steps = Vec::new();
        let mut memo = vec![None; self.elements.len()];
        match last {
            CertTail::Element(i) => {
                self.emit(i, &mut steps, &mut memo);
            }
            CertTail::Comb(terms) => {
                let refs: Vec<(EPoly, usize)> = terms
                    .into_iter()
                    .map(|(m, i)| (m, self.emit(i, &mut steps, &mut memo)))
                    .collect();
                steps.push(Step::Comb(refs));
            }
        }
        MembershipCertificate {
            target: target.clone(),
            steps,
        }
    }

    fn emit(&self, i: usize, steps: &mut Vec<Step>, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(s) = memo[i] {
            return s;
        }
        let step = match &self.origins[i] {
            Origin::Gen(k) => Step::Gen(*k),
            Origin::Exp(src) => Step::Exp(self.emit(*src, steps, memo)),
            Origin::ExpOf(terms) => {
                let refs = terms
                    .iter()
                    .map(|(m, e)| (m.clone(), self.emit(*e, steps, memo)))
                    .collect();
                steps.push(Step::Comb(refs));
                Step::Exp(steps.len() - 1)
            }
        };
        steps.push(step);
        memo[i] = Some(steps.len() - 1);
        steps.len() - 1
    }
}

enum CertTail {
    Element(usize),
    Comb(Vec<(EPoly, usize)>),
}

/// `G_depth`, in order of discovery.
pub fn saturate(pres: &EIdealPresentation, policy: &SaturationPolicy) -> Result<Vec<EPoly>> {
    let s = Saturation::compute(pres, policy)?;
    Ok(s.stage(policy.depth).to_vec())
}

/// Ring-ideal membership of a target in the ideal spanned by a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageVerdict {
    /// `target = sum m * elements[i]`.
    In(Vec<(EPoly, usize)>),
    /// Normal form of the target, decoded back to an exponential polynomial.
    NotIn(EPoly),
}

impl StageVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, StageVerdict::In(_))
    }
}

/// Exact membership of `target` in the ring ideal generated by `elements`
/// over the lattice of their exponents.
pub fn stage_membership(target: &EPoly, elements: &[EPoly], opts: MembershipOptions) -> Result<StageVerdict> {
    let mut all = elements.to_vec();
    all.push(target.clone());
    let lattice = extract_lattice(target.nvars(), &all);
    stage_membership_in(target, elements, &lattice, opts)
}

/// As [`stage_membership`], over a given lattice containing every exponent.
pub fn stage_membership_in(
    target: &EPoly,
    elements: &[EPoly],
    lattice: &ExponentLattice,
    opts: MembershipOptions,
) -> Result<StageVerdict> {
    for e in elements {
        if e.nvars() != target.nvars() {
            return Err(Error::VarMismatch {
                left: target.nvars(),
                right: e.nvars(),
            });
        }
    }
    let f = lattice.encode(target)?;
    let gens = elements.iter().map(|e| lattice.encode(e)).collect::<Result<Vec<_>>>()?;
    Ok(match laurent_membership(&f, &gens, opts)? {
        MembershipVerdict::In { cofactors } => StageVerdict::In(
            cofactors
                .into_iter()
                .map(|(i, c)| (lattice.decode(&c), i))
                .collect(),
        ),
        MembershipVerdict::NotIn { normal_form } => StageVerdict::NotIn(lattice.decode(&normal_form)),
    })
}

/// Drops elements from a membership witness one at a time while the
/// target stays in the smaller ideal.
fn minimize(target: &EPoly, elements: &[EPoly], cof: Vec<(EPoly, usize)>, opts: MembershipOptions) -> Result<Vec<(EPoly, usize)>> {
    let mut kept: Vec<usize> = cof.iter().map(|(_, i)| *i).collect();
    if kept.len() < 2 || kept.len() > 16 {
        return Ok(cof);
    }
    kept.sort_unstable();
    let mut best = cof;
    for pos in (0..kept.len()).rev() {
        if kept.len() < 2 {
            break;
        }
        let trial: Vec<usize> = kept.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &i)| i).collect();
        let sub: Vec<EPoly> = trial.iter().map(|&i| elements[i].clone()).collect();
        if let StageVerdict::In(c) = stage_membership(target, &sub, opts)? {
            best = c.into_iter().map(|(m, k)| (m, trial[k])).collect();
            kept = trial;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedVerdict {
    Proved(MembershipCertificate),
    /// Not in the ring ideal of the stage at `depth`.
    NotFoundUpToDepth { depth: u32, normal_form: EPoly },
}

impl BoundedVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, BoundedVerdict::Proved(_))
    }

    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            BoundedVerdict::Proved(c) => Some(c),
            BoundedVerdict::NotFoundUpToDepth { .. } => None,
        }
    }
}

/// Searches stages `0..=policy.depth` for a ring-ideal witness of `target`
/// and turns the first one into a certificate.
pub fn prove_membership(target: &EPoly, pres: &EIdealPresentation, policy: &SaturationPolicy) -> Result<BoundedVerdict> {
    if target.nvars() != pres.nvars() {
        return Err(Error::VarMismatch {
            left: pres.nvars(),
            right: target.nvars(),
        });
    }
    if target.is_zero() {
        return Ok(BoundedVerdict::Proved(MembershipCertificate {
            target: target.clone(),
            steps: vec![Step::Comb(vec![])],
        }));
    }
    let sat = Saturation::compute(pres, policy)?;
    let mut last: Option<(usize, EPoly)> = None;
    for d in 0..=policy.depth {
        let stage = sat.stage(d);
        if let Some(i) = stage.iter().position(|e| e == target) {
            return Ok(BoundedVerdict::Proved(sat.certificate(target, CertTail::Element(i))));
        }
        if let Some((len, _)) = &last {
            if *len == stage.len() {
                continue;
            }
        }
        match stage_membership(target, stage, policy.membership)? {
            StageVerdict::In(cof) => {
                let cof = if policy.minimize {
                    minimize(target, stage, cof, policy.membership)?
                } else {
                    cof
                };
                return Ok(BoundedVerdict::Proved(sat.certificate(target, CertTail::Comb(cof))));
            }
            StageVerdict::NotIn(nf) => last = Some((stage.len(), nf)),
        }
    }
    let (_, normal_form) = last.expect("depth 0 always runs");
    Ok(BoundedVerdict::NotFoundUpToDepth {
        depth: policy.depth,
        normal_form,
    })
}

/// Membership against two presentations, run concurrently.
pub fn intersect_membership(
    target: &EPoly,
    a: &EIdealPresentation,
    b: &EIdealPresentation,
    policy: &SaturationPolicy,
) -> Result<(BoundedVerdict, BoundedVerdict)> {
    let (ra, rb) = std::thread::scope(|s| {
        let ha = s.spawn(|| prove_membership(target, a, policy));
        let rb = prove_membership(target, b, policy);
        (ha.join().expect("membership worker panicked"), rb)
    });
    Ok((ra?, rb?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoly::{parse_epoly, parse_list, Vars};

    fn ep(s: &str) -> EPoly {
        parse_epoly(s, &Vars::standard(2)).unwrap()
    }

    fn pres(s: &str) -> EIdealPresentation {
        EIdealPresentation::new(2, parse_list(s, &Vars::standard(2)).unwrap()).unwrap()
    }

    #[test]
    fn saturation_examples() {
        let p = pres("x");
        assert_eq!(
            saturate(&p, &SaturationPolicy::with_depth(1)).unwrap(),
            vec![ep("x"), ep("E(x) - 1")]
        );
        assert_eq!(
            saturate(&pres("x*y"), &SaturationPolicy::with_depth(1)).unwrap(),
            vec![ep("x*y"), ep("E(x*y) - 1")]
        );
        assert_eq!(
            saturate(&pres("E(x/2) - 1"), &SaturationPolicy::with_depth(0)).unwrap(),
            vec![ep("E(x/2) - 1")]
        );
        let s3 = saturate(&p, &SaturationPolicy::with_depth(3)).unwrap();
        assert_eq!(s3.len(), 4);
        assert!(s3.starts_with(&saturate(&p, &SaturationPolicy::with_depth(2)).unwrap()));
    }

    #[test]
    fn presentation_normalizes() {
        let p = EIdealPresentation::new(1, vec![EPoly::var(1, 0), EPoly::zero(1), EPoly::var(1, 0)]).unwrap();
        assert_eq!(p.gens().len(), 1);
        assert!(EIdealPresentation::new(1, vec![EPoly::var(2, 0)]).is_err());
    }

    #[test]
    fn y_ideal_certificate_shape() {
        let p = pres("y");
        let t = ep("x*(E(y) - 1)");
        let v = prove_membership(&t, &p, &SaturationPolicy::with_depth(1)).unwrap();
        let cert = v.certificate().unwrap();
        assert_eq!(
            cert.steps,
            vec![Step::Gen(0), Step::Exp(0), Step::Comb(vec![(ep("x"), 1)])]
        );
        assert!(check_certificate(cert, &p, &t));
    }

    #[test]
    fn x_ideal_depth_zero() {
        let p = pres("x");
        let t = ep("x*(E(y) - 1)");
        let v = prove_membership(&t, &p, &SaturationPolicy::with_depth(0)).unwrap();
        let cert = v.certificate().unwrap();
        assert_eq!(
            cert.steps,
            vec![Step::Gen(0), Step::Comb(vec![(ep("E(y) - 1"), 0)])]
        );
    }

    #[test]
    fn half_exponent_cofactor() {
        let p = pres("E(x/2) - 1");
        let t = ep("E(x) - 1");
        let v = prove_membership(&t, &p, &SaturationPolicy::with_depth(0)).unwrap();
        let cert = v.certificate().unwrap();
        assert_eq!(cert.steps[1], Step::Comb(vec![(ep("E(x/2) + 1"), 0)]));
        assert!(check_certificate(cert, &p, &t));
    }

    #[test]
    fn xy_is_not_found_at_depth_three() {
        let p = pres("x*y");
        let t = ep("x*(E(y) - 1)");
        match prove_membership(&t, &p, &SaturationPolicy::with_depth(3)).unwrap() {
            BoundedVerdict::NotFoundUpToDepth { depth, normal_form } => {
                assert_eq!(depth, 3);
                assert!(!normal_form.is_zero());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn intersections() {
        let (a, b) = (pres("x"), pres("y"));
        let pol = SaturationPolicy::with_depth(1);
        let (va, vb) = intersect_membership(&ep("x*E(y) - x"), &a, &b, &pol).unwrap();
        assert!(va.is_proved() && vb.is_proved());
        let (va, vb) = intersect_membership(&ep("x"), &a, &b, &pol).unwrap();
        assert!(va.is_proved());
        assert!(matches!(vb, BoundedVerdict::NotFoundUpToDepth { depth: 1, .. }));
        let (va, vb) = intersect_membership(&ep("0"), &a, &b, &pol).unwrap();
        assert!(va.is_proved() && vb.is_proved());
        assert!(check_certificate(va.certificate().unwrap(), &a, &ep("0")));
    }

    #[test]
    fn monotone_in_depth() {
        let p = pres("y");
        let t = ep("x*(E(y) - 1)");
        let c1 = prove_membership(&t, &p, &SaturationPolicy::with_depth(1)).unwrap();
        for d in 2..4 {
            let cd = prove_membership(&t, &p, &SaturationPolicy::with_depth(d)).unwrap();
            assert!(cd.is_proved());
            assert!(check_certificate(c1.certificate().unwrap(), &p, &t));
        }
    }

    #[test]
    fn product_and_explicit_rules() {
        let p = pres("x");
        let pol = SaturationPolicy {
            depth: 1,
            rule: TargetRule::GeneratorsAndProducts,
            ..Default::default()
        };
        let t = ep("E(x^2) - 1");
        let v = prove_membership(&t, &p, &pol).unwrap();
        assert!(check_certificate(v.certificate().unwrap(), &p, &t));

        let pol = SaturationPolicy {
            depth: 1,
            rule: TargetRule::Explicit(vec![ep("x*y"), ep("y")]),
            ..Default::default()
        };
        let t = ep("E(x*y) - 1");
        let v = prove_membership(&t, &p, &pol).unwrap();
        assert!(check_certificate(v.certificate().unwrap(), &p, &t));
        // `y` is not in the ideal, so it never gets exponentiated.
        assert_eq!(saturate(&p, &pol).unwrap().len(), 2);
    }

    #[test]
    fn stage_budget() {
        let pol = SaturationPolicy {
            depth: 3,
            rule: TargetRule::GeneratorsAndProducts,
            max_elements: 6,
            ..Default::default()
        };
        assert!(matches!(saturate(&pres("x"), &pol), Err(Error::Budget(_))));
    }

    #[test]
    fn rejects_symbolic_coefficients() {
        let p = pres("x");
        let t = ep("b0*x");
        assert!(matches!(
            prove_membership(&t, &p, &SaturationPolicy::with_depth(0)),
            Err(Error::CoefficientNotRational(_))
        ));
    }
}
