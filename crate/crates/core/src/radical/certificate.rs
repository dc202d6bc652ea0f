//! Certificates for membership in the level-`n` radical.
//!
//! The level-`n` radical of `X` is the E-ideal generated by `X` together
//! with every `a` for which some `b1, b2` satisfy: `b1*b2` lies in the
//! level-`(n-1)` radical of `X`, and `a` lies in the level-`(n-1)` radicals
//! of both `X ∪ {b1}` and `X ∪ {b2}`. Level 0 is the E-ideal itself.
//! A certificate is a membership derivation that may also use such a
//! split, each carrying its three sub-certificates.

use crate::eideal::{
    check_ref, combine, parse_canonical, read_document, render_document, step_from_doc, step_to_doc, CertDoc, CertError,
    EIdealPresentation, MembershipCertificate, Step, StepDoc, RADICAL_HEADER,
};
use crate::epoly::{format_epoly, EPoly, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplit {
    pub b1: EPoly,
    pub b2: EPoly,
    /// The element `a` obtained from the split.
    pub element: EPoly,
    /// `b1*b2` over `X`.
    pub product: RadicalCertificate,
    /// `a` over `X ∪ {b1}`.
    pub left: RadicalCertificate,
    /// `a` over `X ∪ {b2}`.
    pub right: RadicalCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadicalStep {
    Gen(usize),
    Exp(usize),
    Comb(Vec<(EPoly, usize)>),
    Split(Box<PrimeSplit>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCertificate {
    pub level: u32,
    pub target: EPoly,
    pub steps: Vec<RadicalStep>,
}

impl RadicalCertificate {
    /// A plain membership certificate declared at `level`.
    pub fn from_membership(cert: &MembershipCertificate, level: u32) -> Self {
        RadicalCertificate {
            level,
            target: cert.target.clone(),
            steps: cert
                .steps
                .iter()
                .map(|s| match s {
                    Step::Gen(k) => RadicalStep::Gen(*k),
                    Step::Exp(j) => RadicalStep::Exp(*j),
                    Step::Comb(t) => RadicalStep::Comb(t.clone()),
                })
                .collect(),
        }
    }

    /// The underlying membership certificate when no step is a split.
    pub fn as_membership(&self) -> Option<MembershipCertificate> {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                RadicalStep::Gen(k) => Some(Step::Gen(*k)),
                RadicalStep::Exp(j) => Some(Step::Exp(*j)),
                RadicalStep::Comb(t) => Some(Step::Comb(t.clone())),
                RadicalStep::Split(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MembershipCertificate {
            target: self.target.clone(),
            steps,
        })
    }

    /// The same certificate declared at a higher level.
    pub fn padded(&self, level: u32) -> Self {
        RadicalCertificate {
            level: level.max(self.level),
            ..self.clone()
        }
    }

    /// Number of split nodes, recursively.
    pub fn split_count(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                RadicalStep::Split(p) => 1 + p.product.split_count() + p.left.split_count() + p.right.split_count(),
                _ => 0,
            })
            .sum()
    }

    pub fn verify(&self, pres: &EIdealPresentation, target: &EPoly) -> std::result::Result<(), CertError> {
        if self.steps.is_empty() {
            return Err(CertError::Empty);
        }
        if self.target.nvars() != pres.nvars() || target.nvars() != pres.nvars() {
            return Err(CertError::Arity { step: 0 });
        }
        if &self.target != target {
            return Err(CertError::TargetMismatch);
        }
        let nvars = pres.nvars();
        let mut values: Vec<EPoly> = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            let v = match s {
                RadicalStep::Gen(k) => pres
                    .gens()
                    .get(*k)
                    .cloned()
                    .ok_or(CertError::BadGenIndex { step: i, index: *k })?,
                RadicalStep::Exp(j) => {
                    check_ref(i, *j)?;
                    values[*j].exp_minus_one()
                }
                RadicalStep::Comb(terms) => combine(i, terms, &values, nvars)?,
                RadicalStep::Split(p) => {
                    self.verify_split(i, p, pres)?;
                    p.element.clone()
                }
            };
            values.push(v);
        }
        if values.last() != Some(target) {
            return Err(CertError::ReplayMismatch);
        }
        Ok(())
    }

    fn verify_split(&self, step: usize, p: &PrimeSplit, pres: &EIdealPresentation) -> std::result::Result<(), CertError> {
        if self.level == 0 {
            return Err(CertError::SplitNotAllowed { step, level: 0 });
        }
        for sub in [&p.product, &p.left, &p.right] {
            if sub.level >= self.level {
                return Err(CertError::LevelNotDecreasing {
                    step,
                    sub: sub.level,
                    level: self.level,
                });
            }
        }
        let arity = |_| CertError::Arity { step };
        let sub = |which: &'static str| {
            move |e: CertError| CertError::Sub {
                step,
                which,
                inner: Box::new(e),
            }
        };
        let product = p.b1.try_mul(&p.b2).map_err(arity)?;
        if p.element.nvars() != pres.nvars() {
            return Err(CertError::Arity { step });
        }
        let with_b1 = pres.augmented(&p.b1).map_err(arity)?;
        let with_b2 = pres.augmented(&p.b2).map_err(arity)?;
        p.product.verify(pres, &product).map_err(sub("product"))?;
        let (l, r) = std::thread::scope(|s| {
            let h = s.spawn(|| p.left.verify(&with_b1, &p.element));
            let r = p.right.verify(&with_b2, &p.element);
            (h.join().expect("certificate worker panicked"), r)
        });
        l.map_err(sub("left"))?;
        r.map_err(sub("right"))?;
        Ok(())
    }

    pub fn to_doc(&self, vars: &Vars, top: bool) -> CertDoc {
        CertDoc {
            level: Some(self.level),
            vars: top.then(|| vars.names().to_vec()),
            target: format_epoly(&self.target, vars),
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    RadicalStep::Gen(k) => step_to_doc(&Step::Gen(*k), vars),
                    RadicalStep::Exp(j) => step_to_doc(&Step::Exp(*j), vars),
                    RadicalStep::Comb(t) => step_to_doc(&Step::Comb(t.clone()), vars),
                    RadicalStep::Split(p) => StepDoc {
                        b1: Some(format_epoly(&p.b1, vars)),
                        b2: Some(format_epoly(&p.b2, vars)),
                        element: Some(format_epoly(&p.element, vars)),
                        product: Some(Box::new(p.product.to_doc(vars, false))),
                        left: Some(Box::new(p.left.to_doc(vars, false))),
                        right: Some(Box::new(p.right.to_doc(vars, false))),
                        ..StepDoc::simple("split", vec![], vec![])
                    },
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &CertDoc, vars: &Vars) -> Result<Self> {
        let level = doc
            .level
            .ok_or_else(|| Error::Format("radical certificates need a level".into()))?;
        let steps = doc
            .steps
            .iter()
            .map(|s| {
                if s.kind != "split" {
                    if s.b1.is_some() || s.b2.is_some() || s.element.is_some() || s.product.is_some() || s.left.is_some() || s.right.is_some() {
                        return Err(Error::Format(format!("`{}` step carries split fields", s.kind)));
                    }
                    return Ok(match step_from_doc(s, vars)? {
                        Step::Gen(k) => RadicalStep::Gen(k),
                        Step::Exp(j) => RadicalStep::Exp(j),
                        Step::Comb(t) => RadicalStep::Comb(t),
                    });
                }
                if !s.refs.is_empty() || !s.multiplier.is_empty() {
                    return Err(Error::Format("split steps take no references".into()));
                }
                let field = |f: &Option<String>, name: &str| -> Result<EPoly> {
                    let t = f
                        .as_ref()
                        .ok_or_else(|| Error::Format(format!("split step lacks `{name}`")))?;
                    parse_canonical(t, vars)
                };
                let sub = |f: &Option<Box<CertDoc>>, name: &str| -> Result<RadicalCertificate> {
                    let d = f
                        .as_ref()
                        .ok_or_else(|| Error::Format(format!("split step lacks `{name}`")))?;
                    if d.vars.is_some() {
                        return Err(Error::Format("nested certificates carry no `vars`".into()));
                    }
                    RadicalCertificate::from_doc(d, vars)
                };
                Ok(RadicalStep::Split(Box::new(PrimeSplit {
                    b1: field(&s.b1, "b1")?,
                    b2: field(&s.b2, "b2")?,
                    element: field(&s.element, "element")?,
                    product: sub(&s.product, "product")?,
                    left: sub(&s.left, "left")?,
                    right: sub(&s.right, "right")?,
                })))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RadicalCertificate {
            level,
            target: parse_canonical(&doc.target, vars)?,
            steps,
        })
    }

    pub fn to_text(&self, vars: &Vars) -> String {
        render_document(RADICAL_HEADER, &self.to_doc(vars, true))
    }
}

/// True iff `cert` replays to `target` over `pres` with every split valid.
pub fn check_radical_certificate(cert: &RadicalCertificate, pres: &EIdealPresentation, target: &EPoly) -> bool {
    cert.verify(pres, target).is_ok()
}

pub fn parse_radical_certificate(text: &str) -> Result<(RadicalCertificate, Vars)> {
    let (header, doc, vars) = read_document(text)?;
    if header != RADICAL_HEADER {
        return Err(Error::Format("not a radical certificate".into()));
    }
    Ok((RadicalCertificate::from_doc(&doc, &vars)?, vars))
}
