//! Replayable membership certificates and their text format.
//!
//! A certificate is a straight-line derivation. Each step names an element
//! of the E-ideal: a generator, `E(d) - 1` for an earlier element `d`, or a
//! combination `sum m_i * d_i` of earlier elements with arbitrary
//! multipliers. Replaying the steps with exact arithmetic and comparing the
//! last value against the target checks the certificate; no search is
//! involved.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::EIdealPresentation;
use crate::epoly::{format_epoly, parse_epoly, EPoly, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Generator with the given index.
    Gen(usize),
    /// `E(d_j) - 1` for the value `d_j` of step `j`.
    Exp(usize),
    /// `sum m * d_j`.
    Comb(Vec<(EPoly, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub target: EPoly,
    pub steps: Vec<Step>,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("certificate has no steps")]
    Empty,
    #[error("step {step}: generator index {index} out of range")]
    BadGenIndex { step: usize, index: usize },
    #[error("step {step}: reference {target} is not an earlier step")]
    ForwardRef { step: usize, target: usize },
    #[error("step {step}: value lives in a ring with a different number of variables")]
    Arity { step: usize },
    #[error("final step does not replay to the declared target")]
    ReplayMismatch,
    #[error("declared target differs from the requested target")]
    TargetMismatch,
    #[error("step {step}: prime split is not allowed at level {level}")]
    SplitNotAllowed { step: usize, level: u32 },
    #[error("step {step}: sub-certificate level {sub} is not below {level}")]
    LevelNotDecreasing { step: usize, sub: u32, level: u32 },
    #[error("step {step}: {which} sub-certificate rejected: {inner}")]
    Sub {
        step: usize,
        which: &'static str,
        inner: Box<CertError>,
    },
}

pub(crate) fn check_ref(step: usize, j: usize) -> std::result::Result<(), CertError> {
    if j >= step {
        return Err(CertError::ForwardRef { step, target: j });
    }
    Ok(())
}

pub(crate) fn combine(
    step: usize,
    terms: &[(EPoly, usize)],
    values: &[EPoly],
    nvars: usize,
) -> std::result::Result<EPoly, CertError> {
    let mut acc = EPoly::zero(nvars);
    for (m, j) in terms {
        check_ref(step, *j)?;
        let t = m
            .try_mul(&values[*j])
            .map_err(|_| CertError::Arity { step })?;
        acc = acc.try_add(&t).map_err(|_| CertError::Arity { step })?;
    }
    Ok(acc)
}

impl MembershipCertificate {
    /// Replays every step and returns the value of each.
    pub fn replay(&self, pres: &EIdealPresentation) -> std::result::Result<Vec<EPoly>, CertError> {
        let nvars = pres.nvars();
        let mut values: Vec<EPoly> = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            let v = match s {
                Step::Gen(k) => pres
                    .gens()
                    .get(*k)
                    .cloned()
                    .ok_or(CertError::BadGenIndex { step: i, index: *k })?,
                Step::Exp(j) => {
                    check_ref(i, *j)?;
                    values[*j].exp_minus_one()
                }
                Step::Comb(terms) => combine(i, terms, &values, nvars)?,
            };
            values.push(v);
        }
        Ok(values)
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
        let values = self.replay(pres)?;
        if values.last() != Some(target) {
            return Err(CertError::ReplayMismatch);
        }
        Ok(())
    }
}

/// True iff `cert` replays exactly to `target` over `pres`.
pub fn check_certificate(cert: &MembershipCertificate, pres: &EIdealPresentation, target: &EPoly) -> bool {
    cert.verify(pres, target).is_ok()
}

pub const MEMBERSHIP_HEADER: &str = "expoly-certificate v1";
pub const RADICAL_HEADER: &str = "expoly-radical-certificate v1";

/// Serialized form shared by membership and radical certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub target: String,
    pub steps: Vec<StepDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multiplier: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Box<CertDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Box<CertDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Box<CertDoc>>,
}

impl StepDoc {
    pub(crate) fn simple(kind: &str, refs: Vec<usize>, multiplier: Vec<String>) -> Self {
        StepDoc {
            kind: kind.to_string(),
            refs,
            multiplier,
            b1: None,
            b2: None,
            element: None,
            product: None,
            left: None,
            right: None,
        }
    }
}

pub(crate) fn step_to_doc(s: &Step, vars: &Vars) -> StepDoc {
    match s {
        Step::Gen(k) => StepDoc::simple("gen", vec![*k], vec![]),
        Step::Exp(j) => StepDoc::simple("exp", vec![*j], vec![]),
        Step::Comb(terms) => StepDoc::simple(
            "comb",
            terms.iter().map(|(_, j)| *j).collect(),
            terms.iter().map(|(m, _)| format_epoly(m, vars)).collect(),
        ),
    }
}

/// Reads an expression that must be written exactly as the formatter
/// prints it, so that every certificate has one textual form.
pub(crate) fn parse_canonical(text: &str, vars: &Vars) -> Result<EPoly> {
    let p = parse_epoly(text, vars)?;
    let canonical = format_epoly(&p, vars);
    if canonical != text {
        return Err(Error::Format(format!("`{text}` is not in canonical form `{canonical}`")));
    }
    Ok(p)
}

pub(crate) fn step_from_doc(d: &StepDoc, vars: &Vars) -> Result<Step> {
    let one_ref = || -> Result<usize> {
        match d.refs.as_slice() {
            [j] if d.multiplier.is_empty() => Ok(*j),
            _ => Err(Error::Format(format!("`{}` step needs exactly one reference", d.kind))),
        }
    };
    match d.kind.as_str() {
        "gen" => Ok(Step::Gen(one_ref()?)),
        "exp" => Ok(Step::Exp(one_ref()?)),
        "comb" => {
            if d.refs.len() != d.multiplier.len() {
                return Err(Error::Format("comb step needs one multiplier per reference".into()));
            }
            let terms = d
                .multiplier
                .iter()
                .zip(&d.refs)
                .map(|(m, &j)| Ok((parse_canonical(m, vars)?, j)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Step::Comb(terms))
        }
        other => Err(Error::Format(format!("unknown step kind `{other}`"))),
    }
}

impl MembershipCertificate {
    pub fn to_doc(&self, vars: &Vars) -> CertDoc {
        CertDoc {
            level: None,
            vars: Some(vars.names().to_vec()),
            target: format_epoly(&self.target, vars),
            steps: self.steps.iter().map(|s| step_to_doc(s, vars)).collect(),
        }
    }

    pub fn from_doc(doc: &CertDoc, vars: &Vars) -> Result<Self> {
        if doc.level.is_some() {
            return Err(Error::Format("membership certificates carry no level".into()));
        }
        Ok(MembershipCertificate {
            target: parse_canonical(&doc.target, vars)?,
            steps: doc
                .steps
                .iter()
                .map(|s| step_from_doc(s, vars))
                .collect::<Result<_>>()?,
        })
    }

    /// Header line followed by pretty-printed JSON.
    pub fn to_text(&self, vars: &Vars) -> String {
        render_document(MEMBERSHIP_HEADER, &self.to_doc(vars))
    }
}

pub(crate) fn render_document(header: &str, doc: &CertDoc) -> String {
    let body = serde_json::to_string_pretty(doc).expect("certificate documents always serialize");
    format!("{header}\n{body}\n")
}

/// Splits a document into its header and JSON body and recovers the
/// variable table.
pub fn read_document(text: &str) -> Result<(String, CertDoc, Vars)> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    let header = header.trim_end_matches('\r').to_string();
    if header != MEMBERSHIP_HEADER && header != RADICAL_HEADER {
        return Err(Error::Format(format!("unknown header `{header}`")));
    }
    let doc: CertDoc = serde_json::from_str(body).map_err(|e| Error::Format(e.to_string()))?;
    let names = doc
        .vars
        .clone()
        .ok_or_else(|| Error::Format("top-level `vars` is required".into()))?;
    let vars = Vars::new(names)?;
    Ok((header, doc, vars))
}

pub fn parse_membership_certificate(text: &str) -> Result<(MembershipCertificate, Vars)> {
    let (header, doc, vars) = read_document(text)?;
    if header != MEMBERSHIP_HEADER {
        return Err(Error::Format("not a membership certificate".into()));
    }
    Ok((MembershipCertificate::from_doc(&doc, &vars)?, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoly::parse_epoly;

    fn ep(s: &str) -> EPoly {
        parse_epoly(s, &Vars::standard(2)).unwrap()
    }

    fn y_ideal_cert() -> (MembershipCertificate, EIdealPresentation) {
        let pres = EIdealPresentation::new(2, vec![ep("y")]).unwrap();
        let cert = MembershipCertificate {
            target: ep("x*E(y) - x"),
            steps: vec![Step::Gen(0), Step::Exp(0), Step::Comb(vec![(ep("x"), 1)])],
        };
        (cert, pres)
    }

    #[test]
    fn accepts_valid_and_rejects_mismatch() {
        let (cert, pres) = y_ideal_cert();
        assert!(check_certificate(&cert, &pres, &ep("x*E(y) - x")));
        let mut wrong = cert.clone();
        wrong.target = ep("x*E(y) + x");
        assert_eq!(
            wrong.verify(&pres, &ep("x*E(y) + x")),
            Err(CertError::ReplayMismatch)
        );
        assert_eq!(
            cert.verify(&pres, &ep("x*E(y) + x")),
            Err(CertError::TargetMismatch)
        );
    }

    #[test]
    fn rejects_forward_references_and_bad_indices() {
        let (mut cert, pres) = y_ideal_cert();
        cert.steps[1] = Step::Exp(2);
        assert_eq!(
            cert.verify(&pres, &ep("x*E(y) - x")),
            Err(CertError::ForwardRef { step: 1, target: 2 })
        );
        let (mut cert, pres) = y_ideal_cert();
        cert.steps[0] = Step::Gen(3);
        assert!(matches!(
            cert.verify(&pres, &ep("x*E(y) - x")),
            Err(CertError::BadGenIndex { .. })
        ));
        let empty = MembershipCertificate {
            target: ep("0"),
            steps: vec![],
        };
        assert_eq!(empty.verify(&pres, &ep("0")), Err(CertError::Empty));
    }

    #[test]
    fn wrong_arity_is_rejected_not_panicking() {
        let (mut cert, pres) = y_ideal_cert();
        cert.steps[2] = Step::Comb(vec![(EPoly::var(3, 0), 1)]);
        assert_eq!(
            cert.verify(&pres, &ep("x*E(y) - x")),
            Err(CertError::Arity { step: 2 })
        );
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let (cert, _) = y_ideal_cert();
        let vars = Vars::standard(2);
        let text = cert.to_text(&vars);
        assert!(text.starts_with(MEMBERSHIP_HEADER));
        let (back, v2) = parse_membership_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(&v2), text);
    }

    #[test]
    fn only_canonical_text_is_read() {
        let (cert, _) = y_ideal_cert();
        let text = cert.to_text(&Vars::standard(2));
        for (from, to) in [("\"x\"\n", "\"01*x\"\n"), ("\"x\"\n", "\" x\"\n"), ("x*E(y) - x", "x*E(y)-x")] {
            let bad = text.replacen(from, to, 1);
            assert_ne!(bad, text);
            assert!(matches!(parse_membership_certificate(&bad), Err(Error::Format(_))), "{to}");
        }
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_membership_certificate("nonsense").is_err());
        assert!(parse_membership_certificate("expoly-certificate v1\n{").is_err());
        let bad_kind = "expoly-certificate v1\n{\"vars\":[\"x\"],\"target\":\"x\",\"steps\":[{\"kind\":\"magic\"}]}";
        assert!(parse_membership_certificate(bad_kind).is_err());
        let bad_mult = "expoly-certificate v1\n{\"vars\":[\"x\"],\"target\":\"x\",\"steps\":[{\"kind\":\"comb\",\"refs\":[0],\"multiplier\":[\"x +\"]}]}";
        assert!(parse_membership_certificate(bad_mult).is_err());
    }
}
