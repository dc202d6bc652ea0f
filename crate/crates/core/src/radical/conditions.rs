//! Bounded checks of the sufficient conditions for an ideal `I` of
//! `Q[x1..xn, y1..yn]` to give a prime E-ideal after `y_i -> E(x_i)`.
//!
//! Conditions (2) and (3) are searched for counterexamples within bounds.
//! Conditions (1) and (4) are primality statements this engine does not
//! decide; they are echoed as user assertions.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::Zero;

use crate::base::{BaseCoeff, Rational};
use crate::epoly::{format_epoly, EPoly, GMonomial, Vars};
use crate::error::{Error, Result};
use crate::laurent::{
    buchberger_in, eliminate_linear, x_degree, Budget, LMono, LaurentPoly, LaurentRing, MembershipOptions,
    MonomialOrder,
};

/// `p(x, E(x))`: each `y_i` becomes `E(x_i)`. `p` lives over `x1..xn,
/// y1..yn` in that order.
pub fn tilde_substitute(p: &EPoly, n: usize) -> Result<EPoly> {
    check_shape(p, n)?;
    let terms = p.terms().map(|(m, c)| {
        let xe = m.xexp();
        let mut arg = EPoly::zero(n);
        for (i, &e) in xe[n..].iter().enumerate() {
            if e > 0 {
                arg = &arg + &EPoly::var(n, i).scale(&Rational::from_integer(e.into()));
            }
        }
        (GMonomial::new(xe[..n].to_vec(), arg), c.clone())
    });
    Ok(EPoly::from_terms(n, terms))
}

fn check_shape(p: &EPoly, n: usize) -> Result<()> {
    if p.nvars() != 2 * n {
        return Err(Error::Arity(format!(
            "expected a polynomial in {n} x and {n} y variables, found {} variables",
            p.nvars()
        )));
    }
    if p.height() > 0 {
        return Err(Error::Arity("expected a polynomial without exponentials".into()));
    }
    Ok(())
}

fn to_laurent(p: &EPoly, n: usize) -> Result<LaurentPoly> {
    check_shape(p, n)?;
    let mut f = LaurentPoly::zero(n, n);
    for (m, c) in p.terms() {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::CoefficientNotRational(p.to_string()))?;
        let xe = m.xexp();
        f.add_term(
            LMono {
                x: xe[..n].to_vec(),
                u: xe[n..].iter().map(|&e| e as i64).collect(),
            },
            r,
        );
    }
    Ok(f)
}

fn x_part_to_epoly(f: &LaurentPoly, n: usize) -> EPoly {
    let terms = f.terms().map(|(m, c)| {
        let mut xe = m.x.clone();
        xe.extend(std::iter::repeat(0).take(n));
        (
            GMonomial::new(xe, EPoly::zero(2 * n)),
            BaseCoeff::from_rational(c.clone()),
        )
    });
    EPoly::from_terms(2 * n, terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionBounds {
    /// Largest denominator `D` of an exponent vector `q`.
    pub max_denominator: u32,
    /// Largest `|q_i|`.
    pub max_height: u32,
    pub budget: Budget,
}

impl Default for ConditionBounds {
    fn default() -> Self {
        ConditionBounds {
            max_denominator: 4,
            max_height: 4,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UserAssertions {
    pub cond1: bool,
    pub cond4: bool,
}

/// `y^q - a` lies in the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond3Violation {
    pub q: Vec<Rational>,
    pub a: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionsReport {
    pub n: usize,
    pub bounds: ConditionBounds,
    pub assertions: UserAssertions,
    /// Nonzero elements `a + q.x` of the ideal.
    pub cond2: Vec<EPoly>,
    pub cond3: Vec<Cond3Violation>,
    /// Exponent vectors examined for condition (3).
    pub cond3_checked: u64,
}

/// At most this many condition (3) violations are listed.
pub const MAX_LISTED: usize = 32;

impl ConditionsReport {
    pub fn any_violation(&self) -> bool {
        !self.cond2.is_empty() || !self.cond3.is_empty()
    }

    pub fn render(&self, vars: &Vars) -> String {
        let mut out = String::new();
        let asserted = |b: bool| {
            if b {
                "asserted by user (not verified)"
            } else {
                "not asserted (not verified)"
            }
        };
        let _ = writeln!(out, "cond1: {}", asserted(self.assertions.cond1));
        if self.cond2.is_empty() {
            let _ = writeln!(out, "cond2: none found");
        }
        for v in &self.cond2 {
            let _ = writeln!(out, "cond2: violation {}", format_epoly(v, vars));
        }
        if self.cond3.is_empty() {
            let _ = writeln!(
                out,
                "cond3: none found (denominator <= {}, |q| <= {}, {} vectors)",
                self.bounds.max_denominator, self.bounds.max_height, self.cond3_checked
            );
        }
        for v in &self.cond3 {
            let q: Vec<String> = v.q.iter().map(crate::base::fmt_rational).collect();
            let _ = writeln!(
                out,
                "cond3: violation q = ({}), a = {}",
                q.join(", "),
                crate::base::fmt_rational(&v.a)
            );
        }
        let _ = writeln!(out, "cond4: {}", asserted(self.assertions.cond4));
        out
    }
}

/// Condition (2) by linear elimination of `y`; condition (3) by normal
/// forms of `y^(k/d)` in the Laurent ring with `y = v^d`, for
/// `d <= D`, `|k_i| <= B*d`, `gcd(k, d) = 1`. A unit Laurent ideal is
/// reported as `q = 0, a = 0`.
pub fn check_prime_conditions(
    ideal: &[EPoly],
    n: usize,
    bounds: ConditionBounds,
    assertions: UserAssertions,
) -> Result<ConditionsReport> {
    let gens = ideal.iter().map(|p| to_laurent(p, n)).collect::<Result<Vec<_>>>()?;
    let cond2 = eliminate_linear(&gens, bounds.budget)?
        .into_iter()
        .filter(|f| !f.is_zero() && x_degree(f) <= 1)
        .map(|f| x_part_to_epoly(&f, n))
        .collect();

    let mut cond3 = Vec::new();
    let mut checked = 0u64;
    let ring = LaurentRing { nx: n, nu: n };
    let opts = MembershipOptions {
        order: MonomialOrder::GrevLex,
        budget: bounds.budget,
    };
    'outer: for d in 1..=bounds.max_denominator.max(1) as i64 {
        let scaled: Vec<LaurentPoly> = gens
            .iter()
            .map(|g| {
                let mut f = LaurentPoly::zero(n, n);
                for (m, c) in g.terms() {
                    let mut m = m.clone();
                    for e in &mut m.u {
                        *e *= d;
                    }
                    f.add_term(m, c.clone());
                }
                f
            })
            .collect();
        let basis = buchberger_in(ring, &scaled, opts, false)?;
        if basis.is_unit_ideal() {
            cond3.push(Cond3Violation {
                q: vec![Rational::zero(); n],
                a: Rational::zero(),
            });
            break;
        }
        let span = bounds.max_height as i64 * d;
        let mut k = vec![-span; n];
        loop {
            let g = k.iter().fold(d, |acc, &e| acc.gcd(&e));
            if g == 1 && k.iter().any(|&e| e != 0) {
                checked += 1;
                let f = LaurentPoly::monomial(
                    n,
                    n,
                    LMono {
                        x: vec![0; n],
                        u: k.clone(),
                    },
                    Rational::from_integer(1.into()),
                );
                let nf = ring.from_poly(&basis.normal_form(&f));
                if let Some(a) = nf.as_constant() {
                    if !a.is_zero() {
                        cond3.push(Cond3Violation {
                            q: k.iter().map(|&e| Rational::new(e.into(), d.into())).collect(),
                            a,
                        });
                        if cond3.len() >= MAX_LISTED {
                            break 'outer;
                        }
                    }
                }
            }
            if !step(&mut k, span) {
                break;
            }
        }
    }
    Ok(ConditionsReport {
        n,
        bounds,
        assertions,
        cond2,
        cond3,
        cond3_checked: checked,
    })
}

fn step(k: &mut [i64], span: i64) -> bool {
    for e in k.iter_mut().rev() {
        if *e < span {
            *e += 1;
            return true;
        }
        *e = -span;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::int;
    use crate::epoly::parse_epoly;

    fn xy(s: &str) -> EPoly {
        parse_epoly(s, &Vars::new(vec!["x1".into(), "y1".into()]).unwrap()).unwrap()
    }

    #[test]
    fn tilde_examples() {
        let v2 = Vars::new(vec!["x1".into(), "x2".into(), "y1".into(), "y2".into()]).unwrap();
        let v2x = Vars::new(vec!["x1".into(), "x2".into()]).unwrap();
        let t = |s: &str| tilde_substitute(&parse_epoly(s, &v2).unwrap(), 2).unwrap();
        let e = |s: &str| parse_epoly(s, &v2x).unwrap();
        assert_eq!(t("y1 - 1"), e("E(x1) - 1"));
        assert_eq!(t("x1*y1 + y2"), e("x1*E(x1) + E(x2)"));
        assert_eq!(t("y1*y2 - 1"), e("E(x1 + x2) - 1"));
        assert!(tilde_substitute(&e("x1"), 2).is_err());
    }

    #[test]
    fn cond3_direct_containment() {
        let r = check_prime_conditions(&[xy("y1 - 2")], 1, ConditionBounds::default(), UserAssertions::default()).unwrap();
        assert!(r.cond3.contains(&Cond3Violation {
            q: vec![int(1)],
            a: int(2)
        }));
        assert!(r.cond2.is_empty());
    }

    #[test]
    fn cond2_linear_element() {
        let r = check_prime_conditions(
            &[xy("x1 + y1 - 3"), xy("y1 - 1")],
            1,
            ConditionBounds::default(),
            UserAssertions::default(),
        )
        .unwrap();
        assert_eq!(r.cond2, vec![xy("x1 - 2")]);
    }

    #[test]
    fn parabola_is_clean() {
        let r = check_prime_conditions(&[xy("y1 - x1^2")], 1, ConditionBounds::default(), UserAssertions::default()).unwrap();
        assert!(!r.any_violation(), "{r:?}");
        assert!(r.cond3_checked > 0);
        let text = r.render(&Vars::new(vec!["x1".into(), "y1".into()]).unwrap());
        assert!(text.contains("cond1: not asserted (not verified)"));
    }

    #[test]
    fn unit_ideal() {
        let r = check_prime_conditions(&[xy("y1*x1 - y1")], 1, ConditionBounds::default(), UserAssertions::default()).unwrap();
        // y1*(x1 - 1): y1 is a unit, so x1 - 1 is in the Laurent ideal but
        // not in the polynomial one.
        assert!(r.cond2.is_empty());
        let r = check_prime_conditions(&[xy("y1")], 1, ConditionBounds::default(), UserAssertions::default()).unwrap();
        assert_eq!(r.cond3[0].a, int(0));
    }
}
