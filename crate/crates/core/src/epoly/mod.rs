//! Exponential polynomials in canonical form.
//!
//! An [`EPoly`] is a finite sum of terms `c * x^beta * t^a` where `c` lies in
//! the base ring, `x^beta` is an ordinary monomial and `t^a = E(a)` is a
//! formal exponential whose argument `a` is itself an [`EPoly`] with zero
//! constant part. Multiplying `t^a * t^b` merges into `t^(a+b)`, which makes
//! the ring the group ring of the additive group of legal arguments over
//! `K[x]`. Every value is kept normalized, so structural equality is ring
//! equality.

mod format;
mod parse;
mod vars;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::base::{BaseCoeff, Rational};
use crate::error::{Error, Result};

pub use format::format_epoly;
pub use parse::{parse_epoly, parse_list};
pub use vars::{canonical_name_cmp, Vars};

/// A generalized monomial `x^xexp * t^exparg`.
#[derive(Clone, Debug)]
pub struct GMonomial {
    xexp: Vec<u32>,
    exparg: Arc<EPoly>,
}

impl GMonomial {
    /// Builds a monomial. The argument is stripped of its constant part,
    /// because `t^(c + a) = E_K(c) t^a = t^a` under the trivial base map.
    pub fn new(xexp: Vec<u32>, exparg: EPoly) -> Self {
        let (_, a) = exparg.split_constant();
        GMonomial {
            xexp,
            exparg: Arc::new(a),
        }
    }

    pub fn one(nvars: usize) -> Self {
        GMonomial {
            xexp: vec![0; nvars],
            exparg: Arc::new(EPoly::zero(nvars)),
        }
    }

    pub fn xexp(&self) -> &[u32] {
        &self.xexp
    }

    pub fn exparg(&self) -> &EPoly {
        &self.exparg
    }

    pub fn is_one(&self) -> bool {
        self.xexp.iter().all(|&e| e == 0) && self.exparg.is_zero()
    }

    pub fn x_degree(&self) -> u64 {
        self.xexp.iter().map(|&e| e as u64).sum()
    }

    /// Height contributed by this monomial to a polynomial containing it.
    pub fn height(&self) -> u32 {
        if self.exparg.is_zero() {
            0
        } else {
            1 + self.exparg.height
        }
    }

    fn mul(&self, other: &GMonomial) -> GMonomial {
        let xexp = self
            .xexp
            .iter()
            .zip(&other.xexp)
            .map(|(a, b)| a + b)
            .collect();
        let exparg = if other.exparg.is_zero() {
            self.exparg.clone()
        } else if self.exparg.is_zero() {
            other.exparg.clone()
        } else {
            Arc::new(&*self.exparg + &*other.exparg)
        };
        GMonomial { xexp, exparg }
    }
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

// Height of the argument, then graded lex on x, then the argument itself.
impl Ord for GMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exparg
            .height
            .cmp(&other.exparg.height)
            .then_with(|| grlex(&self.xexp, &other.xexp))
            .then_with(|| self.exparg.cmp(&other.exparg))
    }
}

impl PartialOrd for GMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for GMonomial {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for GMonomial {}

/// An element of `K[x1..xn]^E` in canonical form.
#[derive(Clone, Debug)]
pub struct EPoly {
    nvars: usize,
    terms: BTreeMap<GMonomial, BaseCoeff>,
    height: u32,
}

impl EPoly {
    pub fn zero(nvars: usize) -> Self {
        EPoly {
            nvars,
            terms: BTreeMap::new(),
            height: 0,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, r: Rational) -> Self {
        Self::from_coeff(nvars, BaseCoeff::from_rational(r))
    }

    pub fn from_coeff(nvars: usize, c: BaseCoeff) -> Self {
        Self::term(GMonomial::one(nvars), c)
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut xexp = vec![0; nvars];
        xexp[i] = 1;
        Self::term(
            GMonomial {
                xexp,
                exparg: Arc::new(EPoly::zero(nvars)),
            },
            BaseCoeff::one(),
        )
    }

    /// The base-ring symbol `b_j` as a constant.
    pub fn bsym(nvars: usize, j: usize) -> Self {
        Self::from_coeff(nvars, BaseCoeff::symbol(j))
    }

    pub fn term(m: GMonomial, c: BaseCoeff) -> Self {
        let nvars = m.xexp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self::from_map(nvars, terms)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (GMonomial, BaseCoeff)>) -> Self {
        let mut map: BTreeMap<GMonomial, BaseCoeff> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.xexp.len(), nvars, "monomial arity");
            add_into(&mut map, m, c);
        }
        Self::from_map(nvars, map)
    }

    fn from_map(nvars: usize, mut terms: BTreeMap<GMonomial, BaseCoeff>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let height = terms.keys().map(GMonomial::height).max().unwrap_or(0);
        EPoly {
            nvars,
            terms,
            height,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Stage index: 0 for ordinary polynomials, otherwise one more than the
    /// largest height of an exponential argument.
    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&GMonomial, &BaseCoeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&GMonomial, &BaseCoeff)> {
        self.terms.iter().next_back()
    }

    /// The value as a rational constant, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                if m.is_one() {
                    c.as_rational()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// True when every coefficient is a plain rational.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Distinct nonzero exponential arguments at top level, in term order.
    pub fn top_level_expargs(&self) -> Vec<EPoly> {
        let mut out: Vec<EPoly> = Vec::new();
        for m in self.terms.keys() {
            if !m.exparg.is_zero() && !out.contains(&m.exparg) {
                out.push((*m.exparg).clone());
            }
        }
        out
    }

    /// Splits `p = c + a` where `c` is the coefficient of the trivial
    /// monomial and `a` has no constant part.
    pub fn split_constant(&self) -> (BaseCoeff, EPoly) {
        let one = GMonomial::one(self.nvars);
        let mut rest = self.terms.clone();
        let c = rest.remove(&one).unwrap_or_default();
        (c, Self::from_map(self.nvars, rest))
    }

    /// The exponential `E(p) = E_K(c) * t^a = t^a`.
    pub fn exp_apply(&self) -> EPoly {
        let (_, a) = self.split_constant();
        Self::term(
            GMonomial {
                xexp: vec![0; self.nvars],
                exparg: Arc::new(a),
            },
            BaseCoeff::one(),
        )
    }

    /// `E(p) - 1`, the element forced into any E-ideal containing `p`.
    pub fn exp_minus_one(&self) -> EPoly {
        &self.exp_apply() - &EPoly::one(self.nvars)
    }

    fn check_vars(&self, other: &EPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &EPoly) -> Result<EPoly> {
        self.check_vars(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut map = big.terms.clone();
        for (m, c) in &small.terms {
            add_into(&mut map, m.clone(), c.clone());
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn try_sub(&self, other: &EPoly) -> Result<EPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &EPoly) -> Result<EPoly> {
        self.check_vars(other)?;
        let mut map = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_into(&mut map, m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn scale(&self, r: &Rational) -> EPoly {
        self.mul_coeff(&BaseCoeff::from_rational(r.clone()))
    }

    pub fn mul_coeff(&self, c: &BaseCoeff) -> EPoly {
        let map = self
            .terms
            .iter()
            .map(|(m, d)| (m.clone(), d.mul(c)))
            .collect();
        Self::from_map(self.nvars, map)
    }

    pub fn pow(&self, k: u32) -> EPoly {
        let mut acc = EPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Checks the structural invariants recursively; returns a description
    /// of the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut h = 0;
        for (m, c) in &self.terms {
            if c.is_zero() {
                return Err("stored zero coefficient".into());
            }
            if m.xexp.len() != self.nvars {
                return Err("monomial arity differs from ring arity".into());
            }
            let a = &*m.exparg;
            if a.nvars != self.nvars {
                return Err("exponent lives in a different ring".into());
            }
            if a.terms.contains_key(&GMonomial::one(self.nvars)) {
                return Err("exponent has a nonzero constant part".into());
            }
            a.validate()?;
            h = h.max(m.height());
        }
        if h != self.height {
            return Err(format!("stored height {} but computed {}", self.height, h));
        }
        for (m, _) in &self.terms {
            if !m.exparg.is_zero() && m.exparg.height >= self.height {
                return Err("exponent height is not below the polynomial height".into());
            }
        }
        Ok(())
    }
}

fn add_into(map: &mut BTreeMap<GMonomial, BaseCoeff>, m: GMonomial, c: BaseCoeff) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl PartialEq for EPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms.len() == other.terms.len() && self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EPoly {}

// Term-wise from the leading term down; a proper prefix is smaller.
impl Ord for EPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return self.nvars.cmp(&other.nvars),
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl PartialOrd for EPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &EPoly {
    type Output = EPoly;
    fn add(self, rhs: &EPoly) -> EPoly {
        self.try_add(rhs).expect("EPoly addition across rings")
    }
}

impl Sub for &EPoly {
    type Output = EPoly;
    fn sub(self, rhs: &EPoly) -> EPoly {
        self.try_sub(rhs).expect("EPoly subtraction across rings")
    }
}

impl Mul for &EPoly {
    type Output = EPoly;
    fn mul(self, rhs: &EPoly) -> EPoly {
        self.try_mul(rhs).expect("EPoly multiplication across rings")
    }
}

impl Neg for &EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        let map = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        EPoly::from_map(self.nvars, map)
    }
}

impl Add for EPoly {
    type Output = EPoly;
    fn add(self, rhs: EPoly) -> EPoly {
        &self + &rhs
    }
}

impl Sub for EPoly {
    type Output = EPoly;
    fn sub(self, rhs: EPoly) -> EPoly {
        &self - &rhs
    }
}

impl Mul for EPoly {
    type Output = EPoly;
    fn mul(self, rhs: EPoly) -> EPoly {
        &self * &rhs
    }
}

impl Neg for EPoly {
    type Output = EPoly;
    fn neg(self) -> EPoly {
        -&self
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_epoly(self, &Vars::standard(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{int, rat};

    fn vars() -> Vars {
        Vars::standard(2)
    }

    fn p(s: &str) -> EPoly {
        parse_epoly(s, &vars()).unwrap()
    }

    #[test]
    fn additive_inverse() {
        assert!((&p("x") + &p("-x")).is_zero());
    }

    #[test]
    fn half_exponents_merge() {
        let a = p("E(x/2) - 1");
        let b = p("E(x/2) + 1");
        assert_eq!(&a * &b, p("E(x) - 1"));
    }

    #[test]
    fn nine_term_product() {
        let v = Vars::standard(1);
        let l = parse_epoly("E(b0*x) + E(b1*x) + E(b2*x)", &v).unwrap();
        let r = parse_epoly("E(b3*x) + E(b4*x) + E(b5*x)", &v).unwrap();
        let prod = &l * &r;
        assert_eq!(prod.num_terms(), 9);
        let mut expect = EPoly::zero(1);
        let x = EPoly::var(1, 0);
        for i in 0..3 {
            for j in 3..6 {
                let arg = &(&EPoly::bsym(1, i) + &EPoly::bsym(1, j)) * &x;
                expect = &expect + &arg.exp_apply();
            }
        }
        assert_eq!(prod, expect);
    }

    #[test]
    fn exp_apply_examples() {
        assert!(EPoly::zero(2).exp_apply().is_one());
        assert_eq!(p("x + 3").exp_apply(), p("E(x)"));
        let h = p("x/2").exp_apply();
        assert_eq!(&h * &h, p("x").exp_apply());
    }

    #[test]
    fn split_constant_examples() {
        let (c, a) = p("5").split_constant();
        assert_eq!(c.as_rational(), Some(int(5)));
        assert!(a.is_zero());
        let (c, a) = p("2*x + E(y) + 7").split_constant();
        assert_eq!(c.as_rational(), Some(int(7)));
        assert_eq!(a, p("2*x + E(y)"));
        let (c, a) = p("b0*x").split_constant();
        assert!(c.is_zero());
        assert_eq!(a, p("b0*x"));
    }

    #[test]
    fn heights() {
        assert_eq!(p("x^2 + 1").height(), 0);
        assert_eq!(p("E(x)").height(), 1);
        assert_eq!(p("E(x*E(x))").height(), 2);
        assert_eq!(p("E(E(E(x*y)))").height(), 3);
    }

    #[test]
    fn equality_examples() {
        assert!(p("E(x)*E(-x)").is_one());
        assert_eq!(p("E(x+y)"), &p("E(x)") * &p("E(y)"));
        assert_ne!(p("E(x)"), p("1 + x"));
    }

    #[test]
    fn constants_are_stripped_from_arguments() {
        assert_eq!(p("E(x + 5)"), p("E(x)"));
        assert!(p("E(7)").is_one());
        assert_eq!(p("E(E(x) + 1)"), p("E(E(x))"));
    }

    #[test]
    fn mismatched_arity_is_an_error() {
        let a = EPoly::var(1, 0);
        let b = EPoly::var(2, 0);
        assert_eq!(
            a.try_add(&b),
            Err(Error::VarMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn validator_accepts_normalized_values() {
        for s in ["0", "E(x*E(y)) - x", "b0*E(b1*x/3) + x^3*y", "E(-x)*E(x/2)"] {
            p(s).validate().unwrap();
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = p("E(x) + x - 1");
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert!(a.pow(0).is_one());
        assert_eq!(p("2").pow(10).as_rational(), Some(int(1024)));
        assert_eq!(p("1/2").scale(&rat(2, 3)).as_rational(), Some(rat(1, 3)));
    }
}
