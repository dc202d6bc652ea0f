//! The formal base ring `K = Q[b0, b1, ...]`.
//!
//! Elements of `K` are the coefficients of exponential polynomials. The
//! symbols `b_j` are algebraically independent transcendentals; the base
//! exponential is the trivial map `E_K(c) = 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector of a monomial in the `b` symbols. Trailing zeros are
/// trimmed so that equal monomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BExp(Vec<u32>);

impl BExp {
    pub fn one() -> Self {
        BExp(Vec::new())
    }

    pub fn symbol(j: usize) -> Self {
        let mut v = vec![0; j + 1];
        v[j] = 1;
        BExp(v)
    }

    pub fn from_vec(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        BExp(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &BExp) -> BExp {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        BExp(v)
    }
}

// Graded lexicographic: total degree first, then b0 > b1 > ...
impl Ord for BExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over the rationals in the symbols `b_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BaseCoeff {
    terms: BTreeMap<BExp, Rational>,
}

impl BaseCoeff {
    pub fn zero() -> Self {
        BaseCoeff::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(BExp::one(), r);
        }
        BaseCoeff { terms }
    }

    pub fn symbol(j: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(BExp::symbol(j), Rational::one());
        BaseCoeff { terms }
    }

    pub fn monomial(e: BExp, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        BaseCoeff { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The value as a plain rational, if no `b` symbol occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BExp::one()).cloned(),
            _ => None,
        }
    }

    /// Terms in ascending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BExp, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: BExp, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &BaseCoeff) -> BaseCoeff {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> BaseCoeff {
        BaseCoeff {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &BaseCoeff) -> BaseCoeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BaseCoeff) -> BaseCoeff {
        let mut out = BaseCoeff::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> BaseCoeff {
        if r.is_zero() {
            return BaseCoeff::zero();
        }
        BaseCoeff {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    /// Sign of the leading (largest) term; used when printing.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.values().next_back().is_some_and(|c| c.is_negative())
    }
}

impl Ord for BaseCoeff {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ea, ca)), Some((eb, cb))) => {
                    let o = ea.cmp(eb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl PartialOrd for BaseCoeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for BaseCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.numer().is_one() || e.is_one() {
                parts.push(a.numer().to_string());
            }
            for (j, &k) in e.exponents().iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("b{j}")),
                    _ => parts.push(format!("b{j}^{k}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
            if !a.denom().is_one() {
                write!(f, "/{}", a.denom())?;
            }
        }
        Ok(())
    }
}
