use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::base::{fmt_rational, Rational};
use crate::error::{Error, Result};

/// Monomial `x^x * u^u` with non-negative `x` and integer `u` exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LMono {
    pub x: Vec<u32>,
    pub u: Vec<i64>,
}

impl LMono {
    pub fn one(nx: usize, nu: usize) -> Self {
        LMono {
            x: vec![0; nx],
            u: vec![0; nu],
        }
    }

    pub fn mul(&self, other: &LMono) -> LMono {
        LMono {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Element of `Q[x1..xn, u1^±1..ur^±1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nx: usize,
    nu: usize,
    terms: BTreeMap<LMono, Rational>,
}

impl LaurentPoly {
    pub fn zero(nx: usize, nu: usize) -> Self {
        LaurentPoly {
            nx,
            nu,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nx: usize, nu: usize, c: Rational) -> Self {
        let mut p = Self::zero(nx, nu);
        p.add_term(LMono::one(nx, nu), c);
        p
    }

    pub fn monomial(nx: usize, nu: usize, m: LMono, c: Rational) -> Self {
        let mut p = Self::zero(nx, nu);
        p.add_term(m, c);
        p
    }

    pub fn x_var(nx: usize, nu: usize, i: usize) -> Self {
        let mut m = LMono::one(nx, nu);
        m.x[i] = 1;
        Self::monomial(nx, nu, m, Rational::one())
    }

    pub fn u_var(nx: usize, nu: usize, k: usize) -> Self {
        Self::u_power(nx, nu, k, 1)
    }

    pub fn u_power(nx: usize, nu: usize, k: usize, e: i64) -> Self {
        let mut m = LMono::one(nx, nu);
        m.u[k] = e;
        Self::monomial(nx, nu, m, Rational::one())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LMono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.x.iter().all(|&e| e == 0) && m.u.iter().all(|&e| e == 0)).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: LMono, c: Rational) {
        debug_assert_eq!(m.x.len(), self.nx);
        debug_assert_eq!(m.u.len(), self.nu);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            nx: self.nx,
            nu: self.nu,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nx, self.nu);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nx, self.nu);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * r);
        }
        out
    }

    /// Exact value at a point; `us` must be nonzero.
    pub fn evaluate(&self, xs: &[Rational], us: &[Rational]) -> Result<Rational> {
        if xs.len() != self.nx || us.len() != self.nu {
            return Err(Error::Arity(format!(
                "point has {}+{} coordinates, polynomial needs {}+{}",
                xs.len(),
                us.len(),
                self.nx,
                self.nu
            )));
        }
        if let Some(k) = us.iter().position(Zero::is_zero) {
            return Err(Error::ZeroUnitCoordinate(k));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in xs.iter().zip(&m.x) {
                t *= pow_rational(v, e as i64);
            }
            for (v, &e) in us.iter().zip(&m.u) {
                t *= pow_rational(v, e);
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn pow_rational(v: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let base = if e < 0 { v.recip() } else { v.clone() };
    let n = e.unsigned_abs();
    let num = num_traits::pow::pow(base.numer().clone(), n as usize);
    let den = num_traits::pow::pow(base.denom().clone(), n as usize);
    Rational::new(num, den)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
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
            let trivial = m.x.iter().all(|&e| e == 0) && m.u.iter().all(|&e| e == 0);
            if !a.is_one() || trivial {
                parts.push(fmt_rational(&a));
            }
            for (i, &e) in m.x.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("x{i}")),
                    _ => parts.push(format!("x{i}^{e}")),
                }
            }
            for (k, &e) in m.u.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("u{k}")),
                    _ => parts.push(format!("u{k}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Rational point helper for tests and experiments.
pub fn point(values: &[i64]) -> Vec<Rational> {
    values
        .iter()
        .map(|&v| Rational::from_integer(BigInt::from(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let u = LaurentPoly::u_var(0, 1, 0);
        let one = LaurentPoly::constant(0, 1, Rational::one());
        let sq = u.mul(&u).sub(&one);
        assert!(sq.evaluate(&[], &point(&[-1])).unwrap().is_zero());
        assert_eq!(
            u.sub(&one).evaluate(&[], &point(&[-1])).unwrap(),
            Rational::from_integer((-2).into())
        );
        assert_eq!(
            u.evaluate(&[], &point(&[0])),
            Err(Error::ZeroUnitCoordinate(0))
        );
        let inv = LaurentPoly::u_power(0, 1, 0, -2);
        assert_eq!(
            inv.evaluate(&[], &point(&[2])).unwrap(),
            crate::base::rat(1, 4)
        );
    }

    #[test]
    fn chain_element_value() {
        // p2 = u3 + u4 + u5 at the point (1, 1, -2, 1, 1, 1) is 3.
        let mut p2 = LaurentPoly::zero(0, 6);
        for k in 3..6 {
            p2 = p2.add(&LaurentPoly::u_var(0, 6, k));
        }
        let v = p2.evaluate(&[], &point(&[1, 1, -2, 1, 1, 1])).unwrap();
        assert_eq!(v, Rational::from_integer(3.into()));
    }
}
