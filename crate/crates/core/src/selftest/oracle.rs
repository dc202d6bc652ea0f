//! Degree-bounded linear algebra: for homogeneous generators, `f` of
//! degree `d` lies in the ideal iff it is a rational combination of the
//! products `m * g` of degree exactly `d`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::base::Rational;
use crate::laurent::{LMono, LaurentPoly};

/// Exponent vectors of degree `d` in `n` variables.
pub(crate) fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Row-echelon rows keyed by pivot column.
struct Echelon {
    rows: BTreeMap<usize, Vec<Rational>>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (&p, row) in &self.rows {
            if !v[p].is_zero() {
                let f = v[p].clone() / &row[p];
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) {
        let v = self.reduce(v);
        if let Some(p) = v.iter().position(|a| !a.is_zero()) {
            // keep earlier rows reduced at the new pivot
            for row in self.rows.values_mut() {
                if !row[p].is_zero() {
                    let f = row[p].clone() / &v[p];
                    for (a, b) in row.iter_mut().zip(&v) {
                        *a -= &f * b;
                    }
                }
            }
            self.rows.insert(p, v);
        }
    }
}

fn vector(f: &LaurentPoly, index: &BTreeMap<Vec<u32>, usize>) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); index.len()];
    for (m, c) in f.terms() {
        v[*index.get(&m.x)?] = c.clone();
    }
    Some(v)
}

/// Membership of a homogeneous `f` of degree `d` in the ideal of the
/// homogeneous `gens`, all in `Q[x]` (no Laurent variables).
pub(crate) fn in_ideal_homogeneous(f: &LaurentPoly, gens: &[LaurentPoly], d: u32) -> bool {
    if f.is_zero() {
        return true;
    }
    let n = f.nx();
    let monos = monomials(n, d);
    let index: BTreeMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon { rows: BTreeMap::new() };
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let gd: u32 = g.terms().next().map_or(0, |(m, _)| m.x.iter().sum());
        if gd > d {
            continue;
        }
        for m in monomials(n, d - gd) {
            let shifted = g.mul(&LaurentPoly::monomial(n, 0, LMono { x: m, u: vec![] }, Rational::from_integer(1.into())));
            if let Some(v) = vector(&shifted, &index) {
                ech.insert(v);
            }
        }
    }
    match vector(f, &index) {
        Some(v) => ech.reduce(v).iter().all(Zero::is_zero),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::int;

    fn poly(terms: &[(&[u32], i64)]) -> LaurentPoly {
        let mut f = LaurentPoly::zero(terms[0].0.len(), 0);
        for (x, c) in terms {
            f.add_term(LMono { x: x.to_vec(), u: vec![] }, int(*c));
        }
        f
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(2, 4).len(), 5);
        assert_eq!(monomials(1, 0), vec![vec![0]]);
    }

    #[test]
    fn hand_checked_memberships() {
        // (x^2, y^2) contains x^2*y + y^3 but not x*y
        let g = [poly(&[(&[2, 0], 1)]), poly(&[(&[0, 2], 1)])];
        assert!(in_ideal_homogeneous(&poly(&[(&[2, 1], 1), (&[0, 3], 1)]), &g, 3));
        assert!(!in_ideal_homogeneous(&poly(&[(&[1, 1], 1)]), &g, 2));
        // (x - y) contains x^2 - y^2
        let g = [poly(&[(&[1, 0], 1), (&[0, 1], -1)])];
        assert!(in_ideal_homogeneous(&poly(&[(&[2, 0], 1), (&[0, 2], -1)]), &g, 2));
        assert!(!in_ideal_homogeneous(&poly(&[(&[2, 0], 1), (&[0, 2], 1)]), &g, 2));
    }
}
