//! Ideal membership in Laurent rings `Q[x, u^±1]`.
//!
//! A Laurent ring is presented as `Q[x, u, w] / (w*u1*...*ur - 1)`: a
//! monomial `u^k` with negative entries becomes `w^m * u^(k + m)` where `m`
//! is the largest negative exponent in absolute value. Membership of `f`
//! in the Laurent ideal generated by `gens` is then ordinary membership of
//! its image in the polynomial ideal generated by the images of `gens` and
//! the localization relation.

use super::groebner::{Budget, GroebnerBasis, MonomialOrder, Poly};
use super::poly::{LMono, LaurentPoly};
use crate::base::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipOptions {
    pub order: MonomialOrder,
    pub budget: Budget,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            order: MonomialOrder::GrevLex,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// `query = sum multiplier * gens[index]` exactly.
    In { cofactors: Vec<(usize, LaurentPoly)> },
    NotIn { normal_form: LaurentPoly },
}

impl MembershipVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, MembershipVerdict::In { .. })
    }
}

/// Variable layout `(x1..xn, u1..ur, w)`; `w` is present only when `r > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    pub nx: usize,
    pub nu: usize,
}

impl LaurentRing {
    pub fn has_inverse(&self) -> bool {
        self.nu > 0
    }

    pub fn poly_vars(&self) -> usize {
        self.nx + self.nu + usize::from(self.has_inverse())
    }

    pub fn to_poly(&self, f: &LaurentPoly, ord: MonomialOrder) -> Poly {
        let terms = f
            .terms()
            .map(|(m, c)| {
                let shift = m.u.iter().map(|&e| (-e).max(0)).max().unwrap_or(0);
                let mut mono: Vec<u32> = m.x.clone();
                mono.extend(m.u.iter().map(|&e| (e + shift) as u32));
                if self.has_inverse() {
                    mono.push(shift as u32);
                }
                (mono, c.clone())
            })
            .collect();
        Poly::from_terms(terms, ord)
    }

    /// Image in the Laurent ring, substituting `w = (u1...ur)^-1`.
    pub fn from_poly(&self, p: &Poly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nx, self.nu);
        for (mono, c) in &p.terms {
            let w = if self.has_inverse() {
                mono[self.nx + self.nu] as i64
            } else {
                0
            };
            let m = LMono {
                x: mono[..self.nx].to_vec(),
                u: mono[self.nx..self.nx + self.nu]
                    .iter()
                    .map(|&e| e as i64 - w)
                    .collect(),
            };
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn localization_relation(&self, ord: MonomialOrder) -> Poly {
        let n = self.poly_vars();
        let mut mono = vec![0u32; n];
        for e in &mut mono[self.nx..] {
            *e = 1;
        }
        Poly::from_terms(
            vec![(mono, Rational::from_integer(1.into())), (vec![0; n], Rational::from_integer((-1).into()))],
            ord,
        )
    }
}

fn ring_of(f: Option<&LaurentPoly>, gens: &[LaurentPoly]) -> Result<LaurentRing> {
    let first = f.or(gens.first());
    let Some(first) = first else {
        return Ok(LaurentRing { nx: 0, nu: 0 });
    };
    let ring = LaurentRing {
        nx: first.nx(),
        nu: first.nu(),
    };
    for g in gens.iter().chain(f) {
        if g.nx() != ring.nx || g.nu() != ring.nu {
            return Err(Error::Arity(format!(
                "Laurent polynomials over ({}, {}) and ({}, {}) variables",
                ring.nx,
                ring.nu,
                g.nx(),
                g.nu()
            )));
        }
    }
    Ok(ring)
}

/// A Gröbner basis of a Laurent ideal, kept in the polynomial presentation.
#[derive(Clone, Debug)]
pub struct LaurentBasis {
    ring: LaurentRing,
    gb: GroebnerBasis,
    ngens: usize,
}

impl LaurentBasis {
    pub fn ring(&self) -> LaurentRing {
        self.ring
    }

    /// Basis elements in `Q[x, u, w]`.
    pub fn polys(&self) -> &[Poly] {
        self.gb.polys()
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gb.is_unit_ideal()
    }

    pub fn normal_form(&self, f: &LaurentPoly) -> Poly {
        self.gb.normal_form(&self.ring.to_poly(f, self.gb.order()))
    }

    pub fn reduces_to_zero(&self, f: &LaurentPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Decides membership; cofactors are available when the basis was
    /// computed with tracking.
    pub fn decide(&self, f: &LaurentPoly) -> MembershipVerdict {
        let (r, cof) = self.gb.reduce(&self.ring.to_poly(f, self.gb.order()));
        if !r.is_zero() {
            return MembershipVerdict::NotIn {
                normal_form: self.ring.from_poly(&r),
            };
        }
        let cofactors = cof
            .map(|cof| {
                cof.iter()
                    .take(self.ngens)
                    .enumerate()
                    .map(|(i, c)| (i, self.ring.from_poly(c)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .unwrap_or_default();
        MembershipVerdict::In { cofactors }
    }
}

fn basis(gens: &[LaurentPoly], ring: LaurentRing, opts: MembershipOptions, track: bool) -> Result<LaurentBasis> {
    let ord = opts.order;
    let mut polys: Vec<Poly> = gens.iter().map(|g| ring.to_poly(g, ord)).collect();
    if ring.has_inverse() {
        polys.push(ring.localization_relation(ord));
    }
    let gb = GroebnerBasis::compute(&polys, ring.poly_vars(), ord, track, opts.budget)?;
    Ok(LaurentBasis {
        ring,
        gb,
        ngens: gens.len(),
    })
}

/// Gröbner basis of the Laurent ideal generated by `gens` (zero generators
/// are dropped), together with the localization relation.
pub fn buchberger(gens: &[LaurentPoly], opts: MembershipOptions) -> Result<LaurentBasis> {
    let ring = ring_of(None, gens)?;
    basis(gens, ring, opts, false)
}

pub fn buchberger_in(ring: LaurentRing, gens: &[LaurentPoly], opts: MembershipOptions, track: bool) -> Result<LaurentBasis> {
    ring_of(None, gens)?;
    basis(gens, ring, opts, track)
}

/// Exact membership of `f` in the Laurent ideal generated by `gens`.
pub fn laurent_membership(f: &LaurentPoly, gens: &[LaurentPoly], opts: MembershipOptions) -> Result<MembershipVerdict> {
    let ring = ring_of(Some(f), gens)?;
    if f.is_zero() {
        return Ok(MembershipVerdict::In { cofactors: vec![] });
    }
    Ok(basis(gens, ring, opts, true)?.decide(f))
}

/// Generators of the elimination ideal `I ∩ Q[x]` where `I` is generated
/// by `gens` in `Q[x, y]` (the `u` block of each Laurent polynomial holds
/// the `y` variables, with non-negative exponents). The generators form a
/// Gröbner basis of the elimination ideal under grevlex in `x`.
pub fn eliminate_linear(gens: &[LaurentPoly], budget: Budget) -> Result<Vec<LaurentPoly>> {
    let ring = ring_of(None, gens)?;
    let (nx, ny) = (ring.nx, ring.nu);
    let ord = MonomialOrder::Block(ny);
    let mut polys = Vec::new();
    for g in gens {
        let mut terms = Vec::new();
        for (m, c) in g.terms() {
            if m.u.iter().any(|&e| e < 0) {
                return Err(Error::Arity(
                    "elimination needs polynomial (non-negative) y exponents".into(),
                ));
            }
            let mut mono: Vec<u32> = m.u.iter().map(|&e| e as u32).collect();
            mono.extend(&m.x);
            terms.push((mono, c.clone()));
        }
        polys.push(Poly::from_terms(terms, ord));
    }
    let gb = GroebnerBasis::compute(&polys, nx + ny, ord, false, budget)?;
    let out = gb
        .polys()
        .iter()
        .filter(|p| p.terms.iter().all(|(m, _)| m[..ny].iter().all(|&e| e == 0)))
        .map(|p| {
            let mut f = LaurentPoly::zero(nx, ny);
            for (m, c) in &p.terms {
                f.add_term(
                    LMono {
                        x: m[ny..].to_vec(),
                        u: vec![0; ny],
                    },
                    c.clone(),
                );
            }
            f
        })
        .collect();
    Ok(out)
}

/// Total degree in the `x` block.
pub fn x_degree(f: &LaurentPoly) -> u64 {
    f.terms()
        .map(|(m, _)| m.x.iter().map(|&e| e as u64).sum::<u64>())
        .max()
        .unwrap_or(0)
}

pub fn evaluate_at_point(f: &LaurentPoly, xs: &[Rational], us: &[Rational]) -> Result<Rational> {
    f.evaluate(xs, us)
}

/// Replays an `In` verdict: `sum c_i * gens[i] - query`.
pub fn replay_residual(query: &LaurentPoly, gens: &[LaurentPoly], cofactors: &[(usize, LaurentPoly)]) -> LaurentPoly {
    let mut acc = query.neg();
    for (i, c) in cofactors {
        acc = acc.add(&c.mul(&gens[*i]));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::base::{int, Rational};
    use crate::laurent::poly::point;
    use num_traits::One;

    fn u(nu: usize, k: usize) -> LaurentPoly {
        LaurentPoly::u_var(0, nu, k)
    }

    fn c(nx: usize, nu: usize, v: i64) -> LaurentPoly {
        LaurentPoly::constant(nx, nu, int(v))
    }

    #[test]
    fn square_minus_one_does_not_contain_u_minus_one() {
        let sq = u(1, 0).mul(&u(1, 0)).sub(&c(0, 1, 1));
        let b = buchberger(&[sq.clone()], MembershipOptions::default()).unwrap();
        assert!(b.reduces_to_zero(&sq));
        let ring = b.ring();
        assert!(b
            .groebner()
            .normal_form(&ring.localization_relation(MonomialOrder::GrevLex))
            .is_zero());
        assert!(!b.reduces_to_zero(&u(1, 0).sub(&c(0, 1, 1))));
        // Oracle: u = -1 kills the generator but not u - 1.
        assert!(sq.evaluate(&[], &point(&[-1])).unwrap().is_zero());
    }

    #[test]
    fn zero_generator_leaves_only_the_relation() {
        let b = buchberger(&[LaurentPoly::zero(0, 2)], MembershipOptions::default()).unwrap();
        assert_eq!(b.polys().len(), 1);
        assert_eq!(b.polys()[0].total_degree(), 3);
    }

    #[test]
    fn chain_pair_is_separated() {
        let p1 = u(6, 0).add(&u(6, 1)).add(&u(6, 2));
        let p2 = u(6, 3).add(&u(6, 4)).add(&u(6, 5));
        let v = laurent_membership(&p2, &[p1.clone()], MembershipOptions::default()).unwrap();
        assert!(!v.is_in());
        let pt = point(&[1, 1, -2, 1, 1, 1]);
        assert!(p1.evaluate(&[], &pt).unwrap().is_zero());
        assert_eq!(p2.evaluate(&[], &pt).unwrap(), int(3));
    }

    #[test]
    fn factor_cofactor() {
        let one = c(0, 1, 1);
        let f = u(1, 0).mul(&u(1, 0)).sub(&one);
        let g = u(1, 0).sub(&one);
        match laurent_membership(&f, &[g.clone()], MembershipOptions::default()).unwrap() {
            MembershipVerdict::In { cofactors } => {
                assert_eq!(cofactors.len(), 1);
                assert_eq!(cofactors[0].1, u(1, 0).add(&one));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn units_are_invertible() {
        // x = u^-1 * (x*u)
        let xu = LaurentPoly::x_var(1, 1, 0).mul(&LaurentPoly::u_var(1, 1, 0));
        let x = LaurentPoly::x_var(1, 1, 0);
        let v = laurent_membership(&x, &[xu.clone()], MembershipOptions::default()).unwrap();
        match v {
            MembershipVerdict::In { cofactors } => {
                assert!(replay_residual(&x, &[xu], &cofactors).is_zero());
                assert_eq!(cofactors[0].1, LaurentPoly::u_power(1, 1, 0, -1));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn xy_stage_zero_non_membership() {
        // f = x*u - x with u = E(y); gens {x*y} in Q[x, y, u^±1].
        let x = LaurentPoly::x_var(2, 1, 0);
        let y = LaurentPoly::x_var(2, 1, 1);
        let uu = LaurentPoly::u_var(2, 1, 0);
        let f = x.mul(&uu).sub(&x);
        let v = laurent_membership(&f, &[x.mul(&y)], MembershipOptions::default()).unwrap();
        assert!(!v.is_in());
    }

    #[test]
    fn elimination_examples() {
        // y1 - 1, x1 + y1 - 3  ->  x1 - 2
        let x = LaurentPoly::x_var(1, 1, 0);
        let y = LaurentPoly::u_var(1, 1, 0);
        let g1 = y.sub(&c(1, 1, 1));
        let g2 = x.add(&y).sub(&c(1, 1, 3));
        let e = eliminate_linear(&[g1, g2], Budget::default()).unwrap();
        assert_eq!(e, vec![x.sub(&c(1, 1, 2))]);
        // y1 - x1^2 has zero elimination ideal.
        let e = eliminate_linear(&[y.sub(&x.mul(&x))], Budget::default()).unwrap();
        assert!(e.is_empty());
        assert!(eliminate_linear(&[], Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn evaluation_rejects_zero_unit() {
        let f = u(1, 0);
        assert!(matches!(
            evaluate_at_point(&f, &[], &[Rational::zero()]),
            Err(Error::ZeroUnitCoordinate(0))
        ));
        assert_eq!(evaluate_at_point(&f, &[], &[Rational::one()]).unwrap(), int(1));
    }
}
